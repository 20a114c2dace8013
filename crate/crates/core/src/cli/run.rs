use std::io::Write;

use super::config::ScenarioConfig;
use super::{fmt_real, CliError};
use crate::dynamics::{check_adiabaticity, find_asymptotic_cycle_with, CycleControl, CycleReport};
use crate::molecule::MoleculeModel;
use crate::observables::{observe, static_steady_state, ObservableRecord};
use crate::{CMatrix, Real};

pub const CSV_HEADER: &str = "t,d,J,B,p_g,C,J_h,S,T_spec";
pub const UNITS_LINE: &str = "# hbar=1, k_B=1, thermal units";

/// Concurrence above which a sample counts as entangled in the summary.
const ENTANGLED: Real = 0.01;

/// Digest of a scenario run.
#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub converged: bool,
    pub n_cycles: usize,
    pub residual: Real,
    /// Maximum concurrence over the asymptotic cycle.
    pub c_max: Real,
    /// Maximum concurrence over the first cycle.
    pub c_max_first: Real,
    /// Ground-state population range over the asymptotic cycle.
    pub p_g_min: Real,
    pub p_g_max: Real,
    /// Ground-state population at the start of the asymptotic cycle.
    pub p_g_start: Real,
    /// Smallest finite spectral temperature on the asymptotic cycle.
    pub t_spec_min: Option<Real>,
    /// Share of entangled asymptotic samples (`C > 0.01`) that absorb heat;
    /// `None` when no sample is entangled.
    pub heat_absorbing_fraction: Option<Real>,
    pub adiabaticity: Real,
}

#[derive(Clone, Debug)]
pub struct ScenarioRun {
    /// Every sampled record, all cycles, in time order.
    pub records: Vec<ObservableRecord>,
    pub first_cycle: Vec<ObservableRecord>,
    pub asymptotic_cycle: Vec<ObservableRecord>,
    pub summary: Summary,
}

fn records_for(
    model: &MoleculeModel,
    cfg: &ScenarioConfig,
    states: &[(Real, CMatrix)],
) -> Result<Vec<ObservableRecord>, CliError> {
    states
        .iter()
        .map(|(t, rho)| Ok(observe(&model.config_at(*t)?, &cfg.bath, rho)?))
        .collect()
}

fn max_c(records: &[ObservableRecord]) -> Real {
    records.iter().map(|r| r.concurrence).fold(0.0, Real::max)
}

/// Propagates from the steady state of the initial configuration to the
/// asymptotic cycle, recording observables at the configured stride.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioRun, CliError> {
    cfg.validate()?;
    let model = cfg.model()?;
    let adiabaticity = check_adiabaticity(&model, 200)?;
    let c0 = model.config_at(0.0)?;
    let rho0 = static_steady_state(c0.j, c0.b, &cfg.bath)?;
    let control = CycleControl {
        period: model.period(),
        steps_per_period: cfg.integrator.steps_per_period,
        stride: cfg.output.stride,
        cycle_tol: cfg.integrator.cycle_tol,
        max_cycles: cfg.integrator.max_cycles,
    };
    let mut records = Vec::new();
    let mut failure = None;
    let report: CycleReport = find_asymptotic_cycle_with(&model, &cfg.bath, &rho0, control, |t, rho| {
        if failure.is_some() {
            return;
        }
        match model.config_at(t).and_then(|c| observe(&c, &cfg.bath, rho)) {
            Ok(r) => records.push(r),
            Err(e) => failure = Some(e),
        }
    })?;
    if let Some(e) = failure {
        return Err(e.into());
    }
    let first_cycle = records_for(&model, cfg, &report.first_cycle_states)?;
    let asymptotic_cycle = records_for(&model, cfg, &report.cycle_states)?;

    let pops: Vec<Real> = asymptotic_cycle.iter().filter_map(|r| r.p_g).collect();
    let entangled: Vec<&ObservableRecord> = asymptotic_cycle
        .iter()
        .filter(|r| r.concurrence > ENTANGLED)
        .collect();
    let summary = Summary {
        converged: report.converged,
        n_cycles: report.n_cycles,
        residual: report.residual,
        c_max: max_c(&asymptotic_cycle),
        c_max_first: max_c(&first_cycle),
        p_g_min: pops.iter().copied().fold(Real::INFINITY, Real::min),
        p_g_max: pops.iter().copied().fold(Real::NEG_INFINITY, Real::max),
        p_g_start: asymptotic_cycle[0].p_g.unwrap_or(Real::NAN),
        t_spec_min: asymptotic_cycle
            .iter()
            .filter_map(|r| r.spectral_temperature)
            .filter(|t| t.is_finite())
            .reduce(Real::min),
        heat_absorbing_fraction: (!entangled.is_empty()).then(|| {
            entangled.iter().filter(|r| r.heat_current > 0.0).count() as Real
                / entangled.len() as Real
        }),
        adiabaticity,
    };
    Ok(ScenarioRun {
        records,
        first_cycle,
        asymptotic_cycle,
        summary,
    })
}

fn opt(x: Option<Real>) -> String {
    x.map(fmt_real).unwrap_or_default()
}

/// Writes the units line, header, one row per record and the `#` summary
/// block.
pub fn write_csv(out: &mut impl Write, run: &ScenarioRun) -> std::io::Result<()> {
    writeln!(out, "{UNITS_LINE}")?;
    writeln!(out, "{CSV_HEADER}")?;
    for r in &run.records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            fmt_real(r.t),
            fmt_real(r.d),
            fmt_real(r.j),
            fmt_real(r.b),
            opt(r.p_g),
            fmt_real(r.concurrence),
            fmt_real(r.heat_current),
            fmt_real(r.entropy),
            opt(r.spectral_temperature),
        )?;
    }
    let s = &run.summary;
    writeln!(out, "# summary")?;
    writeln!(out, "# converged={}", s.converged)?;
    writeln!(out, "# n_cycles={}", s.n_cycles)?;
    writeln!(out, "# cycle_residual={}", fmt_real(s.residual))?;
    writeln!(out, "# C_max={}", fmt_real(s.c_max))?;
    writeln!(out, "# C_max_first_cycle={}", fmt_real(s.c_max_first))?;
    writeln!(out, "# p_g_min={}", fmt_real(s.p_g_min))?;
    writeln!(out, "# p_g_max={}", fmt_real(s.p_g_max))?;
    writeln!(out, "# p_g_cycle_start={}", fmt_real(s.p_g_start))?;
    writeln!(out, "# T_spec_min={}", opt(s.t_spec_min))?;
    writeln!(out, "# heat_absorbing_fraction={}", opt(s.heat_absorbing_fraction))?;
    writeln!(out, "# adiabaticity_ratio={}", fmt_real(s.adiabaticity))?;
    Ok(())
}
