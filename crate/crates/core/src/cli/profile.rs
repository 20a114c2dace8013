use std::io::Write;

use super::config::ScenarioConfig;
use super::{fmt_real, CliError};
use crate::environment::BathSpec;
use crate::observables::{
    concurrence, critical_s, critical_temperature, static_concurrence, static_steady_state,
};
use crate::Real;

/// Static entanglement at one configuration along the path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileRow {
    pub t: Real,
    pub d: Real,
    pub j: Real,
    pub b: Real,
    /// Concurrence of the thermal (bosonic) or steady (spin-gas) state.
    pub c_static: Real,
    /// Critical temperature (bosonic) or critical excitation `s_c`
    /// (spin gas).
    pub critical: Real,
}

/// Static entanglement over one period, sampled every `output.stride`
/// integration steps.
pub fn static_profile(cfg: &ScenarioConfig) -> Result<Vec<ProfileRow>, CliError> {
    cfg.validate()?;
    let model = cfg.model()?;
    let period = model.period();
    let n = (cfg.integrator.steps_per_period / cfg.output.stride).max(1);
    (0..=n)
        .map(|k| {
            let t = period * k as Real / n as Real;
            let c = model.config_at(t)?;
            let (c_static, critical) = match &cfg.bath {
                BathSpec::Bosonic(b) => (
                    static_concurrence(c.j, c.b, b.beta),
                    critical_temperature(c.j, c.b)?,
                ),
                BathSpec::SpinGas(g) => (
                    concurrence(&static_steady_state(c.j, c.b, &cfg.bath)?)?,
                    critical_s(c.j, c.b, g.gamma)?,
                ),
            };
            Ok(ProfileRow {
                t,
                d: c.d,
                j: c.j,
                b: c.b,
                c_static,
                critical,
            })
        })
        .collect()
}

pub fn write_profile_csv(
    out: &mut impl Write,
    cfg: &ScenarioConfig,
    rows: &[ProfileRow],
) -> std::io::Result<()> {
    let critical = match cfg.bath {
        BathSpec::Bosonic(_) => "T_c",
        BathSpec::SpinGas(_) => "s_c",
    };
    writeln!(out, "{}", super::UNITS_LINE)?;
    writeln!(out, "t,d,J,B,C_static,{critical}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_real(r.t),
            fmt_real(r.d),
            fmt_real(r.j),
            fmt_real(r.b),
            fmt_real(r.c_static),
            fmt_real(r.critical)
        )?;
    }
    Ok(())
}
