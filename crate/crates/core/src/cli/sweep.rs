use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use super::config::ScenarioConfig;
use super::run::run_scenario;
use super::{fmt_real, CliError};
use crate::environment::BathSpec;
use crate::molecule::Trajectory;
use crate::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParameter {
    Tau,
    Gamma,
    S,
    Kappa,
    Beta,
}

impl FromStr for SweepParameter {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "tau" => SweepParameter::Tau,
            "gamma" => SweepParameter::Gamma,
            "s" => SweepParameter::S,
            "kappa" => SweepParameter::Kappa,
            "beta" => SweepParameter::Beta,
            _ => {
                return Err(CliError::Config(format!(
                    "sweep parameter must be one of tau, gamma, s, kappa, beta; got {s:?}"
                )))
            }
        })
    }
}

/// Parameter and the values it takes. Parsed from `param=v1,v2,...` or
/// `param=log:start:stop:n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<Real>,
}

impl FromStr for SweepSpec {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = |m: String| CliError::Config(format!("sweep {s:?}: {m}"));
        let (param, spec) = s
            .split_once('=')
            .ok_or_else(|| bad("expected <param>=<values>".into()))?;
        let parameter = param.trim().parse()?;
        let num = |v: &str| {
            v.trim()
                .parse::<Real>()
                .map_err(|_| bad(format!("not a number: {v:?}")))
        };
        let values = if let Some(range) = spec.strip_prefix("log:") {
            let parts: Vec<&str> = range.split(':').collect();
            if parts.len() != 3 {
                return Err(bad("log range must be log:start:stop:n".into()));
            }
            let (a, b) = (num(parts[0])?, num(parts[1])?);
            let n: usize = parts[2]
                .trim()
                .parse()
                .map_err(|_| bad(format!("bad point count {:?}", parts[2])))?;
            if !(a > 0.0 && b > 0.0) || n == 0 {
                return Err(bad("log range needs positive bounds and n >= 1".into()));
            }
            log_space(a, b, n)
        } else {
            spec.split(',').map(num).collect::<Result<_, _>>()?
        };
        if values.is_empty() {
            return Err(bad("no values".into()));
        }
        Ok(SweepSpec { parameter, values })
    }
}

fn log_space(a: Real, b: Real, n: usize) -> Vec<Real> {
    if n == 1 {
        return vec![a];
    }
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|k| match k {
            0 => a,
            k if k == n - 1 => b,
            k => (la + (lb - la) * k as Real / (n - 1) as Real).exp(),
        })
        .collect()
}

/// Returns `cfg` with the swept parameter set to `value`.
pub fn with_parameter(
    cfg: &ScenarioConfig,
    parameter: SweepParameter,
    value: Real,
) -> Result<ScenarioConfig, CliError> {
    let mut c = cfg.clone();
    let mismatch = |what: &str| {
        CliError::Config(format!("sweep parameter {parameter:?} needs {what}"))
    };
    match (parameter, &mut c.trajectory, &mut c.bath) {
        (SweepParameter::Tau, Trajectory::Harmonic { period, .. }, _) => *period = value,
        (SweepParameter::Tau, _, _) => return Err(mismatch("a harmonic trajectory")),
        (SweepParameter::Gamma, _, BathSpec::SpinGas(g)) => g.gamma = value,
        (SweepParameter::S, _, BathSpec::SpinGas(g)) => g.s = value,
        (SweepParameter::Gamma | SweepParameter::S, _, _) => return Err(mismatch("a spin-gas bath")),
        (SweepParameter::Kappa, _, BathSpec::Bosonic(b)) => b.kappa = value,
        (SweepParameter::Beta, _, BathSpec::Bosonic(b)) => b.beta = value,
        (SweepParameter::Kappa | SweepParameter::Beta, _, _) => {
            return Err(mismatch("a bosonic bath"))
        }
    }
    c.validate()?;
    Ok(c)
}

/// One sweep point; `error` is set when the run failed.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub value: Real,
    /// Maximum concurrence on the asymptotic cycle.
    pub c_m: Real,
    pub converged: bool,
    pub n_cycles: usize,
    pub residual: Real,
    pub error: Option<String>,
}

fn thread_count() -> Option<usize> {
    std::env::var("SIM_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Runs one scenario per value, concurrently, and returns the points sorted
/// by value. Invalid sweep specs fail up front; per-point failures are
/// recorded in the point and the sweep continues.
pub fn run_sweep(cfg: &ScenarioConfig, sweep: &SweepSpec) -> Result<Vec<SweepPoint>, CliError> {
    let configs = sweep
        .values
        .iter()
        .map(|&v| with_parameter(cfg, sweep.parameter, v).map(|c| (v, c)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count() {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Numerical(format!("cannot start worker pool: {e}")))?;
    let mut points: Vec<SweepPoint> = pool.install(|| {
        configs
            .par_iter()
            .map(|(value, c)| match run_scenario(c) {
                Ok(run) => SweepPoint {
                    value: *value,
                    c_m: run.summary.c_max,
                    converged: run.summary.converged,
                    n_cycles: run.summary.n_cycles,
                    residual: run.summary.residual,
                    error: None,
                },
                Err(e) => SweepPoint {
                    value: *value,
                    c_m: Real::NAN,
                    converged: false,
                    n_cycles: 0,
                    residual: Real::NAN,
                    error: Some(e.to_string()),
                },
            })
            .collect()
    });
    points.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(points)
}

pub fn write_sweep_csv(
    out: &mut impl Write,
    parameter: SweepParameter,
    points: &[SweepPoint],
) -> std::io::Result<()> {
    let name = match parameter {
        SweepParameter::Tau => "tau",
        SweepParameter::Gamma => "gamma",
        SweepParameter::S => "s",
        SweepParameter::Kappa => "kappa",
        SweepParameter::Beta => "beta",
    };
    writeln!(out, "{}", super::UNITS_LINE)?;
    writeln!(out, "{name},C_m,converged,n_cycles,residual,error")?;
    for p in points {
        let err = p.error.as_deref().unwrap_or("").replace(['"', '\n'], " ");
        writeln!(
            out,
            "{},{},{},{},{},\"{}\"",
            fmt_real(p.value),
            fmt_real(p.c_m),
            p.converged,
            p.n_cycles,
            fmt_real(p.residual),
            err
        )?;
    }
    Ok(())
}
