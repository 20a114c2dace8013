//! Classical motion of the two spins and the Hamiltonian it induces.
//!
//! The field at time `t` is `B = B0 - B1 exp(-x1(t)^2 / sigma)`, with
//! `sigma` carrying units of length squared (the exponent is `x^2 / sigma`,
//! not `x^2 / sigma^2`). A single `B` multiplies both local `σz` terms, so
//! only trajectories with `x1 = -x2` are accepted; for those, evaluating the
//! field at either spin gives the same value. The coupling is dipolar,
//! `J = J0 / d^3`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{CMatrix, Real, C64};

/// Position dependence of the local field and of the spin-spin coupling.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldProfile {
    pub b0: Real,
    pub b1: Real,
    /// Gaussian width, in length².
    pub sigma: Real,
    /// Dipolar strength, in energy · length³.
    pub j0: Real,
}

impl FieldProfile {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0) {
            return Err(Error::Input(format!("sigma must be positive, got {}", self.sigma)));
        }
        if self.j0 == 0.0 || !self.j0.is_finite() {
            return Err(Error::Input(format!("j0 must be finite and nonzero, got {}", self.j0)));
        }
        if !self.b0.is_finite() || !self.b1.is_finite() {
            return Err(Error::Input("b0 and b1 must be finite".into()));
        }
        Ok(())
    }

    pub fn field(&self, x: Real) -> Real {
        self.b0 - self.b1 * (-x * x / self.sigma).exp()
    }

    pub fn coupling(&self, distance: Real) -> Real {
        self.j0 / (distance * distance * distance)
    }
}

/// One sample of an externally supplied trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectorySample {
    pub t: Real,
    pub x1: Real,
    pub x2: Real,
}

/// Classical motion of the spin pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Trajectory {
    /// `x_α(t) = x_α(0) + (-1)^α a (cos(2πt/τ) - 1)`.
    Harmonic {
        x1_0: Real,
        x2_0: Real,
        amplitude: Real,
        period: Real,
    },
    /// Each spin moves at `speed` until the separation reaches `d_min`,
    /// rests for `dwell`, returns to the initial separation at the same
    /// speed and rests for `dwell` again; the schedule repeats.
    ConstantSpeed {
        x1_0: Real,
        x2_0: Real,
        speed: Real,
        d_min: Real,
        #[serde(default)]
        dwell: Real,
    },
    /// Linear interpolation between samples, repeated with period equal to
    /// the sampled time span.
    Sampled { samples: Vec<TrajectorySample> },
}

fn symmetric(x1: Real, x2: Real) -> bool {
    (x1 + x2).abs() <= 1e-9 * x1.abs().max(x2.abs()).max(1.0)
}

impl Trajectory {
    pub fn validate(&self) -> Result<()> {
        match self {
            Trajectory::Harmonic {
                x1_0,
                x2_0,
                amplitude,
                period,
            } => {
                if !(*period > 0.0) {
                    return Err(Error::Input(format!("period must be positive, got {period}")));
                }
                if !symmetric(*x1_0, *x2_0) {
                    return Err(Error::Input(format!(
                        "trajectory must satisfy x1 = -x2 (got x1_0 = {x1_0}, x2_0 = {x2_0})"
                    )));
                }
                // x1 - x2 sweeps the closed interval between D0 and D0 + 4a.
                let d0 = x1_0 - x2_0;
                let d1 = d0 + 4.0 * amplitude;
                if d0 == 0.0 || d1 == 0.0 || d0.signum() != d1.signum() {
                    return Err(Error::Input(format!(
                        "spins cross or touch: separation ranges over [{}, {}]",
                        d0.min(d1),
                        d0.max(d1)
                    )));
                }
            }
            Trajectory::ConstantSpeed {
                x1_0,
                x2_0,
                speed,
                d_min,
                dwell,
            } => {
                if !symmetric(*x1_0, *x2_0) {
                    return Err(Error::Input(format!(
                        "trajectory must satisfy x1 = -x2 (got x1_0 = {x1_0}, x2_0 = {x2_0})"
                    )));
                }
                if !(*d_min > 0.0) {
                    return Err(Error::Input(format!("d_min must be positive, got {d_min}")));
                }
                if !(*speed > 0.0) {
                    return Err(Error::Input(format!("speed must be positive, got {speed}")));
                }
                if !(*dwell >= 0.0) {
                    return Err(Error::Input(format!("dwell must be nonnegative, got {dwell}")));
                }
                if (x2_0 - x1_0).abs() <= *d_min {
                    return Err(Error::Input(format!(
                        "initial separation {} must exceed d_min = {d_min}",
                        (x2_0 - x1_0).abs()
                    )));
                }
            }
            Trajectory::Sampled { samples } => {
                if samples.len() < 2 {
                    return Err(Error::Input("sampled trajectory needs at least two samples".into()));
                }
                for w in samples.windows(2) {
                    if !(w[1].t > w[0].t) {
                        return Err(Error::Input(format!(
                            "sample times must increase strictly ({} then {})",
                            w[0].t, w[1].t
                        )));
                    }
                }
                for s in samples {
                    if !symmetric(s.x1, s.x2) {
                        return Err(Error::Input(format!(
                            "sample at t = {} violates x1 = -x2",
                            s.t
                        )));
                    }
                    if s.x1 == s.x2 {
                        return Err(Error::Input(format!("spins coincide at t = {}", s.t)));
                    }
                }
                // Interpolating between samples of opposite orientation crosses d = 0.
                let sign = (samples[0].x2 - samples[0].x1).signum();
                if samples.iter().any(|s| (s.x2 - s.x1).signum() != sign) {
                    return Err(Error::Input("spins cross within sampled trajectory".into()));
                }
            }
        }
        Ok(())
    }

    /// Period of the motion.
    pub fn period(&self) -> Real {
        match self {
            Trajectory::Harmonic { period, .. } => *period,
            Trajectory::ConstantSpeed {
                x1_0,
                x2_0,
                speed,
                d_min,
                dwell,
            } => ((x2_0 - x1_0).abs() - d_min) / speed + 2.0 * dwell,
            Trajectory::Sampled { samples } => samples[samples.len() - 1].t - samples[0].t,
        }
    }

    /// Positions `(x1, x2)` at time `t`.
    pub fn positions(&self, t: Real) -> (Real, Real) {
        match self {
            Trajectory::Harmonic {
                x1_0,
                x2_0,
                amplitude,
                period,
            } => {
                let shift = amplitude * ((2.0 * PI * t / period).cos() - 1.0);
                (x1_0 - shift, x2_0 + shift)
            }
            Trajectory::ConstantSpeed {
                x1_0,
                x2_0,
                speed,
                d_min,
                dwell,
            } => {
                let d0 = (x2_0 - x1_0).abs();
                let travel = (d0 - d_min) / (2.0 * speed);
                let period = 2.0 * travel + 2.0 * dwell;
                let phase = t.rem_euclid(period);
                let d = if phase < travel {
                    d0 - 2.0 * speed * phase
                } else if phase < travel + dwell {
                    *d_min
                } else if phase < 2.0 * travel + dwell {
                    d_min + 2.0 * speed * (phase - travel - dwell)
                } else {
                    d0
                };
                let center = 0.5 * (x1_0 + x2_0);
                let orient = (x2_0 - x1_0).signum();
                (center - 0.5 * orient * d, center + 0.5 * orient * d)
            }
            Trajectory::Sampled { samples } => {
                let t0 = samples[0].t;
                let span = samples[samples.len() - 1].t - t0;
                let tt = t0 + (t - t0).rem_euclid(span);
                let k = samples.partition_point(|s| s.t <= tt).clamp(1, samples.len() - 1);
                let (a, b) = (&samples[k - 1], &samples[k]);
                let w = (tt - a.t) / (b.t - a.t);
                (a.x1 + w * (b.x1 - a.x1), a.x2 + w * (b.x2 - a.x2))
            }
        }
    }
}

/// The instantaneous classical configuration and the parameters it fixes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Configuration {
    pub t: Real,
    pub x1: Real,
    pub x2: Real,
    pub d: Real,
    pub j: Real,
    pub b: Real,
    /// Local level splitting, `2B`.
    pub omega0: Real,
}

impl Configuration {
    /// A frozen configuration with the given coupling and field; positions
    /// are left at zero.
    pub fn fixed(j: Real, b: Real) -> Self {
        Self {
            t: 0.0,
            x1: 0.0,
            x2: 0.0,
            d: Real::NAN,
            j,
            b,
            omega0: 2.0 * b,
        }
    }

    pub fn hamiltonian(&self) -> CMatrix {
        hamiltonian(self.j, self.b)
    }
}

/// `H = J σx⊗σx + B (σz⊗I + I⊗σz)`.
pub fn hamiltonian(j: Real, b: Real) -> CMatrix {
    let mut h = CMatrix::from_diagonal(&[2.0 * b, 0.0, 0.0, -2.0 * b]);
    for i in 0..4 {
        h[(i, 3 - i)] = C64::new(j, 0.0);
    }
    h
}

/// Trajectory together with the field and coupling profiles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoleculeModel {
    pub trajectory: Trajectory,
    pub field: FieldProfile,
}

impl MoleculeModel {
    pub fn new(trajectory: Trajectory, field: FieldProfile) -> Result<Self> {
        trajectory.validate()?;
        field.validate()?;
        Ok(Self { trajectory, field })
    }

    pub fn period(&self) -> Real {
        self.trajectory.period()
    }

    pub fn config_at(&self, t: Real) -> Result<Configuration> {
        let (x1, x2) = self.trajectory.positions(t);
        let d = (x1 - x2).abs();
        if !(d > 0.0) {
            return Err(Error::SingularConfiguration { t, distance: d });
        }
        let b = self.field.field(x1);
        Ok(Configuration {
            t,
            x1,
            x2,
            d,
            j: self.field.coupling(d),
            b,
            omega0: 2.0 * b,
        })
    }

    pub fn hamiltonian_at(&self, t: Real) -> Result<CMatrix> {
        Ok(self.config_at(t)?.hamiltonian())
    }

    /// Central finite difference `(H(t+dt) - H(t-dt)) / 2dt`.
    pub fn hamiltonian_rate(&self, t: Real, dt: Real) -> Result<CMatrix> {
        if !(dt > 0.0) {
            return Err(Error::Input(format!("dt must be positive, got {dt}")));
        }
        let fwd = self.hamiltonian_at(t + dt)?;
        let bwd = self.hamiltonian_at(t - dt)?;
        Ok((&fwd - &bwd).scale_real(0.5 / dt))
    }
}
