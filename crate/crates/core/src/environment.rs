//! Environment models: bosonic heat baths characterized by a transition
//! rate `Γ(ω)`, and the spin-gas collision model with fixed local channels.
//!
//! Bosonic rates are written as
//!
//! ```text
//! Γ(ω) = κ · h(|ω|) · ω (1 + N(ω)),    N(ω) = 1 / (e^{βω} - 1)
//! ```
//!
//! where `ω (1 + N(ω)) = ω / (1 - e^{-βω})` is positive for every real `ω`,
//! tends to `1/β` at `ω = 0` and satisfies `Γ(ω) = e^{βω} Γ(-ω)`. The shape
//! factor `h` is `1` for the Ohmic bath, `|ω|^{s-1}` for a power law
//! `J(ω) ∝ ω^s`, and `1/ω²` for a `1/ω` spectral density. Positive `ω`
//! is energy released by the system into the bath.
//!
//! Where `h` diverges at `ω → 0` its argument is clamped from below at an
//! infrared cutoff. The `1/ω` form's cutoff has no reference value behind
//! it; treat results near exact degeneracies with that bath as cutoff
//! dependent.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qlinalg::pauli;
use crate::{CMatrix, Real};

/// Infrared cutoff applied when none is configured, in thermal units.
pub const DEFAULT_IR_CUTOFF: Real = 1e-3;

fn default_ir_cutoff() -> Real {
    DEFAULT_IR_CUTOFF
}

/// Shape of the bath spectral density.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpectralForm {
    Ohmic,
    /// `J(ω) ∝ ω^exponent`; sub-Ohmic below 1, supra-Ohmic above.
    PowerLaw {
        exponent: Real,
        #[serde(default = "default_ir_cutoff")]
        ir_cutoff: Real,
    },
    /// `J(ω) ∝ 1/ω`. The default infrared cutoff is a numerical
    /// regularization, not a calibrated solvent parameter.
    OneOverOmega {
        #[serde(default = "default_ir_cutoff")]
        ir_cutoff: Real,
    },
}

impl SpectralForm {
    fn validate(&self) -> Result<()> {
        match *self {
            SpectralForm::Ohmic => Ok(()),
            SpectralForm::PowerLaw {
                exponent,
                ir_cutoff,
            } => {
                if !(exponent > 0.0 && exponent <= 2.0) {
                    return Err(Error::Input(format!(
                        "power-law exponent must lie in (0, 2], got {exponent}"
                    )));
                }
                positive("ir_cutoff", ir_cutoff)
            }
            SpectralForm::OneOverOmega { ir_cutoff } => positive("ir_cutoff", ir_cutoff),
        }
    }

    /// `h(|ω|)`, the spectral density divided by the Ohmic one.
    fn shape(&self, abs_omega: Real) -> Real {
        match *self {
            SpectralForm::Ohmic => 1.0,
            SpectralForm::PowerLaw {
                exponent,
                ir_cutoff,
            } => {
                let w = if exponent < 1.0 {
                    abs_omega.max(ir_cutoff)
                } else {
                    abs_omega
                };
                w.powf(exponent - 1.0)
            }
            SpectralForm::OneOverOmega { ir_cutoff } => {
                let w = abs_omega.max(ir_cutoff);
                1.0 / (w * w)
            }
        }
    }
}

fn positive(name: &str, v: Real) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Input(format!("{name} must be positive, got {v}")))
    }
}

/// Bosonic heat bath: each spin couples through `σx` to its own bath.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BosonicBath {
    pub kappa: Real,
    pub beta: Real,
    #[serde(default = "ohmic")]
    pub spectral: SpectralForm,
}

fn ohmic() -> SpectralForm {
    SpectralForm::Ohmic
}

impl BosonicBath {
    pub fn ohmic(kappa: Real, beta: Real) -> Self {
        Self {
            kappa,
            beta,
            spectral: SpectralForm::Ohmic,
        }
    }

    /// Transition rate `Γ(ω)` for a transition releasing energy `ω`.
    pub fn rate(&self, omega: Real) -> Real {
        self.kappa * self.spectral.shape(omega.abs()) * bose_weight(omega, self.beta)
    }
}

/// `ω (1 + N(ω))`, continuous through `ω = 0`.
fn bose_weight(omega: Real, beta: Real) -> Real {
    let x = beta * omega;
    if x.abs() < 1e-8 {
        // ω/(1 - e^{-x}) = (1/β)(1 + x/2 + x²/12 + ...)
        return (1.0 + 0.5 * x + x * x / 12.0) / beta;
    }
    -omega / (-x).exp_m1()
}

/// Spin-gas collision environment: local gain `√(γs) σ₊` and decay
/// `√(γ(1-s)) σ₋` on each spin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinGas {
    pub gamma: Real,
    /// Mean local excitation in equilibrium.
    pub s: Real,
}

impl SpinGas {
    /// The four local generators `(L_g^(1), L_d^(1), L_g^(2), L_d^(2))`.
    pub fn generators(&self) -> Vec<(CMatrix, GeneratorLabel)> {
        let gain = (self.gamma * self.s).sqrt();
        let decay = (self.gamma * (1.0 - self.s)).sqrt();
        let mut out = Vec::with_capacity(4);
        for spin in [1, 2] {
            out.push((
                pauli::on_spin(&pauli::sigma_plus(), spin).scale_real(gain),
                GeneratorLabel::Gain { spin },
            ));
            out.push((
                pauli::on_spin(&pauli::sigma_minus(), spin).scale_real(decay),
                GeneratorLabel::Decay { spin },
            ));
        }
        out
    }
}

/// Identifies which physical process a Lindblad generator describes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GeneratorLabel {
    /// Bath-induced transition on `spin` releasing energy `omega`.
    Transition { spin: usize, omega: Real },
    Gain { spin: usize },
    Decay { spin: usize },
}

/// Environment coupled to the molecule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BathSpec {
    Bosonic(BosonicBath),
    SpinGas(SpinGas),
}

impl BathSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            BathSpec::Bosonic(b) => {
                positive("kappa", b.kappa)?;
                positive("beta", b.beta)?;
                b.spectral.validate()
            }
            BathSpec::SpinGas(g) => {
                positive("gamma", g.gamma)?;
                if !(0.0..=0.5).contains(&g.s) {
                    return Err(Error::Input(format!("s must lie in [0, 1/2], got {}", g.s)));
                }
                Ok(())
            }
        }
    }

    /// Bosonic rate function; fails for the spin gas.
    pub fn rate(&self, omega: Real) -> Result<Real> {
        match self {
            BathSpec::Bosonic(b) => Ok(b.rate(omega)),
            BathSpec::SpinGas(_) => Err(Error::Input("rate() requires a bosonic bath".into())),
        }
    }

    /// Spin-gas generators; fails for a bosonic bath.
    pub fn spin_gas_generators(&self) -> Result<Vec<(CMatrix, GeneratorLabel)>> {
        match self {
            BathSpec::SpinGas(g) => Ok(g.generators()),
            BathSpec::Bosonic(_) => Err(Error::Input(
                "spin_gas_generators() requires a spin-gas bath".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::ComplexMatrix;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn forms() -> Vec<SpectralForm> {
        vec![
            SpectralForm::Ohmic,
            SpectralForm::PowerLaw {
                exponent: 0.8,
                ir_cutoff: DEFAULT_IR_CUTOFF,
            },
            SpectralForm::PowerLaw {
                exponent: 1.2,
                ir_cutoff: DEFAULT_IR_CUTOFF,
            },
            SpectralForm::OneOverOmega {
                ir_cutoff: DEFAULT_IR_CUTOFF,
            },
        ]
    }

    #[test]
    fn ohmic_rate_values() {
        let b = BosonicBath::ohmic(0.01, 1.0);
        let e = std::f64::consts::E;
        assert_abs_diff_eq!(b.rate(1.0), 0.01 * (1.0 + 1.0 / (e - 1.0)), epsilon = 1e-15);
        assert_abs_diff_eq!(b.rate(1.0), 0.0158198, epsilon = 1e-7);
        assert_abs_diff_eq!(b.rate(0.0), 0.01, epsilon = 1e-15);
        assert_abs_diff_eq!(b.rate(1e-12), 0.01, epsilon = 1e-12);
    }

    #[test]
    fn rates_continuous_at_zero() {
        for spectral in forms() {
            let b = BosonicBath {
                kappa: 0.05,
                beta: 1.3,
                spectral,
            };
            let r0 = b.rate(0.0);
            assert!(r0.is_finite() && r0 >= 0.0);
            // Above Ohmic the rate vanishes at zero like |ω|^(s-1).
            let excess = match spectral {
                SpectralForm::PowerLaw { exponent, .. } if exponent > 1.0 => exponent - 1.0,
                _ => 1.0,
            };
            for w in [1e-6f64, -1e-6] {
                let bound = 1e-5 * r0 + 2.0 * b.kappa / b.beta * w.abs().powf(excess);
                assert!((b.rate(w) - r0).abs() <= bound, "{spectral:?} at {w}");
            }
        }
    }

    #[test]
    fn power_law_reduces_to_ohmic() {
        let o = BosonicBath::ohmic(0.02, 0.7);
        let p = BosonicBath {
            spectral: SpectralForm::PowerLaw {
                exponent: 1.0,
                ir_cutoff: DEFAULT_IR_CUTOFF,
            },
            ..o
        };
        for w in [-3.0, -0.1, 0.0, 0.4, 2.5] {
            assert_abs_diff_eq!(o.rate(w), p.rate(w), epsilon = 1e-15);
        }
    }

    #[test]
    fn spin_gas_amplitudes() {
        let g = SpinGas { gamma: 0.1, s: 0.2 };
        let gens = g.generators();
        assert_eq!(gens.len(), 4);
        assert_abs_diff_eq!(gens[0].0.max_abs(), 0.02f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(gens[0].0.max_abs(), 0.141421, epsilon = 1e-6);
        assert_abs_diff_eq!(gens[1].0.max_abs(), 0.282843, epsilon = 1e-6);

        let zero_t = SpinGas { gamma: 0.1, s: 0.0 }.generators();
        assert_eq!(zero_t[0].0.max_abs(), 0.0);
        assert_eq!(zero_t[2].0.max_abs(), 0.0);
        assert_abs_diff_eq!(zero_t[1].0.max_abs(), 0.1f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn single_spin_relaxes_to_s() {
        // Balance of σ₊ and σ₋ channels on one spin: the upward flux
        // 2γs·p_down equals the downward flux 2γ(1-s)·p_up at p_up = s.
        let (gamma, s): (f64, f64) = (0.1, 0.2);
        let lg = pauli::sigma_plus::<f64>().scale_real((gamma * s).sqrt());
        let ld = pauli::sigma_minus::<f64>().scale_real((gamma * (1.0 - s)).sqrt());
        let rho = ComplexMatrix::from_diagonal(&[s, 1.0 - s]);
        let mut d = ComplexMatrix::zeros(2);
        for l in [&lg, &ld] {
            let ldl = &l.adjoint() * l;
            d += &l.sandwich(&rho).scale_real(2.0);
            d -= &ldl.anticommutator(&rho);
        }
        assert!(d.max_abs() < 1e-16);
    }

    #[test]
    fn validation() {
        assert!(BathSpec::SpinGas(SpinGas { gamma: 0.1, s: 0.6 }).validate().is_err());
        assert!(BathSpec::SpinGas(SpinGas { gamma: 0.0, s: 0.2 }).validate().is_err());
        assert!(BathSpec::Bosonic(BosonicBath::ohmic(0.01, -1.0)).validate().is_err());
        assert!(BathSpec::Bosonic(BosonicBath::ohmic(0.01, 1.0)).validate().is_ok());
        assert!(BathSpec::SpinGas(SpinGas { gamma: 0.1, s: 0.2 }).rate(1.0).is_err());
    }

    proptest! {
        #[test]
        fn rates_nonnegative_and_balanced(w in -20.0f64..20.0, beta in 0.05f64..5.0, kappa in 1e-4f64..1.0) {
            for spectral in forms() {
                let b = BosonicBath { kappa, beta, spectral };
                let (up, down) = (b.rate(w), b.rate(-w));
                prop_assert!(up >= 0.0 && down >= 0.0);
                if down > 1e-280 {
                    let ratio = up / down;
                    let want = (beta * w).exp();
                    prop_assert!((ratio - want).abs() <= 1e-12 * want, "{:?}: {} vs {}", spectral, ratio, want);
                }
            }
        }
    }
}
