//! Physical quantities of the two-spin state: concurrence, thermal and
//! steady states, critical temperature and excitation, heat current,
//! ground-state population, entropy and spectral temperature.

use crate::dynamics::{lindblad_set_for, Liouvillian};
use crate::environment::{BathSpec, SpinGas};
use crate::error::{Error, Result};
use crate::molecule::{hamiltonian, Configuration};
use crate::qlinalg::{eigh, eigvalsh, expm_hermitian, singular_values, solve};
use crate::{CMatrix, Real, C64};

/// States handed to [`concurrence`] may be this far outside the PSD cone.
const STATE_PSD_TOL: Real = 1e-6;
/// Adjacent levels closer than this are treated as degenerate.
const LEVEL_DEG_TOL: Real = 1e-9;

fn check_two_qubit(rho: &CMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: 4,
        });
    }
    Ok(())
}

/// `σy ⊗ σy` in the product basis.
fn sigma_yy() -> CMatrix {
    CMatrix::from_real_rows([
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ])
}

/// Wootters concurrence `max(0, λ₁ - λ₂ - λ₃ - λ₄)`, with `λ_i` the
/// decreasing square roots of the eigenvalues of `ρρ̃`.
///
/// With `ρ = W W†`, `W = V diag(√p)`, the `λ_i` are the singular values of
/// the symmetric matrix `Wᵀ (σy⊗σy) W`; taking them as singular values
/// keeps the small ones accurate where square roots of eigenvalues of `ρρ̃`
/// would not be. Eigenvalues of `ρ` down to `-1e-6` are treated as zero.
pub fn concurrence(rho: &CMatrix) -> Result<Real> {
    check_two_qubit(rho)?;
    let eig = eigh(&rho.hermitian_part())?;
    if eig.eigenvalues[0] < -STATE_PSD_TOL {
        return Err(Error::Numerical(format!(
            "state is not positive semidefinite: eigenvalue {:e}",
            eig.eigenvalues[0]
        )));
    }
    let roots: Vec<Real> = eig.eigenvalues.iter().map(|p| p.max(0.0).sqrt()).collect();
    let w = CMatrix::from_fn(4, |i, k| eig.eigenvectors[(i, k)] * roots[k]);
    let wt = CMatrix::from_fn(4, |i, k| w[(k, i)]);
    let tau = &(&wt * &sigma_yy()) * &w;
    let lam = singular_values(&tau)?;
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).clamp(0.0, 1.0))
}

/// Thermal state `e^{-βH}/Z` at fixed `(J, B)`.
#[derive(Clone, Debug)]
pub struct ThermalState {
    pub j: Real,
    pub b: Real,
    pub beta: Real,
    pub rho: CMatrix,
    /// Partition function `2[cosh(Eβ) + cosh(Jβ)]`.
    pub z: Real,
    /// `E = √(4B² + J²)`.
    pub energy: Real,
    /// `(E - 2B)/J`; NaN at `J = 0`.
    pub eta: Real,
}

/// Hyperbolic functions scaled by `e^{-shift}` to keep large `β` finite.
fn cosh_s(x: Real, shift: Real) -> Real {
    0.5 * ((x - shift).exp() + (-x - shift).exp())
}

fn sinh_s(x: Real, shift: Real) -> Real {
    0.5 * ((x - shift).exp() - (-x - shift).exp())
}

/// Closed-form thermal state in the product basis; falls back to direct
/// exponentiation at `J = 0`, where `η` is undefined.
pub fn thermal_state(j: Real, b: Real, beta: Real) -> Result<ThermalState> {
    if !(beta > 0.0) {
        return Err(Error::Input(format!("beta must be positive, got {beta}")));
    }
    let e = (4.0 * b * b + j * j).sqrt();
    let shift = e.max(j.abs()) * beta;
    if j == 0.0 {
        let h = hamiltonian(j, b);
        let w = expm_hermitian(&h, -beta)?;
        let z = w.trace().re;
        return Ok(ThermalState {
            j,
            b,
            beta,
            rho: w.scale_real(1.0 / z).hermitian_part(),
            z,
            energy: e,
            eta: Real::NAN,
        });
    }
    let eta = (e - 2.0 * b) / j;
    let she = sinh_s(e * beta, shift);
    let r00 = (e * beta - shift).exp() - 2.0 * she / (1.0 + eta * eta);
    let r33 = (-e * beta - shift).exp() + 2.0 * she / (1.0 + eta * eta);
    let r11 = cosh_s(j * beta, shift);
    let r03 = -j * she / e;
    let r12 = -sinh_s(j * beta, shift);
    let z_scaled = 2.0 * (cosh_s(e * beta, shift) + cosh_s(j * beta, shift));
    let mut rho = CMatrix::from_real_rows([
        [r00, 0.0, 0.0, r03],
        [0.0, r11, r12, 0.0],
        [0.0, r12, r11, 0.0],
        [r03, 0.0, 0.0, r33],
    ]);
    rho = rho.scale_real(1.0 / z_scaled);
    Ok(ThermalState {
        j,
        b,
        beta,
        rho,
        z: z_scaled * shift.exp(),
        energy: e,
        eta,
    })
}

/// `(|J|/E) sinh(Eβ) - cosh(Jβ)`, scaled by a positive factor.
fn static_margin(j: Real, b: Real, beta: Real) -> Real {
    let e = (4.0 * b * b + j * j).sqrt();
    let shift = e * beta;
    (j.abs() / e) * sinh_s(e * beta, shift) - cosh_s(j * beta, shift)
}

/// Concurrence of the thermal state in closed form,
/// `(2/Z) max{0, (|J|/E) sinh(Eβ) - cosh(Jβ)}`.
pub fn static_concurrence(j: Real, b: Real, beta: Real) -> Real {
    if j == 0.0 {
        return 0.0;
    }
    let e = (4.0 * b * b + j * j).sqrt();
    let shift = e.max(j.abs()) * beta;
    let z_scaled = 2.0 * (cosh_s(e * beta, shift) + cosh_s(j * beta, shift));
    let margin = (j.abs() / e) * sinh_s(e * beta, shift) - cosh_s(j * beta, shift);
    (2.0 / z_scaled) * margin.max(0.0)
}

/// Temperature above which the thermal state at `(J, B)` is separable.
/// Returns 0 when it is separable at every temperature.
pub fn critical_temperature(j: Real, b: Real) -> Result<Real> {
    if j == 0.0 {
        return Err(Error::Input("critical temperature requires J != 0".into()));
    }
    let mut hi: Real = 1.0;
    while static_margin(j, b, hi) <= 0.0 {
        hi *= 2.0;
        if hi > 1e8 {
            return Ok(0.0);
        }
    }
    let mut lo: Real = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if static_margin(j, b, mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(1.0 / (0.5 * (lo + hi)))
}

/// Fixed point of the dissipative dynamics at a frozen configuration.
///
/// Bosonic baths of any spectral form obey detailed balance and relax to
/// the Gibbs state. The spin gas has no Gibbs fixed point in general; its
/// steady state is the unit-trace null vector of the Liouvillian.
pub fn static_steady_state(j: Real, b: Real, bath: &BathSpec) -> Result<CMatrix> {
    match bath {
        BathSpec::Bosonic(bb) => Ok(thermal_state(j, b, bb.beta)?.rho),
        BathSpec::SpinGas(_) => {
            let h = hamiltonian(j, b);
            let lind = lindblad_set_for(&h, bath, 0.0)?;
            let sup = Liouvillian::new(h, lind).superoperator();
            let n = 4;
            // Replace the (0,0) population equation, which is redundant
            // under trace preservation, by the normalization condition.
            let mut a = sup.clone();
            for col in 0..n * n {
                a[(0, col)] = if col / n == col % n {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                };
            }
            let mut rhs = vec![C64::new(0.0, 0.0); n * n];
            rhs[0] = C64::new(1.0, 0.0);
            let x = solve(&a, &rhs, 1e-12).map_err(|_| {
                Error::Numerical(format!(
                    "spin-gas steady state is not unique at J = {j}, B = {b}: null space has dimension > 1"
                ))
            })?;
            Ok(CMatrix::from_vec(x)?.hermitian_part())
        }
    }
}

/// Smallest local excitation `s` at which the spin-gas steady state at
/// `(J, B)` becomes separable; 0 if it is separable already at `s = 0`.
pub fn critical_s(j: Real, b: Real, gamma: Real) -> Result<Real> {
    if j == 0.0 {
        return Err(Error::Input("critical s requires J != 0".into()));
    }
    let c = |s: Real| -> Result<Real> {
        concurrence(&static_steady_state(j, b, &BathSpec::SpinGas(SpinGas { gamma, s }))?)
    };
    if c(0.0)? <= 0.0 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, 0.5);
    if c(hi)? > 0.0 {
        return Ok(0.5);
    }
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if c(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Heat current `Tr{H Dρ}`: positive when the system absorbs energy from
/// the environment.
pub fn heat_current(h: &CMatrix, rho: &CMatrix, lindblads: &[CMatrix]) -> Result<Real> {
    h.check_same_dim(rho)?;
    let d = crate::dynamics::dissipator(rho, lindblads)?;
    let tr = (h * &d).trace();
    if tr.im.abs() > 1e-8 * h.max_abs().max(1.0) {
        return Err(Error::Numerical(format!(
            "heat current has imaginary part {:e}",
            tr.im
        )));
    }
    Ok(tr.re)
}

/// Population of the instantaneous ground state of `h`.
pub fn ground_state_population(rho: &CMatrix, h: &CMatrix) -> Result<Real> {
    rho.check_same_dim(h)?;
    let eig = eigh(h)?;
    let gap = eig.eigenvalues[1] - eig.eigenvalues[0];
    if gap < LEVEL_DEG_TOL {
        return Err(Error::Input(format!(
            "ground level is degenerate (gap {gap:e})"
        )));
    }
    let g = eig.vector(0);
    Ok(rho.expectation(&g, &g).re)
}

/// `-Tr ρ ln ρ` in nats.
pub fn von_neumann_entropy(rho: &CMatrix) -> Result<Real> {
    let ev = eigvalsh(&rho.hermitian_part())?;
    let mut s = 0.0;
    for p in ev {
        if p < -1e-9 {
            return Err(Error::Numerical(format!("negative eigenvalue {p:e} in entropy")));
        }
        if p > 0.0 {
            s -= p * p.ln();
        }
    }
    Ok(s)
}

/// Effective temperature from the populations of the instantaneous
/// eigenstates of `h`.
///
/// Each adjacent non-degenerate level pair `(i-1, i)` defines a two-level
/// inverse temperature `-ln(p_i/p_{i-1}) / (ε_i - ε_{i-1})`; the result is
/// their average weighted by `(p_i + p_{i-1})/2`. On a Gibbs state every
/// pair gives `β`, so the result is exactly `1/β`.
///
/// This is a reconstruction; other spectral-temperature definitions agree
/// on Gibbs states but not in general.
///
/// Returns `None` when a needed population vanishes or every adjacent pair
/// is degenerate, and `Some(∞)` when the weighted inverse temperature is
/// zero to within `1e-12`.
pub fn spectral_temperature(rho: &CMatrix, h: &CMatrix) -> Result<Option<Real>> {
    rho.check_same_dim(h)?;
    let eig = eigh(h)?;
    let pops: Vec<Real> = (0..eig.dim())
        .map(|k| {
            let v = eig.vector(k);
            rho.expectation(&v, &v).re
        })
        .collect();
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 1..pops.len() {
        let gap = eig.eigenvalues[i] - eig.eigenvalues[i - 1];
        if gap < LEVEL_DEG_TOL {
            continue;
        }
        let (lo, hi) = (pops[i - 1], pops[i]);
        if !(lo > 0.0 && hi > 0.0) {
            return Ok(None);
        }
        let w = 0.5 * (lo + hi);
        num += w * -(hi.ln() - lo.ln()) / gap;
        den += w;
    }
    if den == 0.0 {
        return Ok(None);
    }
    let inv = num / den;
    if inv.abs() < 1e-12 {
        return Ok(Some(Real::INFINITY));
    }
    Ok(Some(1.0 / inv))
}

/// One time sample of the reported observables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObservableRecord {
    pub t: Real,
    pub d: Real,
    pub j: Real,
    pub b: Real,
    /// `None` when the ground level is degenerate.
    pub p_g: Option<Real>,
    pub concurrence: Real,
    pub heat_current: Real,
    pub entropy: Real,
    pub spectral_temperature: Option<Real>,
}

/// Evaluates every observable for `rho` at configuration `config`.
pub fn observe(config: &Configuration, bath: &BathSpec, rho: &CMatrix) -> Result<ObservableRecord> {
    let h = config.hamiltonian();
    let lind = lindblad_set_for(&h, bath, config.t)?;
    let p_g = match ground_state_population(rho, &h) {
        Ok(p) => Some(p),
        Err(Error::Input(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(ObservableRecord {
        t: config.t,
        d: config.d,
        j: config.j,
        b: config.b,
        p_g,
        concurrence: concurrence(rho)?,
        heat_current: heat_current(&h, rho, &lind.generators)?,
        entropy: von_neumann_entropy(rho)?,
        spectral_temperature: spectral_temperature(rho, &h)?,
    })
}
