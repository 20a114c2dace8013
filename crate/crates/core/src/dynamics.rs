//! Master-equation dynamics
//!
//! ```text
//! dρ/dt = -i[H(t), ρ] + Σ_μ (2 L_μ ρ L_μ† - L_μ† L_μ ρ - ρ L_μ† L_μ)
//! ```
//!
//! For bosonic baths the generators follow the instantaneous eigenbasis of
//! `H(t)`: `σx` of each spin is split into parts `S_ω` that each release a
//! definite energy `ω`, and `L = Γ(ω)^{1/2} S_ω`. For the spin gas the
//! generators are the fixed local gain/decay channels.
//!
//! Propagation is fixed-step classical RK4. The state is re-symmetrized
//! after each step; trace and positivity are monitored but never corrected.

use log::warn;

use crate::environment::{BathSpec, GeneratorLabel};
use crate::error::{Error, Result};
use crate::molecule::MoleculeModel;
use crate::qlinalg::{eigh, eigvalsh, pauli, trace_distance};
use crate::{CMatrix, Eigen, Real, C64};

/// Frequencies closer than this are merged into one transition operator.
pub const DEFAULT_DEG_TOL: Real = 1e-9;

/// Generators whose entries all fall below this are dropped.
const NEGLIGIBLE_GENERATOR: Real = 1e-13;

const TRACE_TOL: Real = 1e-6;
const POSITIVITY_TOL: Real = 1e-6;

/// Part of `σx^(spin)` that moves the system down in energy by `omega`
/// (up, when `omega < 0`).
#[derive(Clone, Debug)]
pub struct TransitionOperator {
    pub spin: usize,
    /// Energy released, `ε_j - ε_i` for each `|ε_i⟩⟨ε_j|` in the group.
    pub omega: Real,
    pub matrix: CMatrix,
}

/// Decomposes `σx^(1)` and `σx^(2)` into transition operators between
/// eigenstates of `h`, grouping transitions whose frequencies differ by less
/// than `deg_tol`.
pub fn transition_operators(h: &CMatrix, deg_tol: Real) -> Result<Vec<TransitionOperator>> {
    let eig = eigh(h)?;
    Ok(transition_operators_from(&eig, deg_tol))
}

/// [`transition_operators`] for an existing eigendecomposition.
pub fn transition_operators_from(eig: &Eigen, deg_tol: Real) -> Vec<TransitionOperator> {
    let n = eig.dim();
    let e = &eig.eigenvalues;
    let mut pairs: Vec<(Real, usize, usize)> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            pairs.push((e[j] - e[i], i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    // Single-link clustering of the sorted frequencies.
    let mut groups: Vec<&[(Real, usize, usize)]> = Vec::new();
    let mut start = 0;
    for k in 1..=pairs.len() {
        if k == pairs.len() || pairs[k].0 - pairs[k - 1].0 >= deg_tol {
            groups.push(&pairs[start..k]);
            start = k;
        }
    }

    let mut out = Vec::with_capacity(2 * groups.len());
    for spin in [1, 2] {
        let sx = eig.to_eigenbasis(&pauli::on_spin(&pauli::sigma_x(), spin));
        for group in &groups {
            let omega = group.iter().map(|p| p.0).sum::<Real>() / group.len() as Real;
            let mut in_eigenbasis = CMatrix::zeros(n);
            for &(_, i, j) in group.iter() {
                in_eigenbasis[(i, j)] = sx[(i, j)];
            }
            out.push(TransitionOperator {
                spin,
                omega,
                matrix: eig.from_eigenbasis(&in_eigenbasis),
            });
        }
    }
    out
}

/// Lindblad generators at one instant.
#[derive(Clone, Debug)]
pub struct LindbladSet {
    pub t: Real,
    pub generators: Vec<CMatrix>,
    pub labels: Vec<GeneratorLabel>,
}

impl LindbladSet {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Generators for a frozen Hamiltonian `h`.
pub fn lindblad_set_for(h: &CMatrix, bath: &BathSpec, t: Real) -> Result<LindbladSet> {
    match bath {
        BathSpec::Bosonic(_) => {
            let eig = eigh(h)?;
            lindblad_set_from_eigen(&eig, bath, t)
        }
        BathSpec::SpinGas(g) => Ok(spin_gas_set(g.generators(), t)),
    }
}

fn spin_gas_set(gens: Vec<(CMatrix, GeneratorLabel)>, t: Real) -> LindbladSet {
    let (generators, labels) = gens
        .into_iter()
        .filter(|(m, _)| m.max_abs() > NEGLIGIBLE_GENERATOR)
        .unzip();
    LindbladSet {
        t,
        generators,
        labels,
    }
}

fn lindblad_set_from_eigen(eig: &Eigen, bath: &BathSpec, t: Real) -> Result<LindbladSet> {
    let BathSpec::Bosonic(b) = bath else {
        return lindblad_set_for(&eig.map_spectrum(|e| e), bath, t);
    };
    let mut generators = Vec::new();
    let mut labels = Vec::new();
    for op in transition_operators_from(eig, DEFAULT_DEG_TOL) {
        let l = op.matrix.scale_real(b.rate(op.omega).sqrt());
        if l.max_abs() > NEGLIGIBLE_GENERATOR {
            if !l.is_finite() {
                return Err(Error::Numerical(format!(
                    "non-finite generator at t = {t}, omega = {}",
                    op.omega
                )));
            }
            generators.push(l);
            labels.push(GeneratorLabel::Transition {
                spin: op.spin,
                omega: op.omega,
            });
        }
    }
    Ok(LindbladSet {
        t,
        generators,
        labels,
    })
}

/// Generators at time `t` along the trajectory.
pub fn lindblad_set(model: &MoleculeModel, bath: &BathSpec, t: Real) -> Result<LindbladSet> {
    let h = model.hamiltonian_at(t)?;
    lindblad_set_for(&h, bath, t)
}

/// `Σ 2LρL† - L†Lρ - ρL†L`.
pub fn dissipator(rho: &CMatrix, lindblads: &[CMatrix]) -> Result<CMatrix> {
    let mut out = CMatrix::zeros(rho.dim());
    for l in lindblads {
        rho.check_same_dim(l)?;
        let ldl = &l.adjoint() * l;
        out.add_scaled(&l.sandwich(rho), 2.0);
        out -= &ldl.anticommutator(rho);
    }
    Ok(out)
}

/// The master-equation generator frozen at one instant.
#[derive(Clone, Debug)]
pub struct Liouvillian {
    pub t: Real,
    pub hamiltonian: CMatrix,
    pub lindblads: LindbladSet,
    /// `-iH - Σ L†L`, so that the non-jump part is `Aρ + ρA†`.
    drift: CMatrix,
}

impl Liouvillian {
    pub fn new(hamiltonian: CMatrix, lindblads: LindbladSet) -> Self {
        let mut drift = hamiltonian.scale(C64::new(0.0, -1.0));
        for l in &lindblads.generators {
            drift -= &(&l.adjoint() * l);
        }
        Self {
            t: lindblads.t,
            hamiltonian,
            lindblads,
            drift,
        }
    }

    pub fn at(model: &MoleculeModel, bath: &BathSpec, t: Real) -> Result<Self> {
        let h = model.hamiltonian_at(t)?;
        let lindblads = lindblad_set_for(&h, bath, t)?;
        Ok(Self::new(h, lindblads))
    }

    /// `ℒρ` for Hermitian `ρ`.
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let a_rho = &self.drift * rho;
        let mut out = &a_rho + &a_rho.adjoint();
        for l in &self.lindblads.generators {
            out.add_scaled(&l.sandwich(rho), 2.0);
        }
        out
    }

    /// `Dρ` alone.
    pub fn dissipate(&self, rho: &CMatrix) -> CMatrix {
        dissipator(rho, &self.lindblads.generators).expect("dimensions fixed at construction")
    }

    /// Row-major vectorized superoperator, `vec(ℒρ) = M vec(ρ)`.
    pub fn superoperator(&self) -> CMatrix {
        let n = self.hamiltonian.dim();
        let mut m = CMatrix::zeros(n * n);
        for col in 0..n * n {
            let mut basis = CMatrix::zeros(n);
            basis[(col / n, col % n)] = C64::new(1.0, 0.0);
            // `apply` assumes Hermitian input; expand the generic form here.
            let a_rho = &self.drift * &basis;
            let mut img = &a_rho + &(&basis * &self.drift.adjoint());
            for l in &self.lindblads.generators {
                img.add_scaled(&l.sandwich(&basis), 2.0);
            }
            for (row, z) in img.as_slice().iter().enumerate() {
                m[(row, col)] = *z;
            }
        }
        m
    }
}

/// `-i[H(t), ρ] + Dρ`.
pub fn rhs(model: &MoleculeModel, bath: &BathSpec, t: Real, rho: &CMatrix) -> Result<CMatrix> {
    let h = model.hamiltonian_at(t)?;
    let lind = lindblad_set_for(&h, bath, t)?;
    let mut out = h.commutator(rho).scale(C64::new(0.0, -1.0));
    out += &dissipator(rho, &lind.generators)?;
    Ok(out)
}

/// Fixed RK4 step size and sampling stride.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepControl {
    /// Upper bound on the step; the interval is split into equal steps.
    pub dt: Real,
    /// Record every `stride`-th step.
    pub stride: usize,
}

impl StepControl {
    pub fn per_period(period: Real, steps_per_period: usize, stride: usize) -> Self {
        Self {
            dt: period / steps_per_period as Real,
            stride: stride.max(1),
        }
    }
}

/// Physicality diagnostics of a state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateHealth {
    pub trace_error: Real,
    pub hermiticity_error: Real,
    pub min_eigenvalue: Real,
}

pub fn state_health(rho: &CMatrix) -> Result<StateHealth> {
    let tr = rho.trace();
    Ok(StateHealth {
        trace_error: (tr - C64::new(1.0, 0.0)).norm(),
        hermiticity_error: rho.hermiticity_error(),
        min_eigenvalue: eigvalsh(&rho.hermitian_part())?[0],
    })
}

/// Checks that `rho` is a density matrix within `tol` (trace, Hermiticity,
/// positivity).
pub fn check_physical(rho: &CMatrix, tol: Real) -> Result<()> {
    let h = state_health(rho)?;
    if h.trace_error > tol || h.hermiticity_error > tol || h.min_eigenvalue < -tol {
        return Err(Error::Input(format!(
            "not a density matrix: |Tr - 1| = {:e}, max|ρ - ρ†| = {:e}, min eig = {:e}",
            h.trace_error, h.hermiticity_error, h.min_eigenvalue
        )));
    }
    Ok(())
}

/// True when `rho + tol·I` admits a Cholesky factorization, i.e. the
/// smallest eigenvalue of the Hermitian part exceeds `-tol`.
fn psd_within(rho: &CMatrix, tol: Real) -> bool {
    let n = rho.dim();
    let mut l = vec![C64::new(0.0, 0.0); n * n];
    for j in 0..n {
        let mut d = rho[(j, j)].re + tol;
        for k in 0..j {
            d -= l[j * n + k].norm_sqr();
        }
        if !(d > 0.0) {
            return false;
        }
        let d = d.sqrt();
        l[j * n + j] = C64::new(d, 0.0);
        for i in j + 1..n {
            let mut z = 0.5 * (rho[(i, j)] + rho[(j, i)].conj());
            for k in 0..j {
                z -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = z / d;
        }
    }
    true
}

fn monitor(rho: &CMatrix, t: Real) -> Result<()> {
    let trace_error = (rho.trace() - C64::new(1.0, 0.0)).norm();
    if rho.is_finite() && trace_error <= TRACE_TOL && psd_within(rho, POSITIVITY_TOL) {
        return Ok(());
    }
    let min_eig = if rho.is_finite() {
        eigvalsh(&rho.hermitian_part())?[0]
    } else {
        Real::NAN
    };
    Err(Error::Numerical(format!(
        "state left the physical set at t = {t}: |Tr - 1| = {trace_error:e}, min eig = {min_eig:e}; reduce the step size"
    )))
}

/// Stepper that reuses the generator at the end of each step as the start
/// of the next.
struct Rk4<'a> {
    model: &'a MoleculeModel,
    bath: &'a BathSpec,
    cached: Option<Liouvillian>,
}

impl<'a> Rk4<'a> {
    fn new(model: &'a MoleculeModel, bath: &'a BathSpec) -> Self {
        Self {
            model,
            bath,
            cached: None,
        }
    }

    /// Generator at `t`, reusing `prev` when the Hamiltonian is unchanged
    /// (the bath never depends on time except through `H`).
    fn generator_like(&self, prev: &Liouvillian, t: Real) -> Result<Option<Liouvillian>> {
        let h = self.model.hamiltonian_at(t)?;
        if h == prev.hamiltonian {
            return Ok(None);
        }
        let lindblads = lindblad_set_for(&h, self.bath, t)?;
        Ok(Some(Liouvillian::new(h, lindblads)))
    }

    fn step(&mut self, t: Real, t_next: Real, rho: &CMatrix) -> Result<CMatrix> {
        let h = t_next - t;
        let l0 = match self.cached.take() {
            Some(g) if g.t == t || self.model.hamiltonian_at(t)? == g.hamiltonian => g,
            _ => Liouvillian::at(self.model, self.bath, t)?,
        };
        let lm_new = self.generator_like(&l0, t + 0.5 * h)?;
        let lm = lm_new.as_ref().unwrap_or(&l0);
        let l1_new = self.generator_like(lm, t_next)?;

        let k1 = l0.apply(rho);
        let mut y = rho.clone();
        y.add_scaled(&k1, 0.5 * h);
        let k2 = lm.apply(&y);
        let mut y = rho.clone();
        y.add_scaled(&k2, 0.5 * h);
        let k3 = lm.apply(&y);
        let mut y = rho.clone();
        y.add_scaled(&k3, h);
        let k4 = l1_new.as_ref().unwrap_or(lm).apply(&y);

        let mut out = rho.clone();
        out.add_scaled(&k1, h / 6.0);
        out.add_scaled(&k2, h / 3.0);
        out.add_scaled(&k3, h / 3.0);
        out.add_scaled(&k4, h / 6.0);
        self.cached = Some(match (l1_new, lm_new) {
            (Some(l1), _) => l1,
            (None, Some(lm)) => lm,
            (None, None) => l0,
        });
        Ok(out.hermitian_part())
    }
}

/// Integrates from `t0` to `t1`, returning samples at every `stride`-th
/// step (always including both endpoints).
pub fn propagate(
    model: &MoleculeModel,
    bath: &BathSpec,
    rho0: &CMatrix,
    t0: Real,
    t1: Real,
    control: StepControl,
) -> Result<Vec<(Real, CMatrix)>> {
    let mut samples = Vec::new();
    propagate_with(model, bath, rho0, t0, t1, control, |t, rho| {
        samples.push((t, rho.clone()))
    })?;
    Ok(samples)
}

/// [`propagate`] with a sample callback; returns the final state.
pub fn propagate_with(
    model: &MoleculeModel,
    bath: &BathSpec,
    rho0: &CMatrix,
    t0: Real,
    t1: Real,
    control: StepControl,
    mut on_sample: impl FnMut(Real, &CMatrix),
) -> Result<CMatrix> {
    let mut rk = Rk4::new(model, bath);
    propagate_inner(&mut rk, rho0, t0, t1, control, true, &mut on_sample)
}

fn propagate_inner(
    rk: &mut Rk4<'_>,
    rho0: &CMatrix,
    t0: Real,
    t1: Real,
    control: StepControl,
    include_end: bool,
    on_sample: &mut dyn FnMut(Real, &CMatrix),
) -> Result<CMatrix> {
    if !(t1 >= t0) || !(control.dt > 0.0) {
        return Err(Error::Input(format!(
            "need t1 >= t0 and dt > 0 (t0 = {t0}, t1 = {t1}, dt = {})",
            control.dt
        )));
    }
    check_physical(rho0, 1e-9)?;
    let steps = ((t1 - t0) / control.dt).ceil().max(1.0) as usize;
    let h = (t1 - t0) / steps as Real;
    let stride = control.stride.max(1);
    let mut rho = rho0.hermitian_part();
    on_sample(t0, &rho);
    for k in 0..steps {
        let t = t0 + k as Real * h;
        let t_next = if k + 1 == steps {
            t1
        } else {
            t0 + (k + 1) as Real * h
        };
        rho = rk.step(t, t_next, &rho)?;
        monitor(&rho, t_next)?;
        let sample = if k + 1 == steps {
            include_end
        } else {
            (k + 1) % stride == 0
        };
        if sample {
            on_sample(t_next, &rho);
        }
    }
    Ok(rho)
}

/// Halves the step until the final state moves by less than `rtol` in trace
/// distance; returns the accepted step.
pub fn converged_step(
    model: &MoleculeModel,
    bath: &BathSpec,
    rho0: &CMatrix,
    t0: Real,
    t1: Real,
    initial_dt: Real,
    rtol: Real,
) -> Result<Real> {
    let run = |dt: Real| {
        propagate_with(model, bath, rho0, t0, t1, StepControl { dt, stride: usize::MAX }, |_, _| {})
    };
    let mut dt = initial_dt;
    let mut prev = run(dt)?;
    for _ in 0..20 {
        let next = run(0.5 * dt)?;
        if trace_distance(&prev, &next)? < rtol {
            return Ok(dt);
        }
        dt *= 0.5;
        prev = next;
    }
    Err(Error::Numerical(format!(
        "step halving did not reach rtol = {rtol} (dt = {dt:e})"
    )))
}

/// Outcome of propagating a periodically driven system to its asymptotic
/// cycle.
#[derive(Clone, Debug)]
pub struct CycleReport {
    pub n_cycles: usize,
    pub converged: bool,
    /// Trace distance between the states at the start and end of the last
    /// propagated cycle.
    pub residual: Real,
    /// Samples over the last cycle, both endpoints included.
    pub cycle_states: Vec<(Real, CMatrix)>,
    /// Samples over the first cycle, both endpoints included.
    pub first_cycle_states: Vec<(Real, CMatrix)>,
}

/// Cycle-search parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CycleControl {
    pub period: Real,
    pub steps_per_period: usize,
    pub stride: usize,
    pub cycle_tol: Real,
    pub max_cycles: usize,
}

/// Propagates period by period from `t = 0` until successive cycle-start
/// states agree within `cycle_tol`.
pub fn find_asymptotic_cycle(
    model: &MoleculeModel,
    bath: &BathSpec,
    rho0: &CMatrix,
    control: CycleControl,
) -> Result<CycleReport> {
    find_asymptotic_cycle_with(model, bath, rho0, control, |_, _| {})
}

/// [`find_asymptotic_cycle`] with a callback that sees every sample of
/// every cycle once, in time order.
pub fn find_asymptotic_cycle_with(
    model: &MoleculeModel,
    bath: &BathSpec,
    rho0: &CMatrix,
    control: CycleControl,
    mut on_sample: impl FnMut(Real, &CMatrix),
) -> Result<CycleReport> {
    if !(control.period > 0.0) || control.steps_per_period == 0 || control.max_cycles == 0 {
        return Err(Error::Input(format!("invalid cycle control {control:?}")));
    }
    let step = StepControl::per_period(control.period, control.steps_per_period, control.stride);
    let mut rk = Rk4::new(model, bath);
    let mut rho = rho0.clone();
    let mut first = Vec::new();
    let mut residual = Real::INFINITY;
    let mut n_cycles = 0;
    let mut converged = false;
    let mut current = Vec::new();
    while n_cycles < control.max_cycles {
        let t0 = n_cycles as Real * control.period;
        let t1 = (n_cycles + 1) as Real * control.period;
        current.clear();
        let next = propagate_inner(&mut rk, &rho, t0, t1, step, true, &mut |t, r| {
            current.push((t, r.clone()))
        })?;
        // The cycle end is the next cycle's start; report it once.
        for (t, r) in &current[..current.len() - 1] {
            on_sample(*t, r);
        }
        residual = trace_distance(&rho, &next)?;
        n_cycles += 1;
        if n_cycles == 1 {
            first = current.clone();
        }
        rho = next;
        if residual < control.cycle_tol {
            converged = true;
            break;
        }
    }
    let (t_end, r_end) = current.last().expect("at least one sample");
    on_sample(*t_end, r_end);
    Ok(CycleReport {
        n_cycles,
        converged,
        residual,
        cycle_states: current,
        first_cycle_states: first,
    })
}

/// `max_{i≠j} |⟨ε_i|dH/dt|ε_j⟩| / (ε_i - ε_j)²`; small values mean the
/// motion is adiabatic.
pub fn adiabaticity_ratio(model: &MoleculeModel, t: Real, dt: Real) -> Result<Real> {
    let eig = eigh(&model.hamiltonian_at(t)?)?;
    let hdot = eig.to_eigenbasis(&model.hamiltonian_rate(t, dt)?);
    let n = eig.dim();
    let mut worst: Real = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let num = hdot[(i, j)].norm();
            if num <= 1e-14 * hdot.max_abs().max(1e-300) {
                continue;
            }
            let gap = eig.eigenvalues[i] - eig.eigenvalues[j];
            if gap.abs() < DEFAULT_DEG_TOL {
                return Ok(Real::INFINITY);
            }
            worst = worst.max(num / (gap * gap));
        }
    }
    Ok(worst)
}

/// Largest adiabaticity ratio over `samples` equally spaced points of one
/// period; logs a warning above 0.1.
pub fn check_adiabaticity(model: &MoleculeModel, samples: usize) -> Result<Real> {
    let period = model.period();
    let dt = period * 1e-4;
    let mut worst: Real = 0.0;
    for k in 0..samples.max(1) {
        let t = period * k as Real / samples.max(1) as Real;
        worst = worst.max(adiabaticity_ratio(model, t, dt)?);
    }
    if worst > 0.1 {
        warn!("motion is not adiabatic: ratio {worst:.3} exceeds 0.1; instantaneous-basis generators may be inaccurate");
    }
    Ok(worst)
}
