//! Time-dependent Schrödinger integration for 2–4 level systems.
//!
//! The integrator is the classic fixed-step 4th-order scheme with the
//! Hamiltonian evaluated at substage times; no adaptive stepping, so runs are
//! deterministic and suitable for golden tests. States are recorded on a
//! decimated grid (the final state exactly).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::pulse::{Axis, ControlPulse, PulseSegment};
use crate::spinmodel::{
    build_hamiltonian, spin1_generators, BasisTag, OperatorMatrix, SpinSystemModel,
};
use crate::{Error, Result};

/// Default number of integration steps per unit time.
pub const STEPS_PER_UNIT: usize = 10_000;

/// Maximum recorded trajectory points (the integrator keeps every step's
/// physics, this only bounds what is stored).
const RECORD_CAP: usize = 2001;

/// A pure state with its basis tag.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    pub amps: DVector<C64>,
    pub basis: BasisTag,
}

impl QuantumState {
    pub fn new(amps: DVector<C64>, basis: BasisTag) -> Self {
        Self { amps, basis }
    }

    /// The `index`-th basis state of a `dim`-level system.
    pub fn basis_state(dim: usize, index: usize, basis: BasisTag) -> Self {
        assert!(
            index < dim,
            "basis index {index} out of range for dim {dim}"
        );
        let mut amps = DVector::from_element(dim, C64::new(0.0, 0.0));
        amps[index] = C64::new(1.0, 0.0);
        Self { amps, basis }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amps.iter().map(|z| z.norm_sqr()).collect()
    }
}

/// Step-size control for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    pub steps_per_unit: usize,
    /// Permitted |‖ψ‖² − 1| at the end of the run.
    pub max_norm_drift: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            steps_per_unit: STEPS_PER_UNIT,
            max_norm_drift: 1e-9,
        }
    }
}

impl StepControl {
    pub fn steps_for(&self, duration: f64) -> usize {
        ((self.steps_per_unit as f64 * duration).ceil() as usize).max(16)
    }
}

/// Time grid, recorded states and per-basis-state populations of one run.
#[derive(Debug, Clone)]
pub struct SimulationResult {
    pub times: Vec<f64>,
    pub states: Vec<DVector<C64>>,
    /// `populations[k][i]` = |⟨i|ψ(t_k)⟩|².
    pub populations: Vec<Vec<f64>>,
    pub basis: BasisTag,
    pub final_fidelity: Option<f64>,
}

impl SimulationResult {
    pub fn final_state(&self) -> &DVector<C64> {
        self.states
            .last()
            .expect("a run records at least one state")
    }

    /// Population of basis state `index` at the end of the run.
    pub fn final_population(&self, index: usize) -> f64 {
        self.final_state()[index].norm_sqr()
    }

    /// Largest recorded population of basis state `index`.
    pub fn max_population(&self, index: usize) -> f64 {
        self.populations
            .iter()
            .map(|p| p[index])
            .fold(0.0, f64::max)
    }

    /// Attach the overlap with `target` as the run's final fidelity.
    pub fn with_target(mut self, target: &QuantumState) -> Result<Self> {
        let f = state_fidelity(
            &QuantumState::new(self.final_state().clone(), self.basis),
            target,
        )?;
        self.final_fidelity = Some(f);
        Ok(self)
    }
}

/// Integrate i∂ₜψ = H(t)ψ with a caller-supplied Hamiltonian closure.
pub fn integrate_h<H>(
    hamiltonian: H,
    psi0: &DVector<C64>,
    duration: f64,
    nsteps: usize,
    basis: BasisTag,
    max_norm_drift: f64,
) -> Result<SimulationResult>
where
    H: Fn(f64) -> DMatrix<C64>,
{
    let minus_i = C64::new(0.0, -1.0);
    let h = duration / nsteps as f64;
    let stride = (nsteps / (RECORD_CAP - 1)).max(1);

    let mut psi = psi0.clone();
    let mut times = Vec::with_capacity(RECORD_CAP + 1);
    let mut states = Vec::with_capacity(RECORD_CAP + 1);
    times.push(0.0);
    states.push(psi.clone());

    for k in 0..nsteps {
        let t = k as f64 * h;
        let h_a = hamiltonian(t) * minus_i;
        let h_m = hamiltonian(t + 0.5 * h) * minus_i;
        let h_b = hamiltonian(t + h) * minus_i;
        let k1 = &h_a * &psi;
        let k2 = &h_m * &(&psi + &k1 * C64::new(0.5 * h, 0.0));
        let k3 = &h_m * &(&psi + &k2 * C64::new(0.5 * h, 0.0));
        let k4 = &h_b * &(&psi + &k3 * C64::new(h, 0.0));
        psi +=
            (k1 + k2 * C64::new(2.0, 0.0) + k3 * C64::new(2.0, 0.0) + k4) * C64::new(h / 6.0, 0.0);
        if (k + 1) % stride == 0 || k + 1 == nsteps {
            times.push((k + 1) as f64 * h);
            states.push(psi.clone());
        }
    }

    let drift = (states
        .last()
        .unwrap()
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        - 1.0)
        .abs();
    if drift > max_norm_drift {
        return Err(Error::Integration(format!(
            "norm drift {drift:.3e} exceeds {max_norm_drift:.1e} after {nsteps} steps \
             over duration {duration}; increase the step count"
        )));
    }
    let populations = states
        .iter()
        .map(|s| s.iter().map(|z| z.norm_sqr()).collect::<Vec<f64>>())
        .collect();
    Ok(SimulationResult {
        times,
        states,
        populations,
        basis,
        final_fidelity: None,
    })
}

/// Integrate `model` driven by `pulse` from `psi0` over the pulse support.
pub fn integrate(
    model: &SpinSystemModel,
    pulse: &ControlPulse,
    psi0: &QuantumState,
    ctrl: StepControl,
) -> Result<SimulationResult> {
    if psi0.dim() != model.dim {
        return Err(Error::Config(format!(
            "initial state has dim {}, model works in dim {}",
            psi0.dim(),
            model.dim
        )));
    }
    if (psi0.norm_sqr() - 1.0).abs() > 1e-9 {
        return Err(Error::Config("initial state is not normalized".into()));
    }
    let h0 = build_hamiltonian(model, 0.0, pulse)?;
    if h0.basis != psi0.basis {
        return Err(Error::BasisMismatch {
            expected: h0.basis.to_string(),
            found: psi0.basis.to_string(),
        });
    }
    let duration = pulse.duration();
    let nsteps = ctrl.steps_for(duration);
    integrate_h(
        |t| {
            build_hamiltonian(model, t.clamp(0.0, duration), pulse)
                .expect("Hamiltonian is defined on the pulse support")
                .mat
        },
        &psi0.amps,
        duration,
        nsteps,
        h0.basis,
        ctrl.max_norm_drift,
    )
}

/// Propagator over the pulse support by column-by-column integration.
pub fn propagator(
    model: &SpinSystemModel,
    pulse: &ControlPulse,
    ctrl: StepControl,
) -> Result<OperatorMatrix> {
    let h0 = build_hamiltonian(model, 0.0, pulse)?;
    let dim = model.dim;
    let duration = pulse.duration();
    let nsteps = ctrl.steps_for(duration);
    let mut u = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
    for col in 0..dim {
        let e = QuantumState::basis_state(dim, col, h0.basis);
        let run = integrate_h(
            |t| {
                build_hamiltonian(model, t.clamp(0.0, duration), pulse)
                    .expect("Hamiltonian is defined on the pulse support")
                    .mat
            },
            &e.amps,
            duration,
            nsteps,
            h0.basis,
            ctrl.max_norm_drift,
        )?;
        u.set_column(col, run.final_state());
    }
    Ok(OperatorMatrix::new(u, h0.basis))
}

/// ‖U†U − 1‖ (largest entry deviation).
pub fn unitarity_defect(u: &OperatorMatrix) -> f64 {
    let n = u.dim();
    let p = u.mat.adjoint() * &u.mat;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((p[(i, j)] - C64::new(expect, 0.0)).norm());
        }
    }
    worst
}

/// Closed-form spin-1 rotation U = 1 − i sin(φ) J_i + (cos(φ) − 1) J_i².
pub fn rotation_propagator_spin1(axis: Axis, angle: f64) -> OperatorMatrix {
    let (jx, jy, _) = spin1_generators();
    let j = match axis {
        Axis::X => jx.mat,
        Axis::Y => jy.mat,
    };
    let eye = DMatrix::from_diagonal_element(3, 3, C64::new(1.0, 0.0));
    let u = eye + &j * C64::new(0.0, -angle.sin()) + (&j * &j) * C64::new(angle.cos() - 1.0, 0.0);
    OperatorMatrix::new(u, BasisTag::Coupled)
}

/// Two-level rotation U = cos(φ/2) 1 − i sin(φ/2) σ_i.
pub fn rotation_propagator_two_level(axis: Axis, angle: f64) -> OperatorMatrix {
    let mut s = DMatrix::from_element(2, 2, C64::new(0.0, 0.0));
    match axis {
        Axis::X => {
            s[(0, 1)] = C64::new(1.0, 0.0);
            s[(1, 0)] = C64::new(1.0, 0.0);
        }
        Axis::Y => {
            s[(0, 1)] = C64::new(0.0, -1.0);
            s[(1, 0)] = C64::new(0.0, 1.0);
        }
    }
    let eye = DMatrix::from_diagonal_element(2, 2, C64::new(1.0, 0.0));
    let u = eye * C64::new((angle / 2.0).cos(), 0.0) + s * C64::new(0.0, -(angle / 2.0).sin());
    OperatorMatrix::new(u, BasisTag::RotatingFrame)
}

/// Representation a composite sequence acts in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    Spin1,
    TwoLevel,
}

/// Closed-form composite propagator with every segment angle scaled by
/// (1 + δ).
pub fn composite_propagator(
    segments: &[PulseSegment],
    rep: Representation,
    delta: f64,
) -> OperatorMatrix {
    let dim = match rep {
        Representation::Spin1 => 3,
        Representation::TwoLevel => 2,
    };
    let mut u = OperatorMatrix::new(
        DMatrix::from_diagonal_element(dim, dim, C64::new(1.0, 0.0)),
        match rep {
            Representation::Spin1 => BasisTag::Coupled,
            Representation::TwoLevel => BasisTag::RotatingFrame,
        },
    );
    for seg in segments {
        let angle = seg.angle * (1.0 + delta);
        let step = match rep {
            Representation::Spin1 => rotation_propagator_spin1(seg.axis, angle),
            Representation::TwoLevel => rotation_propagator_two_level(seg.axis, angle),
        };
        u = OperatorMatrix::new(step.mat * u.mat, u.basis);
    }
    u
}

/// Simulate a composite sequence segment-by-segment from basis state 0 and
/// return the final state (steps aligned with segment boundaries).
pub fn simulate_composite(
    segments: &[PulseSegment],
    rep: Representation,
    delta: f64,
    steps_per_unit: usize,
) -> Result<DVector<C64>> {
    let (dim, basis) = match rep {
        Representation::Spin1 => (3, BasisTag::Coupled),
        Representation::TwoLevel => (2, BasisTag::RotatingFrame),
    };
    let mut psi = QuantumState::basis_state(dim, 0, basis).amps;
    let (jx3, jy3, _) = spin1_generators();
    for seg in segments {
        let rate = seg.angle * (1.0 + delta) / seg.duration;
        let h = match (rep, seg.axis) {
            (Representation::Spin1, Axis::X) => &jx3.mat * C64::new(rate, 0.0),
            (Representation::Spin1, Axis::Y) => &jy3.mat * C64::new(rate, 0.0),
            (Representation::TwoLevel, axis) => {
                rotation_generator_two_level(axis) * C64::new(rate / 2.0, 0.0)
            }
        };
        let nsteps = ((steps_per_unit as f64 * seg.duration).ceil() as usize).max(16);
        let run = integrate_h(|_| h.clone(), &psi, seg.duration, nsteps, basis, 1e-9)?;
        psi = run.final_state().clone();
    }
    Ok(psi)
}

fn rotation_generator_two_level(axis: Axis) -> DMatrix<C64> {
    let mut s = DMatrix::from_element(2, 2, C64::new(0.0, 0.0));
    match axis {
        Axis::X => {
            s[(0, 1)] = C64::new(1.0, 0.0);
            s[(1, 0)] = C64::new(1.0, 0.0);
        }
        Axis::Y => {
            s[(0, 1)] = C64::new(0.0, -1.0);
            s[(1, 0)] = C64::new(0.0, 1.0);
        }
    }
    s
}

/// |⟨target|ψ⟩|², checking dimensions and basis tags.
pub fn state_fidelity(psi: &QuantumState, target: &QuantumState) -> Result<f64> {
    if psi.basis != target.basis {
        return Err(Error::BasisMismatch {
            expected: target.basis.to_string(),
            found: psi.basis.to_string(),
        });
    }
    if psi.dim() != target.dim() {
        return Err(Error::Config(format!(
            "state dims differ: {} vs {}",
            psi.dim(),
            target.dim()
        )));
    }
    let overlap: C64 = target
        .amps
        .iter()
        .zip(psi.amps.iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(overlap.norm_sqr())
}

/// Evaluate `eval` over a parameter grid in parallel; results are ordered by
/// grid index (never by completion order).
pub fn sweep<F>(grid: &[f64], eval: F) -> Result<Vec<(f64, f64)>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    grid.par_iter().map(|&x| eval(x).map(|f| (x, f))).collect()
}

/// Inclusive grid lo, lo+step, …, hi (last point clamped onto hi when step
/// does not divide the range exactly).
pub fn grid_inclusive(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if step <= 0.0 || hi < lo {
        return Err(Error::Config(format!("empty range {lo}:{hi}:{step}")));
    }
    let n = ((hi - lo) / step).round() as usize;
    let n = if (lo + n as f64 * step - hi).abs() < 1e-9 * step {
        n
    } else {
        ((hi - lo) / step).floor() as usize
    };
    let mut g: Vec<f64> = (0..=n).map(|k| lo + k as f64 * step).collect();
    if let Some(last) = g.last_mut() {
        if (*last - hi).abs() < 1e-9 * step {
            *last = hi;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulse::composite_sequence;
    use crate::sensitivity::{analytic_baseline_fidelity, BaselineKind};
    use std::f64::consts::PI;

    fn series_exp(m: &DMatrix<C64>) -> DMatrix<C64> {
        let n = m.nrows();
        let mut term = DMatrix::from_diagonal_element(n, n, C64::new(1.0, 0.0));
        let mut acc = term.clone();
        for k in 1..60 {
            term = (&term * m) / C64::new(k as f64, 0.0);
            acc += &term;
        }
        acc
    }

    #[test]
    fn zero_pulse_keeps_populations() {
        let model = SpinSystemModel::heisenberg_iso(10.0);
        let pulse = ControlPulse::zero(1.0);
        let psi0 = QuantumState::basis_state(3, 0, BasisTag::Coupled);
        let run = integrate(&model, &pulse, &psi0, StepControl::default()).unwrap();
        for p in &run.populations {
            assert!((p[0] - 1.0).abs() < 1e-12 && p[1] < 1e-24 && p[2] < 1e-24);
        }
    }

    #[test]
    fn flat_pi_flips_spin1() {
        let model = SpinSystemModel::heisenberg_iso(10.0);
        let pulse = ControlPulse::flat_pi(1.0, 1.0);
        let psi0 = QuantumState::basis_state(3, 0, BasisTag::Coupled);
        let target = QuantumState::basis_state(3, 2, BasisTag::Coupled);
        let run = integrate(&model, &pulse, &psi0, StepControl::default())
            .unwrap()
            .with_target(&target)
            .unwrap();
        assert!(run.final_fidelity.unwrap() > 1.0 - 1e-10);
    }

    #[test]
    fn flat_pi_with_error_matches_closed_form() {
        // δ = 0.2: F = cos⁴(0.1π) = 0.8181356…
        let model = SpinSystemModel::heisenberg_iso(10.0);
        let pulse = ControlPulse::flat_pi(1.0, 1.0).scaled(1.2);
        let psi0 = QuantumState::basis_state(3, 0, BasisTag::Coupled);
        let run = integrate(&model, &pulse, &psi0, StepControl::default()).unwrap();
        let f = run.final_population(2);
        assert!(
            (f - 0.818_135_621_484).abs() < 1e-9,
            "F = {f}, expected cos⁴(0.1π)"
        );
    }

    #[test]
    fn norm_conserved_and_drift_flagged() {
        let model = SpinSystemModel::heisenberg_iso(10.0);
        let spec = crate::pulse::AnsatzSpec {
            theta_family: crate::pulse::ThetaFamily::Cubic,
            m_family: crate::pulse::MFamily::AlphaForm { alpha: 0.125 },
            duration: 1.0,
            kappa: crate::pulse::Kappa::One,
        };
        let pulse = crate::pulse::synthesize(&spec, &model).unwrap();
        let psi0 = QuantumState::basis_state(3, 0, BasisTag::Coupled);
        let run = integrate(&model, &pulse, &psi0, StepControl::default()).unwrap();
        for s in &run.states {
            let n: f64 = s.iter().map(|z| z.norm_sqr()).sum();
            assert!((n - 1.0).abs() <= 1e-9, "norm² = {n}");
        }
        // absurdly coarse stepping must be reported, not silently accepted
        let coarse = StepControl {
            steps_per_unit: 4,
            max_norm_drift: 1e-12,
        };
        assert!(matches!(
            integrate(&model, &pulse, &psi0, coarse),
            Err(Error::Integration(_))
        ));
    }

    #[test]
    fn fourth_order_convergence() {
        let model = SpinSystemModel::heisenberg_iso(10.0);
        let spec = crate::pulse::AnsatzSpec {
            theta_family: crate::pulse::ThetaFamily::Cubic,
            m_family: crate::pulse::MFamily::AlphaForm { alpha: 0.1 },
            duration: 1.0,
            kappa: crate::pulse::Kappa::One,
        };
        let pulse = crate::pulse::synthesize(&spec, &model).unwrap();
        let psi0 = QuantumState::basis_state(3, 0, BasisTag::Coupled);
        let run_with = |steps: usize| {
            let ctrl = StepControl {
                steps_per_unit: steps,
                max_norm_drift: 1e-6,
            };
            integrate(&model, &pulse, &psi0, ctrl)
                .unwrap()
                .final_state()
                .clone()
        };
        let reference = run_with(160_000);
        let err = |psi: &DVector<C64>| {
            (psi - &reference)
                .iter()
                .map(|z| z.norm_sqr())
                .sum::<f64>()
                .sqrt()
        };
        let e1 = err(&run_with(1000));
        let e2 = err(&run_with(2000));
        assert!(
            e1 / e2 >= 12.0,
            "halving the step gained only {:.1}×",
            e1 / e2
        );
    }

    #[test]
    fn propagator_identity_and_unitarity() {
        let model = SpinSystemModel::heisenberg_iso(10.0);
        let u = propagator(&model, &ControlPulse::zero(1.0), StepControl::default()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((u.mat[(i, j)] - C64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
        let spec = crate::pulse::AnsatzSpec {
            theta_family: crate::pulse::ThetaFamily::Cubic,
            m_family: crate::pulse::MFamily::AlphaForm { alpha: 0.125 },
            duration: 1.0,
            kappa: crate::pulse::Kappa::One,
        };
        let pulse = crate::pulse::synthesize(&spec, &model).unwrap();
        let u = propagator(&model, &pulse, StepControl::default()).unwrap();
        assert!(
            unitarity_defect(&u) < 1e-8,
            "defect {}",
            unitarity_defect(&u)
        );
        // flat π maps |ψ₁,₁⟩ → |ψ₁,₋₁⟩ up to phase
        let u = propagator(
            &model,
            &ControlPulse::flat_pi(1.0, 1.0),
            StepControl::default(),
        )
        .unwrap();
        assert!((u.mat[(2, 0)].norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rotation_propagator_matches_series_exponential() {
        let (jx, jy, _) = spin1_generators();
        for (axis, j) in [(Axis::X, &jx), (Axis::Y, &jy)] {
            for &angle in &[0.0, 0.3, PI / 2.0, PI, 2.3] {
                let closed = rotation_propagator_spin1(axis, angle);
                let exact = series_exp(&(&j.mat * C64::new(0.0, -angle)));
                let diff: f64 = (&closed.mat - &exact)
                    .iter()
                    .map(|z| z.norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(diff < 1e-12, "axis {axis:?} angle {angle}: diff {diff:.2e}");
            }
        }
        let u = rotation_propagator_spin1(Axis::X, 0.0);
        assert!((u.mat[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-15);
        // π about x flips |ψ₁,₁⟩ → |ψ₁,₋₁⟩ up to phase
        let u = rotation_propagator_spin1(Axis::X, PI);
        assert!((u.mat[(2, 0)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn composite_fidelity_matches_printed_formulas() {
        let segs = composite_sequence(2.0);
        for &d in &[-0.5, -0.2, 0.0, 0.2, 0.3, 0.5] {
            let u = composite_propagator(&segs, Representation::Spin1, d);
            let f = u.mat[(2, 0)].norm_sqr();
            let expect = analytic_baseline_fidelity(BaselineKind::CompositeHeisenberg, d);
            assert!((f - expect).abs() < 1e-10, "spin-1 δ={d}: {f} vs {expect}");
            let u = composite_propagator(&segs, Representation::TwoLevel, d);
            let f = u.mat[(1, 0)].norm_sqr();
            let expect = analytic_baseline_fidelity(BaselineKind::CompositeIsing, d);
            assert!(
                (f - expect).abs() < 1e-10,
                "two-level δ={d}: {f} vs {expect}"
            );
        }
        // δ = 0.3 closed form quoted directly: cos⁸(0.15π) + sin²(0.3π)cos²(0.15π)
        let u = composite_propagator(&segs, Representation::Spin1, 0.3);
        let x = 0.15 * PI;
        let expect = x.cos().powi(8) + (0.3 * PI).sin().powi(2) * x.cos().powi(2);
        assert!((u.mat[(2, 0)].norm_sqr() - expect).abs() < 1e-12);
    }

    #[test]
    fn composite_simulation_agrees_with_closed_form() {
        let segs = composite_sequence(2.0);
        for &d in &[0.0, 0.2, -0.35] {
            let psi = simulate_composite(&segs, Representation::Spin1, d, STEPS_PER_UNIT).unwrap();
            let expect = analytic_baseline_fidelity(BaselineKind::CompositeHeisenberg, d);
            assert!((psi[2].norm_sqr() - expect).abs() < 1e-8, "δ = {d}");
            let psi =
                simulate_composite(&segs, Representation::TwoLevel, d, STEPS_PER_UNIT).unwrap();
            let expect = analytic_baseline_fidelity(BaselineKind::CompositeIsing, d);
            assert!((psi[1].norm_sqr() - expect).abs() < 1e-8, "δ = {d}");
        }
    }

    #[test]
    fn singlet_stays_decoupled_without_dm() {
        let model = SpinSystemModel::heisenberg_iso(10.0).with_dim(4);
        let spec = crate::pulse::AnsatzSpec {
            theta_family: crate::pulse::ThetaFamily::Cubic,
            m_family: crate::pulse::MFamily::AlphaForm { alpha: 0.125 },
            duration: 1.0,
            kappa: crate::pulse::Kappa::One,
        };
        let pulse =
            crate::pulse::synthesize(&spec, &SpinSystemModel::heisenberg_iso(10.0)).unwrap();
        // start with some singlet weight and check it never moves
        let mut amps = DVector::from_element(4, C64::new(0.0, 0.0));
        amps[0] = C64::new(0.8, 0.0);
        amps[2] = C64::new(0.6, 0.0);
        let psi0 = QuantumState::new(amps, BasisTag::Coupled);
        let run = integrate(&model, &pulse, &psi0, StepControl::default()).unwrap();
        for p in &run.populations {
            assert!((p[2] - 0.36).abs() < 1e-10, "singlet population {}", p[2]);
        }
    }

    #[test]
    fn four_level_and_reduced_three_level_agree() {
        // propagating the full four-level Heisenberg matrix and its triplet
        // reduction from a kept-subspace state gives identical amplitudes
        let model4 = SpinSystemModel::heisenberg_iso(10.0).with_dim(4);
        let model3 = SpinSystemModel::heisenberg_iso(10.0);
        let spec = crate::pulse::AnsatzSpec {
            theta_family: crate::pulse::ThetaFamily::Cubic,
            m_family: crate::pulse::MFamily::AlphaForm { alpha: 0.125 },
            duration: 1.0,
            kappa: crate::pulse::Kappa::One,
        };
        let pulse = crate::pulse::synthesize(&spec, &model3).unwrap();
        let mut amps4 = DVector::from_element(4, C64::new(0.0, 0.0));
        amps4[0] = C64::new(0.6, 0.0);
        amps4[1] = C64::new(0.0, 0.48);
        amps4[3] = C64::new(-0.64, 0.0);
        let psi4 = QuantumState::new(amps4.clone(), BasisTag::Coupled);
        let psi3 = QuantumState::new(
            DVector::from_vec(vec![amps4[0], amps4[1], amps4[3]]),
            BasisTag::Coupled,
        );
        let run4 = integrate(&model4, &pulse, &psi4, StepControl::default()).unwrap();
        let run3 = integrate(&model3, &pulse, &psi3, StepControl::default()).unwrap();
        let s4 = run4.final_state();
        let s3 = run3.final_state();
        for (k4, k3) in [(0usize, 0usize), (1, 1), (3, 2)] {
            assert!(
                (s4[k4] - s3[k3]).norm() < 1e-10,
                "kept amplitude {k3}: {} vs {}",
                s4[k4],
                s3[k3]
            );
        }
    }

    #[test]
    fn lab_and_rotating_frame_populations_agree() {
        // linear-sweep Ising drive: the four-level lab frame (e^{∓iωt}
        // couplings) and the rotating-frame triplet stay population-identical
        let (j, a, w) = (10.0, 10.0, 20.0);
        let model4 = SpinSystemModel::ising(j, a, w).with_dim(4);
        let model3 = SpinSystemModel::ising(j, a, w).with_dim(3);
        let duration = 3.0;
        let pulse = ControlPulse::from_fns(move |_| 2.0, move |t| a * t - w + j / 2.0, duration);
        let ctrl = StepControl {
            steps_per_unit: 40_000, // the lab frame oscillates at ω = 20
            ..StepControl::default()
        };
        let psi4 = QuantumState::basis_state(4, 0, BasisTag::Coupled);
        let psi3 = QuantumState::basis_state(3, 0, BasisTag::RotatingFrame);
        let run4 = integrate(&model4, &pulse, &psi4, ctrl).unwrap();
        let run3 = integrate(&model3, &pulse, &psi3, ctrl).unwrap();
        let p4 = run4.final_state();
        let p3 = run3.final_state();
        for (k4, k3) in [(0usize, 0usize), (1, 1), (3, 2)] {
            assert!(
                (p4[k4].norm_sqr() - p3[k3].norm_sqr()).abs() < 1e-9,
                "population {k3}: {} vs {}",
                p4[k4].norm_sqr(),
                p3[k3].norm_sqr()
            );
        }
    }

    #[test]
    fn fidelity_contract() {
        let a = QuantumState::basis_state(3, 0, BasisTag::Coupled);
        let b = QuantumState::basis_state(3, 0, BasisTag::Coupled);
        assert!((state_fidelity(&a, &b).unwrap() - 1.0).abs() < 1e-15);
        let c = QuantumState::basis_state(3, 1, BasisTag::Coupled);
        assert!(state_fidelity(&a, &c).unwrap() < 1e-15);
        let d = QuantumState::basis_state(3, 0, BasisTag::Product);
        assert!(matches!(
            state_fidelity(&a, &d),
            Err(Error::BasisMismatch { .. })
        ));
    }

    #[test]
    fn sweep_orders_by_grid() {
        let grid = grid_inclusive(-0.5, 0.5, 0.25).unwrap();
        assert_eq!(grid.len(), 5);
        let out = sweep(&grid, |x| Ok(x * x)).unwrap();
        for (g, (x, f)) in grid.iter().zip(out.iter()) {
            assert_eq!(g, x);
            assert_eq!(*f, x * x);
        }
        assert!(grid_inclusive(0.5, -0.5, 0.1).is_err());
        assert!(grid_inclusive(0.0, 1.0, 0.0).is_err());
    }
}
