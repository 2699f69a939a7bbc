//! Named scenario registry and the end-to-end runner.
//!
//! Each scenario binds a model, a design recipe, initial/target states and a
//! default sweep. The registry covers the spin-flip and Bell-state designs
//! with their robustness sweeps, the flat/composite baseline comparison, the
//! Landau–Zener contrast, the three-spin W state, a three-level check of the
//! Ising two-level reduction, and a linear-sweep adiabatic reference.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::dynamics::{
    self, grid_inclusive, integrate, integrate_h, simulate_composite, QuantumState, Representation,
    SimulationResult, StepControl,
};
use crate::output::SweepData;
use crate::pulse::{
    composite_sequence, find_alpha, landau_zener, synthesize, AnsatzSpec, ControlPulse, Kappa,
    MFamily, ThetaFamily,
};
use crate::sensitivity::{
    self, fit_sensitivity_fn, SensitivityKind, SensitivityReport, SimFitRecord,
};
use crate::spinmodel::{build_hamiltonian, InteractionKind, SpinSystemModel};
use crate::{Error, Result};

/// How a scenario's pulse is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DesignKind {
    /// Inverse-engineered ansatz; `m` may carry a solved-at-runtime α.
    Shortcut { theta: ThetaFamily, m: MPlan },
    /// Flat π pulse (comparison baselines).
    FlatPi,
    /// Constant-Rabi linear chirp.
    LandauZener { omega0: f64, chirp: f64 },
    /// Constant Rabi with a linear detuning sweep (adiabatic reference).
    LinearSweep { omega0: f64, delta_span: f64 },
}

/// Phase-family plan of a shortcut design.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MPlan {
    /// α solved by nullifying the given sensitivity.
    Solve(SensitivityKind),
    /// Integer-n family (already nullifies q_Ω).
    NForm {
        n: u32,
    },
    /// Fixed α.
    Alpha {
        alpha: f64,
    },
    Zero,
}

/// Sweep parameter of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    /// Ω and Δ scaled by (1+δ) together (Heisenberg systematic error).
    Systematic,
    /// Only Ω scaled by (1+δ) (two-level amplitude error).
    RabiError,
    /// DM strength D of the four-level Heisenberg model.
    DmStrength,
    /// Static detuning shift ∓δ/2 on the two-level diagonal.
    DetuningShift,
}

impl SweepParam {
    /// CSV column name of the parameter.
    pub fn column(&self) -> &'static str {
        match self {
            SweepParam::DmStrength => "D",
            _ => "delta",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPlan {
    pub param: SweepParam,
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

/// A named, fully specified experiment.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: &'static str,
    pub title: &'static str,
    pub model: SpinSystemModel,
    pub design: DesignKind,
    pub duration: f64,
    pub initial: usize,
    pub target: usize,
    pub sweep: Option<SweepPlan>,
    pub sensitivity: Option<SensitivityKind>,
    /// Extra duration factor for the three-level reduction check (the design
    /// is stretched so Ω ≪ J holds; 1.0 everywhere else).
    pub stretch: f64,
    /// Include flat-π and composite columns in the sweep (Fig. 6 style).
    pub with_composite: bool,
}

fn kappa_of(model: &SpinSystemModel) -> Kappa {
    match model.kind {
        InteractionKind::IsingTransverse | InteractionKind::IsingDm => Kappa::Sqrt2,
        InteractionKind::TriangleIsing3 => Kappa::Sqrt3,
        _ => Kappa::One,
    }
}

/// The scenario catalog.
pub fn registry() -> Vec<Scenario> {
    let base = Scenario {
        name: "",
        title: "",
        model: SpinSystemModel::heisenberg_iso(10.0),
        design: DesignKind::FlatPi,
        duration: 1.0,
        initial: 0,
        target: 2,
        sweep: None,
        sensitivity: None,
        stretch: 1.0,
        with_composite: false,
    };
    vec![
        Scenario {
            name: "heis-flip-optimal",
            title: "Heisenberg spin flip, systematic-error-optimal shortcut",
            model: SpinSystemModel::heisenberg_iso(10.0),
            design: DesignKind::Shortcut {
                theta: ThetaFamily::Cubic,
                m: MPlan::Solve(SensitivityKind::QS),
            },
            sweep: Some(SweepPlan {
                param: SweepParam::Systematic,
                lo: -0.5,
                hi: 0.5,
                step: 0.01,
            }),
            sensitivity: Some(SensitivityKind::QS),
            ..base.clone()
        },
        Scenario {
            name: "heis-flip-dm",
            title: "Heisenberg spin flip robust to the DM interaction",
            model: SpinSystemModel::heisenberg_dm(10.0, 1.0),
            design: DesignKind::Shortcut {
                theta: ThetaFamily::Cubic,
                m: MPlan::Solve(SensitivityKind::QD),
            },
            initial: 0,
            target: 3,
            sweep: Some(SweepPlan {
                param: SweepParam::DmStrength,
                lo: 0.0,
                hi: 2.0,
                step: 0.1,
            }),
            sensitivity: Some(SensitivityKind::QD),
            ..base.clone()
        },
        Scenario {
            name: "ising-bell-amp",
            title: "Ising Bell-state preparation robust to amplitude error",
            model: SpinSystemModel::ising(10.0, 10.0, 20.0),
            design: DesignKind::Shortcut {
                theta: ThetaFamily::Sine,
                m: MPlan::NForm { n: 1 },
            },
            target: 1,
            sweep: Some(SweepPlan {
                param: SweepParam::RabiError,
                lo: -0.5,
                hi: 0.5,
                step: 0.01,
            }),
            sensitivity: Some(SensitivityKind::QOmega),
            ..base.clone()
        },
        Scenario {
            name: "ising-bell-dm",
            title: "Ising Bell-state preparation robust to the DM detuning shift",
            model: SpinSystemModel::ising_dm(10.0, 1.0, 10.0, 20.0),
            design: DesignKind::Shortcut {
                theta: ThetaFamily::Sine,
                m: MPlan::Solve(SensitivityKind::QDelta),
            },
            target: 1,
            sweep: Some(SweepPlan {
                param: SweepParam::DetuningShift,
                lo: -0.5,
                hi: 0.5,
                step: 0.01,
            }),
            sensitivity: Some(SensitivityKind::QDelta),
            ..base.clone()
        },
        Scenario {
            name: "baselines-compare",
            title: "Shortcut vs flat π vs composite, both representations",
            model: SpinSystemModel::heisenberg_iso(10.0),
            design: DesignKind::Shortcut {
                theta: ThetaFamily::Cubic,
                m: MPlan::Solve(SensitivityKind::QS),
            },
            sweep: Some(SweepPlan {
                param: SweepParam::Systematic,
                lo: -0.5,
                hi: 0.5,
                step: 0.01,
            }),
            with_composite: true,
            ..base.clone()
        },
        Scenario {
            name: "lz-adiabatic",
            title: "Landau–Zener reference sweep (Ω₀ = 8, a = 4)",
            model: SpinSystemModel::heisenberg_iso(10.0),
            design: DesignKind::LandauZener {
                omega0: 8.0,
                chirp: 4.0,
            },
            duration: 20.0,
            ..base.clone()
        },
        Scenario {
            name: "triangle-w3",
            title: "Three-spin W-state preparation (√3-enhanced Rabi)",
            model: SpinSystemModel::triangle(10.0, 10.0, 20.0),
            design: DesignKind::Shortcut {
                theta: ThetaFamily::Sine,
                m: MPlan::NForm { n: 1 },
            },
            target: 1,
            sweep: Some(SweepPlan {
                param: SweepParam::RabiError,
                lo: -0.5,
                hi: 0.5,
                step: 0.01,
            }),
            sensitivity: Some(SensitivityKind::QOmega),
            ..base.clone()
        },
        Scenario {
            name: "ising-bell-3level",
            title: "Two-level reduction check against the rotating-frame triplet",
            model: SpinSystemModel::ising(10.0, 10.0, 20.0).with_dim(3),
            design: DesignKind::Shortcut {
                theta: ThetaFamily::Sine,
                m: MPlan::NForm { n: 1 },
            },
            target: 1,
            stretch: 10.0,
            ..base.clone()
        },
        Scenario {
            name: "ising-adiabatic-ref",
            title: "Linear-sweep adiabatic reference for the Bell transfer",
            model: SpinSystemModel::ising(10.0, 10.0, 20.0),
            design: DesignKind::LinearSweep {
                omega0: std::f64::consts::PI / 2.0f64.sqrt(),
                delta_span: 10.0,
            },
            target: 1,
            ..base
        },
    ]
}

/// Look a scenario up by name.
pub fn find(name: &str) -> Result<Scenario> {
    registry()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownScenario(name.to_string()))
}

/// Options of a scenario run.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub steps_per_unit: usize,
    pub quad_tol: f64,
    /// Compute the default (or overridden) sweep.
    pub with_sweep: bool,
    /// Attach the simulated-fit cross-check to sensitivity reports.
    pub with_sim_fit: bool,
    pub sweep_override: Option<SweepPlan>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            steps_per_unit: dynamics::STEPS_PER_UNIT,
            quad_tol: sensitivity::QUAD_TOL,
            with_sweep: true,
            with_sim_fit: true,
            sweep_override: None,
        }
    }
}

/// The concrete design of a scenario after α resolution.
#[derive(Debug, Clone)]
pub struct ResolvedDesign {
    pub pulse: ControlPulse,
    pub ansatz: Option<AnsatzSpec>,
    pub alpha: Option<f64>,
    pub alpha_zero_found: Option<bool>,
}

/// Resolve the scenario's design into a pulse (running the α search when the
/// plan asks for it).
pub fn resolve_design(scenario: &Scenario) -> Result<ResolvedDesign> {
    let kappa = kappa_of(&scenario.model);
    let duration = scenario.duration;
    match scenario.design {
        DesignKind::Shortcut { theta, m } => {
            let (m_family, alpha, zero_found) = match m {
                MPlan::Solve(kind) => {
                    let sol = find_alpha(theta, duration, kappa, kind, scenario.model.j)?;
                    (
                        MFamily::AlphaForm { alpha: sol.alpha },
                        Some(sol.alpha),
                        Some(sol.zero_found),
                    )
                }
                MPlan::Alpha { alpha } => (MFamily::AlphaForm { alpha }, Some(alpha), None),
                MPlan::NForm { n } => (MFamily::NForm { n }, None, None),
                MPlan::Zero => (MFamily::Zero, None, None),
            };
            let spec = AnsatzSpec {
                theta_family: theta,
                m_family,
                duration,
                kappa,
            };
            let design_model = design_model_of(scenario);
            let pulse = synthesize(&spec, &design_model)?;
            let pulse = if scenario.stretch != 1.0 {
                pulse.stretched(duration * scenario.stretch)
            } else {
                pulse
            };
            Ok(ResolvedDesign {
                pulse,
                ansatz: Some(spec),
                alpha,
                alpha_zero_found: zero_found,
            })
        }
        DesignKind::FlatPi => Ok(ResolvedDesign {
            pulse: ControlPulse::flat_pi(duration, kappa.value()),
            ansatz: None,
            alpha: None,
            alpha_zero_found: None,
        }),
        DesignKind::LandauZener { omega0, chirp } => Ok(ResolvedDesign {
            pulse: landau_zener(omega0, chirp, duration),
            ansatz: None,
            alpha: None,
            alpha_zero_found: None,
        }),
        DesignKind::LinearSweep { omega0, delta_span } => {
            let half = delta_span / 2.0;
            Ok(ResolvedDesign {
                pulse: ControlPulse::from_fns(
                    move |_| omega0,
                    move |t| -half + delta_span * t / duration,
                    duration,
                ),
                ansatz: None,
                alpha: None,
                alpha_zero_found: None,
            })
        }
    }
}

/// The model the pulse is designed against (the DM strength is a
/// perturbation, not part of the design).
fn design_model_of(scenario: &Scenario) -> SpinSystemModel {
    match scenario.model.kind {
        InteractionKind::HeisenbergDm => SpinSystemModel::heisenberg_iso(scenario.model.j),
        InteractionKind::IsingDm => {
            SpinSystemModel::ising(scenario.model.j, scenario.model.a, scenario.model.omega)
        }
        _ => {
            let mut m = scenario.model;
            m.dim = match m.kind {
                InteractionKind::IsingTransverse => 2,
                _ => m.dim.min(3),
            };
            m
        }
    }
}

/// Fidelity of the scenario's pulse under a perturbation of strength `x`
/// (interpreted by `param`), simulated in the scenario's working model.
pub fn perturbed_fidelity(
    scenario: &Scenario,
    pulse: &ControlPulse,
    param: SweepParam,
    x: f64,
    steps_per_unit: usize,
) -> Result<f64> {
    let ctrl = StepControl {
        steps_per_unit,
        ..StepControl::default()
    };
    let run = perturbed_run(scenario, pulse, param, x, ctrl)?;
    Ok(run.final_population(scenario.target))
}

/// Full perturbed trajectory; see [`perturbed_fidelity`].
pub fn perturbed_run(
    scenario: &Scenario,
    pulse: &ControlPulse,
    param: SweepParam,
    x: f64,
    ctrl: StepControl,
) -> Result<SimulationResult> {
    let model = scenario.model;
    let psi0 = initial_state(scenario)?;
    match param {
        SweepParam::Systematic => integrate(&model, &pulse.scaled(1.0 + x), &psi0, ctrl),
        SweepParam::RabiError => integrate(&model, &pulse.scaled_omega(1.0 + x), &psi0, ctrl),
        SweepParam::DmStrength => {
            let mut m = model;
            m.d = x;
            m.kind = InteractionKind::HeisenbergDm;
            m.dim = 4;
            integrate(&m, pulse, &psi0, ctrl)
        }
        SweepParam::DetuningShift => {
            // H → H + ½ diag(−x, +x): the DM-as-detuning perturbation
            let base = design_model_of(scenario);
            if base.dim != 2 {
                return Err(Error::Config(format!(
                    "detuning-shift sweep needs the two-level representation, got dim {}",
                    base.dim
                )));
            }
            let h0 = build_hamiltonian(&base, 0.0, pulse)?;
            let duration = pulse.duration();
            let nsteps = ctrl.steps_for(duration);
            let shift = {
                let mut s = DMatrix::from_element(2, 2, C64::new(0.0, 0.0));
                s[(0, 0)] = C64::new(-0.5 * x, 0.0);
                s[(1, 1)] = C64::new(0.5 * x, 0.0);
                s
            };
            integrate_h(
                |t| {
                    build_hamiltonian(&base, t.clamp(0.0, duration), pulse)
                        .expect("Hamiltonian defined on the pulse support")
                        .mat
                        + shift.clone()
                },
                &psi0.amps,
                duration,
                nsteps,
                h0.basis,
                ctrl.max_norm_drift,
            )
        }
    }
}

fn initial_state(scenario: &Scenario) -> Result<QuantumState> {
    let h_basis = build_hamiltonian(
        &scenario.model,
        0.0,
        &ControlPulse::zero(scenario.duration * scenario.stretch),
    )?
    .basis;
    Ok(QuantumState::basis_state(
        scenario.model.dim,
        scenario.initial,
        h_basis,
    ))
}

fn target_state(scenario: &Scenario) -> Result<QuantumState> {
    let h_basis = build_hamiltonian(
        &scenario.model,
        0.0,
        &ControlPulse::zero(scenario.duration * scenario.stretch),
    )?
    .basis;
    Ok(QuantumState::basis_state(
        scenario.model.dim,
        scenario.target,
        h_basis,
    ))
}

/// Named check values attached to a run (golden numbers, cross-checks).
#[derive(Debug, Clone, Serialize)]
pub struct NamedValue {
    pub name: String,
    pub value: f64,
}

/// Serializable design record of a run.
#[derive(Debug, Clone, Serialize)]
pub struct DesignRecord {
    pub schema_version: u32,
    pub scenario: String,
    pub title: String,
    pub model: SpinSystemModel,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ansatz: Option<AnsatzSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_zero_found: Option<bool>,
    pub duration: f64,
    pub peak_omega: f64,
    pub final_fidelity: f64,
    pub sensitivities: Vec<SensitivityReport>,
    pub checks: Vec<NamedValue>,
}

/// Version stamp of the JSON records.
pub const SCHEMA_VERSION: u32 = 1;

/// Everything a scenario run produces.
#[derive(Debug)]
pub struct ScenarioRun {
    pub scenario: Scenario,
    pub design: ResolvedDesign,
    pub record: DesignRecord,
    pub sim: SimulationResult,
    pub sweeps: Vec<SweepData>,
}

/// Synthesize, simulate, evaluate sensitivities and (optionally) sweep.
pub fn run(scenario: &Scenario, opts: &RunOptions) -> Result<ScenarioRun> {
    let design = resolve_design(scenario)?;
    let ctrl = StepControl {
        steps_per_unit: opts.steps_per_unit,
        ..StepControl::default()
    };

    let psi0 = initial_state(scenario)?;
    let target = target_state(scenario)?;
    let sim = integrate(&scenario.model, &design.pulse, &psi0, ctrl)?.with_target(&target)?;
    let final_fidelity = sim.final_fidelity.unwrap();

    let mut checks = Vec::new();
    let mut reports = Vec::new();

    if let Some(kind) = scenario.sensitivity {
        let report = sensitivity_report(scenario, &design, kind, opts)?;
        reports.push(report);
    }

    match scenario.name {
        "heis-flip-dm" => {
            checks.push(NamedValue {
                name: "max_singlet_population".into(),
                value: sim.max_population(2),
            });
        }
        "lz-adiabatic" => {
            let f1 = lz_fidelity(8.0, 4.0, 1.0, opts.steps_per_unit)?;
            checks.push(NamedValue {
                name: "fidelity_t1".into(),
                value: f1,
            });
            checks.push(NamedValue {
                name: "fidelity_t20".into(),
                value: final_fidelity,
            });
        }
        "ising-bell-3level" => {
            // compare against the exact two-level run of the same stretched pulse
            let two =
                SpinSystemModel::ising(scenario.model.j, scenario.model.a, scenario.model.omega);
            let psi2 = QuantumState::basis_state(2, 0, crate::spinmodel::BasisTag::RotatingFrame);
            let run2 = integrate(&two, &design.pulse, &psi2, ctrl)?;
            let f2 = run2.final_population(1);
            checks.push(NamedValue {
                name: "two_level_fidelity".into(),
                value: f2,
            });
            checks.push(NamedValue {
                name: "reduction_gap".into(),
                value: (f2 - final_fidelity).abs(),
            });
        }
        _ => {}
    }

    let mut sweeps = Vec::new();
    if opts.with_sweep {
        let plan = opts.sweep_override.or(scenario.sweep);
        if let Some(plan) = plan {
            sweeps = run_sweeps(scenario, &design, plan, opts)?;
        }
    }

    let record = DesignRecord {
        schema_version: SCHEMA_VERSION,
        scenario: scenario.name.to_string(),
        title: scenario.title.to_string(),
        model: scenario.model,
        ansatz: design.ansatz,
        alpha: design.alpha,
        alpha_zero_found: design.alpha_zero_found,
        duration: design.pulse.duration(),
        peak_omega: design.pulse.peak_omega(),
        final_fidelity,
        sensitivities: reports,
        checks,
    };

    Ok(ScenarioRun {
        scenario: scenario.clone(),
        design,
        record,
        sim,
        sweeps,
    })
}

fn sensitivity_report(
    scenario: &Scenario,
    design: &ResolvedDesign,
    kind: SensitivityKind,
    opts: &RunOptions,
) -> Result<SensitivityReport> {
    let spec = design
        .ansatz
        .ok_or_else(|| Error::Design("sensitivity of a non-ansatz design".into()))?;
    let angles = spec.angles();
    let m = |t: f64| spec.m_at(t);
    let q = match kind {
        SensitivityKind::QS => sensitivity::q_systematic_with_tol(&angles, &m, opts.quad_tol)?,
        SensitivityKind::QD => {
            sensitivity::q_dm_with_tol(&angles, &m, scenario.model.j, opts.quad_tol)?
        }
        SensitivityKind::QOmega => sensitivity::q_rabi_with_tol(&angles, &m, opts.quad_tol)?,
        SensitivityKind::QDelta => sensitivity::q_detuning_with_tol(&angles, &m, opts.quad_tol)?,
    };
    let sim_fit = if opts.with_sim_fit {
        let param = fit_param(kind);
        let fit = fit_sensitivity_fn(
            |x| perturbed_fidelity(scenario, &design.pulse, param, x, opts.steps_per_unit),
            0.02,
        )?;
        Some(SimFitRecord {
            fitted_q: fit.q,
            residual: (fit.q - q.value).abs(),
        })
    } else {
        None
    };
    Ok(SensitivityReport {
        kind,
        value: q.value,
        units: kind.units(),
        alpha: design.alpha,
        quad_error: q.quad_error,
        sim_fit,
    })
}

/// The perturbation each sensitivity kind is fitted against.
pub fn fit_param(kind: SensitivityKind) -> SweepParam {
    match kind {
        SensitivityKind::QS => SweepParam::Systematic,
        SensitivityKind::QD => SweepParam::DmStrength,
        SensitivityKind::QOmega => SweepParam::RabiError,
        SensitivityKind::QDelta => SweepParam::DetuningShift,
    }
}

fn run_sweeps(
    scenario: &Scenario,
    design: &ResolvedDesign,
    plan: SweepPlan,
    opts: &RunOptions,
) -> Result<Vec<SweepData>> {
    if scenario.with_composite {
        return baselines_sweeps(plan, opts);
    }
    let grid = grid_inclusive(plan.lo, plan.hi, plan.step)?;
    let kappa = kappa_of(&scenario.model).value();
    let flat = ControlPulse::flat_pi(scenario.duration, kappa);
    let optimal = dynamics::sweep(&grid, |x| {
        perturbed_fidelity(scenario, &design.pulse, plan.param, x, opts.steps_per_unit)
    })?;
    let flat_curve = dynamics::sweep(&grid, |x| {
        perturbed_fidelity(scenario, &flat, plan.param, x, opts.steps_per_unit)
    })?;
    let rows = optimal
        .iter()
        .zip(flat_curve.iter())
        .map(|(&(x, fo), &(_, ff))| vec![x, fo, ff])
        .collect();
    Ok(vec![SweepData {
        name: scenario.name.to_string(),
        param: plan.param.column().to_string(),
        columns: vec!["fidelity_optimal".into(), "fidelity_flat".into()],
        rows,
    }])
}

/// The Fig.-6-style comparison: shortcut vs flat π vs composite for both the
/// Heisenberg (spin-1) and Ising (two-level) representations.
fn baselines_sweeps(plan: SweepPlan, opts: &RunOptions) -> Result<Vec<SweepData>> {
    let grid = grid_inclusive(plan.lo, plan.hi, plan.step)?;
    let steps = opts.steps_per_unit;
    let mut out = Vec::new();

    let heis = find("heis-flip-optimal")?;
    let heis_design = resolve_design(&heis)?;
    let flat3 = ControlPulse::flat_pi(heis.duration, 1.0);
    let segs = composite_sequence(2.0 * heis.duration);
    let optimal = dynamics::sweep(&grid, |x| {
        perturbed_fidelity(&heis, &heis_design.pulse, SweepParam::Systematic, x, steps)
    })?;
    let flat_curve = dynamics::sweep(&grid, |x| {
        perturbed_fidelity(&heis, &flat3, SweepParam::Systematic, x, steps)
    })?;
    let comp_curve = dynamics::sweep(&grid, |x| {
        let psi = simulate_composite(&segs, Representation::Spin1, x, steps)?;
        Ok(psi[2].norm_sqr())
    })?;
    out.push(SweepData {
        name: "baselines-heisenberg".into(),
        param: "delta".into(),
        columns: vec![
            "fidelity_optimal".into(),
            "fidelity_flat".into(),
            "fidelity_composite".into(),
        ],
        rows: optimal
            .iter()
            .zip(&flat_curve)
            .zip(&comp_curve)
            .map(|((&(x, fo), &(_, ff)), &(_, fc))| vec![x, fo, ff, fc])
            .collect(),
    });

    let ising = find("ising-bell-amp")?;
    let ising_design = resolve_design(&ising)?;
    let flat2 = ControlPulse::flat_pi(ising.duration, 2.0f64.sqrt());
    let optimal = dynamics::sweep(&grid, |x| {
        perturbed_fidelity(&ising, &ising_design.pulse, SweepParam::RabiError, x, steps)
    })?;
    let flat_curve = dynamics::sweep(&grid, |x| {
        perturbed_fidelity(&ising, &flat2, SweepParam::RabiError, x, steps)
    })?;
    let comp_curve = dynamics::sweep(&grid, |x| {
        let psi = simulate_composite(&segs, Representation::TwoLevel, x, steps)?;
        Ok(psi[1].norm_sqr())
    })?;
    out.push(SweepData {
        name: "baselines-ising".into(),
        param: "delta".into(),
        columns: vec![
            "fidelity_optimal".into(),
            "fidelity_flat".into(),
            "fidelity_composite".into(),
        ],
        rows: optimal
            .iter()
            .zip(&flat_curve)
            .zip(&comp_curve)
            .map(|((&(x, fo), &(_, ff)), &(_, fc))| vec![x, fo, ff, fc])
            .collect(),
    });

    Ok(out)
}

/// Landau–Zener flip fidelity for the printed protocol at a given duration.
pub fn lz_fidelity(omega0: f64, chirp: f64, duration: f64, steps_per_unit: usize) -> Result<f64> {
    let model = SpinSystemModel::heisenberg_iso(10.0);
    let pulse = landau_zener(omega0, chirp, duration);
    let psi0 = QuantumState::basis_state(3, 0, crate::spinmodel::BasisTag::Coupled);
    let ctrl = StepControl {
        steps_per_unit,
        ..StepControl::default()
    };
    let run = integrate(&model, &pulse, &psi0, ctrl)?;
    Ok(run.final_population(2))
}
