//! Fast and robust control of interacting spins via invariant-based inverse
//! engineering.
//!
//! Two spins coupled by a Heisenberg or transverse-Ising exchange and driven by
//! a time-dependent magnetic field reduce, in the coupled (singlet–triplet)
//! basis, to an effective three- or two-level problem
//!
//! ```text
//!   H₃ = Ω J_x + Δ J_z          (Heisenberg, spin-1)
//!   H₂ = ½ (Δ σ_z + κ Ω σ_x)    (Ising κ=√2, triangle κ=√3)
//! ```
//!
//! A Lewis–Riesenfeld invariant I(t) parameterized by angles (θ, β) prescribes
//! the state path; the drive components follow from the auxiliary equations
//! θ̇ = −κΩ sinβ, β̇ = Δ − κΩ cotθ cosβ. The leftover freedom in β is shaped so
//! that a chosen second-order error sensitivity (systematic amplitude error,
//! Dzyaloshinskii–Moriya leakage, or detuning shift) vanishes, giving
//! single-shot pulses that flip the spins or prepare the Bell / W state fast
//! and robustly.
//!
//! Module map:
//! - [`spinmodel`] — Hamiltonian matrices in the coupled basis, basis
//!   transforms, subspace reductions, level crossings.
//! - [`invariant`] — the invariant, its eigenstates, LR phases, and the
//!   angle ↔ field maps.
//! - [`pulse`] — ansatz families, the α root-finder, baseline pulses
//!   (flat π, composite, Landau–Zener).
//! - [`sensitivity`] — the q-functionals, closed-form baseline fidelities,
//!   and the fidelity-curve fit used as an independent oracle.
//! - [`dynamics`] — fixed-step 4th-order Schrödinger integration,
//!   propagators, fidelities, parameter sweeps.
//! - [`scenarios`] — the named scenario registry (spin flip, Bell, W state,
//!   baselines, Landau–Zener contrast) and the end-to-end runner.
//! - [`cli`] — the `design` / `sweep` / `reproduce` commands behind the
//!   `spinsta` binary, with CSV/JSON emission.
//!
//! Each registry scenario has a runnable example under `examples/`.
//!
//! # Example
//!
//! Design the error-robust spin flip and verify it by simulation:
//!
//! ```rust
//! use spinsta::dynamics::{integrate, QuantumState, StepControl};
//! use spinsta::pulse::{find_alpha, synthesize, AnsatzSpec, Kappa, MFamily, ThetaFamily};
//! use spinsta::sensitivity::SensitivityKind;
//! use spinsta::spinmodel::{BasisTag, SpinSystemModel};
//!
//! let sol = find_alpha(ThetaFamily::Cubic, 1.0, Kappa::One, SensitivityKind::QS, 0.0)?;
//! assert!((sol.alpha - 0.125).abs() < 0.005);
//!
//! let spec = AnsatzSpec {
//!     theta_family: ThetaFamily::Cubic,
//!     m_family: MFamily::AlphaForm { alpha: sol.alpha },
//!     duration: 1.0,
//!     kappa: Kappa::One,
//! };
//! let model = SpinSystemModel::heisenberg_iso(10.0);
//! let pulse = synthesize(&spec, &model)?;
//!
//! let up = QuantumState::basis_state(3, 0, BasisTag::Coupled);
//! let run = integrate(&model, &pulse, &up, StepControl::default())?;
//! assert!(run.final_population(2) > 1.0 - 1e-6); // |ψ₁,₋₁⟩ reached
//! # Ok::<(), spinsta::Error>(())
//! ```

pub mod cli;
pub mod config;
pub mod dynamics;
pub mod invariant;
pub mod numeric;
pub mod output;
pub mod pulse;
pub mod scenarios;
pub mod sensitivity;
pub mod spinmodel;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration: {0}")]
    Config(String),
    #[error("time {t} outside pulse support [0, {duration}]")]
    OutsideSupport { t: f64, duration: f64 },
    #[error("basis mismatch: expected {expected}, found {found}")]
    BasisMismatch { expected: String, found: String },
    #[error(
        "dropped level couples to kept subspace: |H[{row},{col}]| = {magnitude:.3e} exceeds tolerance {tolerance:.3e}"
    )]
    DecouplingViolation {
        row: usize,
        col: usize,
        magnitude: f64,
        tolerance: f64,
    },
    #[error("no level crossing: sweep rate A = 0")]
    NoCrossing,
    #[error("design: {0}")]
    Design(String),
    #[error("quadrature did not converge: worst subinterval [{a:.6}, {b:.6}], error {err:.3e}")]
    Quadrature { a: f64, b: f64, err: f64 },
    #[error("sensitivity root search failed: {0}")]
    RootSearch(String),
    #[error("integration: {0}")]
    Integration(String),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
