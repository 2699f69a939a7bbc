//! Spin-system Hamiltonians in the coupled (singlet–triplet) basis.
//!
//! Two spin-1/2 particles are described in the total-spin basis, ordered
//!
//! ```text
//!   |ψ₁,₁⟩ = |↑↑⟩
//!   |ψ₁,₀⟩ = (|↑↓⟩ + |↓↑⟩)/√2
//!   |ψ₀,₀⟩ = (|↑↓⟩ − |↓↑⟩)/√2
//!   |ψ₁,₋₁⟩ = |↓↓⟩
//! ```
//!
//! (three-level reductions keep the triplet, ordered |ψ₁,₁⟩, |ψ₁,₀⟩, |ψ₁,₋₁⟩).
//! All energies are in units of the reference field B₀ and time in 1/B₀
//! (ħ = 1); B₀ itself only labels outputs.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::pulse::ControlPulse;
use crate::{Error, Result};

const SQRT2_INV: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Which basis a matrix or state is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisTag {
    /// Product basis |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩.
    Product,
    /// Coupled basis, ordering as in the module docs.
    Coupled,
    /// Coupled basis after the rotating-frame phase transformation.
    RotatingFrame,
}

impl std::fmt::Display for BasisTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BasisTag::Product => write!(f, "product"),
            BasisTag::Coupled => write!(f, "coupled"),
            BasisTag::RotatingFrame => write!(f, "rotating-frame"),
        }
    }
}

/// A square complex matrix tagged with the basis it lives in.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub mat: DMatrix<C64>,
    pub basis: BasisTag,
}

impl OperatorMatrix {
    pub fn new(mat: DMatrix<C64>, basis: BasisTag) -> Self {
        assert!(mat.is_square(), "operator matrices are square");
        Self { mat, basis }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Largest entrywise deviation from Hermiticity, max |H − H†|.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Frobenius norm.
    pub fn fro_norm(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Interaction type of the two- (or three-) spin model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InteractionKind {
    HeisenbergIso,
    HeisenbergAniso,
    HeisenbergDm,
    IsingTransverse,
    IsingDm,
    TriangleIsing3,
}

/// Physical model descriptor: interaction type, couplings and the dimension
/// of the working representation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinSystemModel {
    pub kind: InteractionKind,
    /// Exchange coupling J (units of B₀).
    #[serde(default)]
    pub j: f64,
    /// Anisotropic couplings (HeisenbergAniso only).
    #[serde(default)]
    pub jx: f64,
    #[serde(default)]
    pub jy: f64,
    #[serde(default)]
    pub jz: f64,
    /// Dzyaloshinskii–Moriya magnitude D (units of B₀).
    #[serde(default)]
    pub d: f64,
    /// Detuning sweep rate A (B₀ per unit time).
    #[serde(default)]
    pub a: f64,
    /// Drive frequency ω (units of B₀).
    #[serde(default)]
    pub omega: f64,
    /// Reference field magnitude; sets all units, must be positive.
    #[serde(default = "default_b0")]
    pub b0: f64,
    /// Level count of the working representation (2, 3 or 4).
    pub dim: usize,
}

fn default_b0() -> f64 {
    1.0
}

impl SpinSystemModel {
    fn base(kind: InteractionKind, dim: usize) -> Self {
        Self {
            kind,
            j: 0.0,
            jx: 0.0,
            jy: 0.0,
            jz: 0.0,
            d: 0.0,
            a: 0.0,
            omega: 0.0,
            b0: 1.0,
            dim,
        }
    }

    /// Isotropic Heisenberg exchange, three-level (spin-1) representation.
    pub fn heisenberg_iso(j: f64) -> Self {
        Self {
            j,
            ..Self::base(InteractionKind::HeisenbergIso, 3)
        }
    }

    /// Anisotropic Heisenberg exchange, three-level representation.
    pub fn heisenberg_aniso(jx: f64, jy: f64, jz: f64) -> Self {
        Self {
            jx,
            jy,
            jz,
            ..Self::base(InteractionKind::HeisenbergAniso, 3)
        }
    }

    /// Isotropic Heisenberg exchange plus a z-axis DM term; four levels.
    pub fn heisenberg_dm(j: f64, d: f64) -> Self {
        Self {
            j,
            d,
            ..Self::base(InteractionKind::HeisenbergDm, 4)
        }
    }

    /// Transverse Ising exchange, effective two-level representation.
    pub fn ising(j: f64, a: f64, omega: f64) -> Self {
        Self {
            j,
            a,
            omega,
            ..Self::base(InteractionKind::IsingTransverse, 2)
        }
    }

    /// Transverse Ising with the DM term folded into a detuning shift.
    pub fn ising_dm(j: f64, d: f64, a: f64, omega: f64) -> Self {
        Self {
            j,
            d,
            a,
            omega,
            ..Self::base(InteractionKind::IsingDm, 2)
        }
    }

    /// Three Ising spins on an equilateral triangle, effective two-level.
    pub fn triangle(j: f64, a: f64, omega: f64) -> Self {
        Self {
            j,
            a,
            omega,
            ..Self::base(InteractionKind::TriangleIsing3, 2)
        }
    }

    pub fn with_dim(mut self, dim: usize) -> Self {
        self.dim = dim;
        self
    }

    pub fn with_b0(mut self, b0: f64) -> Self {
        assert!(b0 > 0.0, "B0 must be positive");
        self.b0 = b0;
        self
    }

    /// DM-induced detuning shift δ = 2D²/J of the Ising-DM reduction.
    pub fn dm_shift(&self) -> f64 {
        2.0 * self.d * self.d / self.j
    }

    /// Coupling factor κ of the working representation: the effective Rabi
    /// frequency in the two-level reductions is κΩ.
    pub fn kappa(&self) -> f64 {
        match self.kind {
            InteractionKind::HeisenbergIso
            | InteractionKind::HeisenbergAniso
            | InteractionKind::HeisenbergDm => 1.0,
            InteractionKind::IsingTransverse | InteractionKind::IsingDm => 2.0f64.sqrt(),
            InteractionKind::TriangleIsing3 => 3.0f64.sqrt(),
        }
    }

    /// Human-readable labels of the working-representation basis states.
    pub fn state_labels(&self) -> Vec<&'static str> {
        match (self.kind, self.dim) {
            (InteractionKind::TriangleIsing3, 2) => vec!["psi_3/2,3/2", "psi_3/2,1/2"],
            (_, 2) => vec!["psi_1,1", "psi_1,0"],
            (_, 3) => vec!["psi_1,1", "psi_1,0", "psi_1,-1"],
            (_, 4) => vec!["psi_1,1", "psi_1,0", "psi_0,0", "psi_1,-1"],
            _ => vec![],
        }
    }
}

fn zeros(n: usize) -> DMatrix<C64> {
    DMatrix::from_element(n, n, C64::new(0.0, 0.0))
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Spin-1 generator matrices (J_x, J_y, J_z) in the z eigenbasis; they
/// satisfy [J_μ, J_ν] = i ε_{μνγ} J_γ.
pub fn spin1_generators() -> (OperatorMatrix, OperatorMatrix, OperatorMatrix) {
    let s = SQRT2_INV;
    let jx = DMatrix::from_row_slice(
        3,
        3,
        &[
            re(0.0),
            re(s),
            re(0.0),
            re(s),
            re(0.0),
            re(s),
            re(0.0),
            re(s),
            re(0.0),
        ],
    );
    let jy = DMatrix::from_row_slice(
        3,
        3,
        &[
            C64::new(0.0, 0.0),
            C64::new(0.0, -s),
            C64::new(0.0, 0.0),
            C64::new(0.0, s),
            C64::new(0.0, 0.0),
            C64::new(0.0, -s),
            C64::new(0.0, 0.0),
            C64::new(0.0, s),
            C64::new(0.0, 0.0),
        ],
    );
    let jz = DMatrix::from_diagonal(&DVector::from_vec(vec![re(1.0), re(0.0), re(-1.0)]));
    (
        OperatorMatrix::new(jx, BasisTag::Coupled),
        OperatorMatrix::new(jy, BasisTag::Coupled),
        OperatorMatrix::new(jz, BasisTag::Coupled),
    )
}

/// Working-representation Hamiltonian of `model` at time `t` under `pulse`.
///
/// The matrix returned for each kind/dim pair:
/// - HeisenbergIso, dim 3 — spin-1 form Ω J_x + Δ J_z;
/// - HeisenbergIso, dim 4 — same with the decoupled singlet at energy −J
///   (exchange shifted by J/4);
/// - HeisenbergDm, dim 4 — adds the ∓iD/2 singlet coupling;
/// - HeisenbergAniso, dim 3/4 — the unshifted anisotropic coupled-basis
///   matrices (subtract (Jz/4)·I and set Jx=Jy=Jz to recover the isotropic
///   forms);
/// - IsingTransverse, dim 2 — ½(Δ σ_z + √2 Ω σ_x);
/// - IsingTransverse, dim 3 — rotating-frame triplet with the middle level at
///   −J/2 and the outer levels at ±Δ ∓ J/2 (the printed linear-sweep matrix is
///   the special case Δ(t) = At − ω + J/2);
/// - IsingTransverse, dim 4 — lab frame with e^{∓iωt} couplings and
///   B_z = Δ + ω − J/2;
/// - IsingDm, dim 2/3 — as IsingTransverse with the detuning shift δ = 2D²/J
///   applied (diagonal ∓δ/2 in dim 2, +δ on the middle level in dim 3);
/// - TriangleIsing3, dim 2 — ½(Δ σ_z + √3 Ω σ_x).
pub fn build_hamiltonian(
    model: &SpinSystemModel,
    t: f64,
    pulse: &ControlPulse,
) -> Result<OperatorMatrix> {
    if t < 0.0 || t > pulse.duration() {
        return Err(Error::OutsideSupport {
            t,
            duration: pulse.duration(),
        });
    }
    let om = pulse.omega(t);
    let dl = pulse.delta(t);
    let c = re(om * SQRT2_INV);
    use InteractionKind::*;
    let mat = match (model.kind, model.dim) {
        (HeisenbergIso, 3) => {
            let mut h = zeros(3);
            h[(0, 0)] = re(dl);
            h[(2, 2)] = re(-dl);
            h[(0, 1)] = c;
            h[(1, 0)] = c;
            h[(1, 2)] = c;
            h[(2, 1)] = c;
            h
        }
        (HeisenbergIso, 4) | (HeisenbergDm, 4) => {
            let mut h = zeros(4);
            h[(0, 0)] = re(dl);
            h[(2, 2)] = re(-model.j);
            h[(3, 3)] = re(-dl);
            h[(0, 1)] = c;
            h[(1, 0)] = c;
            h[(1, 3)] = c;
            h[(3, 1)] = c;
            if model.kind == HeisenbergDm {
                h[(1, 2)] = C64::new(0.0, -0.5 * model.d);
                h[(2, 1)] = C64::new(0.0, 0.5 * model.d);
            }
            h
        }
        (HeisenbergAniso, 3) => {
            let mut h = zeros(3);
            h[(0, 0)] = re(model.jz / 4.0 + dl);
            h[(1, 1)] = re((model.jx + model.jy - model.jz) / 4.0);
            h[(2, 2)] = re(model.jz / 4.0 - dl);
            h[(0, 1)] = c;
            h[(1, 0)] = c;
            h[(1, 2)] = c;
            h[(2, 1)] = c;
            h
        }
        (HeisenbergAniso, 4) => {
            let mut h = zeros(4);
            h[(0, 0)] = re(model.jz / 4.0 + dl);
            h[(1, 1)] = re((model.jx + model.jy - model.jz) / 4.0);
            h[(2, 2)] = re(-(model.jx + model.jy + model.jz) / 4.0);
            h[(3, 3)] = re(model.jz / 4.0 - dl);
            h[(0, 1)] = c;
            h[(1, 0)] = c;
            h[(1, 3)] = c;
            h[(3, 1)] = c;
            h
        }
        (IsingTransverse, 2) | (IsingDm, 2) => {
            let shift = if model.kind == IsingDm {
                model.dm_shift()
            } else {
                0.0
            };
            let mut h = zeros(2);
            h[(0, 0)] = re(0.5 * (dl - shift));
            h[(1, 1)] = re(-0.5 * (dl - shift));
            let x = re(0.5 * 2.0f64.sqrt() * om);
            h[(0, 1)] = x;
            h[(1, 0)] = x;
            h
        }
        (IsingTransverse, 3) | (IsingDm, 3) => {
            let shift = if model.kind == IsingDm {
                model.dm_shift()
            } else {
                0.0
            };
            let mut h = zeros(3);
            h[(0, 0)] = re(dl - model.j / 2.0);
            h[(1, 1)] = re(-model.j / 2.0 + shift);
            h[(2, 2)] = re(model.j / 2.0 - dl);
            h[(0, 1)] = c;
            h[(1, 0)] = c;
            h[(1, 2)] = c;
            h[(2, 1)] = c;
            h
        }
        (IsingTransverse, 4) => {
            let bz = dl + model.omega - model.j / 2.0;
            let phase = C64::new(0.0, -model.omega * t).exp();
            let cw = c * phase;
            let mut h = zeros(4);
            h[(0, 0)] = re(bz);
            h[(1, 1)] = re(-model.j / 2.0);
            h[(2, 2)] = re(-model.j / 2.0);
            h[(3, 3)] = re(-bz);
            h[(0, 1)] = cw;
            h[(1, 0)] = cw.conj();
            h[(1, 3)] = cw;
            h[(3, 1)] = cw.conj();
            h
        }
        (TriangleIsing3, 2) => {
            let mut h = zeros(2);
            h[(0, 0)] = re(0.5 * dl);
            h[(1, 1)] = re(-0.5 * dl);
            let x = re(0.5 * 3.0f64.sqrt() * om);
            h[(0, 1)] = x;
            h[(1, 0)] = x;
            h
        }
        (kind, dim) => {
            return Err(Error::Config(format!(
                "no Hamiltonian for kind {kind:?} with dim {dim}"
            )));
        }
    };
    let basis = match (model.kind, model.dim) {
        (IsingTransverse | IsingDm, 2 | 3) => BasisTag::RotatingFrame,
        _ => BasisTag::Coupled,
    };
    Ok(OperatorMatrix::new(mat, basis))
}

/// Unitary of the product → coupled change of basis (columns are the coupled
/// states expressed in the product basis).
pub fn coupled_basis_transform() -> OperatorMatrix {
    let s = SQRT2_INV;
    let mut v = zeros(4);
    v[(0, 0)] = re(1.0);
    v[(1, 1)] = re(s);
    v[(2, 1)] = re(s);
    v[(1, 2)] = re(s);
    v[(2, 2)] = re(-s);
    v[(3, 3)] = re(1.0);
    OperatorMatrix::new(v, BasisTag::Product)
}

/// Similarity-transform a 4×4 product-basis matrix into the coupled basis.
pub fn product_to_coupled(op: &OperatorMatrix) -> Result<OperatorMatrix> {
    if op.basis != BasisTag::Product {
        return Err(Error::BasisMismatch {
            expected: BasisTag::Product.to_string(),
            found: op.basis.to_string(),
        });
    }
    if op.dim() != 4 {
        return Err(Error::Config(format!(
            "product_to_coupled needs a 4x4 matrix, got {}x{}",
            op.dim(),
            op.dim()
        )));
    }
    let v = coupled_basis_transform().mat;
    Ok(OperatorMatrix::new(
        v.adjoint() * &op.mat * v,
        BasisTag::Coupled,
    ))
}

/// Default tolerance below which a kept↔dropped coupling counts as zero.
pub const DECOUPLING_TOL: f64 = 1e-12;

/// Principal submatrix on `keep` (0-based indices), after checking that every
/// dropped level is decoupled from the kept ones to within `tol`.
pub fn reduce_subspace_with_tol(
    op: &OperatorMatrix,
    keep: &[usize],
    tol: f64,
) -> Result<OperatorMatrix> {
    let n = op.dim();
    let dropped: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
    for &i in keep {
        for &j in &dropped {
            let mag = op.mat[(i, j)].norm().max(op.mat[(j, i)].norm());
            if mag > tol {
                return Err(Error::DecouplingViolation {
                    row: i,
                    col: j,
                    magnitude: mag,
                    tolerance: tol,
                });
            }
        }
    }
    let m = keep.len();
    let mut out = zeros(m);
    for (a, &i) in keep.iter().enumerate() {
        for (b, &j) in keep.iter().enumerate() {
            out[(a, b)] = op.mat[(i, j)];
        }
    }
    Ok(OperatorMatrix::new(out, op.basis))
}

/// [`reduce_subspace_with_tol`] at the default tolerance.
pub fn reduce_subspace(op: &OperatorMatrix, keep: &[usize]) -> Result<OperatorMatrix> {
    reduce_subspace_with_tol(op, keep, DECOUPLING_TOL)
}

/// Level-crossing times (t₁₂, t₁₃, t₂₃) of the rotating-frame Ising triplet;
/// for IsingDm the crossings shift by the detuning shift δ = 2D²/J.
pub fn level_crossing_times(model: &SpinSystemModel) -> Result<(f64, f64, f64)> {
    let shift = match model.kind {
        InteractionKind::IsingTransverse => 0.0,
        InteractionKind::IsingDm => model.dm_shift(),
        kind => {
            return Err(Error::Config(format!(
                "level crossings are defined for Ising models, not {kind:?}"
            )));
        }
    };
    if model.a == 0.0 {
        return Err(Error::NoCrossing);
    }
    let t12 = (model.omega - model.j / 2.0 + shift) / model.a;
    let t13 = model.omega / model.a;
    let t23 = (model.omega + model.j / 2.0 - shift) / model.a;
    Ok((t12, t13, t23))
}

/// Diagonal rotating-frame unitary diag(e^{iωt}, 1, 1, e^{−iωt}) that removes
/// the e^{∓iωt} drive phases from the lab-frame Ising Hamiltonian.
pub fn rotating_frame_transform(omega: f64, t: f64) -> OperatorMatrix {
    let mut v = zeros(4);
    v[(0, 0)] = C64::new(0.0, omega * t).exp();
    v[(1, 1)] = re(1.0);
    v[(2, 2)] = re(1.0);
    v[(3, 3)] = C64::new(0.0, -omega * t).exp();
    OperatorMatrix::new(v, BasisTag::Coupled)
}
