//! Ansatz families and pulse construction.
//!
//! A design is a θ profile satisfying θ(0)=0, θ(T)=π, θ̇(0)=θ̇(T)=0 plus a
//! phase family m(θ) that closes β through cotβ = −(dm/dθ) sinθ:
//!
//! ```text
//!   m = 2θ + 2α sin2θ      ⇒  β = −arccot[2(1 + 2α cos2θ) sinθ]
//!   m = n(2θ − sin2θ)      ⇒  β = −arccot(4n sin³θ)
//!   m = 0                  ⇒  β = −π/2          (flat-pulse limit)
//! ```
//!
//! arccot takes values in (0, π), so β ∈ (−π, 0) and sinβ < 0, which keeps
//! Ω = −θ̇/(κ sinβ) ≥ 0 over the whole pulse. The free parameter α is fixed
//! by zeroing a chosen sensitivity functional; see [`find_alpha`].

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::invariant::{fields_from_angles, AngleTrajectory};
use crate::numeric;
use crate::sensitivity::{self, SensitivityKind};
use crate::spinmodel::SpinSystemModel;
use crate::{Error, Result};

/// θ-profile family; all satisfy the flip boundary conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaFamily {
    /// 3π(t/T)² − 2π(t/T)³
    Cubic,
    /// (π/2)[1 + sin(π(2t − T)/(2T))]
    Sine,
    /// πt/T (does not satisfy the θ̇ endpoint conditions; flat-pulse limit)
    Linear,
}

impl ThetaFamily {
    /// θ and dθ/ds at reduced time s = t/T ∈ [0, 1].
    pub fn theta_ds(&self, s: f64) -> (f64, f64) {
        use std::f64::consts::PI;
        match self {
            ThetaFamily::Cubic => (
                3.0 * PI * s * s - 2.0 * PI * s * s * s,
                6.0 * PI * (s - s * s),
            ),
            ThetaFamily::Sine => {
                let x = PI * (2.0 * s - 1.0) / 2.0;
                ((PI / 2.0) * (1.0 + x.sin()), (PI * PI / 2.0) * x.cos())
            }
            ThetaFamily::Linear => (PI * s, PI),
        }
    }
}

/// Phase family m(θ) whose θ-derivative closes β.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MFamily {
    /// m = 2θ + 2α sin 2θ
    AlphaForm { alpha: f64 },
    /// m = n(2θ − sin 2θ)
    NForm { n: u32 },
    /// m ≡ 0, β ≡ −π/2
    Zero,
}

impl MFamily {
    /// m(θ).
    pub fn m_of_theta(&self, th: f64) -> f64 {
        match self {
            MFamily::AlphaForm { alpha } => 2.0 * th + 2.0 * alpha * (2.0 * th).sin(),
            MFamily::NForm { n } => *n as f64 * (2.0 * th - (2.0 * th).sin()),
            MFamily::Zero => 0.0,
        }
    }

    /// g(θ) = −cot β(θ).
    pub fn g(&self, th: f64) -> f64 {
        match self {
            MFamily::AlphaForm { alpha } => 2.0 * (1.0 + 2.0 * alpha * (2.0 * th).cos()) * th.sin(),
            MFamily::NForm { n } => 4.0 * *n as f64 * th.sin().powi(3),
            MFamily::Zero => 0.0,
        }
    }

    /// dg/dθ.
    pub fn g_prime(&self, th: f64) -> f64 {
        match self {
            MFamily::AlphaForm { alpha } => {
                2.0 * th.cos() * (1.0 + 2.0 * alpha * (2.0 * th).cos())
                    - 8.0 * alpha * th.sin() * (2.0 * th).sin()
            }
            MFamily::NForm { n } => 12.0 * *n as f64 * th.sin().powi(2) * th.cos(),
            MFamily::Zero => 0.0,
        }
    }

    /// g(θ)/sinθ, analytic in θ (used for the regular form of the cotθ term).
    pub fn g_over_sin(&self, th: f64) -> f64 {
        match self {
            MFamily::AlphaForm { alpha } => 2.0 * (1.0 + 2.0 * alpha * (2.0 * th).cos()),
            MFamily::NForm { n } => 4.0 * *n as f64 * th.sin().powi(2),
            MFamily::Zero => 0.0,
        }
    }
}

/// Coupling factor of the target representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kappa {
    /// Heisenberg spin-1 representation.
    One,
    /// Two-spin Ising effective two-level.
    Sqrt2,
    /// Triangle three-spin effective two-level.
    Sqrt3,
}

impl Kappa {
    pub fn value(&self) -> f64 {
        match self {
            Kappa::One => 1.0,
            Kappa::Sqrt2 => 2.0f64.sqrt(),
            Kappa::Sqrt3 => 3.0f64.sqrt(),
        }
    }
}

/// The inverse-engineering recipe: θ profile, phase family, duration and
/// coupling factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub theta_family: ThetaFamily,
    pub m_family: MFamily,
    pub duration: f64,
    pub kappa: Kappa,
}

impl AnsatzSpec {
    /// θ and θ̇ at time t ∈ [0, T].
    pub fn theta_profile(&self, t: f64) -> (f64, f64) {
        let (th, dth_ds) = self.theta_family.theta_ds(t / self.duration);
        (th, dth_ds / self.duration)
    }

    /// β and dβ/dθ at polar angle θ; β = −arccot g(θ) ∈ (−π, 0).
    pub fn beta_closure(&self, th: f64) -> (f64, f64) {
        let g = self.m_family.g(th);
        let beta = -1.0f64.atan2(g);
        let dbeta_dtheta = self.m_family.g_prime(th) / (1.0 + g * g);
        (beta, dbeta_dtheta)
    }

    /// m(t) of the ansatz.
    pub fn m_at(&self, t: f64) -> f64 {
        self.m_family.m_of_theta(self.theta_profile(t).0)
    }

    /// The closed-form angle trajectory of this recipe.
    pub fn angles(&self) -> DesignedAngles {
        DesignedAngles { spec: *self }
    }
}

/// Closed-form angle trajectory of an [`AnsatzSpec`]; all evaluators are
/// algebraically regular, including the field inversion at the pulse edges.
#[derive(Debug, Clone, Copy)]
pub struct DesignedAngles {
    spec: AnsatzSpec,
}

impl DesignedAngles {
    pub fn spec(&self) -> &AnsatzSpec {
        &self.spec
    }
}

impl AngleTrajectory for DesignedAngles {
    fn duration(&self) -> f64 {
        self.spec.duration
    }

    fn theta(&self, t: f64) -> f64 {
        self.spec.theta_profile(t).0
    }

    fn beta(&self, t: f64) -> f64 {
        self.spec.beta_closure(self.theta(t)).0
    }

    fn theta_dot(&self, t: f64) -> f64 {
        self.spec.theta_profile(t).1
    }

    fn beta_dot(&self, t: f64) -> f64 {
        let (th, thd) = self.spec.theta_profile(t);
        self.spec.beta_closure(th).1 * thd
    }

    fn fields_at(&self, t: f64, kappa: f64) -> (f64, f64) {
        let (th, thd) = self.spec.theta_profile(t);
        let g = self.spec.m_family.g(th);
        // sinβ = −1/√(1+g²), cosβ = g/√(1+g²)
        let omega = thd * (1.0 + g * g).sqrt() / kappa;
        // κΩ cotθ cosβ = θ̇ cosθ · g/sinθ, regular at θ → 0, π
        let delta = self.beta_dot(t) + thd * th.cos() * self.spec.m_family.g_over_sin(th);
        (omega, delta)
    }

    fn phase_integrand(&self, t: f64) -> f64 {
        // θ̇ cotβ / sinθ = −θ̇ · g/sinθ, regular everywhere
        let (th, thd) = self.spec.theta_profile(t);
        -thd * self.spec.m_family.g_over_sin(th)
    }
}

/// The designed drive: exact evaluators Ω(t), Δ(t) on [0, T].
#[derive(Clone)]
pub struct ControlPulse {
    omega: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    delta: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    duration: f64,
}

impl std::fmt::Debug for ControlPulse {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ControlPulse {{ duration: {} }}", self.duration)
    }
}

/// Default length of the exported uniform sample grid.
pub const DEFAULT_SAMPLES: usize = 2001;

impl ControlPulse {
    pub fn from_fns<F, G>(omega: F, delta: G, duration: f64) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            omega: Arc::new(omega),
            delta: Arc::new(delta),
            duration,
        }
    }

    /// Constant Ω and Δ.
    pub fn constant(omega: f64, delta: f64, duration: f64) -> Self {
        Self::from_fns(move |_| omega, move |_| delta, duration)
    }

    /// The zero pulse.
    pub fn zero(duration: f64) -> Self {
        Self::constant(0.0, 0.0, duration)
    }

    /// Resonant flat π pulse for coupling κ: Ω = π/(κT), Δ = 0.
    pub fn flat_pi(duration: f64, kappa: f64) -> Self {
        Self::constant(std::f64::consts::PI / (kappa * duration), 0.0, duration)
    }

    /// Rescale both components by (1 + δ) — the systematic-error convention
    /// where amplitude and detuning shift together.
    pub fn scaled(&self, factor: f64) -> Self {
        let om = Arc::clone(&self.omega);
        let dl = Arc::clone(&self.delta);
        Self::from_fns(
            move |t| factor * om(t),
            move |t| factor * dl(t),
            self.duration,
        )
    }

    /// Rescale only the Rabi component by (1 + δ).
    pub fn scaled_omega(&self, factor: f64) -> Self {
        let om = Arc::clone(&self.omega);
        let dl = Arc::clone(&self.delta);
        Self::from_fns(move |t| factor * om(t), move |t| dl(t), self.duration)
    }

    /// Stretch the pulse to a new duration, preserving total rotation angles
    /// (Ω and Δ scale by T/T′).
    pub fn stretched(&self, new_duration: f64) -> Self {
        let om = Arc::clone(&self.omega);
        let dl = Arc::clone(&self.delta);
        let ratio = self.duration / new_duration;
        Self::from_fns(
            move |t| ratio * om(t * ratio),
            move |t| ratio * dl(t * ratio),
            new_duration,
        )
    }

    pub fn omega(&self, t: f64) -> f64 {
        (self.omega)(t)
    }

    pub fn delta(&self, t: f64) -> f64 {
        (self.delta)(t)
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    /// Uniform sample grid (t, Ω, Δ) with `n` points including both ends.
    pub fn samples(&self, n: usize) -> Vec<(f64, f64, f64)> {
        let n = n.max(2);
        (0..n)
            .map(|k| {
                let t = self.duration * k as f64 / (n - 1) as f64;
                (t, self.omega(t), self.delta(t))
            })
            .collect()
    }

    /// Peak |Ω| over the default sample grid.
    pub fn peak_omega(&self) -> f64 {
        self.samples(DEFAULT_SAMPLES)
            .iter()
            .map(|(_, om, _)| om.abs())
            .fold(0.0, f64::max)
    }
}

/// Build the drive for `spec` against `model`, checking the coupling factor.
pub fn synthesize(spec: &AnsatzSpec, model: &SpinSystemModel) -> Result<ControlPulse> {
    if (spec.kappa.value() - model.kappa()).abs() > 1e-12 {
        return Err(Error::Config(format!(
            "ansatz κ = {} does not match the {:?} representation (κ = {})",
            spec.kappa.value(),
            model.kind,
            model.kappa()
        )));
    }
    fields_from_angles(spec.angles(), spec.kappa.value())
}

/// Rotation axis of a composite-pulse segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    X,
    Y,
}

/// One constant-amplitude segment of a composite sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseSegment {
    pub axis: Axis,
    /// Rotation angle of the segment (= rate × duration).
    pub angle: f64,
    pub duration: f64,
}

/// The π/2(x) π(y) π/2(x) composite sequence, with segment durations
/// proportional to their rotation angles (total angle 2π over `t_total`).
pub fn composite_sequence(t_total: f64) -> Vec<PulseSegment> {
    use std::f64::consts::PI;
    assert!(
        t_total > 0.0,
        "composite sequence needs a positive duration"
    );
    vec![
        PulseSegment {
            axis: Axis::X,
            angle: PI / 2.0,
            duration: t_total / 4.0,
        },
        PulseSegment {
            axis: Axis::Y,
            angle: PI,
            duration: t_total / 2.0,
        },
        PulseSegment {
            axis: Axis::X,
            angle: PI / 2.0,
            duration: t_total / 4.0,
        },
    ]
}

/// Constant-Rabi linear-chirp pulse: Ω = Ω₀, Δ = a(t − T/2).
pub fn landau_zener(omega0: f64, chirp: f64, duration: f64) -> ControlPulse {
    assert!(omega0 > 0.0, "Landau-Zener needs a positive Rabi frequency");
    ControlPulse::from_fns(
        move |_| omega0,
        move |t| chirp * (t - duration / 2.0),
        duration,
    )
}

/// Result of the α search.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AlphaSolution {
    pub alpha: f64,
    /// The targeted sensitivity evaluated at `alpha`.
    pub q_value: f64,
    /// True when an actual zero was bracketed; false when the returned α is
    /// only the interval minimizer.
    pub zero_found: bool,
}

/// Scan window and step of the α search (sign changes of the signed integral
/// projection are refined by bisection; with none, the |·|² minimum is
/// returned and flagged).
pub const ALPHA_SCAN: (f64, f64, f64) = (-0.5, 0.5, 0.01);

/// Find α in the m = 2θ + 2α sin2θ family that nullifies the chosen
/// sensitivity for the given θ profile.
///
/// When several zeros exist in the scan window the one of smallest |α| is
/// returned (the least-distorted pulse); the search is deterministic.
pub fn find_alpha(
    theta_family: ThetaFamily,
    duration: f64,
    kappa: Kappa,
    target: SensitivityKind,
    j: f64,
) -> Result<AlphaSolution> {
    let spec_for = move |alpha: f64| AnsatzSpec {
        theta_family,
        m_family: MFamily::AlphaForm { alpha },
        duration,
        kappa,
    };
    let projection = move |alpha: f64| -> Result<f64> {
        let spec = spec_for(alpha);
        let angles = spec.angles();
        let m = move |t: f64| spec.m_at(t);
        match target {
            SensitivityKind::QS => Ok(sensitivity::systematic_integral(&angles, &m)?.value.im),
            SensitivityKind::QD => {
                let z = sensitivity::dm_integral(&angles, &m, j)?.value;
                let proj = z * num_complex::Complex64::new(0.0, -0.5 * j * duration).exp();
                Ok(proj.re)
            }
            SensitivityKind::QDelta => Ok(sensitivity::detuning_integral(&angles, &m)?.value.re),
            SensitivityKind::QOmega => Err(Error::RootSearch(
                "q_Omega is nullified by the integer-n family, not by α".into(),
            )),
        }
    };
    let q_at = move |alpha: f64| -> Result<f64> {
        let spec = spec_for(alpha);
        let angles = spec.angles();
        let m = move |t: f64| spec.m_at(t);
        Ok(match target {
            SensitivityKind::QS => sensitivity::q_systematic(&angles, &m)?.value,
            SensitivityKind::QD => sensitivity::q_dm(&angles, &m, j)?.value,
            SensitivityKind::QDelta => sensitivity::q_detuning(&angles, &m)?.value,
            SensitivityKind::QOmega => unreachable!(),
        })
    };

    scan_and_refine(&projection, &q_at)
}

/// Scan [`ALPHA_SCAN`] for sign changes of the signed projection, refine every
/// bracket, and pick the root of smallest |α|; with no sign change anywhere,
/// return the golden-section minimizer of q around the scan minimum, flagged.
fn scan_and_refine<P, Q>(projection: &P, q_at: &Q) -> Result<AlphaSolution>
where
    P: Fn(f64) -> Result<f64> + Sync,
    Q: Fn(f64) -> Result<f64>,
{
    let (lo, hi, step) = ALPHA_SCAN;
    let n = ((hi - lo) / step).round() as usize;
    let grid: Vec<f64> = (0..=n).map(|k| lo + k as f64 * step).collect();
    let values: Vec<f64> = {
        use rayon::prelude::*;
        grid.par_iter()
            .map(|&a| projection(a))
            .collect::<Result<Vec<_>>>()?
    };

    let mut roots = Vec::new();
    for k in 0..n {
        if values[k] == 0.0 {
            roots.push(grid[k]);
        } else if values[k].signum() != values[k + 1].signum() {
            let f = |a: f64| projection(a).expect("projection converged during the scan");
            roots.push(numeric::bisect_root(f, grid[k], grid[k + 1])?);
        }
    }
    if values[n] == 0.0 {
        roots.push(grid[n]);
    }

    if let Some(&alpha) = roots
        .iter()
        .min_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap())
    {
        return Ok(AlphaSolution {
            alpha,
            q_value: q_at(alpha)?,
            zero_found: true,
        });
    }

    // No sign change: return the minimizer of q over the scan window.
    let k_min = (0..=n)
        .min_by(|&a, &b| {
            values[a]
                .abs()
                .partial_cmp(&values[b].abs())
                .unwrap()
                .then(a.cmp(&b))
        })
        .unwrap();
    let (a, b) = (grid[k_min.saturating_sub(1)], grid[(k_min + 1).min(n)]);
    let (alpha, _) = numeric::golden_min(|x| q_at(x).unwrap_or(f64::INFINITY), a, b, 1e-12);
    Ok(AlphaSolution {
        alpha,
        q_value: q_at(alpha)?,
        zero_found: false,
    })
}
