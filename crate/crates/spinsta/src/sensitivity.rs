//! Second-order error sensitivities and baseline fidelities.
//!
//! Each functional is the squared modulus of a transition integral from
//! time-dependent perturbation theory, q = −½ ∂²F/∂ε²|₀ for the relevant
//! perturbation strength ε:
//!
//! ```text
//!   q_S = ½ |∫₀ᵀ (−β̇ sinθ − iθ̇) e^{im} dt|²        amplitude+detuning error
//!   q_D = ⅛ |∫₀¹ sinθ e^{iJTu} e^{im} du|²           DM leakage to the singlet
//!   q_Ω =   |∫₀ᵀ θ̇ sin²θ e^{im} dt|²                Rabi-amplitude error
//!   q_Δ = ¼ |∫₀ᵀ sinθ e^{im} dt|²                    detuning shift (time²)
//! ```
//!
//! m(t) is the design's phase function. q_D is dimensionless (reduced time
//! u = t/T; at T = 1 it coincides with the raw time integral) and q_Δ carries
//! units of time². For the flat π pulse these evaluate to π²/2, 1/(2π²) (at
//! J = 0), π²/4 and (T/π)².
//!
//! The independent oracle for every q is [`fit_sensitivity`]: the quadratic
//! coefficient of a simulated fidelity curve F(ε) near ε = 0.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::invariant::AngleTrajectory;
use crate::numeric::{self, Quad};
use crate::Result;

/// Default absolute tolerance of the sensitivity quadratures.
pub const QUAD_TOL: f64 = 1e-10;

/// Which sensitivity functional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SensitivityKind {
    QS,
    QD,
    QOmega,
    QDelta,
}

impl SensitivityKind {
    /// q_Δ carries units of time² (B₀⁻²); the others are dimensionless.
    pub fn units(&self) -> &'static str {
        match self {
            SensitivityKind::QDelta => "time^2",
            _ => "dimensionless",
        }
    }
}

impl std::fmt::Display for SensitivityKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SensitivityKind::QS => write!(f, "q_S"),
            SensitivityKind::QD => write!(f, "q_D"),
            SensitivityKind::QOmega => write!(f, "q_Omega"),
            SensitivityKind::QDelta => write!(f, "q_Delta"),
        }
    }
}

/// A computed sensitivity value with its quadrature error estimate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct QValue {
    pub value: f64,
    pub quad_error: f64,
}

fn q_from(z: Quad, prefactor: f64) -> QValue {
    QValue {
        value: prefactor * z.value.norm_sqr(),
        quad_error: prefactor * (2.0 * z.value.norm() * z.abs_error + z.abs_error.powi(2)),
    }
}

/// Transition integral of the systematic error, ∫₀ᵀ (−β̇ sinθ − iθ̇) e^{im} dt.
pub fn systematic_integral<M>(angles: &dyn AngleTrajectory, m: &M) -> Result<Quad>
where
    M: Fn(f64) -> f64,
{
    systematic_integral_with_tol(angles, m, QUAD_TOL)
}

pub fn systematic_integral_with_tol<M>(
    angles: &dyn AngleTrajectory,
    m: &M,
    tol: f64,
) -> Result<Quad>
where
    M: Fn(f64) -> f64,
{
    numeric::integrate_complex(
        |t| {
            let amp = C64::new(
                -angles.beta_dot(t) * angles.theta(t).sin(),
                -angles.theta_dot(t),
            );
            amp * C64::new(0.0, m(t)).exp()
        },
        0.0,
        angles.duration(),
        tol,
        1,
    )
}

/// Transition integral of the DM leakage in reduced time,
/// ∫₀¹ sinθ(uT) e^{iJTu} e^{im(uT)} du, resolved on the 2π/(JT) scale.
pub fn dm_integral<M>(angles: &dyn AngleTrajectory, m: &M, j: f64) -> Result<Quad>
where
    M: Fn(f64) -> f64,
{
    dm_integral_with_tol(angles, m, j, QUAD_TOL)
}

pub fn dm_integral_with_tol<M>(
    angles: &dyn AngleTrajectory,
    m: &M,
    j: f64,
    tol: f64,
) -> Result<Quad>
where
    M: Fn(f64) -> f64,
{
    let tt = angles.duration();
    let panels = numeric::oscillation_panels(j * tt, 0.0, 1.0, 20);
    numeric::integrate_complex(
        |u| {
            let t = u * tt;
            C64::new(0.0, j * tt * u + m(t)).exp() * angles.theta(t).sin()
        },
        0.0,
        1.0,
        tol,
        panels,
    )
}

/// Transition integral of the Rabi-amplitude error, ∫₀ᵀ θ̇ sin²θ e^{im} dt.
pub fn rabi_integral<M>(angles: &dyn AngleTrajectory, m: &M) -> Result<Quad>
where
    M: Fn(f64) -> f64,
{
    rabi_integral_with_tol(angles, m, QUAD_TOL)
}

pub fn rabi_integral_with_tol<M>(angles: &dyn AngleTrajectory, m: &M, tol: f64) -> Result<Quad>
where
    M: Fn(f64) -> f64,
{
    numeric::integrate_complex(
        |t| {
            let s = angles.theta(t).sin();
            C64::new(0.0, m(t)).exp() * (angles.theta_dot(t) * s * s)
        },
        0.0,
        angles.duration(),
        tol,
        1,
    )
}

/// Transition integral of the detuning shift, ∫₀ᵀ sinθ e^{im} dt.
pub fn detuning_integral<M>(angles: &dyn AngleTrajectory, m: &M) -> Result<Quad>
where
    M: Fn(f64) -> f64,
{
    detuning_integral_with_tol(angles, m, QUAD_TOL)
}

pub fn detuning_integral_with_tol<M>(angles: &dyn AngleTrajectory, m: &M, tol: f64) -> Result<Quad>
where
    M: Fn(f64) -> f64,
{
    numeric::integrate_complex(
        |t| C64::new(0.0, m(t)).exp() * angles.theta(t).sin(),
        0.0,
        angles.duration(),
        tol,
        1,
    )
}

/// Systematic error sensitivity q_S (flat π pulse: π²/2, T-independent).
pub fn q_systematic<M>(angles: &dyn AngleTrajectory, m: &M) -> Result<QValue>
where
    M: Fn(f64) -> f64,
{
    q_systematic_with_tol(angles, m, QUAD_TOL)
}

pub fn q_systematic_with_tol<M>(angles: &dyn AngleTrajectory, m: &M, tol: f64) -> Result<QValue>
where
    M: Fn(f64) -> f64,
{
    Ok(q_from(systematic_integral_with_tol(angles, m, tol)?, 0.5))
}

/// DM transition sensitivity q_D (flat π pulse at J = 0: 1/(2π²)).
pub fn q_dm<M>(angles: &dyn AngleTrajectory, m: &M, j: f64) -> Result<QValue>
where
    M: Fn(f64) -> f64,
{
    q_dm_with_tol(angles, m, j, QUAD_TOL)
}

pub fn q_dm_with_tol<M>(angles: &dyn AngleTrajectory, m: &M, j: f64, tol: f64) -> Result<QValue>
where
    M: Fn(f64) -> f64,
{
    Ok(q_from(dm_integral_with_tol(angles, m, j, tol)?, 0.125))
}

/// Rabi-amplitude sensitivity q_Ω (flat π pulse: π²/4; the n-family gives
/// sin²(nπ)/(4n²), zero at integer n).
pub fn q_rabi<M>(angles: &dyn AngleTrajectory, m: &M) -> Result<QValue>
where
    M: Fn(f64) -> f64,
{
    q_rabi_with_tol(angles, m, QUAD_TOL)
}

pub fn q_rabi_with_tol<M>(angles: &dyn AngleTrajectory, m: &M, tol: f64) -> Result<QValue>
where
    M: Fn(f64) -> f64,
{
    Ok(q_from(rabi_integral_with_tol(angles, m, tol)?, 1.0))
}

/// Detuning-shift sensitivity q_Δ in units of time² (flat π pulse: (T/π)²).
pub fn q_detuning<M>(angles: &dyn AngleTrajectory, m: &M) -> Result<QValue>
where
    M: Fn(f64) -> f64,
{
    q_detuning_with_tol(angles, m, QUAD_TOL)
}

pub fn q_detuning_with_tol<M>(angles: &dyn AngleTrajectory, m: &M, tol: f64) -> Result<QValue>
where
    M: Fn(f64) -> f64,
{
    Ok(q_from(detuning_integral_with_tol(angles, m, tol)?, 0.25))
}

/// Closed-form baseline fidelity curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineKind {
    /// Flat π pulse on the spin-1 flip: cos⁴(πδ/2).
    FlatHeisenberg,
    /// π/2(x) π(y) π/2(x) on the spin-1 flip:
    /// cos⁸(πδ/2) + sin²(πδ) cos²(πδ/2).
    CompositeHeisenberg,
    /// Flat π pulse on the two-level transfer: cos²(πδ/2).
    FlatIsing,
    /// π/2(x) π(y) π/2(x) with Pauli rotations: 1 − sin⁴(πδ/2).
    CompositeIsing,
}

/// Closed-form fidelity of a baseline pulse under relative amplitude error δ.
pub fn analytic_baseline_fidelity(kind: BaselineKind, delta: f64) -> f64 {
    use std::f64::consts::PI;
    let x = PI * delta / 2.0;
    match kind {
        BaselineKind::FlatHeisenberg => x.cos().powi(4),
        BaselineKind::CompositeHeisenberg => {
            x.cos().powi(8) + (PI * delta).sin().powi(2) * x.cos().powi(2)
        }
        BaselineKind::FlatIsing => x.cos().powi(2),
        BaselineKind::CompositeIsing => 1.0 - x.sin().powi(4),
    }
}

/// Quadratic coefficient −½F″(0) fitted from a fidelity curve.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SensitivityFit {
    /// Fitted q (Richardson-extrapolated central second difference).
    pub q: f64,
    /// Difference between the two step sizes; when it dominates |q| the curve
    /// is flatter than quadratic at this resolution (expected when q ≈ 0).
    pub residual: f64,
    pub higher_order_dominated: bool,
}

/// Fit −½F″(0) from evaluations of F at 0, ±h and ±h/2.
pub fn fit_sensitivity_fn<F>(f: F, h: f64) -> Result<SensitivityFit>
where
    F: Fn(f64) -> Result<f64>,
{
    let f0 = f(0.0)?;
    let d2 = |hh: f64, fp: f64, fm: f64| -(fp - 2.0 * f0 + fm) / (hh * hh) / 2.0;
    let qh = d2(h, f(h)?, f(-h)?);
    let qh2 = d2(h / 2.0, f(h / 2.0)?, f(-h / 2.0)?);
    let q = (4.0 * qh2 - qh) / 3.0;
    let residual = (qh2 - qh).abs();
    Ok(SensitivityFit {
        q,
        residual,
        higher_order_dominated: residual > q.abs().max(1e-12),
    })
}

/// Fit −½F″(0) from a symmetrically sampled curve {(ε, F)}; uses the two
/// smallest symmetric pairs for the Richardson step.
pub fn fit_sensitivity(curve: &[(f64, f64)]) -> Result<SensitivityFit> {
    let find = |x: f64| -> Option<f64> {
        curve
            .iter()
            .find(|(e, _)| (e - x).abs() <= 1e-12 * x.abs().max(1.0))
            .map(|&(_, f)| f)
    };
    let mut pos: Vec<f64> = curve.iter().map(|&(e, _)| e).filter(|&e| e > 0.0).collect();
    pos.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // smallest h whose half and negatives are also present
    let h = pos
        .iter()
        .copied()
        .find(|&h| {
            find(-h).is_some()
                && find(h / 2.0).is_some()
                && find(-h / 2.0).is_some()
                && find(0.0).is_some()
        })
        .ok_or_else(|| {
            crate::Error::Config(
                "curve lacks the 0, ±h, ±h/2 stencil needed for the Richardson fit".into(),
            )
        })?;
    fit_sensitivity_fn(
        |x| find(x).ok_or_else(|| crate::Error::Config(format!("curve lacks a sample at {x}"))),
        h,
    )
}

/// One sensitivity record of a design run.
#[derive(Debug, Clone, Serialize)]
pub struct SensitivityReport {
    pub kind: SensitivityKind,
    pub value: f64,
    pub units: &'static str,
    pub alpha: Option<f64>,
    pub quad_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sim_fit: Option<SimFitRecord>,
}

/// Simulation-fit cross-check attached to a report.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SimFitRecord {
    pub fitted_q: f64,
    /// |fitted − quadrature|.
    pub residual: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulse::{AnsatzSpec, Kappa, MFamily, ThetaFamily};
    use std::f64::consts::PI;

    fn flat(duration: f64, kappa: Kappa) -> AnsatzSpec {
        AnsatzSpec {
            theta_family: ThetaFamily::Linear,
            m_family: MFamily::Zero,
            duration,
            kappa,
        }
    }

    fn design(
        theta_family: ThetaFamily,
        m_family: MFamily,
        duration: f64,
        kappa: Kappa,
    ) -> AnsatzSpec {
        AnsatzSpec {
            theta_family,
            m_family,
            duration,
            kappa,
        }
    }

    #[test]
    fn flat_constants_reproduced_and_t_independent() {
        for &t in &[0.5, 1.0, 2.0] {
            let spec = flat(t, Kappa::One);
            let angles = spec.angles();
            let m = |tt: f64| spec.m_at(tt);
            let qs = q_systematic(&angles, &m).unwrap().value;
            assert!(
                (qs - PI * PI / 2.0).abs() <= 1e-8 * (PI * PI / 2.0),
                "q_S({t}) = {qs}"
            );
            let qd = q_dm(&angles, &m, 0.0).unwrap().value;
            let expect = 1.0 / (2.0 * PI * PI);
            assert!((qd - expect).abs() <= 1e-8 * expect, "q_D({t}) = {qd}");
            let qo = q_rabi(&angles, &m).unwrap().value;
            assert!(
                (qo - PI * PI / 4.0).abs() <= 1e-8 * (PI * PI / 4.0),
                "q_Ω({t}) = {qo}"
            );
            let qdl = q_detuning(&angles, &m).unwrap().value;
            let expect = (t / PI) * (t / PI);
            assert!((qdl - expect).abs() <= 1e-8 * expect, "q_Δ({t}) = {qdl}");
        }
    }

    #[test]
    fn designed_qs_nullified_and_alpha_zero_positive() {
        let spec = design(
            ThetaFamily::Cubic,
            MFamily::AlphaForm {
                alpha: 0.125_094_803_081_737_3,
            },
            1.0,
            Kappa::One,
        );
        let angles = spec.angles();
        let m = |t: f64| spec.m_at(t);
        let q = q_systematic(&angles, &m).unwrap().value;
        assert!(q <= 1e-7, "q_S at the root: {q:.3e}");

        // α = 0 leaves a definite positive sensitivity (frozen oracle value)
        let spec0 = design(
            ThetaFamily::Cubic,
            MFamily::AlphaForm { alpha: 0.0 },
            1.0,
            Kappa::One,
        );
        let angles0 = spec0.angles();
        let m0 = |t: f64| spec0.m_at(t);
        let q0 = q_systematic(&angles0, &m0).unwrap().value;
        assert!(
            (q0 - 0.179_994_484_5).abs() < 1e-6,
            "q_S(α=0) = {q0}, expected 0.1799944845"
        );
    }

    #[test]
    fn dm_values_and_riemann_lebesgue_suppression() {
        // flat π at J=10, T=1 (frozen quadrature value)
        let spec = flat(1.0, Kappa::One);
        let angles = spec.angles();
        let m = |t: f64| spec.m_at(t);
        let q10 = q_dm(&angles, &m, 10.0).unwrap().value;
        assert!(
            (q10 - 4.887_987_474e-5).abs() < 1e-10,
            "q_D(flat, J=10) = {q10:.6e}"
        );
        let q20 = q_dm(&angles, &m, 20.0).unwrap().value;
        let q40 = q_dm(&angles, &m, 40.0).unwrap().value;
        assert!(q10 > q20 && q20 > q40, "{q10:.3e} > {q20:.3e} > {q40:.3e}");

        // α = 0 design value (frozen oracle)
        let spec0 = design(
            ThetaFamily::Cubic,
            MFamily::AlphaForm { alpha: 0.0 },
            1.0,
            Kappa::One,
        );
        let angles0 = spec0.angles();
        let m0 = |t: f64| spec0.m_at(t);
        let q0 = q_dm(&angles0, &m0, 10.0).unwrap().value;
        assert!((q0 - 2.986_994_3e-6).abs() < 1e-10, "q_D(α=0) = {q0:.6e}");
        // nullified at the root
        let spec = design(
            ThetaFamily::Cubic,
            MFamily::AlphaForm {
                alpha: 0.058_655_439_257_880_894,
            },
            1.0,
            Kappa::One,
        );
        let angles = spec.angles();
        let m = |t: f64| spec.m_at(t);
        assert!(q_dm(&angles, &m, 10.0).unwrap().value <= 1e-7);
    }

    #[test]
    fn rabi_n_family_closed_form() {
        // integer n nullifies; the closed form is sin²(nπ)/(4n²)
        let spec = design(
            ThetaFamily::Sine,
            MFamily::NForm { n: 1 },
            1.0,
            Kappa::Sqrt2,
        );
        let angles = spec.angles();
        let m = |t: f64| spec.m_at(t);
        let q = q_rabi(&angles, &m).unwrap().value;
        assert!(q <= 1e-10, "q_Ω(n=1) = {q:.3e}");

        // non-integer diagnostic: n = 1.5 → sin²(1.5π)/(4·1.5²) = 1/9
        let spec15 = flat(1.0, Kappa::Sqrt2);
        let angles15 = spec15.angles();
        let m15 = |t: f64| {
            let th = spec15.theta_profile(t).0;
            1.5 * (2.0 * th - (2.0 * th).sin())
        };
        let q15 = q_rabi(&angles15, &m15).unwrap().value;
        assert!(
            (q15 - 1.0 / 9.0).abs() <= 1e-8 / 9.0,
            "q_Ω(n=1.5) = {q15}, expected 1/9"
        );
    }

    #[test]
    fn detuning_values() {
        let spec = design(
            ThetaFamily::Sine,
            MFamily::AlphaForm {
                alpha: -0.205_745_579_775_600_3,
            },
            1.0,
            Kappa::Sqrt2,
        );
        let angles = spec.angles();
        let m = |t: f64| spec.m_at(t);
        assert!(q_detuning(&angles, &m).unwrap().value <= 1e-7);

        let spec0 = design(
            ThetaFamily::Sine,
            MFamily::AlphaForm { alpha: 0.0 },
            1.0,
            Kappa::Sqrt2,
        );
        let angles0 = spec0.angles();
        let m0 = |t: f64| spec0.m_at(t);
        let q0 = q_detuning(&angles0, &m0).unwrap().value;
        assert!(
            (q0 - 2.655_958_4e-3).abs() < 1e-9,
            "q_Δ(α=0, sine) = {q0:.6e}"
        );
    }

    #[test]
    fn q_values_nonnegative() {
        for alpha in [-0.4, -0.1, 0.0, 0.2, 0.45] {
            let spec = design(
                ThetaFamily::Cubic,
                MFamily::AlphaForm { alpha },
                1.0,
                Kappa::One,
            );
            let angles = spec.angles();
            let m = |t: f64| spec.m_at(t);
            assert!(q_systematic(&angles, &m).unwrap().value >= 0.0);
            assert!(q_dm(&angles, &m, 10.0).unwrap().value >= 0.0);
            assert!(q_rabi(&angles, &m).unwrap().value >= 0.0);
            assert!(q_detuning(&angles, &m).unwrap().value >= 0.0);
        }
    }

    #[test]
    fn baseline_curves() {
        assert!(
            (analytic_baseline_fidelity(BaselineKind::FlatHeisenberg, 0.0) - 1.0).abs() < 1e-15
        );
        assert!(analytic_baseline_fidelity(BaselineKind::FlatIsing, 1.0).abs() < 1e-15);
        // small-δ expansion of the composite: 1 − π⁴δ⁴/8
        let d = 1e-2;
        let f = analytic_baseline_fidelity(BaselineKind::CompositeHeisenberg, d);
        let expansion = 1.0 - PI.powi(4) * d.powi(4) / 8.0;
        assert!(
            (f - expansion).abs() < 1e-9,
            "f = {f}, expansion = {expansion}"
        );
        // flat Heisenberg at δ = 0.2
        let f = analytic_baseline_fidelity(BaselineKind::FlatHeisenberg, 0.2);
        assert!((f - 0.818_135_621_484).abs() < 1e-12);
    }

    #[test]
    fn fit_recovers_flat_curvature() {
        let fit = fit_sensitivity_fn(
            |d| Ok(analytic_baseline_fidelity(BaselineKind::FlatHeisenberg, d)),
            0.02,
        )
        .unwrap();
        assert!(
            (fit.q - PI * PI / 2.0).abs() <= 1e-4,
            "fitted q = {} vs π²/2",
            fit.q
        );
        assert!(!fit.higher_order_dominated);
    }

    #[test]
    fn fit_flags_quartic_composite() {
        let fit = fit_sensitivity_fn(
            |d| {
                Ok(analytic_baseline_fidelity(
                    BaselineKind::CompositeHeisenberg,
                    d,
                ))
            },
            0.02,
        )
        .unwrap();
        assert!(fit.q.abs() <= 1e-6, "fitted q = {:.3e}", fit.q);
        assert!(fit.higher_order_dominated);
    }

    #[test]
    fn fit_from_sampled_curve() {
        let h = 0.02;
        let curve: Vec<(f64, f64)> = [-h, -h / 2.0, 0.0, h / 2.0, h]
            .iter()
            .map(|&d| (d, analytic_baseline_fidelity(BaselineKind::FlatIsing, d)))
            .collect();
        let fit = fit_sensitivity(&curve).unwrap();
        assert!((fit.q - PI * PI / 4.0).abs() <= 1e-4);
        assert!(fit_sensitivity(&[(0.0, 1.0), (0.1, 0.9)]).is_err());
    }

    #[test]
    fn qs_t_independence_for_designs_too() {
        // the q_S integrand is a pure function of θ: any duration gives the
        // same value for the same ansatz
        let mut values = Vec::new();
        for &t in &[0.5, 1.0, 2.0] {
            let spec = design(
                ThetaFamily::Cubic,
                MFamily::AlphaForm { alpha: 0.2 },
                t,
                Kappa::One,
            );
            let angles = spec.angles();
            let m = |tt: f64| spec.m_at(tt);
            values.push(q_systematic(&angles, &m).unwrap().value);
        }
        assert!((values[0] - values[1]).abs() < 1e-10);
        assert!((values[1] - values[2]).abs() < 1e-10);
    }
}
