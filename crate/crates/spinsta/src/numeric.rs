//! Adaptive quadrature and scalar root finding.
//!
//! The Lewis–Riesenfeld phases and every sensitivity functional are integrals
//! of smooth (sometimes oscillatory) complex integrands over [0, T]; the α
//! search needs their zeros. Both are implemented here directly so results are
//! deterministic and the oscillatory case (e^{iJt} with J ≫ 1/T) can be
//! pre-partitioned on the oscillation scale.

use num_complex::Complex64 as C64;

use crate::{Error, Result};

/// 15-point Kronrod abscissae on [-1, 1] (positive half; symmetric).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

/// 7-point Gauss weights matching the odd Kronrod abscissae.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// 15-point Kronrod weights.
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Result of a quadrature: value and an error estimate.
#[derive(Debug, Clone, Copy)]
pub struct Quad {
    pub value: C64,
    pub abs_error: f64,
}

/// One Gauss–Kronrod 7/15 panel over [a, b].
fn qk15<F>(f: &F, a: f64, b: f64) -> Quad
where
    F: Fn(f64) -> C64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut res_gauss = C64::new(0.0, 0.0);
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = f_center.norm() * WGK[7];
    // node values by xgk index, low/high side of the center
    let mut fv1 = [C64::new(0.0, 0.0); 7];
    let mut fv2 = [C64::new(0.0, 0.0); 7];

    for (j, wg) in WG.iter().enumerate().take(3) {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_gauss += (f1 + f2) * *wg;
        res_kronrod += (f1 + f2) * WGK[jtw];
        res_abs += (f1.norm() + f2.norm()) * WGK[jtw];
    }
    res_gauss += f_center * WG[3];

    for j in 0..4 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_kronrod += (f1 + f2) * WGK[jtwm1];
        res_abs += (f1.norm() + f2.norm()) * WGK[jtwm1];
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (f_center - mean).norm();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).norm() + (fv2[j] - mean).norm());
    }

    let raw_err = ((res_kronrod - res_gauss) * half).norm();
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    // QUADPACK-style rescaling of the raw error estimate.
    let mut err = raw_err;
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }

    Quad {
        value: res_kronrod * half,
        abs_error: err,
    }
}

const MAX_DEPTH: u32 = 40;

fn adapt<F>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> Result<Quad>
where
    F: Fn(f64) -> C64,
{
    let panel = qk15(f, a, b);
    if panel.abs_error <= tol || b - a < f64::EPSILON * 16.0 * (a.abs() + b.abs() + 1.0) {
        return Ok(panel);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Quadrature {
            a,
            b,
            err: panel.abs_error,
        });
    }
    let mid = 0.5 * (a + b);
    let left = adapt(f, a, mid, 0.5 * tol, depth + 1)?;
    let right = adapt(f, mid, b, 0.5 * tol, depth + 1)?;
    Ok(Quad {
        value: left.value + right.value,
        abs_error: left.abs_error + right.abs_error,
    })
}

/// Adaptive Gauss–Kronrod integration of a complex integrand over [a, b] to
/// absolute tolerance `tol`.
///
/// `min_panels` forces an initial uniform partition; pass the number of panels
/// needed to resolve the fastest oscillation (for e^{iJt} use at least
/// 20 panels per period 2π/J).
pub fn integrate_complex<F>(f: F, a: f64, b: f64, tol: f64, min_panels: usize) -> Result<Quad>
where
    F: Fn(f64) -> C64,
{
    if a == b {
        return Ok(Quad {
            value: C64::new(0.0, 0.0),
            abs_error: 0.0,
        });
    }
    let n = min_panels.max(1);
    let width = (b - a) / n as f64;
    let mut total = C64::new(0.0, 0.0);
    let mut err = 0.0;
    for k in 0..n {
        let pa = a + k as f64 * width;
        let pb = if k == n - 1 {
            b
        } else {
            a + (k + 1) as f64 * width
        };
        let q = adapt(&f, pa, pb, tol / n as f64, 0)?;
        total += q.value;
        err += q.abs_error;
    }
    Ok(Quad {
        value: total,
        abs_error: err,
    })
}

/// Adaptive integration of a real integrand; see [`integrate_complex`].
pub fn integrate_real<F>(f: F, a: f64, b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let q = integrate_complex(|x| C64::new(f(x), 0.0), a, b, tol, 1)?;
    Ok((q.value.re, q.abs_error))
}

/// Number of uniform panels that puts at least `per_period` panels on each
/// oscillation period 2π/|rate| inside [a, b]. Returns 1 for slow phases.
pub fn oscillation_panels(rate: f64, a: f64, b: f64, per_period: usize) -> usize {
    if rate == 0.0 {
        return 1;
    }
    let periods = (b - a).abs() * rate.abs() / (2.0 * std::f64::consts::PI);
    ((periods * per_period as f64).ceil() as usize).max(1)
}

/// Bisection root refinement on a bracketed sign change.
///
/// `f(lo)` and `f(hi)` must have opposite signs. Bisection is preferred over
/// faster hybrids because the result is bit-reproducible across runs.
pub fn bisect_root<F>(f: F, mut lo: f64, mut hi: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::RootSearch(format!(
            "no sign change on [{lo}, {hi}]: f(lo)={flo:.3e}, f(hi)={fhi:.3e}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // interval collapsed to adjacent floats
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Golden-section minimization of `f` on [lo, hi] to interval width `tol`.
pub fn golden_min<F>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let xm = 0.5 * (lo + hi);
    (xm, f(xm))
}
