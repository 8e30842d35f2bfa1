//! Adaptive Gauss–Kronrod quadrature with substitutions tailored to the
//! square-root geometry of the motion's support.
//!
//! Every integrand this crate meets is analytic after one of two changes of
//! variable: `w = L sin θ` for integrals over a symmetric interval `(-L, L)`
//! whose integrand has inverse-square-root cusps at the endpoints, and
//! `s = t sin²(θ/2)` for integrals over `(0, t)` with cusps at both ends.
//! The wrappers below apply those substitutions so the adaptive driver only
//! ever sees smooth functions.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

// 15-point Kronrod abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights. Values are the standard QUADPACK constants.
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
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

const MAX_DEPTH: u32 = 28;

/// One 15-point Kronrod panel on `[a, b]`; returns the Kronrod estimate and
/// the magnitude of its disagreement with the embedded Gauss rule.
fn qk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);

    let f_mid = f(mid);
    let mut res_k = WGK[7] * f_mid;
    let mut res_g = WG[3] * f_mid;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(mid - dx) + f(mid + dx);
        res_k += WGK[j] * pair;
        if j % 2 == 1 {
            res_g += WG[j / 2] * pair;
        }
    }
    (res_k * half, (res_k - res_g).abs() * half.abs())
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (value, err) = qk15(f, a, b);
    if err <= tol || depth >= MAX_DEPTH {
        return value;
    }
    let mid = 0.5 * (a + b);
    adapt(f, a, mid, 0.5 * tol, depth + 1) + adapt(f, mid, b, 0.5 * tol, depth + 1)
}

/// Adaptive integral of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    adapt(&f, a, b, tol.max(f64::MIN_POSITIVE), 0)
}

/// Adaptive integral of a complex-valued integrand (both parts driven by the
/// same panel subdivision, so oscillatory real/imaginary parts stay in step).
pub fn integrate_complex<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol: f64) -> Complex64 {
    if a == b {
        return Complex64::new(0.0, 0.0);
    }
    adapt_complex(&f, a, b, tol.max(f64::MIN_POSITIVE), 0)
}

fn qk15_complex<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);

    let f_mid = f(mid);
    let mut res_k = f_mid * WGK[7];
    let mut res_g = f_mid * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(mid - dx) + f(mid + dx);
        res_k += pair * WGK[j];
        if j % 2 == 1 {
            res_g += pair * WG[j / 2];
        }
    }
    (res_k * half, (res_k - res_g).norm() * half.abs())
}

fn adapt_complex<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
) -> Complex64 {
    let (value, err) = qk15_complex(f, a, b);
    if err <= tol || depth >= MAX_DEPTH {
        return value;
    }
    let mid = 0.5 * (a + b);
    adapt_complex(f, a, mid, 0.5 * tol, depth + 1)
        + adapt_complex(f, mid, b, 0.5 * tol, depth + 1)
}

/// `∫_{-L}^{L} f(w) dw` via `w = L sin θ`, which removes the
/// `1/√(L² − w²)` endpoint behaviour of light-cone integrands.
pub fn integrate_symmetric_cusped<F: Fn(f64) -> f64>(l: f64, f: F, tol: f64) -> f64 {
    integrate(
        |theta| {
            let (s, c) = theta.sin_cos();
            f(l * s) * l * c
        },
        -FRAC_PI_2,
        FRAC_PI_2,
        tol,
    )
}

/// Complex variant of [`integrate_symmetric_cusped`].
pub fn integrate_symmetric_cusped_complex<F: Fn(f64) -> Complex64>(
    l: f64,
    f: F,
    tol: f64,
) -> Complex64 {
    integrate_complex(
        |theta| {
            let (s, c) = theta.sin_cos();
            f(l * s) * (l * c)
        },
        -FRAC_PI_2,
        FRAC_PI_2,
        tol,
    )
}

/// `∫_0^t f(s) ds` via `s = t sin²(θ/2)`, which removes the
/// `1/√(s(t−s))` endpoint behaviour of occupation-time integrands.
pub fn integrate_chord_cusped<F: Fn(f64) -> f64>(t: f64, f: F, tol: f64) -> f64 {
    integrate(
        |theta| {
            let half = (0.5 * theta).sin();
            f(t * half * half) * 0.5 * t * theta.sin()
        },
        0.0,
        PI,
        tol,
    )
}

/// Complex variant of [`integrate_chord_cusped`].
pub fn integrate_chord_cusped_complex<F: Fn(f64) -> Complex64>(
    t: f64,
    f: F,
    tol: f64,
) -> Complex64 {
    integrate_complex(
        |theta| {
            let half = (0.5 * theta).sin();
            f(t * half * half) * (0.5 * t * theta.sin())
        },
        0.0,
        PI,
        tol,
    )
}
