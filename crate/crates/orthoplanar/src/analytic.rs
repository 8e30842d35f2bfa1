//! Closed-form laws of the motion.
//!
//! Everything here is expressed through two damped building blocks,
//! `e^(-a) cosh(z)` and `e^(-a) t sinhc(z t)`, instead of the raw
//! two-exponential shapes those laws are usually written in. The damped
//! forms have three properties the raw ones lack: they never overflow
//! (every law keeps `Re z <= a`), they are continuous across vanishing
//! radicands (`sinhc` carries the limit instead of a 0/0), and identities
//! like `4 * prob_side_interior + e^(-lambda t) = prob_boundary` hold
//! exactly in floating point because both sides share the same
//! intermediates.
//!
//! Densities are assembled from exponentially scaled Bessel functions with
//! a single combined exponent, which is nonpositive for every valid
//! parameter set, so they underflow gracefully instead of overflowing.

use crate::bessel::{bessel_i0_scaled, i1_over_x_scaled, BesselError};
use crate::model::ModelParams;
use num_complex::Complex64;
use thiserror::Error;

/// Errors surfaced by the closed-form evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    /// An argument lies outside the support or parameter domain of the law.
    #[error("{what} (got {value})")]
    Domain { what: &'static str, value: f64 },
    /// The law is only available in a sub-regime of the parameter space.
    #[error("operation requires {requirement} (got p={p}, q={q})")]
    UnsupportedRegime {
        requirement: &'static str,
        p: f64,
        q: f64,
    },
}

impl From<BesselError> for AnalyticError {
    fn from(e: BesselError) -> Self {
        match e {
            BesselError::Domain { x, .. } | BesselError::Overflow { x, .. } => {
                AnalyticError::Domain {
                    what: "Bessel argument out of range",
                    value: x,
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Damped hyperbolic helpers.

/// e^(-a) cosh(x) for a >= |x|, assembled from nonpositive exponents.
fn exp_cosh(x: f64, a: f64) -> f64 {
    0.5 * ((x - a).exp() + (-x - a).exp())
}

/// e^(-a) t sinhc(w t) = e^(-a) sinh(w t)/w, continuous through w = 0.
fn exp_t_sinhc(w: f64, t: f64, a: f64) -> f64 {
    let z = w * t;
    if z.abs() < 1e-3 {
        let z2 = z * z;
        t * (1.0 + z2 / 6.0 * (1.0 + z2 / 20.0)) * (-a).exp()
    } else {
        0.5 * ((z - a).exp() - (-z - a).exp()) / w
    }
}

fn exp_cosh_c(x: Complex64, a: f64) -> Complex64 {
    ((x - a).exp() + (-x - a).exp()) * 0.5
}

fn exp_t_sinhc_c(w: Complex64, t: f64, a: f64) -> Complex64 {
    let z = w * t;
    if z.norm() < 1e-3 {
        let z2 = z * z;
        (Complex64::new(1.0, 0.0) + z2 / 6.0 * (Complex64::new(1.0, 0.0) + z2 / 20.0))
            * t
            * (-a).exp()
    } else {
        ((z - a).exp() - (-z - a).exp()) / (2.0 * w)
    }
}

/// Principal square root of a real radicand, as a complex number.
fn csqrt(radicand: f64) -> Complex64 {
    Complex64::new(radicand, 0.0).sqrt()
}

/// Laws that are real by a symmetry of the motion keep at most a rounding
/// residue in the imaginary part after complex evaluation; verify and drop
/// it.
fn drop_imag_residue(z: Complex64, bound: f64) -> Complex64 {
    debug_assert!(
        z.im.abs() <= bound.max(1e-13 * z.re.abs()),
        "imaginary residue {} exceeds {}",
        z.im,
        bound
    );
    Complex64::new(z.re, 0.0)
}

fn assert_time(t: f64) {
    assert!(t.is_finite() && t >= 0.0, "time must be finite and >= 0, got {t}");
}

fn check_density_time(t: f64) -> Result<(), AnalyticError> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(AnalyticError::Domain {
            what: "density requires finite t > 0",
            value: t,
        })
    }
}

// ---------------------------------------------------------------------------
// Boundary of the square (sides X +/- Y = +/- ct).

/// 2 cosh(Wt) + lambda (p+q) t sinhc(Wt) with W = lambda sqrt(pq), damped by
/// e^(-lambda t); shared by `prob_boundary` and `prob_side_interior` so their
/// linear relation holds exactly.
fn side_bracket(params: &ModelParams, t: f64) -> f64 {
    let lam = params.lambda();
    let w = lam * (params.p() * params.q()).sqrt();
    let a = lam * t;
    2.0 * exp_cosh(w * t, a) + lam * (params.p() + params.q()) * exp_t_sinhc(w, t, a)
}

/// P(the particle lies on the boundary of the support square at time t).
pub fn prob_boundary(params: &ModelParams, t: f64) -> f64 {
    assert_time(t);
    side_bracket(params, t) - (-params.lambda() * t).exp()
}

/// P(the particle lies in the interior of one given side), i.e. a quarter of
/// the boundary mass with the four vertex atoms removed.
pub fn prob_side_interior(params: &ModelParams, t: f64) -> f64 {
    assert_time(t);
    0.25 * (side_bracket(params, t) - 2.0 * (-params.lambda() * t).exp())
}

/// Density of the position along one side of the square (coordinate eta =
/// X - Y on the side X + Y = ct), for |eta| < ct.
pub fn side_density(params: &ModelParams, t: f64, eta: f64) -> Result<f64, AnalyticError> {
    check_density_time(t)?;
    let (lam, c) = (params.lambda(), params.c());
    let rho2 = c * c * t * t - eta * eta;
    if !(rho2 > 0.0) {
        return Err(AnalyticError::Domain {
            what: "side coordinate must satisfy |eta| < c t",
            value: eta,
        });
    }
    let k = lam / c * (params.p() * params.q()).sqrt();
    let arg = k * rho2.sqrt();
    let i0 = bessel_i0_scaled(arg)?;
    let i1x = i1_over_x_scaled(arg)?;
    // e^(arg - lambda t) <= e^(-lambda t (1 - sqrt(pq))) <= 1.
    let pref = (arg - lam * t).exp() / (4.0 * c);
    Ok(pref * (0.5 * lam * (params.p() + params.q()) * i0 + k * k * c * c * t * i1x))
}

/// E[e^(i alpha (X-Y)) 1{X+Y = ct}]: characteristic function of the position
/// along one side. Real by the symmetry eta <-> -eta.
pub fn side_charfn(params: &ModelParams, t: f64, alpha: f64) -> Complex64 {
    assert_time(t);
    let (lam, c) = (params.lambda(), params.c());
    let w = csqrt(lam * lam * params.p() * params.q() - alpha * alpha * c * c);
    let a = lam * t;
    let bracket = 2.0 * exp_cosh_c(w * t, a)
        + lam * (params.p() + params.q()) * exp_t_sinhc_c(w, t, a);
    drop_imag_residue(bracket * 0.25, 1e-12)
}

// ---------------------------------------------------------------------------
// Diagonals of the square (the axes y = 0 and x = 0).

/// P(the particle lies on one of the two diagonals of the square) =
/// P(no rotation has occurred).
pub fn prob_diagonals(params: &ModelParams, t: f64) -> f64 {
    assert_time(t);
    (-params.lambda() * (params.p() + params.q()) * t).exp()
}

/// P(the particle lies in the interior of the horizontal diagonal), i.e. has
/// reflected at least once but never rotated.
pub fn prob_diag_interior(params: &ModelParams, t: f64) -> f64 {
    assert_time(t);
    let lam = params.lambda();
    let r0 = params.reflect_prob();
    // e^(-lambda (p+q) t) - e^(-lambda t), written to stay accurate as the
    // reflection probability vanishes.
    0.5 * (-lam * t).exp() * (lam * r0 * t).exp_m1()
}

/// Density of X on the horizontal diagonal {Y = 0}, |x| < ct. Requires a
/// positive reflection probability: without reflections the diagonal carries
/// only the two no-event atoms.
pub fn diag_density(params: &ModelParams, t: f64, x: f64) -> Result<f64, AnalyticError> {
    check_density_time(t)?;
    if params.is_reflection_free() {
        return Err(AnalyticError::UnsupportedRegime {
            requirement: "a positive reflection probability (p + q < 1)",
            p: params.p(),
            q: params.q(),
        });
    }
    let (lam, c) = (params.lambda(), params.c());
    let rho2 = c * c * t * t - x * x;
    if !(rho2 > 0.0) {
        return Err(AnalyticError::Domain {
            what: "diagonal coordinate must satisfy |x| < c t",
            value: x,
        });
    }
    let r0 = params.reflect_prob();
    let k = lam / c * r0;
    let arg = k * rho2.sqrt();
    let i0 = bessel_i0_scaled(arg)?;
    let i1x = i1_over_x_scaled(arg)?;
    let pref = (arg - lam * t).exp() / (4.0 * c);
    Ok(pref * (lam * r0 * i0 + k * k * c * c * t * i1x))
}

/// E[e^(i alpha X) 1{Y = 0}]: characteristic function of the position on the
/// horizontal diagonal (atoms included). Real by symmetry.
pub fn diag_charfn(params: &ModelParams, t: f64, alpha: f64) -> Complex64 {
    assert_time(t);
    let (lam, c) = (params.lambda(), params.c());
    let r0 = params.reflect_prob();
    let w = csqrt(lam * lam * r0 * r0 - alpha * alpha * c * c);
    let a = lam * t;
    let bracket = 2.0 * exp_cosh_c(w * t, a) + 2.0 * lam * r0 * exp_t_sinhc_c(w, t, a);
    drop_imag_residue(bracket * 0.25, 1e-12)
}

// ---------------------------------------------------------------------------
// Interior charfn in the reflection-free regime.

/// E[e^(i(alpha X + beta Y))] for a motion that never reflects (p + q = 1).
///
/// The two spectral roots S = A + B and D = A - B collide where A B
/// vanishes; near that manifold the closed form is evaluated as an average
/// over nearby frequencies that sit clear of it, which keeps the error far
/// below the rounding noise the colliding-roots form would produce.
pub fn interior_charfn_noref(
    params: &ModelParams,
    t: f64,
    alpha: f64,
    beta: f64,
) -> Result<Complex64, AnalyticError> {
    assert_time(t);
    if !params.is_reflection_free() {
        return Err(AnalyticError::UnsupportedRegime {
            requirement: "a reflection-free motion (p + q = 1)",
            p: params.p(),
            q: params.q(),
        });
    }
    for (v, what) in [(alpha, "alpha must be finite"), (beta, "beta must be finite")] {
        if !v.is_finite() {
            return Err(AnalyticError::Domain { what, value: v });
        }
    }
    let (lam, c, p) = (params.lambda(), params.c(), params.p());
    Ok(drop_imag_residue(
        interior_eval_guarded(lam, c, p, t, alpha, beta),
        1e-10,
    ))
}

/// 4 A B, the discriminant-like quantity whose vanishing marks the colliding
/// spectral roots of the interior law.
fn interior_root_product(lam: f64, c: f64, p: f64, alpha: f64, beta: f64) -> Complex64 {
    let (a_root, b_root) = interior_roots(lam, c, p, alpha, beta);
    4.0 * a_root * b_root
}

/// True where the spectral roots are too close for the closed form to be
/// evaluated directly in floats.
fn roots_collide(lam: f64, c: f64, p: f64, alpha: f64, beta: f64) -> bool {
    let scale = lam + c * (alpha.abs() + beta.abs());
    interior_root_product(lam, c, p, alpha, beta).norm() < 1e-6 * scale * scale
}

/// Interior charfn with the root-collision manifold handled by averaging
/// over displaced frequencies.
///
/// The collision set is a union of curves in the frequency plane, so a
/// displaced point only helps if it actually leaves the set: each candidate
/// is re-tested and only the clear ones enter the average. Diagonal moves
/// alone are not enough — at p = 1/2 one branch runs along
/// |alpha| - |beta| = lambda / c, which (+e, +e) displacement follows — so
/// the stencil mixes diagonal and axis moves, and the displacement widens
/// when a crossing of two branches defeats the whole stencil. The kept
/// points come in +-pairs, so the O(eps) terms of the average cancel.
fn interior_eval_guarded(lam: f64, c: f64, p: f64, t: f64, alpha: f64, beta: f64) -> Complex64 {
    if !roots_collide(lam, c, p, alpha, beta) {
        return interior_eval(lam, c, p, t, alpha, beta);
    }
    let mut eps = 1e-7;
    for _ in 0..4 {
        let stencil = [
            (eps, eps),
            (-eps, -eps),
            (eps, -eps),
            (-eps, eps),
            (eps, 0.0),
            (-eps, 0.0),
            (0.0, eps),
            (0.0, -eps),
        ];
        let mut acc = Complex64::new(0.0, 0.0);
        let mut kept = 0u32;
        for (da, db) in stencil {
            if !roots_collide(lam, c, p, alpha + da, beta + db) {
                acc += interior_eval(lam, c, p, t, alpha + da, beta + db);
                kept += 1;
            }
        }
        if kept > 0 {
            return acc / f64::from(kept);
        }
        eps *= 32.0;
    }
    interior_eval(lam, c, p, t, alpha, beta)
}

fn interior_roots(lam: f64, c: f64, p: f64, alpha: f64, beta: f64) -> (Complex64, Complex64) {
    let sg = alpha * alpha + beta * beta;
    let inner = csqrt(
        c.powi(4) * alpha * alpha * beta * beta - lam.powi(4) * (2.0 * p - 1.0).powi(2),
    );
    let x = Complex64::new(4.0 * lam * lam * p * (1.0 - p) - c * c * sg, 0.0);
    let a_root = 0.5 * (x + 2.0 * inner).sqrt();
    let b_root = 0.5 * (x - 2.0 * inner).sqrt();
    (a_root, b_root)
}

fn interior_eval(lam: f64, c: f64, p: f64, t: f64, alpha: f64, beta: f64) -> Complex64 {
    let (a_root, b_root) = interior_roots(lam, c, p, alpha, beta);
    let s = a_root + b_root;
    let d = a_root - b_root;
    let ab4 = 4.0 * a_root * b_root;
    let sg = alpha * alpha + beta * beta;
    let c2sg = c * c * sg;
    let g = lam * lam * lam - lam * c2sg;
    let two_l2 = 2.0 * lam * lam;
    let a = lam * t;

    let k0_num = Complex64::new(two_l2 - c2sg, 0.0) - 2.0 * d * d;
    let k2_num = Complex64::new(two_l2 - c2sg, 0.0) - 2.0 * s * s;
    (k0_num * exp_cosh_c(s * t, a) - k2_num * exp_cosh_c(d * t, a)
        + 2.0
            * ((g - lam * d * d) * exp_t_sinhc_c(s, t, a)
                - (g - lam * s * s) * exp_t_sinhc_c(d, t, a)))
        / (2.0 * ab4)
}

// ---------------------------------------------------------------------------
// Vertical occupation time T(t).

/// P(T = 0) = P(T = t): mass of each degenerate endpoint of the occupation
/// time (never vertical, resp. never horizontal).
pub fn t_endpoint_mass(params: &ModelParams, t: f64) -> f64 {
    assert_time(t);
    0.5 * (-params.lambda() * (params.p() + params.q()) * t).exp()
}

/// Density of the vertical occupation time T(t) on 0 < s < t.
pub fn t_density(params: &ModelParams, t: f64, s: f64) -> Result<f64, AnalyticError> {
    check_density_time(t)?;
    let chord2 = s * (t - s);
    if !(chord2 > 0.0) || s >= t {
        return Err(AnalyticError::Domain {
            what: "occupation time must satisfy 0 < s < t",
            value: s,
        });
    }
    let lam = params.lambda();
    let rate = lam * (params.p() + params.q());
    let k = 2.0 * rate;
    let arg = k * chord2.sqrt();
    let i0 = bessel_i0_scaled(arg)?;
    let i1x = i1_over_x_scaled(arg)?;
    // arg <= k t/2 = rate * t, so the combined exponent is nonpositive.
    let pref = (arg - rate * t).exp();
    Ok(pref * (rate * i0 + 0.25 * k * k * t * i1x))
}

/// E[e^(i alpha T(t))]: characteristic function of the occupation time,
/// endpoint atoms included.
pub fn t_charfn(params: &ModelParams, t: f64, alpha: f64) -> Complex64 {
    assert_time(t);
    let rate = params.lambda() * (params.p() + params.q());
    let w = 0.5 * csqrt(4.0 * rate * rate - alpha * alpha);
    let a = rate * t;
    let body = exp_cosh_c(w * t, a) + rate * exp_t_sinhc_c(w, t, a);
    Complex64::new(0.0, 0.5 * alpha * t).exp() * body
}

/// Density of Y on the vertical side {T = t} of the time-position triangle;
/// the motion there is the horizontal-diagonal motion with axes swapped.
pub fn vertical_side_density(params: &ModelParams, t: f64, y: f64) -> Result<f64, AnalyticError> {
    diag_density(params, t, y)
}

/// E[e^(i beta Y) 1{T = t}], equal to the horizontal-diagonal charfn with
/// the frequency read in the vertical coordinate.
pub fn vertical_side_charfn(params: &ModelParams, t: f64, beta: f64) -> Complex64 {
    diag_charfn(params, t, beta)
}

// ---------------------------------------------------------------------------
// Oblique side of the triangle: the event {Y(t) = c T(t)}.

fn require_reflection_free(params: &ModelParams) -> Result<(), AnalyticError> {
    if params.is_reflection_free() {
        Ok(())
    } else {
        Err(AnalyticError::UnsupportedRegime {
            requirement: "a reflection-free motion (p + q = 1)",
            p: params.p(),
            q: params.q(),
        })
    }
}

fn require_mixing_p(params: &ModelParams) -> Result<f64, AnalyticError> {
    let p = params.p();
    if p == 0.0 || p == 1.0 {
        Err(AnalyticError::Domain {
            what: "the reflection-free oblique law needs 0 < p < 1; at p in {0,1} the motion is cyclic",
            value: p,
        })
    } else {
        Ok(p)
    }
}

/// e^(-a) sinhc^2(theta/2), continuous through theta = 0 and safe for large
/// theta (the exponents theta - a and -theta - a stay nonpositive).
fn exp_sinhc2_half(theta: f64, a: f64) -> f64 {
    if theta.abs() < 1e-2 {
        let x = 0.5 * theta;
        let s = 1.0 + x * x / 6.0 * (1.0 + x * x / 20.0);
        s * s * (-a).exp()
    } else {
        // sinhc^2(theta/2) = 2 (cosh(theta) - 1)/theta^2.
        ((theta - a).exp() + (-theta - a).exp() - 2.0 * (-a).exp()) / (theta * theta)
    }
}

/// P(Y(t) = c T(t)) for a reflection-free motion: the particle never left
/// the oblique side of the triangle.
pub fn oblique_prob_noref(params: &ModelParams, t: f64) -> Result<f64, AnalyticError> {
    assert_time(t);
    require_reflection_free(params)?;
    let p = require_mixing_p(params)?;
    let lam = params.lambda();
    let pp = p * (1.0 - p);
    let w = lam * (2.0 * pp).sqrt();
    let theta = w * t;
    let a = lam * t;
    // (1/8) e^(-lambda t) [2(1 + 1/(2pp)) cosh(theta) + (4/sqrt(2pp)) sinh(theta)
    //   - (1 - 4pp)/pp], regrouped so the 1/pp pieces cancel analytically:
    // 2 cosh(theta) + 4 + lambda^2 t^2 sinhc^2(theta/2) + 4 lambda t sinhc(theta).
    Ok(0.125
        * (2.0 * exp_cosh(theta, a)
            + 4.0 * (-a).exp()
            + lam * lam * t * t * exp_sinhc2_half(theta, a)
            + 4.0 * lam * exp_t_sinhc(w, t, a)))
}

/// Density in s of (T(t), Y(t)) on the oblique side {Y = c T}, 0 < s < t,
/// for a reflection-free motion. The endpoint atoms (never vertical at s=0,
/// straight up at s=t) are not included.
pub fn oblique_density_noref(params: &ModelParams, t: f64, s: f64) -> Result<f64, AnalyticError> {
    check_density_time(t)?;
    require_reflection_free(params)?;
    let p = require_mixing_p(params)?;
    let chord2 = s * (t - s);
    if !(chord2 > 0.0) || s >= t {
        return Err(AnalyticError::Domain {
            what: "occupation time must satisfy 0 < s < t",
            value: s,
        });
    }
    let lam = params.lambda();
    let pp = p * (1.0 - p);
    let k = 2.0 * lam * (2.0 * pp).sqrt();
    let arg = k * chord2.sqrt();
    let i0 = bessel_i0_scaled(arg)?;
    let i1x = i1_over_x_scaled(arg)?;
    // Kernel weight b s + c (t - 2s) with b = (1 + 2pp)/(8pp), c = 1/(8pp):
    // equals (t - s + 2 pp s)/(8 pp) > 0 on (0, t).
    let weight = (t - s + 2.0 * pp * s) / (8.0 * pp);
    let pref = (arg - lam * t).exp();
    Ok(pref * (0.5 * lam * i0 + weight * 0.5 * k * k * i1x))
}

/// E[e^(i alpha T(t)) 1{Y = c T}] for a reflection-free motion.
pub fn oblique_charfn_noref(
    params: &ModelParams,
    t: f64,
    alpha: f64,
) -> Result<Complex64, AnalyticError> {
    assert_time(t);
    require_reflection_free(params)?;
    let p = require_mixing_p(params)?;
    let lam = params.lambda();
    let pp = p * (1.0 - p);
    let w = csqrt(8.0 * lam * lam * pp - alpha * alpha);
    let a = lam * t;
    let m = (1.0 + 2.0 * pp) / pp;
    let n = (4.0 * pp * Complex64::new(2.0 * lam, alpha)
        - Complex64::new(0.0, alpha * (1.0 + 2.0 * pp)))
        / pp;
    let phase = Complex64::new(0.0, 0.5 * alpha * t).exp();
    let body = m * exp_cosh_c(w * (0.5 * t), a);
    let tail = n * exp_t_sinhc_c(w, 0.5 * t, a);
    let constant = (1.0 - 4.0 * pp) / (8.0 * pp) * (-a).exp();
    Ok(0.125 * phase * (body + tail) - constant)
}

/// P(Y(t) = c T(t)) when the two rotations are equally likely (p = q).
pub fn oblique_prob_pq(params: &ModelParams, t: f64) -> Result<f64, AnalyticError> {
    assert_time(t);
    let (p, q) = (params.p(), params.q());
    if p != q {
        return Err(AnalyticError::UnsupportedRegime {
            requirement: "balanced rotations (p = q)",
            p,
            q,
        });
    }
    let lam = params.lambda();
    let w0 = lam * (12.0 * p * p - 4.0 * p + 1.0).sqrt();
    let a = 0.5 * lam * t * (1.0 + 2.0 * p);
    Ok(0.75 * exp_cosh(0.5 * w0 * t, a) + 0.25 * lam * (1.0 + 6.0 * p) * exp_t_sinhc(w0, 0.5 * t, a))
}

/// E[e^(i alpha T(t)) 1{Y = c T}] when the two rotations are equally likely.
pub fn oblique_charfn_pq(
    params: &ModelParams,
    t: f64,
    alpha: f64,
) -> Result<Complex64, AnalyticError> {
    assert_time(t);
    let (p, q) = (params.p(), params.q());
    if p != q {
        return Err(AnalyticError::UnsupportedRegime {
            requirement: "balanced rotations (p = q)",
            p,
            q,
        });
    }
    let lam = params.lambda();
    let w = Complex64::new(
        lam * lam * (12.0 * p * p - 4.0 * p + 1.0) - alpha * alpha,
        -2.0 * alpha * lam * (1.0 - 2.0 * p),
    )
    .sqrt();
    let num = Complex64::new(lam * (1.0 + 6.0 * p), -alpha);
    let a = 0.5 * lam * t * (1.0 + 2.0 * p);
    let phase = Complex64::new(0.0, 0.5 * alpha * t).exp();
    Ok(phase * (0.75 * exp_cosh_c(w * (0.5 * t), a) + 0.25 * num * exp_t_sinhc_c(w, 0.5 * t, a)))
}

// ---------------------------------------------------------------------------
// Hydrodynamic limit.

/// Diffusion coefficient of the Gaussian limit under the scaling
/// lambda = c^2, c -> infinity:
/// D = (1/4) ((1-p) + (1-q)) / ((1-p)^2 + (1-q)^2).
pub fn hydro_coeff(p: f64, q: f64) -> f64 {
    assert!(
        p.is_finite() && q.is_finite() && (0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&q),
        "probabilities must lie in [0,1], got p={p}, q={q}"
    );
    assert!(p + q <= 1.0, "p + q must not exceed 1, got p={p}, q={q}");
    let up = 1.0 - p;
    let uq = 1.0 - q;
    0.25 * (up + uq) / (up * up + uq * uq)
}

/// The limiting joint law of (T(t), Y(t)): a point mass at s* = t/2 in the
/// occupation coordinate times a centered Gaussian in the position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointHydroLimit {
    /// Variance 2 D t of the Gaussian position marginal.
    pub variance: f64,
    /// The deterministic occupation time t/2.
    pub s_star: f64,
    /// Gaussian density evaluated at the queried position.
    pub y_density: f64,
    /// Signed distance of the queried occupation time from s*.
    pub s_gap: f64,
}

/// Evaluate the hydrodynamic limit descriptor at a query point (s, y).
pub fn joint_hydro_limit(params: &ModelParams, t: f64, s: f64, y: f64) -> JointHydroLimit {
    assert!(t.is_finite() && t > 0.0, "time must be finite and > 0, got {t}");
    let d = hydro_coeff(params.p(), params.q());
    let variance = 2.0 * d * t;
    let s_star = 0.5 * t;
    let y_density = (-y * y / (2.0 * variance)).exp() / (2.0 * std::f64::consts::PI * variance).sqrt();
    JointHydroLimit {
        variance,
        s_star,
        y_density,
        s_gap: s - s_star,
    }
}
