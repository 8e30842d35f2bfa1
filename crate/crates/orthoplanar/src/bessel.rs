//! Modified Bessel functions I0 and I1 and the I0 time-derivative kernels
//! that the closed-form densities are built from.
//!
//! Two evaluation regimes: the all-positive power series for x <= 15 (no
//! cancellation, condition number 1) and the large-argument asymptotic
//! expansion for x > 15, carried out as exp(x - ln sqrt(2 pi x)) * sum so the
//! result stays representable up to x ~ 713 where I0 genuinely leaves f64
//! range.

use thiserror::Error;

/// Crossover between the power series and the asymptotic expansion. At the
/// crossover the truncated asymptotic tail is ~e^(-2x) ~ 9e-14 relative,
/// inside the 1e-12 contract.
const SERIES_CUTOFF: f64 = 15.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BesselError {
    #[error("I{order}({x}) overflows f64 range")]
    Overflow { order: u8, x: f64 },
    #[error("argument {x} outside domain ({what})")]
    Domain { x: f64, what: &'static str },
}

fn check_nonnegative(x: f64, order: u8) -> Result<(), BesselError> {
    if x.is_nan() || x < 0.0 {
        return Err(BesselError::Domain {
            x,
            what: "argument must be a nonnegative real",
        });
    }
    if x.is_infinite() {
        return Err(BesselError::Overflow { order, x });
    }
    Ok(())
}

/// Modified Bessel function of the first kind, order zero, for x >= 0.
/// Relative error <= 1e-12 over the f64-representable range.
pub fn bessel_i0(x: f64) -> Result<f64, BesselError> {
    check_nonnegative(x, 0)?;
    if x <= SERIES_CUTOFF {
        let r = x * x / 4.0;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        while term > sum * 1e-18 {
            term *= r / (k * k);
            sum += term;
            k += 1.0;
        }
        Ok(sum)
    } else {
        asymptotic(x, 0)
    }
}

/// Modified Bessel function of the first kind, order one, for x >= 0.
/// Relative error <= 1e-12 over the f64-representable range.
pub fn bessel_i1(x: f64) -> Result<f64, BesselError> {
    check_nonnegative(x, 1)?;
    if x <= SERIES_CUTOFF {
        Ok(i1_series_over_x(x) * x)
    } else {
        asymptotic(x, 1)
    }
}

/// I1(x)/x, which stays finite (-> 1/2) as x -> 0. Used by the derivative
/// kernels so that nothing divides by a vanishing square root.
pub fn i1_over_x(x: f64) -> Result<f64, BesselError> {
    check_nonnegative(x, 1)?;
    if x <= SERIES_CUTOFF {
        Ok(i1_series_over_x(x))
    } else {
        Ok(asymptotic(x, 1)? / x)
    }
}

/// e^(-x) I0(x). Exponentially scaled so it never overflows; the density
/// formulas combine it with their own e^(-lambda t) prefactors into a single
/// exponent that is nonpositive for every valid parameter set.
pub fn bessel_i0_scaled(x: f64) -> Result<f64, BesselError> {
    check_nonnegative(x, 0)?;
    if x <= SERIES_CUTOFF {
        Ok(bessel_i0(x)? * (-x).exp())
    } else {
        Ok(asymptotic_sum(x, 0) / (2.0 * std::f64::consts::PI * x).sqrt())
    }
}

/// e^(-x) I1(x)/x, the scaled companion of [`i1_over_x`].
pub fn i1_over_x_scaled(x: f64) -> Result<f64, BesselError> {
    check_nonnegative(x, 1)?;
    if x <= SERIES_CUTOFF {
        Ok(i1_series_over_x(x) * (-x).exp())
    } else {
        Ok(asymptotic_sum(x, 1) / (2.0 * std::f64::consts::PI * x).sqrt() / x)
    }
}

/// sum_k (x/2)^(2k) / (k! (k+1)!) = I1(x)/(x/2), halved to give I1(x)/x.
fn i1_series_over_x(x: f64) -> f64 {
    let r = x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while term > sum * 1e-18 {
        term *= r / (k * (k + 1.0));
        sum += term;
        k += 1.0;
    }
    sum * 0.5
}

/// e^x/sqrt(2 pi x) * sum_k t_k with t_0 = 1 and
/// t_(k+1) = t_k * ((2k+1)^2 - 4 nu^2) / (8 (k+1) x), truncated at the
/// smallest term.
fn asymptotic(x: f64, order: u8) -> Result<f64, BesselError> {
    let sum = asymptotic_sum(x, order);
    let value = (x - (2.0 * std::f64::consts::PI * x).ln() / 2.0).exp() * sum;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(BesselError::Overflow { order, x })
    }
}

fn asymptotic_sum(x: f64, order: u8) -> f64 {
    let four_nu2 = 4.0 * f64::from(order) * f64::from(order);
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut k = 0.0;
    loop {
        let next = term * ((2.0 * k + 1.0) * (2.0 * k + 1.0) - four_nu2) / (8.0 * (k + 1.0) * x);
        if next.abs() >= term.abs() || next.abs() < sum.abs() * 1e-18 {
            sum += next;
            break;
        }
        sum += next;
        term = next;
        k += 1.0;
    }
    sum
}

/// d/dt I0(K sqrt(c^2 t^2 - w^2)) for |w| < c t:
/// K^2 c^2 t * (I1(z)/z) with z = K sqrt(c^2 t^2 - w^2).
///
/// Four density formulas share this kernel; it is bounded on its domain but
/// has a square-root cusp at |w| = c t, so integrals over w use the sine
/// substitution in `quad`.
pub fn i0_dt_lightcone(k: f64, c: f64, t: f64, w: f64) -> Result<f64, BesselError> {
    let rho2 = c * c * t * t - w * w;
    if !(rho2 > 0.0) {
        return Err(BesselError::Domain {
            x: w,
            what: "|w| must be strictly inside c*t",
        });
    }
    Ok(k * k * c * c * t * i1_over_x(k * rho2.sqrt())?)
}

/// d/dt I0(K sqrt(s (t - s))) holding s fixed, for 0 < s < t:
/// K^2 s / 2 * (I1(z)/z) with z = K sqrt(s (t - s)).
pub fn i0_dt_chord(k: f64, t: f64, s: f64) -> Result<f64, BesselError> {
    let u2 = chord_radicand(t, s)?;
    Ok(k * k * s / 2.0 * i1_over_x(k * u2.sqrt())?)
}

/// d/ds I0(K sqrt(s (t - s))) holding t fixed, for 0 < s < t:
/// K^2 (t - 2s) / 2 * (I1(z)/z) with z = K sqrt(s (t - s)).
pub fn i0_ds_chord(k: f64, t: f64, s: f64) -> Result<f64, BesselError> {
    let u2 = chord_radicand(t, s)?;
    Ok(k * k * (t - 2.0 * s) / 2.0 * i1_over_x(k * u2.sqrt())?)
}

fn chord_radicand(t: f64, s: f64) -> Result<f64, BesselError> {
    let u2 = s * (t - s);
    if !(s > 0.0 && s < t) {
        return Err(BesselError::Domain {
            x: s,
            what: "s must lie strictly inside (0, t)",
        });
    }
    Ok(u2)
}
