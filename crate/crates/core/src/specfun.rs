//! Real Gamma, log-Gamma, Beta and the unregularized incomplete Beta integral.
//!
//! Gamma uses the Lanczos approximation with the g = 10.900511, n = 11
//! coefficient set from G. R. Pugh, "An Analysis of the Lanczos Gamma
//! Approximation" (2004), p. 116, as tabulated in the `statrs` crate.
//! Relative error is below 1e-15 on the positive axis.

use std::f64::consts::{E, PI};

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 10.900511;

const LANCZOS_D: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];

/// 2 * sqrt(e / pi)
const TWO_SQRT_E_OVER_PI: f64 = 1.860_382_734_205_265_7;

/// Largest argument with a finite Gamma value in double precision.
const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

const POLE_TOL: f64 = 1e-12;

/// A strictly positive real number.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PositiveReal(f64);

impl PositiveReal {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value.is_finite() {
            Ok(PositiveReal(value))
        } else {
            Err(Error::domain(format!("expected a positive real, got {value}")))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

fn lanczos_sum(x: f64) -> f64 {
    LANCZOS_D
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_D[0], |s, (i, &dk)| s + dk / (x + i as f64 - 1.0))
}

fn check_pole(x: f64) -> Result<()> {
    if x <= POLE_TOL && (x - x.round()).abs() <= POLE_TOL {
        return Err(Error::Pole { x });
    }
    Ok(())
}

/// Euler's Gamma function.
///
/// Negative non-integer arguments go through the reflection formula.
/// Points within 1e-12 of a non-positive integer are rejected as poles.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::domain("gamma of NaN"));
    }
    check_pole(x)?;
    if x > GAMMA_MAX_ARG {
        return Err(Error::Overflow { x });
    }
    if x < 0.5 {
        let g = gamma_positive(1.0 - x);
        let s = (PI * x).sin();
        let v = PI / (s * g);
        if !v.is_finite() {
            return Err(Error::Overflow { x });
        }
        Ok(v)
    } else if x.fract() == 0.0 && x <= 20.0 {
        // small integers by factorial
        Ok((2..x as u64).fold(1.0, |acc, k| acc * k as f64))
    } else {
        Ok(gamma_positive(x))
    }
}

fn gamma_positive(x: f64) -> f64 {
    let s = lanczos_sum(x);
    // split the power so intermediate values stay finite near the overflow edge
    let half = ((x - 0.5 + LANCZOS_G) / E).powf(0.5 * (x - 0.5));
    s * TWO_SQRT_E_OVER_PI * half * half
}

/// Natural logarithm of |Gamma(x)|.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::domain("ln_gamma of NaN"));
    }
    check_pole(x)?;
    if x < 0.5 {
        let s = (PI * x).sin().abs();
        Ok((PI / s).ln() - ln_gamma_positive(1.0 - x))
    } else {
        Ok(ln_gamma_positive(x))
    }
}

fn ln_gamma_positive(x: f64) -> f64 {
    let s = lanczos_sum(x);
    s.ln() + TWO_SQRT_E_OVER_PI.ln() + (x - 0.5) * ((x - 0.5 + LANCZOS_G).ln() - 1.0)
}

/// Beta function B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y).
///
/// Moderate arguments use the Gamma ratio directly; large ones go through
/// log-Gamma so nothing overflows. Both routes are symmetric in (x, y).
pub fn beta(x: f64, y: f64) -> Result<f64> {
    let x = PositiveReal::new(x)
        .map_err(|_| Error::domain(format!("beta requires x > 0, got {x}")))?
        .get();
    let y = PositiveReal::new(y)
        .map_err(|_| Error::domain(format!("beta requires y > 0, got {y}")))?
        .get();
    if x + y < 100.0 {
        Ok(gamma(x)? * gamma(y)? / gamma(x + y)?)
    } else {
        Ok((ln_gamma(x)? + ln_gamma(y)? - ln_gamma(x + y)?).exp())
    }
}

/// Lower incomplete Beta integral without regularization,
/// `int_0^x u^(p-1) (1-u)^(q-1) du`, for x in [0, 1/2].
///
/// Power series in x; converges geometrically for x <= 1/2.
fn incbeta_series(x: f64, p: f64, q: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    // (1-u)^(q-1) = sum_k c_k u^k,  c_{k+1} = c_k (k - (q-1)) / (k+1)
    let alpha = q - 1.0;
    let mut ck = 1.0;
    let mut xk = 1.0;
    let mut sum = 1.0 / p;
    for k in 0..400 {
        let kf = k as f64;
        ck *= (kf - alpha) / (kf + 1.0);
        xk *= x;
        let term = ck * xk / (p + kf + 1.0);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() || ck == 0.0 {
            break;
        }
    }
    x.powf(p) * sum
}

/// `int_{x0}^{x1} u^(p-1) (1-u)^(q-1) du` for 0 <= x0 <= x1 <= 1.
///
/// Pieces above 1/2 are evaluated in the reflected variable 1 - u, so a
/// short segment near either endpoint is computed without cancellation.
pub fn beta_segment(x0: f64, x1: f64, p: f64, q: f64) -> f64 {
    debug_assert!(p > 0.0 && q > 0.0);
    debug_assert!((0.0..=1.0).contains(&x0) && x0 <= x1 && x1 <= 1.0);
    if x1 <= 0.5 {
        incbeta_series(x1, p, q) - incbeta_series(x0, p, q)
    } else if x0 >= 0.5 {
        incbeta_series(1.0 - x0, q, p) - incbeta_series(1.0 - x1, q, p)
    } else {
        (incbeta_series(0.5, p, q) - incbeta_series(x0, p, q))
            + (incbeta_series(0.5, q, p) - incbeta_series(1.0 - x1, q, p))
    }
}
