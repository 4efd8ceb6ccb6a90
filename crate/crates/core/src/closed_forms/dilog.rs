//! Real dilogarithm `Li₂(x) = Σ xⁿ/n²` on `x ≤ 1`.

use std::f64::consts::PI;

use super::ClosedFormError;

const PI2_6: f64 = PI * PI / 6.0;

/// `Li₂(x)` for real `x ≤ 1`, absolute accuracy about 1e-15.
///
/// Series for `|x| ≤ 1/2`, reflection on `(1/2, 1]`, Landen's identity on
/// `[-1, -1/2)` and inversion below `-1`.
pub fn dilog(x: f64) -> Result<f64, ClosedFormError> {
    if x.is_nan() || x > 1.0 {
        return Err(ClosedFormError::Domain {
            what: "dilog",
            value: x,
        });
    }
    Ok(dilog_unchecked(x))
}

fn dilog_unchecked(x: f64) -> f64 {
    if x == 1.0 {
        PI2_6
    } else if x > 0.5 {
        reflection(x)
    } else if x >= -0.5 {
        series(x)
    } else if x >= -1.0 {
        landen(x)
    } else {
        inversion(x)
    }
}

pub(crate) fn series(x: f64) -> f64 {
    let mut sum: f64 = 0.0;
    let mut power = x;
    let mut n = 1.0;
    while power.abs() > 1e-18 * sum.abs().max(f64::MIN_POSITIVE) && n < 200.0 {
        sum += power / (n * n);
        power *= x;
        n += 1.0;
    }
    sum
}

/// `Li₂(x) = π²/6 − ln(x) ln(1−x) − Li₂(1−x)`.
pub(crate) fn reflection(x: f64) -> f64 {
    PI2_6 - x.ln() * (1.0 - x).ln() - dilog_unchecked(1.0 - x)
}

/// `Li₂(x) = −Li₂(x/(x−1)) − ½ ln²(1−x)` for `x < 1`.
pub(crate) fn landen(x: f64) -> f64 {
    let l = (1.0 - x).ln();
    -dilog_unchecked(x / (x - 1.0)) - 0.5 * l * l
}

/// `Li₂(x) = −π²/6 − ½ ln²(−x) − Li₂(1/x)` for `x < 0`.
pub(crate) fn inversion(x: f64) -> f64 {
    let l = (-x).ln();
    -PI2_6 - 0.5 * l * l - dilog_unchecked(1.0 / x)
}
