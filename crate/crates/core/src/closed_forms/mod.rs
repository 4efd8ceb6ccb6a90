//! Analytic `I1(ε)`, `I2(ε)` and `I2(0)` for the built-in deformations.
//!
//! With `c = 1 − ε²`, the `power32` integrals reduce to
//! `A(ε) = ∫_{-1}^{1} dy / (ε² + c y²)`:
//!
//! ```text
//! I1 = (A − 2) / c
//! I2 = 2(ε² + 2) / (3c²) − ε² A / c²
//! A  = 2 atan(√c / ε) / (ε √c)      c > 0
//!    = 2 atanh(√−c / ε) / (ε √−c)   c < 0
//! ```
//!
//! For `kempf`, with `a = πε/2` and `u = (πε − 2)/(πε + 2)`,
//!
//! ```text
//! I1 = 2π / (ε (πε + 2))
//! I2 = π² / (6a(1 + a)) + 2 Li₂(u) / (a (1 − a²))
//! ```
//!
//! which is real for every `ε > 0`. The `power32` expressions cancel as
//! `c → 0`; for `|c| <` [`POWER32_SERIES_RADIUS`] they are replaced by their
//! series in `c`,
//!
//! ```text
//! I1 = Σ cⁿ B(n+1),   I2 = Σ cⁿ (B(n+1) − B(n+2)),   B(m) = ∫_{-1}^{1} (1 − y²)^m dy
//! ```
//!
//! The `kempf` point `ε = 2/π` (`u = 0`) is handled by writing the dilogarithm
//! term through the smooth ratio `Li₂(u)/u`, and small `a` by a power series.

pub mod dilog;

use std::f64::consts::{LN_2, PI};

use thiserror::Error;

pub use self::dilog::dilog;
use crate::deformation::Builtin;

/// Which analytic family to use; one per built-in deformation.
pub type ClosedFormId = Builtin;

/// `|1 − ε²|` below which the `power32` series is used.
pub const POWER32_SERIES_RADIUS: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClosedFormError {
    #[error("{what} is outside its domain at {value}")]
    Domain { what: &'static str, value: f64 },
}

fn check_eps(what: &'static str, eps: f64) -> Result<(), ClosedFormError> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(ClosedFormError::Domain { what, value: eps })
    }
}

/// `(I1(ε), I2(ε))` for a built-in deformation.
pub fn closed_integrals(id: ClosedFormId, eps: f64) -> Result<(f64, f64), ClosedFormError> {
    check_eps("closed-form integrals", eps)?;
    Ok(match id {
        Builtin::Cutoff => (cutoff_i1(eps), cutoff_i2(eps)),
        Builtin::Power32 => power32(eps),
        Builtin::Kempf => (kempf_i1(eps), kempf_i2(eps)),
    })
}

pub fn closed_i1(id: ClosedFormId, eps: f64) -> Result<f64, ClosedFormError> {
    check_eps("I1", eps)?;
    Ok(match id {
        Builtin::Cutoff => cutoff_i1(eps),
        Builtin::Power32 => power32(eps).0,
        Builtin::Kempf => kempf_i1(eps),
    })
}

pub fn closed_i2(id: ClosedFormId, eps: f64) -> Result<f64, ClosedFormError> {
    check_eps("I2", eps)?;
    Ok(match id {
        Builtin::Cutoff => cutoff_i2(eps),
        Builtin::Power32 => power32(eps).1,
        Builtin::Kempf => kempf_i2(eps),
    })
}

/// `I2(0)`: 2, 4/3 and 4 ln 2 − π²/6.
pub fn closed_i2_zero(id: ClosedFormId) -> f64 {
    match id {
        Builtin::Cutoff => 2.0,
        Builtin::Power32 => 4.0 / 3.0,
        Builtin::Kempf => 4.0 * LN_2 - PI * PI / 6.0,
    }
}

fn cutoff_i1(eps: f64) -> f64 {
    2.0 * (1.0 / eps).atan() / eps
}

/// `2 − 2ε atan(1/ε)`, by its series in `1/ε` once the difference cancels.
fn cutoff_i2(eps: f64) -> f64 {
    let x = 1.0 / eps;
    if x > 0.1 {
        return 2.0 - 2.0 * eps * x.atan();
    }
    // 1 − atan(x)/x = x²/3 − x⁴/5 + x⁶/7 − …
    let x2 = x * x;
    let mut term = x2;
    let mut sum: f64 = 0.0;
    let mut k = 1;
    while term.abs() > 1e-18 * sum.abs() || k == 1 {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        sum += sign * term / (2 * k + 1) as f64;
        term *= x2;
        k += 1;
    }
    2.0 * sum
}

fn power32(eps: f64) -> (f64, f64) {
    let e2 = eps * eps;
    let c = 1.0 - e2;
    if c.abs() < POWER32_SERIES_RADIUS {
        return power32_series(c);
    }
    let a = if c > 0.0 {
        let s = c.sqrt();
        2.0 * (s / eps).atan() / (eps * s)
    } else {
        // atanh(√d/ε) = ln(ε + √d) since ε² − d = 1.
        let s = (-c).sqrt();
        2.0 * (eps + s).ln() / (eps * s)
    };
    let i1 = (a - 2.0) / c;
    let i2 = (2.0 * (e2 + 2.0) / 3.0 - e2 * a) / (c * c);
    (i1, i2)
}

fn power32_series(c: f64) -> (f64, f64) {
    // B(m) = 2 (2m)!! / (2m+1)!!, B(m+1) = B(m) (2m+2)/(2m+3), B(0) = 2.
    let next_b = |b: f64, m: f64| b * (2.0 * m + 2.0) / (2.0 * m + 3.0);
    let mut b_cur = next_b(2.0, 0.0); // B(1)
    let mut m = 1.0;
    let mut power = 1.0;
    let (mut i1, mut i2): (f64, f64) = (0.0, 0.0);
    loop {
        let b_next = next_b(b_cur, m);
        let t1 = power * b_cur;
        let t2 = power * (b_cur - b_next);
        i1 += t1;
        i2 += t2;
        if t1.abs() <= 1e-17 * i1.abs() && t2.abs() <= 1e-17 * i2.abs() {
            break;
        }
        power *= c;
        b_cur = b_next;
        m += 1.0;
    }
    (i1, i2)
}

fn kempf_i1(eps: f64) -> f64 {
    2.0 * PI / (eps * (PI * eps + 2.0))
}

/// `a = πε/2` below which `kempf_i2` switches to its power series.
const KEMPF_SERIES_RADIUS: f64 = 0.1;

/// `π²/(6a(1+a)) − 2 (Li₂(u)/u) / (a(1+a)²)`, using `1 − a² = −u(1+a)²`.
fn kempf_i2(eps: f64) -> f64 {
    let a = 0.5 * PI * eps;
    if a < KEMPF_SERIES_RADIUS {
        return kempf_i2_series(a);
    }
    let u = (PI * eps - 2.0) / (PI * eps + 2.0);
    let ratio = if u == 0.0 {
        1.0
    } else {
        dilog::dilog(u).expect("u < 1 for eps > 0") / u
    };
    let one_a = 1.0 + a;
    PI * PI / (6.0 * a * one_a) - 2.0 * ratio / (a * one_a * one_a)
}

/// Both terms of the dilogarithm form grow like `1/a` and cancel as `a → 0`.
/// Writing `I2 = N(a) / (a(1 − a²))` with `N = π²(1 − a)/6 + 2 Li₂(u)`,
/// `N(0) = 0` and `N′(a) = −π²/6 + 4 ln(2/(1+a))/(1 − a²)`, so
///
/// ```text
/// I2 = (−π²/6 + 4 Σ dₙ aⁿ/(n+1)) / (1 − a²)
/// ```
///
/// where `dₙ` are the Taylor coefficients of `ln(2/(1+x))/(1 − x²)`.
fn kempf_i2_series(a: f64) -> f64 {
    // ln(2/(1+x)) = ln2 + Σ (−1)ᵏ xᵏ/k; dividing by 1 − x² sums every other one.
    let log_coeff = |k: usize| {
        if k == 0 {
            LN_2
        } else if k.is_multiple_of(2) {
            1.0 / k as f64
        } else {
            -1.0 / k as f64
        }
    };
    let mut sum: f64 = 0.0;
    let mut power = 1.0;
    let mut d_prev2 = 0.0;
    let mut d_prev1 = 0.0;
    for n in 0..40 {
        // d(n) = l(n) + d(n−2)
        let d = log_coeff(n) + d_prev2;
        let term = d * power / (n + 1) as f64;
        sum += term;
        if n > 2 && term.abs() < 1e-18 * sum.abs() {
            break;
        }
        d_prev2 = d_prev1;
        d_prev1 = d;
        power *= a;
    }
    (4.0 * sum - PI * PI / 6.0) / (1.0 - a * a)
}

/// The two-dilogarithm expression
/// `(2/3)(επ³ − 12 Li₂(u) + 12 Li₂(1/u)) / (πε(π²ε² − 4))`, with `Li₂(1/u)`
/// taken through the inversion identity for `u < 0` and as its real part for
/// `u > 0`.
///
/// It differs from `I2` by a `ln²|u|` term, so it is only used to show that
/// discrepancy and never for computation.
pub fn kempf_i2_two_dilog(eps: f64) -> Result<f64, ClosedFormError> {
    check_eps("two-dilog I2", eps)?;
    let u = (PI * eps - 2.0) / (PI * eps + 2.0);
    let li_u = dilog::dilog(u)?;
    let li_inv = if u < 0.0 {
        let l = (-u).ln();
        -PI * PI / 6.0 - 0.5 * l * l - li_u
    } else if u > 0.0 {
        let l = u.ln();
        PI * PI / 3.0 - 0.5 * l * l - li_u
    } else {
        return Err(ClosedFormError::Domain {
            what: "two-dilog I2",
            value: eps,
        });
    };
    Ok(2.0 / 3.0 * (eps * PI.powi(3) - 12.0 * li_u + 12.0 * li_inv)
        / (PI * eps * (PI * PI * eps * eps - 4.0)))
}
