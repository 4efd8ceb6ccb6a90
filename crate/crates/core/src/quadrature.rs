//! Adaptive Gauss-Kronrod integration and the integrals `I1(ε)`, `I2(ε)`.
//!
//! ```text
//! I1(ε) = ∫_{-1}^{1} dy / (k(y)² + ε²)
//! I2(ε) = ∫_{-1}^{1} y² dy / (k(y)² + ε²)
//! ```
//!
//! Both integrands are even, so they are evaluated as `2 ∫_0^1`. For small `ε`
//! they carry a Lorentzian peak of width `ε / k'(0)` at the origin; the initial
//! panels are split around it before adaptation starts.

use std::cell::Cell;

use thiserror::Error;

use crate::deformation::DeformationProfile;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
/// Deepest bisection level of any panel.
pub const MAX_DEPTH: u32 = 60;
const MAX_PANELS: usize = 100_000;
/// Relative error floor below which a panel cannot improve in double precision.
const ROUNDOFF: f64 = 50.0 * f64::EPSILON;
/// `|y|` below which `y²/k(y)²` is replaced by its limit `1/k'(0)²`.
const ORIGIN_LIMIT_RADIUS: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("tolerance not reached: best value {value} with error estimate {error:e}")]
    ToleranceNotReached { value: f64, error: f64 },
    #[error("integrand is not finite at y = {y}")]
    NonFiniteIntegrand { y: f64 },
    #[error("deformation map diverges or fails at interior node y = {y}")]
    DivergedAtEndpoint { y: f64 },
    #[error("I1 diverges at eps = {eps}; eps must be positive")]
    NonPositiveEps { eps: f64 },
    #[error("k'(0) = {slope:e}; I2(0) is not finite")]
    ZeroSlopeAtOrigin { slope: f64 },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
}

/// Value of one integral with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

// Gauss-Kronrod 7/15 nodes on [-1, 1], non-negative half; the last node is 0.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs_value: f64,
    depth: u32,
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, depth: u32) -> Result<Panel, QuadError> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |y: f64| {
        let v = f(y);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadError::NonFiniteIntegrand { y })
        }
    };
    let fc = eval(centre)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs_value = (WGK[7] * fc).abs();
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * x;
        let (f1, f2) = (eval(centre - dx)?, eval(centre + dx)?);
        kronrod += w * (f1 + f2);
        abs_value += w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let width = half.abs();
    Ok(Panel {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
        abs_value: abs_value * width,
        depth,
    })
}

/// Globally adaptive integration of `f` over `[breaks[0], breaks[last]]`.
///
/// `breaks` must be increasing; each consecutive pair is an initial panel. The
/// panel with the largest error estimate is bisected until the summed estimate
/// is at most `tol`, or at most the round-off floor `50·eps·∫|f|` when `tol`
/// is finer than double precision can resolve for this integral.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    tol: f64,
) -> Result<Quadrature, QuadError> {
    if !(tol > 0.0) {
        return Err(QuadError::BadTolerance(tol));
    }
    let mut panels = Vec::with_capacity(64);
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            panels.push(kronrod15(&f, w[0], w[1], 0)?);
        }
    }
    let mut evaluations = 15 * panels.len();
    loop {
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let abs_value: f64 = panels.iter().map(|p| p.abs_value).sum();
        if error <= tol.max(ROUNDOFF * abs_value) {
            break;
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|(_, p), (_, q)| p.error.total_cmp(&q.error))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let p = panels[worst];
        if p.depth >= MAX_DEPTH || panels.len() >= MAX_PANELS {
            panels.sort_by(|x, y| x.a.total_cmp(&y.a));
            return Err(QuadError::ToleranceNotReached {
                value: panels.iter().map(|p| p.value).sum(),
                error,
            });
        }
        let mid = 0.5 * (p.a + p.b);
        panels[worst] = kronrod15(&f, p.a, mid, p.depth + 1)?;
        panels.push(kronrod15(&f, mid, p.b, p.depth + 1)?);
        evaluations += 30;
    }
    // Fixed summation order, independent of refinement history.
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    Ok(Quadrature {
        value: panels.iter().map(|p| p.value).sum(),
        error: panels.iter().map(|p| p.error).sum(),
        evaluations,
    })
}

/// `2 ∫_0^1 f(y) dy` for an even integrand on `[-1, 1]`.
pub fn integrate_even<F: Fn(f64) -> f64>(f: F, tol: f64) -> Result<Quadrature, QuadError> {
    integrate_even_with_breaks(f, &[0.0, 1.0], tol)
}

/// As [`integrate_even`], with initial panel boundaries on `[0, 1]`.
pub fn integrate_even_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    tol: f64,
) -> Result<Quadrature, QuadError> {
    let half = integrate(f, breaks, 0.5 * tol).map_err(|e| match e {
        QuadError::ToleranceNotReached { value, error } => QuadError::ToleranceNotReached {
            value: 2.0 * value,
            error: 2.0 * error,
        },
        QuadError::BadTolerance(_) => QuadError::BadTolerance(tol),
        other => other,
    })?;
    Ok(Quadrature {
        value: 2.0 * half.value,
        error: 2.0 * half.error,
        evaluations: half.evaluations,
    })
}

/// Panel boundaries on `[0, 1]` resolving a peak of half-width `width` at 0:
/// `{0, width, 10·width, 1}` clipped to the interval.
pub fn peak_breaks(width: f64) -> Vec<f64> {
    let mut breaks = vec![0.0];
    for x in [width, 10.0 * width] {
        if x > 0.0 && x < 1.0 && x > *breaks.last().unwrap() {
            breaks.push(x);
        }
    }
    breaks.push(1.0);
    breaks
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralPair {
    pub eps: f64,
    pub i1: f64,
    pub i2: f64,
    pub err1: f64,
    pub err2: f64,
    pub evaluations: usize,
}

/// Runs `integrate_even` on an integrand built from `k`, turning a failing or
/// NaN map value into [`QuadError::DivergedAtEndpoint`].
fn integrate_profile<F>(
    profile: &DeformationProfile,
    integrand: F,
    breaks: &[f64],
    tol: f64,
) -> Result<Quadrature, QuadError>
where
    F: Fn(f64, f64) -> f64,
{
    let failed_at = Cell::new(None);
    let f = |y: f64| match profile.k(y) {
        Ok(k) if !k.is_nan() => integrand(y, k),
        _ => {
            failed_at.set(Some(y));
            f64::NAN
        }
    };
    integrate_even_with_breaks(f, breaks, tol).map_err(|e| match (e, failed_at.get()) {
        (QuadError::NonFiniteIntegrand { y }, Some(_)) => QuadError::DivergedAtEndpoint { y },
        (e, _) => e,
    })
}

pub fn compute_integrals(
    profile: &DeformationProfile,
    eps: f64,
    tol: f64,
) -> Result<IntegralPair, QuadError> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(QuadError::NonPositiveEps { eps });
    }
    let eps2 = eps * eps;
    let breaks = peak_breaks(eps / profile.k_slope_origin());
    let q1 = integrate_profile(profile, |_, k| 1.0 / (k * k + eps2), &breaks, tol)?;
    let q2 = integrate_profile(profile, |y, k| y * y / (k * k + eps2), &breaks, tol)?;
    Ok(IntegralPair {
        eps,
        i1: q1.value,
        i2: q2.value,
        err1: q1.error,
        err2: q2.error,
        evaluations: q1.evaluations + q2.evaluations,
    })
}

/// `I2(0) = ∫_{-1}^{1} y²/k(y)² dy`, the largest value `I2` takes.
pub fn compute_i2_zero(profile: &DeformationProfile, tol: f64) -> Result<Quadrature, QuadError> {
    let slope = profile.k_slope_origin();
    if !(slope > crate::deformation::MIN_SLOPE) {
        return Err(QuadError::ZeroSlopeAtOrigin { slope });
    }
    let at_origin = 1.0 / (slope * slope);
    integrate_profile(
        profile,
        |y, k| {
            if y.abs() < ORIGIN_LIMIT_RADIUS {
                at_origin
            } else {
                let r = y / k;
                r * r
            }
        },
        &[0.0, 0.5, 1.0],
        tol,
    )
}
