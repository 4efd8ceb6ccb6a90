//! The bound-state condition `1 = α I1(ε) I2(ε) + γ I1(ε)`.
//!
//! `I1` and `I2` are positive and decrease in `ε`, and `I1` diverges as
//! `ε → 0`. So `α I1 I2 + γ I1 − 1` runs from the sign of `γ + α I2(0)` at small
//! `ε` down to `−1` at large `ε`. A level exists exactly when
//! `γ > −γ0 = −α I2(0)`, and then it is unique for the built-in deformations.
//! The solver does not rely on uniqueness: it scans a log grid for every sign
//! change and refines each one.

use rayon::prelude::*;
use thiserror::Error;

use crate::closed_forms::{closed_i2_zero, closed_integrals, ClosedFormError};
use crate::deformation::{
    couplings_at_bound, energy_from_eps, DeformationError, DeformationProfile,
    DimensionlessCouplings, PhysicalParams,
};
use crate::quadrature::{self, compute_i2_zero, compute_integrals, QuadError};

pub const SCAN_MIN: f64 = 1e-6;
pub const SCAN_MAX: f64 = 1e4;
pub const SCAN_POINTS: usize = 400;
/// Each expansion widens the scan range by a decade on both sides.
pub const SCAN_EXPANSIONS: u32 = 2;
pub const DEFAULT_ROOT_TOLERANCE: f64 = 1e-12;
/// A returned state must satisfy the spectral condition to this accuracy.
pub const RESIDUAL_LIMIT: f64 = 1e-9;
const RESIDUAL_STOP: f64 = 1e-12;
const MAX_REFINE_STEPS: usize = 300;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    ClosedForm(#[from] ClosedFormError),
    #[error(transparent)]
    Deformation(#[from] DeformationError),
    #[error("no sign change of the spectral function on [{lo:e}, {hi:e}]")]
    NoBracketFound { lo: f64, hi: f64 },
    #[error("root refinement stalled at eps = {eps}: residual {residual:e}")]
    ResidualTooLarge { eps: f64, residual: f64 },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("invalid couplings alpha = {alpha}, gamma = {gamma}")]
    InvalidCouplings { alpha: f64, gamma: f64 },
}

/// Where `I1`, `I2` and `I2(0)` come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntegralSource {
    /// Closed forms for built-ins, quadrature otherwise.
    #[default]
    Auto,
    /// Quadrature even when a closed form exists.
    Quadrature,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralProblem {
    pub profile: DeformationProfile,
    pub couplings: DimensionlessCouplings,
    /// Relative bracket width at which root refinement stops.
    pub tol_root: f64,
    pub tol_quad: f64,
    pub source: IntegralSource,
}

/// `γ0 = α I2(0)`; a level exists iff `γ > −γ0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    pub gamma0: f64,
    pub i2_zero: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Existence {
    pub exists: bool,
    pub threshold: Threshold,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundState {
    /// Root `ε* = q/b`.
    pub eps_star: f64,
    /// `E = −(ε* b)²/(2m)`, present when physical parameters were supplied.
    pub energy: Option<f64>,
    pub i1_at_root: f64,
    pub i2_at_root: f64,
    pub bracket: (f64, f64),
    /// `|α I1 I2 + γ I1 − 1|` at `ε*`.
    pub residual: f64,
    /// Every refined root, ascending. More than one means the scan contradicted
    /// uniqueness; `eps_star` is then the largest, i.e. the deepest level.
    pub roots: Vec<f64>,
}

impl BoundState {
    pub fn multiple_roots(&self) -> bool {
        self.roots.len() > 1
    }

    pub fn with_energy(mut self, b: f64, mass: f64) -> Self {
        self.energy = Some(energy_from_eps(self.eps_star, b, mass));
        self
    }
}

impl SpectralProblem {
    pub fn new(profile: DeformationProfile, couplings: DimensionlessCouplings) -> Self {
        SpectralProblem {
            profile,
            couplings,
            tol_root: DEFAULT_ROOT_TOLERANCE,
            tol_quad: quadrature::DEFAULT_TOLERANCE,
            source: IntegralSource::Auto,
        }
    }

    pub fn with_source(mut self, source: IntegralSource) -> Self {
        self.source = source;
        self
    }

    pub fn with_quad_tolerance(mut self, tol: f64) -> Self {
        self.tol_quad = tol;
        self
    }

    pub fn with_root_tolerance(mut self, tol: f64) -> Self {
        self.tol_root = tol;
        self
    }

    fn closed_form(&self) -> Option<crate::deformation::Builtin> {
        match self.source {
            IntegralSource::Auto => self.profile.closed_form_id(),
            IntegralSource::Quadrature => None,
        }
    }

    /// `(I1(ε), I2(ε))` from the configured source.
    pub fn integrals(&self, eps: f64) -> Result<(f64, f64), SpectrumError> {
        match self.closed_form() {
            Some(id) => Ok(closed_integrals(id, eps)?),
            None => {
                let pair = compute_integrals(&self.profile, eps, self.tol_quad)?;
                Ok((pair.i1, pair.i2))
            }
        }
    }

    /// `α I1(ε) I2(ε) + γ I1(ε)`.
    pub fn spectral_lhs(&self, eps: f64) -> Result<f64, SpectrumError> {
        let (i1, i2) = self.integrals(eps)?;
        Ok(self.lhs_from(i1, i2))
    }

    fn lhs_from(&self, i1: f64, i2: f64) -> f64 {
        let c = &self.couplings;
        c.alpha() * i1 * i2 + c.gamma() * i1
    }

    pub fn i2_zero(&self) -> Result<f64, SpectrumError> {
        match self.closed_form() {
            Some(id) => Ok(closed_i2_zero(id)),
            None => Ok(compute_i2_zero(&self.profile, self.tol_quad)?.value),
        }
    }

    pub fn threshold(&self) -> Result<Threshold, SpectrumError> {
        let i2_zero = self.i2_zero()?;
        Ok(Threshold {
            gamma0: self.couplings.alpha() * i2_zero,
            i2_zero,
        })
    }

    /// A level exists iff `γ > −α I2(0)`, strictly. For `α = 0` this is `γ > 0`.
    pub fn exists_bound_state(&self) -> Result<Existence, SpectrumError> {
        let threshold = self.threshold()?;
        Ok(Existence {
            exists: self.couplings.gamma() > -threshold.gamma0,
            threshold,
        })
    }

    /// Brackets `(lo, hi)` of every sign change of `lhs − 1` on `n` log-spaced
    /// points of `[lo, hi]`.
    pub fn scan(&self, lo: f64, hi: f64, n: usize) -> Result<Vec<(f64, f64)>, SpectrumError> {
        let grid = log_grid(lo, hi, n);
        let values = grid
            .iter()
            .map(|&eps| Ok(self.spectral_lhs(eps)? - 1.0))
            .collect::<Result<Vec<f64>, SpectrumError>>()?;
        let mut brackets = Vec::new();
        for i in 0..grid.len() {
            if values[i] == 0.0 {
                brackets.push((grid[i], grid[i]));
            } else if i + 1 < grid.len()
                && values[i + 1] != 0.0
                && (values[i] > 0.0) != (values[i + 1] > 0.0)
            {
                brackets.push((grid[i], grid[i + 1]));
            }
        }
        Ok(brackets)
    }

    /// The root(s) of `lhs(ε) = 1`.
    ///
    /// Scans `[1e-6, 1e4]` with 400 log-spaced points, widening by a decade on
    /// each side up to twice if no sign change shows up, then refines every
    /// bracket.
    pub fn solve_bound_state(&self) -> Result<BoundState, SpectrumError> {
        for tol in [self.tol_root, self.tol_quad] {
            if !(tol > 0.0) {
                return Err(SpectrumError::BadTolerance(tol));
            }
        }
        let mut brackets = Vec::new();
        let (mut lo, mut hi) = (SCAN_MIN, SCAN_MAX);
        for expansion in 0..=SCAN_EXPANSIONS {
            if expansion > 0 {
                lo /= 10.0;
                hi *= 10.0;
            }
            let n = SCAN_POINTS + 80 * expansion as usize;
            brackets = self.scan(lo, hi, n)?;
            if !brackets.is_empty() {
                break;
            }
        }
        if brackets.is_empty() {
            return Err(SpectrumError::NoBracketFound { lo, hi });
        }
        let mut refined = brackets
            .iter()
            .map(|&b| self.refine(b).map(|root| (root, b)))
            .collect::<Result<Vec<_>, _>>()?;
        refined.sort_by(|x, y| x.0.total_cmp(&y.0));
        let roots: Vec<f64> = refined.iter().map(|r| r.0).collect();
        let (eps_star, bracket) = *refined.last().expect("non-empty");
        let (i1, i2) = self.integrals(eps_star)?;
        let residual = (self.lhs_from(i1, i2) - 1.0).abs();
        if !(residual < RESIDUAL_LIMIT) {
            return Err(SpectrumError::ResidualTooLarge {
                eps: eps_star,
                residual,
            });
        }
        Ok(BoundState {
            eps_star,
            energy: None,
            i1_at_root: i1,
            i2_at_root: i2,
            bracket,
            residual,
            roots,
        })
    }

    /// Bisection with secant steps; a secant step that fails to halve the
    /// bracket forces the next step to bisect.
    fn refine(&self, (lo, hi): (f64, f64)) -> Result<f64, SpectrumError> {
        if lo == hi {
            return Ok(lo);
        }
        let g = |eps: f64| self.spectral_lhs(eps).map(|v| v - 1.0);
        let (mut a, mut b) = (lo, hi);
        let (mut fa, mut fb) = (g(a)?, g(b)?);
        let mut best = if fa.abs() < fb.abs() {
            (a, fa)
        } else {
            (b, fb)
        };
        let mut force_bisect = false;
        for _ in 0..MAX_REFINE_STEPS {
            if best.1.abs() < RESIDUAL_STOP || (b - a) <= self.tol_root * best.0.abs() {
                break;
            }
            let width = b - a;
            let secant = b - fb * (b - a) / (fb - fa);
            let x = if force_bisect || !(secant > a && secant < b) {
                0.5 * (a + b)
            } else {
                secant
            };
            let fx = g(x)?;
            if fx.abs() < best.1.abs() {
                best = (x, fx);
            }
            if fx == 0.0 {
                break;
            }
            if (fx > 0.0) == (fa > 0.0) {
                a = x;
                fa = fx;
            } else {
                b = x;
                fb = fx;
            }
            force_bisect = (b - a) > 0.5 * width;
        }
        Ok(best.0)
    }
}

pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (l0, l1) = (lo.ln(), hi.ln());
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        hi
                    } else {
                        (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// One point of an `α` sweep. `eps_star` is `None` when no level exists or
/// the solve failed; the failure, if any, is kept in `error`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub alpha: f64,
    pub gamma: f64,
    pub eps_star: Option<f64>,
    pub error: Option<SpectrumError>,
}

fn solve_point(problem: &SpectralProblem) -> (Option<BoundState>, Option<SpectrumError>) {
    match problem.exists_bound_state() {
        Ok(e) if !e.exists => (None, None),
        Ok(_) => match problem.solve_bound_state() {
            Ok(state) => (Some(state), None),
            Err(err) => (None, Some(err)),
        },
        Err(err) => (None, Some(err)),
    }
}

/// `ε*(α)` at fixed `γ`. Points are solved in parallel; output follows `alphas`.
pub fn sweep_alpha(template: &SpectralProblem, gamma: f64, alphas: &[f64]) -> Vec<SweepPoint> {
    alphas
        .par_iter()
        .map(|&alpha| {
            let Some(couplings) = DimensionlessCouplings::new(alpha, gamma) else {
                return SweepPoint {
                    alpha,
                    gamma,
                    eps_star: None,
                    error: Some(SpectrumError::InvalidCouplings { alpha, gamma }),
                };
            };
            let problem = SpectralProblem {
                couplings,
                ..template.clone()
            };
            let (state, error) = solve_point(&problem);
            SweepPoint {
                alpha,
                gamma,
                eps_star: state.map(|s| s.eps_star),
                error,
            }
        })
        .collect()
}

/// One point of a momentum-bound sweep at fixed physical couplings.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitPoint {
    pub b: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub eps_star: Option<f64>,
    pub energy: Option<f64>,
    pub error: Option<SpectrumError>,
}

/// `E(b)` for fixed `ħ, m, κ, λ`.
///
/// `α` does not depend on `b`, so for a pure `δ′` potential `ε*` is constant and
/// `E = −ε*² b²/(2m)` grows without bound as `b → ∞`. The `δ` coupling
/// `γ = λm/(bπħ)` fades with `b`.
pub fn sweep_b_physical(
    params: &PhysicalParams,
    template: &SpectralProblem,
    b_values: &[f64],
) -> Vec<LimitPoint> {
    b_values
        .par_iter()
        .map(|&b| {
            let couplings = couplings_at_bound(params, b);
            let mut point = LimitPoint {
                b,
                alpha: couplings.alpha(),
                gamma: couplings.gamma(),
                eps_star: None,
                energy: None,
                error: None,
            };
            let profile = match template.profile.clone().with_bound(b) {
                Ok(p) => p,
                Err(e) => {
                    point.error = Some(e.into());
                    return point;
                }
            };
            let problem = SpectralProblem {
                profile,
                couplings,
                ..template.clone()
            };
            let (state, error) = solve_point(&problem);
            point.error = error;
            if let Some(state) = state {
                point.eps_star = Some(state.eps_star);
                point.energy = Some(energy_from_eps(state.eps_star, b, params.mass));
            }
            point
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::closed_i1;
    use crate::deformation::Builtin;
    use std::f64::consts::PI;

    fn problem(id: Builtin, alpha: f64, gamma: f64) -> SpectralProblem {
        SpectralProblem::new(
            DeformationProfile::builtin(id),
            DimensionlessCouplings::new(alpha, gamma).unwrap(),
        )
    }

    #[test]
    fn lhs_examples() {
        assert_eq!(
            problem(Builtin::Cutoff, 0.0, 0.0)
                .spectral_lhs(0.7)
                .unwrap(),
            0.0
        );
        let v = problem(Builtin::Cutoff, 1.0, 0.0)
            .spectral_lhs(1.0)
            .unwrap();
        assert!((v - (PI / 2.0) * (2.0 - PI / 2.0)).abs() < 1e-15);
        assert!((v - 0.674192).abs() < 1e-6);
        let v = problem(Builtin::Cutoff, 0.0, 1.0)
            .spectral_lhs(1.0)
            .unwrap();
        assert!((v - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn existence() {
        let e = problem(Builtin::Cutoff, 1.0, 0.0)
            .exists_bound_state()
            .unwrap();
        assert!(e.exists);
        assert_eq!(e.threshold.gamma0, 2.0);
        assert!(
            !problem(Builtin::Cutoff, 1.0, -2.5)
                .exists_bound_state()
                .unwrap()
                .exists
        );
        assert!(
            !problem(Builtin::Cutoff, 1.0, -2.0)
                .exists_bound_state()
                .unwrap()
                .exists
        );
        assert!(
            !problem(Builtin::Cutoff, 0.0, 0.0)
                .exists_bound_state()
                .unwrap()
                .exists
        );
        assert!(
            !problem(Builtin::Kempf, 0.0, -1.0)
                .exists_bound_state()
                .unwrap()
                .exists
        );
        assert!(
            problem(Builtin::Kempf, 0.0, 1e-3)
                .exists_bound_state()
                .unwrap()
                .exists
        );
    }

    #[test]
    fn constructed_root() {
        let alpha = 1.0 / ((PI / 2.0) * (2.0 - PI / 2.0));
        assert!((alpha - 1.4833).abs() < 1e-4);
        let s = problem(Builtin::Cutoff, alpha, 0.0)
            .solve_bound_state()
            .unwrap();
        assert!((s.eps_star - 1.0).abs() < 1e-9);
        assert!(s.residual < RESIDUAL_LIMIT);
        assert!(s.bracket.0 < s.eps_star && s.eps_star < s.bracket.1);
        assert!(!s.multiple_roots());
    }

    #[test]
    fn pure_delta_roots() {
        // cutoff: γ I1 = 1 ⇔ ε = 2 atan(1/ε); oracle is plain bisection on the closed form.
        let f = |e: f64| e - 2.0 * (1.0 / e).atan();
        let (mut lo, mut hi) = (0.1, 10.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        let s = problem(Builtin::Cutoff, 0.0, 1.0)
            .solve_bound_state()
            .unwrap();
        assert!((s.eps_star - lo).abs() < 1e-10 * lo);

        // kempf: ε(πε + 2) = 2π
        let want = (-1.0 + (1.0 + 2.0 * PI * PI).sqrt()) / PI;
        assert!((want * (PI * want + 2.0) - 2.0 * PI).abs() < 1e-13);
        let s = problem(Builtin::Kempf, 0.0, 1.0)
            .solve_bound_state()
            .unwrap();
        assert!((s.eps_star - want).abs() < 1e-9 * want);
        assert!((closed_i1(Builtin::Kempf, s.eps_star).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn no_bracket_below_threshold() {
        let err = problem(Builtin::Power32, 1.0, -2.0)
            .solve_bound_state()
            .unwrap_err();
        assert!(matches!(err, SpectrumError::NoBracketFound { lo, hi } if lo == 1e-8 && hi == 1e6));
    }

    #[test]
    fn sweep_order_and_gaps() {
        let t = problem(Builtin::Cutoff, 1.0, 0.0);
        let pts = sweep_alpha(&t, 0.0, &[0.5, 1.0, 2.0]);
        let eps: Vec<f64> = pts.iter().map(|p| p.eps_star.unwrap()).collect();
        assert!(eps[0] < eps[1] && eps[1] < eps[2]);
        assert_eq!(
            pts.iter().map(|p| p.alpha).collect::<Vec<_>>(),
            vec![0.5, 1.0, 2.0]
        );

        // γ = −1.9: exists only once α I2(0) = 2α > 1.9.
        let pts = sweep_alpha(&t, -1.9, &[0.9, 0.951, 1.0]);
        assert!(pts[0].eps_star.is_none() && pts[0].error.is_none());
        assert!(pts[1].eps_star.unwrap() < pts[2].eps_star.unwrap());
    }

    #[test]
    fn small_alpha_drives_root_to_zero() {
        let t = problem(Builtin::Power32, 1.0, 0.0);
        let pts = sweep_alpha(&t, 0.0, &[1e-1, 1e-2, 1e-3]);
        let eps: Vec<f64> = pts.iter().map(|p| p.eps_star.unwrap()).collect();
        assert!(eps[0] > eps[1] && eps[1] > eps[2]);
        assert!(eps[2] < 1e-2);
    }

    #[test]
    fn grids() {
        assert_eq!(log_grid(1e-6, 1e4, 400).len(), 400);
        let g = log_grid(1.0, 100.0, 3);
        assert!((g[1] - 10.0).abs() < 1e-12 && g[2] == 100.0);
        assert_eq!(linear_grid(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
        assert!(log_grid(1.0, 2.0, 0).is_empty());
    }
}
