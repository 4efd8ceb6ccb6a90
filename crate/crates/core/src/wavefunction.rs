//! The momentum-space eigenfunction at a bound-state root.
//!
//! In scaled momentum `y = p/b` the eigenfunction is
//!
//! ```text
//! φ(y) = N (1 − i s y) / (k(y)² + ε²),    s = √α I1(ε*)
//! ```
//!
//! with `N > 0` fixed by `b ∫ |φ|² dy = 1`. The phase is chosen so the even
//! part is real and positive. The sign of `s` assumes `κ ≥ 0`; `κ < 0` conjugates
//! the imaginary part.

use thiserror::Error;

use crate::deformation::{DeformationProfile, DimensionlessCouplings};
use crate::expr::EvalError;
use crate::quadrature::{integrate, integrate_even_with_breaks, peak_breaks, QuadError};
use crate::spectrum::{linear_grid, BoundState, SpectralProblem};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WavefunctionError {
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("normalization integral is not positive and finite: {0}")]
    BadNorm(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenfunction {
    pub eps_star: f64,
    /// `s` in `1 − i s y`.
    pub coeff_ratio_imag: f64,
    pub norm_const: f64,
    pub b: f64,
    profile: DeformationProfile,
    couplings: DimensionlessCouplings,
    i1: f64,
    i2: f64,
}

/// One sample of `φ` on the scaled momentum axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySample {
    pub y: f64,
    pub density: f64,
    pub re: f64,
    pub im: f64,
}

impl Eigenfunction {
    pub fn build(problem: &SpectralProblem, state: &BoundState) -> Result<Self, WavefunctionError> {
        let eps = state.eps_star;
        let (i1, i2) = (state.i1_at_root, state.i2_at_root);
        let s = problem.couplings.alpha().sqrt() * i1;
        let eps2 = eps * eps;
        let profile = &problem.profile;
        let breaks = peak_breaks(eps / profile.k_slope_origin());
        let failed = std::cell::Cell::new(None);
        let norm_integral = integrate_even_with_breaks(
            |y| match profile.k(y) {
                Ok(k) => {
                    let d = k * k + eps2;
                    (1.0 + s * s * y * y) / (d * d)
                }
                Err(e) => {
                    failed.set(Some(e));
                    f64::NAN
                }
            },
            &breaks,
            problem.tol_quad,
        );
        if let Some(e) = failed.take() {
            return Err(e.into());
        }
        let j = profile.b() * norm_integral?.value;
        if !(j > 0.0 && j.is_finite()) {
            return Err(WavefunctionError::BadNorm(j));
        }
        Ok(Eigenfunction {
            eps_star: eps,
            coeff_ratio_imag: s,
            norm_const: j.sqrt().recip(),
            b: profile.b(),
            profile: profile.clone(),
            couplings: problem.couplings,
            i1,
            i2,
        })
    }

    /// `(Re φ(y), Im φ(y))`.
    pub fn value(&self, y: f64) -> Result<(f64, f64), EvalError> {
        let k = self.profile.k_endpoint_safe(y)?;
        Ok(self.value_with_k(y, k))
    }

    fn value_with_k(&self, y: f64, k: f64) -> (f64, f64) {
        let d = k * k + self.eps_star * self.eps_star;
        let re = self.norm_const / d;
        (re, -self.coeff_ratio_imag * y * re)
    }

    pub fn density(&self, y: f64) -> Result<f64, EvalError> {
        let (re, im) = self.value(y)?;
        Ok(re * re + im * im)
    }

    /// `n` evenly spaced samples on `[-1, 1]`.
    pub fn sample_density(&self, n: usize) -> Result<Vec<DensitySample>, EvalError> {
        linear_grid(-1.0, 1.0, n)
            .into_iter()
            .map(|y| {
                let (re, im) = self.value(y)?;
                Ok(DensitySample {
                    y,
                    density: re * re + im * im,
                    re,
                    im,
                })
            })
            .collect()
    }

    /// `b ∫ |φ|² dy`, recomputed on `[-1, 1]` without using symmetry.
    pub fn normalization(&self, tol: f64) -> Result<f64, WavefunctionError> {
        let q = self.integrate_full(|_, (re, im)| re * re + im * im, tol)?;
        Ok(self.b * q)
    }

    /// `|s √α I2 − (1 − γ I1)|`; zero when the root and the coefficient agree.
    pub fn consistency_defect(&self) -> f64 {
        let c = &self.couplings;
        (self.coeff_ratio_imag * c.alpha().sqrt() * self.i2 - (1.0 - c.gamma() * self.i1)).abs()
    }

    /// `|R(y)|/N` for the momentum-space equation
    ///
    /// ```text
    /// R(y) = (k² + ε²) φ(y) − γ ∫φ + i√α (y ∫φ − ∫y′φ)
    /// ```
    ///
    /// with both moments computed by quadrature of `φ` itself.
    pub fn equation_residual(&self, ys: &[f64], tol: f64) -> Result<Vec<f64>, WavefunctionError> {
        let m0_re = self.integrate_full(|_, (re, _)| re, tol)?;
        let m0_im = self.integrate_full(|_, (_, im)| im, tol)?;
        let m1_re = self.integrate_full(|y, (re, _)| y * re, tol)?;
        let m1_im = self.integrate_full(|y, (_, im)| y * im, tol)?;
        let gamma = self.couplings.gamma();
        let ra = self.couplings.alpha().sqrt();
        ys.iter()
            .map(|&y| {
                let k = self.profile.k_endpoint_safe(y)?;
                let (re, im) = self.value_with_k(y, k);
                let d = k * k + self.eps_star * self.eps_star;
                // i√α·(u + iv) = −√α v + i√α u
                let u = y * m0_re - m1_re;
                let v = y * m0_im - m1_im;
                let r_re = d * re - gamma * m0_re - ra * v;
                let r_im = d * im - gamma * m0_im + ra * u;
                Ok(r_re.hypot(r_im) / self.norm_const)
            })
            .collect()
    }

    fn integrate_full<F>(&self, f: F, tol: f64) -> Result<f64, WavefunctionError>
    where
        F: Fn(f64, (f64, f64)) -> f64,
    {
        let half = peak_breaks(self.eps_star / self.profile.k_slope_origin());
        let mut breaks: Vec<f64> = half.iter().rev().map(|x| -x).collect();
        breaks.extend_from_slice(&half[1..]);
        let failed = std::cell::Cell::new(None);
        let q = integrate(
            |y| match self.profile.k(y) {
                Ok(k) => f(y, self.value_with_k(y, k)),
                Err(e) => {
                    failed.set(Some(e));
                    f64::NAN
                }
            },
            &breaks,
            tol,
        );
        if let Some(e) = failed.take() {
            return Err(e.into());
        }
        Ok(q?.value)
    }
}
