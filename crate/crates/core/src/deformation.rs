//! Deformation profiles and the reduction to dimensionless variables.
//!
//! A deformed algebra `[X, P] = iħ f(P)` is represented through an odd map
//! `g(p)` on a finite momentum interval `[-b, b]`. Everything downstream only
//! needs the scaled map `k(y) = g(b y) / b` on `[-1, 1]` together with `b`, so
//! that is what a [`DeformationProfile`] stores.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::expr::{EvalError, Expr, SyntaxError};

/// Number of uniform grid points on `[-1, 1]` used to validate a custom map.
pub const VALIDATION_GRID: usize = 1001;
pub const VALIDATION_TOLERANCE: f64 = 1e-9;
/// Step of the central difference used for `k'(0)`.
pub const SLOPE_STEP: f64 = 1e-6;
pub const MIN_SLOPE: f64 = 1e-12;
/// Where a map that blows up at `y = ±1` is evaluated instead.
pub const ENDPOINT_RETREAT: f64 = 1.0 - 1e-15;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeformationError {
    #[error("k(y) is not odd: |k({y}) + k({neg_y})| = {defect:e}", neg_y = -y)]
    NotOdd { y: f64, defect: f64 },
    #[error("k(y) is not strictly increasing on [0, 1): k({y_next}) <= k({y})")]
    NotMonotone { y: f64, y_next: f64 },
    #[error("k'(0) = {slope:e} is not positive; I2(0) would diverge")]
    ZeroSlopeAtOrigin { slope: f64 },
    #[error("momentum bound must be positive and finite, got {0}")]
    InvalidBound(f64),
    #[error("deformation scale must be positive and finite, got {0}")]
    InvalidScale(f64),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("unknown built-in deformation `{0}` (expected cutoff, power32 or kempf)")]
    UnknownBuiltin(String),
    #[error("malformed profile block: {0}")]
    Malformed(String),
    #[error("physical parameter `{name}` must be positive and finite, got {value}")]
    InvalidPhysical { name: &'static str, value: f64 },
}

/// The three worked deformations that come with analytic integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// `f(P) = 1` on a bounded momentum interval, `g(p) = p`.
    Cutoff,
    /// `f(P) = (1 + βP²)^{3/2}`, `g(p) = p / sqrt(1 - βp²)`, `b = 1/sqrt(β)`.
    Power32,
    /// `f(P) = 1 + βP²`, `g(p) = tan(sqrt(β) p) / sqrt(β)`, `b = π / (2 sqrt(β))`.
    Kempf,
}

impl Builtin {
    pub const ALL: [Builtin; 3] = [Builtin::Cutoff, Builtin::Power32, Builtin::Kempf];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Cutoff => "cutoff",
            Builtin::Power32 => "power32",
            Builtin::Kempf => "kempf",
        }
    }

    pub fn k(self, y: f64) -> f64 {
        match self {
            Builtin::Cutoff => y,
            Builtin::Power32 => y / (1.0 - y * y).sqrt(),
            Builtin::Kempf => (FRAC_PI_2 * y).tan() * 2.0 / PI,
        }
    }

    /// Momentum bound `b` implied by the deformation parameter `β`.
    ///
    /// The cutoff model has no `β` of its own; it is given the same `b = 1/sqrt(β)`
    /// as `power32`.
    pub fn bound_from_beta(self, beta: f64) -> f64 {
        match self {
            Builtin::Cutoff | Builtin::Power32 => 1.0 / beta.sqrt(),
            Builtin::Kempf => PI / (2.0 * beta.sqrt()),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Builtin {
    type Err = DeformationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| DeformationError::UnknownBuiltin(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScaledMap {
    Builtin(Builtin),
    Custom(Expr),
}

/// A scaled deformation: odd increasing `k(y)` on `[-1, 1]` plus the momentum bound.
///
/// Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationProfile {
    name: String,
    map: ScaledMap,
    b: f64,
    k_slope_origin: f64,
    /// Bound `a` of the physical momentum `P`. Metadata only.
    momentum_limit: Option<f64>,
}

impl DeformationProfile {
    /// Built-in profile in dimensionless mode (`b = 1`).
    pub fn builtin(id: Builtin) -> Self {
        let momentum_limit = match id {
            Builtin::Cutoff => Some(1.0),
            Builtin::Power32 | Builtin::Kempf => Some(f64::INFINITY),
        };
        DeformationProfile {
            name: id.name().to_string(),
            map: ScaledMap::Builtin(id),
            b: 1.0,
            k_slope_origin: 1.0,
            momentum_limit,
        }
    }

    /// Wraps a user expression for `k(y)` after checking oddness, monotonicity
    /// and a positive slope at the origin.
    pub fn custom(expr: Expr, b: f64) -> Result<Self, DeformationError> {
        check_bound(b)?;
        let map = ScaledMap::Custom(expr);
        let eval = |y: f64| eval_map(&map, y);
        validate(&eval)?;
        let slope = central_slope(&eval)?;
        if slope <= MIN_SLOPE {
            return Err(DeformationError::ZeroSlopeAtOrigin { slope });
        }
        Ok(DeformationProfile {
            name: "custom".to_string(),
            map,
            b,
            k_slope_origin: slope,
            momentum_limit: None,
        })
    }

    pub fn parse_custom(source: &str, b: f64) -> Result<Self, DeformationError> {
        Self::custom(Expr::parse(source)?, b)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Same map with a different momentum bound.
    pub fn with_bound(mut self, b: f64) -> Result<Self, DeformationError> {
        check_bound(b)?;
        self.b = b;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn map(&self) -> &ScaledMap {
        &self.map
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn k_slope_origin(&self) -> f64 {
        self.k_slope_origin
    }

    pub fn momentum_limit(&self) -> Option<f64> {
        self.momentum_limit
    }

    pub fn closed_form_id(&self) -> Option<Builtin> {
        match self.map {
            ScaledMap::Builtin(id) => Some(id),
            ScaledMap::Custom(_) => None,
        }
    }

    /// `k(y)`. Built-ins never fail; `power32` returns `+inf` at `y = 1`.
    pub fn k(&self, y: f64) -> Result<f64, EvalError> {
        eval_map(&self.map, y)
    }

    /// `k(y)` where a non-finite or failing value at `|y| = 1` is replaced by
    /// the value at `±(1 - 1e-15)`.
    pub fn k_endpoint_safe(&self, y: f64) -> Result<f64, EvalError> {
        endpoint_safe(&|y| self.k(y), y)
    }

    /// Key-value text block: `name=`, `kind=`, `expr=`, `b=`.
    pub fn to_kv(&self) -> String {
        let (kind, expr) = match &self.map {
            ScaledMap::Builtin(id) => ("builtin", id.name().to_string()),
            ScaledMap::Custom(e) => ("custom", e.to_string()),
        };
        format!(
            "name={}\nkind={kind}\nexpr={expr}\nb={:?}\n",
            self.name, self.b
        )
    }

    pub fn from_kv(text: &str) -> Result<Self, DeformationError> {
        let mut name = None;
        let mut kind = None;
        let mut expr = None;
        let mut b = None;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| DeformationError::Malformed(format!("no `=` in `{line}`")))?;
            let value = value.trim().to_string();
            match key.trim() {
                "name" => name = Some(value),
                "kind" => kind = Some(value),
                "expr" => expr = Some(value),
                "b" => {
                    let v = value.parse::<f64>().map_err(|_| {
                        DeformationError::Malformed(format!("b is not a number: `{value}`"))
                    })?;
                    b = Some(v)
                }
                other => {
                    return Err(DeformationError::Malformed(format!(
                        "unknown key `{other}`"
                    )))
                }
            }
        }
        let b = b.unwrap_or(1.0);
        let profile = match kind.as_deref() {
            Some("builtin") => {
                let id_text = expr
                    .as_deref()
                    .filter(|s| !s.is_empty())
                    .or(name.as_deref())
                    .ok_or_else(|| DeformationError::Malformed("builtin without a name".into()))?;
                DeformationProfile::builtin(id_text.parse()?).with_bound(b)?
            }
            Some("custom") => {
                let src = expr.as_deref().ok_or_else(|| {
                    DeformationError::Malformed("custom profile needs `expr=`".into())
                })?;
                DeformationProfile::parse_custom(src, b)?
            }
            Some(other) => {
                return Err(DeformationError::Malformed(format!(
                    "unknown kind `{other}`"
                )))
            }
            None => return Err(DeformationError::Malformed("missing `kind=`".into())),
        };
        Ok(match name {
            Some(n) if !n.is_empty() => profile.with_name(n),
            _ => profile,
        })
    }
}

fn eval_map(map: &ScaledMap, y: f64) -> Result<f64, EvalError> {
    match map {
        ScaledMap::Builtin(id) => Ok(id.k(y)),
        ScaledMap::Custom(expr) => expr.eval(y),
    }
}

fn endpoint_safe(eval: &dyn Fn(f64) -> Result<f64, EvalError>, y: f64) -> Result<f64, EvalError> {
    if y.abs() < 1.0 {
        return eval(y);
    }
    match eval(y) {
        Ok(v) if v.is_finite() => Ok(v),
        _ => eval(y.signum() * ENDPOINT_RETREAT),
    }
}

fn check_bound(b: f64) -> Result<(), DeformationError> {
    if b > 0.0 && b.is_finite() {
        Ok(())
    } else {
        Err(DeformationError::InvalidBound(b))
    }
}

fn grid_point(i: usize) -> f64 {
    -1.0 + 2.0 * i as f64 / (VALIDATION_GRID - 1) as f64
}

fn validate(eval: &dyn Fn(f64) -> Result<f64, EvalError>) -> Result<(), DeformationError> {
    let values = (0..VALIDATION_GRID)
        .map(|i| endpoint_safe(eval, grid_point(i)))
        .collect::<Result<Vec<_>, _>>()?;
    let mid = VALIDATION_GRID / 2;
    for i in 0..=mid {
        let (neg, pos) = (values[i], values[VALIDATION_GRID - 1 - i]);
        let defect = (neg + pos).abs();
        if defect > VALIDATION_TOLERANCE * pos.abs().max(1.0) {
            return Err(DeformationError::NotOdd {
                y: grid_point(VALIDATION_GRID - 1 - i),
                defect,
            });
        }
    }
    // [0, 1): the last grid point is y = 1 and is excluded.
    for i in mid..VALIDATION_GRID - 2 {
        if values[i + 1] <= values[i] {
            return Err(DeformationError::NotMonotone {
                y: grid_point(i),
                y_next: grid_point(i + 1),
            });
        }
    }
    Ok(())
}

fn central_slope(eval: &dyn Fn(f64) -> Result<f64, EvalError>) -> Result<f64, EvalError> {
    Ok((eval(SLOPE_STEP)? - eval(-SLOPE_STEP)?) / (2.0 * SLOPE_STEP))
}

/// How the momentum bound is supplied in physical mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeformationScale {
    /// `β`; `b` follows from the built-in's relation.
    Beta(f64),
    /// `b` directly.
    Bound(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub hbar: f64,
    pub mass: f64,
    pub kappa: f64,
    pub lambda: f64,
    /// `None` takes `b` from the profile.
    pub scale: Option<DeformationScale>,
}

impl PhysicalParams {
    pub fn new(hbar: f64, mass: f64, kappa: f64, lambda: f64) -> Result<Self, DeformationError> {
        for (name, value) in [("hbar", hbar), ("mass", mass)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(DeformationError::InvalidPhysical { name, value });
            }
        }
        for (name, value) in [("kappa", kappa), ("lambda", lambda)] {
            if !value.is_finite() {
                return Err(DeformationError::InvalidPhysical { name, value });
            }
        }
        Ok(PhysicalParams {
            hbar,
            mass,
            kappa,
            lambda,
            scale: None,
        })
    }

    pub fn with_scale(mut self, scale: DeformationScale) -> Self {
        self.scale = Some(scale);
        self
    }

    /// Resolves `b` for `profile`.
    pub fn momentum_bound(&self, profile: &DeformationProfile) -> Result<f64, DeformationError> {
        let b = match self.scale {
            None => profile.b(),
            Some(DeformationScale::Bound(b)) => b,
            Some(DeformationScale::Beta(beta)) => {
                if !(beta > 0.0 && beta.is_finite()) {
                    return Err(DeformationError::InvalidScale(beta));
                }
                match profile.closed_form_id() {
                    Some(id) => id.bound_from_beta(beta),
                    None => {
                        return Err(DeformationError::Malformed(
                            "beta only determines b for built-in profiles; give b instead".into(),
                        ))
                    }
                }
            }
        };
        check_bound(b)?;
        Ok(b)
    }
}

/// The two numbers the spectral equation depends on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessCouplings {
    alpha: f64,
    pub gamma: f64,
}

impl DimensionlessCouplings {
    /// Returns `None` when `alpha` is negative or either value is not finite.
    pub fn new(alpha: f64, gamma: f64) -> Option<Self> {
        (alpha >= 0.0 && alpha.is_finite() && gamma.is_finite())
            .then_some(DimensionlessCouplings { alpha, gamma })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// `α = κ²m²/(π²ħ⁴)` and `γ = λm/(bπħ)`.
pub fn to_dimensionless(
    params: &PhysicalParams,
    profile: &DeformationProfile,
) -> Result<DimensionlessCouplings, DeformationError> {
    let b = params.momentum_bound(profile)?;
    Ok(couplings_at_bound(params, b))
}

pub(crate) fn couplings_at_bound(params: &PhysicalParams, b: f64) -> DimensionlessCouplings {
    let PhysicalParams {
        hbar,
        mass,
        kappa,
        lambda,
        ..
    } = *params;
    let root_alpha = kappa * mass / (PI * hbar * hbar);
    DimensionlessCouplings {
        alpha: root_alpha * root_alpha,
        gamma: lambda * mass / (b * PI * hbar),
    }
}

/// `E = -(ε b)² / (2m)`; never positive.
pub fn energy_from_eps(eps: f64, b: f64, mass: f64) -> f64 {
    let q = eps * b;
    -(q * q) / (2.0 * mass)
}
