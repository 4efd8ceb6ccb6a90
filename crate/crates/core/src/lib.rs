//! Bound states of the `κδ′(x)` and `−λδ(x) + κδ′(x)` point potentials in
//! one-dimensional quantum mechanics with a deformed Heisenberg algebra
//! `[X, P] = iħ f(P)` that produces a minimal length.
//!
//! In momentum space the `δ′` kernel is linear in `p − p′`, and the bound state
//! reduces to the spectral condition
//!
//! ```text
//! 1 = α I1(ε) I2(ε) + γ I1(ε)
//! ```
//!
//! in the dimensionless energy parameter `ε = q/b`, `q² = −2mE`. Modules:
//!
//! - [`expr`]: expressions for custom scaled maps `k(y)`.
//! - [`deformation`]: deformation profiles and physical/dimensionless conversion.
//! - [`quadrature`]: adaptive integration of `I1`, `I2` and `I2(0)`.
//! - [`closed_forms`]: analytic integrals for the built-in deformations.
//! - [`spectrum`]: existence threshold, root solve and parameter sweeps.
//! - [`wavefunction`]: the normalized momentum-space eigenfunction.

// `!(x > 0.0)` is used on purpose so NaN lands in the error branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closed_forms;
pub mod deformation;
pub mod expr;
pub mod quadrature;
pub mod spectrum;
pub mod wavefunction;

pub use deformation::{
    energy_from_eps, to_dimensionless, Builtin, DeformationError, DeformationProfile,
    DeformationScale, DimensionlessCouplings, PhysicalParams,
};
pub use expr::{EvalError, Expr, SyntaxError};
pub use quadrature::{compute_i2_zero, compute_integrals, IntegralPair, QuadError};

pub use spectrum::{BoundState, IntegralSource, SpectralProblem, SpectrumError};
pub use wavefunction::{DensitySample, Eigenfunction, WavefunctionError};
