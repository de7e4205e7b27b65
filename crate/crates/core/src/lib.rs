//! Riemann curvature at a point, its classical invariants, and the singular
//! value problem of the curvature tensor.
//!
//! The singular value problem asks for four tangent vectors `W, X, Y, Z` and a
//! scalar `σ` with
//!
//! ```text
//! R(Y,Z)X = σW    R(Z,Y)W = σX    R(W,X)Z = σY    R(X,W)Y = σZ
//! ⟨W,W⟩ = ±1      ⟨X,X⟩ = ±1      ⟨Y,Y⟩ = ±1      ⟨Z,Z⟩ = ±1
//! ```
//!
//! See [`svp`] for the exact componentwise system.

pub mod algebra;
pub mod catalog;
pub mod diff;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod svp;
pub mod tensor;
pub mod userdef;

pub use algebra::{
    inner, invariant_i, invariants, kretschmann, np_scalars, ricci, ricci_scalar, weyl,
    InvariantReport, NpTetrad, NullNormalization,
};
pub use catalog::{CatalogEntry, CatalogKind, ExpectedSigma, Params};
pub use diff::DiffOptions;
pub use error::{Error, Result};
pub use geometry::{
    christoffel, metric_at, riemann, riemann_with, verify_tensor_symmetries, CurvatureData,
    CurvaturePath, CurvatureSource, MetricSpec, Point, Signature, SymmetryReport,
};
pub use svp::{Origin, Quadruple, SignPattern, SolverConfig, SvpSolution};
pub use tensor::{Tensor3, Tensor4};

pub use num_complex::Complex64;
