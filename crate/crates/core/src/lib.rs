//! Exact generalized barycentric coordinates on convex polytopes.
//!
//! For a full-dimensional convex polytope `P = conv{v_1, ..., v_n}` in `R^d` and a
//! point `p` in `P`, the set of all nonnegative `λ` with `Vλ = p` and `1ᵀλ = 1`
//! is itself a polytope `Λ(p)` in `R^n`. This crate computes it exactly over the
//! rationals (vertices, dimension, reduced null-space form `Γ(p)`) and provides
//! floating-point probes for the continuity and semidifferentiability of the map
//! `p ↦ Λ(p)`.
//!
//! Index sets (zero patterns, supports, windows) are 0-based throughout the API.

pub mod error;
pub mod fixtures;
pub mod gbc;
pub mod lp;
pub mod numerics;
pub mod oracle;
pub mod polytope;
pub mod setvalued;

pub use error::{Error, Result};
pub use gbc::{
    caratheodory_decompose, circular_windows, feasible_tau, gamma_polytope, lambda_vertices,
    nullbasis, segment_interval, simplicial_coords, BarycentricVector, GammaPolytope,
    LambdaPolytope, SimplicialCoordinate,
};
pub use numerics::{Rational, RationalMatrix, RationalVector};
pub use oracle::{dd_vertices, random_feasible_sample, OracleMethod, OracleResult};
pub use polytope::{locate, validate, Location, PointLocation, Polytope};
pub use setvalued::{
    continuity_probe, hausdorff, point_polytope_distance, selection_jacobian, semidiff_probe,
    FloatPolytope, ProbeConfig, ProbeReport, Verdict,
};
