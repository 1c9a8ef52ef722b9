//! Generalized barycentric coordinates.
//!
//! The set `Λ(p) = {λ ≥ 0 : Vλ = p, 1ᵀλ = 1}` is enumerated through its basic
//! feasible solutions: for every zero pattern `Z` of size `n − d − 1`, the
//! coordinates forced to vanish on `Z` are the classical barycentric coordinates
//! of `p` in the simplex spanned by the remaining vertices. The reduced form
//! `Γ(p) = {c : τ + Nc ≥ 0}` lives in the kernel coordinates of `[V; 1ᵀ]`.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lp;
use crate::numerics::{
    affine_dim, affinely_independent, nullspace_basis, solve_linear, Rational, RationalMatrix,
    RationalVector,
};
use crate::polytope::Polytope;

/// A feasible coordinate vector: `Vλ = point`, `1ᵀλ = 1`, `λ ≥ 0`, all exact.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BarycentricVector {
    lambda: RationalVector,
    point: RationalVector,
}

impl BarycentricVector {
    /// Checks feasibility of `lambda` and records the point it represents.
    pub fn new(polytope: &Polytope, lambda: RationalVector) -> Result<Self> {
        if lambda.len() != polytope.num_vertices() {
            return Err(Error::DimensionMismatch {
                expected: polytope.num_vertices(),
                found: lambda.len(),
            });
        }
        if !lambda.is_nonnegative() || !lambda.sum().is_one() {
            return Err(Error::Infeasible);
        }
        let point = polytope.vertex_matrix().mul_vec(&lambda)?;
        Ok(Self { lambda, point })
    }

    pub fn lambda(&self) -> &RationalVector {
        &self.lambda
    }

    pub fn point(&self) -> &RationalVector {
        &self.point
    }

    pub fn into_lambda(self) -> RationalVector {
        self.lambda
    }
}

/// `σ` with `σ_j = 0` on `zero_set` and `[V; 1ᵀ]σ = [p; 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialCoordinate {
    pub zero_set: Vec<usize>,
    pub sigma: RationalVector,
    pub feasible: bool,
}

/// Exact vertex description of `Λ(p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaPolytope {
    pub point: RationalVector,
    /// Sorted lexicographically by exact coordinates.
    pub vertices: Vec<BarycentricVector>,
    /// `{j : λ_j > 0}` per vertex.
    pub vertex_supports: Vec<Vec<usize>>,
    /// Every zero pattern whose simplicial coordinates land on the vertex.
    pub vertex_patterns: Vec<Vec<Vec<usize>>>,
    pub dim: usize,
    pub kernel_dim: usize,
    /// Whether the vertex count equals `n − d`.
    pub theorem_count_match: bool,
}

impl LambdaPolytope {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn coordinates(&self) -> Vec<RationalVector> {
        self.vertices.iter().map(|v| v.lambda.clone()).collect()
    }

    /// Zero set of each vertex.
    pub fn vertex_zero_sets(&self) -> Vec<Vec<usize>> {
        self.vertices.iter().map(|v| v.lambda.zero_set()).collect()
    }

    /// True when some vertex has more than `n − d − 1` zero entries.
    pub fn is_degenerate(&self) -> bool {
        self.vertices
            .iter()
            .any(|v| v.lambda.zero_set().len() > self.kernel_dim)
    }
}

/// A row `offset + normalᵀc ≥ 0` of the description of `Γ(p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSpace {
    pub offset: Rational,
    pub normal: RationalVector,
}

/// `Γ(p) = {c : τ + Nc ≥ 0}` with its vertices, index-aligned with the
/// vertices of the `Λ(p)` it was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaPolytope {
    pub tau: BarycentricVector,
    pub basis: RationalMatrix,
    pub hrep: Vec<HalfSpace>,
    pub vertices: Vec<RationalVector>,
}

impl GammaPolytope {
    /// `τ + Nc`.
    pub fn lift(&self, c: &RationalVector) -> Result<RationalVector> {
        Ok(self.tau.lambda.add(&self.basis.mul_vec(c)?))
    }

    pub fn contains(&self, c: &RationalVector) -> bool {
        self.hrep
            .iter()
            .all(|h| !(&h.offset + h.normal.dot(c)).is_negative())
    }
}

/// Basis of `ker [V; 1ᵀ]`, `n × (n − d − 1)`.
pub fn nullbasis(polytope: &Polytope) -> RationalMatrix {
    nullspace_basis(polytope.stacked())
}

/// Some feasible coordinates of `p`, from the phase-one simplex.
pub fn feasible_tau(polytope: &Polytope, p: &RationalVector) -> Result<BarycentricVector> {
    let order: Vec<usize> = (0..polytope.num_vertices()).collect();
    feasible_tau_with_order(polytope, p, &order)
}

/// Like [`feasible_tau`], but the simplex sees the columns in `order`. Different
/// orders generally produce different basic solutions.
pub fn feasible_tau_with_order(
    polytope: &Polytope,
    p: &RationalVector,
    order: &[usize],
) -> Result<BarycentricVector> {
    let n = polytope.num_vertices();
    let mut seen = vec![false; n];
    if order.len() != n
        || !order
            .iter()
            .all(|&j| j < n && !std::mem::replace(&mut seen[j], true))
    {
        return Err(Error::InvalidArgument(
            "column order must be a permutation".into(),
        ));
    }
    let rhs = polytope.lift(p)?;
    let a = polytope.stacked().select_columns(order);
    let x = lp::find_feasible(&a, &rhs)?.map_err(|_| Error::Infeasible)?;
    let mut lambda = RationalVector::zeros(n);
    for (k, &j) in order.iter().enumerate() {
        lambda[j] = x[k].clone();
    }
    BarycentricVector::new(polytope, lambda)
}

/// The `n` circular index windows `{i, i+1, ..., i+n−d−2}` (mod `n`), 0-based.
/// Empty when `n = d + 1`.
pub fn circular_windows(n: usize, d: usize) -> Vec<Vec<usize>> {
    if n <= d + 1 {
        return Vec::new();
    }
    let width = n - d - 1;
    (0..n)
        .map(|i| (0..width).map(|k| (i + k) % n).collect())
        .collect()
}

/// Simplicial coordinates of `p` for the zero pattern `zero_set`.
pub fn simplicial_coords(
    polytope: &Polytope,
    p: &RationalVector,
    zero_set: &[usize],
) -> Result<SimplicialCoordinate> {
    let rhs = polytope.lift(p)?;
    let complement = pattern_complement(polytope, zero_set)?;
    let system = polytope.stacked().select_columns(&complement);
    let local = solve_linear(&system, &rhs).map_err(|e| match e {
        Error::SingularMatrix => Error::SingularPattern,
        other => other,
    })?;
    let mut sigma = RationalVector::zeros(polytope.num_vertices());
    for (k, &j) in complement.iter().enumerate() {
        sigma[j] = local[k].clone();
    }
    let feasible = sigma.is_nonnegative();
    Ok(SimplicialCoordinate {
        zero_set: zero_set.to_vec(),
        sigma,
        feasible,
    })
}

/// Indices outside `zero_set`, after checking that it is a valid pattern.
pub(crate) fn pattern_complement(polytope: &Polytope, zero_set: &[usize]) -> Result<Vec<usize>> {
    let n = polytope.num_vertices();
    if zero_set.len() != polytope.kernel_dim() {
        return Err(Error::InvalidArgument(format!(
            "zero pattern must have {} indices, got {}",
            polytope.kernel_dim(),
            zero_set.len()
        )));
    }
    let mut mask = vec![false; n];
    for &j in zero_set {
        if j >= n || mask[j] {
            return Err(Error::InvalidArgument(format!(
                "zero pattern {zero_set:?} is not a set of vertex indices"
            )));
        }
        mask[j] = true;
    }
    Ok((0..n).filter(|&j| !mask[j]).collect())
}

fn all_patterns(polytope: &Polytope) -> Vec<Vec<usize>> {
    (0..polytope.num_vertices())
        .combinations(polytope.kernel_dim())
        .collect()
}

fn feasible_pattern(
    polytope: &Polytope,
    p: &RationalVector,
    zero_set: Vec<usize>,
) -> Option<(RationalVector, Vec<usize>)> {
    match simplicial_coords(polytope, p, &zero_set) {
        Ok(sc) if sc.feasible => Some((sc.sigma, zero_set)),
        _ => None,
    }
}

/// Vertices of `Λ(p)` by a scan over all `C(n, n−d−1)` zero patterns.
///
/// Feasible simplicial coordinates are deduplicated exactly; a point is kept when
/// the vertices on its support are affinely independent. Errors with
/// [`Error::Infeasible`] when `p` is outside the polytope.
pub fn lambda_vertices(polytope: &Polytope, p: &RationalVector) -> Result<LambdaPolytope> {
    polytope.check_point(p)?;
    let hits = all_patterns(polytope)
        .into_iter()
        .filter_map(|z| feasible_pattern(polytope, p, z))
        .collect();
    assemble(polytope, p, hits)
}

/// [`lambda_vertices`] with the pattern scan spread over the rayon pool. The
/// merge is order-independent, so the result is identical to the serial one.
pub fn par_lambda_vertices(polytope: &Polytope, p: &RationalVector) -> Result<LambdaPolytope> {
    polytope.check_point(p)?;
    let hits = all_patterns(polytope)
        .into_par_iter()
        .filter_map(|z| feasible_pattern(polytope, p, z))
        .collect();
    assemble(polytope, p, hits)
}

fn assemble(
    polytope: &Polytope,
    p: &RationalVector,
    hits: Vec<(RationalVector, Vec<usize>)>,
) -> Result<LambdaPolytope> {
    let mut merged: BTreeMap<RationalVector, Vec<Vec<usize>>> = BTreeMap::new();
    for (sigma, zero_set) in hits {
        merged.entry(sigma).or_default().push(zero_set);
    }
    if merged.is_empty() {
        return Err(Error::Infeasible);
    }
    let columns = polytope.vertices();
    let mut vertices = Vec::with_capacity(merged.len());
    let mut vertex_supports = Vec::with_capacity(merged.len());
    let mut vertex_patterns = Vec::with_capacity(merged.len());
    for (sigma, mut patterns) in merged {
        let support = sigma.support();
        let support_points: Vec<RationalVector> =
            support.iter().map(|&j| columns[j].clone()).collect();
        if !affinely_independent(&support_points) {
            continue;
        }
        patterns.sort();
        vertices.push(BarycentricVector {
            lambda: sigma,
            point: p.clone(),
        });
        vertex_supports.push(support);
        vertex_patterns.push(patterns);
    }
    let coords: Vec<RationalVector> = vertices.iter().map(|v| v.lambda.clone()).collect();
    let dim = affine_dim(&coords)?;
    let kernel_dim = polytope.kernel_dim();
    Ok(LambdaPolytope {
        point: p.clone(),
        theorem_count_match: vertices.len() == kernel_dim + 1,
        vertices,
        vertex_supports,
        vertex_patterns,
        dim,
        kernel_dim,
    })
}

/// Builds `Γ(p)` from a feasible basepoint `tau`, a kernel basis `basis`, and the
/// vertex list of `Λ(p)`; each `Γ`-vertex solves `N·c = λ_v − τ` exactly.
pub fn gamma_polytope(
    polytope: &Polytope,
    p: &RationalVector,
    tau: &BarycentricVector,
    basis: &RationalMatrix,
    lambda: &LambdaPolytope,
) -> Result<GammaPolytope> {
    let (n, k) = (polytope.num_vertices(), polytope.kernel_dim());
    if basis.rows() != n || basis.cols() != k {
        return Err(Error::InconsistentInputs(format!(
            "kernel basis is {}×{}, expected {n}×{k}",
            basis.rows(),
            basis.cols()
        )));
    }
    if tau.point() != p || &lambda.point != p {
        return Err(Error::InconsistentInputs(
            "basepoint or coordinate polytope belongs to another point".into(),
        ));
    }
    if !polytope.stacked().mul(basis)?.is_zero() {
        return Err(Error::InconsistentInputs(
            "basis columns are not in the kernel of [V; 1]".into(),
        ));
    }
    let basis_t = basis.transpose();
    let gram = basis_t.mul(basis)?;
    let mut vertices = Vec::with_capacity(lambda.len());
    for v in &lambda.vertices {
        let delta = v.lambda().sub(tau.lambda());
        let c = if k == 0 {
            RationalVector::zeros(0)
        } else {
            solve_linear(&gram, &basis_t.mul_vec(&delta)?).map_err(|_| {
                Error::InconsistentInputs("kernel basis is not full column rank".into())
            })?
        };
        if basis.mul_vec(&c)? != delta {
            return Err(Error::InconsistentInputs(
                "vertex offset is not in the span of the kernel basis".into(),
            ));
        }
        vertices.push(c);
    }
    let hrep = (0..n)
        .map(|j| HalfSpace {
            offset: tau.lambda()[j].clone(),
            normal: basis.row(j),
        })
        .collect();
    Ok(GammaPolytope {
        tau: tau.clone(),
        basis: basis.clone(),
        hrep,
        vertices,
    })
}

/// Endpoints `(a, b)` of `{c : τ + cN ≥ 0}` when the kernel is one-dimensional:
/// `a = max{−τ_i/N_i : N_i > 0}`, `b = min{−τ_i/N_i : N_i < 0}`.
pub fn segment_interval(
    tau: &BarycentricVector,
    basis: &RationalMatrix,
) -> Result<(Rational, Rational)> {
    if basis.cols() != 1 {
        return Err(Error::NotAnInterval(basis.cols()));
    }
    if basis.rows() != tau.lambda().len() {
        return Err(Error::DimensionMismatch {
            expected: tau.lambda().len(),
            found: basis.rows(),
        });
    }
    let direction = basis.column(0);
    let bounds = |positive: bool| {
        direction
            .iter()
            .zip(tau.lambda())
            .filter(move |(nj, _)| {
                if positive {
                    nj.is_positive()
                } else {
                    nj.is_negative()
                }
            })
            .map(|(nj, tj)| -(tj / nj))
    };
    let lower = bounds(true).max().ok_or(Error::UnboundedDirection)?;
    let upper = bounds(false).min().ok_or(Error::UnboundedDirection)?;
    Ok((lower, upper))
}

/// Writes `x` as a convex combination of at most `dim Λ(p) + 1` vertices of
/// `lambda`. Returns `(vertex index, weight)` pairs with positive weights in
/// increasing vertex order.
///
/// Starts from a basic solution of the membership LP, then repeatedly removes
/// an affine dependency among the used vertices until they are independent.
pub fn caratheodory_decompose(
    lambda: &LambdaPolytope,
    x: &BarycentricVector,
) -> Result<Vec<(usize, Rational)>> {
    if x.point() != &lambda.point {
        return Err(Error::NotMember);
    }
    let coords = lambda.coordinates();
    let rows = x.lambda().len();
    let hull = RationalMatrix::from_columns(rows, &coords)?.with_ones_row();
    let mut target = x.lambda().as_slice().to_vec();
    target.push(Rational::one());
    let mut weights = lp::find_feasible(&hull, &target.into())?.map_err(|_| Error::NotMember)?;

    loop {
        let used = weights.support();
        let dependency = nullspace_basis(&hull.select_columns(&used));
        if dependency.cols() == 0 {
            break;
        }
        let mut alpha = dependency.column(0);
        if !alpha.iter().any(Signed::is_positive) {
            alpha = alpha.scale(&-Rational::one());
        }
        // Largest step keeping every weight nonnegative; lowest index on ties.
        let mut step: Option<Rational> = None;
        for (k, a) in alpha.iter().enumerate() {
            if a.is_positive() {
                let candidate = &weights[used[k]] / a;
                if step.as_ref().is_none_or(|s| candidate < *s) {
                    step = Some(candidate);
                }
            }
        }
        let step = step.expect("affine dependency has a positive entry");
        for (k, a) in alpha.iter().enumerate() {
            let w = &weights[used[k]] - &step * a;
            weights[used[k]] = w;
        }
    }
    Ok(weights
        .support()
        .into_iter()
        .map(|k| (k, weights[k].clone()))
        .collect())
}
