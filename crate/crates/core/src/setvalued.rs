//! Floating-point probes of the set-valued map `p ↦ Λ(p)`.
//!
//! Sets are always carried by their vertices. Each sample point gets an exact
//! vertex enumeration. Floats only enter for the metric evaluation.

use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gbc::{lambda_vertices, pattern_complement, simplicial_coords, LambdaPolytope};
use crate::numerics::{int, invert, Rational, RationalMatrix, RationalVector};
use crate::polytope::{locate, Location, Polytope};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const MAX_ITERATIONS: usize = 10_000;

/// Float image of an exact vertex list.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatPolytope {
    vertices: Vec<Vec<f64>>,
    ambient_dim: usize,
}

impl FloatPolytope {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let ambient_dim = vertices.first().ok_or(Error::EmptyInput)?.len();
        if let Some(bad) = vertices.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: bad.len(),
            });
        }
        Ok(Self {
            vertices,
            ambient_dim,
        })
    }

    pub fn from_exact(vertices: &[RationalVector]) -> Result<Self> {
        Self::new(vertices.iter().map(RationalVector::to_f64).collect())
    }

    pub fn from_lambda(lambda: &LambdaPolytope) -> Self {
        Self::from_exact(&lambda.coordinates()).expect("Λ(p) has at least one vertex")
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Largest distance between two vertices.
    pub fn diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                best = best.max(norm(&sub(a, b)));
            }
        }
        best
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Distance estimate with its certified error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistanceEstimate {
    pub value: f64,
    /// Upper bound on `value − true distance`.
    pub error_bound: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Euclidean distance from `x` to `conv(B)`.
///
/// Minimizes `½‖Bw − x‖²` over the probability simplex with Frank–Wolfe plus
/// away steps and exact line search. The duality gap `g` bounds the excess
/// objective, which bounds the distance error by `min(dist, √(2g), 2g/dist)`;
/// the iteration stops once that is at most `tol`.
pub fn point_polytope_distance(x: &[f64], b: &FloatPolytope, tol: f64) -> Result<DistanceEstimate> {
    if x.len() != b.ambient_dim {
        return Err(Error::DimensionMismatch {
            expected: b.ambient_dim,
            found: x.len(),
        });
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let verts = &b.vertices;
    if verts.iter().any(|v| v.as_slice() == x) {
        return Ok(DistanceEstimate {
            value: 0.0,
            error_bound: 0.0,
            iterations: 0,
            converged: true,
        });
    }

    let m = verts.len();
    let start = (0..m)
        .min_by(|&i, &j| norm(&sub(&verts[i], x)).total_cmp(&norm(&sub(&verts[j], x))))
        .expect("nonempty");
    let mut weights = vec![0.0; m];
    weights[start] = 1.0;
    let mut y = verts[start].clone();

    let mut iterations = 0;
    loop {
        let residual = sub(&y, x);
        let dist = norm(&residual);
        let scores: Vec<f64> = verts.iter().map(|v| dot(&residual, v)).collect();
        let at_y = dot(&residual, &y);
        let toward = (0..m)
            .min_by(|&i, &j| scores[i].total_cmp(&scores[j]))
            .expect("nonempty");
        let gap = (at_y - scores[toward]).max(0.0);
        let mut bound = dist.min((2.0 * gap).sqrt());
        if dist > 0.0 {
            bound = bound.min(2.0 * gap / dist);
        }
        if bound <= tol || iterations >= MAX_ITERATIONS {
            return Ok(DistanceEstimate {
                value: dist,
                error_bound: bound,
                iterations,
                converged: bound <= tol,
            });
        }
        iterations += 1;

        let away = (0..m)
            .filter(|&i| weights[i] > 0.0)
            .max_by(|&i, &j| scores[i].total_cmp(&scores[j]))
            .expect("active set is nonempty");
        let away_gap = scores[away] - at_y;
        let (direction, max_step, frank_wolfe) = if gap >= away_gap || weights[away] >= 1.0 {
            (sub(&verts[toward], &y), 1.0, true)
        } else {
            let w = weights[away];
            (sub(&y, &verts[away]), w / (1.0 - w), false)
        };
        let curvature = dot(&direction, &direction);
        if curvature == 0.0 {
            return Ok(DistanceEstimate {
                value: dist,
                error_bound: bound,
                iterations,
                converged: false,
            });
        }
        let step = (-dot(&residual, &direction) / curvature).clamp(0.0, max_step);
        if frank_wolfe {
            for w in weights.iter_mut() {
                *w *= 1.0 - step;
            }
            weights[toward] += step;
        } else {
            for w in weights.iter_mut() {
                *w *= 1.0 + step;
            }
            weights[away] -= step;
            if step >= max_step {
                weights[away] = 0.0;
            }
        }
        // Recompute the iterate from the weights to avoid drift.
        y = vec![0.0; b.ambient_dim];
        for (w, v) in weights.iter().zip(verts) {
            if *w != 0.0 {
                for (yi, vi) in y.iter_mut().zip(v) {
                    *yi += w * vi;
                }
            }
        }
    }
}

/// Hausdorff distance between the convex hulls of `a` and `b`.
///
/// `x ↦ d(x, conv B)` is convex, so its maximum over `conv A` is attained at a
/// vertex of `A`; only vertices need to be visited.
pub fn hausdorff(a: &FloatPolytope, b: &FloatPolytope, tol: f64) -> Result<DistanceEstimate> {
    if a.ambient_dim != b.ambient_dim {
        return Err(Error::DimensionMismatch {
            expected: a.ambient_dim,
            found: b.ambient_dim,
        });
    }
    let mut worst = DistanceEstimate {
        value: 0.0,
        error_bound: 0.0,
        iterations: 0,
        converged: true,
    };
    for (from, to) in [(a, b), (b, a)] {
        for v in &from.vertices {
            let d = point_polytope_distance(v, to, tol)?;
            worst.converged &= d.converged;
            worst.iterations += d.iterations;
            worst.error_bound = worst.error_bound.max(d.error_bound);
            worst.value = worst.value.max(d.value);
        }
    }
    Ok(worst)
}

/// Exact Jacobian `∂σ_Z/∂p` (`n × d`) of the simplicial coordinates for the zero
/// pattern `zero_set`: the first `d` columns of the inverse of the stacked
/// system on the complement, scattered to the complement rows.
pub fn selection_jacobian_exact(polytope: &Polytope, zero_set: &[usize]) -> Result<RationalMatrix> {
    let complement = pattern_complement(polytope, zero_set)?;
    let system = polytope.stacked().select_columns(&complement);
    let inverse = invert(&system).map_err(|_| Error::SingularPattern)?;
    let d = polytope.dim();
    let mut jac = RationalMatrix::zeros(polytope.num_vertices(), d);
    for (k, &j) in complement.iter().enumerate() {
        for c in 0..d {
            jac[(j, c)] = inverse[(k, c)].clone();
        }
    }
    Ok(jac)
}

/// Float rows of [`selection_jacobian_exact`].
pub fn selection_jacobian(polytope: &Polytope, zero_set: &[usize]) -> Result<Vec<Vec<f64>>> {
    Ok(selection_jacobian_exact(polytope, zero_set)?.to_f64_rows())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Converges,
    Inconclusive,
    Diverges,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Converges => "converges",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Diverges => "diverges",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeKind {
    Continuity,
    Semidifferential,
}

#[derive(Clone, Debug)]
pub struct ProbeConfig {
    /// First step length; later steps halve it.
    pub t0: Rational,
    /// Number of sampled step lengths `t0, t0/2, ..., t0/2^(steps-1)`.
    pub steps: usize,
    /// Accuracy of each distance evaluation.
    pub tol: f64,
    /// Final distance required for a `Converges` verdict.
    pub threshold: f64,
}

impl ProbeConfig {
    pub fn new(t0: Rational, steps: usize) -> Self {
        Self {
            t0,
            steps,
            tol: DEFAULT_TOL,
            threshold: 1e-7,
        }
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self
    }

    fn step_length(&self, k: usize) -> Rational {
        &self.t0 / Rational::from_integer(num_bigint::BigInt::from(2u8).pow(k as u32))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeStep {
    pub t: f64,
    /// Continuity: `H(Λ(p + t h), Λ(p))`. Semidifferential: `d(Jh, S_t)`.
    pub distance: f64,
    pub ratio: f64,
    /// Semidifferential only: `H(S_k, S_{k+1})`, absent on the last step.
    pub set_change: Option<f64>,
    pub diameter: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub kind: ProbeKind,
    pub basepoint: Vec<f64>,
    pub direction: Vec<f64>,
    pub zero_set: Option<Vec<usize>>,
    /// Ordered by decreasing `t`.
    pub steps: Vec<ProbeStep>,
    pub verdict: Verdict,
    pub tolerance: f64,
    /// Semidifferential only: whether `d(Jh, S_k)` alone meets the convergence test.
    pub witness_converges: Option<bool>,
    /// Whether every distance evaluation met its accuracy target.
    pub metric_converged: bool,
}

impl ProbeReport {
    pub fn distances(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.distance).collect()
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.ratio).collect()
    }

    pub fn set_changes(&self) -> Vec<f64> {
        self.steps.iter().filter_map(|s| s.set_change).collect()
    }
}

fn nonincreasing_tail(values: &[f64], slack: f64) -> bool {
    let start = values.len().saturating_sub(3);
    values[start..].windows(2).all(|w| w[1] <= w[0] + slack)
}

fn converges(values: &[f64], threshold: f64, slack: f64) -> bool {
    values.last().is_some_and(|&last| last < threshold) && nonincreasing_tail(values, slack)
}

fn check_probe_inputs(
    polytope: &Polytope,
    p: &RationalVector,
    h: &RationalVector,
    config: &ProbeConfig,
) -> Result<Location> {
    polytope.check_point(p)?;
    polytope.check_point(h)?;
    if config.steps < 3 {
        return Err(Error::InvalidArgument(
            "a probe needs at least 3 steps".into(),
        ));
    }
    if !config.t0.is_positive() {
        return Err(Error::InvalidArgument("t0 must be positive".into()));
    }
    let here = locate(polytope, p)?.location;
    if here == Location::Outside {
        return Err(Error::Infeasible);
    }
    let far = p.add(&h.scale(&config.t0));
    if locate(polytope, &far)?.location == Location::Outside {
        return Err(Error::LeavesPolytope);
    }
    Ok(here)
}

/// Hausdorff distances `H(Λ(p + t_k h), Λ(p))` along `t_k = t0·2^{−k}`.
pub fn continuity_probe(
    polytope: &Polytope,
    p: &RationalVector,
    h: &RationalVector,
    config: &ProbeConfig,
) -> Result<ProbeReport> {
    check_probe_inputs(polytope, p, h, config)?;
    let base = FloatPolytope::from_lambda(&lambda_vertices(polytope, p)?);
    let samples = (0..config.steps)
        .into_par_iter()
        .map(|k| {
            let t = config.step_length(k);
            let q = p.add(&h.scale(&t));
            let moved = FloatPolytope::from_lambda(&lambda_vertices(polytope, &q)?);
            let d = hausdorff(&moved, &base, config.tol)?;
            let t = crate::numerics::to_f64(&t);
            Ok((
                ProbeStep {
                    t,
                    distance: d.value,
                    ratio: d.value / t,
                    set_change: None,
                    diameter: moved.diameter(),
                },
                d.converged,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let metric_converged = samples.iter().all(|(_, c)| *c);
    let steps: Vec<ProbeStep> = samples.into_iter().map(|(s, _)| s).collect();
    let distances: Vec<f64> = steps.iter().map(|s| s.distance).collect();
    let slack = 2.0 * config.tol;
    let verdict = if !metric_converged {
        Verdict::Inconclusive
    } else if converges(&distances, config.threshold, slack) {
        Verdict::Converges
    } else if distances[distances.len() - 1] > distances[0] + slack {
        Verdict::Diverges
    } else {
        Verdict::Inconclusive
    };
    Ok(ProbeReport {
        kind: ProbeKind::Continuity,
        basepoint: p.to_f64(),
        direction: h.to_f64(),
        zero_set: None,
        steps,
        verdict,
        tolerance: config.threshold,
        witness_converges: None,
        metric_converged,
    })
}

/// Difference-quotient probe for the selection `λ(p) = σ_Z(p)`.
///
/// For each `t_k` the quotient set `S_k = (Λ(p + t_k h) − σ_Z(p)) / t_k` is
/// formed from vertex images. Reports the distance from the witness
/// `v = J_Z h` to `S_k` and the Hausdorff change between consecutive quotient
/// sets. `Converges` needs both the witness distance and the set changes to
/// settle; a vanishing witness distance with growing quotient sets is
/// `Inconclusive`.
pub fn semidiff_probe(
    polytope: &Polytope,
    p: &RationalVector,
    zero_set: &[usize],
    h: &RationalVector,
    config: &ProbeConfig,
) -> Result<ProbeReport> {
    let selection = simplicial_coords(polytope, p, zero_set)?;
    if !selection.feasible {
        return Err(Error::InfeasibleSelection);
    }
    if check_probe_inputs(polytope, p, h, config)? != Location::Interior {
        return Err(Error::InvalidArgument("basepoint must be interior".into()));
    }
    let jac = selection_jacobian_exact(polytope, zero_set)?;
    let witness = jac.mul_vec(h)?.to_f64();

    let quotients = (0..config.steps)
        .into_par_iter()
        .map(|k| {
            let t = config.step_length(k);
            let q = p.add(&h.scale(&t));
            let inv_t = t.recip();
            let images: Vec<RationalVector> = lambda_vertices(polytope, &q)?
                .coordinates()
                .iter()
                .map(|mu| mu.sub(&selection.sigma).scale(&inv_t))
                .collect();
            Ok((
                crate::numerics::to_f64(&t),
                FloatPolytope::from_exact(&images)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut metric_converged = true;
    let mut steps = Vec::with_capacity(quotients.len());
    for (k, (t, set)) in quotients.iter().enumerate() {
        let d = point_polytope_distance(&witness, set, config.tol)?;
        metric_converged &= d.converged;
        let set_change = match quotients.get(k + 1) {
            Some((_, next)) => {
                let change = hausdorff(set, next, config.tol)?;
                metric_converged &= change.converged;
                Some(change.value)
            }
            None => None,
        };
        steps.push(ProbeStep {
            t: *t,
            distance: d.value,
            ratio: d.value / t,
            set_change,
            diameter: set.diameter(),
        });
    }

    let slack = 2.0 * config.tol;
    let distances: Vec<f64> = steps.iter().map(|s| s.distance).collect();
    let changes: Vec<f64> = steps.iter().filter_map(|s| s.set_change).collect();
    let witness_ok = converges(&distances, config.threshold, slack);
    let sets_settle = nonincreasing_tail(&changes, slack);
    let verdict = if !metric_converged {
        Verdict::Inconclusive
    } else if !witness_ok {
        Verdict::Diverges
    } else if sets_settle {
        Verdict::Converges
    } else {
        Verdict::Inconclusive
    };
    Ok(ProbeReport {
        kind: ProbeKind::Semidifferential,
        basepoint: p.to_f64(),
        direction: h.to_f64(),
        zero_set: Some(zero_set.to_vec()),
        steps,
        verdict,
        tolerance: config.threshold,
        witness_converges: Some(witness_ok),
        metric_converged,
    })
}

/// Central finite difference of `σ_Z` at `p` with step `step`, one column per
/// coordinate direction (`n × d`), evaluated exactly and converted to floats.
pub fn finite_difference_jacobian(
    polytope: &Polytope,
    p: &RationalVector,
    zero_set: &[usize],
    step: &Rational,
) -> Result<Vec<Vec<f64>>> {
    let (n, d) = (polytope.num_vertices(), polytope.dim());
    let mut out = vec![vec![0.0; d]; n];
    let two_step = step * int(2);
    for c in 0..d {
        let mut e = RationalVector::zeros(d);
        e[c] = Rational::one();
        let forward = simplicial_coords(polytope, &p.add(&e.scale(step)), zero_set)?.sigma;
        let backward = simplicial_coords(polytope, &p.sub(&e.scale(step)), zero_set)?.sigma;
        let diff = forward.sub(&backward);
        for (j, row) in out.iter_mut().enumerate() {
            row[c] = crate::numerics::to_f64(&(&diff[j] / &two_step));
        }
    }
    Ok(out)
}
