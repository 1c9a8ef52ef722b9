//! Independent ground truth for `Λ(p)`.
//!
//! Works in the reduced space `R^{n−d−1}`: the vertices of
//! `Γ(p) = {c : τ + Nc ≥ 0}` are found by the double description method on the
//! homogenized cone `{(c, s) : s ≥ 0, sτ + Nc ≥ 0}`, then lifted with
//! `c ↦ τ + Nc`. For small kernels an active-set scan over tight rows gives a
//! second route.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fixtures::random_weights;
use crate::gbc::{feasible_tau, nullbasis, BarycentricVector};
use crate::numerics::{solve_linear, Rational, RationalMatrix, RationalVector};
use crate::polytope::Polytope;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMethod {
    DoubleDescription,
    PatternScan,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    /// Sorted, pairwise distinct, each exactly feasible.
    pub vertices: Vec<RationalVector>,
    pub method: OracleMethod,
    /// Outcome of the last [`OracleResult::compare`], if any.
    pub agreement: Option<bool>,
    /// For kernels of dimension at most 2, whether the active-set scan found the
    /// same vertices.
    pub cross_check: Option<bool>,
}

impl OracleResult {
    /// Compares against another vertex list as sets and records the outcome.
    pub fn compare(&mut self, other: &[RationalVector]) -> bool {
        let ours: BTreeSet<&RationalVector> = self.vertices.iter().collect();
        let theirs: BTreeSet<&RationalVector> = other.iter().collect();
        let agree = ours == theirs;
        self.agreement = Some(agree);
        agree
    }
}

#[derive(Clone, Debug)]
struct Ray {
    dir: RationalVector,
    zeros: BTreeSet<usize>,
}

fn normalize(v: RationalVector) -> RationalVector {
    match v.iter().find(|a| !a.is_zero()) {
        Some(first) => {
            let scale = first.abs().recip();
            v.scale(&scale)
        }
        None => v,
    }
}

/// Extreme rays of `{x : a_i·x ≥ 0 for all rows i}` (assumed pointed), by the
/// double description method with lineality handling.
fn double_description(rows: &[RationalVector], dim: usize) -> Vec<RationalVector> {
    let mut lines: Vec<RationalVector> = (0..dim)
        .map(|i| {
            let mut e = RationalVector::zeros(dim);
            e[i] = Rational::from_integer(1.into());
            e
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (idx, a) in rows.iter().enumerate() {
        if let Some(pos) = lines.iter().position(|l| !a.dot(l).is_zero()) {
            let mut pivot = lines.remove(pos);
            if a.dot(&pivot).is_negative() {
                pivot = pivot.scale(&Rational::from_integer((-1).into()));
            }
            let ap = a.dot(&pivot);
            for l in lines.iter_mut() {
                let f = a.dot(l) / &ap;
                if !f.is_zero() {
                    *l = l.sub(&pivot.scale(&f));
                }
            }
            for r in rays.iter_mut() {
                let f = a.dot(&r.dir) / &ap;
                if !f.is_zero() {
                    r.dir = normalize(r.dir.sub(&pivot.scale(&f)));
                }
                r.zeros.insert(idx);
            }
            rays.push(Ray {
                dir: normalize(pivot),
                zeros: (0..idx).collect(),
            });
            continue;
        }

        let values: Vec<Rational> = rays.iter().map(|r| a.dot(&r.dir)).collect();
        let positive: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].is_positive())
            .collect();
        let negative: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].is_negative())
            .collect();
        let mut next: Vec<Ray> = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            if values[i].is_zero() {
                let mut r = r.clone();
                r.zeros.insert(idx);
                next.push(r);
            } else if values[i].is_positive() {
                next.push(r.clone());
            }
        }
        for &i in &positive {
            for &j in &negative {
                let common: BTreeSet<usize> = rays[i]
                    .zeros
                    .intersection(&rays[j].zeros)
                    .copied()
                    .collect();
                let adjacent = (0..rays.len())
                    .filter(|&k| k != i && k != j)
                    .all(|k| !common.is_subset(&rays[k].zeros));
                if !adjacent {
                    continue;
                }
                let dir = rays[j]
                    .dir
                    .scale(&values[i])
                    .sub(&rays[i].dir.scale(&values[j]));
                let mut zeros = common;
                zeros.insert(idx);
                next.push(Ray {
                    dir: normalize(dir),
                    zeros,
                });
            }
        }
        rays = next;
    }
    debug_assert!(lines.is_empty(), "cone is not pointed");
    rays.into_iter().map(|r| r.dir).collect()
}

struct Reduced {
    tau: BarycentricVector,
    basis: RationalMatrix,
}

fn reduced(polytope: &Polytope, p: &RationalVector) -> Result<Reduced> {
    Ok(Reduced {
        tau: feasible_tau(polytope, p)?,
        basis: nullbasis(polytope),
    })
}

fn lift_all(red: &Reduced, cs: BTreeSet<RationalVector>) -> Result<Vec<RationalVector>> {
    let mut out: Vec<RationalVector> = cs
        .iter()
        .map(|c| Ok(red.tau.lambda().add(&red.basis.mul_vec(c)?)))
        .collect::<Result<_>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// Vertices of `Λ(p)` through the double description method on `Γ(p)`.
pub fn dd_vertices(polytope: &Polytope, p: &RationalVector) -> Result<OracleResult> {
    let red = reduced(polytope, p)?;
    let k = red.basis.cols();
    // Homogenizing coordinate s is last: rows are (s ≥ 0) and (N_j, τ_j).
    let mut rows = Vec::with_capacity(polytope.num_vertices() + 1);
    let mut s_row = RationalVector::zeros(k + 1);
    s_row[k] = Rational::from_integer(1.into());
    rows.push(s_row);
    for j in 0..polytope.num_vertices() {
        let mut row = red.basis.row(j).into_inner();
        row.push(red.tau.lambda()[j].clone());
        rows.push(row.into());
    }
    let mut cs = BTreeSet::new();
    for ray in double_description(&rows, k + 1) {
        let s = ray[k].clone();
        if !s.is_positive() {
            // Γ(p) is bounded, so every extreme ray has s > 0.
            return Err(Error::InconsistentInputs(
                "unbounded reduced polytope".into(),
            ));
        }
        cs.insert((0..k).map(|i| &ray[i] / &s).collect::<RationalVector>());
    }
    let vertices = lift_all(&red, cs)?;
    let cross_check = if k <= 2 {
        Some(active_set_vertices(polytope, p)?.vertices == vertices)
    } else {
        None
    };
    Ok(OracleResult {
        vertices,
        method: OracleMethod::DoubleDescription,
        agreement: None,
        cross_check,
    })
}

/// Vertices of `Γ(p)` as the feasible solutions of every `k × k` system of
/// tight rows `τ_S + N_S c = 0`, lifted to `Λ(p)`.
pub fn active_set_vertices(polytope: &Polytope, p: &RationalVector) -> Result<OracleResult> {
    let red = reduced(polytope, p)?;
    let (n, k) = (polytope.num_vertices(), red.basis.cols());
    let mut cs = BTreeSet::new();
    for tight in (0..n).combinations(k) {
        let system = RationalMatrix::from_rows(
            tight
                .iter()
                .map(|&j| red.basis.row(j).into_inner())
                .collect(),
        )?;
        let rhs: RationalVector = tight
            .iter()
            .map(|&j| -red.tau.lambda()[j].clone())
            .collect();
        let c = if k == 0 {
            RationalVector::zeros(0)
        } else {
            match solve_linear(&system, &rhs) {
                Ok(c) => c,
                Err(_) => continue,
            }
        };
        let lam = red.tau.lambda().add(&red.basis.mul_vec(&c)?);
        if lam.is_nonnegative() {
            cs.insert(c);
        }
    }
    Ok(OracleResult {
        vertices: lift_all(&red, cs)?,
        method: OracleMethod::PatternScan,
        agreement: None,
        cross_check: None,
    })
}

/// `count` seeded random convex combinations of the oracle vertices of `Λ(p)`.
pub fn random_feasible_sample(
    polytope: &Polytope,
    p: &RationalVector,
    count: usize,
    seed: u64,
) -> Result<Vec<BarycentricVector>> {
    let vertices = dd_vertices(polytope, p)?.vertices;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let weights = random_weights(vertices.len(), &mut rng);
            let lambda = vertices.iter().zip(&weights).fold(
                RationalVector::zeros(polytope.num_vertices()),
                |acc, (v, w)| acc.add(&v.scale(w)),
            );
            BarycentricVector::new(polytope, lambda)
        })
        .collect()
}
