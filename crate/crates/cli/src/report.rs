//! Exact analysis of a single point, serialized losslessly.

use std::time::Instant;

use barypoly::gbc::par_lambda_vertices;
use barypoly::oracle::active_set_vertices;
use barypoly::polytope::Certificate;
use barypoly::{
    caratheodory_decompose, dd_vertices, feasible_tau, gamma_polytope, lambda_vertices, locate,
    nullbasis, random_feasible_sample, Location, Polytope, RationalVector,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Vertex list of the input polytope, as written back out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeEcho {
    pub dim: usize,
    pub vertices: Vec<RationalVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl PolytopeEcho {
    pub fn new(polytope: &Polytope) -> Self {
        Self {
            dim: polytope.dim(),
            vertices: polytope.vertices(),
            labels: polytope.labels().map(<[String]>::to_vec),
        }
    }
}

/// One vertex of the coordinate polytope. Indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaVertexReport {
    pub lambda: RationalVector,
    pub support: Vec<usize>,
    /// Every feasible zero pattern producing this vertex.
    pub zero_sets: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateAnalysis {
    pub tau: RationalVector,
    /// Columns of the kernel basis of `[V; 1ᵀ]`.
    pub null_basis: Vec<RationalVector>,
    pub lambda_vertices: Vec<LambdaVertexReport>,
    pub gamma_vertices: Vec<RationalVector>,
    pub dim: usize,
    pub kernel_dim: usize,
    pub vertex_count: usize,
    pub theorem_count_match: bool,
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub micros: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub polytope: PolytopeEcho,
    pub point: RationalVector,
    pub location: Location,
    pub certificate: Certificate,
    /// Absent when the point is outside.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analysis: Option<CoordinateAnalysis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct AnalyzeOptions {
    pub timing: bool,
    pub parallel: bool,
}

fn one_based(indices: &[usize]) -> Vec<usize> {
    indices.iter().map(|i| i + 1).collect()
}

pub fn run_analyze(
    polytope: &Polytope,
    point: &RationalVector,
    options: AnalyzeOptions,
) -> Result<AnalysisReport, CliError> {
    let start = Instant::now();
    polytope.check_point(point)?;
    let located = locate(polytope, point)?;
    let mut report = AnalysisReport {
        polytope: PolytopeEcho::new(polytope),
        point: point.clone(),
        location: located.location,
        certificate: located.certificate,
        analysis: None,
        timing: None,
    };
    if report.location != Location::Outside {
        let tau = feasible_tau(polytope, point)?;
        let basis = nullbasis(polytope);
        let lam = if options.parallel {
            par_lambda_vertices(polytope, point)?
        } else {
            lambda_vertices(polytope, point)?
        };
        let gamma = gamma_polytope(polytope, point, &tau, &basis, &lam)?;
        let vertices = lam
            .vertices
            .iter()
            .zip(&lam.vertex_supports)
            .zip(&lam.vertex_patterns)
            .map(|((v, support), patterns)| LambdaVertexReport {
                lambda: v.lambda().clone(),
                support: one_based(support),
                zero_sets: patterns.iter().map(|z| one_based(z)).collect(),
            })
            .collect();
        report.analysis = Some(CoordinateAnalysis {
            tau: tau.into_lambda(),
            null_basis: basis.columns(),
            lambda_vertices: vertices,
            gamma_vertices: gamma.vertices,
            dim: lam.dim,
            kernel_dim: lam.kernel_dim,
            vertex_count: lam.len(),
            theorem_count_match: lam.theorem_count_match,
            degenerate: lam.is_degenerate(),
        });
    }
    if options.timing {
        report.timing = Some(Timing {
            micros: start.elapsed().as_micros() as u64,
        });
    }
    Ok(report)
}

/// Outcome of comparing the pattern scan with the independent oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub location: Location,
    pub vertex_count: usize,
    pub agreement: bool,
    /// Active-set scan versus double description, for kernels of dimension ≤ 3.
    pub cross_check: Option<bool>,
    pub seed: u64,
    pub samples_checked: usize,
    pub samples_in_hull: bool,
}

/// Runs both vertex enumerations at `point` and checks that seeded random
/// feasible coordinates decompose over the enumerated vertices.
///
/// Disagreement is reported as [`CliError::OracleDisagreement`].
pub fn run_oracle_check(
    polytope: &Polytope,
    point: &RationalVector,
    seed: u64,
    samples: usize,
) -> Result<OracleCheck, CliError> {
    polytope.check_point(point)?;
    let location = locate(polytope, point)?.location;
    if location == Location::Outside {
        return Ok(OracleCheck {
            location,
            vertex_count: 0,
            agreement: true,
            cross_check: None,
            seed,
            samples_checked: 0,
            samples_in_hull: true,
        });
    }
    let lam = lambda_vertices(polytope, point)?;
    let mut oracle = dd_vertices(polytope, point)?;
    let agreement = oracle.compare(&lam.coordinates());
    let cross_check = match oracle.cross_check {
        Some(ok) => Some(ok),
        None if lam.kernel_dim <= 3 => {
            Some(active_set_vertices(polytope, point)?.vertices == oracle.vertices)
        }
        None => None,
    };
    let draws = random_feasible_sample(polytope, point, samples, seed)?;
    let samples_in_hull = draws
        .iter()
        .all(|s| caratheodory_decompose(&lam, s).is_ok_and(|parts| parts.len() <= lam.dim + 1));
    let check = OracleCheck {
        location,
        vertex_count: lam.len(),
        agreement,
        cross_check,
        seed,
        samples_checked: draws.len(),
        samples_in_hull,
    };
    if !agreement || cross_check == Some(false) || !samples_in_hull {
        return Err(CliError::OracleDisagreement(
            serde_json::to_string(&check).unwrap_or_default(),
        ));
    }
    Ok(check)
}
