//! Batch evaluation over many sample points, written as CSV.

use std::io::Write;

use barypoly::numerics::{int, parse_rational, ratio, Rational};
use barypoly::{
    continuity_probe, lambda_vertices, locate, semidiff_probe, simplicial_coords, LambdaPolytope,
    Location, Polytope, ProbeConfig, ProbeReport, RationalVector,
};
use rayon::prelude::*;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepMode {
    Census,
    Continuity,
    Semidiff,
}

impl SweepMode {
    pub fn has_probe(self) -> bool {
        self != SweepMode::Census
    }
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub mode: SweepMode,
    pub t0: Rational,
    /// Number of samples `t_k = t0 / 2^k`, `k = 0..steps`.
    pub steps: usize,
    /// Probe direction, `e_1` when absent.
    pub direction: Option<RationalVector>,
    /// 0-based zero pattern for semidiff mode. When absent each point uses the
    /// lexicographically first feasible pattern.
    pub zero_set: Option<Vec<usize>>,
    /// Worker threads; `Some(1)` runs serially, `None` uses the rayon default.
    pub jobs: Option<usize>,
}

impl SweepOptions {
    pub fn new(mode: SweepMode) -> Self {
        Self {
            mode,
            t0: ratio(1, 8),
            steps: 9,
            direction: None,
            zero_set: None,
            jobs: None,
        }
    }
}

/// `k^d` points of the open bounding box of `polytope` on the lattice
/// `min + (i+1)/(k+1)·(max − min)`, first coordinate varying slowest.
pub fn grid_points(polytope: &Polytope, k: usize) -> Vec<RationalVector> {
    let d = polytope.dim();
    let vertices = polytope.vertices();
    let (lo, hi): (Vec<Rational>, Vec<Rational>) = (0..d)
        .map(|i| {
            let column = vertices.iter().map(|v| v[i].clone());
            let lo = column.clone().min().unwrap();
            let hi = column.max().unwrap();
            (lo, hi)
        })
        .unzip();
    if k == 0 {
        return Vec::new();
    }
    let denom = Rational::from_integer((k as i64 + 1).into());
    let total = k.pow(d as u32);
    (0..total)
        .map(|mut index| {
            let mut digits = vec![0usize; d];
            for slot in digits.iter_mut().rev() {
                *slot = index % k;
                index /= k;
            }
            digits
                .iter()
                .enumerate()
                .map(|(i, &j)| {
                    let frac = Rational::from_integer((j as i64 + 1).into()) / &denom;
                    &lo[i] + (&hi[i] - &lo[i]) * frac
                })
                .collect()
        })
        .collect()
}

/// Parses a point list: one point per line, coordinates separated by commas
/// or whitespace, `#` starting a comment.
pub fn parse_points(text: &str, dim: usize) -> Result<Vec<RationalVector>, CliError> {
    let mut points = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let p = parse_point(line)?;
        if p.len() != dim {
            return Err(barypoly::Error::Parse(format!(
                "line {}: expected {dim} coordinates, found {}",
                line_no + 1,
                p.len()
            ))
            .into());
        }
        points.push(p);
    }
    Ok(points)
}

/// Parses `"1/2,1/2"` or `"1/2 1/2"`.
pub fn parse_point(text: &str) -> Result<RationalVector, CliError> {
    let tokens: Vec<&str> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .collect();
    if tokens.is_empty() {
        return Err(barypoly::Error::Parse("empty point".into()).into());
    }
    Ok(RationalVector::parse(&tokens)?)
}

pub fn parse_t0(text: &str) -> Result<Rational, CliError> {
    Ok(parse_rational(text)?)
}

fn header(dim: usize, options: &SweepOptions) -> Vec<String> {
    let mut cols = vec!["index".to_string()];
    cols.extend((1..=dim).map(|i| format!("p{i}")));
    cols.extend(
        [
            "location",
            "vertex_count",
            "dim",
            "theorem_count_match",
            "degenerate",
        ]
        .map(String::from),
    );
    if options.mode.has_probe() {
        let prefix = if options.mode == SweepMode::Continuity {
            "d"
        } else {
            "w"
        };
        cols.extend((0..options.steps).map(|k| format!("{prefix}_{k}")));
        cols.push("verdict".into());
        if options.mode == SweepMode::Semidiff {
            cols.push("zero_set".into());
        }
    }
    cols.push("error".into());
    cols
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

struct Row {
    location: Option<Location>,
    lambda: Option<LambdaPolytope>,
    probe: Option<ProbeReport>,
    error: Option<&'static str>,
}

fn evaluate(polytope: &Polytope, p: &RationalVector, options: &SweepOptions) -> Row {
    let mut row = Row {
        location: None,
        lambda: None,
        probe: None,
        error: None,
    };
    let result = (|| -> barypoly::Result<()> {
        let location = locate(polytope, p)?.location;
        row.location = Some(location);
        if location == Location::Outside {
            return Err(barypoly::Error::Infeasible);
        }
        let lam = row.lambda.insert(lambda_vertices(polytope, p)?);
        let config = ProbeConfig::new(options.t0.clone(), options.steps);
        let h = options.direction.clone().unwrap_or_else(|| {
            let mut e = RationalVector::zeros(polytope.dim());
            e[0] = int(1);
            e
        });
        match options.mode {
            SweepMode::Census => {}
            SweepMode::Continuity => row.probe = Some(continuity_probe(polytope, p, &h, &config)?),
            SweepMode::Semidiff => {
                let z = match &options.zero_set {
                    Some(z) => z.clone(),
                    None => lam
                        .vertex_patterns
                        .iter()
                        .flatten()
                        .min()
                        .cloned()
                        .ok_or(barypoly::Error::Infeasible)?,
                };
                if !simplicial_coords(polytope, p, &z)?.feasible {
                    return Err(barypoly::Error::InfeasibleSelection);
                }
                row.probe = Some(semidiff_probe(polytope, p, &z, &h, &config)?);
            }
        }
        Ok(())
    })();
    if let Err(e) = result {
        row.error = Some(e.code());
    }
    row
}

fn render(index: usize, p: &RationalVector, row: &Row, options: &SweepOptions) -> Vec<String> {
    let mut out = vec![(index + 1).to_string()];
    out.extend(p.to_strings());
    out.push(
        row.location
            .map(|l| l.as_str().to_string())
            .unwrap_or_default(),
    );
    match &row.lambda {
        Some(lam) => {
            out.push(lam.len().to_string());
            out.push(lam.dim.to_string());
            out.push(lam.theorem_count_match.to_string());
            out.push(lam.is_degenerate().to_string());
        }
        None => out.extend(std::iter::repeat_n(String::new(), 4)),
    }
    if options.mode.has_probe() {
        match &row.probe {
            Some(report) => {
                out.extend(report.distances().into_iter().map(float));
                out.push(report.verdict.as_str().to_string());
                if options.mode == SweepMode::Semidiff {
                    let z = report.zero_set.as_deref().unwrap_or_default();
                    out.push(
                        z.iter()
                            .map(|i| (i + 1).to_string())
                            .collect::<Vec<_>>()
                            .join(" "),
                    );
                }
            }
            None => {
                let blanks = options.steps + 1 + usize::from(options.mode == SweepMode::Semidiff);
                out.extend(std::iter::repeat_n(String::new(), blanks));
            }
        }
    }
    out.push(row.error.unwrap_or_default().to_string());
    out
}

/// Evaluates every point and writes one CSV row per point in input order.
///
/// Rows are computed in parallel unless `options.jobs == Some(1)`; output is
/// identical either way. Per-row failures are recorded in the `error` column.
pub fn run_sweep<W: Write>(
    polytope: &Polytope,
    points: &[RationalVector],
    options: &SweepOptions,
    out: W,
) -> Result<(), CliError> {
    let rows: Vec<Row> = match options.jobs {
        Some(1) => points
            .iter()
            .map(|p| evaluate(polytope, p, options))
            .collect(),
        jobs => {
            let mut builder = rayon::ThreadPoolBuilder::new();
            if let Some(n) = jobs {
                builder = builder.num_threads(n);
            }
            let pool = builder
                .build()
                .map_err(|e| CliError::Output(e.to_string()))?;
            pool.install(|| {
                points
                    .par_iter()
                    .map(|p| evaluate(polytope, p, options))
                    .collect()
            })
        }
    };
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    writer.write_record(header(polytope.dim(), options))?;
    for (i, (p, row)) in points.iter().zip(&rows).enumerate() {
        writer.write_record(render(i, p, row, options))?;
    }
    writer.flush()?;
    Ok(())
}
