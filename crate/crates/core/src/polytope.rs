//! Input polytopes: validation of the vertex data and exact point location.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lp::{self, LpOutcome};
use crate::numerics::{parse_rational, rank, Rational, RationalMatrix, RationalVector};

/// A full-dimensional convex polytope in `R^d` given by its `n > d` vertices.
///
/// The vertex matrix is `d × n` with vertex `i` in column `i`; the column order
/// fixes the coordinate order of every barycentric vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    vertices: RationalMatrix,
    stacked: RationalMatrix,
    labels: Option<Vec<String>>,
}

impl Polytope {
    pub fn dim(&self) -> usize {
        self.vertices.rows()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.cols()
    }

    /// `n − d − 1`, the dimension of `ker [V; 1ᵀ]`.
    pub fn kernel_dim(&self) -> usize {
        self.num_vertices() - self.dim() - 1
    }

    pub fn vertex_matrix(&self) -> &RationalMatrix {
        &self.vertices
    }

    /// `[V; 1ᵀ]`.
    pub fn stacked(&self) -> &RationalMatrix {
        &self.stacked
    }

    pub fn vertex(&self, i: usize) -> RationalVector {
        self.vertices.column(i)
    }

    pub fn vertices(&self) -> Vec<RationalVector> {
        self.vertices.columns()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.num_vertices() {
            return Err(Error::DimensionMismatch {
                expected: self.num_vertices(),
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Uniform average of the vertices.
    pub fn centroid(&self) -> RationalVector {
        let n = Rational::from_integer(self.num_vertices().into());
        (0..self.dim())
            .map(|i| self.vertices.row(i).sum() / &n)
            .collect()
    }

    /// `[p; 1]`.
    pub fn lift(&self, p: &RationalVector) -> Result<RationalVector> {
        self.check_point(p)?;
        let mut entries = p.as_slice().to_vec();
        entries.push(Rational::one());
        Ok(entries.into())
    }

    pub fn check_point(&self, p: &RationalVector) -> Result<()> {
        if p.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: p.len(),
            });
        }
        Ok(())
    }

    /// Validates a vertex list given as points (one `RationalVector` per vertex).
    pub fn from_points(points: &[RationalVector], dim: usize) -> Result<Self> {
        validate(&RationalMatrix::from_columns(dim, points)?, dim)
    }

    /// Parses the JSON file format `{"dim": d, "vertices": [[s, ...], ...]}`.
    ///
    /// Coordinates are JSON numbers (taken exactly from their decimal text) or
    /// `"p/q"` strings. An optional `"labels"` array names the vertices.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let dim = value
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing integer field \"dim\"".into()))?
            as usize;
        let rows = value
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing array field \"vertices\"".into()))?;
        let mut points = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let coords = row
                .as_array()
                .ok_or_else(|| Error::Parse(format!("vertex {} is not an array", i + 1)))?;
            if coords.len() != dim {
                return Err(Error::Parse(format!(
                    "vertex {} has {} coordinates, expected {dim}",
                    i + 1,
                    coords.len()
                )));
            }
            points.push(
                coords
                    .iter()
                    .map(json_rational)
                    .collect::<Result<RationalVector>>()?,
            );
        }
        let polytope = Self::from_points(&points, dim)?;
        match value.get("labels") {
            None | Some(Value::Null) => Ok(polytope),
            Some(Value::Array(items)) => {
                let labels = items
                    .iter()
                    .map(|v| v.as_str().map(str::to_owned))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::Parse("labels must be strings".into()))?;
                polytope.with_labels(labels)
            }
            Some(_) => Err(Error::Parse("labels must be an array".into())),
        }
    }

    /// JSON file representation, coordinates as exact strings.
    pub fn to_json(&self) -> Value {
        let vertices: Vec<Vec<String>> = self.vertices().iter().map(|v| v.to_strings()).collect();
        let mut value = json!({ "dim": self.dim(), "vertices": vertices });
        if let Some(labels) = &self.labels {
            value["labels"] = json!(labels);
        }
        value
    }
}

fn json_rational(value: &Value) -> Result<Rational> {
    match value {
        Value::Number(n) => parse_rational(&n.to_string()),
        Value::String(s) => parse_rational(s),
        other => Err(Error::Parse(format!("not a coordinate: {other}"))),
    }
}

/// Checks the standing assumptions on the vertex matrix `v` (`d × n`, vertex per
/// column): `n > d`, `rank [V; 1ᵀ] = d + 1`, pairwise distinct columns, and no
/// column in the convex hull of the others.
pub fn validate(v: &RationalMatrix, d: usize) -> Result<Polytope> {
    if v.rows() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: v.rows(),
        });
    }
    let n = v.cols();
    if n <= d {
        return Err(Error::TooFewVertices { dim: d, count: n });
    }
    let stacked = v.with_ones_row();
    let r = rank(&stacked);
    if r != d + 1 {
        return Err(Error::RankDeficient {
            rank: r,
            expected: d + 1,
        });
    }
    let columns = v.columns();
    for i in 0..n {
        for j in i + 1..n {
            if columns[i] == columns[j] {
                return Err(Error::DuplicateVertex {
                    first: i,
                    second: j,
                });
            }
        }
    }
    for (i, column) in columns.iter().enumerate() {
        let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        let a = stacked.select_columns(&others);
        let mut target = column.as_slice().to_vec();
        target.push(Rational::one());
        if lp::find_feasible(&a, &target.into())?.is_ok() {
            return Err(Error::NonExtremeVertex(i));
        }
    }
    Ok(Polytope {
        vertices: v.clone(),
        stacked,
        labels: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Location {
    Interior,
    Boundary,
    Outside,
}

impl Location {
    pub fn as_str(self) -> &'static str {
        match self {
            Location::Interior => "interior",
            Location::Boundary => "boundary",
            Location::Outside => "outside",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Certificate {
    /// Feasible barycentric coordinates of the point; strictly positive for
    /// interior points.
    Coordinates { lambda: RationalVector },
    /// `normalᵀ v_i ≤ offset` for every vertex and `normalᵀ p > offset`.
    Separator {
        normal: RationalVector,
        #[serde(with = "crate::numerics::serde_rational")]
        offset: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointLocation {
    pub location: Location,
    pub certificate: Certificate,
    /// Optimal value of `max s  s.t.  λ ≥ s·1` (absent when outside).
    pub slack: Option<Rational>,
}

impl PointLocation {
    /// Re-verifies the certificate exactly against `polytope` and `p`.
    pub fn verify(&self, polytope: &Polytope, p: &RationalVector) -> bool {
        match (&self.location, &self.certificate) {
            (Location::Outside, Certificate::Separator { normal, offset }) => {
                polytope.vertices().iter().all(|v| normal.dot(v) <= *offset)
                    && normal.dot(p) > *offset
            }
            (loc, Certificate::Coordinates { lambda }) => {
                let feasible = lambda.is_nonnegative()
                    && lambda.sum().is_one()
                    && polytope.vertex_matrix().mul_vec(lambda).ok().as_ref() == Some(p);
                let positive = lambda.iter().all(Signed::is_positive);
                feasible && (*loc != Location::Interior || positive)
            }
            _ => false,
        }
    }
}

/// Classifies `p` as interior, boundary, or outside, with an exact certificate.
///
/// Membership is the feasibility of `Vλ = p, 1ᵀλ = 1, λ ≥ 0`; when it fails the
/// phase-one duals give a separating functional. Otherwise `max s` subject to
/// `λ ≥ s·1` decides interior (`s* > 0`) versus boundary (`s* = 0`).
pub fn locate(polytope: &Polytope, p: &RationalVector) -> Result<PointLocation> {
    let rhs = polytope.lift(p)?;
    let (d, n) = (polytope.dim(), polytope.num_vertices());
    if let Err(farkas) = lp::find_feasible(polytope.stacked(), &rhs)? {
        // farkas = (y, t): Vᵀy + t·1 ≥ 0 and pᵀy + t < 0.
        let normal: RationalVector = (0..d).map(|i| -farkas[i].clone()).collect();
        let offset = farkas[d].clone();
        let located = PointLocation {
            location: Location::Outside,
            certificate: Certificate::Separator { normal, offset },
            slack: None,
        };
        debug_assert!(located.verify(polytope, p));
        return Ok(located);
    }

    // λ = μ + s·1 with μ, s ≥ 0: [V;1]μ + s·[V;1]1 = [p;1], maximize s.
    let stacked = polytope.stacked();
    let mut a = RationalMatrix::zeros(d + 1, n + 1);
    for i in 0..=d {
        let mut row_sum = Rational::zero();
        for j in 0..n {
            a[(i, j)] = stacked[(i, j)].clone();
            row_sum += &stacked[(i, j)];
        }
        a[(i, n)] = row_sum;
    }
    let mut cost = RationalVector::zeros(n + 1);
    cost[n] = -Rational::one();
    let (x, slack) = match lp::solve(&a, &rhs, &cost)? {
        LpOutcome::Optimal { x, value } => (x, -value),
        // s ≤ 1/n keeps the problem bounded, and feasibility was established above.
        other => unreachable!("max-slack LP returned {other:?}"),
    };
    let lambda: RationalVector = (0..n).map(|j| &x[j] + &x[n]).collect();
    let location = if slack.is_positive() {
        Location::Interior
    } else {
        Location::Boundary
    };
    Ok(PointLocation {
        location,
        certificate: Certificate::Coordinates { lambda },
        slack: Some(slack),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, ratio};

    fn square() -> Polytope {
        let pts = [[0, 0], [1, 0], [1, 1], [0, 1]].map(|p| RationalVector::from_i64(&p));
        Polytope::from_points(&pts, 2).unwrap()
    }

    #[test]
    fn square_is_valid() {
        let p = square();
        assert_eq!(p.num_vertices(), 4);
        assert_eq!(p.kernel_dim(), 1);
    }

    #[test]
    fn centroid_is_not_a_vertex() {
        let pts = vec![
            RationalVector::from_i64(&[0, 0]),
            RationalVector::from_i64(&[3, 0]),
            RationalVector::from_i64(&[0, 3]),
            RationalVector::from_i64(&[1, 1]),
        ];
        assert_eq!(
            Polytope::from_points(&pts, 2),
            Err(Error::NonExtremeVertex(3))
        );
    }

    #[test]
    fn collinear_points_are_rank_deficient() {
        let pts: Vec<_> = (0..4)
            .map(|k| RationalVector::from_i64(&[k, 2 * k]))
            .collect();
        assert!(matches!(
            Polytope::from_points(&pts, 2),
            Err(Error::RankDeficient {
                rank: 2,
                expected: 3
            })
        ));
    }

    #[test]
    fn too_few_and_duplicates() {
        let pts = vec![
            RationalVector::from_i64(&[0, 0]),
            RationalVector::from_i64(&[1, 0]),
        ];
        assert!(matches!(
            Polytope::from_points(&pts, 2),
            Err(Error::TooFewVertices { .. })
        ));
        let pts = [[0, 0], [1, 0], [0, 1], [1, 0]].map(|p| RationalVector::from_i64(&p));
        assert_eq!(
            Polytope::from_points(&pts, 2),
            Err(Error::DuplicateVertex {
                first: 1,
                second: 3
            })
        );
    }

    #[test]
    fn locate_center_edge_and_exterior() {
        let sq = square();
        let center = RationalVector::new(vec![ratio(1, 2), ratio(1, 2)]);
        let loc = locate(&sq, &center).unwrap();
        assert_eq!(loc.location, Location::Interior);
        assert_eq!(
            loc.certificate,
            Certificate::Coordinates {
                lambda: RationalVector::new(vec![ratio(1, 4); 4])
            }
        );
        assert!(loc.verify(&sq, &center));

        let edge = RationalVector::new(vec![ratio(1, 2), int(0)]);
        let loc = locate(&sq, &edge).unwrap();
        assert_eq!(loc.location, Location::Boundary);
        assert!(loc.verify(&sq, &edge));

        let far = RationalVector::from_i64(&[2, 2]);
        let loc = locate(&sq, &far).unwrap();
        assert_eq!(loc.location, Location::Outside);
        assert!(loc.verify(&sq, &far));
    }

    #[test]
    fn locate_rejects_wrong_length() {
        assert!(matches!(
            locate(&square(), &RationalVector::from_i64(&[1])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"dim": 2, "vertices": [[0, 0], [1.5, "0"], ["3/2", 1e0], [0, 0.1]]}"#;
        let p = Polytope::from_json_str(text).unwrap();
        assert_eq!(p.vertex(1), RationalVector::new(vec![ratio(3, 2), int(0)]));
        assert_eq!(p.vertex(3), RationalVector::new(vec![int(0), ratio(1, 10)]));
        let again = Polytope::from_json_str(&p.to_json().to_string()).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn json_errors() {
        assert!(matches!(Polytope::from_json_str("{"), Err(Error::Parse(_))));
        assert!(matches!(
            Polytope::from_json_str(r#"{"dim": 2, "vertices": [[0]]}"#),
            Err(Error::Parse(_))
        ));
    }
}
