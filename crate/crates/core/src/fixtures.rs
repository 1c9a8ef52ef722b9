//! Built-in polytopes and seeded random generators used by tests, the CLI, and
//! the benches.

use num_bigint::BigInt;
use rand::Rng;

use crate::numerics::{int, ratio, Rational, RationalVector};
use crate::polytope::Polytope;

pub const NAMES: [&str; 5] = ["square", "triangle", "pentagon", "pyramid", "prism8"];

pub fn by_name(name: &str) -> Option<Polytope> {
    match name {
        "square" => Some(square()),
        "triangle" => Some(triangle()),
        "pentagon" => Some(pentagon()),
        "pyramid" => Some(pyramid()),
        "prism8" => Some(prism8()),
        _ => None,
    }
}

fn from_int_points(points: &[&[i64]], dim: usize) -> Polytope {
    let pts: Vec<RationalVector> = points.iter().map(|p| RationalVector::from_i64(p)).collect();
    Polytope::from_points(&pts, dim).expect("fixture is a valid polytope")
}

/// Unit square, counter-clockwise from the origin.
pub fn square() -> Polytope {
    from_int_points(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]], 2)
}

pub fn triangle() -> Polytope {
    from_int_points(&[&[0, 0], &[1, 0], &[0, 1]], 2)
}

/// Point on the unit circle with half-angle tangent `t`:
/// `((1 − t²)/(1 + t²), 2t/(1 + t²))`.
fn circle_point(t: &Rational) -> RationalVector {
    let t2 = t * t;
    let denom = int(1) + &t2;
    RationalVector::new(vec![(int(1) - &t2) / &denom, (int(2) * t) / &denom])
}

/// Rounds `x` to the nearest multiple of `1/denom`.
pub fn round_rational(x: f64, denom: i64) -> Rational {
    ratio((x * denom as f64).round() as i64, denom)
}

/// Regular pentagon with vertices at 90° + 72°k on the unit circle.
///
/// The exact vertices are irrational, so each is replaced by the rational
/// point of the circle whose half-angle tangent is within 1e-4 of the true one.
pub fn pentagon() -> Polytope {
    let pts: Vec<RationalVector> = (0..5)
        .map(|k| {
            let angle = (90.0 + 72.0 * k as f64).to_radians();
            circle_point(&round_rational((angle / 2.0).tan(), 10_000))
        })
        .collect();
    Polytope::from_points(&pts, 2).expect("pentagon is valid")
}

/// Pyramid over an irregular convex quadrilateral base.
pub fn pyramid() -> Polytope {
    from_int_points(
        &[&[0, 0, 0], &[3, 0, 0], &[2, 2, 0], &[0, 1, 0], &[1, 1, 2]],
        3,
    )
}

/// Eight-vertex prism realized as the unit cube; vertices 1–4 are the bottom
/// face, 5–8 the top face in the same order.
pub fn prism8() -> Polytope {
    from_int_points(
        &[
            &[0, 0, 0],
            &[1, 0, 0],
            &[1, 1, 0],
            &[0, 1, 0],
            &[0, 0, 1],
            &[1, 0, 1],
            &[1, 1, 1],
            &[0, 1, 1],
        ],
        3,
    )
}

fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box–Muller
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Rational point exactly on the unit sphere in `R^dim`, near a uniformly drawn
/// direction, via inverse stereographic projection of a rounded parameter.
pub fn random_sphere_point<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> RationalVector {
    assert!(dim >= 2, "sphere points need dim >= 2");
    let x: Vec<f64> = (0..dim).map(|_| standard_normal(rng)).collect();
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let last = x[dim - 1] / norm;
    let u: Vec<Rational> = x[..dim - 1]
        .iter()
        .map(|v| round_rational(v / norm / (1.0 - last).max(1e-3), 100))
        .collect();
    let u2 = u.iter().fold(int(0), |acc, a| acc + a * a);
    let denom = &u2 + int(1);
    let mut coords: Vec<Rational> = u.iter().map(|a| int(2) * a / &denom).collect();
    coords.push((&u2 - int(1)) / &denom);
    RationalVector::new(coords)
}

/// `n` random rational points on the unit sphere in `R^dim`, redrawn until they
/// validate. Distinct points on a sphere are always extreme.
pub fn random_sphere_polytope<R: Rng + ?Sized>(dim: usize, n: usize, rng: &mut R) -> Polytope {
    loop {
        let pts: Vec<RationalVector> = (0..n).map(|_| random_sphere_point(dim, rng)).collect();
        if let Ok(p) = Polytope::from_points(&pts, dim) {
            return p;
        }
    }
}

/// Random strictly positive rational weights summing to one.
pub fn random_weights<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Vec<Rational> {
    let raw: Vec<i64> = (0..count).map(|_| rng.gen_range(1..=1000)).collect();
    let total: i64 = raw.iter().sum();
    raw.iter()
        .map(|&w| Rational::new(BigInt::from(w), BigInt::from(total)))
        .collect()
}

/// Interior point as a strictly positive combination of all vertices.
pub fn random_interior_point<R: Rng + ?Sized>(polytope: &Polytope, rng: &mut R) -> RationalVector {
    let weights = random_weights(polytope.num_vertices(), rng);
    polytope
        .vertex_matrix()
        .mul_vec(&RationalVector::new(weights))
        .expect("weights match vertex count")
}
