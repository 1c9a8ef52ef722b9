//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any criterion fails. Thresholds are not relaxed: a failing
//! line reports the measured values that miss them.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use barypoly::fixtures::{self, random_interior_point, random_sphere_polytope};
use barypoly::numerics::{affine_dim, int, ratio};
use barypoly::setvalued::finite_difference_jacobian;
use barypoly::{
    caratheodory_decompose, continuity_probe, dd_vertices, feasible_tau, lambda_vertices, locate,
    nullbasis, random_feasible_sample, segment_interval, selection_jacobian, semidiff_probe,
    Location, Polytope, ProbeConfig, RationalVector,
};
use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

fn interior_points(poly: &Polytope, count: usize, seed: u64) -> Vec<RationalVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_interior_point(poly, &mut rng))
        .collect()
}

/// Seeded census polytopes: d ∈ {2, 3}, n ∈ [d + 2, 8], 10 interior points each.
fn census() -> Vec<(Polytope, Vec<RationalVector>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..50)
        .map(|i| {
            let d = rng.gen_range(2..=3);
            let n = rng.gen_range(d + 2..=8);
            let poly = random_sphere_polytope(d, n, &mut rng);
            let pts = interior_points(&poly, 10, 1000 + i);
            (poly, pts)
        })
        .collect()
}

fn runtime_ok(elapsed: Duration, limit: Duration) -> (bool, String) {
    (
        elapsed < limit,
        format!("{:.3}s (limit {}s)", elapsed.as_secs_f64(), limit.as_secs()),
    )
}

fn quadrilateral_segment() -> Outcome {
    let start = Instant::now();
    let sq = fixtures::square();
    let basis = nullbasis(&sq);
    let mut ok = true;
    for p in interior_points(&sq, 25, 1) {
        let lam = lambda_vertices(&sq, &p).unwrap();
        let tau = feasible_tau(&sq, &p).unwrap();
        let (a, b) = segment_interval(&tau, &basis).unwrap();
        let direction = basis.column(0);
        let mut ends = vec![
            tau.lambda().add(&direction.scale(&a)),
            tau.lambda().add(&direction.scale(&b)),
        ];
        ends.sort();
        ok &= lam.len() == 2 && lam.dim == 1 && ends == lam.coordinates();
    }
    let half = ratio(1, 2);
    let center =
        lambda_vertices(&sq, &RationalVector::new(vec![half.clone(), half.clone()])).unwrap();
    let zero = int(0);
    let expected = vec![
        RationalVector::new(vec![zero.clone(), half.clone(), zero.clone(), half.clone()]),
        RationalVector::new(vec![half.clone(), zero.clone(), half.clone(), zero]),
    ];
    let center_ok = center.coordinates() == expected;
    let (fast, time) = runtime_ok(start.elapsed(), Duration::from_secs(1));
    Outcome::new(
        ok && center_ok && fast,
        format!("25 points segment={ok}, center exact={center_ok}, runtime {time}"),
    )
}

fn pentagon_triangle() -> Outcome {
    let start = Instant::now();
    let pent = fixtures::pentagon();
    let mut counts = Vec::new();
    let mut dims_ok = true;
    for p in interior_points(&pent, 25, 2) {
        let lam = lambda_vertices(&pent, &p).unwrap();
        counts.push(lam.len());
        dims_ok &= lam.dim == 2;
    }
    let three = counts.iter().filter(|&&c| c == 3).count();
    let center = pent.centroid();
    let lam = lambda_vertices(&pent, &center).unwrap();
    let decomposed = random_feasible_sample(&pent, &center, 10, 3)
        .unwrap()
        .iter()
        .all(|s| {
            caratheodory_decompose(&lam, s)
                .is_ok_and(|w| w.len() <= 3 && w.iter().all(|(_, x)| *x > int(0)))
        });
    let (fast, time) = runtime_ok(start.elapsed(), Duration::from_secs(1));
    let histogram = counts
        .iter()
        .counts()
        .into_iter()
        .sorted()
        .collect::<Vec<_>>();
    Outcome::new(
        three == counts.len() && dims_ok && decomposed && fast,
        format!(
            "{three}/25 points with 3 vertices (vertex-count histogram {histogram:?}), dim 2 everywhere={dims_ok}, \
             Caratheodory ≤3 weights={decomposed}, runtime {time}"
        ),
    )
}

fn pyramid_segment() -> Outcome {
    let start = Instant::now();
    let pyr = fixtures::pyramid();
    let mut good = 0;
    let pts = interior_points(&pyr, 25, 3);
    for p in &pts {
        let lam = lambda_vertices(&pyr, p).unwrap();
        good += usize::from(lam.len() == 2 && lam.dim == 1);
    }
    let (fast, time) = runtime_ok(start.elapsed(), Duration::from_secs(1));
    Outcome::new(
        good == pts.len() && fast,
        format!(
            "{good}/{} points with 2 vertices and dim 1, runtime {time}",
            pts.len()
        ),
    )
}

fn vertex_count_census(data: &[(Polytope, Vec<RationalVector>)]) -> Outcome {
    let (mut total, mut matched, mut unexplained) = (0, 0, 0);
    for (poly, pts) in data {
        for p in pts {
            let lam = lambda_vertices(poly, p).unwrap();
            total += 1;
            let hit = lam.len() == poly.num_vertices() - poly.dim() && lam.theorem_count_match;
            if hit {
                matched += 1;
            } else if !lam.is_degenerate() {
                unexplained += 1;
            }
        }
    }
    let share = matched as f64 / total as f64;
    Outcome::new(
        share >= 0.95 && unexplained == 0,
        format!(
            "count = n−d in {matched}/{total} samples ({:.1}%, need ≥95%), {unexplained} mismatches without a degeneracy witness",
            100.0 * share
        ),
    )
}

fn oracle_equivalence(data: &[(Polytope, Vec<RationalVector>)]) -> Outcome {
    let mut cases: Vec<(Polytope, RationalVector)> = Vec::new();
    for (i, name) in fixtures::NAMES.iter().enumerate() {
        let poly = fixtures::by_name(name).unwrap();
        let mut pts = interior_points(&poly, 10, 50 + i as u64);
        pts.push(poly.centroid());
        pts.extend(poly.vertices());
        cases.extend(pts.into_iter().map(|p| (poly.clone(), p)));
    }
    for (poly, pts) in data {
        cases.extend(pts.iter().map(|p| (poly.clone(), p.clone())));
    }
    let mismatches = cases
        .iter()
        .filter(|(poly, p)| {
            let lam = lambda_vertices(poly, p).unwrap();
            !dd_vertices(poly, p).unwrap().compare(&lam.coordinates())
        })
        .count();
    Outcome::new(
        mismatches == 0,
        format!("{mismatches} disagreements over {} points", cases.len()),
    )
}

fn dimension_bound(data: &[(Polytope, Vec<RationalVector>)]) -> Outcome {
    let mut violations = 0;
    let mut checked = 0;
    let mut check = |poly: &Polytope, p: &RationalVector| {
        let lam = lambda_vertices(poly, p).unwrap();
        checked += 1;
        if lam.dim > poly.kernel_dim() || affine_dim(&lam.coordinates()).unwrap() != lam.dim {
            violations += 1;
        }
    };
    for name in fixtures::NAMES {
        let poly = fixtures::by_name(name).unwrap();
        for p in interior_points(&poly, 10, 7) {
            check(&poly, &p);
        }
    }
    for (poly, pts) in data {
        for p in pts {
            check(poly, p);
        }
    }
    // Boundary points of polygons: relative interiors of edges and vertices.
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut boundary_bad = 0;
    let mut boundary_total = 0;
    for name in ["square", "triangle", "pentagon"] {
        let poly = fixtures::by_name(name).unwrap();
        let n = poly.num_vertices();
        for i in 0..n {
            let (a, b) = (poly.vertex(i), poly.vertex((i + 1) % n));
            let t = ratio(rng.gen_range(1..1000), 1000);
            let edge_point = a.scale(&(int(1) - &t)).add(&b.scale(&t));
            for q in [edge_point, a] {
                boundary_total += 1;
                let on_boundary = locate(&poly, &q).unwrap().location == Location::Boundary;
                if !on_boundary || lambda_vertices(&poly, &q).unwrap().dim != 0 {
                    boundary_bad += 1;
                }
            }
        }
    }
    Outcome::new(
        violations == 0 && boundary_bad == 0,
        format!(
            "{violations} bound violations over {checked} points, {boundary_bad}/{boundary_total} polygon boundary points with dim ≠ 0"
        ),
    )
}

/// Interior basepoints whose probe segment `p + t0·h` stays inside.
fn probe_basepoints(
    poly: &Polytope,
    h: &RationalVector,
    t0: &barypoly::Rational,
    seed: u64,
) -> Vec<RationalVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < 5 {
        let p = random_interior_point(poly, &mut rng);
        let far = p.add(&h.scale(t0));
        if locate(poly, &far).unwrap().location != Location::Outside {
            out.push(p);
        }
    }
    out
}

fn continuity() -> Outcome {
    let start = Instant::now();
    let t0 = ratio(1, 8);
    let config = ProbeConfig::new(t0.clone(), 9);
    let h = RationalVector::new(vec![int(1), int(0)]);
    let (mut worst_final, mut worst_spread) = (0.0f64, 0.0f64);
    let mut runs = 0;
    for (seed, name) in ["square", "pentagon"].iter().enumerate() {
        let poly = fixtures::by_name(name).unwrap();
        for p in probe_basepoints(&poly, &h, &t0, 70 + seed as u64) {
            let report = continuity_probe(&poly, &p, &h, &config).unwrap();
            runs += 1;
            worst_final = worst_final.max(*report.distances().last().unwrap());
            let ratios = report.ratios();
            let mut sorted = ratios.clone();
            sorted.sort_by(f64::total_cmp);
            let median = sorted[sorted.len() / 2];
            let spread = ratios
                .iter()
                .fold(0.0f64, |m, r| m.max(r / median.max(f64::MIN_POSITIVE)));
            worst_spread = worst_spread.max(if median == 0.0 && ratios.iter().all(|&r| r == 0.0) {
                0.0
            } else {
                spread
            });
        }
    }
    let (fast, time) = runtime_ok(start.elapsed(), Duration::from_secs(5));
    let final_ok = worst_final < 1e-7;
    let ratio_ok = worst_spread <= 4.0;
    Outcome::new(
        final_ok && ratio_ok && fast,
        format!(
            "{runs} probes: max final distance {worst_final:.3e} (need < 1e-7), \
             max ratio/median {worst_spread:.3} (need ≤ 4), runtime {time}"
        ),
    )
}

fn semidifferentiability() -> Outcome {
    let start = Instant::now();
    let sq = fixtures::square();
    let p = RationalVector::new(vec![ratio(1, 2), ratio(1, 2)]);
    let h = RationalVector::new(vec![int(1), int(0)]);
    let config = ProbeConfig::new(ratio(1, 16), 9);
    let report = semidiff_probe(&sq, &p, &[3], &h, &config).unwrap();
    let last = *report.distances().last().unwrap();
    let changes = report.set_changes();
    let decreasing = changes.windows(2).all(|w| w[1] < w[0]);
    let (fast, time) = runtime_ok(start.elapsed(), Duration::from_secs(5));
    Outcome::new(
        last < 1e-6 && decreasing && fast,
        format!(
            "final witness distance {last:.3e} (need < 1e-6), set changes {} decreasing={decreasing}, runtime {time}",
            changes.iter().map(|c| format!("{c:.3e}")).join(" ")
        ),
    )
}

fn jacobian_check() -> Outcome {
    let step = ratio(1, 10_000);
    let mut worst = 0.0f64;
    let mut patterns = 0;
    for name in fixtures::NAMES {
        let poly = fixtures::by_name(name).unwrap();
        let p = poly.centroid();
        for z in (0..poly.num_vertices()).combinations(poly.kernel_dim()) {
            let Ok(exact) = selection_jacobian(&poly, &z) else {
                continue;
            };
            let fd = finite_difference_jacobian(&poly, &p, &z, &step).unwrap();
            patterns += 1;
            for (r1, r2) in exact.iter().zip(&fd) {
                for (a, b) in r1.iter().zip(r2) {
                    worst = worst.max((a - b).abs());
                }
            }
        }
    }
    Outcome::new(
        worst <= 1e-8,
        format!("{patterns} patterns, max |J − FD| = {worst:.3e} (need ≤ 1e-8)"),
    )
}

fn sweep(binary: &Path, file: &Path, jobs: &str) -> Vec<u8> {
    let out = Command::new(binary)
        .args([
            "sweep",
            file.to_str().unwrap(),
            "--mode",
            "census",
            "--grid",
            "9",
            "--jobs",
            jobs,
        ])
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "sweep failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn determinism() -> Outcome {
    let binary = Path::new(env!("CARGO_BIN_EXE_barypoly"));
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("square.json");
    std::fs::write(&file, fixtures::square().to_json().to_string()).unwrap();
    let first = sweep(binary, &file, "4");
    let second = sweep(binary, &file, "4");
    let serial = sweep(binary, &file, "1");
    let text = String::from_utf8_lossy(&first);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    let all_two = rows.iter().all(|r| {
        let f: Vec<&str> = r.split(',').collect();
        f[3] == "interior" && f[4] == "2" && f[5] == "1"
    });
    Outcome::new(
        first == second && first == serial && rows.len() == 81 && all_two,
        format!(
            "repeat identical={}, serial = parallel={}, {} rows, all count 2 dim 1={all_two}",
            first == second,
            first == serial,
            rows.len()
        ),
    )
}

fn main() {
    let data = census();
    let criteria: Vec<Criterion> = vec![
        ("quadrilateral segment", Box::new(quadrilateral_segment)),
        ("pentagon triangle", Box::new(pentagon_triangle)),
        ("pyramid segment", Box::new(pyramid_segment)),
        (
            "vertex-count census",
            Box::new(|| vertex_count_census(&data)),
        ),
        ("oracle equivalence", Box::new(|| oracle_equivalence(&data))),
        ("dimension bound", Box::new(|| dimension_bound(&data))),
        ("continuity probe", Box::new(continuity)),
        (
            "semidifferentiability probe",
            Box::new(semidifferentiability),
        ),
        ("selection Jacobian", Box::new(jacobian_check)),
        ("sweep determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {:>2} ({name}): {}", i + 1, outcome.detail);
        failed += usize::from(!outcome.pass);
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
