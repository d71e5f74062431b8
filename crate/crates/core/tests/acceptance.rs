//! Acceptance harness. Prints one line per criterion and exits nonzero when
//! any criterion fails. Run with `cargo test -p localizer --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use localizer::clifford::{gamma_rep, linear_combination_spectrum_check, verify_clifford};
use localizer::hemisphere::{
    appendix_inequality_check, curve_x_b1, e_poly, general_b_surface, null_vector_residual,
};
use localizer::par::ExecPolicy;
use localizer::pseudospectra::{
    apply_orthogonal, clifford_pseudospectrum, commutator_bound, quadratic_pseudospectrum, spectral_localizer,
    symmetry_check, Evaluator, HermitianTuple, PseudospectrumSample, Which,
};
use localizer::scan::{
    bisect_zero, grid_scan, grid_scan_embedded, zero_set, zero_set_by, BisectOptions, Embedding, Measure, Ray,
    Region, ScanOptions,
};
use localizer::zoo::{
    hemisphere, hemisphere_rotation, interior_commutator_defect, mu_c_two_projection_closed, mu_c_universal_closed,
    mu_q_two_projection_closed, mu_q_universal_closed, position_momentum, two_projection,
    universal_pair_pseudospectra, z_grid_with_spacing, ZooSpec,
};
use rand::Rng;

const SEED: u64 = 0x5eed_2024;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("clifford relations", clifford_relations),
        ("scalar combination spectrum", scalar_combination),
        ("two-projection oracle", two_projection_oracle),
        ("universal pair", universal_pair),
        ("pauli sphere", pauli_sphere),
        ("lipschitz and radius bounds", lipschitz_and_radius),
        ("closeness bound", closeness_bound),
        ("commuting points", commuting_points),
        ("hemisphere b = 1", hemisphere_b1),
        ("essential circle", essential_circle),
        ("position/momentum", position_momentum_pair),
        ("symmetry suite", symmetry_suite),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let secs = start.elapsed().as_secs_f64();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("{tag} [{}] {name}: {} ({secs:.2}s)", k + 1, o.detail);
        if !o.passed {
            failures += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn clifford_relations() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for d in 1..=12 {
        let rep = gamma_rep(d).expect("gamma_rep");
        worst = worst.max(verify_clifford(&rep, 1e-13).max_violation());
    }
    let t = start.elapsed();
    outcome(worst < 1e-13 && within(t, 1.0), format!("max violation {worst:.2e} for d = 1..12"))
}

fn scalar_combination() -> Outcome {
    let mut rng = rng(SEED + 2);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let d = rng.gen_range(1..=8);
        let alpha = random_vector(&mut rng, d, 3.0);
        let rep = gamma_rep(d).unwrap();
        let r = linear_combination_spectrum_check(&rep, &alpha, 1e-10).unwrap();
        worst = worst.max(r.max_deviation);
    }
    outcome(worst <= 1e-10, format!("max ||eig| - |alpha|| = {worst:.2e} over 100 draws"))
}

fn two_projection_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(SEED + 3);
    let (mut dc, mut dq): (f64, f64) = (0.0, 0.0);
    for _ in 0..1000 {
        let x = rng.gen_range(-3.0..=3.0);
        let y = rng.gen_range(-3.0..=3.0);
        let z = rng.gen_range(-1.0..=1.0);
        let (u, v) = two_projection(z).unwrap();
        let a = HermitianTuple::new(vec![u, v]).unwrap();
        let c = clifford_pseudospectrum(&a, &[x, y]).unwrap();
        let q = quadratic_pseudospectrum(&a, &[x, y]).unwrap();
        dc = dc.max((c - mu_c_two_projection_closed(x, y, z).unwrap()).abs());
        dq = dq.max((q - mu_q_two_projection_closed(x, y, z).unwrap()).abs());
    }
    let t = start.elapsed();
    outcome(
        dc <= 1e-9 && dq <= 1e-9 && within(t, 5.0),
        format!("max deviation mu_c {dc:.2e}, mu_q {dq:.2e}"),
    )
}

fn universal_pair() -> Outcome {
    let start = Instant::now();
    let z_grid = z_grid_with_spacing(1e-3).unwrap();
    let region = Region::cube(-2.0, 2.0, 2, 201).unwrap();
    let h = region.min_spacing();
    let grid = localizer::scan::grid_scan_with(&region, Which::CQ, ExecPolicy::Auto, Some(2e-2), |p| {
        let v = universal_pair_pseudospectra(p[0], p[1], &z_grid)?;
        Ok(PseudospectrumSample {
            lambda: p.to_vec(),
            mu_c: Some(v.mu_c),
            mu_q: Some(v.mu_q),
            mu_w: None,
        })
    })
    .unwrap();

    let (mut dc, mut dq): (f64, f64) = (0.0, 0.0);
    for s in &grid.samples {
        let (x, y) = (s.lambda[0], s.lambda[1]);
        dc = dc.max((s.mu_c.unwrap() - mu_c_universal_closed(x, y)).abs());
        dq = dq.max((s.mu_q.unwrap() - mu_q_universal_closed(x, y)).abs());
    }
    let values_ok = dc <= 5e-3 && dq <= 5e-3;

    let corners: Vec<[f64; 2]> = vec![[-1.0, -1.0], [-1.0, 1.0], [1.0, -1.0], [1.0, 1.0]];
    let zq = zero_set_by(&grid, Measure::Quadratic, 2e-2);
    let zq_ok = zq.len() == 4
        && corners
            .iter()
            .all(|c| zq.iter().any(|p| dist(&p.lambda, c) < 1e-12));

    // the Clifford zero set is taken at a threshold well inside one cell
    let zc = zero_set_by(&grid, Measure::Clifford, 1e-3);
    let off_diagonal = zc
        .iter()
        .map(|p| {
            let (x, y) = (p.lambda[0], p.lambda[1]);
            // cell distance: largest coordinate offset to the nearest point of the segment
            let seg = |sx: f64| {
                let t = ((x + sx * y) / 2.0).clamp(-1.0, 1.0);
                (x - t).abs().max((y - sx * t).abs())
            };
            seg(1.0).min(seg(-1.0))
        })
        .fold(0.0, f64::max);
    let diag_points = region.resolution()[0];
    let covered = (0..diag_points)
        .filter(|&k| region.coordinate(0, k).abs() <= 1.0 + 1e-12)
        .all(|k| {
            let a = region.flat_index(&[k, k]);
            let b = region.flat_index(&[k, diag_points - 1 - k]);
            zc.iter().any(|p| p.index == a) && zc.iter().any(|p| p.index == b)
        });
    let zc_ok = off_diagonal <= h + 1e-12 && covered;
    let t = start.elapsed();
    outcome(
        values_ok && zq_ok && zc_ok && within(t, 120.0),
        format!(
            "value deviation mu_c {dc:.2e}, mu_q {dq:.2e}; mu_q zero set has {} points (want the 4 corners); \
             mu_c zero set {} points, max cell distance to the cross {off_diagonal:.2e}, diagonals covered {covered}",
            zq.len(),
            zc.len()
        ),
    )
}

fn pauli_sphere() -> Outcome {
    let start = Instant::now();
    let tuple = ZooSpec::Pauli.build().unwrap();
    let ev = Evaluator::new(&tuple).unwrap();
    let mut rng = rng(SEED + 5);
    let mut worst: f64 = 0.0;
    let mut errors = 0;
    for _ in 0..50 {
        let ray = Ray::radial(random_unit_vector(&mut rng, 3)).unwrap();
        match bisect_zero(&ev, &ray, 0.5, 1.5, &BisectOptions::default()) {
            Ok(r) => worst = worst.max((r.t - 1.0).abs()),
            Err(_) => errors += 1,
        }
    }
    let at_origin = ev.mu_c(&[0.0, 0.0, 0.0]);
    let t = start.elapsed();
    outcome(
        errors == 0 && worst <= 1e-6 && (at_origin - 1.0).abs() <= 1e-10 && within(t, 5.0),
        format!("max |t* - 1| = {worst:.2e} ({errors} failed rays); mu_c(0) = {at_origin:.15}"),
    )
}

fn lipschitz_and_radius() -> Outcome {
    let mut rng = rng(SEED + 6);
    let (mut lip, mut rad) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for _ in 0..10_000 {
        let d = rng.gen_range(1..=4);
        let n = rng.gen_range(1..=5);
        let a = random_tuple(&mut rng, d, n, 1.0);
        let ev = Evaluator::new(&a).unwrap();
        let lambda = random_vector(&mut rng, d, 3.0);
        let nu = random_vector(&mut rng, d, 3.0);
        let (ml, mn) = (ev.mu_c(&lambda), ev.mu_c(&nu));
        lip = lip.max((ml - mn).abs() - dist(&lambda, &nu));
        let l0 = spectral_localizer(&a, &vec![0.0; d], ev.rep()).unwrap().spectral_norm();
        rad = rad.max((ml - norm(&lambda)).abs() - l0);
    }
    outcome(
        lip <= 1e-8 && rad <= 1e-8,
        format!("max Lipschitz excess {lip:.2e}, max radius excess {rad:.2e} over 10^4 triples"),
    )
}

fn closeness_bound() -> Outcome {
    let mut rng = rng(SEED + 7);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=6);
        let a = random_tuple(&mut rng, 3, n, 1.0);
        let ev = Evaluator::new(&a).unwrap();
        let lambda = random_vector(&mut rng, 3, 2.0);
        let (c, q) = (ev.mu_c(&lambda), ev.mu_q(&lambda));
        worst = worst.max((c * c - q * q).abs() - commutator_bound(&a));
    }
    outcome(worst <= 1e-8, format!("max excess over the commutator bound {worst:.2e}"))
}

fn commuting_points() -> Outcome {
    let mut rng = rng(SEED + 8);
    let region = Region::cube(-3.0, 3.0, 3, 7).unwrap();
    let mut mismatches = 0;
    let mut sizes = Vec::new();
    for _ in 0..20 {
        let count = rng.gen_range(1..=8);
        let mut points: Vec<Vec<f64>> = (0..count)
            .map(|_| (0..3).map(|_| rng.gen_range(-3i32..=3) as f64).collect())
            .collect();
        points.sort_by(|a, b| a.partial_cmp(b).unwrap());
        points.dedup();
        let tuple = ZooSpec::CommutingPoints { points: points.clone() }.build().unwrap();
        let ev = Evaluator::new(&tuple).unwrap();
        let opts = ScanOptions {
            epsilon: Some(1e-8),
            ..ScanOptions::default()
        };
        let grid = grid_scan(&ev, &region, &opts).unwrap();
        let mut found: Vec<Vec<f64>> = zero_set(&grid, 1e-8).into_iter().map(|p| p.lambda).collect();
        found.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if found != points {
            mismatches += 1;
        }
        sizes.push(points.len());
    }
    outcome(
        mismatches == 0,
        format!("{mismatches} of 20 point sets mismatched (set sizes {sizes:?})"),
    )
}

/// Distance from `(x, z)` to the `b = 1` curve in the half-plane `x ≥ 0`,
/// together with the essential-circle point `(1, 0)`.
fn distance_to_hemisphere_curve(curve: &[(f64, f64)], x: f64, z: f64) -> f64 {
    let mut best = (x - 1.0).hypot(z);
    for w in curve.windows(2) {
        let ((x0, z0), (x1, z1)) = (w[0], w[1]);
        let (dx, dz) = (x1 - x0, z1 - z0);
        let len2 = dx * dx + dz * dz;
        let t = if len2 == 0.0 {
            0.0
        } else {
            (((x - x0) * dx + (z - z0) * dz) / len2).clamp(0.0, 1.0)
        };
        best = best.min((x - x0 - t * dx).hypot(z - z0 - t * dz));
    }
    best
}

fn hemisphere_b1() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();

    let a_ok = e_poly(1.0, 0.0) == 0.0 && e_poly(0.0, 1.0) == 0.0;
    notes.push(format!("(a) {}", if a_ok { "ok" } else { "nonzero" }));

    let mut rng = rng(SEED + 9);
    let mut b_dev: f64 = 0.0;
    for _ in 0..1000 {
        let r = rng.gen_range(0.0..=1.5);
        let z = rng.gen_range(-1.0..=2.0);
        b_dev = b_dev.max((general_b_surface(1.0, r, z) - e_poly(r, z)).abs());
    }
    let b_ok = b_dev <= 1e-12;
    notes.push(format!("(b) max deviation {b_dev:.2e}"));

    let (mut on_curve, mut off_curve): (f64, f64) = (0.0, f64::INFINITY);
    for z in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let x = curve_x_b1(z);
        on_curve = on_curve.max(null_vector_residual(x, z, 400).unwrap());
        off_curve = off_curve.min(null_vector_residual(x + 0.1, z, 400).unwrap());
    }
    let c_ok = on_curve < 1e-7 && off_curve > 1e-2;
    notes.push(format!("(c) residual on curve {on_curve:.2e}, off curve {off_curve:.2e}"));

    let h = 0.01;
    let region = Region::new(vec![0.0, -0.4], vec![1.2, 1.2], vec![121, 161]).unwrap();
    let tuple = hemisphere(1.0, 512).unwrap();
    let ev = Evaluator::new(&tuple).unwrap();
    let opts = ScanOptions {
        epsilon: Some(h),
        ..ScanOptions::default()
    };
    let grid = grid_scan_embedded(&ev, &region, &Embedding::coordinate_plane(3, 0, 2), &opts).unwrap();
    let curve: Vec<(f64, f64)> = (0..=20_000)
        .map(|k| {
            let z = k as f64 / 20_000.0;
            (curve_x_b1(z), z)
        })
        .collect();
    let zeros = zero_set(&grid, h);
    let offenders: Vec<(f64, f64)> = zeros
        .iter()
        .map(|p| (p.lambda[0], p.lambda[2]))
        .filter(|&(x, z)| distance_to_hemisphere_curve(&curve, x, z) > 2.0 * h + 1e-12)
        .collect();
    let d_ok = offenders.is_empty();
    if d_ok {
        notes.push(format!("(d) {} zero-set points all within 2h", zeros.len()));
    } else {
        let max_abs_z = offenders.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
        let max_x = offenders.iter().map(|p| p.0).fold(0.0, f64::max);
        notes.push(format!(
            "(d) {} of {} zero-set points farther than 2h; offenders have |z| <= {max_abs_z:.3}, x <= {max_x:.3}",
            offenders.len(),
            zeros.len()
        ));
    }

    let zs: Vec<f64> = (0..1000).map(|k| -2.0 + 5.0 * k as f64 / 999.0).collect();
    let e_ok = appendix_inequality_check(&zs, 1e-12).passed;
    notes.push(format!("(e) {}", if e_ok { "ok" } else { "violated" }));

    let t = start.elapsed();
    outcome(a_ok && b_ok && c_ok && d_ok && e_ok && within(t, 180.0), notes.join("; "))
}

fn essential_circle() -> Outcome {
    let sizes = [128, 256, 512, 1024];
    let mut ok = true;
    let mut rows = Vec::new();
    for b in [0.5, 1.0, 2.0] {
        let values: Vec<f64> = sizes
            .iter()
            .map(|&n| {
                let tuple = hemisphere(b, n).unwrap();
                Evaluator::new(&tuple).unwrap().mu_c(&[1.0, 0.0, 0.0])
            })
            .collect();
        let decreasing = values.windows(2).all(|w| w[1] < w[0]);
        // halving toward zero: the last value must sit well below the first
        let shrinking = values[3] < 0.5 * values[0];
        ok &= decreasing && shrinking;
        rows.push(format!(
            "b={b}: {}",
            values.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>().join(" > ")
        ));
    }
    outcome(ok, rows.join("; "))
}

fn position_momentum_pair() -> Outcome {
    let start = Instant::now();
    let probes = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [2.0, -1.0]];
    let pq = position_momentum(1024, 12.0).unwrap();
    let ev = Evaluator::new(&pq).unwrap();
    let mq: Vec<f64> = probes.iter().map(|p| ev.mu_q(p)).collect();
    let dev = mq.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    let spread = mq.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - mq.iter().cloned().fold(f64::INFINITY, f64::min);
    let q_ok = dev <= 2e-2 && spread <= 2e-2;

    let defect = interior_commutator_defect(&pq).unwrap();
    let comm_ok = defect <= 1e-10;

    let mut c_ok = true;
    let mut per_n = Vec::new();
    for n in [256, 512, 1024] {
        let t = position_momentum(n, 12.0).unwrap();
        let e = Evaluator::new(&t).unwrap();
        per_n.push(probes.iter().map(|p| e.mu_c(p)).collect::<Vec<_>>());
    }
    for p in 0..probes.len() {
        c_ok &= per_n[2][p] < 0.1;
        c_ok &= per_n.windows(2).all(|w| w[1][p] <= w[0][p] + 1e-12);
    }
    let largest_c = per_n[2].iter().cloned().fold(0.0, f64::max);
    let t = start.elapsed();
    outcome(
        q_ok && comm_ok && c_ok && within(t, 120.0),
        format!(
            "max |mu_q - 1| {dev:.2e}, spread {spread:.2e}; interior commutator defect {defect:.2e}; \
             max mu_c at N=1024 {largest_c:.2e}, nonincreasing in N {c_ok}"
        ),
    )
}

fn symmetry_suite() -> Outcome {
    let mut rng = rng(SEED + 12);
    let n = 48;
    let tuple = hemisphere(1.0, n).unwrap();
    let ev = Evaluator::new(&tuple).unwrap();
    let mut rot: f64 = 0.0;
    let mut hypothesis_ok = true;
    for _ in 0..50 {
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        let (x, y, z): (f64, f64, f64) = (rng.gen_range(-1.5..=1.5), rng.gen_range(-1.5..=1.5), rng.gen_range(-0.5..=1.5));
        let r = x.hypot(y);
        let (mc1, mc2) = (ev.mu_c(&[x, y, z]), ev.mu_c(&[r, 0.0, z]));
        let (mq1, mq2) = (ev.mu_q(&[x, y, z]), ev.mu_q(&[r, 0.0, z]));
        rot = rot.max((mc1 - mc2).abs()).max((mq1 - mq2).abs());
        let (u, q) = hemisphere_rotation(n, theta);
        let report = symmetry_check(&tuple, &u, &q, &[x, y, z], 1e-9).unwrap();
        hypothesis_ok &= report.hypothesis_met;
        rot = rot.max(report.max_delta());
    }

    let mut cov: f64 = 0.0;
    for _ in 0..100 {
        let d = rng.gen_range(2..=4);
        let size = rng.gen_range(1..=5);
        let a = random_tuple(&mut rng, d, size, 1.0);
        let u = random_orthogonal(&mut rng, d);
        let lambda = random_vector(&mut rng, d, 2.0);
        let rotated = a.rotated(&u).unwrap();
        let lhs = quadratic_pseudospectrum(&rotated, &apply_orthogonal(&u, &lambda)).unwrap();
        let rhs = quadratic_pseudospectrum(&a, &lambda).unwrap();
        cov = cov.max((lhs - rhs).abs());
    }
    outcome(
        hypothesis_ok && rot <= 1e-9 && cov <= 1e-8,
        format!("max rotation delta {rot:.2e} (hypotheses met {hypothesis_ok}); max O(d) delta {cov:.2e}"),
    )
}
