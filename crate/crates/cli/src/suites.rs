//! Randomized check suites behind `oracle-check` and `property-suite`.

use anyhow::Result;
use localizer::clifford::{gamma_rep, linear_combination_spectrum_check, verify_clifford};
use localizer::hemisphere::{appendix_inequality_check, e_poly, general_b_surface};
use localizer::output::CheckReport;
use localizer::par::ExecPolicy;
use localizer::pseudospectra::{
    apply_orthogonal, clifford_pseudospectrum, commutator_bound, quadratic_pseudospectrum, spectral_localizer,
    symmetry_check, Evaluator, HermitianTuple, Which,
};
use localizer::scan::{bisect_zero, grid_scan, zero_set, BisectOptions, Ray, Region, ScanOptions};
use localizer::zoo::{
    hemisphere, hemisphere_rotation, mu_c_two_projection_closed, mu_c_universal_closed, mu_q_two_projection_closed,
    mu_q_universal_closed, two_projection, universal_pair_pseudospectra, z_grid_with_spacing, ZooSpec,
};
use localizer::{ComplexMatrix, HermitianMatrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> Result<HermitianMatrix> {
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = C64::new(rng.gen_range(-1.0..=1.0), 0.0);
        for j in i + 1..n {
            let v = C64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
    }
    Ok(HermitianMatrix::new(m)?)
}

fn random_tuple(rng: &mut ChaCha8Rng, d: usize, n: usize) -> Result<HermitianTuple> {
    let ops = (0..d).map(|_| random_hermitian(rng, n)).collect::<Result<Vec<_>>>()?;
    Ok(HermitianTuple::new(ops)?)
}

fn random_point(rng: &mut ChaCha8Rng, d: usize, scale: f64) -> Vec<f64> {
    (0..d).map(|_| rng.gen_range(-scale..=scale)).collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn random_unit(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v = random_point(rng, d, 1.0);
        let n = norm(&v);
        if n > 1e-3 && n <= 1.0 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

/// Orthogonal matrix from Gram-Schmidt on random columns.
fn random_orthogonal(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<f64>> {
    let mut cols: Vec<Vec<f64>> = Vec::new();
    while cols.len() < d {
        let mut v = random_point(rng, d, 1.0);
        for c in &cols {
            let dot: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(c).for_each(|(x, y)| *x -= dot * y);
        }
        let n = norm(&v);
        if n > 1e-6 {
            cols.push(v.iter().map(|x| x / n).collect());
        }
    }
    (0..d).map(|i| (0..d).map(|j| cols[j][i]).collect()).collect()
}

pub fn oracle_check(seed: u64, cases: usize, policy: ExecPolicy) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport::new("oracle-check", seed);

    let (mut dc, mut dq): (f64, f64) = (0.0, 0.0);
    for _ in 0..cases {
        let (x, y, z) = (rng.gen_range(-3.0..=3.0), rng.gen_range(-3.0..=3.0), rng.gen_range(-1.0..=1.0));
        let (u, v) = two_projection(z)?;
        let a = HermitianTuple::new(vec![u, v])?;
        dc = dc.max((clifford_pseudospectrum(&a, &[x, y])? - mu_c_two_projection_closed(x, y, z)?).abs());
        dq = dq.max((quadratic_pseudospectrum(&a, &[x, y])? - mu_q_two_projection_closed(x, y, z)?).abs());
    }
    report.push(
        "two_projection_closed_forms",
        dc <= 1e-9 && dq <= 1e-9,
        format!("{cases} cases, max deviation mu_c {dc:.2e}, mu_q {dq:.2e} (tol 1e-9)"),
    );

    let z_grid = z_grid_with_spacing(1e-3)?;
    let (mut uc, mut uq): (f64, f64) = (0.0, 0.0);
    for _ in 0..cases {
        let (x, y) = (rng.gen_range(-2.0..=2.0), rng.gen_range(-2.0..=2.0));
        let v = universal_pair_pseudospectra(x, y, &z_grid)?;
        uc = uc.max((v.mu_c - mu_c_universal_closed(x, y)).abs());
        uq = uq.max((v.mu_q - mu_q_universal_closed(x, y)).abs());
    }
    report.push(
        "universal_pair_fiber_minimum",
        uc <= 5e-3 && uq <= 5e-3,
        format!("{cases} cases with h_z = 1e-3, max deviation mu_c {uc:.2e}, mu_q {uq:.2e} (tol 5e-3)"),
    );

    let examples = [
        (mu_q_universal_closed(1.0, -1.0), 0.0),
        (mu_q_universal_closed(0.0, 0.0), std::f64::consts::SQRT_2),
        (mu_q_universal_closed(2.0, 1.0), 1.0),
        (mu_c_universal_closed(0.5, 0.5), 0.0),
        (mu_c_universal_closed(0.0, 0.0), 0.0),
        (mu_c_two_projection_closed(0.0, 0.0, 1.0)?, std::f64::consts::SQRT_2),
    ];
    let worst = examples.iter().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    report.push("closed_form_examples", worst <= 1e-12, format!("max deviation {worst:.2e}"));

    let pauli = ZooSpec::Pauli.build()?;
    let ev = Evaluator::new(&pauli)?;
    let mut worst_t: f64 = 0.0;
    let rays = cases.clamp(1, 50);
    for _ in 0..rays {
        let ray = Ray::radial(random_unit(&mut rng, 3))?;
        let r = bisect_zero(&ev, &ray, 0.5, 1.5, &BisectOptions::default())?;
        worst_t = worst_t.max((r.t - 1.0).abs());
    }
    let at_origin = ev.mu_c(&[0.0; 3]);
    report.push(
        "pauli_sphere",
        worst_t <= 1e-6 && (at_origin - 1.0).abs() <= 1e-10,
        format!("{rays} rays, max |t* - 1| = {worst_t:.2e}; mu_c(0) = {at_origin:.15}"),
    );

    let region = Region::cube(-3.0, 3.0, 3, 7)?;
    let mut mismatched = 0;
    let sets = cases.clamp(1, 20);
    for _ in 0..sets {
        let count = rng.gen_range(1..=8);
        let mut points: Vec<Vec<f64>> = (0..count)
            .map(|_| (0..3).map(|_| rng.gen_range(-3i32..=3) as f64).collect())
            .collect();
        points.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        points.dedup();
        let tuple = ZooSpec::CommutingPoints { points: points.clone() }.build()?;
        let ev = Evaluator::new(&tuple)?;
        let opts = ScanOptions {
            which: Which::CLIFFORD,
            policy,
            epsilon: Some(1e-8),
            ..ScanOptions::default()
        };
        let grid = grid_scan(&ev, &region, &opts)?;
        let mut found: Vec<Vec<f64>> = zero_set(&grid, 1e-8).into_iter().map(|p| p.lambda).collect();
        found.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        if found != points {
            mismatched += 1;
        }
    }
    report.push(
        "commuting_points_zero_set",
        mismatched == 0,
        format!("{mismatched} of {sets} random point sets mismatched"),
    );

    let mut poly: f64 = 0.0;
    for _ in 0..cases {
        let (r, z) = (rng.gen_range(0.0..=1.5), rng.gen_range(-1.0..=2.0));
        poly = poly.max((general_b_surface(1.0, r, z) - e_poly(r, z)).abs());
    }
    let crossings = e_poly(1.0, 0.0) == 0.0 && e_poly(0.0, 1.0) == 0.0;
    report.push(
        "hemisphere_surface_at_b1",
        crossings && poly <= 1e-12,
        format!("e(1,0) = e(0,1) = 0: {crossings}; max |surface - e| {poly:.2e}"),
    );

    let zs: Vec<f64> = (0..cases.max(2)).map(|k| -2.0 + 5.0 * k as f64 / (cases.max(2) - 1) as f64).collect();
    let ineq = appendix_inequality_check(&zs, 1e-12);
    let failures = ineq.samples.iter().filter(|s| !s.passed).count();
    report.push(
        "hemisphere_sign_inequality",
        ineq.passed,
        format!("{failures} of {} z samples violate the sign condition", zs.len()),
    );
    Ok(report)
}

pub fn property_suite(seed: u64, cases: usize) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport::new("property-suite", seed);

    let mut violation: f64 = 0.0;
    for d in 1..=12 {
        violation = violation.max(verify_clifford(&gamma_rep(d)?, 1e-13).max_violation());
    }
    report.push("clifford_relations", violation < 1e-13, format!("d = 1..12, max violation {violation:.2e}"));

    let mut dev: f64 = 0.0;
    for _ in 0..cases {
        let d = rng.gen_range(1..=8);
        let alpha = random_point(&mut rng, d, 3.0);
        dev = dev.max(linear_combination_spectrum_check(&gamma_rep(d)?, &alpha, 1e-10)?.max_deviation);
    }
    report.push("scalar_combination_spectrum", dev <= 1e-10, format!("max deviation {dev:.2e}"));

    let (mut lip, mut rad, mut close) = (f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for _ in 0..cases {
        let d = rng.gen_range(1..=4);
        let n = rng.gen_range(1..=5);
        let a = random_tuple(&mut rng, d, n)?;
        let ev = Evaluator::new(&a)?;
        let lambda = random_point(&mut rng, d, 3.0);
        let nu = random_point(&mut rng, d, 3.0);
        let (ml, mn) = (ev.mu_c(&lambda), ev.mu_c(&nu));
        let gap: f64 = lambda.iter().zip(&nu).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
        lip = lip.max((ml - mn).abs() - gap);
        let l0 = spectral_localizer(&a, &vec![0.0; d], ev.rep())?.spectral_norm();
        rad = rad.max((ml - norm(&lambda)).abs() - l0);
        let q = ev.mu_q(&lambda);
        close = close.max((ml * ml - q * q).abs() - commutator_bound(&a));
    }
    report.push("lipschitz", lip <= 1e-8, format!("max excess {lip:.2e} (slack 1e-8)"));
    report.push("radius_bound", rad <= 1e-8, format!("max excess {rad:.2e} (slack 1e-8)"));
    report.push("closeness_bound", close <= 1e-8, format!("max excess {close:.2e} (slack 1e-8)"));

    let mut cov: f64 = 0.0;
    for _ in 0..cases {
        let d = rng.gen_range(2..=4);
        let n = rng.gen_range(1..=5);
        let a = random_tuple(&mut rng, d, n)?;
        let u = random_orthogonal(&mut rng, d);
        let lambda = random_point(&mut rng, d, 2.0);
        let lhs = quadratic_pseudospectrum(&a.rotated(&u)?, &apply_orthogonal(&u, &lambda))?;
        cov = cov.max((lhs - quadratic_pseudospectrum(&a, &lambda)?).abs());
    }
    report.push("orthogonal_covariance", cov <= 1e-8, format!("max delta {cov:.2e} (slack 1e-8)"));

    let n = 32;
    let tuple = hemisphere(1.0, n)?;
    let mut rot: f64 = 0.0;
    let mut hypotheses = true;
    for _ in 0..cases.clamp(1, 100) {
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        let lambda = vec![rng.gen_range(-1.5..=1.5), rng.gen_range(-1.5..=1.5), rng.gen_range(-0.5..=1.5)];
        let (u, q) = hemisphere_rotation(n, theta);
        let r = symmetry_check(&tuple, &u, &q, &lambda, 1e-9)?;
        hypotheses &= r.hypothesis_met;
        rot = rot.max(r.max_delta());
    }
    report.push(
        "hemisphere_rotation",
        hypotheses && rot <= 1e-9,
        format!("hypotheses met {hypotheses}, max delta {rot:.2e} (tol 1e-9)"),
    );
    Ok(report)
}
