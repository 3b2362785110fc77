//! Acceptance suite. Runs every criterion, prints one line each, and exits
//! nonzero if any fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use landau_wave::h_fourier::quadrature_l2_norm;
use landau_wave::harness::{gaussian_bump, project_field, StudyRow};
use landau_wave::io::{write_solution_csv, write_trajectories_csv, Provenance};
use landau_wave::mode_evolution::{evolve_mode_with, EvolveOptions};
use landau_wave::{
    basis_eval, constant_stability_study, enumerate_modes, forward_transform, gram_matrix, grid_for_table,
    inverse_transform, mode_solve_const, plancherel_norm, solve_cauchy, verify_estimate, CauchyProblem, FieldStrength,
    HamiltonianOracle, ModeTable, SpectralCoefficients, SpeedKind, SpeedProfile,
};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn table(n: usize, k: usize, b: f64) -> Arc<ModeTable<f64>> {
    Arc::new(enumerate_modes(n, k, FieldStrength::new(b).unwrap()).unwrap())
}

fn random_coefficients(t: &Arc<ModeTable<f64>>, rng: &mut ChaCha8Rng) -> SpectralCoefficients<f64> {
    let values = (0..t.len())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    SpectralCoefficients::from_values(t.clone(), values).unwrap()
}

fn sine_profile(horizon: f64) -> SpeedProfile<f64> {
    SpeedProfile::new(
        SpeedKind::SinePerturbed {
            base: 2.0,
            amplitude: 1.0,
            frequency: 1.0,
        },
        horizon,
    )
    .unwrap()
}

fn uniform_times(horizon: f64, count: usize) -> Vec<f64> {
    (0..=count).map(|i| horizon * i as f64 / count as f64).collect()
}

fn orthonormality() -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    pool.install(|| {
        let start = Instant::now();
        let mut worst: f64 = 0.0;
        let mut modes = 0;
        for b in [1.0, 0.5, 2.0] {
            let t = table(8, 8, b);
            let grid = grid_for_table(&t).unwrap();
            let gram = gram_matrix(&t, &grid).unwrap();
            worst = worst.max(gram.max_off_diagonal()).max(gram.max_diagonal_deviation());
            modes = t.len();
        }
        let secs = start.elapsed().as_secs_f64();
        outcome(
            worst <= 1e-8 && secs < 30.0,
            format!("{modes} modes, max |G - I| = {worst:.3e}, {secs:.2} s single-threaded for three fields"),
        )
    })
}

fn eigenrelation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for b in [1.0f64, 0.5, 2.0] {
        let field = FieldStrength::new(b).unwrap();
        let t = table(8, 8, b);
        let radius = 4.0 / b.sqrt();
        let points: Vec<(f64, f64)> = (0..200)
            .map(|_| {
                let r = radius * rng.gen::<f64>().sqrt();
                let th = rng.gen_range(0.0..std::f64::consts::TAU);
                (r * th.cos(), r * th.sin())
            })
            .collect();
        for m in t.modes() {
            let oracle = HamiltonianOracle::new(m.index, field);
            for &p in &points {
                let e = basis_eval(m.index, p, field);
                let res = (oracle.apply(p) - e * m.eigenvalue).norm() / (1.0 + e.norm());
                worst = worst.max(res);
            }
        }
    }
    outcome(
        worst <= 1e-10,
        format!("max |He - λe| / (1 + |e|) = {worst:.3e} over 200 points, B in {{1, 0.5, 2}}"),
    )
}

fn plancherel_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_trip: f64 = 0.0;
    let mut worst_parseval: f64 = 0.0;
    for b in [1.0, 0.7, 1.9] {
        let t = table(8, 8, b);
        let grid = grid_for_table(&t).unwrap();
        let coeffs = random_coefficients(&t, &mut rng);
        let samples = inverse_transform(&coeffs, grid.points());
        let back = forward_transform(&samples, &grid, &t).unwrap();
        let again = inverse_transform(&back, grid.points());
        let diff: Vec<Complex64> = again.iter().zip(&samples).map(|(a, b)| a - b).collect();
        let norm = quadrature_l2_norm(&samples, &grid);
        worst_trip = worst_trip.max(quadrature_l2_norm(&diff, &grid) / norm);
        let p = plancherel_norm(&coeffs);
        worst_parseval = worst_parseval.max((p * p - norm * norm).abs() / (1.0 + p * p));
    }
    outcome(
        worst_trip <= 1e-8 && worst_parseval <= 1e-8,
        format!("round trip rel L2 = {worst_trip:.3e}, Parseval mismatch = {worst_parseval:.3e}"),
    )
}

fn terminal_error(lambda: f64, dt: f64) -> f64 {
    let profile = SpeedProfile::constant(1.0, 1.0).unwrap();
    let v0 = Complex64::new(1.0, 0.25);
    let v1 = Complex64::new(-0.5, 0.75);
    let traj = evolve_mode_with(lambda, v0, v1, &profile, &[1.0], dt, EvolveOptions { cap_step: false }).unwrap();
    let end = traj.samples[0].state;
    let (v, dv) = mode_solve_const(lambda, 1.0, v0, v1, 1.0);
    ((end.value(lambda) - v).norm_sqr() * lambda + (end.velocity() - dv).norm_sqr()).sqrt()
}

fn constant_coefficient_oracle() -> Outcome {
    let b = 1.0;
    let mut worst: f64 = 0.0;
    let mut factors = Vec::new();
    for level in 0..=16 {
        let lambda = b * (2 * level + 1) as f64;
        worst = worst.max(terminal_error(lambda, 1e-3));
        if level % 4 == 0 {
            // phase per step 0.2 keeps the truncation error well above rounding
            let h = 0.2 / lambda.sqrt();
            factors.push(terminal_error(lambda, h) / terminal_error(lambda, h / 2.0));
        }
    }
    let lo = factors.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = factors.iter().cloned().fold(0.0, f64::max);
    outcome(
        worst <= 1e-8 && lo >= 14.0 && hi <= 18.0,
        format!("max terminal error = {worst:.3e} for λ ≤ 33, halving factors in [{lo:.2}, {hi:.2}]"),
    )
}

fn energy_law() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let t = table(5, 5, 1.0);
    let u0 = random_coefficients(&t, &mut rng);
    let u1 = random_coefficients(&t, &mut rng);
    let profile = sine_profile(3.0);
    let problem = CauchyProblem::new(u0, u1, profile, 0.0, uniform_times(3.0, 60)).unwrap();
    let record = solve_cauchy(&problem, 1e-3).unwrap();
    let first = &record.snapshots[0];
    let mut violations = 0;
    for snap in &record.snapshots {
        for (e, e0) in snap.mode_energy.iter().zip(&first.mode_energy) {
            if *e > e0 * snap.t.exp() * (1.0 + 1e-9) {
                violations += 1;
            }
        }
    }
    let passed = violations == 0 && record.gronwall_step_violations == 0 && t.len() >= 50;
    outcome(
        passed,
        format!(
            "{} modes, {violations} violations of E(t) <= E(0)e^t, {} step violations",
            t.len(),
            record.gronwall_step_violations
        ),
    )
}

fn gaussian_problem(t: &Arc<ModeTable<f64>>, profile: SpeedProfile<f64>, s: f64) -> CauchyProblem<f64> {
    let u0 = project_field(gaussian_bump(0.5, 0.0, 1.0), t).unwrap();
    let u1 = project_field(gaussian_bump(-0.3, 0.4, 0.8), t).unwrap();
    let horizon = profile.horizon();
    CauchyProblem::new(u0, u1, profile, s, uniform_times(horizon, 30)).unwrap()
}

fn wellposedness_estimate() -> Outcome {
    let t = table(12, 12, 1.0);
    let mut details = Vec::new();
    let mut passed = true;
    for s in [-1.0, 0.0, 1.0] {
        let sine = solve_cauchy(&gaussian_problem(&t, sine_profile(3.0), s), 1e-3).unwrap();
        let report = verify_estimate(&sine);
        passed &= report.passed;
        let flat = solve_cauchy(
            &gaussian_problem(&t, SpeedProfile::constant(1.0, 3.0).unwrap(), s),
            1e-3,
        )
        .unwrap();
        let sup_flat = flat.sup_ratio();
        passed &= sup_flat <= 1.0 + 1e-6;
        details.push(format!(
            "s={s}: sup R = {:.4} <= {:.4}, a=1 sup R - 1 = {:.1e}",
            report.sup_ratio,
            report.certificate,
            sup_flat - 1.0
        ));
    }
    outcome(passed, details.join("; "))
}

fn constant_independence() -> Outcome {
    let caps = [4, 8, 16];
    let spread = |rows: &[StudyRow<f64>]| {
        let lo = rows.iter().map(|r| r.sup_ratio).fold(f64::INFINITY, f64::min);
        let hi = rows.iter().map(|r| r.sup_ratio).fold(0.0, f64::max);
        (hi - lo) / lo
    };
    let mut details = Vec::new();
    let mut passed = true;
    for (name, profile) in [
        ("sine", sine_profile(3.0)),
        ("const", SpeedProfile::constant(1.0, 3.0).unwrap()),
    ] {
        let rows = constant_stability_study(&caps, 1e-3, |n| {
            Ok(gaussian_problem(&table(n, n, 1.0), profile.clone(), 0.0))
        })
        .unwrap();
        let v = spread(&rows);
        passed &= v < 0.05 && rows.iter().all(|r| r.passed);
        let sups: Vec<String> = rows.iter().map(|r| format!("{:.5}", r.sup_ratio)).collect();
        details.push(format!(
            "{name}: sup R = [{}], spread {:.2}%",
            sups.join(", "),
            100.0 * v
        ));
    }
    outcome(passed, details.join("; "))
}

fn solve_bytes() -> Vec<u8> {
    let t = table(8, 8, 1.0);
    let problem = gaussian_problem(&t, sine_profile(2.0), 0.5);
    let record = solve_cauchy(&problem, 1e-3).unwrap();
    let prov: Provenance = [("run".to_string(), "determinism".to_string())].into_iter().collect();
    let mut out = Vec::new();
    write_solution_csv(&mut out, &record, &prov).unwrap();
    write_trajectories_csv(&mut out, &record, &prov).unwrap();
    out
}

fn determinism() -> Outcome {
    let a = solve_bytes();
    let b = solve_bytes();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let c = pool.install(solve_bytes);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let d = pool.install(solve_bytes);
    outcome(
        a == b && c == d,
        format!(
            "{} bytes per run, default pool identical: {}, 3-thread pool identical: {}",
            a.len(),
            a == b,
            c == d
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("orthonormality", orthonormality),
        ("eigenrelation", eigenrelation),
        ("plancherel and round trip", plancherel_round_trip),
        ("constant-coefficient oracle", constant_coefficient_oracle),
        ("energy law", energy_law),
        ("well-posedness estimate", wellposedness_estimate),
        ("constant independence", constant_independence),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!(
            "[{tag}] criterion {} ({name}): {} [{:.1} s]",
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
        if !o.passed {
            failures += 1;
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
