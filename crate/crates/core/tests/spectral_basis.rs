use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use landau_wave::spectral_basis::{
    basis_eval, basis_norm_sq, enumerate_modes, hamiltonian_apply_exact, laguerre_eval, mode_eigenvalue, FieldStrength,
    HamiltonianOracle, ModeIndex,
};

/// The finite sum `Σ_k (-1)^k C(n+α, n-k) t^k / k!` in exact rational arithmetic.
fn laguerre_exact(n: usize, alpha: usize, t: f64) -> f64 {
    let t = BigRational::from_float(t).unwrap();
    let binom = |top: usize, k: usize| -> BigInt {
        let mut acc = BigInt::one();
        for i in 0..k {
            acc = acc * BigInt::from(top - i) / BigInt::from(i + 1);
        }
        acc
    };
    let mut sum = BigRational::zero();
    let mut t_pow = BigRational::one();
    let mut fact = BigInt::one();
    for k in 0..=n {
        if k > 0 {
            t_pow = &t_pow * &t;
            fact *= BigInt::from(k);
        }
        let term = BigRational::new(binom(n + alpha, n - k), fact.clone()) * &t_pow;
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum.to_f64().unwrap()
}

#[test]
fn laguerre_recurrence_matches_exact_sum() {
    let mut worst = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in 0..=20 {
        for alpha in 0..=20 {
            for _ in 0..6 {
                let t: f64 = rng.gen_range(0.0..50.0);
                let exact = laguerre_exact(p, alpha, t);
                let got = laguerre_eval(p, alpha, t);
                // The recurrence loses digits only near a root; measure against
                // the size of the intermediate values of the same degree.
                let scale = exact.abs().max(laguerre_envelope(p, alpha, t));
                let rel = (got - exact).abs() / scale;
                worst = worst.max(rel);
            }
        }
    }
    assert!(worst <= 1e-12, "worst relative error {worst}");
}

/// `max_{k ≤ p} |L_k^{(α)}(t)|`, the magnitude the recurrence carries.
fn laguerre_envelope(p: usize, alpha: usize, t: f64) -> f64 {
    (0..=p).map(|k| laguerre_eval(k, alpha, t).abs()).fold(0.0, f64::max)
}

#[test]
fn laguerre_spot_values() {
    assert_eq!(laguerre_exact(1, 2, 3.0), 0.0);
    assert_eq!(laguerre_exact(2, 0, 2.0), -1.0);
    assert_eq!(laguerre_eval(0, 7, 3.5), 1.0);
}

/// `2π ∫_0^R r |kernel(r, 0)|² dr` by composite Simpson in `r`.
fn radial_norm_sq(mode: ModeIndex, field: FieldStrength<f64>) -> f64 {
    let b = field.value();
    let r_max = (160.0 / b).sqrt();
    let panels = 40_000;
    let h = r_max / panels as f64;
    let f = |r: f64| r * basis_eval(mode, (r, 0.0), field).norm_sqr();
    let mut acc = f(0.0) + f(r_max);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(i as f64 * h);
    }
    2.0 * PI * acc * h / 3.0
}

#[test]
fn norms_match_numerical_integration() {
    for b in [1.0, 0.5, 2.5] {
        let field = FieldStrength::new(b).unwrap();
        let table = enumerate_modes(8, 8, field).unwrap();
        for m in table.modes() {
            let closed = basis_norm_sq(m.index, field).unwrap();
            let numeric = radial_norm_sq(m.index, field);
            let rel = (closed - numeric).abs() / closed;
            assert!(rel < 1e-8, "B = {b} {}: {closed} vs {numeric}", m.index);
            assert_eq!(m.norm_sq, closed);
        }
    }
}

#[test]
fn norm_examples() {
    let f = |b| FieldStrength::new(b).unwrap();
    assert!((basis_norm_sq(ModeIndex::f1(0, 0), f(2.0)).unwrap() - PI / 2.0).abs() < 1e-15);
    assert!((radial_norm_sq(ModeIndex::f1(1, 0), f(1.0)) - PI).abs() < 1e-9);
    assert!((radial_norm_sq(ModeIndex::f2(1, 1), f(1.0)) - 2.0 * PI).abs() < 1e-9);
}

#[test]
fn eigenrelation_holds_for_all_modes() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for b in [1.0f64, 0.5, 2.0] {
        let field = FieldStrength::new(b).unwrap();
        let table = enumerate_modes(8, 8, field).unwrap();
        let radius = 4.0 / b.sqrt();
        let points: Vec<(f64, f64)> = (0..200)
            .map(|_| {
                let r = radius * rng.gen::<f64>().sqrt();
                let th = rng.gen_range(0.0..2.0 * PI);
                (r * th.cos(), r * th.sin())
            })
            .collect();
        for m in table.modes() {
            assert_eq!(m.eigenvalue, mode_eigenvalue(m.index, field));
            let oracle = HamiltonianOracle::new(m.index, field);
            for &p in &points {
                let e = basis_eval(m.index, p, field);
                let he = oracle.apply(p);
                let res = (he - e * m.eigenvalue).norm();
                assert!(res <= 1e-10 * (1.0 + e.norm()), "B = {b} {} at {p:?}: {res}", m.index);
            }
        }
    }
}

#[test]
fn family_one_eigenvalue_is_exact() {
    let field = FieldStrength::new(0.37).unwrap();
    for k in 0..10 {
        for n in 0..10 {
            assert_eq!(mode_eigenvalue(ModeIndex::f1(k, n), field), 0.37 * (1 + 2 * n) as f64);
        }
    }
}

/// Independent check of the polynomial route: the Hamiltonian
/// `½((i∂x − By)² + (i∂y + Bx)²)` applied by central finite differences.
fn hamiltonian_fd(mode: ModeIndex, p: (f64, f64), field: FieldStrength<f64>) -> Complex<f64> {
    let b = field.value();
    let h = 1e-3;
    let f = |x: f64, y: f64| basis_eval(mode, (x, y), field);
    let (x, y) = p;
    let fxx = (f(x + h, y) - f(x, y) * 2.0 + f(x - h, y)) / (h * h);
    let fyy = (f(x, y + h) - f(x, y) * 2.0 + f(x, y - h)) / (h * h);
    let fx = (f(x + h, y) - f(x - h, y)) / (2.0 * h);
    let fy = (f(x, y + h) - f(x, y - h)) / (2.0 * h);
    let i = Complex::new(0.0, 1.0);
    let lap = fxx + fyy;
    let rot = fy * x - fx * y;
    (-lap + f(x, y) * (b * b * (x * x + y * y))) * 0.5 + i * rot * b
}

#[test]
fn exact_hamiltonian_agrees_with_finite_differences() {
    let field = FieldStrength::new(1.0).unwrap();
    for m in [
        ModeIndex::f1(2, 1),
        ModeIndex::f2(1, 1),
        ModeIndex::f2(0, 3),
        ModeIndex::f1(0, 4),
    ] {
        for p in [(0.3, -0.2), (1.1, 0.7), (-0.5, 1.4)] {
            let exact = hamiltonian_apply_exact(m, p, field);
            let fd = hamiltonian_fd(m, p, field);
            assert!(
                (exact - fd).norm() < 1e-5 * (1.0 + exact.norm()),
                "{m} at {p:?}: {exact} vs {fd}"
            );
        }
    }
}

#[test]
fn family_two_rayleigh_quotient() {
    // ⟨H e, e⟩ / ⟨e, e⟩ for (F2, (1, 1)) by radial Simpson: expect 5.
    let field = FieldStrength::new(1.0).unwrap();
    let m = ModeIndex::f2(1, 1);
    let panels = 20_000;
    let r_max = 12.0;
    let h = r_max / panels as f64;
    let mut num = Complex::new(0.0, 0.0);
    let mut den = 0.0;
    for i in 0..=panels {
        let w = if i == 0 || i == panels {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let r = i as f64 * h;
        let e = basis_eval(m, (r, 0.0), field);
        num += hamiltonian_apply_exact(m, (r, 0.0), field) * e.conj() * (w * r);
        den += w * r * e.norm_sqr();
    }
    assert!((num / den - Complex::new(5.0, 0.0)).norm() < 1e-10);
}

#[test]
fn enumeration_matches_brute_force() {
    let field = FieldStrength::new(1.0).unwrap();
    for (n_cap, k_cap) in [(0, 0), (1, 1), (2, 0), (3, 5), (6, 2)] {
        let table = enumerate_modes(n_cap, k_cap, field).unwrap();
        let mut expected = Vec::new();
        for a in 0..=20 {
            for b in 0..=20 {
                if a <= k_cap && b <= n_cap {
                    expected.push(ModeIndex::f1(a, b));
                }
                if b >= 1 && a + b <= n_cap {
                    expected.push(ModeIndex::f2(a, b));
                }
            }
        }
        assert_eq!(table.len(), expected.len());
        for idx in &expected {
            assert!(table.position(idx).is_some());
        }
        for w in table.modes().windows(2) {
            assert!(w[0].eigenvalue <= w[1].eigenvalue);
            assert!(w[0].bracket * w[0].bracket - w[0].eigenvalue <= 1e-12 * w[0].eigenvalue);
        }
    }
}
