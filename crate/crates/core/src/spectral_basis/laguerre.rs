//! Generalized Laguerre polynomials `L_p^{(alpha)}`.

use super::zpoly::PolyScalar;
use crate::scalar::Real;

/// Evaluates `L_degree^{(alpha)}(t)` with the three-term recurrence
///
/// `p L_p = (2p - 1 + alpha - t) L_{p-1} - (p - 1 + alpha) L_{p-2}`,
/// seeded with `L_0 = 1`, `L_1 = 1 + alpha - t`.
pub fn laguerre_eval<T: Real>(degree: usize, alpha: usize, t: T) -> T {
    laguerre_pair(degree, T::from_count(alpha), t).0
}

/// Returns `(L_n^{(alpha)}(t), L_{n-1}^{(alpha)}(t))` for a real `alpha > -1`.
/// For `n = 0` the second entry is zero.
pub fn laguerre_pair<T: Real>(degree: usize, alpha: T, t: T) -> (T, T) {
    let mut prev = T::zero();
    let mut cur = T::one();
    for p in 1..=degree {
        let pf = T::from_count(p);
        let next = ((pf + pf - T::one() + alpha - t) * cur - (pf - T::one() + alpha) * prev) / pf;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Power-series coefficients `c_i` with `L_n^{(alpha)}(t) = sum_i c_i t^i`,
/// i.e. `c_i = (-1)^i C(n + alpha, n - i) / i!`.
pub fn laguerre_power_coefficients<T: PolyScalar>(degree: usize, alpha: usize) -> Vec<T> {
    let count = |n: usize| T::from_usize(n).expect("representable count");
    let n = degree;
    let mut coeffs = Vec::with_capacity(n + 1);
    // c_0 = C(n + alpha, n)
    let mut c0 = T::one();
    for i in 1..=n {
        c0 = c0 * count(alpha + i) / count(i);
    }
    coeffs.push(c0);
    for i in 0..n {
        let ratio = count(n - i) / (count(i + 1) * count(alpha + i + 1));
        let next = -coeffs[i].clone() * ratio;
        coeffs.push(next);
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_values() {
        assert_eq!(laguerre_eval(0, 7, 3.5f64), 1.0);
        assert_eq!(laguerre_eval(1, 2, 3.0f64), 0.0);
        assert!((laguerre_eval(2, 0, 2.0f64) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn power_coefficients_match_closed_forms() {
        // L_2^{(1)}(t) = 3 - 3t + t^2/2
        let c: Vec<f64> = laguerre_power_coefficients(2, 1);
        assert_eq!(c.len(), 3);
        assert!((c[0] - 3.0).abs() < 1e-15);
        assert!((c[1] + 3.0).abs() < 1e-15);
        assert!((c[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn pair_returns_previous_degree() {
        let (l3, l2) = laguerre_pair(3, 0.5f64, 1.25);
        assert!((l2 - laguerre_pair(2, 0.5, 1.25).0).abs() < 1e-15);
        assert!((l3 - laguerre_pair(3, 0.5, 1.25).0).abs() < 1e-15);
        assert_eq!(laguerre_pair(0, 0.0f64, 2.0), (1.0, 0.0));
    }

    #[test]
    fn works_in_single_precision() {
        let v: f32 = laguerre_eval(2, 0, 2.0);
        assert!((v + 1.0).abs() < 1e-6);
    }
}
