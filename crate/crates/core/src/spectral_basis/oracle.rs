//! Exact evaluation of `H e` at binary floating-point points.
//!
//! The Hamiltonian image of a kernel is `Q(z, z̄) exp(-B|z|²/2)` with `Q`
//! having rational coefficients (B is a binary float, hence rational). A
//! point `(x, y)` is `Z / 2^s` for a Gaussian integer `Z`, so `Q(z, z̄)` is a
//! single rational number computed with integer arithmetic and rounded once.

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::zpoly::GaussianFrame;
use super::{kernel_polynomial, FieldStrength, ModeIndex};
use crate::scalar::{cplx, Cplx, Real};

/// Terms `z^d R^c` (or `z̄^{-d} R^c`) with `R = z z̄`, sharing one `d`.
#[derive(Debug, Clone)]
struct Shell {
    d: isize,
    // (c, re, im) sorted by ascending c; numerators over the common denominator
    terms: Vec<(usize, BigInt, BigInt)>,
}

/// `H e_mode` prepared for repeated exact evaluation.
#[derive(Debug, Clone)]
pub struct HamiltonianOracle<T> {
    field: FieldStrength<T>,
    shells: Vec<Shell>,
    denom: BigInt,
    top_degree: usize,
}

fn dyadic(v: f64) -> (BigInt, i32) {
    use num_traits::Float;
    let (mantissa, exponent, sign) = Float::integer_decode(v);
    if mantissa == 0 {
        return (BigInt::zero(), 0);
    }
    (BigInt::from(mantissa) * BigInt::from(sign), i32::from(exponent))
}

impl<T: Real> HamiltonianOracle<T> {
    pub fn new(mode: ModeIndex, field: FieldStrength<T>) -> Self {
        let b = BigRational::from_float(field.value().as_f64()).expect("finite field strength");
        let frame = GaussianFrame { b: b.clone() };
        let h = frame.hamiltonian(&kernel_polynomial(mode, b));
        let dim = h.dim();
        let mut denom = BigInt::one();
        let mut nonzero = Vec::new();
        for a in 0..dim {
            for c in 0..dim {
                let v = h.coeff(a, c);
                if !v.re.is_zero() || !v.im.is_zero() {
                    denom = denom.lcm(v.re.denom()).lcm(v.im.denom());
                    nonzero.push((a, c, v));
                }
            }
        }
        let scale = |q: &BigRational| q.numer() * (&denom / q.denom());
        let mut shells: Vec<Shell> = Vec::new();
        let mut top_degree = 0;
        for (a, b, v) in nonzero {
            let d = a as isize - b as isize;
            top_degree = top_degree.max(a + b);
            let term = (a.min(b), scale(&v.re), scale(&v.im));
            match shells.iter_mut().find(|s| s.d == d) {
                Some(s) => s.terms.push(term),
                None => shells.push(Shell { d, terms: vec![term] }),
            }
        }
        for s in &mut shells {
            s.terms.sort_by_key(|t| t.0);
        }
        Self {
            field,
            shells,
            denom,
            top_degree,
        }
    }

    /// `(H e_mode)(point)`.
    pub fn apply(&self, point: (T, T)) -> Cplx<T> {
        let (x, y) = point;
        let (mx, ex) = dyadic(x.as_f64());
        let (my, ey) = dyadic(y.as_f64());
        // z = (X + iY) / 2^s with X, Y integers
        let s = (-ex).max(-ey).max(0) as usize;
        let lift = |m: BigInt, e: i32| -> BigInt {
            let shift = e + s as i32;
            if shift >= 0 {
                m << shift as usize
            } else {
                m >> (-shift) as usize
            }
        };
        let zx = lift(mx, ex);
        let zy = lift(my, ey);
        let r = &zx * &zx + &zy * &zy;

        let mut acc = Complex::new(BigInt::zero(), BigInt::zero());
        for shell in &self.shells {
            let c_top = shell.terms.last().map_or(0, |t| t.0);
            // Σ n_c R^c 2^{2s(c_top - c)}
            let mut sum = Complex::new(BigInt::zero(), BigInt::zero());
            let mut next = c_top;
            for (c, re, im) in shell.terms.iter().rev() {
                while next > *c {
                    sum = Complex::new(&sum.re * &r, &sum.im * &r);
                    next -= 1;
                }
                let shift = 2 * s * (c_top - c);
                sum = Complex::new(sum.re + (re << shift), sum.im + (im << shift));
            }
            for _ in 0..next {
                sum = Complex::new(&sum.re * &r, &sum.im * &r);
            }
            let zim = if shell.d >= 0 { zy.clone() } else { -zy.clone() };
            for _ in 0..shell.d.unsigned_abs() {
                sum = Complex::new(&sum.re * &zx - &sum.im * &zim, &sum.re * &zim + &sum.im * &zx);
            }
            let degree = shell.d.unsigned_abs() + 2 * c_top;
            let shift = s * (self.top_degree - degree);
            acc = Complex::new(acc.re + (sum.re << shift), acc.im + (sum.im << shift));
        }
        let den = &self.denom << (s * self.top_degree);
        let round = |n: BigInt| BigRational::new_raw(n, den.clone()).to_f64().unwrap_or(f64::NAN);
        let gauss = (-self.field.value() * (x * x + y * y) / T::lit(2.0)).exp();
        cplx(T::lit(round(acc.re)), T::lit(round(acc.im))) * gauss
    }
}
