//! Polynomials in `(z, z̄)` multiplying the Gaussian `exp(-B z z̄ / 2)`.
//!
//! Every Landau kernel has the form `P(z, z̄) exp(-B|z|^2/2)` with `z = x + iy`.
//! Differential operators act on such products through closed-form rules on
//! the coefficients of `P`, so the Hamiltonian can be applied with no
//! discretization error.

use std::fmt::Debug;
use std::ops::Neg;

use num_complex::Complex;
use num_traits::{Float, FromPrimitive, Num};

/// Coefficient field for polynomial manipulation: the solver's floats or
/// exact rationals.
pub trait PolyScalar: Clone + PartialEq + Num + Neg<Output = Self> + FromPrimitive + Debug + Send + Sync {}

impl<C> PolyScalar for C where C: Clone + PartialEq + Num + Neg<Output = C> + FromPrimitive + Debug + Send + Sync {}

type Cplx<C> = Complex<C>;

#[inline]
fn cplx<C: PolyScalar>(re: C, im: C) -> Cplx<C> {
    Complex::new(re, im)
}

#[inline]
fn real<C: PolyScalar>(re: C) -> Cplx<C> {
    Complex::new(re, C::zero())
}

#[inline]
fn lit<C: PolyScalar>(x: f64) -> C {
    C::from_f64(x).expect("representable literal")
}

#[inline]
fn count<C: PolyScalar>(n: usize) -> C {
    C::from_usize(n).expect("representable count")
}

/// Dense polynomial `sum_{a,b} c[a][b] z^a z̄^b` stored in a square array.
#[derive(Debug, Clone, PartialEq)]
pub struct ZPoly<T> {
    dim: usize,
    coeffs: Vec<Cplx<T>>,
}

impl<T: PolyScalar> ZPoly<T> {
    pub fn zero(dim: usize) -> Self {
        let dim = dim.max(1);
        Self {
            dim,
            coeffs: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    /// Single monomial `c z^a z̄^b`.
    pub fn monomial(a: usize, b: usize, c: Cplx<T>) -> Self {
        let mut p = Self::zero(a.max(b) + 1);
        *p.at_mut(a, b) = c;
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeff(&self, a: usize, b: usize) -> Cplx<T> {
        self.get(a, b).cloned().unwrap_or_else(|| real(T::zero()))
    }

    fn get(&self, a: usize, b: usize) -> Option<&Cplx<T>> {
        (a < self.dim && b < self.dim).then(|| &self.coeffs[a * self.dim + b])
    }

    fn at_mut(&mut self, a: usize, b: usize) -> &mut Cplx<T> {
        &mut self.coeffs[a * self.dim + b]
    }

    fn grown(&self, dim: usize) -> Self {
        let mut out = Self::zero(dim.max(self.dim));
        for a in 0..self.dim {
            for b in 0..self.dim {
                *out.at_mut(a, b) = self.coeff(a, b);
            }
        }
        out
    }

    /// Highest total degree `a + b` carrying a nonzero coefficient.
    pub fn total_degree(&self) -> Option<usize> {
        let zero = real(T::zero());
        let mut best = None;
        for a in 0..self.dim {
            for b in 0..self.dim {
                if self.coeffs[a * self.dim + b] != zero {
                    best = Some(best.map_or(a + b, |d: usize| d.max(a + b)));
                }
            }
        }
        best
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.grown(other.dim);
        for a in 0..other.dim {
            for b in 0..other.dim {
                let v = out.at_mut(a, b);
                *v = v.clone() + other.coeff(a, b);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(real(-T::one())))
    }

    pub fn scale(&self, c: Cplx<T>) -> Self {
        Self {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|v| v.clone() * c.clone()).collect(),
        }
    }

    pub fn mul_z(&self) -> Self {
        let mut out = Self::zero(self.dim + 1);
        for a in 0..self.dim {
            for b in 0..self.dim {
                *out.at_mut(a + 1, b) = self.coeff(a, b);
            }
        }
        out
    }

    pub fn mul_zbar(&self) -> Self {
        let mut out = Self::zero(self.dim + 1);
        for a in 0..self.dim {
            for b in 0..self.dim {
                *out.at_mut(a, b + 1) = self.coeff(a, b);
            }
        }
        out
    }

    /// Wirtinger derivative `∂/∂z`.
    pub fn d_z(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for a in 1..self.dim {
            for b in 0..self.dim {
                *out.at_mut(a - 1, b) = self.coeff(a, b) * count::<T>(a);
            }
        }
        out
    }

    /// Wirtinger derivative `∂/∂z̄`.
    pub fn d_zbar(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for a in 0..self.dim {
            for b in 1..self.dim {
                *out.at_mut(a, b - 1) = self.coeff(a, b) * count::<T>(b);
            }
        }
        out
    }

    /// Value of the bare polynomial at `x + iy` (Horner in `z`, then `z̄`).
    pub fn eval(&self, x: T, y: T) -> Cplx<T> {
        let z = cplx(x, y);
        let zb = z.conj();
        let mut acc = real(T::zero());
        for a in (0..self.dim).rev() {
            let mut row = real(T::zero());
            for b in (0..self.dim).rev() {
                row = row * zb.clone() + self.coeff(a, b);
            }
            acc = acc * z.clone() + row;
        }
        acc
    }
}

/// Differential operators acting on `P · exp(-B z z̄ / 2)`, expressed on `P`.
#[derive(Debug, Clone, Copy)]
pub struct GaussianFrame<T> {
    pub b: T,
}

impl<T: PolyScalar> GaussianFrame<T> {
    /// `∂_z (P G) / G = ∂_z P - (B/2) z̄ P`.
    pub fn d_z(&self, p: &ZPoly<T>) -> ZPoly<T> {
        let half_b = real(self.b.clone() / lit::<T>(2.0));
        p.d_z().sub(&p.mul_zbar().scale(half_b))
    }

    /// `∂_z̄ (P G) / G = ∂_z̄ P - (B/2) z P`.
    pub fn d_zbar(&self, p: &ZPoly<T>) -> ZPoly<T> {
        let half_b = real(self.b.clone() / lit::<T>(2.0));
        p.d_zbar().sub(&p.mul_z().scale(half_b))
    }

    /// `Δ = 4 ∂_z ∂_z̄`.
    pub fn laplacian(&self, p: &ZPoly<T>) -> ZPoly<T> {
        self.d_z(&self.d_zbar(p)).scale(real(lit::<T>(4.0)))
    }

    /// `r^2 = z z̄`.
    pub fn radius_sq(&self, p: &ZPoly<T>) -> ZPoly<T> {
        p.mul_z().mul_zbar()
    }

    /// `∂_θ = x ∂_y - y ∂_x = i (z ∂_z - z̄ ∂_z̄)`.
    pub fn d_theta(&self, p: &ZPoly<T>) -> ZPoly<T> {
        let rot = self.d_z(p).mul_z().sub(&self.d_zbar(p).mul_zbar());
        rot.scale(cplx(T::zero(), T::one()))
    }

    /// Landau Hamiltonian in symmetric gauge:
    /// `H = ½(-Δ + B² r²) + i B ∂_θ`.
    pub fn hamiltonian(&self, p: &ZPoly<T>) -> ZPoly<T> {
        let b = self.b.clone();
        let kinetic = self
            .laplacian(p)
            .scale(real(-T::one()))
            .add(&self.radius_sq(p).scale(real(b.clone() * b.clone())))
            .scale(real(lit::<T>(0.5)));
        kinetic.add(&self.d_theta(p).scale(cplx(T::zero(), b)))
    }
}

impl<T: PolyScalar + Float> GaussianFrame<T> {
    /// `P(x, y) · exp(-B(x² + y²)/2)`.
    pub fn eval(&self, p: &ZPoly<T>, x: T, y: T) -> Cplx<T> {
        let g = (-self.b * (x * x + y * y) / lit::<T>(2.0)).exp();
        p.eval(x, y) * g
    }
}
