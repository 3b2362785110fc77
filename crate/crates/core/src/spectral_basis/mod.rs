//! Landau eigenbasis in the symmetric gauge.
//!
//! Two kernel families are used, with `z = x + iy`, `t = B|z|²`:
//!
//! * `F1 (k, n)`: `exp(-t/2) z^k L_n^{(k)}(t)`, Landau level `n`;
//! * `F2 (j, n)`, `n ≥ 1`: `exp(-t/2) z̄^n L_j^{(n)}(t)`, Landau level `j + n`.
//!
//! Kernels are left unnormalized; [`ModeRecord`] carries the exact squared
//! L² norm so downstream code works with unit-norm modes.

mod laguerre;
mod oracle;
pub mod zpoly;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use laguerre::{laguerre_eval, laguerre_pair, laguerre_power_coefficients};
use num_complex::Complex;
pub use oracle::HamiltonianOracle;
use zpoly::{PolyScalar, ZPoly};

use crate::error::{Error, Result};
use crate::scalar::{cplx, Cplx, Real};

/// Magnetic field parameter `B > 0` (the physical field strength is `2B`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldStrength<T>(T);

impl<T: Real> FieldStrength<T> {
    pub fn new(b: T) -> Result<Self> {
        if b.is_finite() && b > T::zero() {
            Ok(Self(b))
        } else {
            Err(Error::InvalidField(b.as_f64()))
        }
    }

    #[inline]
    pub fn value(self) -> T {
        self.0
    }
}

/// Kernel family tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Family {
    F1,
    F2,
}

impl From<Family> for u8 {
    fn from(f: Family) -> u8 {
        match f {
            Family::F1 => 1,
            Family::F2 => 2,
        }
    }
}

impl TryFrom<u8> for Family {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Family::F1),
            2 => Ok(Family::F2),
            other => Err(format!("family must be 1 or 2, got {other}")),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u8::from(*self))
    }
}

/// One basis mode: family plus lattice index `(xi1, xi2)`.
///
/// For `F1` the pair is `(k, n)`; for `F2` it is `(j, n)` with `n ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawModeIndex")]
pub struct ModeIndex {
    pub family: Family,
    pub xi1: usize,
    pub xi2: usize,
}

#[derive(Deserialize)]
struct RawModeIndex {
    family: Family,
    xi1: usize,
    xi2: usize,
}

impl TryFrom<RawModeIndex> for ModeIndex {
    type Error = Error;

    fn try_from(raw: RawModeIndex) -> Result<Self> {
        ModeIndex::new(raw.family, raw.xi1, raw.xi2)
    }
}

impl ModeIndex {
    pub fn new(family: Family, xi1: usize, xi2: usize) -> Result<Self> {
        if family == Family::F2 && xi2 == 0 {
            return Err(Error::InvalidMode(format!(
                "family 2 requires xi2 >= 1, got ({xi1}, {xi2})"
            )));
        }
        Ok(Self { family, xi1, xi2 })
    }

    pub fn f1(k: usize, n: usize) -> Self {
        Self {
            family: Family::F1,
            xi1: k,
            xi2: n,
        }
    }

    /// Panics if `n == 0`; use [`ModeIndex::new`] for unchecked input.
    pub fn f2(j: usize, n: usize) -> Self {
        Self::new(Family::F2, j, n).expect("family-2 mode with n >= 1")
    }

    /// Landau level `ℓ` with eigenvalue `B(2ℓ + 1)`.
    pub fn level(&self) -> usize {
        match self.family {
            Family::F1 => self.xi2,
            Family::F2 => self.xi1 + self.xi2,
        }
    }

    /// Angular momentum (eigenvalue of `-i ∂_θ`).
    pub fn angular_momentum(&self) -> i64 {
        match self.family {
            Family::F1 => self.xi1 as i64,
            Family::F2 => -(self.xi2 as i64),
        }
    }

    /// `(degree, alpha)` of the Laguerre factor.
    fn laguerre_params(&self) -> (usize, usize) {
        match self.family {
            Family::F1 => (self.xi2, self.xi1),
            Family::F2 => (self.xi1, self.xi2),
        }
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(F{}, {}, {})", self.family, self.xi1, self.xi2)
    }
}

/// Unnormalized kernel value at `(x, y)`.
pub fn basis_eval<T: Real>(mode: ModeIndex, point: (T, T), field: FieldStrength<T>) -> Cplx<T> {
    let b = field.value();
    let (x, y) = point;
    let r2 = x * x + y * y;
    let t = b * r2;
    let gauss = (-t / T::lit(2.0)).exp();
    let (degree, alpha) = mode.laguerre_params();
    let lag = laguerre_eval(degree, alpha, t);
    let phase = match mode.family {
        Family::F1 => cplx(x, y),
        Family::F2 => cplx(x, -y),
    };
    phase.powu(alpha as u32) * (gauss * lag)
}

/// Exact squared L²(ℝ²) norm of the unnormalized kernel:
/// `π B^{-(α+1)} (p + α)! / p!` with `(p, α)` the Laguerre degree and order.
pub fn basis_norm_sq<T: Real>(mode: ModeIndex, field: FieldStrength<T>) -> Result<T> {
    let b = field.value();
    let (degree, alpha) = mode.laguerre_params();
    let mut ratio = T::one();
    for i in 1..=alpha {
        ratio = ratio * T::from_count(degree + i) / b;
    }
    let value = T::PI() * ratio / b;
    if value.is_finite() && value > T::zero() {
        Ok(value)
    } else {
        Err(Error::Range(format!("norm of mode {mode} at B = {}", b.as_f64())))
    }
}

/// Eigenvalue of the Hamiltonian on the mode: `B(1 + 2·level)`.
pub fn mode_eigenvalue<T: Real>(mode: ModeIndex, field: FieldStrength<T>) -> T {
    field.value() * T::from_count(2 * mode.level() + 1)
}

/// Kernel as a `(z, z̄)` polynomial multiplying `exp(-B|z|²/2)`.
pub fn kernel_polynomial<C: PolyScalar>(mode: ModeIndex, b: C) -> ZPoly<C> {
    let (degree, alpha) = mode.laguerre_params();
    let coeffs: Vec<C> = laguerre_power_coefficients(degree, alpha);
    let mut poly = ZPoly::zero(degree + alpha + 1);
    let mut bpow = C::one();
    for (i, c) in coeffs.into_iter().enumerate() {
        let term = Complex::new(c * bpow.clone(), C::zero());
        let mono = match mode.family {
            Family::F1 => ZPoly::monomial(alpha + i, i, term),
            Family::F2 => ZPoly::monomial(i, alpha + i, term),
        };
        poly = poly.add(&mono);
        bpow = bpow * b.clone();
    }
    poly
}

/// `(H e_mode)(point)` by closed-form differentiation of the kernel
/// polynomial. No discretization is involved: `B` and the point are binary
/// floats, hence exact rationals, so the polynomial part is computed exactly
/// and rounded once. Only the Gaussian factor carries floating-point error.
/// Use [`HamiltonianOracle`] to evaluate one mode at many points.
pub fn hamiltonian_apply_exact<T: Real>(mode: ModeIndex, point: (T, T), field: FieldStrength<T>) -> Cplx<T> {
    HamiltonianOracle::new(mode, field).apply(point)
}

/// One enumerated mode with its spectral data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeRecord<T> {
    pub index: ModeIndex,
    pub eigenvalue: T,
    pub norm_sq: T,
    /// `⟨ξ⟩ = √λ`.
    pub bracket: T,
    #[serde(skip)]
    inv_norm: T,
}

impl<T: Real> ModeRecord<T> {
    pub fn new(index: ModeIndex, field: FieldStrength<T>) -> Result<Self> {
        let eigenvalue = mode_eigenvalue(index, field);
        let norm_sq = basis_norm_sq(index, field)?;
        Ok(Self {
            index,
            eigenvalue,
            norm_sq,
            bracket: eigenvalue.sqrt(),
            inv_norm: T::one() / norm_sq.sqrt(),
        })
    }

    /// Unit-normalized mode value.
    #[inline]
    pub fn eval_normalized(&self, point: (T, T), field: FieldStrength<T>) -> Cplx<T> {
        basis_eval(self.index, point, field) * self.inv_norm
    }
}

/// Truncated, deterministically ordered mode set.
#[derive(Debug, Clone)]
pub struct ModeTable<T> {
    modes: Vec<ModeRecord<T>>,
    level_cap: usize,
    angular_cap: usize,
    field: FieldStrength<T>,
    lookup: HashMap<ModeIndex, usize>,
}

impl<T: Real> ModeTable<T> {
    pub fn modes(&self) -> &[ModeRecord<T>] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn level_cap(&self) -> usize {
        self.level_cap
    }

    pub fn angular_cap(&self) -> usize {
        self.angular_cap
    }

    pub fn field(&self) -> FieldStrength<T> {
        self.field
    }

    pub fn position(&self, index: &ModeIndex) -> Option<usize> {
        self.lookup.get(index).copied()
    }

    pub fn max_eigenvalue(&self) -> Option<T> {
        self.modes.last().map(|m| m.eigenvalue)
    }

    /// Largest `|angular momentum|` present.
    pub fn angular_range(&self) -> usize {
        self.modes
            .iter()
            .map(|m| m.index.angular_momentum().unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }
}

/// All `F1` modes with `xi2 ≤ N`, `xi1 ≤ K`, and all `F2` modes with
/// `xi2 ≥ 1`, `xi1 + xi2 ≤ N`, ordered by `(level, family, xi1)`.
pub fn enumerate_modes<T: Real>(level_cap: usize, angular_cap: usize, field: FieldStrength<T>) -> Result<ModeTable<T>> {
    let mut indices = Vec::new();
    for n in 0..=level_cap {
        for k in 0..=angular_cap {
            indices.push(ModeIndex::f1(k, n));
        }
    }
    for n in 1..=level_cap {
        for j in 0..=(level_cap - n) {
            indices.push(ModeIndex::f2(j, n));
        }
    }
    indices.sort_by_key(|m| (m.level(), m.family, m.xi1));
    let modes = indices
        .into_iter()
        .map(|idx| ModeRecord::new(idx, field))
        .collect::<Result<Vec<_>>>()?;
    let lookup = modes.iter().enumerate().map(|(i, m)| (m.index, i)).collect();
    Ok(ModeTable {
        modes,
        level_cap,
        angular_cap,
        field,
        lookup,
    })
}
