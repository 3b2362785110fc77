//! Landau-Fourier transform pair, Plancherel and Sobolev norms.
//!
//! Coefficients are stored flattened per `(family, ξ)`: the diagonal
//! entries of the matrix-valued coefficient are independent scalars.

use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::QuadratureGrid;
use crate::scalar::{Cplx, Real};
use crate::spectral_basis::{ModeIndex, ModeTable};

/// Per-mode complex coefficients over a shared [`ModeTable`].
#[derive(Debug, Clone)]
pub struct SpectralCoefficients<T> {
    table: Arc<ModeTable<T>>,
    values: Vec<Cplx<T>>,
}

impl<T: Real> SpectralCoefficients<T> {
    pub fn zeros(table: Arc<ModeTable<T>>) -> Self {
        let values = vec![Complex::new(T::zero(), T::zero()); table.len()];
        Self { table, values }
    }

    pub fn from_values(table: Arc<ModeTable<T>>, values: Vec<Cplx<T>>) -> Result<Self> {
        if values.len() != table.len() {
            return Err(Error::Usage(format!(
                "{} coefficients supplied for a table of {} modes",
                values.len(),
                table.len()
            )));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Usage("non-finite coefficient".into()));
        }
        Ok(Self { table, values })
    }

    /// Sparse construction; modes not listed are zero. Repeated modes add.
    pub fn from_entries(table: Arc<ModeTable<T>>, entries: &[(ModeIndex, Cplx<T>)]) -> Result<Self> {
        let mut out = Self::zeros(table);
        for (idx, v) in entries {
            let pos = out
                .table
                .position(idx)
                .ok_or_else(|| Error::Usage(format!("mode {idx} is not in the table")))?;
            out.values[pos] += *v;
        }
        Self::from_values(out.table, out.values)
    }

    pub fn table(&self) -> &Arc<ModeTable<T>> {
        &self.table
    }

    pub fn values(&self) -> &[Cplx<T>] {
        &self.values
    }

    pub fn get(&self, index: &ModeIndex) -> Option<Cplx<T>> {
        self.table.position(index).map(|p| self.values[p])
    }

    pub fn scaled(&self, c: Cplx<T>) -> Self {
        Self {
            table: self.table.clone(),
            values: self.values.iter().map(|&v| v * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.re == T::zero() && v.im == T::zero())
    }
}

fn check_field<T: Real>(grid: &QuadratureGrid<T>, table: &ModeTable<T>) -> Result<()> {
    if grid.field() != table.field() {
        return Err(Error::Usage(format!(
            "grid field strength {} does not match table field strength {}",
            grid.field().value().as_f64(),
            table.field().value().as_f64()
        )));
    }
    Ok(())
}

/// Normalized mode values at every grid point, one row per mode.
pub fn basis_samples<T: Real>(table: &ModeTable<T>, points: &[(T, T)]) -> Vec<Vec<Cplx<T>>> {
    let field = table.field();
    table
        .modes()
        .par_iter()
        .map(|m| points.iter().map(|&p| m.eval_normalized(p, field)).collect())
        .collect()
}

/// Samples `f` at the grid points.
pub fn sample_field<T, F>(f: F, grid: &QuadratureGrid<T>) -> Vec<Cplx<T>>
where
    T: Real,
    F: Fn(T, T) -> Cplx<T> + Sync,
{
    grid.points().par_iter().map(|&(x, y)| f(x, y)).collect()
}

/// Matches `(x, y, re, im)` rows against the grid points (same order,
/// coordinates equal within `tol`) and returns the sample vector.
pub fn samples_from_rows<T: Real>(rows: &[[T; 4]], grid: &QuadratureGrid<T>, tol: T) -> Result<Vec<Cplx<T>>> {
    if rows.len() != grid.len() {
        return Err(Error::Usage(format!(
            "{} field samples supplied for a grid of {} points",
            rows.len(),
            grid.len()
        )));
    }
    rows.iter()
        .zip(grid.points())
        .enumerate()
        .map(|(i, (row, &(x, y)))| {
            let scale = T::one() + x.abs().max(y.abs());
            if (row[0] - x).abs() > tol * scale || (row[1] - y).abs() > tol * scale {
                return Err(Error::Usage(format!(
                    "sample {i} at ({}, {}) does not match grid point ({}, {})",
                    row[0].as_f64(),
                    row[1].as_f64(),
                    x.as_f64(),
                    y.as_f64()
                )));
            }
            Ok(Complex::new(row[2], row[3]))
        })
        .collect()
}

/// `f̂(mode) ≈ ∫ f · conj(ê_mode)` by the grid rule, `samples` aligned with
/// the grid points.
pub fn forward_transform<T: Real>(
    samples: &[Cplx<T>],
    grid: &QuadratureGrid<T>,
    table: &Arc<ModeTable<T>>,
) -> Result<SpectralCoefficients<T>> {
    check_field(grid, table)?;
    if samples.len() != grid.len() {
        return Err(Error::Usage(format!(
            "{} samples supplied for a grid of {} points",
            samples.len(),
            grid.len()
        )));
    }
    let field = table.field();
    let weighted: Vec<Cplx<T>> = samples.iter().zip(grid.weights()).map(|(&f, &w)| f * w).collect();
    let values = table
        .modes()
        .par_iter()
        .map(|m| {
            grid.points()
                .iter()
                .zip(&weighted)
                .fold(Complex::new(T::zero(), T::zero()), |acc, (&p, &fw)| {
                    acc + fw * m.eval_normalized(p, field).conj()
                })
        })
        .collect();
    SpectralCoefficients::from_values(table.clone(), values)
}

/// Forward transform of a closed-form field.
pub fn forward_transform_fn<T, F>(
    f: F,
    grid: &QuadratureGrid<T>,
    table: &Arc<ModeTable<T>>,
) -> Result<SpectralCoefficients<T>>
where
    T: Real,
    F: Fn(T, T) -> Cplx<T> + Sync,
{
    check_field(grid, table)?;
    forward_transform(&sample_field(f, grid), grid, table)
}

/// `f(x) = Σ f̂(mode) ê_mode(x)`, summed over both families.
pub fn inverse_transform<T: Real>(coeffs: &SpectralCoefficients<T>, points: &[(T, T)]) -> Vec<Cplx<T>> {
    let table = coeffs.table();
    let field = table.field();
    points
        .par_iter()
        .map(|&p| {
            table
                .modes()
                .iter()
                .zip(coeffs.values())
                .fold(Complex::new(T::zero(), T::zero()), |acc, (m, &c)| {
                    if c.re == T::zero() && c.im == T::zero() {
                        acc
                    } else {
                        acc + c * m.eval_normalized(p, field)
                    }
                })
        })
        .collect()
}

/// `(Σ |f̂|²)^{1/2}`.
pub fn plancherel_norm<T: Real>(coeffs: &SpectralCoefficients<T>) -> T {
    coeffs
        .values()
        .iter()
        .map(|v| v.norm_sqr())
        .fold(T::zero(), |a, b| a + b)
        .sqrt()
}

/// `(Σ λ^s |f̂|²)^{1/2}` with `λ` the mode eigenvalue.
pub fn sobolev_norm<T: Real>(coeffs: &SpectralCoefficients<T>, s: T) -> T {
    sobolev_norm_sq(coeffs.table(), coeffs.values(), s).sqrt()
}

pub(crate) fn sobolev_norm_sq<T: Real>(table: &ModeTable<T>, values: &[Cplx<T>], s: T) -> T {
    table
        .modes()
        .iter()
        .zip(values)
        .map(|(m, v)| m.eigenvalue.powf(s) * v.norm_sqr())
        .fold(T::zero(), |a, b| a + b)
}

/// L² norm of a sampled field by the grid rule.
pub fn quadrature_l2_norm<T: Real>(samples: &[Cplx<T>], grid: &QuadratureGrid<T>) -> T {
    samples
        .iter()
        .zip(grid.weights())
        .map(|(v, &w)| v.norm_sqr() * w)
        .fold(T::zero(), |a, b| a + b)
        .sqrt()
}

/// Power-law fit of per-level coefficient maxima against `⟨ξ⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit<T> {
    /// Slope of `ln max|f̂|` versus `ln ⟨ξ⟩`.
    pub slope: T,
    pub max_residual: T,
    pub levels_used: usize,
}

/// Least-squares fit of `ln max_level |f̂|` against `ln √λ`.
pub fn decay_diagnostic<T: Real>(coeffs: &SpectralCoefficients<T>) -> Result<DecayFit<T>> {
    let floor = T::lit(1e-300);
    let mut per_level: Vec<(T, T)> = Vec::new();
    for (m, v) in coeffs.table().modes().iter().zip(coeffs.values()) {
        let mag = v.norm();
        match per_level.last_mut() {
            Some((lambda, best)) if *lambda == m.eigenvalue => {
                if mag > *best {
                    *best = mag;
                }
            }
            _ => per_level.push((m.eigenvalue, mag)),
        }
    }
    let pts: Vec<(T, T)> = per_level
        .into_iter()
        .filter(|&(_, mag)| mag > floor)
        .map(|(lambda, mag)| (lambda.sqrt().ln(), mag.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::DiagnosticUnavailable(format!(
            "{} populated levels, at least 3 required",
            pts.len()
        )));
    }
    let n = T::from_count(pts.len());
    let mean_x = pts.iter().map(|p| p.0).fold(T::zero(), |a, b| a + b) / n;
    let mean_y = pts.iter().map(|p| p.1).fold(T::zero(), |a, b| a + b) / n;
    let sxx = pts.iter().map(|p| (p.0 - mean_x).powi(2)).fold(T::zero(), |a, b| a + b);
    let sxy = pts
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .fold(T::zero(), |a, b| a + b);
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let max_residual = pts
        .iter()
        .map(|p| (p.1 - (intercept + slope * p.0)).abs())
        .fold(T::zero(), T::max);
    Ok(DecayFit {
        slope,
        max_residual,
        levels_used: pts.len(),
    })
}

/// Quadrature Gram matrix of the normalized modes, row-major.
#[derive(Debug, Clone)]
pub struct GramMatrix<T> {
    pub dim: usize,
    pub entries: Vec<Cplx<T>>,
}

impl<T: Real> GramMatrix<T> {
    pub fn get(&self, i: usize, j: usize) -> Cplx<T> {
        self.entries[i * self.dim + j]
    }

    /// `max_{i≠j} |G_ij|`.
    pub fn max_off_diagonal(&self) -> T {
        let mut best = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    best = best.max(self.get(i, j).norm());
                }
            }
        }
        best
    }

    /// `max_i |G_ii - 1|`.
    pub fn max_diagonal_deviation(&self) -> T {
        (0..self.dim)
            .map(|i| (self.get(i, i) - Complex::new(T::one(), T::zero())).norm())
            .fold(T::zero(), T::max)
    }
}

pub fn gram_matrix<T: Real>(table: &ModeTable<T>, grid: &QuadratureGrid<T>) -> Result<GramMatrix<T>> {
    check_field(grid, table)?;
    let samples = basis_samples(table, grid.points());
    let weights = grid.weights();
    let dim = table.len();
    let entries = (0..dim * dim)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / dim, k % dim);
            samples[i]
                .iter()
                .zip(&samples[j])
                .zip(weights)
                .fold(Complex::new(T::zero(), T::zero()), |acc, ((&a, &b), &w)| {
                    acc + a * b.conj() * w
                })
        })
        .collect();
    Ok(GramMatrix { dim, entries })
}
