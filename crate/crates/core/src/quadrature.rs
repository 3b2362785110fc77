//! Polar quadrature adapted to the Gaussian-Laguerre structure of the basis.
//!
//! With `t = B r²` the plane integral becomes
//! `∫ g dx dy = (1 / 2B) ∫_0^{2π} ∫_0^∞ g dt dθ`. The radial factor is
//! handled by Gauss–Laguerre for the weight `e^{-t}` and the angle by the
//! uniform trapezoid rule, which integrates `e^{ipθ}` exactly for `|p| < M`.

use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};
use crate::spectral_basis::{FieldStrength, ModeTable};

/// Gauss–Laguerre rule for `∫_0^∞ e^{-t} h(t) dt`.
#[derive(Debug, Clone)]
pub struct GaussLaguerre<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> GaussLaguerre<T> {
    /// Nodes by Newton iteration on `L_n` from asymptotic initial guesses.
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::Quadrature("radial order must be at least 1".into()));
        }
        let n = order;
        let nf = T::from_count(n);
        let tol = T::epsilon() * T::lit(8.0);
        let mut nodes: Vec<T> = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let mut z = T::zero();
        for i in 0..n {
            z = match i {
                0 => T::lit(3.0) / (T::one() + T::lit(2.4) * nf),
                1 => z + T::lit(15.0) / (T::one() + T::lit(2.5) * nf),
                _ => {
                    let ai = T::from_count(i - 1);
                    z + (T::one() + T::lit(2.55) * ai) / (T::lit(1.9) * ai) * (z - nodes[i - 2])
                }
            };
            let mut converged = false;
            let mut deriv = T::zero();
            let mut prev_poly = T::zero();
            for _ in 0..200 {
                let (p, pm1) = super::spectral_basis::laguerre_pair(n, T::zero(), z);
                deriv = (nf * p - nf * pm1) / z;
                prev_poly = pm1;
                let step = p / deriv;
                z -= step;
                if !z.is_finite() {
                    break;
                }
                if step.abs() <= tol * (T::one() + z.abs()) {
                    converged = true;
                    break;
                }
            }
            if !converged
                || z.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater)
                || (i > 0 && z <= nodes[i - 1])
            {
                return Err(Error::Quadrature(format!(
                    "Newton iteration for node {i} of order {n} did not converge"
                )));
            }
            // Refresh derivative and L_{n-1} at the converged node.
            let (p, pm1) = super::spectral_basis::laguerre_pair(n, T::zero(), z);
            if p.abs() > T::zero() {
                deriv = (nf * p - nf * pm1) / z;
                prev_poly = pm1;
            }
            let w = -T::one() / (deriv * nf * prev_poly);
            if !(w.is_finite() && w > T::zero()) {
                return Err(Error::Quadrature(format!("non-positive weight at node {i}")));
            }
            nodes.push(z);
            weights.push(w);
        }
        Ok(Self { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }
}

/// Tensor polar grid over ℝ² for a given field strength.
#[derive(Debug, Clone)]
pub struct QuadratureGrid<T> {
    radial_nodes: Vec<T>,
    radial_weights: Vec<T>,
    angular_count: usize,
    field: FieldStrength<T>,
    points: Vec<(T, T)>,
    weights: Vec<T>,
}

/// Builds the polar grid with `radial_order` Gauss–Laguerre nodes in `t = B r²`
/// and `angular_count` uniform angles `θ_m = 2πm/M`.
pub fn build_grid<T: Real>(
    field: FieldStrength<T>,
    radial_order: usize,
    angular_count: usize,
) -> Result<QuadratureGrid<T>> {
    if angular_count == 0 {
        return Err(Error::Quadrature("angular count must be at least 1".into()));
    }
    let rule = GaussLaguerre::<T>::new(radial_order)?;
    let b = field.value();
    let m = T::from_count(angular_count);
    let prefactor = T::PI() / (b * m);
    let mut points = Vec::with_capacity(radial_order * angular_count);
    let mut weights = Vec::with_capacity(radial_order * angular_count);
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let scaled = w * t.exp();
        if !scaled.is_finite() {
            return Err(Error::Quadrature(format!(
                "scaled weight overflows at node t = {}",
                t.as_f64()
            )));
        }
        let r = (t / b).sqrt();
        for k in 0..angular_count {
            let theta = T::TAU() * T::from_count(k) / m;
            points.push((r * theta.cos(), r * theta.sin()));
            weights.push(prefactor * scaled);
        }
    }
    Ok(QuadratureGrid {
        radial_nodes: rule.nodes,
        radial_weights: rule.weights,
        angular_count,
        field,
        points,
        weights,
    })
}

/// Grid sizes that integrate every Gram product of the table exactly:
/// `radial_order = N + K + 2`, `angular_count = 4·(angular range) + 1`
/// with the angular range `max(N, K)`.
pub fn grid_size_for(level_cap: usize, angular_cap: usize) -> (usize, usize) {
    (level_cap + angular_cap + 2, 4 * level_cap.max(angular_cap) + 1)
}

/// Grid sized by [`grid_size_for`] for the table's caps.
pub fn grid_for_table<T: Real>(table: &ModeTable<T>) -> Result<QuadratureGrid<T>> {
    let (radial, angular) = grid_size_for(table.level_cap(), table.angular_cap());
    build_grid(table.field(), radial, angular)
}

impl<T: Real> QuadratureGrid<T> {
    pub fn field(&self) -> FieldStrength<T> {
        self.field
    }

    pub fn radial_nodes(&self) -> &[T] {
        &self.radial_nodes
    }

    pub fn radial_weights(&self) -> &[T] {
        &self.radial_weights
    }

    pub fn radial_order(&self) -> usize {
        self.radial_nodes.len()
    }

    pub fn angular_count(&self) -> usize {
        self.angular_count
    }

    /// Cartesian points, radial-major.
    pub fn points(&self) -> &[(T, T)] {
        &self.points
    }

    /// Plane-integration weights aligned with [`points`](Self::points).
    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate<F>(&self, f: F) -> Cplx<T>
    where
        F: Fn(T, T) -> Cplx<T>,
    {
        self.points
            .iter()
            .zip(&self.weights)
            .fold(Cplx::new(T::zero(), T::zero()), |acc, (&(x, y), &w)| acc + f(x, y) * w)
    }

    /// Weighted sum of pre-sampled values.
    pub fn integrate_samples(&self, values: &[Cplx<T>]) -> Cplx<T> {
        values
            .iter()
            .zip(&self.weights)
            .fold(Cplx::new(T::zero(), T::zero()), |acc, (&v, &w)| acc + v * w)
    }
}
