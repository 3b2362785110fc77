//! Full Cauchy solves assembled from independent mode evolutions, and the
//! empirical check of the well-posedness estimate
//! `‖u(t)‖²_{H^{1+s}} + ‖∂ₜu(t)‖²_{H^s} ≤ C (‖u0‖²_{H^{1+s}} + ‖u1‖²_{H^s})`.

use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::h_fourier::{forward_transform_fn, sobolev_norm_sq, SpectralCoefficients};
use crate::mode_evolution::{evolve_mode, step_cap, EnergyConstants, ModeTrajectory};
use crate::quadrature::grid_for_table;
use crate::scalar::{Cplx, Real};
use crate::spectral_basis::{enumerate_modes, FieldStrength, ModeTable};
use crate::speed::SpeedProfile;

/// Relative slack allowed when comparing `sup R` to the certificate.
pub const CERTIFICATE_SLACK: f64 = 1e-9;

/// Initial data, speed, Sobolev index and sampling times.
#[derive(Debug, Clone)]
pub struct CauchyProblem<T> {
    u0: SpectralCoefficients<T>,
    u1: SpectralCoefficients<T>,
    profile: SpeedProfile<T>,
    s: T,
    output_times: Vec<T>,
}

impl<T: Real> CauchyProblem<T> {
    pub fn new(
        u0: SpectralCoefficients<T>,
        u1: SpectralCoefficients<T>,
        profile: SpeedProfile<T>,
        s: T,
        output_times: Vec<T>,
    ) -> Result<Self> {
        if !Arc::ptr_eq(u0.table(), u1.table()) {
            return Err(Error::Usage("u0 and u1 must share one mode table".into()));
        }
        if !s.is_finite() {
            return Err(Error::Usage("Sobolev index must be finite".into()));
        }
        let horizon = profile.horizon();
        for w in output_times.windows(2) {
            if w[1] < w[0] {
                return Err(Error::Usage("output times must be sorted".into()));
            }
        }
        if let Some(t) = output_times.iter().find(|&&t| !(t >= T::zero() && t <= horizon)) {
            return Err(Error::Usage(format!(
                "output time {} outside [0, {}]",
                t.as_f64(),
                horizon.as_f64()
            )));
        }
        Ok(Self {
            u0,
            u1,
            profile,
            s,
            output_times,
        })
    }

    pub fn table(&self) -> &Arc<ModeTable<T>> {
        self.u0.table()
    }

    pub fn u0(&self) -> &SpectralCoefficients<T> {
        &self.u0
    }

    pub fn u1(&self) -> &SpectralCoefficients<T> {
        &self.u1
    }

    pub fn profile(&self) -> &SpeedProfile<T> {
        &self.profile
    }

    pub fn sobolev_index(&self) -> T {
        self.s
    }

    pub fn output_times(&self) -> &[T] {
        &self.output_times
    }

    /// Same problem with both data sets multiplied by `c`.
    pub fn scaled(&self, c: Cplx<T>) -> Self {
        Self {
            u0: self.u0.scaled(c),
            u1: self.u1.scaled(c),
            ..self.clone()
        }
    }
}

/// Solution state at one output time.
#[derive(Debug, Clone)]
pub struct SolutionSnapshot<T> {
    pub t: T,
    pub u: SpectralCoefficients<T>,
    pub du: SpectralCoefficients<T>,
    /// `‖u(t)‖_{H^{1+s}}`.
    pub norm_u: T,
    /// `‖∂ₜu(t)‖_{H^s}`.
    pub norm_du: T,
    /// `Σ_ξ E(t, ξ)`.
    pub total_energy: T,
    pub ratio: T,
    pub mode_energy: Vec<T>,
    pub mode_bound: Vec<T>,
}

#[derive(Debug, Clone)]
pub struct SolutionRecord<T> {
    pub table: Arc<ModeTable<T>>,
    pub profile: SpeedProfile<T>,
    pub s: T,
    pub snapshots: Vec<SolutionSnapshot<T>>,
    /// `‖u0‖²_{H^{1+s}} + ‖u1‖²_{H^s}`.
    pub initial_norm_sq: T,
    pub certificate: T,
    pub step: T,
    pub stability_warning: bool,
    pub gronwall_step_violations: usize,
    /// `max_{t, ξ} (λ|û|² + |∂ₜû|²) / (λ|û0|² + |û1|²)` over modes with data.
    pub max_mode_ratio: T,
}

/// `C_cert = (max(a1, 1) / min(a0, 1)) · exp(c' T)`.
pub fn certificate_constant<T: Real>(profile: &SpeedProfile<T>) -> T {
    EnergyConstants::of(profile).certificate(profile.horizon())
}

/// Evolves every mode independently and assembles norms and the ratio
/// `R(t)` at each output time.
pub fn solve_cauchy<T: Real>(problem: &CauchyProblem<T>, dt: T) -> Result<SolutionRecord<T>> {
    let table = problem.table().clone();
    if table.is_empty() {
        return Err(Error::Usage("mode table is empty".into()));
    }
    let profile = &problem.profile;
    let s = problem.s;
    let lambda_max = table.max_eigenvalue().expect("non-empty table");
    let step = dt.min(step_cap(lambda_max, profile.bounds().a1));
    if !(step.is_finite() && step > T::zero()) {
        return Err(Error::Usage(format!("step must be positive, got {}", dt.as_f64())));
    }
    let times = &problem.output_times;

    let trajectories: Vec<Option<ModeTrajectory<T>>> = table
        .modes()
        .par_iter()
        .zip(problem.u0.values().par_iter().zip(problem.u1.values().par_iter()))
        .map(|(m, (&a, &b))| {
            if is_zero(a) && is_zero(b) {
                Ok(None)
            } else {
                evolve_mode(m.eigenvalue, a, b, profile, times, step).map(Some)
            }
        })
        .collect::<Result<_>>()?;

    let initial_norm_sq =
        sobolev_norm_sq(&table, problem.u0.values(), T::one() + s) + sobolev_norm_sq(&table, problem.u1.values(), s);

    let zero = Complex::new(T::zero(), T::zero());
    let mut snapshots = Vec::with_capacity(times.len());
    for (k, &t) in times.iter().enumerate() {
        let mut u = Vec::with_capacity(table.len());
        let mut du = Vec::with_capacity(table.len());
        let mut mode_energy = Vec::with_capacity(table.len());
        let mut mode_bound = Vec::with_capacity(table.len());
        for (m, traj) in table.modes().iter().zip(&trajectories) {
            match traj {
                Some(tr) => {
                    let sample = &tr.samples[k];
                    u.push(sample.state.value(m.eigenvalue));
                    du.push(sample.state.velocity());
                    mode_energy.push(sample.energy.energy);
                    mode_bound.push(sample.energy.bound);
                }
                None => {
                    u.push(zero);
                    du.push(zero);
                    mode_energy.push(T::zero());
                    mode_bound.push(T::zero());
                }
            }
        }
        let nu = sobolev_norm_sq(&table, &u, T::one() + s);
        let ndu = sobolev_norm_sq(&table, &du, s);
        let ratio = if initial_norm_sq > T::zero() {
            (nu + ndu) / initial_norm_sq
        } else {
            T::zero()
        };
        let total_energy = mode_energy.iter().fold(T::zero(), |a, &b| a + b);
        snapshots.push(SolutionSnapshot {
            t,
            u: SpectralCoefficients::from_values(table.clone(), u)?,
            du: SpectralCoefficients::from_values(table.clone(), du)?,
            norm_u: nu.sqrt(),
            norm_du: ndu.sqrt(),
            total_energy,
            ratio,
            mode_energy,
            mode_bound,
        });
    }

    let mut max_mode_ratio = T::zero();
    for ((m, traj), (&a, &b)) in table
        .modes()
        .iter()
        .zip(&trajectories)
        .zip(problem.u0.values().iter().zip(problem.u1.values()))
    {
        let Some(tr) = traj else { continue };
        let initial = m.eigenvalue * a.norm_sqr() + b.norm_sqr();
        for sample in &tr.samples {
            max_mode_ratio = max_mode_ratio.max(sample.state.norm_sq() / initial);
        }
    }

    Ok(SolutionRecord {
        table,
        profile: profile.clone(),
        s,
        snapshots,
        initial_norm_sq,
        certificate: certificate_constant(profile),
        step,
        stability_warning: trajectories.iter().flatten().any(|t| t.stability_warning),
        gronwall_step_violations: trajectories.iter().flatten().map(|t| t.gronwall_step_violations).sum(),
        max_mode_ratio,
    })
}

fn is_zero<T: Real>(c: Cplx<T>) -> bool {
    c.re == T::zero() && c.im == T::zero()
}

impl<T: Real> SolutionRecord<T> {
    pub fn sup_ratio(&self) -> T {
        self.snapshots.iter().map(|s| s.ratio).fold(T::zero(), T::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateReport<T> {
    pub sup_ratio: T,
    pub certificate: T,
    pub passed: bool,
}

/// Compares `sup_t R(t)` with the certificate built from the profile.
pub fn verify_estimate<T: Real>(record: &SolutionRecord<T>) -> EstimateReport<T> {
    verify_estimate_against(record, record.certificate)
}

/// Compares `sup_t R(t)` with a caller-supplied bound.
pub fn verify_estimate_against<T: Real>(record: &SolutionRecord<T>, c_max: T) -> EstimateReport<T> {
    let sup_ratio = record.sup_ratio();
    EstimateReport {
        sup_ratio,
        certificate: c_max,
        passed: sup_ratio <= c_max * (T::one() + T::lit(CERTIFICATE_SLACK)),
    }
}

/// One row of the truncation study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyRow<T> {
    pub level_cap: usize,
    pub modes: usize,
    pub sup_ratio: T,
    pub certificate: T,
    pub passed: bool,
}

/// Re-solves the problem produced by `build` for each level cap and reports
/// `sup R` per truncation. `build` must transform the same closed-form data
/// at every cap.
pub fn constant_stability_study<T, F>(truncations: &[usize], dt: T, build: F) -> Result<Vec<StudyRow<T>>>
where
    T: Real,
    F: Fn(usize) -> Result<CauchyProblem<T>> + Sync,
{
    if truncations.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Usage("truncations must be strictly increasing".into()));
    }
    truncations
        .par_iter()
        .map(|&n| {
            let problem = build(n)?;
            let record = solve_cauchy(&problem, dt)?;
            let report = verify_estimate(&record);
            Ok(StudyRow {
                level_cap: n,
                modes: record.table.len(),
                sup_ratio: report.sup_ratio,
                certificate: report.certificate,
                passed: report.passed,
            })
        })
        .collect()
}

/// Projects a closed-form field onto the table with the exactness-sized grid.
pub fn project_field<T, F>(f: F, table: &Arc<ModeTable<T>>) -> Result<SpectralCoefficients<T>>
where
    T: Real,
    F: Fn(T, T) -> Cplx<T> + Sync,
{
    let grid = grid_for_table(table)?;
    forward_transform_fn(f, &grid, table)
}

/// Convenience: enumerate a table and project `f` onto it.
pub fn project_onto_caps<T, F>(
    f: F,
    level_cap: usize,
    angular_cap: usize,
    field: FieldStrength<T>,
) -> Result<SpectralCoefficients<T>>
where
    T: Real,
    F: Fn(T, T) -> Cplx<T> + Sync,
{
    let table = Arc::new(enumerate_modes(level_cap, angular_cap, field)?);
    project_field(f, &table)
}

/// `exp(-((x - x0)² + (y - y0)²) / width²)`.
pub fn gaussian_bump<T: Real>(x0: T, y0: T, width: T) -> impl Fn(T, T) -> Cplx<T> + Sync + Send + Copy {
    move |x, y| {
        let dx = x - x0;
        let dy = y - y0;
        Complex::new((-(dx * dx + dy * dy) / (width * width)).exp(), T::zero())
    }
}
