//! Per-mode evolution of `v'' + a(t) λ v = 0` through the first-order
//! system `∂ₜV = i√λ A(t) V`, `V = (i√λ v, v')`, with energy
//! `E = (S V, V)` for the symmetrizer `S = diag(2a, 2)`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};
use crate::speed::SpeedProfile;

/// Transformed mode state `(V1, V2) = (i√λ v̂, ∂ₜv̂)` at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeState<T> {
    pub v1: Cplx<T>,
    pub v2: Cplx<T>,
    pub t: T,
}

impl<T: Real> ModeState<T> {
    pub fn from_data(lambda: T, value: Cplx<T>, velocity: Cplx<T>, t: T) -> Self {
        let i_omega = Complex::new(T::zero(), lambda.sqrt());
        Self {
            v1: i_omega * value,
            v2: velocity,
            t,
        }
    }

    /// `v̂ = V1 / (i√λ)`.
    pub fn value(&self, lambda: T) -> Cplx<T> {
        self.v1 / Complex::new(T::zero(), lambda.sqrt())
    }

    pub fn velocity(&self) -> Cplx<T> {
        self.v2
    }

    /// `|V|² = λ|v̂|² + |∂ₜv̂|²`.
    pub fn norm_sq(&self) -> T {
        self.v1.norm_sqr() + self.v2.norm_sqr()
    }
}

/// Energy sample with its Gronwall bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyRecord<T> {
    pub t: T,
    pub energy: T,
    pub bound: T,
}

/// Constants of the energy argument for a certified profile:
/// `c0 = 2 min(a0, 1)`, `c1 = 2 max(a1, 1)`, `c' = d1 / min(a0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyConstants<T> {
    pub c0: T,
    pub c1: T,
    pub c_prime: T,
}

impl<T: Real> EnergyConstants<T> {
    pub fn of(profile: &SpeedProfile<T>) -> Self {
        let b = profile.bounds();
        let two = T::lit(2.0);
        let lower = b.a0.min(T::one());
        Self {
            c0: two * lower,
            c1: two * b.a1.max(T::one()),
            c_prime: b.d1 / lower,
        }
    }

    /// `(c1 / c0) · exp(c' T)`: bounds `|V(t)|² / |V(0)|²` on `[0, T]`.
    pub fn certificate(&self, horizon: T) -> T {
        self.c1 / self.c0 * (self.c_prime * horizon).exp()
    }
}

/// Diagonal of `S(t) = diag(2 a(t), 2)`.
pub fn symmetrizer<T: Real>(t: T, profile: &SpeedProfile<T>) -> [T; 2] {
    [T::lit(2.0) * profile.a(t), T::lit(2.0)]
}

/// `A(t) = [[0, 1], [a(t), 0]]`.
pub fn system_matrix<T: Real>(t: T, profile: &SpeedProfile<T>) -> [[T; 2]; 2] {
    [[T::zero(), T::one()], [profile.a(t), T::zero()]]
}

/// `S A - A* S` by explicit matrix products.
pub fn symmetrizer_commutator<T: Real>(t: T, profile: &SpeedProfile<T>) -> [[T; 2]; 2] {
    let d = symmetrizer(t, profile);
    let s = [[d[0], T::zero()], [T::zero(), d[1]]];
    let a = system_matrix(t, profile);
    let mut out = [[T::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let mut sa = T::zero();
            let mut a_star_s = T::zero();
            for k in 0..2 {
                sa += s[i][k] * a[k][j];
                // A is real, so A* is its transpose.
                a_star_s += a[k][i] * s[k][j];
            }
            out[i][j] = sa - a_star_s;
        }
    }
    out
}

/// `E = (S V, V) = 2 a(t) |V1|² + 2 |V2|²`.
pub fn mode_energy<T: Real>(state: &ModeState<T>, profile: &SpeedProfile<T>) -> T {
    let s = symmetrizer(state.t, profile);
    s[0] * state.v1.norm_sqr() + s[1] * state.v2.norm_sqr()
}

/// `E0 · exp(c' t)`.
pub fn gronwall_bound<T: Real>(e0: T, t: T, profile: &SpeedProfile<T>) -> T {
    e0 * (EnergyConstants::of(profile).c_prime * t).exp()
}

/// Closed-form solution for constant speed `a`:
/// `v = cos(ωt) v0 + sin(ωt)/ω v1`, `ω = √(aλ)`.
pub fn mode_solve_const<T: Real>(lambda: T, a: T, v0: Cplx<T>, v1: Cplx<T>, t: T) -> (Cplx<T>, Cplx<T>) {
    let omega = (a * lambda).sqrt();
    let (s, c) = (omega * t).sin_cos();
    let v = v0 * c + v1 * (s / omega);
    let dv = v0 * (-omega * s) + v1 * c;
    (v, dv)
}

/// Largest step resolving the fastest phase: `0.1 / √(a1 λ_max)`.
pub fn step_cap<T: Real>(lambda_max: T, a1: T) -> T {
    T::lit(0.1) / (a1 * lambda_max).sqrt()
}

/// Steps with `h √λ √a1` above this are flagged.
pub const STABILITY_LIMIT: f64 = 0.5;

/// Per-step slack of the discrete Gronwall check.
pub const STEP_GROWTH_SLACK: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    /// Clamp the step to [`step_cap`] for the mode's own `λ`.
    pub cap_step: bool,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self { cap_step: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample<T> {
    pub state: ModeState<T>,
    pub energy: EnergyRecord<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeTrajectory<T> {
    pub samples: Vec<TrajectorySample<T>>,
    /// Largest step actually taken.
    pub max_step: T,
    pub steps: usize,
    pub stability_warning: bool,
    /// Steps with `E(t + h) > E(t) exp(c' h)(1 + 1e-7)`.
    pub gronwall_step_violations: usize,
}

/// Evolves one mode with the default options.
pub fn evolve_mode<T: Real>(
    lambda: T,
    v0: Cplx<T>,
    v1: Cplx<T>,
    profile: &SpeedProfile<T>,
    times: &[T],
    dt: T,
) -> Result<ModeTrajectory<T>> {
    evolve_mode_with(lambda, v0, v1, profile, times, dt, EvolveOptions::default())
}

/// Classical fourth-order Runge–Kutta on `∂ₜV = i√λ A(t) V` from `t = 0`,
/// reporting the state at each requested time. Each gap between output
/// times is split into equal steps no longer than the effective `dt`.
pub fn evolve_mode_with<T: Real>(
    lambda: T,
    v0: Cplx<T>,
    v1: Cplx<T>,
    profile: &SpeedProfile<T>,
    times: &[T],
    dt: T,
    options: EvolveOptions,
) -> Result<ModeTrajectory<T>> {
    if !(dt.is_finite() && dt > T::zero()) {
        return Err(Error::Usage(format!("step must be positive, got {}", dt.as_f64())));
    }
    if !(lambda.is_finite() && lambda > T::zero()) {
        return Err(Error::Usage(format!(
            "eigenvalue must be positive, got {}",
            lambda.as_f64()
        )));
    }
    check_times(times, profile.horizon())?;

    let bounds = profile.bounds();
    let consts = EnergyConstants::of(profile);
    let dt = if options.cap_step {
        dt.min(step_cap(lambda, bounds.a1))
    } else {
        dt
    };
    let omega = lambda.sqrt();
    let growth_slack = T::one() + T::lit(STEP_GROWTH_SLACK);

    let mut state = ModeState::from_data(lambda, v0, v1, T::zero());
    let e0 = mode_energy(&state, profile);
    let mut energy = e0;
    let mut samples = Vec::with_capacity(times.len());
    let mut max_step = T::zero();
    let mut steps = 0usize;
    let mut violations = 0usize;

    for &target in times {
        let gap = target - state.t;
        if gap > T::zero() {
            let n = (gap / dt).ceil().to_usize().unwrap_or(1).max(1);
            let h = gap / T::from_count(n);
            max_step = max_step.max(h);
            let start = state.t;
            for k in 0..n {
                let t_next = if k + 1 == n {
                    target
                } else {
                    start + h * T::from_count(k + 1)
                };
                let next = rk4_step(&state, omega, profile, h, t_next);
                let e_next = mode_energy(&next, profile);
                if e_next > energy * (consts.c_prime * h).exp() * growth_slack {
                    violations += 1;
                }
                state = next;
                energy = e_next;
                steps += 1;
            }
        }
        samples.push(TrajectorySample {
            state,
            energy: EnergyRecord {
                t: state.t,
                energy,
                bound: gronwall_bound(e0, state.t, profile),
            },
        });
    }

    let stability_warning = max_step * omega * bounds.a1.sqrt() > T::lit(STABILITY_LIMIT);
    Ok(ModeTrajectory {
        samples,
        max_step,
        steps,
        stability_warning,
        gronwall_step_violations: violations,
    })
}

fn check_times<T: Real>(times: &[T], horizon: T) -> Result<()> {
    let mut prev = T::zero();
    for &t in times {
        if !(t.is_finite() && t >= T::zero() && t <= horizon) {
            return Err(Error::Usage(format!(
                "output time {} outside [0, {}]",
                t.as_f64(),
                horizon.as_f64()
            )));
        }
        if t < prev {
            return Err(Error::Usage("output times must be sorted".into()));
        }
        prev = t;
    }
    Ok(())
}

fn rk4_step<T: Real>(state: &ModeState<T>, omega: T, profile: &SpeedProfile<T>, h: T, t_next: T) -> ModeState<T> {
    let i_omega = Complex::new(T::zero(), omega);
    let rhs = |t: T, v1: Cplx<T>, v2: Cplx<T>| (i_omega * v2, i_omega * v1 * profile.a(t));
    let half = h / T::lit(2.0);
    let t = state.t;
    let (y1, y2) = (state.v1, state.v2);
    let k1 = rhs(t, y1, y2);
    let k2 = rhs(t + half, y1 + k1.0 * half, y2 + k1.1 * half);
    let k3 = rhs(t + half, y1 + k2.0 * half, y2 + k2.1 * half);
    let k4 = rhs(t + h, y1 + k3.0 * h, y2 + k3.1 * h);
    let sixth = h / T::lit(6.0);
    let two = T::lit(2.0);
    ModeState {
        v1: y1 + (k1.0 + k2.0 * two + k3.0 * two + k4.0) * sixth,
        v2: y2 + (k1.1 + k2.1 * two + k3.1 * two + k4.1) * sixth,
        t: t_next,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::speed::SpeedKind;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Cplx<f64> {
        Complex::new(re, im)
    }

    fn sine(horizon: f64) -> SpeedProfile<f64> {
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

    #[test]
    fn symmetrizer_values_and_commutator() {
        let one = SpeedProfile::constant(1.0, 1.0).unwrap();
        assert_eq!(symmetrizer(0.3, &one), [2.0, 2.0]);
        let three = SpeedProfile::constant(3.0, 1.0).unwrap();
        assert_eq!(symmetrizer(0.3, &three), [6.0, 2.0]);
        let comm = symmetrizer_commutator(0.3, &three);
        assert_eq!(comm, [[0.0; 2]; 2]);
    }

    #[test]
    fn energy_values() {
        let p = SpeedProfile::constant(1.0, 1.0).unwrap();
        let zero = ModeState {
            v1: c(0.0, 0.0),
            v2: c(0.0, 0.0),
            t: 0.0,
        };
        assert_eq!(mode_energy(&zero, &p), 0.0);
        let s = ModeState {
            v1: c(1.0, 0.0),
            v2: c(0.0, 0.0),
            t: 0.0,
        };
        assert_eq!(mode_energy(&s, &p), 2.0);
    }

    #[test]
    fn gronwall_constants() {
        let p = SpeedProfile::constant(1.0, 5.0).unwrap();
        assert_eq!(gronwall_bound(3.0, 4.0, &p), 3.0);
        let s = sine(3.0);
        let k = EnergyConstants::of(&s);
        assert_eq!(k.c_prime, 1.0);
        assert!((gronwall_bound(2.0, 1.5, &s) - 2.0 * 1.5f64.exp()).abs() < 1e-14);
        assert_eq!(gronwall_bound(2.0, 0.0, &s), 2.0);
        assert!((k.certificate(3.0) - 3.0 * 3f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn closed_form_solution() {
        let (v, dv) = mode_solve_const(1.0, 1.0, c(1.0, 0.0), c(0.0, 0.0), PI);
        assert!((v - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(dv.norm() < 1e-15);
        let (v, dv) = mode_solve_const(7.0, 2.0, c(0.5, -1.0), c(2.0, 0.25), 0.0);
        assert_eq!((v, dv), (c(0.5, -1.0), c(2.0, 0.25)));
    }

    #[test]
    fn matches_closed_form_at_unit_time() {
        let p = SpeedProfile::constant(1.0, 1.0).unwrap();
        let traj = evolve_mode(1.0, c(1.0, 0.5), c(-0.3, 0.2), &p, &[1.0], 1e-3).unwrap();
        let s = traj.samples[0].state;
        let (v, dv) = mode_solve_const(1.0, 1.0, c(1.0, 0.5), c(-0.3, 0.2), 1.0);
        assert!((s.value(1.0) - v).norm() < 1e-8);
        assert!((s.velocity() - dv).norm() < 1e-8);
        assert!(!traj.stability_warning);
    }

    #[test]
    fn constant_speed_conserves_energy() {
        let p = SpeedProfile::constant(2.5, 5.0).unwrap();
        let times: Vec<f64> = (0..=50).map(|i| i as f64 * 0.1).collect();
        let traj = evolve_mode(3.0, c(1.0, 0.0), c(0.0, 1.0), &p, &times, 1e-3).unwrap();
        let e0 = traj.samples[0].energy.energy;
        for s in &traj.samples {
            assert!((s.energy.energy - e0).abs() <= 1e-6 * e0);
        }
        assert_eq!(traj.gronwall_step_violations, 0);
    }

    #[test]
    fn sine_profile_respects_gronwall() {
        let p = sine(3.0);
        let times: Vec<f64> = (0..=30).map(|i| i as f64 * 0.1).collect();
        let traj = evolve_mode(25.0, c(1.0, 0.0), c(0.0, 0.0), &p, &times, 1e-3).unwrap();
        for s in &traj.samples {
            assert!(s.energy.energy <= s.energy.bound * (1.0 + 1e-9));
        }
        assert_eq!(traj.gronwall_step_violations, 0);
    }

    #[test]
    fn coarse_uncapped_step_warns() {
        let p = SpeedProfile::constant(1.0, 1.0).unwrap();
        let traj = evolve_mode_with(
            100.0,
            c(1.0, 0.0),
            c(0.0, 0.0),
            &p,
            &[1.0],
            0.1,
            EvolveOptions { cap_step: false },
        )
        .unwrap();
        assert!(traj.stability_warning);
        let capped = evolve_mode(100.0, c(1.0, 0.0), c(0.0, 0.0), &p, &[1.0], 0.1).unwrap();
        assert!(!capped.stability_warning);
        assert!(capped.max_step <= 0.01 + 1e-15);
    }

    #[test]
    fn bad_inputs() {
        let p = SpeedProfile::constant(1.0, 1.0).unwrap();
        let z = c(0.0, 0.0);
        assert!(evolve_mode(1.0, z, z, &p, &[0.5], 0.0).is_err());
        assert!(evolve_mode(0.0, z, z, &p, &[0.5], 0.1).is_err());
        assert!(evolve_mode(1.0, z, z, &p, &[2.0], 0.1).is_err());
        assert!(evolve_mode(1.0, z, z, &p, &[0.5, 0.2], 0.1).is_err());
    }

    #[test]
    fn state_round_trip() {
        let s = ModeState::from_data(9.0, c(1.0, -2.0), c(0.5, 0.0), 0.0);
        assert!((s.value(9.0) - c(1.0, -2.0)).norm() < 1e-15);
        assert!((s.norm_sq() - (9.0 * 5.0 + 0.25)).abs() < 1e-12);
    }
}
