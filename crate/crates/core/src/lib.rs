//! Spectral solver for the Cauchy problem
//!
//! ```text
//! ∂ₜ²u + a(t) H u = 0,   u(0) = u0,   ∂ₜu(0) = u1,
//! ```
//!
//! where `H` is the Landau Hamiltonian on ℝ² in the symmetric gauge and
//! `a(t) ≥ a0 > 0` is a time-dependent propagation speed.
//!
//! The solver expands data in the Landau eigenbasis ([`spectral_basis`]),
//! transforms fields on a polar Gauss–Laguerre grid ([`quadrature`],
//! [`h_fourier`]), evolves every mode independently with a symmetrizer
//! energy monitor ([`mode_evolution`]) and checks the resulting Sobolev
//! energy estimate ([`harness`]).
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the common `f64` instantiation.

pub mod error;
pub mod h_fourier;
pub mod harness;
pub mod io;
pub mod mode_evolution;
pub mod quadrature;
pub mod scalar;
pub mod spectral_basis;
pub mod speed;

pub use error::{Error, Result};
pub use scalar::{Cplx, Real};

pub use h_fourier::{
    decay_diagnostic, forward_transform, forward_transform_fn, gram_matrix, inverse_transform, plancherel_norm,
    sobolev_norm, SpectralCoefficients,
};
pub use harness::{constant_stability_study, solve_cauchy, verify_estimate, CauchyProblem, SolutionRecord};
pub use mode_evolution::{evolve_mode, mode_energy, mode_solve_const, ModeState};
pub use quadrature::{build_grid, grid_for_table, QuadratureGrid};
pub use spectral_basis::{
    basis_eval, basis_norm_sq, enumerate_modes, hamiltonian_apply_exact, laguerre_eval, mode_eigenvalue, Family,
    FieldStrength, HamiltonianOracle, ModeIndex, ModeRecord, ModeTable,
};
pub use speed::{SpeedKind, SpeedProfile};

pub type FieldStrength64 = FieldStrength<f64>;
pub type ModeTable64 = ModeTable<f64>;
pub type QuadratureGrid64 = QuadratureGrid<f64>;
pub type SpectralCoefficients64 = SpectralCoefficients<f64>;
pub type SpeedProfile64 = SpeedProfile<f64>;
pub type CauchyProblem64 = CauchyProblem<f64>;
pub type SolutionRecord64 = SolutionRecord<f64>;
pub type Complex64 = Cplx<f64>;

pub type FieldStrength32 = FieldStrength<f32>;
pub type ModeTable32 = ModeTable<f32>;
pub type SpectralCoefficients32 = SpectralCoefficients<f32>;
pub type SpeedProfile32 = SpeedProfile<f32>;
