//! Exact block-spectral evolution of a field mode coupled to an anharmonic
//! medium oscillator,
//! `H = ω a†a + ω₀ b†b + γ b†²b² + g (a†b + b†a)`.
//!
//! The total number `a†a + b†b` is conserved, so `H` splits into real
//! symmetric tridiagonal blocks, one per total number `N`. Each block is
//! diagonalized once and every time sample is then an exact phase rotation.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the precision for the common case.

pub mod analysis;
pub mod entanglement;
pub mod error;
pub mod evolution;
pub mod linalg;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod scalar;
pub mod selftest;
pub mod states;

pub use error::{Error, Result};
pub use scalar::{Complex, Real};

pub type ModelParams64 = model::ModelParams<f64>;
pub type BlockTable64 = model::BlockTable<f64>;
pub type InitialState64 = states::InitialState<f64>;
pub type EigenbasisCoefficients64 = states::EigenbasisCoefficients<f64>;
pub type EvolvedState64 = evolution::EvolvedState<f64>;
pub type FockGrid64 = evolution::FockGrid<f64>;
pub type Complex64 = Complex<f64>;

pub type ModelParams32 = model::ModelParams<f32>;
pub type BlockTable32 = model::BlockTable<f32>;
pub type InitialState32 = states::InitialState<f32>;
pub type EigenbasisCoefficients32 = states::EigenbasisCoefficients<f32>;
pub type EvolvedState32 = evolution::EvolvedState<f32>;
pub type FockGrid32 = evolution::FockGrid<f32>;
pub type Complex32 = Complex<f32>;
