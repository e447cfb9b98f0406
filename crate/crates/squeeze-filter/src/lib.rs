//! Quantum trajectory filtering for open systems driven by squeezed
//! (quasi-free) bosonic input noise.
//!
//! The input field is a single bosonic channel in a mean-zero Gaussian state
//! with number parameter `n` and complex squeezing `m`. The library builds a
//! balanced two-mode Bogoliubov representation of that state, selects the
//! commutant quadrature phase that makes the auxiliary quadrature
//! statistically independent of the measured one, derives the transfer
//! coefficients relating noise increments to quadrature increments on the
//! joint vacuum, and integrates the resulting filtering equations:
//!
//! - the linear (unnormalized) equation in density form,
//! - the normalized equation driven by the innovations process.
//!
//! Every closed-form coefficient is backed by an independent oracle in
//! [`validation`], and the `check` CLI subcommand emits a machine-readable
//! report of all residuals.

pub mod bogoliubov;
pub mod cli;
pub mod config;
mod error;
pub mod filter;
pub mod gaussian;
pub mod output;
pub mod quadrature;
pub mod system;
pub mod vacuum_reference;
pub mod validation;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

pub use bogoliubov::{BalancedCoeffs, TwoModeCoeffs};
pub use filter::{FilterState, Trajectory};
pub use gaussian::SqueezingParams;
pub use quadrature::TransferCoeffs;
pub use system::SystemModel;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Complex dense matrix used for system operators and densities.
pub type CMatrix = nalgebra::DMatrix<C64>;
