//! Cognitive-resource dilution, information-entropy data valuation, the
//! consumption adjustment weight function (CAWF) and a financial-frictions
//! wealth-distribution model with its mean-field equilibrium.
//!
//! Every closed-form stationary density in this crate is an instance of
//! [`PiecewiseExpDensity`] and can be cross-checked against the two
//! independent oracles in [`stochastic`]: a finite-difference solver for the
//! stationary Kolmogorov forward equation and an exact Monte Carlo sampler of
//! the drift-diffusion-with-reset process.

pub mod cognition;
pub mod consumption;
pub mod data_value;
pub mod density;
mod error;
pub mod exec;
pub mod stochastic;
pub mod tax;
pub mod wealth;

pub use density::{DensityStats, PiecewiseExpDensity};
pub use error::{Error, Result};
pub use exec::Execution;
pub use stochastic::rng::RngSpec;
