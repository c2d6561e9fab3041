//! Identification of pattern-forming PDE model parameters from stationary
//! pattern data.
//!
//! The crate simulates batches of pattern-formation models (reaction-diffusion,
//! mechano-chemical, reaction-diffusion-ODE) to their stationary regime, turns
//! the final states into empirical-CDF summary statistics of pairwise pattern
//! distances (correlation integral vectors), and wraps those statistics into a
//! Gaussian likelihood that can be optimised (differential evolution) and
//! sampled (adaptive Metropolis with delayed rejection).

pub mod grid;
pub mod infer;
pub mod likelihood;
pub mod model;
pub mod pattern;
pub mod rng;
pub mod sim;
pub mod solver;
pub mod store;

pub use grid::Grid;
pub use model::{ModelKind, ModelSpec, StateVector};

pub use rng::RngStream;
