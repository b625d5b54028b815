//! Empirical Bayesian image super-resolution and deblurring.
//!
//! A high-resolution image is recovered from a blurred, decimated and noisy
//! observation `y = D H x + n` under a field-of-experts prior whose experts
//! are Gaussian scale mixtures. The per-pixel expert variances and the
//! noise precision are learned by evidence maximization; every operator is
//! applied matrix-free under circular boundary conditions.
//!
//! The engine is generic over `f32` and `f64`; the aliases at the crate
//! root fix it to `f64`.

pub mod baselines;
pub mod error;
pub mod image;
pub mod linops;
pub mod oracle;
pub mod prior;
pub mod scalar;
pub mod solver;

pub use error::{Error, Result};
pub use scalar::Real;

pub type GrayImage = image::Image<f64>;
pub type ColorImage = image::ColorImage<f64>;
pub type Kernel2D = linops::Kernel<f64>;
pub type FilterBank = prior::FilterBank<f64>;
pub type LatentVariances = prior::LatentVariances<f64>;
pub type EbsrState = solver::EbsrState<f64>;
