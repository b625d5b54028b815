//! Empirical Bayes reconstruction: CG posterior means, diagonal covariance
//! estimates and hyperparameter updates.

mod cg;
mod config;
mod covariance;
mod run;
mod updates;

pub use cg::{cg_solve, CgOutcome};
pub use config::EbsrConfig;
pub use covariance::{diag_covariance, diag_precision};
pub use run::{deblur_run, ebsr_run, EbsrReport, EbsrSolver, EbsrState, IterationLog};
pub use updates::{
    filtered_variance, gamma_from_terms, noise_trace, tau_from_terms, update_gamma, update_tau, TAU_MAX, TAU_MIN,
    TAU_TRACE_WEIGHT,
};

use crate::error::Result;
use crate::image::Image;
use crate::linops::{BlurDecimate, LinearOperator};
use crate::prior::{FilterBank, LatentVariances, PrecisionOperator};
use crate::scalar::Real;

/// Solves `W mu = tau H^T D^T y` for the current hyperparameters.
pub fn posterior_mean<T: Real>(
    y: &Image<T>,
    tau: T,
    bank: &FilterBank<T>,
    gamma: &LatentVariances<T>,
    dh: &BlurDecimate<T>,
    cfg: &EbsrConfig,
    warm_start: Option<&Image<T>>,
) -> Result<(Image<T>, CgOutcome<T>)> {
    if y.dims() != dh.lr_dims() {
        return Err(crate::error::Error::DimensionMismatch {
            expected: format!("{:?}", dh.lr_dims()),
            found: format!("{:?}", y.dims()),
        });
    }
    let op = PrecisionOperator::new(tau, bank, gamma, dh)?;
    let rhs: Vec<T> = dh.adjoint(y.as_slice()).into_iter().map(|v| v * tau).collect();
    let out = cg_solve(
        &op,
        &rhs,
        cfg.cg_tolerance,
        cfg.cg_max_iterations,
        warm_start.map(Image::as_slice),
    )?;
    let (h, w) = dh.hr_dims();
    Ok((Image::from_vec(h, w, out.solution.clone())?, out))
}
