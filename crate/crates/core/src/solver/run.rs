//! The outer empirical Bayes loop.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::cg::cg_solve;
use super::config::EbsrConfig;
use super::covariance::{diag_covariance, diag_precision};
use super::updates::{update_gamma, update_tau, TAU_MAX, TAU_MIN};
use crate::error::{Error, Result};
use crate::image::Image;
use crate::linops::{compose_dh, BlurDecimate, DecimationSpec, Kernel, KernelRecord, LinearOperator};
use crate::prior::{FilterBank, LatentVariances, PrecisionOperator};
use crate::scalar::Real;

/// Everything the loop carries from one iteration to the next.
#[derive(Clone, Debug)]
pub struct EbsrState<T> {
    pub mu: Image<T>,
    pub gamma: LatentVariances<T>,
    pub tau: T,
    /// Approximate posterior variances, `diag(Sigma_x)`.
    pub v: Image<T>,
    pub iteration: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationLog {
    pub iter: usize,
    pub sigma_est: f64,
    pub cg_iters: usize,
    pub cg_residual: f64,
    pub mean_gamma: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EbsrReport {
    pub iterations: Vec<IterationLog>,
    pub kernel: KernelRecord,
    pub scale: usize,
    pub total_seconds: f64,
}

/// Stepwise driver, useful when the caller wants to inspect the state
/// between iterations.
pub struct EbsrSolver<'a, T> {
    y: &'a Image<T>,
    bank: &'a FilterBank<T>,
    cfg: EbsrConfig,
    dh: BlurDecimate<T>,
    rhs_base: Vec<T>,
    state: EbsrState<T>,
}

fn tau_for_sigma(s: f64) -> f64 {
    if s == 0.0 {
        TAU_MAX
    } else {
        (1.0 / (s * s)).clamp(TAU_MIN, TAU_MAX)
    }
}

impl<'a, T: Real> EbsrSolver<'a, T> {
    pub fn new(
        y: &'a Image<T>,
        scale: usize,
        blur: &Kernel<T>,
        bank: &'a FilterBank<T>,
        cfg: &EbsrConfig,
    ) -> Result<Self> {
        cfg.validate()?;
        let spec = DecimationSpec::with_factor(scale)?;
        let hr = (y.height() * scale, y.width() * scale);
        let dh = compose_dh(blur.clone(), spec, hr)?;
        for k in bank.filters() {
            if k.height() > hr.0 || k.width() > hr.1 {
                return Err(Error::KernelTooLarge {
                    kernel_h: k.height(),
                    kernel_w: k.width(),
                    image_h: hr.0,
                    image_w: hr.1,
                });
            }
        }
        let rhs_base = dh.adjoint(y.as_slice());
        let tau = cfg.known_sigma.map_or(cfg.tau_init, tau_for_sigma);
        let state = EbsrState {
            mu: Image::from_raw(hr.0, hr.1, rhs_base.clone()),
            gamma: LatentVariances::constant(bank.len(), hr, T::lit(cfg.gamma_init)),
            tau: T::lit(tau),
            v: Image::filled(hr.0, hr.1, T::one()),
            iteration: 0,
        };
        Ok(Self {
            y,
            bank,
            cfg: cfg.clone(),
            dh,
            rhs_base,
            state,
        })
    }

    pub fn state(&self) -> &EbsrState<T> {
        &self.state
    }

    pub fn operator(&self) -> &BlurDecimate<T> {
        &self.dh
    }

    pub fn into_state(self) -> EbsrState<T> {
        self.state
    }

    /// One pass: posterior mean, variances, latent variances, noise.
    pub fn step(&mut self) -> Result<IterationLog> {
        let st = &mut self.state;
        let filters = self.bank.filters();

        let op = PrecisionOperator::new(st.tau, self.bank, &st.gamma, &self.dh)?;
        let rhs: Vec<T> = self.rhs_base.iter().map(|&v| v * st.tau).collect();
        let warm = self.cfg.warm_start.then_some(st.mu.as_slice());
        let cg = cg_solve(&op, &rhs, self.cfg.cg_tolerance, self.cfg.cg_max_iterations, warm)?;
        let (h, w) = self.dh.hr_dims();
        st.mu = Image::from_raw(h, w, cg.solution);
        if st.mu.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("posterior mean".into()));
        }

        let d = diag_precision(st.tau, &self.dh, filters, &st.gamma)?;
        st.v = diag_covariance(&d)?;
        st.gamma = update_gamma(&st.mu, &st.v, filters, &self.cfg.hyper, self.cfg.gamma_floor)?;

        let sigma_est = match self.cfg.known_sigma {
            Some(s) => s,
            None => {
                st.tau = update_tau(self.y, &st.mu, &st.v, &self.dh, &self.cfg.hyper)?;
                1.0 / st.tau.to_f64_lossy().sqrt()
            }
        };
        st.iteration += 1;
        Ok(IterationLog {
            iter: st.iteration,
            sigma_est,
            cg_iters: cg.iterations,
            cg_residual: cg.residual,
            mean_gamma: st.gamma.means(),
        })
    }
}

/// Reconstructs an HR image `scale` times larger than `y`.
pub fn ebsr_run<T: Real>(
    y: &Image<T>,
    scale: usize,
    blur: &Kernel<T>,
    bank: &FilterBank<T>,
    cfg: &EbsrConfig,
) -> Result<(Image<T>, EbsrReport)> {
    let start = Instant::now();
    let mut solver = EbsrSolver::new(y, scale, blur, bank, cfg)?;
    let mut iterations = Vec::with_capacity(cfg.iterations);
    for _ in 0..cfg.iterations {
        iterations.push(solver.step()?);
    }
    let report = EbsrReport {
        iterations,
        kernel: blur.to_record(),
        scale,
        total_seconds: start.elapsed().as_secs_f64(),
    };
    Ok((solver.into_state().mu, report))
}

/// Deconvolution: the same loop without decimation.
pub fn deblur_run<T: Real>(
    y: &Image<T>,
    blur: &Kernel<T>,
    bank: &FilterBank<T>,
    cfg: &EbsrConfig,
) -> Result<(Image<T>, EbsrReport)> {
    ebsr_run(y, 1, blur, bank, cfg)
}
