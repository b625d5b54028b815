use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prior::HyperParams;

/// Settings of the empirical Bayes loop.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EbsrConfig {
    pub iterations: usize,
    pub cg_tolerance: f64,
    pub cg_max_iterations: usize,
    pub gamma_floor: f64,
    pub gamma_init: f64,
    /// Starting noise precision. Large on purpose: a small value lets the
    /// prior flatten the first estimate and the loop stalls on a blurry
    /// fixed point.
    pub tau_init: f64,
    pub hyper: HyperParams,
    /// Fixes the noise std instead of estimating it.
    pub known_sigma: Option<f64>,
    /// Start each CG solve from the previous posterior mean.
    pub warm_start: bool,
}

impl Default for EbsrConfig {
    fn default() -> Self {
        Self {
            iterations: 10,
            cg_tolerance: 1e-6,
            cg_max_iterations: 500,
            gamma_floor: 1e-10,
            gamma_init: 1e-5,
            tau_init: 1e8,
            hyper: HyperParams::default(),
            known_sigma: None,
            warm_start: true,
        }
    }
}

impl EbsrConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.iterations == 0 {
            return bad("iteration count must be at least 1".into());
        }
        if self.cg_max_iterations == 0 {
            return bad("cg iteration cap must be at least 1".into());
        }
        for (name, v) in [
            ("cg tolerance", self.cg_tolerance),
            ("gamma floor", self.gamma_floor),
            ("gamma init", self.gamma_init),
            ("tau init", self.tau_init),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return bad(format!("{name} must be positive and finite, got {v}"));
            }
        }
        if let Some(s) = self.known_sigma {
            if !(s >= 0.0) || !s.is_finite() {
                return bad(format!("known sigma must be non-negative, got {s}"));
            }
        }
        self.hyper.validate()
    }
}
