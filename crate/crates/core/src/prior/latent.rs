use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::Image;
use crate::scalar::Real;

/// Per-filter, per-pixel variances of the Gaussian scale mixture experts.
#[derive(Clone, Debug, PartialEq)]
pub struct LatentVariances<T> {
    planes: Vec<Image<T>>,
}

impl<T: Real> LatentVariances<T> {
    pub fn constant(filters: usize, dims: (usize, usize), value: T) -> Self {
        Self {
            planes: (0..filters).map(|_| Image::filled(dims.0, dims.1, value)).collect(),
        }
    }

    /// Wraps planes, raising every entry to at least `floor`.
    pub fn from_planes(planes: Vec<Image<T>>, floor: T) -> Result<Self> {
        if let Some(first) = planes.first() {
            for p in &planes[1..] {
                first.ensure_same_dims(p)?;
            }
        }
        if !(floor > T::zero()) {
            return Err(Error::InvalidParameter("gamma floor must be positive".into()));
        }
        Ok(Self {
            planes: planes.into_iter().map(|p| p.map(|g| g.max(floor))).collect(),
        })
    }

    pub fn planes(&self) -> &[Image<T>] {
        &self.planes
    }

    pub fn plane(&self, l: usize) -> &Image<T> {
        &self.planes[l]
    }

    pub fn len(&self) -> usize {
        self.planes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.planes.is_empty()
    }

    pub fn dims(&self) -> Option<(usize, usize)> {
        self.planes.first().map(Image::dims)
    }

    pub fn min(&self) -> T {
        self.planes
            .iter()
            .flat_map(|p| p.as_slice().iter().copied())
            .fold(T::infinity(), T::min)
    }

    pub fn means(&self) -> Vec<f64> {
        self.planes.iter().map(|p| p.mean().to_f64_lossy()).collect()
    }
}

/// Gamma hyperprior parameters: `(a, b)` for the latent variances and
/// `(a0, b0)` for the noise precision.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperParams {
    pub a: f64,
    pub b: f64,
    pub a0: f64,
    pub b0: f64,
}

impl Default for HyperParams {
    /// `a = b = 0`, and the uninformative noise prior `a0 = 1, b0 = 0`.
    fn default() -> Self {
        Self {
            a: 0.0,
            b: 0.0,
            a0: 1.0,
            b0: 0.0,
        }
    }
}

impl HyperParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a", self.a), ("b", self.b), ("a0", self.a0), ("b0", self.b0)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "hyperparameter {name} must be finite and non-negative, got {v}"
                )));
            }
        }
        Ok(())
    }
}
