//! Fixed-point updates of the latent variances and the noise precision.

use crate::error::{Error, Result};
use crate::image::Image;
use crate::linops::{correlate, BlurDecimate, Kernel, LinearOperator};
use crate::prior::{HyperParams, LatentVariances};
use crate::scalar::Real;

/// Weight of the covariance trace in the noise update denominator.
pub const TAU_TRACE_WEIGHT: f64 = 2.0;
pub const TAU_MIN: f64 = 1e-12;
pub const TAU_MAX: f64 = 1e12;

/// `diag(K Sigma K^T)` for a diagonal `Sigma = diag(v)`: filtering `v`
/// with the squared kernel.
pub fn filtered_variance<T: Real>(v: &Image<T>, k: &Kernel<T>) -> Vec<T> {
    let (h, w) = v.dims();
    correlate(v.as_slice(), h, w, &k.squared())
}

/// `gamma = (u^2 + z + 2b) / (1 + 2a)`, floored.
pub fn gamma_from_terms(u: f64, z: f64, hyper: &HyperParams, floor: f64) -> f64 {
    ((u * u + z + 2.0 * hyper.b) / (1.0 + 2.0 * hyper.a)).max(floor)
}

pub fn update_gamma<T: Real>(
    mu: &Image<T>,
    v: &Image<T>,
    filters: &[Kernel<T>],
    hyper: &HyperParams,
    floor: f64,
) -> Result<LatentVariances<T>> {
    mu.ensure_same_dims(v)?;
    let (h, w) = mu.dims();
    let denom = T::lit(1.0 + 2.0 * hyper.a);
    let two_b = T::lit(2.0 * hyper.b);
    let planes = filters
        .iter()
        .map(|k| {
            let u = correlate(mu.as_slice(), h, w, k);
            let z = filtered_variance(v, k);
            let g = u
                .iter()
                .zip(&z)
                .map(|(&u, &z)| (u * u + z + two_b) / denom)
                .collect();
            Image::from_raw(h, w, g)
        })
        .collect();
    LatentVariances::from_planes(planes, T::lit(floor))
}

/// `w = trace(D H Sigma H^T D^T)` with `Sigma = diag(v)`.
pub fn noise_trace<T: Real>(v: &Image<T>, dh: &BlurDecimate<T>) -> Result<T> {
    if v.dims() != dh.hr_dims() {
        return Err(Error::DimensionMismatch {
            expected: format!("{:?}", dh.hr_dims()),
            found: format!("{:?}", v.dims()),
        });
    }
    let spread = filtered_variance(v, dh.blur());
    let mask: Vec<T> = dh.spec().mask(dh.hr_dims());
    Ok(spread
        .iter()
        .zip(&mask)
        .fold(T::zero(), |acc, (&s, &m)| acc + s * m))
}

/// `tau = (n/2 + a0) / (||r||^2 / 2 + 2w + b0)`, clamped.
pub fn tau_from_terms(n: usize, residual_sq: f64, w: f64, hyper: &HyperParams) -> f64 {
    let num = n as f64 / 2.0 + hyper.a0;
    let den = 0.5 * residual_sq + TAU_TRACE_WEIGHT * w + hyper.b0;
    let tau = num / den;
    if tau.is_nan() {
        TAU_MAX
    } else {
        tau.clamp(TAU_MIN, TAU_MAX)
    }
}

pub fn update_tau<T: Real>(
    y: &Image<T>,
    mu: &Image<T>,
    v: &Image<T>,
    dh: &BlurDecimate<T>,
    hyper: &HyperParams,
) -> Result<T> {
    if y.dims() != dh.lr_dims() || mu.dims() != dh.hr_dims() {
        return Err(Error::DimensionMismatch {
            expected: format!("LR {:?}, HR {:?}", dh.lr_dims(), dh.hr_dims()),
            found: format!("LR {:?}, HR {:?}", y.dims(), mu.dims()),
        });
    }
    let pred = dh.forward(mu.as_slice());
    let residual_sq = y
        .as_slice()
        .iter()
        .zip(&pred)
        .fold(0.0, |acc, (&a, &b)| {
            let d = (a - b).to_f64_lossy();
            acc + d * d
        });
    let w = noise_trace(v, dh)?.to_f64_lossy();
    Ok(T::lit(tau_from_terms(y.len(), residual_sq, w, hyper)))
}
