//! Diagonal of the posterior precision and the reciprocal covariance estimate.

use crate::error::{Error, Result};
use crate::image::Image;
use crate::linops::{correlate_adjoint, BlurDecimate, Kernel};
use crate::prior::LatentVariances;
use crate::scalar::Real;

/// `diag(W)` without forming `W`.
///
/// Row `j` of a circulant filter matrix holds the kernel taps, so the
/// diagonal of `K^T diag(c) K` is the adjoint filtering of `c` with the
/// squared kernel. The likelihood term uses the lattice mask as `c`.
pub fn diag_precision<T: Real>(
    tau: T,
    dh: &BlurDecimate<T>,
    filters: &[Kernel<T>],
    gamma: &LatentVariances<T>,
) -> Result<Image<T>> {
    let (h, w) = dh.hr_dims();
    if gamma.len() != filters.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} gamma planes", filters.len()),
            found: format!("{}", gamma.len()),
        });
    }
    if let Some(d) = gamma.dims() {
        if d != (h, w) {
            return Err(Error::DimensionMismatch {
                expected: format!("{h}x{w}"),
                found: format!("{}x{}", d.0, d.1),
            });
        }
    }
    let mask: Vec<T> = dh.spec().mask((h, w));
    let mut diag = correlate_adjoint(&mask, h, w, &dh.blur().squared());
    for d in diag.iter_mut() {
        *d = *d * tau;
    }
    for (k, g) in filters.iter().zip(gamma.planes()) {
        let inv: Vec<T> = g.as_slice().iter().map(|&v| T::one() / v).collect();
        let term = correlate_adjoint(&inv, h, w, &k.squared());
        for (d, t) in diag.iter_mut().zip(term) {
            *d = *d + t;
        }
    }
    Image::from_vec(h, w, diag)
}

/// Approximates `diag(W^-1)` by `1 / diag(W)`.
pub fn diag_covariance<T: Real>(diag_w: &Image<T>) -> Result<Image<T>> {
    if let Some(bad) = diag_w.as_slice().iter().find(|&&d| !(d > T::zero())) {
        return Err(Error::InvalidParameter(format!(
            "precision diagonal must be positive, found {bad}"
        )));
    }
    Ok(diag_w.map(|d| T::one() / d))
}
