use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::Image;
use crate::scalar::Real;

/// Keep-every-`factor` lattice; `phase` is the (row, col) offset of the
/// first retained sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecimationSpec {
    factor: usize,
    phase: (usize, usize),
}

impl DecimationSpec {
    pub fn new(factor: usize, phase: (usize, usize)) -> Result<Self> {
        if factor == 0 {
            return Err(Error::InvalidParameter("decimation factor must be >= 1".into()));
        }
        if phase.0 >= factor || phase.1 >= factor {
            return Err(Error::InvalidParameter(format!(
                "phase {phase:?} out of range for factor {factor}"
            )));
        }
        Ok(Self { factor, phase })
    }

    pub fn with_factor(factor: usize) -> Result<Self> {
        Self::new(factor, (0, 0))
    }

    pub fn factor(&self) -> usize {
        self.factor
    }

    pub fn phase(&self) -> (usize, usize) {
        self.phase
    }

    /// `ceil((dim - offset) / r)` along each axis.
    pub fn lr_dims(&self, hr: (usize, usize)) -> (usize, usize) {
        let r = self.factor;
        let axis = |n: usize, off: usize| if n > off { (n - off).div_ceil(r) } else { 0 };
        (axis(hr.0, self.phase.0), axis(hr.1, self.phase.1))
    }

    /// Strict mode: HR dimensions must be exact multiples of the factor.
    pub fn check_divisible(&self, hr: (usize, usize)) -> Result<()> {
        if hr.0 % self.factor != 0 || hr.1 % self.factor != 0 {
            return Err(Error::DimensionMismatch {
                expected: format!("dimensions divisible by {}", self.factor),
                found: format!("{}x{}", hr.0, hr.1),
            });
        }
        Ok(())
    }

    /// The 0/1 plane of retained lattice positions (the diagonal of `D^T D`).
    pub fn mask<T: Real>(&self, hr: (usize, usize)) -> Vec<T> {
        let mut m = vec![T::zero(); hr.0 * hr.1];
        let (lh, lw) = self.lr_dims(hr);
        for i in 0..lh {
            for j in 0..lw {
                m[(i * self.factor + self.phase.0) * hr.1 + j * self.factor + self.phase.1] = T::one();
            }
        }
        m
    }
}

pub(crate) fn decimate<T: Real>(x: &[T], hr: (usize, usize), spec: &DecimationSpec) -> Vec<T> {
    assert_eq!(x.len(), hr.0 * hr.1);
    let (lh, lw) = spec.lr_dims(hr);
    let r = spec.factor;
    let (p0, p1) = spec.phase;
    let mut out = Vec::with_capacity(lh * lw);
    for i in 0..lh {
        let row = &x[(i * r + p0) * hr.1..][..hr.1];
        out.extend((0..lw).map(|j| row[j * r + p1]));
    }
    out
}

pub(crate) fn zero_fill<T: Real>(y: &[T], hr: (usize, usize), spec: &DecimationSpec) -> Vec<T> {
    let (lh, lw) = spec.lr_dims(hr);
    assert_eq!(y.len(), lh * lw);
    let r = spec.factor;
    let (p0, p1) = spec.phase;
    let mut out = vec![T::zero(); hr.0 * hr.1];
    for i in 0..lh {
        for j in 0..lw {
            out[(i * r + p0) * hr.1 + j * r + p1] = y[i * lw + j];
        }
    }
    out
}

/// `output(i, j) = input(r i + phase.row, r j + phase.col)`.
pub fn downsample<T: Real>(img: &Image<T>, spec: &DecimationSpec) -> Result<Image<T>> {
    let (lh, lw) = spec.lr_dims(img.dims());
    if lh == 0 || lw == 0 {
        return Err(Error::InvalidParameter(format!(
            "phase {:?} leaves no samples in a {}x{} image",
            spec.phase,
            img.height(),
            img.width()
        )));
    }
    Ok(Image::from_raw(lh, lw, decimate(img.as_slice(), img.dims(), spec)))
}

/// Same as [`downsample`] but rejects HR sizes that are not multiples of r.
pub fn downsample_strict<T: Real>(img: &Image<T>, spec: &DecimationSpec) -> Result<Image<T>> {
    spec.check_divisible(img.dims())?;
    downsample(img, spec)
}

/// Adjoint of [`downsample`]: places LR samples on the lattice of an
/// `hr`-sized zero image.
pub fn upsample_zero<T: Real>(img: &Image<T>, spec: &DecimationSpec, hr: (usize, usize)) -> Result<Image<T>> {
    let lr = spec.lr_dims(hr);
    if img.dims() != lr {
        return Err(Error::DimensionMismatch {
            expected: format!("{}x{}", lr.0, lr.1),
            found: format!("{}x{}", img.height(), img.width()),
        });
    }
    Ok(Image::from_raw(hr.0, hr.1, zero_fill(img.as_slice(), hr, spec)))
}
