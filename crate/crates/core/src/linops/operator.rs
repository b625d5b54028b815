//! Matrix-free linear maps on lexicographically ordered images.

use super::conv::{check_fits, correlate, correlate_adjoint};
use super::decimate::{decimate, zero_fill};
use super::{DecimationSpec, Kernel};
use crate::error::Result;
use crate::scalar::Real;

/// A linear map between image spaces with an exact adjoint.
///
/// Both maps act on row-major vectors of length `h * w` for the respective
/// dimensions; passing a vector of the wrong length is a programming error
/// and panics.
pub trait LinearOperator<T: Real>: Send + Sync {
    fn input_dims(&self) -> (usize, usize);
    fn output_dims(&self) -> (usize, usize);
    fn forward(&self, x: &[T]) -> Vec<T>;
    fn adjoint(&self, y: &[T]) -> Vec<T>;

    fn input_len(&self) -> usize {
        let (h, w) = self.input_dims();
        h * w
    }

    fn output_len(&self) -> usize {
        let (h, w) = self.output_dims();
        h * w
    }
}

#[derive(Clone, Debug)]
pub struct IdentityOperator {
    dims: (usize, usize),
}

impl IdentityOperator {
    pub fn new(dims: (usize, usize)) -> Self {
        Self { dims }
    }
}

impl<T: Real> LinearOperator<T> for IdentityOperator {
    fn input_dims(&self) -> (usize, usize) {
        self.dims
    }
    fn output_dims(&self) -> (usize, usize) {
        self.dims
    }
    fn forward(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.dims.0 * self.dims.1);
        x.to_vec()
    }
    fn adjoint(&self, y: &[T]) -> Vec<T> {
        assert_eq!(y.len(), self.dims.0 * self.dims.1);
        y.to_vec()
    }
}

/// Circular filtering with a fixed kernel.
#[derive(Clone, Debug)]
pub struct ConvOperator<T> {
    kernel: Kernel<T>,
    flipped: Kernel<T>,
    dims: (usize, usize),
}

impl<T: Real> ConvOperator<T> {
    pub fn new(kernel: Kernel<T>, dims: (usize, usize)) -> Result<Self> {
        check_fits(dims.0, dims.1, &kernel)?;
        let flipped = kernel.flipped();
        Ok(Self {
            kernel,
            flipped,
            dims,
        })
    }

    pub fn kernel(&self) -> &Kernel<T> {
        &self.kernel
    }
}

impl<T: Real> LinearOperator<T> for ConvOperator<T> {
    fn input_dims(&self) -> (usize, usize) {
        self.dims
    }
    fn output_dims(&self) -> (usize, usize) {
        self.dims
    }
    fn forward(&self, x: &[T]) -> Vec<T> {
        correlate(x, self.dims.0, self.dims.1, &self.kernel)
    }
    fn adjoint(&self, y: &[T]) -> Vec<T> {
        correlate(y, self.dims.0, self.dims.1, &self.flipped)
    }
}

#[derive(Clone, Debug)]
pub struct DecimationOperator {
    spec: DecimationSpec,
    hr: (usize, usize),
}

impl DecimationOperator {
    pub fn new(spec: DecimationSpec, hr: (usize, usize)) -> Self {
        Self { spec, hr }
    }
}

impl<T: Real> LinearOperator<T> for DecimationOperator {
    fn input_dims(&self) -> (usize, usize) {
        self.hr
    }
    fn output_dims(&self) -> (usize, usize) {
        self.spec.lr_dims(self.hr)
    }
    fn forward(&self, x: &[T]) -> Vec<T> {
        decimate(x, self.hr, &self.spec)
    }
    fn adjoint(&self, y: &[T]) -> Vec<T> {
        zero_fill(y, self.hr, &self.spec)
    }
}

/// The observation operator `D H`: blur, then keep every r-th sample.
#[derive(Clone, Debug)]
pub struct BlurDecimate<T> {
    blur: Kernel<T>,
    spec: DecimationSpec,
    hr: (usize, usize),
}

impl<T: Real> BlurDecimate<T> {
    pub fn new(blur: Kernel<T>, spec: DecimationSpec, hr: (usize, usize)) -> Result<Self> {
        spec.check_divisible(hr)?;
        check_fits(hr.0, hr.1, &blur)?;
        Ok(Self { blur, spec, hr })
    }

    pub fn blur(&self) -> &Kernel<T> {
        &self.blur
    }

    pub fn spec(&self) -> &DecimationSpec {
        &self.spec
    }

    pub fn hr_dims(&self) -> (usize, usize) {
        self.hr
    }

    pub fn lr_dims(&self) -> (usize, usize) {
        self.spec.lr_dims(self.hr)
    }

    /// `H^T D^T D H x`.
    pub fn normal(&self, x: &[T]) -> Vec<T> {
        self.adjoint(&self.forward(x))
    }
}

impl<T: Real> LinearOperator<T> for BlurDecimate<T> {
    fn input_dims(&self) -> (usize, usize) {
        self.hr
    }
    fn output_dims(&self) -> (usize, usize) {
        self.spec.lr_dims(self.hr)
    }
    fn forward(&self, x: &[T]) -> Vec<T> {
        decimate(&correlate(x, self.hr.0, self.hr.1, &self.blur), self.hr, &self.spec)
    }
    fn adjoint(&self, y: &[T]) -> Vec<T> {
        correlate_adjoint(&zero_fill(y, self.hr, &self.spec), self.hr.0, self.hr.1, &self.blur)
    }
}

/// Builds the `D H` operator for an HR grid.
pub fn compose_dh<T: Real>(h: Kernel<T>, spec: DecimationSpec, hr_dims: (usize, usize)) -> Result<BlurDecimate<T>> {
    BlurDecimate::new(h, spec, hr_dims)
}
