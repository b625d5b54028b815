//! Blur, decimation and their adjoints under circular boundary conditions.

mod conv;
mod decimate;
mod kernel;
mod operator;

pub use conv::{
    conv2_adjoint, conv2_circular, correlate, correlate_adjoint, correlate_direct, correlate_fft, fft_conv2,
    FFT_CROSSOVER,
};
pub use decimate::{downsample, downsample_strict, upsample_zero, DecimationSpec};
pub use kernel::{Kernel, KernelRecord};
pub use operator::{compose_dh, BlurDecimate, ConvOperator, DecimationOperator, IdentityOperator, LinearOperator};
