//! Images as real-valued pixel grids on the `[0, 255]` scale.
//!
//! Pixels are stored row-major, so `as_slice` is the lexicographic vector
//! view used by every linear operator in the crate.

mod color;
mod io;
mod metrics;

pub use color::{rgb_to_ycbcr, ycbcr_to_rgb};
pub use io::{
    decode, encode, encode_color, encode_gray, load_image, save_color, save_gray, save_image, ImageFormat, LoadedImage,
};
pub use metrics::{mse, psnr, quality_report, shave_border, ssim, QualityReport, SSIM_WINDOW};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct Image<T> {
    height: usize,
    width: usize,
    pixels: Vec<T>,
}

impl<T: Real> Image<T> {
    /// Builds an image from row-major pixels. Rejects empty grids, length
    /// mismatches and non-finite values.
    pub fn from_vec(height: usize, width: usize, pixels: Vec<T>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::InvalidParameter(format!(
                "image dimensions must be positive, got {height}x{width}"
            )));
        }
        if pixels.len() != height * width {
            return Err(Error::DimensionMismatch {
                expected: format!("{} pixels", height * width),
                found: format!("{} pixels", pixels.len()),
            });
        }
        if let Some(i) = pixels.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFinite(format!("pixel {i}")));
        }
        Ok(Self {
            height,
            width,
            pixels,
        })
    }

    pub fn filled(height: usize, width: usize, value: T) -> Self {
        assert!(height > 0 && width > 0, "image dimensions must be positive");
        Self {
            height,
            width,
            pixels: vec![value; height * width],
        }
    }

    pub fn zeros(height: usize, width: usize) -> Self {
        Self::filled(height, width, T::zero())
    }

    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(height > 0 && width > 0, "image dimensions must be positive");
        let mut pixels = Vec::with_capacity(height * width);
        for i in 0..height {
            for j in 0..width {
                pixels.push(f(i, j));
            }
        }
        Self {
            height,
            width,
            pixels,
        }
    }

    /// Wraps a buffer produced internally; the caller guarantees the length.
    pub(crate) fn from_raw(height: usize, width: usize, pixels: Vec<T>) -> Self {
        debug_assert_eq!(pixels.len(), height * width);
        Self {
            height,
            width,
            pixels,
        }
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        self.pixels[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: T) {
        self.pixels[row * self.width + col] = value;
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.pixels
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.pixels
    }

    pub fn into_vec(self) -> Vec<T> {
        self.pixels
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self::from_raw(self.height, self.width, self.pixels.iter().map(|&p| f(p)).collect())
    }

    pub fn min_max(&self) -> (T, T) {
        self.pixels.iter().fold(
            (T::infinity(), T::neg_infinity()),
            |(lo, hi), &p| (lo.min(p), hi.max(p)),
        )
    }

    pub fn mean(&self) -> T {
        self.pixels.iter().copied().sum::<T>() / T::from_usize_lossy(self.len())
    }

    /// Central crop of `height x width`.
    pub fn center_crop(&self, height: usize, width: usize) -> Result<Self> {
        if height == 0 || width == 0 || height > self.height || width > self.width {
            return Err(Error::InvalidParameter(format!(
                "cannot crop {}x{} to {height}x{width}",
                self.height, self.width
            )));
        }
        let top = (self.height - height) / 2;
        let left = (self.width - width) / 2;
        Ok(Self::from_fn(height, width, |i, j| self.get(top + i, left + j)))
    }

    pub(crate) fn ensure_same_dims(&self, other: &Self) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch {
                expected: format!("{}x{}", self.height, self.width),
                found: format!("{}x{}", other.height, other.width),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColorSpace {
    Rgb,
    YCbCr,
}

impl ColorSpace {
    pub fn name(self) -> &'static str {
        match self {
            ColorSpace::Rgb => "RGB",
            ColorSpace::YCbCr => "YCbCr",
        }
    }
}

/// Three equally sized planes tagged with their color space.
#[derive(Clone, Debug, PartialEq)]
pub struct ColorImage<T> {
    space: ColorSpace,
    planes: [Image<T>; 3],
}

impl<T: Real> ColorImage<T> {
    pub fn new(space: ColorSpace, planes: [Image<T>; 3]) -> Result<Self> {
        planes[0].ensure_same_dims(&planes[1])?;
        planes[0].ensure_same_dims(&planes[2])?;
        Ok(Self { space, planes })
    }

    pub fn space(&self) -> ColorSpace {
        self.space
    }

    pub fn height(&self) -> usize {
        self.planes[0].height()
    }

    pub fn width(&self) -> usize {
        self.planes[0].width()
    }

    pub fn plane(&self, idx: usize) -> &Image<T> {
        &self.planes[idx]
    }

    pub fn planes(&self) -> &[Image<T>; 3] {
        &self.planes
    }

    pub fn into_planes(self) -> [Image<T>; 3] {
        self.planes
    }
}
