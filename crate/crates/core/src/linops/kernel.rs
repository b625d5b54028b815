use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Small odd-sized 2-D stencil anchored at its centre tap.
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel<T> {
    height: usize,
    width: usize,
    taps: Vec<T>,
}

/// Plain serialized form, shared with the filter-bank file format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelRecord {
    pub height: usize,
    pub width: usize,
    pub taps: Vec<f64>,
}

impl<T: Real> Kernel<T> {
    pub fn new(height: usize, width: usize, taps: Vec<T>) -> Result<Self> {
        if height % 2 == 0 || width % 2 == 0 {
            return Err(Error::InvalidKernel(format!(
                "kernel dimensions must be odd, got {height}x{width}"
            )));
        }
        if taps.len() != height * width {
            return Err(Error::InvalidKernel(format!(
                "{height}x{width} kernel needs {} taps, got {}",
                height * width,
                taps.len()
            )));
        }
        if taps.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidKernel("non-finite tap".into()));
        }
        Ok(Self {
            height,
            width,
            taps,
        })
    }

    pub fn from_rows<const W: usize>(rows: &[[f64; W]]) -> Result<Self> {
        let taps = rows.iter().flatten().map(|&v| T::lit(v)).collect();
        Self::new(rows.len(), W, taps)
    }

    pub fn identity() -> Self {
        Self {
            height: 1,
            width: 1,
            taps: vec![T::one()],
        }
    }

    /// Isotropic Gaussian sampled at integer offsets, normalized to unit sum.
    pub fn gaussian(std: f64, size: usize) -> Result<Self> {
        if !(std > 0.0) || !std.is_finite() {
            return Err(Error::InvalidKernel(format!(
                "gaussian std must be positive, got {std}"
            )));
        }
        if size % 2 == 0 {
            return Err(Error::InvalidKernel(format!(
                "gaussian size must be odd, got {size}"
            )));
        }
        let c = (size / 2) as f64;
        let mut raw = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                let d2 = (i as f64 - c).powi(2) + (j as f64 - c).powi(2);
                raw.push((-d2 / (2.0 * std * std)).exp());
            }
        }
        let total: f64 = raw.iter().sum();
        Self::new(size, size, raw.into_iter().map(|v| T::lit(v / total)).collect())
    }

    /// Blur matching a zoom factor: std `2r/3`, size `2r + 1`, which gives
    /// std 2 on a 7x7 support at r = 3.
    pub fn blur_for_scale(scale: usize) -> Result<Self> {
        if scale == 0 {
            return Err(Error::InvalidParameter("scale must be at least 1".into()));
        }
        Self::gaussian(2.0 * scale as f64 / 3.0, 2 * scale + 1)
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
    pub fn taps(&self) -> &[T] {
        &self.taps
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        self.taps[row * self.width + col]
    }

    pub fn anchor(&self) -> (usize, usize) {
        (self.height / 2, self.width / 2)
    }

    /// Rotation by 180 degrees (`fliplr(flipud(k))`).
    pub fn flipped(&self) -> Self {
        let mut taps = self.taps.clone();
        taps.reverse();
        Self {
            height: self.height,
            width: self.width,
            taps,
        }
    }

    /// Element-wise square of the taps.
    pub fn squared(&self) -> Self {
        Self {
            height: self.height,
            width: self.width,
            taps: self.taps.iter().map(|&t| t * t).collect(),
        }
    }

    pub fn sum(&self) -> T {
        self.taps.iter().copied().sum()
    }

    pub fn norm(&self) -> T {
        crate::scalar::norm(&self.taps)
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self {
            height: self.height,
            width: self.width,
            taps: self.taps.iter().map(|&t| t * factor).collect(),
        }
    }

    /// Zero-pads to a larger odd support, keeping the anchor centred.
    pub fn padded(&self, height: usize, width: usize) -> Result<Self> {
        if height < self.height || width < self.width {
            return Err(Error::InvalidKernel("cannot pad to a smaller support".into()));
        }
        let (dy, dx) = ((height - self.height) / 2, (width - self.width) / 2);
        let mut taps = vec![T::zero(); height * width];
        for i in 0..self.height {
            for j in 0..self.width {
                taps[(i + dy) * width + j + dx] = self.get(i, j);
            }
        }
        Self::new(height, width, taps)
    }

    pub fn to_record(&self) -> KernelRecord {
        KernelRecord {
            height: self.height,
            width: self.width,
            taps: self.taps.iter().map(|t| t.to_f64_lossy()).collect(),
        }
    }

    pub fn from_record(rec: &KernelRecord) -> Result<Self> {
        Self::new(
            rec.height,
            rec.width,
            rec.taps.iter().map(|&v| T::lit(v)).collect(),
        )
    }
}
