//! Circular 2-D filtering.
//!
//! `out(i, j) = sum_{a,b} k(a, b) * x(i + a - ca, j + b - cb)` with indices
//! taken modulo the image size and `(ca, cb)` the kernel anchor. The adjoint
//! is the same operation with the 180-degree rotated kernel.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::Kernel;
use crate::error::{Error, Result};
use crate::image::Image;
use crate::scalar::Real;

/// Kernel area times image area above which the FFT path is used.
pub const FFT_CROSSOVER: usize = 4_000_000;

pub(crate) fn check_fits<T: Real>(h: usize, w: usize, k: &Kernel<T>) -> Result<()> {
    if k.height() > h || k.width() > w {
        return Err(Error::KernelTooLarge {
            kernel_h: k.height(),
            kernel_w: k.width(),
            image_h: h,
            image_w: w,
        });
    }
    Ok(())
}

/// Direct circular filtering on a row-major buffer. Accumulation order is
/// fixed (taps in row-major order), so results are bit-reproducible.
pub fn correlate_direct<T: Real>(x: &[T], h: usize, w: usize, k: &Kernel<T>) -> Vec<T> {
    assert_eq!(x.len(), h * w, "buffer does not match {h}x{w}");
    let (ca, cb) = k.anchor();
    let mut out = vec![T::zero(); h * w];
    for a in 0..k.height() {
        let di = (a + h - ca % h) % h;
        for b in 0..k.width() {
            let tap = k.get(a, b);
            if tap == T::zero() {
                continue;
            }
            let dj = (b + w - cb % w) % w;
            for i in 0..h {
                let src = &x[((i + di) % h) * w..][..w];
                let dst = &mut out[i * w..][..w];
                // dst[j] += tap * src[(j + dj) % w], split at the wrap point
                let (head, tail) = dst.split_at_mut(w - dj);
                for (d, &s) in head.iter_mut().zip(&src[dj..]) {
                    *d = *d + tap * s;
                }
                for (d, &s) in tail.iter_mut().zip(&src[..dj]) {
                    *d = *d + tap * s;
                }
            }
        }
    }
    out
}

fn fft_rows<T: Real>(data: &mut [Complex<T>], h: usize, w: usize, planner: &mut FftPlanner<T>, inverse: bool) {
    let fft = if inverse {
        planner.plan_fft_inverse(w)
    } else {
        planner.plan_fft_forward(w)
    };
    for row in data.chunks_exact_mut(w) {
        fft.process(row);
    }
    let fft = if inverse {
        planner.plan_fft_inverse(h)
    } else {
        planner.plan_fft_forward(h)
    };
    let mut col = vec![Complex::new(T::zero(), T::zero()); h];
    for j in 0..w {
        for i in 0..h {
            col[i] = data[i * w + j];
        }
        fft.process(&mut col);
        for i in 0..h {
            data[i * w + j] = col[i];
        }
    }
}

/// Frequency-domain circular filtering; agrees with [`correlate_direct`] to
/// rounding error.
pub fn correlate_fft<T: Real>(x: &[T], h: usize, w: usize, k: &Kernel<T>) -> Vec<T> {
    assert_eq!(x.len(), h * w, "buffer does not match {h}x{w}");
    let zero = Complex::new(T::zero(), T::zero());
    let (ca, cb) = k.anchor();
    // g((ca - a) mod h, (cb - b) mod w) = k(a, b) turns filtering into a
    // plain circular convolution, i.e. a pointwise spectral product
    let mut g = vec![zero; h * w];
    for a in 0..k.height() {
        let gi = (ca + h * k.height() - a) % h;
        for b in 0..k.width() {
            let gj = (cb + w * k.width() - b) % w;
            g[gi * w + gj] = g[gi * w + gj] + Complex::new(k.get(a, b), T::zero());
        }
    }
    let mut xs: Vec<Complex<T>> = x.iter().map(|&v| Complex::new(v, T::zero())).collect();
    let mut planner = FftPlanner::new();
    fft_rows(&mut g, h, w, &mut planner, false);
    fft_rows(&mut xs, h, w, &mut planner, false);
    for (a, b) in xs.iter_mut().zip(&g) {
        *a = *a * *b;
    }
    fft_rows(&mut xs, h, w, &mut planner, true);
    let scale = T::one() / T::from_usize_lossy(h * w);
    xs.into_iter().map(|c| c.re * scale).collect()
}

/// Circular filtering on a buffer, picking direct or FFT evaluation by size.
pub fn correlate<T: Real>(x: &[T], h: usize, w: usize, k: &Kernel<T>) -> Vec<T> {
    if k.height() * k.width() * h * w > FFT_CROSSOVER {
        correlate_fft(x, h, w, k)
    } else {
        correlate_direct(x, h, w, k)
    }
}

/// Adjoint of [`correlate`]: filtering with the flipped kernel.
pub fn correlate_adjoint<T: Real>(x: &[T], h: usize, w: usize, k: &Kernel<T>) -> Vec<T> {
    correlate(x, h, w, &k.flipped())
}

pub fn conv2_circular<T: Real>(img: &Image<T>, k: &Kernel<T>) -> Result<Image<T>> {
    let (h, w) = img.dims();
    check_fits(h, w, k)?;
    Ok(Image::from_raw(h, w, correlate(img.as_slice(), h, w, k)))
}

pub fn conv2_adjoint<T: Real>(img: &Image<T>, k: &Kernel<T>) -> Result<Image<T>> {
    conv2_circular(img, &k.flipped())
}

pub fn fft_conv2<T: Real>(img: &Image<T>, k: &Kernel<T>) -> Result<Image<T>> {
    let (h, w) = img.dims();
    check_fits(h, w, k)?;
    Ok(Image::from_raw(h, w, correlate_fft(img.as_slice(), h, w, k)))
}
