//! PSNR and SSIM on the `[0, 255]` scale.

use serde::{Deserialize, Serialize};

use super::Image;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Side length of the SSIM Gaussian window.
pub const SSIM_WINDOW: usize = 11;
const SSIM_SIGMA: f64 = 1.5;
const K1: f64 = 0.01;
const K2: f64 = 0.03;
const PEAK: f64 = 255.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QualityReport {
    pub psnr: f64,
    pub ssim: f64,
    pub mse: f64,
}

pub fn mse<T: Real>(reference: &Image<T>, estimate: &Image<T>) -> Result<f64> {
    reference.ensure_same_dims(estimate)?;
    let sum = reference
        .as_slice()
        .iter()
        .zip(estimate.as_slice())
        .fold(0.0, |acc, (&a, &b)| {
            let d = a.to_f64_lossy() - b.to_f64_lossy();
            acc + d * d
        });
    Ok(sum / reference.len() as f64)
}

/// `10 log10(255^2 / mse)`; `+inf` when the images are identical.
pub fn psnr<T: Real>(reference: &Image<T>, estimate: &Image<T>) -> Result<f64> {
    let m = mse(reference, estimate)?;
    if m == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (PEAK * PEAK / m).log10())
}

fn gaussian_taps() -> [f64; SSIM_WINDOW] {
    let c = (SSIM_WINDOW / 2) as f64;
    let mut taps = [0.0; SSIM_WINDOW];
    for (i, t) in taps.iter_mut().enumerate() {
        let d = i as f64 - c;
        *t = (-d * d / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp();
    }
    let s: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= s);
    taps
}

/// Separable Gaussian filter keeping only windows that fit entirely.
fn filter_valid(src: &[f64], h: usize, w: usize, taps: &[f64; SSIM_WINDOW]) -> Vec<f64> {
    let (oh, ow) = (h + 1 - SSIM_WINDOW, w + 1 - SSIM_WINDOW);
    let mut rows = vec![0.0; h * ow];
    for i in 0..h {
        for j in 0..ow {
            let mut acc = 0.0;
            for (t, &tap) in taps.iter().enumerate() {
                acc += tap * src[i * w + j + t];
            }
            rows[i * ow + j] = acc;
        }
    }
    let mut out = vec![0.0; oh * ow];
    for i in 0..oh {
        for j in 0..ow {
            let mut acc = 0.0;
            for (t, &tap) in taps.iter().enumerate() {
                acc += tap * rows[(i + t) * ow + j];
            }
            out[i * ow + j] = acc;
        }
    }
    out
}

/// Mean SSIM over all fully contained 11x11 Gaussian windows (sigma 1.5,
/// K1 = 0.01, K2 = 0.03, dynamic range 255).
pub fn ssim<T: Real>(reference: &Image<T>, estimate: &Image<T>) -> Result<f64> {
    reference.ensure_same_dims(estimate)?;
    let (h, w) = reference.dims();
    if h < SSIM_WINDOW || w < SSIM_WINDOW {
        return Err(Error::ImageTooSmall {
            height: h,
            width: w,
            window: SSIM_WINDOW,
        });
    }
    let a: Vec<f64> = reference.as_slice().iter().map(|p| p.to_f64_lossy()).collect();
    let b: Vec<f64> = estimate.as_slice().iter().map(|p| p.to_f64_lossy()).collect();
    let aa: Vec<f64> = a.iter().map(|v| v * v).collect();
    let bb: Vec<f64> = b.iter().map(|v| v * v).collect();
    let ab: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();

    let taps = gaussian_taps();
    let mu_a = filter_valid(&a, h, w, &taps);
    let mu_b = filter_valid(&b, h, w, &taps);
    let e_aa = filter_valid(&aa, h, w, &taps);
    let e_bb = filter_valid(&bb, h, w, &taps);
    let e_ab = filter_valid(&ab, h, w, &taps);

    let c1 = (K1 * PEAK).powi(2);
    let c2 = (K2 * PEAK).powi(2);
    let mut total = 0.0;
    for i in 0..mu_a.len() {
        let (ma, mb) = (mu_a[i], mu_b[i]);
        let var_a = e_aa[i] - ma * ma;
        let var_b = e_bb[i] - mb * mb;
        let cov = e_ab[i] - ma * mb;
        total += ((2.0 * ma * mb + c1) * (2.0 * cov + c2))
            / ((ma * ma + mb * mb + c1) * (var_a + var_b + c2));
    }
    Ok(total / mu_a.len() as f64)
}

pub fn quality_report<T: Real>(reference: &Image<T>, estimate: &Image<T>) -> Result<QualityReport> {
    Ok(QualityReport {
        psnr: psnr(reference, estimate)?,
        ssim: ssim(reference, estimate)?,
        mse: mse(reference, estimate)?,
    })
}

/// Drops `margin` pixels from every side.
pub fn shave_border<T: Real>(img: &Image<T>, margin: usize) -> Result<Image<T>> {
    let (h, w) = img.dims();
    if 2 * margin >= h.min(w) {
        return Err(Error::InvalidParameter(format!(
            "shave margin {margin} too large for {h}x{w} image"
        )));
    }
    Ok(Image::from_fn(h - 2 * margin, w - 2 * margin, |i, j| {
        img.get(i + margin, j + margin)
    }))
}
