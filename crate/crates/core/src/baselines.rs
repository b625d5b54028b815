//! Interpolation baselines.

use crate::error::{Error, Result};
use crate::image::Image;
use crate::scalar::Real;

const KEYS_A: f64 = -0.5;

fn check_scale(r: usize) -> Result<()> {
    if r == 0 {
        return Err(Error::InvalidParameter("scale must be at least 1".into()));
    }
    Ok(())
}

pub fn nearest_neighbor_upscale<T: Real>(img: &Image<T>, r: usize) -> Result<Image<T>> {
    check_scale(r)?;
    Ok(Image::from_fn(img.height() * r, img.width() * r, |i, j| img.get(i / r, j / r)))
}

fn keys(t: f64) -> f64 {
    let t = t.abs();
    let a = KEYS_A;
    if t <= 1.0 {
        ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0
    } else if t < 2.0 {
        ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a
    } else {
        0.0
    }
}

/// Source indices and weights for every output sample along one axis.
fn axis_taps(len: usize, r: usize) -> Vec<([usize; 4], [f64; 4])> {
    (0..len * r)
        .map(|i| {
            let x = (i as f64 + 0.5) / r as f64 - 0.5;
            let base = x.floor();
            let frac = x - base;
            let mut idx = [0; 4];
            let mut wts = [0.0; 4];
            for (t, off) in (-1i64..=2).enumerate() {
                let src = (base as i64 + off).clamp(0, len as i64 - 1);
                idx[t] = src as usize;
                wts[t] = keys(frac - off as f64);
            }
            (idx, wts)
        })
        .collect()
}

/// Separable Keys cubic interpolation with replicated edges.
pub fn bicubic_upscale<T: Real>(img: &Image<T>, r: usize) -> Result<Image<T>> {
    check_scale(r)?;
    let (h, w) = img.dims();
    if h < 4 || w < 4 {
        return Err(Error::InvalidParameter(format!(
            "bicubic needs at least 4x4 pixels, got {h}x{w}"
        )));
    }
    let rows = axis_taps(h, r);
    let cols = axis_taps(w, r);
    let src: Vec<f64> = img.as_slice().iter().map(|v| v.to_f64_lossy()).collect();

    let mut horiz = vec![0.0; h * w * r];
    for i in 0..h {
        let row = &src[i * w..(i + 1) * w];
        for (j, (idx, wts)) in cols.iter().enumerate() {
            horiz[i * w * r + j] = (0..4).map(|t| wts[t] * row[idx[t]]).sum();
        }
    }
    let ow = w * r;
    let out = Image::from_fn(h * r, ow, |i, j| {
        let (idx, wts) = &rows[i];
        T::lit((0..4).map(|t| wts[t] * horiz[idx[t] * ow + j]).sum())
    });
    Ok(out)
}
