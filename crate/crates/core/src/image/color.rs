//! ITU-R BT.601 full-range RGB <-> YCbCr on the `[0, 255]` scale.

use super::{ColorImage, ColorSpace, Image};
use crate::error::{Error, Result};
use crate::scalar::Real;

const KR: f64 = 0.299;
const KB: f64 = 0.114;
const KG: f64 = 1.0 - KR - KB;
const OFFSET: f64 = 128.0;

fn expect_space<T: Real>(img: &ColorImage<T>, space: ColorSpace) -> Result<()> {
    if img.space() != space {
        return Err(Error::WrongColorSpace {
            expected: space.name(),
            found: img.space().name(),
        });
    }
    Ok(())
}

pub fn rgb_to_ycbcr<T: Real>(img: &ColorImage<T>) -> Result<ColorImage<T>> {
    expect_space(img, ColorSpace::Rgb)?;
    let (kr, kg, kb) = (T::lit(KR), T::lit(KG), T::lit(KB));
    let cb_scale = T::lit(2.0 * (1.0 - KB));
    let cr_scale = T::lit(2.0 * (1.0 - KR));
    let offset = T::lit(OFFSET);
    let [r, g, b] = img.planes();
    let n = r.len();
    let (mut y, mut cb, mut cr) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for i in 0..n {
        let (rv, gv, bv) = (r.as_slice()[i], g.as_slice()[i], b.as_slice()[i]);
        let luma = kr * rv + kg * gv + kb * bv;
        y.push(luma);
        cb.push((bv - luma) / cb_scale + offset);
        cr.push((rv - luma) / cr_scale + offset);
    }
    let (h, w) = (img.height(), img.width());
    Ok(ColorImage {
        space: ColorSpace::YCbCr,
        planes: [Image::from_raw(h, w, y), Image::from_raw(h, w, cb), Image::from_raw(h, w, cr)],
    })
}

pub fn ycbcr_to_rgb<T: Real>(img: &ColorImage<T>) -> Result<ColorImage<T>> {
    expect_space(img, ColorSpace::YCbCr)?;
    let (kr, kg, kb) = (T::lit(KR), T::lit(KG), T::lit(KB));
    let cb_scale = T::lit(2.0 * (1.0 - KB));
    let cr_scale = T::lit(2.0 * (1.0 - KR));
    let offset = T::lit(OFFSET);
    let [y, cb, cr] = img.planes();
    let n = y.len();
    let (mut r, mut g, mut b) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for i in 0..n {
        let luma = y.as_slice()[i];
        let rv = luma + cr_scale * (cr.as_slice()[i] - offset);
        let bv = luma + cb_scale * (cb.as_slice()[i] - offset);
        r.push(rv);
        g.push((luma - kr * rv - kb * bv) / kg);
        b.push(bv);
    }
    let (h, w) = (img.height(), img.width());
    Ok(ColorImage {
        space: ColorSpace::Rgb,
        planes: [Image::from_raw(h, w, r), Image::from_raw(h, w, g), Image::from_raw(h, w, b)],
    })
}
