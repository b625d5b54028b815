//! Binary Netpbm (P5/P6, maxval 255) and 8-bit PNG reading and writing.
//!
//! Pixels become reals on `[0, 255]` when read; when written they are
//! clamped to that range and rounded half away from zero.

use std::fs;
use std::path::Path;

use super::{ColorImage, ColorSpace, Image};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub enum LoadedImage<T> {
    Gray(Image<T>),
    Color(ColorImage<T>),
}

impl<T: Real> LoadedImage<T> {
    pub fn dims(&self) -> (usize, usize) {
        match self {
            LoadedImage::Gray(g) => g.dims(),
            LoadedImage::Color(c) => (c.height(), c.width()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImageFormat {
    Pgm,
    Ppm,
    Png,
}

impl ImageFormat {
    pub fn from_path(path: &Path) -> Result<Self> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
            .unwrap_or_default();
        match ext.as_str() {
            "pgm" => Ok(ImageFormat::Pgm),
            "ppm" => Ok(ImageFormat::Ppm),
            "png" => Ok(ImageFormat::Png),
            other => Err(Error::UnsupportedFormat(format!(
                "unknown file extension {other:?} for {}",
                path.display()
            ))),
        }
    }
}

pub fn load_image<T: Real>(path: impl AsRef<Path>) -> Result<LoadedImage<T>> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })?;
    decode(&bytes)
}

/// Decodes by content sniffing, not by extension.
pub fn decode<T: Real>(bytes: &[u8]) -> Result<LoadedImage<T>> {
    if bytes.starts_with(b"P5") {
        let (h, w, data) = decode_netpbm(bytes, 1)?;
        Ok(LoadedImage::Gray(Image::from_raw(h, w, to_reals(data))))
    } else if bytes.starts_with(b"P6") {
        let (h, w, data) = decode_netpbm(bytes, 3)?;
        Ok(LoadedImage::Color(deinterleave(h, w, data)))
    } else if bytes.starts_with(&[0x89, b'P', b'N', b'G']) {
        decode_png(bytes)
    } else {
        Err(Error::UnsupportedFormat(
            "expected binary PGM (P5), PPM (P6) or PNG".into(),
        ))
    }
}

fn to_reals<T: Real>(data: &[u8]) -> Vec<T> {
    data.iter().map(|&b| T::lit(f64::from(b))).collect()
}

fn deinterleave<T: Real>(h: usize, w: usize, data: &[u8]) -> ColorImage<T> {
    let planes = [0, 1, 2].map(|c| {
        Image::from_raw(
            h,
            w,
            data.chunks_exact(3).map(|px| T::lit(f64::from(px[c]))).collect(),
        )
    });
    ColorImage {
        space: ColorSpace::Rgb,
        planes,
    }
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderCursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::MalformedHeader(format!("missing {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::MalformedHeader(format!("bad {what}")))
    }
}

fn decode_netpbm(bytes: &[u8], channels: usize) -> Result<(usize, usize, &[u8])> {
    let mut cur = HeaderCursor { bytes, pos: 2 };
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::MalformedHeader(format!(
            "zero dimension {width}x{height}"
        )));
    }
    if maxval != 255 {
        return Err(Error::UnsupportedFormat(format!(
            "netpbm maxval {maxval} (only 255 is supported)"
        )));
    }
    // exactly one whitespace byte separates the header from the raster
    match bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ => return Err(Error::MalformedHeader("missing raster separator".into())),
    }
    let expected = width * height * channels;
    let data = &bytes[cur.pos..];
    if data.len() < expected {
        return Err(Error::Truncated {
            expected,
            found: data.len(),
        });
    }
    Ok((height, width, &data[..expected]))
}

fn decode_png<T: Real>(bytes: &[u8]) -> Result<LoadedImage<T>> {
    let mut decoder = png::Decoder::new(bytes);
    decoder.set_transformations(png::Transformations::EXPAND);
    let mut reader = decoder
        .read_info()
        .map_err(|e| Error::PngDecode(e.to_string()))?;
    let info = reader.info();
    if info.bit_depth == png::BitDepth::Sixteen {
        return Err(Error::UnsupportedFormat("16-bit PNG".into()));
    }
    let mut buf = vec![0; reader.output_buffer_size()];
    let frame = reader.next_frame(&mut buf).map_err(|e| match e {
        png::DecodingError::IoError(io) if io.kind() == std::io::ErrorKind::UnexpectedEof => {
            Error::Truncated {
                expected: 0,
                found: bytes.len(),
            }
        }
        other => Error::PngDecode(other.to_string()),
    })?;
    let (h, w) = (frame.height as usize, frame.width as usize);
    let data = &buf[..frame.buffer_size()];
    match frame.color_type {
        png::ColorType::Grayscale => Ok(LoadedImage::Gray(Image::from_raw(h, w, to_reals(data)))),
        png::ColorType::Rgb => Ok(LoadedImage::Color(deinterleave(h, w, data))),
        other => Err(Error::UnsupportedFormat(format!(
            "PNG color type {other:?} (alpha channels are not supported)"
        ))),
    }
}

fn quantize<T: Real>(v: T) -> u8 {
    // f64::round is half away from zero
    v.to_f64_lossy().clamp(0.0, 255.0).round() as u8
}

pub fn encode_gray<T: Real>(img: &Image<T>, format: ImageFormat) -> Result<Vec<u8>> {
    let data: Vec<u8> = img.as_slice().iter().map(|&p| quantize(p)).collect();
    match format {
        ImageFormat::Pgm => Ok(netpbm(b"P5", img.height(), img.width(), &data)),
        ImageFormat::Png => png_bytes(img.height(), img.width(), png::ColorType::Grayscale, &data),
        ImageFormat::Ppm => Err(Error::UnsupportedFormat(
            "grayscale image cannot be written as PPM".into(),
        )),
    }
}

pub fn encode_color<T: Real>(img: &ColorImage<T>, format: ImageFormat) -> Result<Vec<u8>> {
    if img.space() != ColorSpace::Rgb {
        return Err(Error::WrongColorSpace {
            expected: ColorSpace::Rgb.name(),
            found: img.space().name(),
        });
    }
    let [r, g, b] = img.planes();
    let data: Vec<u8> = (0..r.len())
        .flat_map(|i| [r.as_slice()[i], g.as_slice()[i], b.as_slice()[i]])
        .map(quantize)
        .collect();
    match format {
        ImageFormat::Ppm => Ok(netpbm(b"P6", img.height(), img.width(), &data)),
        ImageFormat::Png => png_bytes(img.height(), img.width(), png::ColorType::Rgb, &data),
        ImageFormat::Pgm => Err(Error::UnsupportedFormat(
            "color image cannot be written as PGM".into(),
        )),
    }
}

pub fn encode<T: Real>(img: &LoadedImage<T>, format: ImageFormat) -> Result<Vec<u8>> {
    match img {
        LoadedImage::Gray(g) => encode_gray(g, format),
        LoadedImage::Color(c) => encode_color(c, format),
    }
}

fn netpbm(magic: &[u8], h: usize, w: usize, data: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(data.len() + 20);
    out.extend_from_slice(magic);
    out.extend_from_slice(format!("\n{w} {h}\n255\n").as_bytes());
    out.extend_from_slice(data);
    out
}

fn png_bytes(h: usize, w: usize, color: png::ColorType, data: &[u8]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, w as u32, h as u32);
        enc.set_color(color);
        enc.set_depth(png::BitDepth::Eight);
        let mut writer = enc
            .write_header()
            .map_err(|e| Error::PngEncode(e.to_string()))?;
        writer
            .write_image_data(data)
            .map_err(|e| Error::PngEncode(e.to_string()))?;
    }
    Ok(out)
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes a grayscale image; the format follows the file extension.
pub fn save_gray<T: Real>(img: &Image<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    write(path, &encode_gray(img, ImageFormat::from_path(path)?)?)
}

pub fn save_color<T: Real>(img: &ColorImage<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    write(path, &encode_color(img, ImageFormat::from_path(path)?)?)
}

pub fn save_image<T: Real>(img: &LoadedImage<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    write(path, &encode(img, ImageFormat::from_path(path)?)?)
}
