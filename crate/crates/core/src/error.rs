use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot write {path}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),

    #[error("truncated image data: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },

    #[error("malformed image header: {0}")]
    MalformedHeader(String),

    #[error("png decode failed: {0}")]
    PngDecode(String),

    #[error("png encode failed: {0}")]
    PngEncode(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("kernel {kernel_h}x{kernel_w} does not fit image {image_h}x{image_w}")]
    KernelTooLarge {
        kernel_h: usize,
        kernel_w: usize,
        image_h: usize,
        image_w: usize,
    },

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("wrong color space: expected {expected}, found {found}")]
    WrongColorSpace {
        expected: &'static str,
        found: &'static str,
    },

    #[error("image {height}x{width} is smaller than the {window}x{window} SSIM window")]
    ImageTooSmall {
        height: usize,
        width: usize,
        window: usize,
    },

    #[error("filter bank: {0}")]
    FilterBank(String),

    #[error("filter bank json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("conjugate gradient produced NaN at iteration {0}")]
    CgNan(usize),

    #[error("matrix is singular or not positive definite")]
    Singular,

    #[error("dense oracle self-check failed: {0}")]
    OracleMismatch(String),

    #[error("dense assembly of dimension {dim} exceeds the guard of {limit}")]
    SizeGuard { dim: usize, limit: usize },
}
