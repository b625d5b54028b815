use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::Image;
use crate::linops::{conv2_circular, Kernel, KernelRecord};
use crate::scalar::Real;

/// Taps of a loaded filter may sum to at most this much.
pub const LOADED_ZERO_MEAN_TOL: f64 = 1e-6;
const BUILTIN_ZERO_MEAN_TOL: f64 = 1e-9;
const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BankSource {
    BuiltinDerivatives,
    LoadedFile,
}

/// Ordered expert filters of the field-of-experts prior.
#[derive(Clone, Debug, PartialEq)]
pub struct FilterBank<T> {
    name: String,
    source: BankSource,
    filters: Vec<Kernel<T>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BankFile {
    version: u32,
    name: String,
    filters: Vec<KernelRecord>,
}

impl<T: Real> FilterBank<T> {
    pub fn new(name: impl Into<String>, source: BankSource, filters: Vec<Kernel<T>>) -> Result<Self> {
        let tol = match source {
            BankSource::BuiltinDerivatives => BUILTIN_ZERO_MEAN_TOL,
            BankSource::LoadedFile => LOADED_ZERO_MEAN_TOL,
        };
        if filters.is_empty() {
            return Err(Error::FilterBank("bank must contain at least one filter".into()));
        }
        for (l, k) in filters.iter().enumerate() {
            let s = k.sum().to_f64_lossy();
            if s.abs() > tol {
                return Err(Error::FilterBank(format!(
                    "filter {l} is not zero-mean (taps sum to {s})"
                )));
            }
        }
        Ok(Self {
            name: name.into(),
            source,
            filters,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> BankSource {
        self.source
    }

    pub fn filters(&self) -> &[Kernel<T>] {
        &self.filters
    }

    pub fn len(&self) -> usize {
        self.filters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.filters.is_empty()
    }

    pub fn to_json(&self) -> Result<String> {
        let file = BankFile {
            version: FORMAT_VERSION,
            name: self.name.clone(),
            filters: self.filters.iter().map(Kernel::to_record).collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: BankFile = serde_json::from_str(text)?;
        if file.version != FORMAT_VERSION {
            return Err(Error::FilterBank(format!(
                "unsupported version {} (expected {FORMAT_VERSION})",
                file.version
            )));
        }
        let filters = file
            .filters
            .iter()
            .enumerate()
            .map(|(l, rec)| {
                Kernel::from_record(rec).map_err(|e| Error::FilterBank(format!("filter {l}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(file.name, BankSource::LoadedFile, filters)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()?).map_err(|source| Error::Write {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Eight zero-mean 3x3 derivative stencils, each scaled to unit norm.
///
/// Order: horizontal, vertical, diagonal and anti-diagonal first
/// differences; horizontal and vertical second differences; the 5-point
/// Laplacian; the mixed second derivative.
pub fn default_filter_bank<T: Real>() -> FilterBank<T> {
    const STENCILS: [[[f64; 3]; 3]; 8] = [
        [[0.0, 0.0, 0.0], [0.0, -1.0, 1.0], [0.0, 0.0, 0.0]],
        [[0.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 1.0, 0.0]],
        [[0.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]],
        [[0.0, 0.0, 0.0], [0.0, -1.0, 0.0], [1.0, 0.0, 0.0]],
        [[0.0, 0.0, 0.0], [1.0, -2.0, 1.0], [0.0, 0.0, 0.0]],
        [[0.0, 1.0, 0.0], [0.0, -2.0, 0.0], [0.0, 1.0, 0.0]],
        [[0.0, 1.0, 0.0], [1.0, -4.0, 1.0], [0.0, 1.0, 0.0]],
        [[1.0, 0.0, -1.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 1.0]],
    ];
    let filters = STENCILS
        .iter()
        .map(|s| {
            let norm = s.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
            let taps = s.iter().flatten().map(|v| T::lit(v / norm)).collect();
            Kernel::new(3, 3, taps).expect("builtin stencil is valid")
        })
        .collect();
    FilterBank::new("builtin-derivatives", BankSource::BuiltinDerivatives, filters)
        .expect("builtin bank is zero-mean")
}

pub fn load_filter_bank<T: Real>(path: impl AsRef<Path>) -> Result<FilterBank<T>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })?;
    FilterBank::from_json(&text)
}

/// Response of every filter to `img` (`K_l x`).
pub fn filter_responses<T: Real>(bank: &FilterBank<T>, img: &Image<T>) -> Result<Vec<Image<T>>> {
    bank.filters()
        .iter()
        .map(|k| conv2_circular(img, k))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_bank_shape() {
        let bank = default_filter_bank::<f64>();
        assert_eq!(bank.len(), 8);
        for k in bank.filters() {
            assert_eq!((k.height(), k.width()), (3, 3));
            assert!(k.sum().abs() < 1e-12);
            assert!((k.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn json_round_trip_is_exact() {
        let bank = default_filter_bank::<f64>();
        let text = bank.to_json().unwrap();
        let back = FilterBank::<f64>::from_json(&text).unwrap();
        for (a, b) in bank.filters().iter().zip(back.filters()) {
            assert_eq!(a.taps(), b.taps());
        }
        assert_eq!(back.source(), BankSource::LoadedFile);
        assert_eq!(back.name(), "builtin-derivatives");
    }

    #[test]
    fn rejects_invalid_banks() {
        let even = r#"{"version":1,"name":"x","filters":[{"height":2,"width":2,"taps":[1,-1,1,-1]}]}"#;
        assert!(matches!(FilterBank::<f64>::from_json(even), Err(Error::FilterBank(_))));
        let biased = r#"{"version":1,"name":"x","filters":[{"height":1,"width":3,"taps":[0.5,0,0]}]}"#;
        assert!(matches!(FilterBank::<f64>::from_json(biased), Err(Error::FilterBank(_))));
        let empty = r#"{"version":1,"name":"x","filters":[]}"#;
        assert!(FilterBank::<f64>::from_json(empty).is_err());
        let version = r#"{"version":2,"name":"x","filters":[{"height":1,"width":3,"taps":[1,0,-1]}]}"#;
        assert!(FilterBank::<f64>::from_json(version).is_err());
        let short = r#"{"version":1,"name":"x","filters":[{"height":1,"width":3,"taps":[1,-1]}]}"#;
        assert!(FilterBank::<f64>::from_json(short).is_err());
        assert!(matches!(FilterBank::<f64>::from_json("{nope"), Err(Error::Json(_))));
        let nan = r#"{"version":1,"name":"x","filters":[{"height":1,"width":3,"taps":[NaN,0,0]}]}"#;
        assert!(FilterBank::<f64>::from_json(nan).is_err());
    }

    #[test]
    fn responses_vanish_on_constants() {
        let bank = default_filter_bank::<f64>();
        let img = Image::filled(6, 7, 93.0);
        for r in filter_responses(&bank, &img).unwrap() {
            assert!(r.as_slice().iter().all(|v| v.abs() < 1e-10));
        }
    }

    #[test]
    fn single_filter_matches_conv() {
        let k = Kernel::<f64>::from_rows(&[[1.0, -2.0, 1.0]]).unwrap();
        let bank = FilterBank::new("one", BankSource::LoadedFile, vec![k.clone()]).unwrap();
        let img = Image::from_fn(5, 5, |i, j| (i * i + 3 * j) as f64);
        let r = filter_responses(&bank, &img).unwrap();
        assert_eq!(r[0], crate::linops::conv2_circular(&img, &k).unwrap());
    }
}
