#![allow(dead_code)]

use ebsr::image::Image;
use ebsr::linops::{compose_dh, BlurDecimate, ConvOperator, DecimationSpec, Kernel};
use ebsr::oracle::{assemble_operator, DenseMatrix};
use ebsr::prior::{default_filter_bank, BankSource, FilterBank, LatentVariances};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rand_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let scale: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    diff / scale.max(f64::MIN_POSITIVE)
}

/// A small random problem plus its dense counterparts.
pub struct Toy {
    pub dh: BlurDecimate<f64>,
    pub bank: FilterBank<f64>,
    pub gamma: LatentVariances<f64>,
    pub tau: f64,
    pub y: Image<f64>,
    pub a: DenseMatrix,
    pub ks: Vec<DenseMatrix>,
}

impl Toy {
    pub fn gamma_vecs(&self) -> Vec<Vec<f64>> {
        self.gamma.planes().iter().map(|p| p.as_slice().to_vec()).collect()
    }
}

pub fn toy(rng: &mut ChaCha8Rng, side: usize, r: usize, filters: usize) -> Toy {
    let blur = Kernel::gaussian(rng.gen_range(0.5..1.5), 3).unwrap();
    toy_with_blur(rng, side, r, filters, blur)
}

pub fn toy_with_blur(rng: &mut ChaCha8Rng, side: usize, r: usize, filters: usize, blur: Kernel<f64>) -> Toy {
    let hr = (side, side);
    let dh = compose_dh(blur, DecimationSpec::with_factor(r).unwrap(), hr).unwrap();
    let pool = default_filter_bank::<f64>();
    // Each choice annihilates only constants, which the blur preserves, so
    // the posterior precision is positive definite.
    const SETS: [&[usize]; 5] = [&[6], &[6, 7], &[0, 1], &[4, 5], &[1, 6]];
    let set = loop {
        let s = SETS[rng.gen_range(0..SETS.len())];
        if s.len() == filters {
            break s;
        }
    };
    let chosen = set.iter().map(|&l| pool.filters()[l].clone()).collect();
    let bank = FilterBank::new("toy", BankSource::BuiltinDerivatives, chosen).unwrap();
    let planes = (0..filters)
        .map(|_| Image::from_fn(side, side, |_, _| 10f64.powf(rng.gen_range(-1.0..2.0))))
        .collect();
    let gamma = LatentVariances::from_planes(planes, 1e-10).unwrap();
    let tau = 10f64.powf(rng.gen_range(-2.0..0.5));
    let lr = dh.lr_dims();
    let y = Image::from_fn(lr.0, lr.1, |_, _| rng.gen_range(0.0..255.0));
    let a = assemble_operator(&dh).unwrap();
    let ks = bank
        .filters()
        .iter()
        .map(|k| assemble_operator(&ConvOperator::new(k.clone(), hr).unwrap()).unwrap())
        .collect();
    Toy {
        dh,
        bank,
        gamma,
        tau,
        y,
        a,
        ks,
    }
}

/// Piecewise-smooth 64x64 test scene: a ramp with ripples, a bright disk,
/// a dark block and a dimmed wedge.
pub fn synthetic_scene() -> Image<f64> {
    let n = 64;
    Image::from_fn(n, n, |i, j| {
        let (fi, fj) = (i as f64, j as f64);
        let mut v = 60.0 + 80.0 * fj / n as f64 + 40.0 * (fi / 9.0).sin();
        if (fi - 20.0).powi(2) + (fj - 40.0).powi(2) < 144.0 {
            v = 200.0;
        }
        if i > 38 && i < 56 && j > 8 && j < 30 {
            v = 30.0;
        }
        if i + j > 70 && i < j + 10 && i < 60 && j < 60 {
            v -= 40.0;
        }
        v
    })
}
