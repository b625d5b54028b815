//! The posterior precision `W = tau H^T D^T D H + sum_l K_l^T diag(1/gamma_l) K_l`.

use rayon::prelude::*;

use super::{FilterBank, LatentVariances};
use crate::error::{Error, Result};
use crate::linops::{correlate, BlurDecimate, Kernel, LinearOperator};
use crate::scalar::Real;

/// Matrix-free `W`, symmetric positive semi-definite.
pub struct PrecisionOperator<'a, T> {
    tau: T,
    dh: &'a BlurDecimate<T>,
    filters: &'a [Kernel<T>],
    flipped: Vec<Kernel<T>>,
    inv_gamma: Vec<Vec<T>>,
}

impl<'a, T: Real> PrecisionOperator<'a, T> {
    pub fn new(
        tau: T,
        bank: &'a FilterBank<T>,
        gamma: &LatentVariances<T>,
        dh: &'a BlurDecimate<T>,
    ) -> Result<Self> {
        if !(tau > T::zero()) || !tau.is_finite() {
            return Err(Error::InvalidParameter(format!("tau must be positive, got {tau}")));
        }
        if gamma.len() != bank.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} gamma planes", bank.len()),
                found: format!("{}", gamma.len()),
            });
        }
        if let Some(d) = gamma.dims() {
            if d != dh.hr_dims() {
                return Err(Error::DimensionMismatch {
                    expected: format!("{:?}", dh.hr_dims()),
                    found: format!("{d:?}"),
                });
            }
        }
        let inv_gamma = gamma
            .planes()
            .iter()
            .map(|p| p.as_slice().iter().map(|&g| T::one() / g).collect())
            .collect();
        Ok(Self {
            tau,
            dh,
            filters: bank.filters(),
            flipped: bank.filters().iter().map(Kernel::flipped).collect(),
            inv_gamma,
        })
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    /// `W x`. Per-filter terms may run in parallel; they are summed in filter
    /// order so the result does not depend on scheduling.
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        let (h, w) = self.dh.hr_dims();
        assert_eq!(x.len(), h * w, "vector does not match the HR grid");
        let terms: Vec<Vec<T>> = (0..self.filters.len())
            .into_par_iter()
            .map(|l| {
                let mut u = correlate(x, h, w, &self.filters[l]);
                for (v, &ig) in u.iter_mut().zip(&self.inv_gamma[l]) {
                    *v = *v * ig;
                }
                correlate(&u, h, w, &self.flipped[l])
            })
            .collect();
        let mut out = self.dh.normal(x);
        for v in out.iter_mut() {
            *v = *v * self.tau;
        }
        for term in &terms {
            for (o, &t) in out.iter_mut().zip(term) {
                *o = *o + t;
            }
        }
        out
    }
}

impl<T: Real> LinearOperator<T> for PrecisionOperator<'_, T> {
    fn input_dims(&self) -> (usize, usize) {
        self.dh.hr_dims()
    }
    fn output_dims(&self) -> (usize, usize) {
        self.dh.hr_dims()
    }
    fn forward(&self, x: &[T]) -> Vec<T> {
        self.apply(x)
    }
    fn adjoint(&self, y: &[T]) -> Vec<T> {
        self.apply(y)
    }
}

/// One-shot `W x`.
pub fn precision_apply<T: Real>(
    x: &[T],
    tau: T,
    bank: &FilterBank<T>,
    gamma: &LatentVariances<T>,
    dh: &BlurDecimate<T>,
) -> Result<Vec<T>> {
    let op = PrecisionOperator::new(tau, bank, gamma, dh)?;
    if x.len() != op.input_len() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} entries", op.input_len()),
            found: format!("{}", x.len()),
        });
    }
    Ok(op.apply(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linops::{compose_dh, DecimationSpec};
    use crate::prior::default_filter_bank;
    use crate::scalar::dot;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn setup(rng: &mut ChaCha8Rng) -> (FilterBank<f64>, LatentVariances<f64>, BlurDecimate<f64>) {
        let bank = default_filter_bank();
        let dh = compose_dh(Kernel::gaussian(1.0, 3).unwrap(), DecimationSpec::with_factor(2).unwrap(), (8, 6)).unwrap();
        let planes = (0..bank.len())
            .map(|_| crate::image::Image::from_fn(8, 6, |_, _| rng.gen_range(0.1..5.0)))
            .collect();
        (bank, LatentVariances::from_planes(planes, 1e-10).unwrap(), dh)
    }

    #[test]
    fn zero_maps_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (bank, gamma, dh) = setup(&mut rng);
        let out = precision_apply(&[0.0; 48], 0.3, &bank, &gamma, &dh).unwrap();
        assert!(out.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn huge_gamma_leaves_likelihood_term() {
        let bank = default_filter_bank::<f64>();
        let dh = compose_dh(Kernel::identity(), DecimationSpec::with_factor(1).unwrap(), (5, 5)).unwrap();
        let gamma = LatentVariances::constant(bank.len(), (5, 5), 1e12);
        let x: Vec<f64> = (0..25).map(|i| f64::from(i) * 3.0 - 20.0).collect();
        let out = precision_apply(&x, 2.5, &bank, &gamma, &dh).unwrap();
        for (o, v) in out.iter().zip(&x) {
            assert!((o - 2.5 * v).abs() <= 1e-6 * (2.5 * v).abs().max(1.0));
        }
    }

    #[test]
    fn symmetric_psd_and_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (bank, gamma, dh) = setup(&mut rng);
        let op = PrecisionOperator::new(0.7, &bank, &gamma, &dh).unwrap();
        for _ in 0..20 {
            let x: Vec<f64> = (0..48).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..48).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let (wx, wy) = (op.apply(&x), op.apply(&y));
            let scale = crate::scalar::norm(&wx) * crate::scalar::norm(&y);
            assert!((dot(&wx, &y) - dot(&x, &wy)).abs() <= 1e-10 * scale);
            assert!(dot(&wx, &x) >= 0.0);
            let s: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 2.0 * a - 0.5 * b).collect();
            let ws = op.apply(&s);
            for i in 0..48 {
                assert!((ws[i] - (2.0 * wx[i] - 0.5 * wy[i])).abs() < 1e-10 * scale.max(1.0));
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (bank, gamma, dh) = setup(&mut rng);
        assert!(precision_apply(&[0.0; 48], 0.0, &bank, &gamma, &dh).is_err());
        assert!(precision_apply(&[0.0; 47], 1.0, &bank, &gamma, &dh).is_err());
        let wrong = LatentVariances::constant(2, (8, 6), 1.0);
        assert!(precision_apply(&[0.0; 48], 1.0, &bank, &wrong, &dh).is_err());
    }
}
