mod common;

use common::{rand_vec, rel_err, toy, toy_with_blur};
use ebsr::image::Image;
use ebsr::linops::{compose_dh, ConvOperator, DecimationSpec, Kernel, LinearOperator};
use ebsr::oracle::{assemble_operator, dense_diag, dense_neg_log_marginal, dense_posterior, dense_precision};
use ebsr::prior::{filter_responses, precision_apply, HyperParams};
use ebsr::solver::{diag_covariance, diag_precision, filtered_variance, noise_trace, posterior_mean, EbsrConfig};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SHAPES: [(usize, usize, usize); 6] = [(6, 1, 1), (6, 2, 2), (8, 1, 2), (8, 2, 1), (12, 2, 2), (12, 1, 1)];

#[test]
fn precision_product_matches_assembly() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for &(side, r, l) in &SHAPES {
        let t = toy(&mut rng, side, r, l);
        let w = dense_precision(t.tau, &t.a, &t.ks, &t.gamma_vecs()).unwrap();
        for _ in 0..3 {
            let x = rand_vec(&mut rng, side * side);
            let got = precision_apply(&x, t.tau, &t.bank, &t.gamma, &t.dh).unwrap();
            let want = &w * DVector::from_column_slice(&x);
            assert!(rel_err(&got, want.as_slice()) < 1e-10);
        }
    }
}

#[test]
fn precision_diagonal_matches_assembly() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for &(side, r, l) in &SHAPES {
        let t = toy(&mut rng, side, r, l);
        let w = dense_precision(t.tau, &t.a, &t.ks, &t.gamma_vecs()).unwrap();
        let got = diag_precision(t.tau, &t.dh, t.bank.filters(), &t.gamma).unwrap();
        let want = dense_diag(&w).unwrap();
        for (g, d) in got.as_slice().iter().zip(&want) {
            assert!((g - d).abs() <= 1e-10 * d.abs());
        }
    }
}

#[test]
fn trace_and_filtered_variance_match_assembly() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for &(side, r, l) in &SHAPES {
        let t = toy(&mut rng, side, r, l);
        let v = Image::from_fn(side, side, |_, _| rng.gen_range(0.01..3.0));
        let sv = DMatrix::from_diagonal(&DVector::from_column_slice(v.as_slice()));

        let w = noise_trace(&v, &t.dh).unwrap();
        let want = (&t.a * &sv * t.a.transpose()).trace();
        assert!((w - want).abs() <= 1e-10 * want);

        for (k, km) in t.bank.filters().iter().zip(&t.ks) {
            let z = filtered_variance(&v, k);
            let want = (km * &sv * km.transpose()).diagonal();
            assert!(rel_err(&z, want.as_slice()) < 1e-10);
        }
    }
}

#[test]
fn posterior_mean_matches_dense_solve() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let cfg = EbsrConfig {
        cg_tolerance: 1e-12,
        cg_max_iterations: 2000,
        ..EbsrConfig::default()
    };
    for &(side, r, l) in &SHAPES {
        let t = toy(&mut rng, side, r, l);
        let (mu, out) = posterior_mean(&t.y, t.tau, &t.bank, &t.gamma, &t.dh, &cfg, None).unwrap();
        assert!(out.converged);
        let (want, _) = dense_posterior(t.y.as_slice(), t.tau, &t.a, &t.ks, &t.gamma_vecs()).unwrap();
        assert!(rel_err(mu.as_slice(), want.as_slice()) < 1e-6);
    }
}

#[test]
fn filter_responses_match_dense_filters() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let t = toy(&mut rng, 6, 1, 2);
    let x = Image::from_fn(6, 6, |_, _| rng.gen_range(0.0..255.0));
    let resp = filter_responses(&t.bank, &x).unwrap();
    for (got, km) in resp.iter().zip(&t.ks) {
        let want = km * DVector::from_column_slice(x.as_slice());
        assert!(rel_err(got.as_slice(), want.as_slice()) < 1e-10);
    }
}

#[test]
fn assembled_convolution_is_block_circulant() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let (h, w) = (5, 7);
    let taps = rand_vec(&mut rng, 9);
    let k = Kernel::new(3, 3, taps).unwrap();
    let m = assemble_operator(&ConvOperator::new(k, (h, w)).unwrap()).unwrap();
    for i in 0..h * w {
        for j in 0..h * w {
            let dr = (j / w + h - i / w) % h;
            let dc = (j % w + w - i % w) % w;
            assert_eq!(m[(i, j)], m[(0, dr * w + dc)]);
        }
    }
}

#[test]
fn normal_operator_on_delta_matches_assembly() {
    let h = Kernel::gaussian(1.0, 3).unwrap();
    let dh = compose_dh(h, DecimationSpec::with_factor(2).unwrap(), (8, 6)).unwrap();
    let a = assemble_operator(&dh).unwrap();
    let ata = a.transpose() * &a;
    for j in [0, 7, 20, 47] {
        let mut e = vec![0.0; 48];
        e[j] = 1.0;
        let got = dh.adjoint(&dh.forward(&e));
        assert!(rel_err(&got, ata.column(j).as_slice()) < 1e-10);
    }
}

#[test]
fn dense_posterior_is_symmetric_and_positive_definite() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for &(side, r, l) in &SHAPES {
        let t = toy(&mut rng, side, r, l);
        let w = dense_precision(t.tau, &t.a, &t.ks, &t.gamma_vecs()).unwrap();
        assert!(w.symmetric_eigenvalues().min() > 0.0);
        let (_, sigma) = dense_posterior(t.y.as_slice(), t.tau, &t.a, &t.ks, &t.gamma_vecs()).unwrap();
        assert!((&sigma - sigma.transpose()).amax() <= 1e-10 * sigma.amax());
        assert!(sigma.cholesky().is_some());
    }
}

#[test]
fn reciprocal_diagonal_underestimates_marginal_variance() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let t = toy(&mut rng, 6, 2, 2);
    let d = diag_precision(t.tau, &t.dh, t.bank.filters(), &t.gamma).unwrap();
    let approx = diag_covariance(&d).unwrap();
    let (_, sigma) = dense_posterior(t.y.as_slice(), t.tau, &t.a, &t.ks, &t.gamma_vecs()).unwrap();
    let exact = dense_diag(&sigma).unwrap();
    let mut errs: Vec<f64> = approx
        .as_slice()
        .iter()
        .zip(&exact)
        .map(|(a, e)| (a - e).abs() / e)
        .collect();
    errs.sort_by(f64::total_cmp);
    eprintln!("diag covariance relative error: median {:.3}, max {:.3}", errs[errs.len() / 2], errs[errs.len() - 1]);
    // For any SPD matrix 1 / W_ii <= (W^-1)_ii, so the estimate is one-sided.
    for (a, e) in approx.as_slice().iter().zip(&exact) {
        assert!(*a > 0.0 && *a <= e * (1.0 + 1e-9));
    }
}

#[test]
fn large_tau_tends_to_least_squares() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    // std 0.6 keeps the circulant blur well conditioned
    let mut t = toy_with_blur(&mut rng, 6, 1, 2, Kernel::gaussian(0.6, 3).unwrap());
    t.tau = 1e8;
    let (mu, _) = dense_posterior(t.y.as_slice(), t.tau, &t.a, &t.ks, &t.gamma_vecs()).unwrap();
    let ls = t.a.clone().lu().solve(&DVector::from_column_slice(t.y.as_slice())).unwrap();
    assert!(rel_err(mu.as_slice(), ls.as_slice()) < 1e-4);
}

#[test]
fn two_pixel_evidence_minimizer_scales_with_the_data() {
    // x has two pixels, observed directly; the single expert is their
    // circular difference. Scaling y by c and the noise variance by c^2
    // must move the minimizing gamma by c^2 and keep its ordering.
    let a = DMatrix::identity(2, 2);
    let k = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]);
    let grid: Vec<f64> = (0..41).map(|i| 10f64.powf(-2.0 + 0.15 * f64::from(i))).collect();
    let argmin = |y: &[f64], tau: f64, scale: f64| {
        let mut best = (f64::INFINITY, 0, 0);
        for (i, g1) in grid.iter().enumerate() {
            for (j, g2) in grid.iter().enumerate() {
                let g = vec![vec![g1 * scale, g2 * scale]];
                let v = dense_neg_log_marginal(y, tau, &a, &[k.clone()], &g, &HyperParams::default(), 1e-9).unwrap();
                if v < best.0 {
                    best = (v, i, j);
                }
            }
        }
        (best.1, best.2)
    };
    let y = [3.0, -1.0];
    let base = argmin(&y, 2.0, 1.0);
    let c: f64 = 4.0;
    let scaled = argmin(&[y[0] * c, y[1] * c], 2.0 / (c * c), c * c);
    assert_eq!(base, scaled);
    assert_eq!(base.0.cmp(&base.1), scaled.0.cmp(&scaled.1));
}

#[test]
fn guard_rejects_large_operators() {
    let op = ConvOperator::new(Kernel::<f64>::identity(), (20, 20)).unwrap();
    assert!(assemble_operator(&op).is_err());
}
