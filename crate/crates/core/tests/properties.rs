use ebsr::baselines::{bicubic_upscale, nearest_neighbor_upscale};
use ebsr::image::{
    decode, encode_gray, psnr, rgb_to_ycbcr, ssim, ycbcr_to_rgb, ColorImage, ColorSpace, Image, ImageFormat,
    LoadedImage,
};
use ebsr::linops::{
    compose_dh, correlate_direct, correlate_fft, downsample, upsample_zero, ConvOperator, DecimationSpec, Kernel,
    LinearOperator,
};
use ebsr::prior::{default_filter_bank, precision_apply, LatentVariances};
use ebsr::scalar::{dot, norm};
use proptest::prelude::*;

fn image(h: usize, w: usize) -> impl Strategy<Value = Image<f64>> {
    prop::collection::vec(0.0f64..255.0, h * w).prop_map(move |v| Image::from_vec(h, w, v).unwrap())
}

fn sized_image(min: usize, max: usize) -> impl Strategy<Value = Image<f64>> {
    (min..=max, min..=max).prop_flat_map(|(h, w)| image(h, w))
}

fn kernel(max_half: usize) -> impl Strategy<Value = Kernel<f64>> {
    (0..=max_half, 0..=max_half).prop_flat_map(|(a, b)| {
        let (h, w) = (2 * a + 1, 2 * b + 1);
        prop::collection::vec(-1.0f64..1.0, h * w).prop_map(move |t| Kernel::new(h, w, t).unwrap())
    })
}

fn vector(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conv_adjoint_holds(k in kernel(2), (h, w) in (5usize..12, 5usize..12), seed in any::<u64>()) {
        let op = ConvOperator::new(k, (h, w)).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let x: Vec<f64> = (0..h * w).map(|_| rand::Rng::gen_range(&mut rng, -1.0..1.0)).collect();
        let y: Vec<f64> = (0..h * w).map(|_| rand::Rng::gen_range(&mut rng, -1.0..1.0)).collect();
        let gap = (dot(&op.forward(&x), &y) - dot(&x, &op.adjoint(&y))).abs();
        prop_assert!(gap <= 1e-10 * norm(&x) * norm(&y));
    }

    #[test]
    fn observation_operator_adjoint_holds(r in 1usize..4, cells in (2usize..5, 2usize..5), x in vector(400), y in vector(400)) {
        let hr = (cells.0 * r.max(2), cells.1 * r.max(2));
        let dh = compose_dh(Kernel::gaussian(1.0, 3).unwrap(), DecimationSpec::with_factor(r).unwrap(), hr).unwrap();
        let (x, y) = (&x[..dh.input_len()], &y[..dh.output_len()]);
        let gap = (dot(&dh.forward(x), y) - dot(x, &dh.adjoint(y))).abs();
        prop_assert!(gap <= 1e-10 * norm(x) * norm(y));
    }

    #[test]
    fn fft_agrees_with_direct(img in sized_image(7, 20), k in kernel(3)) {
        let (h, w) = img.dims();
        let a = correlate_direct(img.as_slice(), h, w, &k);
        let b = correlate_fft(img.as_slice(), h, w, &k);
        for (p, q) in a.iter().zip(&b) {
            prop_assert!((p - q).abs() <= 1e-8);
        }
    }

    #[test]
    fn convolution_is_linear_and_shift_equivariant(img in image(9, 11), other in image(9, 11), k in kernel(1), dr in 0usize..9, dc in 0usize..11) {
        let op = ConvOperator::new(k, (9, 11)).unwrap();
        let mix: Vec<f64> = img.as_slice().iter().zip(other.as_slice()).map(|(a, b)| 0.3 * a - 1.7 * b).collect();
        let lhs = op.forward(&mix);
        let (fa, fb) = (op.forward(img.as_slice()), op.forward(other.as_slice()));
        for i in 0..lhs.len() {
            prop_assert!((lhs[i] - (0.3 * fa[i] - 1.7 * fb[i])).abs() <= 1e-10 * 255.0 * 9.0);
        }
        let shifted = Image::from_fn(9, 11, |i, j| img.get((i + dr) % 9, (j + dc) % 11));
        let fs = op.forward(shifted.as_slice());
        for i in 0..9 {
            for j in 0..11 {
                let want = fa[((i + dr) % 9) * 11 + (j + dc) % 11];
                prop_assert!((fs[i * 11 + j] - want).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn gaussian_taps_are_positive_and_sum_to_one(std in 0.1f64..5.0, half in 0usize..6) {
        let k = Kernel::<f64>::gaussian(std, 2 * half + 1).unwrap();
        prop_assert!((k.sum() - 1.0).abs() <= 1e-12);
        prop_assert!(k.taps().iter().all(|&t| t > 0.0));
    }

    #[test]
    fn decimation_round_trips(img in image(12, 12), r in 1usize..5) {
        let spec = DecimationSpec::with_factor(r).unwrap();
        let lr = downsample(&img, &spec).unwrap();
        let up = upsample_zero(&lr, &spec, (12, 12)).unwrap();
        prop_assert_eq!(downsample(&up, &spec).unwrap(), lr);
        for i in 0..12 {
            for j in 0..12 {
                let keep = i % r == 0 && j % r == 0;
                prop_assert_eq!(up.get(i, j), if keep { img.get(i, j) } else { 0.0 });
            }
        }
    }

    #[test]
    fn precision_is_symmetric_and_nonnegative(x in vector(64), y in vector(64), tau in 0.01f64..10.0, g in 0.1f64..100.0) {
        let bank = default_filter_bank::<f64>();
        let dh = compose_dh(Kernel::gaussian(1.0, 3).unwrap(), DecimationSpec::with_factor(2).unwrap(), (8, 8)).unwrap();
        let planes = (0..bank.len()).map(|l| Image::from_fn(8, 8, |i, j| g * (1.0 + ((i + j + l) % 3) as f64))).collect();
        let gamma = LatentVariances::from_planes(planes, 1e-10).unwrap();
        let wx = precision_apply(&x, tau, &bank, &gamma, &dh).unwrap();
        let wy = precision_apply(&y, tau, &bank, &gamma, &dh).unwrap();
        let scale = norm(&wx) * norm(&y) + norm(&x) * norm(&wy);
        prop_assert!((dot(&wx, &y) - dot(&x, &wy)).abs() <= 1e-10 * scale.max(1e-300));
        prop_assert!(dot(&wx, &x) >= 0.0);
    }

    #[test]
    fn metrics_are_symmetric(a in image(16, 14), b in image(16, 14)) {
        prop_assert_eq!(psnr(&a, &b).unwrap(), psnr(&b, &a).unwrap());
        prop_assert!((ssim(&a, &b).unwrap() - ssim(&b, &a).unwrap()).abs() <= 1e-12);
        prop_assert!((ssim(&a, &a).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn psnr_falls_as_error_grows(a in image(8, 8), d in 0.1f64..20.0) {
        let near = a.map(|v| v + d);
        let far = a.map(|v| v + 2.0 * d);
        prop_assert!(psnr(&a, &near).unwrap() > psnr(&a, &far).unwrap());
    }

    #[test]
    fn color_round_trip(r in image(4, 5), g in image(4, 5), b in image(4, 5)) {
        let rgb = ColorImage::new(ColorSpace::Rgb, [r, g, b]).unwrap();
        let back = ycbcr_to_rgb(&rgb_to_ycbcr(&rgb).unwrap()).unwrap();
        for c in 0..3 {
            for (p, q) in rgb.plane(c).as_slice().iter().zip(back.plane(c).as_slice()) {
                prop_assert!((p - q).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn integer_images_survive_encoding(px in prop::collection::vec(0u8..=255, 30), png in any::<bool>()) {
        let img = Image::from_vec(5, 6, px.iter().map(|&v| f64::from(v)).collect()).unwrap();
        let fmt = if png { ImageFormat::Png } else { ImageFormat::Pgm };
        let bytes = encode_gray(&img, fmt).unwrap();
        match decode::<f64>(&bytes).unwrap() {
            LoadedImage::Gray(back) => prop_assert_eq!(back, img),
            LoadedImage::Color(_) => prop_assert!(false, "decoded as color"),
        }
    }

    #[test]
    fn upscalers_stay_in_range_and_commute_with_shifts(img in sized_image(6, 10), r in 1usize..4) {
        let (lo, hi) = img.min_max();
        let span = hi - lo;
        let nn = nearest_neighbor_upscale(&img, r).unwrap();
        prop_assert!(nn.as_slice().iter().all(|&v| v >= lo && v <= hi));
        let bi = bicubic_upscale(&img, r).unwrap();
        prop_assert!(bi.as_slice().iter().all(|&v| v >= lo - 0.2 * span && v <= hi + 0.2 * span));

        // shifting the input by one pixel shifts the interior of the output by r
        let (h, w) = img.dims();
        let moved = Image::from_fn(h, w - 1, |i, j| img.get(i, j + 1));
        let head = Image::from_fn(h, w - 1, |i, j| img.get(i, j));
        let a = bicubic_upscale(&moved, r).unwrap();
        let b = bicubic_upscale(&head, r).unwrap();
        for i in 0..h * r {
            for j in 2 * r..(w - 4) * r {
                prop_assert!((a.get(i, j) - b.get(i, j + r)).abs() <= 1e-9);
            }
        }
    }
}
