use anyhow::{bail, Context, Result};
use ebsr::baselines::{bicubic_upscale, nearest_neighbor_upscale};
use ebsr::image::{
    encode, load_image, quality_report, rgb_to_ycbcr, shave_border, ycbcr_to_rgb, ColorImage, ColorSpace,
    Image, ImageFormat, LoadedImage,
};
use ebsr::linops::{compose_dh, DecimationSpec, Kernel, KernelRecord, LinearOperator};
use ebsr::prior::{default_filter_bank, load_filter_bank, FilterBank};
use ebsr::solver::{ebsr_run, EbsrConfig, EbsrReport};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::output::Staged;
use crate::{BaselineArgs, DegradeArgs, EvalArgs, KernelArgs, Method, SolveArgs};

fn blur_kernel(args: &KernelArgs, scale: usize) -> Result<Kernel<f64>> {
    let std = args.kernel_std.unwrap_or(2.0 * scale as f64 / 3.0);
    let size = args.kernel_size.unwrap_or(2 * scale + 1);
    Ok(Kernel::gaussian(std, size)?)
}

fn load(path: &std::path::Path) -> Result<LoadedImage<f64>> {
    Ok(load_image(path)?)
}

fn encode_to(img: &LoadedImage<f64>, path: &std::path::Path) -> Result<Vec<u8>> {
    let format = ImageFormat::from_path(path)?;
    Ok(encode(img, format)?)
}

fn clamp_pixels(img: &Image<f64>) -> Image<f64> {
    img.map(|v| v.clamp(0.0, 255.0))
}

/// Runs `f` on gray input directly, or on every plane of a color image.
fn per_plane(img: &LoadedImage<f64>, mut f: impl FnMut(&Image<f64>) -> Result<Image<f64>>) -> Result<LoadedImage<f64>> {
    Ok(match img {
        LoadedImage::Gray(g) => LoadedImage::Gray(f(g)?),
        LoadedImage::Color(c) => {
            let [a, b, d] = c.planes();
            LoadedImage::Color(ColorImage::new(c.space(), [f(a)?, f(b)?, f(d)?])?)
        }
    })
}

pub fn solve(args: &SolveArgs, scale: usize) -> Result<()> {
    let input = load(&args.input)?;
    let kernel = blur_kernel(&args.kernel, scale)?;
    let bank: FilterBank<f64> = match &args.filters {
        Some(p) => load_filter_bank(p).with_context(|| format!("bad filter bank {}", p.display()))?,
        None => default_filter_bank(),
    };
    let cfg = EbsrConfig {
        iterations: args.iters as usize,
        known_sigma: args.sigma,
        ..EbsrConfig::default()
    };

    let (result, report) = match &input {
        LoadedImage::Gray(y) => {
            let (x, report) = ebsr_run(y, scale, &kernel, &bank, &cfg)?;
            (LoadedImage::Gray(x), report)
        }
        LoadedImage::Color(rgb) => {
            // Only luma goes through the solver; chroma is interpolated.
            let [luma, cb, cr] = rgb_to_ycbcr(rgb)?.into_planes();
            let (y_hr, report) = ebsr_run(&luma, scale, &kernel, &bank, &cfg)?;
            let planes = [
                clamp_pixels(&y_hr),
                bicubic_upscale(&cb, scale)?,
                bicubic_upscale(&cr, scale)?,
            ];
            let ycc = ColorImage::new(ColorSpace::YCbCr, planes)?;
            (LoadedImage::Color(ycbcr_to_rgb(&ycc)?), report)
        }
    };

    let mut staged = Staged::default();
    staged.add(&args.output, &encode_to(&result, &args.output)?)?;
    if let Some(path) = &args.report {
        staged.add(path, &serde_json::to_vec_pretty(&report)?)?;
    }
    staged.commit()?;
    summarize(&report);
    Ok(())
}

fn summarize(report: &EbsrReport) {
    if let Some(last) = report.iterations.last() {
        eprintln!(
            "{} iterations in {:.2}s, final sigma estimate {:.3}",
            report.iterations.len(),
            report.total_seconds,
            last.sigma_est
        );
    }
}

#[derive(Serialize)]
struct DegradeRecord {
    scale: usize,
    noise_sigma: f64,
    seed: u64,
    kernel: KernelRecord,
    hr_dims: (usize, usize),
    lr_dims: (usize, usize),
    cropped: bool,
}

/// Sidecar path: the output path with `.json` appended.
pub fn sidecar_path(output: &std::path::Path) -> std::path::PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".json");
    s.into()
}

pub fn degrade(args: &DegradeArgs) -> Result<()> {
    let scale = args.scale as usize;
    let input = load(&args.input)?;
    let kernel = blur_kernel(&args.kernel, scale)?;

    let (h, w) = input.dims();
    let hr = (h - h % scale, w - w % scale);
    let cropped = hr != (h, w);
    if cropped {
        eprintln!(
            "warning: {h}x{w} is not a multiple of {scale}; using the central {}x{} crop",
            hr.0, hr.1
        );
    }
    if hr.0 == 0 || hr.1 == 0 {
        bail!("image {h}x{w} is smaller than the zoom factor {scale}");
    }
    let dh = compose_dh(kernel.clone(), DecimationSpec::with_factor(scale)?, hr)?;
    let lr = dh.lr_dims();
    let noise = Normal::new(0.0, args.noise_sigma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);

    let result = per_plane(&input, |plane| {
        let x = plane.center_crop(hr.0, hr.1)?;
        let y = dh
            .forward(x.as_slice())
            .into_iter()
            .map(|v| v + noise.sample(&mut rng))
            .collect();
        Ok(Image::from_vec(lr.0, lr.1, y)?)
    })?;

    let record = DegradeRecord {
        scale,
        noise_sigma: args.noise_sigma,
        seed: args.seed,
        kernel: kernel.to_record(),
        hr_dims: hr,
        lr_dims: lr,
        cropped,
    };
    let mut staged = Staged::default();
    staged.add(&args.output, &encode_to(&result, &args.output)?)?;
    staged.add(&sidecar_path(&args.output), &serde_json::to_vec_pretty(&record)?)?;
    staged.commit()
}

pub fn baseline(args: &BaselineArgs) -> Result<()> {
    let scale = args.scale as usize;
    let input = load(&args.input)?;
    let result = per_plane(&input, |p| match args.method {
        Method::Nn => Ok(nearest_neighbor_upscale(p, scale)?),
        Method::Bicubic => Ok(bicubic_upscale(p, scale)?),
    })?;
    let mut staged = Staged::default();
    staged.add(&args.output, &encode_to(&result, &args.output)?)?;
    staged.commit()
}

/// Metrics are taken on gray images directly and on the luma of color ones.
fn luma(img: LoadedImage<f64>) -> Result<Image<f64>> {
    Ok(match img {
        LoadedImage::Gray(g) => g,
        LoadedImage::Color(c) => {
            let [y, _, _] = rgb_to_ycbcr(&c)?.into_planes();
            y
        }
    })
}

#[derive(Serialize)]
struct EvalOutput {
    psnr: serde_json::Value,
    ssim: f64,
    mse: f64,
}

pub fn eval(args: &EvalArgs) -> Result<()> {
    let reference = luma(load(&args.reference)?)?;
    let estimate = luma(load(&args.estimate)?)?;
    if reference.dims() != estimate.dims() {
        bail!(
            "size mismatch: reference is {}x{}, estimate is {}x{}",
            reference.height(),
            reference.width(),
            estimate.height(),
            estimate.width()
        );
    }
    let reference = shave_border(&reference, args.shave)?;
    let estimate = shave_border(&estimate, args.shave)?;
    let q = quality_report(&reference, &estimate)?;
    let psnr = if q.psnr.is_finite() {
        serde_json::json!(q.psnr)
    } else {
        serde_json::json!("inf")
    };
    let out = EvalOutput {
        psnr,
        ssim: q.ssim,
        mse: q.mse,
    };
    println!("{}", serde_json::to_string(&out)?);
    Ok(())
}
