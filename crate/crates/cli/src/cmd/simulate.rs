use kmask::alias::{clamp_reconstruct, masked_image_2d, predicted_alias_image};
use kmask::dft::{Image, Signal};
use kmask::mask::{equispaced_mask, extend_mask_2d, shift_mask, MaskAxis};
use kmask::phantom::make_phantom;
use kmask::{Complex64, Layout, SamplingMask};
use serde::Serialize;

use super::report_warning;
use crate::args::SimulateCmd;
use crate::error::{CliError, CliResult};
use crate::io::{check_input, prepare_dir, read_mask, read_raw, write_json, write_raw};

#[derive(Debug, Serialize)]
struct Copy {
    shift: usize,
    phase_re: f64,
    phase_im: f64,
}

#[derive(Debug, Serialize)]
struct Metrics {
    shape: Vec<usize>,
    mask_kind: &'static str,
    sampled_lines: usize,
    /// Present when the mask is an equispaced lattice `k ≡ offset (mod R)`.
    acceleration: Option<usize>,
    offset: Option<usize>,
    copies: Option<Vec<Copy>>,
    max_abs_input: f64,
    /// max |masked image − prediction| over all pixels.
    max_alias_error: Option<f64>,
    alias_tol: f64,
    /// Set only under `--verify`.
    verified: Option<bool>,
    clamp_mse: Option<f64>,
}

/// `(R, offset)` when the sampled lines are exactly one residue class modulo R.
fn lattice(mask: &SamplingMask) -> Option<(usize, usize)> {
    let indices = mask.indices();
    let n = mask.len();
    if !n.is_multiple_of(indices.len()) {
        return None;
    }
    let r = n / indices.len();
    let offset = indices[0];
    (offset < r && equispaced_mask(n, r, offset).ok()?.bits() == mask.bits()).then_some((r, offset))
}

fn channels(samples: &[Complex64]) -> [(&'static str, Vec<f64>); 2] {
    [("real", samples.iter().map(|c| c.re).collect()), ("imag", samples.iter().map(|c| c.im).collect())]
}

pub fn run(cmd: &SimulateCmd) -> CliResult {
    if let Some(path) = &cmd.input {
        check_input(path)?;
    }
    if let Some(path) = &cmd.mask {
        check_input(path)?;
    }
    if cmd.rows == 0 {
        return Err(CliError::Usage("--rows must be at least 1".into()));
    }
    if cmd.tol.is_nan() || cmd.tol < 0.0 {
        return Err(CliError::Usage(format!("--tol {} must be non-negative", cmd.tol)));
    }

    let (shape, samples) = match &cmd.input {
        Some(path) => read_raw(path)?,
        None => {
            let spec = cmd.phantom.spec(cmd.n, cmd.seed);
            (kmask::format::Sidecar::new(vec![cmd.n]), make_phantom::<f64>(&spec)?.into_vec())
        }
    };
    let shape = shape.shape;
    let (height, width) = if shape.len() == 1 { (1, shape[0]) } else { (shape[0], shape[1]) };

    let mut mask = match &cmd.mask {
        Some(path) => read_mask(path)?,
        None => cmd.mask_args.spec(width, cmd.seed).build()?,
    };
    if mask.layout() == Layout::Shifted {
        mask = shift_mask(&mask);
    }
    if mask.len() != width {
        return Err(CliError::Usage(format!("mask width {} does not match signal width {width}", mask.len())));
    }
    report_warning(&mask);
    let params = lattice(&mask);
    if (cmd.verify || cmd.clamp) && params.is_none() {
        return Err(CliError::Usage(
            "--verify and --clamp need a mask that keeps exactly one residue class modulo R".into(),
        ));
    }
    prepare_dir(&cmd.out_dir)?;

    let image = Image::new(height, width, samples.clone())?;
    let masked = masked_image_2d(&image, &extend_mask_2d(&mask, height, MaskAxis::Cols)?)?;
    let mut predicted = Vec::with_capacity(samples.len());
    let mut copies = None;
    if let Some((r, offset)) = params {
        for row in 0..height {
            let prediction = predicted_alias_image(&image.row(row), r, offset)?;
            copies.get_or_insert_with(|| {
                prediction
                    .copies
                    .iter()
                    .map(|c| Copy { shift: c.shift, phase_re: c.phase.re, phase_im: c.phase.im })
                    .collect::<Vec<_>>()
            });
            predicted.extend_from_slice(prediction.predicted.as_slice());
        }
    }
    let max_abs_input = samples.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    let max_alias_error =
        params.map(|_| masked.as_slice().iter().zip(&predicted).fold(0.0f64, |m, (a, b)| m.max((a - b).norm())));

    let mut clamp_mse = None;
    if cmd.clamp {
        let (r, _) = params.expect("checked above");
        let mut clamped = Vec::with_capacity(samples.len());
        for row in 0..height {
            let y = Signal::new(masked.as_slice()[row * width..(row + 1) * width].to_vec())?;
            clamped.extend(clamp_reconstruct(&y, r).into_iter().map(|v| Complex64::new(v, 0.0)));
        }
        let total: f64 = clamped.iter().zip(&samples).map(|(a, b)| (a - b).norm_sqr()).sum();
        clamp_mse = Some(total / samples.len() as f64);
        write_raw(&cmd.out_dir, "clamp", shape.clone(), &clamped, &channels(&clamped)[..1], cmd.rows)?;
    }

    write_raw(&cmd.out_dir, "input", shape.clone(), &samples, &channels(&samples), cmd.rows)?;
    write_raw(&cmd.out_dir, "masked", shape.clone(), masked.as_slice(), &channels(masked.as_slice()), cmd.rows)?;
    if params.is_some() {
        write_raw(&cmd.out_dir, "predicted", shape.clone(), &predicted, &channels(&predicted), cmd.rows)?;
    }

    let bound = cmd.tol * max_abs_input;
    let verified = cmd.verify.then(|| max_alias_error.is_some_and(|e| e < bound || e == 0.0));
    let metrics = Metrics {
        shape,
        mask_kind: mask.spec().kind.name(),
        sampled_lines: mask.count(),
        acceleration: params.map(|p| p.0),
        offset: params.map(|p| p.1),
        copies,
        max_abs_input,
        max_alias_error,
        alias_tol: cmd.tol,
        verified,
        clamp_mse,
    };
    write_json(&cmd.out_dir.join("metrics.json"), &metrics)?;
    if verified == Some(false) {
        return Err(CliError::Verify(format!(
            "max alias error {:e} exceeds {:e} · max|x| = {bound:e}",
            max_alias_error.unwrap_or(f64::NAN),
            cmd.tol
        )));
    }
    Ok(())
}
