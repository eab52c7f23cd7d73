//! Seeded synthetic magnetization profiles.
//!
//! A phantom is a real non-negative magnitude profile confined to a cyclic window of
//! `⌊support_fraction · N⌋` pixels starting at `start`, multiplied by a phase model, plus
//! complex white Gaussian noise. Every random draw comes from ChaCha8 streams derived from
//! `seed`, so a spec always produces bit-identical samples.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::dft::{Image, Signal};
use crate::error::{invalid, Result};
use crate::scalar::Scalar;

const PROFILE_STREAM: u64 = 0;
const PHASE_STREAM: u64 = 1;
const NOISE_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhantomKind {
    /// Constant 1 across the window.
    Box,
    /// Three to five raised-cosine lobes inside the window.
    SmoothBumps,
    /// Gaussian-smoothed white noise, rectified and tapered to zero at the window edges.
    RandomSmooth,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum PhaseModel {
    None,
    Constant {
        theta: f64,
    },
    /// `exp(iπ·slope·n/N)`.
    Ramp {
        slope: f64,
    },
    /// Smooth random phase with peak magnitude `amplitude` radians.
    RandomSmooth {
        amplitude: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhantomSpec {
    pub n: usize,
    pub kind: PhantomKind,
    pub support_fraction: f64,
    /// First pixel of the support window; the window wraps around the end.
    pub start: usize,
    pub phase: PhaseModel,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl PhantomSpec {
    /// Real, noise-free phantom of the given kind starting at pixel 0.
    pub fn real(n: usize, kind: PhantomKind, support_fraction: f64, seed: u64) -> Self {
        Self { n, kind, support_fraction, start: 0, phase: PhaseModel::None, noise_sigma: 0.0, seed }
    }

    pub fn support_width(&self) -> usize {
        // small guard so that e.g. 0.3 * 10 counts as 3
        (self.support_fraction * self.n as f64 + 1e-9).floor() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return invalid("phantom length must be at least 1");
        }
        if !(self.support_fraction > 0.0 && self.support_fraction <= 1.0) {
            return invalid(format!("support fraction {} must lie in (0, 1]", self.support_fraction));
        }
        if self.support_width() == 0 {
            return invalid(format!("support fraction {} covers no pixel of {}", self.support_fraction, self.n));
        }
        if self.start >= self.n {
            return invalid(format!("support start {} outside width {}", self.start, self.n));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return invalid(format!("noise sigma {} must be finite and non-negative", self.noise_sigma));
        }
        let phase_ok = match self.phase {
            PhaseModel::None => true,
            PhaseModel::Constant { theta } => theta.is_finite(),
            PhaseModel::Ramp { slope } => slope.is_finite(),
            PhaseModel::RandomSmooth { amplitude } => amplitude.is_finite(),
        };
        if !phase_ok {
            return invalid("phase parameters must be finite");
        }
        Ok(())
    }
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn magnitude_profile(spec: &PhantomSpec) -> Vec<f64> {
    let n = spec.n;
    let width = spec.support_width();
    let mut rng = stream(spec.seed, PROFILE_STREAM);
    let window: Vec<f64> = match spec.kind {
        PhantomKind::Box => vec![1.0; width],
        PhantomKind::SmoothBumps => {
            let mut values = vec![0.0; width];
            let lobes = rng.random_range(3..=5);
            let w = width as f64;
            for _ in 0..lobes {
                let center = rng.random_range(0.0..w);
                let half = rng.random_range(1.0f64.max(w / 8.0)..=1.0f64.max(w / 3.0));
                let amplitude = rng.random_range(0.5..1.5);
                for (i, v) in values.iter_mut().enumerate() {
                    let d = (i as f64 - center).abs();
                    if d < half {
                        *v += amplitude * 0.5 * (1.0 + (std::f64::consts::PI * d / half).cos());
                    }
                }
            }
            values
        }
        PhantomKind::RandomSmooth => {
            let normal = Normal::new(0.0, 1.0).expect("unit normal");
            let raw: Vec<f64> = (0..width).map(|_| normal.sample(&mut rng)).collect();
            let sigma = 1.0f64.max(width as f64 / 8.0);
            let radius = (3.0 * sigma).ceil() as isize;
            (0..width)
                .map(|i| {
                    let smoothed: f64 = (-radius..=radius)
                        .filter_map(|d| {
                            let j = i as isize + d;
                            (j >= 0 && (j as usize) < width)
                                .then(|| raw[j as usize] * (-(d * d) as f64 / (2.0 * sigma * sigma)).exp())
                        })
                        .sum();
                    let taper = (std::f64::consts::PI * (i as f64 + 0.5) / width as f64).sin().powi(2);
                    smoothed.abs() * taper
                })
                .collect()
        }
    };
    let mut profile = vec![0.0; n];
    for (i, v) in window.into_iter().enumerate() {
        profile[(spec.start + i) % n] = v;
    }
    profile
}

fn phase_profile(spec: &PhantomSpec) -> Option<Vec<f64>> {
    let n = spec.n;
    match spec.phase {
        PhaseModel::None => None,
        PhaseModel::Constant { theta } => Some(vec![theta; n]),
        PhaseModel::Ramp { slope } => {
            Some((0..n).map(|i| std::f64::consts::PI * slope * i as f64 / n as f64).collect())
        }
        PhaseModel::RandomSmooth { amplitude } => {
            let mut rng = stream(spec.seed, PHASE_STREAM);
            let modes: Vec<(f64, f64)> =
                (1..=3).map(|_| (rng.random_range(-1.0..1.0), rng.random_range(0.0..std::f64::consts::TAU))).collect();
            let raw: Vec<f64> = (0..n)
                .map(|i| {
                    modes
                        .iter()
                        .enumerate()
                        .map(|(j, &(a, p))| {
                            a * (std::f64::consts::TAU * (j + 1) as f64 * i as f64 / n as f64 + p).cos()
                        })
                        .sum()
                })
                .collect();
            let peak = raw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let scale = if peak > 0.0 { amplitude / peak } else { 0.0 };
            Some(raw.into_iter().map(|v| v * scale).collect())
        }
    }
}

pub fn make_phantom<T: Scalar>(spec: &PhantomSpec) -> Result<Signal<T>> {
    spec.validate()?;
    let magnitude = magnitude_profile(spec);
    let samples: Vec<Complex<T>> = match phase_profile(spec) {
        None => magnitude.iter().map(|&m| Complex::new(T::lit(m), T::zero())).collect(),
        Some(phase) => magnitude
            .iter()
            .zip(&phase)
            .map(|(&m, &p)| Complex::new(T::lit(m * p.cos()), T::lit(m * p.sin())))
            .collect(),
    };
    let x = Signal::new(samples)?;
    add_noise(&x, spec.noise_sigma, spec.seed ^ NOISE_SALT)
}

/// `rows × N` phantom whose rows are independent draws sharing the same support window.
pub fn make_phantom_image<T: Scalar>(spec: &PhantomSpec, rows: usize) -> Result<Image<T>> {
    if rows == 0 {
        return invalid("phantom image needs at least one row");
    }
    let lines = (0..rows as u64)
        .map(|r| make_phantom(&PhantomSpec { seed: spec.seed.wrapping_add(r.wrapping_mul(NOISE_SALT)), ..*spec }))
        .collect::<Result<Vec<_>>>()?;
    Image::from_rows(&lines)
}

/// `x(n)·exp(iπ·slope·n/N)`.
pub fn apply_phase_ramp<T: Scalar>(x: &Signal<T>, slope: T) -> Signal<T> {
    let n = T::from_index(x.len());
    let out = x
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, &v)| v * Complex::from_polar(T::one(), T::PI() * slope * T::from_index(i) / n))
        .collect();
    Signal::from_vec_unchecked(out)
}

/// Adds independent N(0, sigma²) perturbations to every real and imaginary component.
pub fn add_noise<T: Scalar>(x: &Signal<T>, sigma: f64, seed: u64) -> Result<Signal<T>> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return invalid(format!("noise sigma {sigma} must be finite and non-negative"));
    }
    if sigma == 0.0 {
        return Ok(x.clone());
    }
    let normal = Normal::new(0.0, sigma).expect("valid sigma");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    x.map(|v| {
        let re = normal.sample(&mut rng);
        let im = normal.sample(&mut rng);
        v + Complex::new(T::lit(re), T::lit(im))
    })
}
