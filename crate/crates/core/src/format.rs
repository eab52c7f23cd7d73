//! Byte-level encodings shared by every tool output.
//!
//! * Raw complex binary: little-endian IEEE-754 `f64`, interleaved real/imaginary,
//!   row-major for images, described by a JSON [`Sidecar`].
//! * PGM: binary `P5`, 8-bit, min-max normalised per image.
//! * JSON reports: every float written with 17 significant digits.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sidecar {
    pub version: u32,
    /// `[N]` for signals, `[h, w]` for images.
    pub shape: Vec<usize>,
    /// PGM renderings of this data keyed by channel, with their normalisation bounds.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub renderings: BTreeMap<String, PgmBounds>,
}

impl Sidecar {
    pub fn new(shape: Vec<usize>) -> Self {
        Self { version: 1, shape, renderings: BTreeMap::new() }
    }

    pub fn sample_count(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != 1 {
            return Err(Error::Format(format!("unsupported sidecar version {}", self.version)));
        }
        if !(1..=2).contains(&self.shape.len()) || self.shape.contains(&0) {
            return Err(Error::Format(format!(
                "sidecar shape {:?} must be [N] or [h, w] with positive sizes",
                self.shape
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PgmBounds {
    /// Value rendered as 0.
    pub min: f64,
    /// Value rendered as 255.
    pub max: f64,
}

pub fn encode_raw(samples: &[Complex<f64>]) -> Vec<u8> {
    let mut out = Vec::with_capacity(samples.len() * 16);
    for c in samples {
        out.extend_from_slice(&c.re.to_le_bytes());
        out.extend_from_slice(&c.im.to_le_bytes());
    }
    out
}

pub fn decode_raw(bytes: &[u8], sidecar: &Sidecar) -> Result<Vec<Complex<f64>>> {
    sidecar.validate()?;
    let expected = sidecar.sample_count() * 16;
    if bytes.len() != expected {
        return Err(Error::Format(format!("raw data has {} bytes, sidecar shape needs {expected}", bytes.len())));
    }
    Ok(bytes
        .chunks_exact(16)
        .map(|chunk| {
            let re = f64::from_le_bytes(chunk[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(chunk[8..].try_into().expect("8 bytes"));
            Complex::new(re, im)
        })
        .collect())
}

/// Binary PGM of a row-major `height × width` field. A constant field renders as all zeros.
pub fn encode_pgm(width: usize, height: usize, values: &[f64]) -> Result<(Vec<u8>, PgmBounds)> {
    if width == 0 || height == 0 || values.len() != width * height {
        return Err(Error::InvalidArgument(format!("PGM of {width}x{height} cannot hold {} values", values.len())));
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = max - min;
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend(values.iter().map(|&v| if range > 0.0 { (255.0 * (v - min) / range).round() as u8 } else { 0 }));
    Ok((out, PgmBounds { min, max }))
}

/// Writes floats as `d.dddddddddddddddde±x`: 17 significant digits, enough to
/// round-trip any `f64` and fixed-width per exponent so runs diff cleanly.
#[derive(Debug, Clone, Copy, Default)]
pub struct DiffableFormatter;

impl serde_json::ser::Formatter for DiffableFormatter {
    fn write_f64<W: ?Sized + std::io::Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + std::io::Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Compact JSON with [`DiffableFormatter`] floats. Non-finite floats serialise as `null`
/// through serde_json before reaching the formatter.
pub fn to_json_string<S: Serialize + ?Sized>(value: &S) -> Result<String> {
    let mut out = Vec::new();
    value.serialize(&mut serde_json::Serializer::with_formatter(&mut out, DiffableFormatter))?;
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}
