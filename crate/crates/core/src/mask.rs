//! Line sampling masks over unshifted k-space indices.
//!
//! Every generator produces bits in the unshifted (DC at index 0) layout; the only way to
//! obtain a shifted mask is [`shift_mask`], which permutes the bits exactly as
//! [`fftshift_slice`](crate::dft::fftshift_slice) permutes data.

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dft::{fftshift_slice, ifftshift_slice};
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    Unshifted,
    Shifted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskKind {
    /// Keep `k` with `k mod R == offset`.
    Equispaced { offset: usize },
    /// Positive and negative halves laid out separately, the negative half counted
    /// backward from the end.
    Irregular { offset_pos: usize, offset_neg: usize },
    /// Uniform selection without replacement, ChaCha8 seeded.
    Random { seed: u64 },
    /// Explicit bits with no generator (full masks, CSV imports).
    Custom,
}

impl MaskKind {
    pub fn name(&self) -> &'static str {
        match self {
            MaskKind::Equispaced { .. } => "equispaced",
            MaskKind::Irregular { .. } => "irregular",
            MaskKind::Random { .. } => "random",
            MaskKind::Custom => "custom",
        }
    }
}

/// Parameters that fully determine a generated mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaskSpec {
    pub width: usize,
    pub acceleration: usize,
    pub kind: MaskKind,
    pub center_lines: usize,
}

impl MaskSpec {
    pub fn equispaced(width: usize, acceleration: usize, offset: usize) -> Self {
        Self { width, acceleration, kind: MaskKind::Equispaced { offset }, center_lines: 0 }
    }

    pub fn irregular(width: usize, acceleration: usize, offset_pos: usize, offset_neg: usize) -> Self {
        Self { width, acceleration, kind: MaskKind::Irregular { offset_pos, offset_neg }, center_lines: 0 }
    }

    pub fn random(width: usize, acceleration: usize, seed: u64) -> Self {
        Self { width, acceleration, kind: MaskKind::Random { seed }, center_lines: 0 }
    }

    pub fn with_center_lines(mut self, center_lines: usize) -> Self {
        self.center_lines = center_lines;
        self
    }

    /// Generates the unshifted mask this spec describes.
    pub fn build(&self) -> Result<SamplingMask> {
        let (n, r) = (self.width, self.acceleration);
        match self.kind {
            MaskKind::Equispaced { offset } => add_center_lines(&equispaced_mask(n, r, offset)?, self.center_lines),
            MaskKind::Irregular { offset_pos, offset_neg } => {
                add_center_lines(&offset_mask_irregular(n, r, offset_pos, offset_neg)?, self.center_lines)
            }
            MaskKind::Random { seed } => random_mask(n, r, seed, self.center_lines),
            MaskKind::Custom => invalid("custom masks carry explicit bits and cannot be regenerated"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskWarning {
    /// Width is not a multiple of the acceleration; aliased copies fall between pixels.
    NonMultipleWidth,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplingMask {
    bits: Vec<bool>,
    layout: Layout,
    spec: MaskSpec,
    warning: Option<MaskWarning>,
}

impl SamplingMask {
    fn checked(bits: Vec<bool>, layout: Layout, spec: MaskSpec, warning: Option<MaskWarning>) -> Result<Self> {
        if bits.is_empty() {
            return invalid("mask length must be at least 1");
        }
        if !bits.iter().any(|&b| b) {
            return invalid(format!("mask of length {} would have no sampled lines", bits.len()));
        }
        Ok(Self { bits, layout, spec, warning })
    }

    /// Wraps explicit bits as a [`MaskKind::Custom`] mask.
    pub fn from_bits(bits: Vec<bool>, layout: Layout) -> Result<Self> {
        let spec = MaskSpec { width: bits.len(), acceleration: 1, kind: MaskKind::Custom, center_lines: 0 };
        Self::checked(bits, layout, spec, None)
    }

    pub fn full(width: usize) -> Result<Self> {
        Self::from_bits(vec![true; width], Layout::Unshifted)
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn is_set(&self, k: usize) -> bool {
        self.bits[k]
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn spec(&self) -> &MaskSpec {
        &self.spec
    }

    pub fn warning(&self) -> Option<MaskWarning> {
        self.warning
    }

    /// Indices of sampled lines in ascending order.
    pub fn indices(&self) -> Vec<usize> {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn to_json(&self) -> MaskJson {
        let (offset_pos, offset_neg, seed) = match self.spec.kind {
            MaskKind::Equispaced { offset } => (Some(offset), None, None),
            MaskKind::Irregular { offset_pos, offset_neg } => (Some(offset_pos), Some(offset_neg), None),
            MaskKind::Random { seed } => (None, None, Some(seed)),
            MaskKind::Custom => (None, None, None),
        };
        MaskJson {
            version: 1,
            n: self.len(),
            acceleration: self.spec.acceleration,
            kind: self.spec.kind.name().to_string(),
            offset_pos,
            offset_neg,
            seed,
            center_lines: self.spec.center_lines,
            layout: self.layout,
            bits: self.bits.iter().map(|&b| u8::from(b)).collect(),
        }
    }

    /// Validates a decoded mask record. Generated kinds are regenerated from their
    /// parameters and must reproduce the stored bits exactly.
    pub fn from_json(record: &MaskJson) -> Result<Self> {
        if record.version != 1 {
            return Err(Error::Format(format!("unsupported mask version {}", record.version)));
        }
        if record.bits.len() != record.n {
            return Err(Error::Format(format!("mask has {} bits but n = {}", record.bits.len(), record.n)));
        }
        let bits = record
            .bits
            .iter()
            .map(|&b| match b {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::Format(format!("mask bit {other} is not 0 or 1"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let missing = |field: &str| Error::Format(format!("{} mask without {field}", record.kind));
        let kind = match record.kind.as_str() {
            "equispaced" => MaskKind::Equispaced { offset: record.offset_pos.ok_or_else(|| missing("offset_pos"))? },
            "irregular" => MaskKind::Irregular {
                offset_pos: record.offset_pos.ok_or_else(|| missing("offset_pos"))?,
                offset_neg: record.offset_neg.ok_or_else(|| missing("offset_neg"))?,
            },
            "random" => MaskKind::Random { seed: record.seed.ok_or_else(|| missing("seed"))? },
            "custom" => MaskKind::Custom,
            other => return Err(Error::Format(format!("unknown mask kind {other:?}"))),
        };
        if kind == MaskKind::Custom {
            let mut mask = Self::from_bits(bits, record.layout)?;
            mask.spec.acceleration = record.acceleration;
            mask.spec.center_lines = record.center_lines;
            return Ok(mask);
        }
        let spec =
            MaskSpec { width: record.n, acceleration: record.acceleration, kind, center_lines: record.center_lines };
        let mut mask = spec.build()?;
        if record.layout == Layout::Shifted {
            mask = shift_mask(&mask);
        }
        if mask.bits != bits {
            return Err(Error::Format("mask bits do not match their generator parameters".into()));
        }
        Ok(mask)
    }

    /// One line of comma-separated 0/1 values.
    pub fn to_csv(&self) -> String {
        let mut line = self.bits.iter().map(|&b| if b { "1" } else { "0" }).collect::<Vec<_>>().join(",");
        line.push('\n');
        line
    }

    pub fn from_csv(text: &str, layout: Layout) -> Result<Self> {
        let bits = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| match t {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(Error::Format(format!("mask CSV value {other:?} is not 0 or 1"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(bits, layout)
    }
}

/// Canonical on-disk mask record; field order is the serialized order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaskJson {
    pub version: u32,
    pub n: usize,
    pub acceleration: usize,
    pub kind: String,
    pub offset_pos: Option<usize>,
    pub offset_neg: Option<usize>,
    pub seed: Option<u64>,
    pub center_lines: usize,
    pub layout: Layout,
    pub bits: Vec<u8>,
}

fn check_acceleration(r: usize) -> Result<()> {
    if r < 2 {
        return invalid(format!("acceleration must be at least 2, got {r}"));
    }
    Ok(())
}

/// Keeps every `k` with `k mod R == offset`. Widths that are not a multiple of `R` are
/// accepted and flagged with [`MaskWarning::NonMultipleWidth`].
pub fn equispaced_mask(n: usize, r: usize, offset: usize) -> Result<SamplingMask> {
    check_acceleration(r)?;
    if offset >= r {
        return invalid(format!("offset {offset} must be below acceleration {r}"));
    }
    let bits = (0..n).map(|k| k % r == offset).collect();
    let warning = (!n.is_multiple_of(r)).then_some(MaskWarning::NonMultipleWidth);
    SamplingMask::checked(bits, Layout::Unshifted, MaskSpec::equispaced(n, r, offset), warning)
}

/// Builds the positive half (`⌈N/2⌉` lines from DC upward) and the negative half
/// (remaining lines, counted backward from the end) with independent offsets.
pub fn offset_mask_irregular(n: usize, r: usize, offset_pos: usize, offset_neg: usize) -> Result<SamplingMask> {
    check_acceleration(r)?;
    if n < 2 {
        return invalid(format!("irregular mask needs width of at least 2, got {n}"));
    }
    if offset_pos >= r || offset_neg >= r {
        return invalid(format!("offsets ({offset_pos}, {offset_neg}) must be below acceleration {r}"));
    }
    let pos_len = n.div_ceil(2);
    let neg_len = n - pos_len;
    let positive = (0..pos_len).map(|i| i >= offset_pos && (i - offset_pos).is_multiple_of(r));
    let mut negative: Vec<bool> = (0..neg_len).map(|i| i >= offset_neg && (i - offset_neg).is_multiple_of(r)).collect();
    negative.reverse();
    let bits = positive.chain(negative).collect();
    SamplingMask::checked(bits, Layout::Unshifted, MaskSpec::irregular(n, r, offset_pos, offset_neg), None)
}

/// Negative-half offset that continues the `k ≡ 1 (mod R)` pattern: `(R - 2) mod R`.
pub fn default_negative_offset(r: usize) -> usize {
    (r + r - 2) % r
}

/// ORs in the `⌈c/2⌉` lowest non-negative and `⌊c/2⌋` highest-index (negative) frequencies.
pub fn add_center_lines(mask: &SamplingMask, count: usize) -> Result<SamplingMask> {
    if mask.layout != Layout::Unshifted {
        return invalid("center lines are defined on unshifted masks");
    }
    let n = mask.len();
    if count > n {
        return invalid(format!("{count} center lines exceed width {n}"));
    }
    let mut out = mask.clone();
    for k in center_indices(n, count) {
        out.bits[k] = true;
    }
    out.spec.center_lines = out.spec.center_lines.max(count);
    Ok(out)
}

fn center_indices(n: usize, count: usize) -> impl Iterator<Item = usize> {
    (0..count.div_ceil(2)).chain(n - count / 2..n)
}

/// Uniformly selects `round(N/R)` lines without replacement, center lines first.
///
/// The generator is ChaCha8 seeded with `seed` via `seed_from_u64`, so masks are
/// reproducible across platforms.
pub fn random_mask(n: usize, r: usize, seed: u64, center: usize) -> Result<SamplingMask> {
    check_acceleration(r)?;
    if n == 0 {
        return invalid("mask length must be at least 1");
    }
    if center > n {
        return invalid(format!("{center} center lines exceed width {n}"));
    }
    // round half up
    let total = (2 * n + r) / (2 * r);
    if total < center {
        return invalid(format!("{center} center lines exceed the {total} lines allowed at acceleration {r}"));
    }
    let mut bits = vec![false; n];
    for k in center_indices(n, center) {
        bits[k] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&k| !bits[k]).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in rand::seq::index::sample(&mut rng, free.len(), total - center) {
        bits[free[i]] = true;
    }
    let spec = MaskSpec::random(n, r, seed).with_center_lines(center);
    SamplingMask::checked(bits, Layout::Unshifted, spec, None)
}

/// Converts between layouts: fftshift permutation when unshifted, its inverse otherwise.
pub fn shift_mask(mask: &SamplingMask) -> SamplingMask {
    let (bits, layout) = match mask.layout {
        Layout::Unshifted => (fftshift_slice(&mask.bits), Layout::Shifted),
        Layout::Shifted => (ifftshift_slice(&mask.bits), Layout::Unshifted),
    };
    SamplingMask { bits, layout, ..mask.clone() }
}

/// Fraction of sampled lines, exact.
pub fn sampling_fraction(mask: &SamplingMask) -> Ratio<usize> {
    Ratio::new(mask.count(), mask.len())
}

/// Image axis along which the 1D mask runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskAxis {
    /// The mask selects rows; each row is kept or dropped entirely.
    Rows,
    /// The mask selects columns; each column is kept or dropped entirely.
    Cols,
}

/// Row-major binary image of a line mask extended along the other axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskImage {
    pub rows: usize,
    pub cols: usize,
    pub bits: Vec<bool>,
    pub layout: Layout,
}

impl MaskImage {
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.cols + col]
    }
}

/// Replicates the mask across `other_len` lines of the other axis. Multi-coil data uses
/// the same image for every coil.
pub fn extend_mask_2d(mask: &SamplingMask, other_len: usize, axis: MaskAxis) -> Result<MaskImage> {
    if other_len == 0 {
        return invalid("extension length must be at least 1");
    }
    let n = mask.len();
    let (rows, cols) = match axis {
        MaskAxis::Rows => (n, other_len),
        MaskAxis::Cols => (other_len, n),
    };
    let bits = (0..rows * cols)
        .map(|i| match axis {
            MaskAxis::Rows => mask.bits[i / cols],
            MaskAxis::Cols => mask.bits[i % cols],
        })
        .collect();
    Ok(MaskImage { rows, cols, bits, layout: mask.layout })
}
