//! Discrete Fourier transforms and frequency-layout shifts.
//!
//! Convention: no factor on the forward transform, `1/N` on the inverse,
//!
//! ```text
//! X(k) = Σ_n x(n) exp(-2πi kn/N)        x(n) = (1/N) Σ_k X(k) exp(2πi kn/N)
//! ```
//!
//! All indexing is modulo the signal length. The fast path delegates to `rustfft`;
//! [`dft_reference`] is a direct quadratic-time evaluation of the sums above and is the
//! oracle the fast path is tested against.

use std::ops::Index;

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{invalid, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// A non-empty vector of finite complex samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal<T: Scalar> {
    samples: Vec<Complex<T>>,
}

impl<T: Scalar> Signal<T> {
    pub fn new(samples: Vec<Complex<T>>) -> Result<Self> {
        if samples.is_empty() {
            return invalid("signal must have at least one sample");
        }
        if let Some(i) = samples.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return invalid(format!("sample {i} is not finite"));
        }
        Ok(Self { samples })
    }

    pub fn from_real(values: &[T]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex::new(v, T::zero())).collect())
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(vec![Complex::new(T::zero(), T::zero()); len])
    }

    /// Unit impulse at `index`.
    pub fn delta(len: usize, index: usize) -> Result<Self> {
        if index >= len {
            return invalid(format!("delta index {index} outside length {len}"));
        }
        let mut s = vec![Complex::new(T::zero(), T::zero()); len];
        s[index] = Complex::new(T::one(), T::zero());
        Self::new(s)
    }

    /// Internal constructor for values derived from already-validated signals.
    pub(crate) fn from_vec_unchecked(samples: Vec<Complex<T>>) -> Self {
        debug_assert!(!samples.is_empty());
        Self { samples }
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.samples
    }

    pub fn into_vec(self) -> Vec<Complex<T>> {
        self.samples
    }

    pub fn re(&self) -> Vec<T> {
        self.samples.iter().map(|c| c.re).collect()
    }

    pub fn im(&self) -> Vec<T> {
        self.samples.iter().map(|c| c.im).collect()
    }

    pub fn max_abs(&self) -> T {
        self.samples.iter().fold(T::zero(), |m, c| m.max(c.norm()))
    }

    pub fn energy(&self) -> T {
        self.samples.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr())
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.samples.iter().zip(&other.samples).fold(T::zero(), |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn map(&self, mut f: impl FnMut(Complex<T>) -> Complex<T>) -> Result<Self> {
        Self::new(self.samples.iter().map(|&c| f(c)).collect())
    }
}

impl<T: Scalar> Index<usize> for Signal<T> {
    type Output = Complex<T>;

    fn index(&self, i: usize) -> &Complex<T> {
        &self.samples[i]
    }
}

/// Row-major h×w grid of finite complex samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Image<T: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> Image<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return invalid(format!("image shape {rows}x{cols} is empty"));
        }
        if data.len() != rows * cols {
            return invalid(format!("image data has {} samples, expected {rows}x{cols}", data.len()));
        }
        if data.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return invalid("image contains non-finite samples");
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Signal<T>]) -> Result<Self> {
        let Some(first) = rows.first() else {
            return invalid("image needs at least one row");
        };
        let cols = first.len();
        if rows.iter().any(|r| r.len() != cols) {
            return invalid("image rows differ in length");
        }
        let data = rows.iter().flat_map(|r| r.as_slice().iter().copied()).collect();
        Self::new(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> Signal<T> {
        Signal::from_vec_unchecked(self.data[row * self.cols..(row + 1) * self.cols].to_vec())
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data.iter().zip(&other.data).fold(T::zero(), |m, (a, b)| m.max((a - b).norm()))
    }
}

fn fast_transform<T: Scalar>(samples: &mut [Complex<T>], direction: Direction) {
    let n = samples.len();
    let mut planner = FftPlanner::<T>::new();
    let plan = match direction {
        Direction::Forward => planner.plan_fft_forward(n),
        Direction::Inverse => planner.plan_fft_inverse(n),
    };
    plan.process(samples);
    if direction == Direction::Inverse {
        let scale = T::one() / T::from_index(n);
        samples.iter_mut().for_each(|c| *c = c.scale(scale));
    }
}

pub fn dft_forward<T: Scalar>(x: &Signal<T>) -> Signal<T> {
    let mut out = x.samples.clone();
    fast_transform(&mut out, Direction::Forward);
    Signal::from_vec_unchecked(out)
}

pub fn dft_inverse<T: Scalar>(spectrum: &Signal<T>) -> Signal<T> {
    let mut out = spectrum.samples.clone();
    fast_transform(&mut out, Direction::Inverse);
    Signal::from_vec_unchecked(out)
}

/// Direct O(N²) evaluation of the transform sums. Twiddle angles are reduced modulo N
/// before evaluation so the oracle stays accurate for every index pair.
pub fn dft_reference<T: Scalar>(x: &Signal<T>, direction: Direction) -> Signal<T> {
    let n = x.len();
    let sign = match direction {
        Direction::Forward => -T::one(),
        Direction::Inverse => T::one(),
    };
    let step = T::TAU() / T::from_index(n);
    let out = (0..n)
        .map(|k| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (j, &v) in x.samples.iter().enumerate() {
                let angle = sign * step * T::from_index((k * j) % n);
                acc += v * Complex::new(angle.cos(), angle.sin());
            }
            match direction {
                Direction::Forward => acc,
                Direction::Inverse => acc.unscale(T::from_index(n)),
            }
        })
        .collect();
    Signal::from_vec_unchecked(out)
}

/// Moves index 0 to position `⌊N/2⌋`.
pub fn fftshift_slice<V: Clone>(values: &[V]) -> Vec<V> {
    let n = values.len();
    let mut out = values.to_vec();
    out.rotate_right(n / 2);
    out
}

/// Exact inverse of [`fftshift_slice`] for every length.
pub fn ifftshift_slice<V: Clone>(values: &[V]) -> Vec<V> {
    let n = values.len();
    let mut out = values.to_vec();
    out.rotate_left(n / 2);
    out
}

pub fn fftshift<T: Scalar>(x: &Signal<T>) -> Signal<T> {
    Signal::from_vec_unchecked(fftshift_slice(&x.samples))
}

pub fn ifftshift<T: Scalar>(x: &Signal<T>) -> Signal<T> {
    Signal::from_vec_unchecked(ifftshift_slice(&x.samples))
}

/// `z(n) = x((n + shift) mod N)` for any signed shift.
pub fn rotate<T: Scalar>(x: &Signal<T>, shift: isize) -> Signal<T> {
    let n = x.len() as isize;
    let a = shift.rem_euclid(n) as usize;
    let mut out = x.samples.clone();
    out.rotate_left(a);
    Signal::from_vec_unchecked(out)
}

fn transform_image<T: Scalar>(x: &Image<T>, direction: Direction) -> Image<T> {
    let (rows, cols) = x.shape();
    let mut data = x.data.clone();
    for row in data.chunks_mut(cols) {
        fast_transform(row, direction);
    }
    let mut column = vec![Complex::new(T::zero(), T::zero()); rows];
    for c in 0..cols {
        for r in 0..rows {
            column[r] = data[r * cols + c];
        }
        fast_transform(&mut column, direction);
        for r in 0..rows {
            data[r * cols + c] = column[r];
        }
    }
    Image { rows, cols, data }
}

/// Separable 2D transform: every row, then every column.
pub fn dft2_forward<T: Scalar>(x: &Image<T>) -> Image<T> {
    transform_image(x, Direction::Forward)
}

pub fn dft2_inverse<T: Scalar>(spectrum: &Image<T>) -> Image<T> {
    transform_image(spectrum, Direction::Inverse)
}
