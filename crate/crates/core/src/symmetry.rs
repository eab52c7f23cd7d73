//! Information retained by a mask once conjugate symmetry is accounted for.
//!
//! For a real image `X(-f) = conj(X(f))`, so a mask holding both `f` and `-f` measures the
//! same two real numbers twice. Frequencies are grouped into conjugacy classes `{f, -f}`;
//! DC and (for even N) Nyquist are self-conjugate with real coefficients and carry one
//! real degree of freedom, every other class carries two.
//!
//! The counting argument is checked against an independent route: the rank of the real
//! operator mapping a real signal to the real and imaginary parts of its retained
//! coefficients.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::Serialize;

use crate::dft::Signal;
use crate::error::{invalid, Result};
use crate::linalg::{mat_vec, Svd};
use crate::mask::{Layout, SamplingMask};
use crate::scalar::Scalar;

/// Relative singular-value cutoff used for rank and pseudo-inverse.
pub const DEFAULT_SVD_TOL: f64 = 1e-9;

/// Signed frequency stored at memory index `k`: `k` up to `(N-1)/2`, `k - N` above.
/// For even N the Nyquist index `N/2` maps to `-N/2`.
pub fn frequency_of_index(k: usize, n: usize) -> Result<i64> {
    if k >= n {
        return invalid(format!("index {k} outside width {n}"));
    }
    Ok(if k <= (n - 1) / 2 { k as i64 } else { k as i64 - n as i64 })
}

fn is_self_conjugate(f: i64, n: usize) -> bool {
    f == 0 || (n.is_multiple_of(2) && f == -(n as i64) / 2)
}

fn require_unshifted(mask: &SamplingMask) -> Result<()> {
    if mask.layout() != Layout::Unshifted {
        return invalid("frequency accounting needs an unshifted mask");
    }
    Ok(())
}

pub fn retained_frequencies(mask: &SamplingMask) -> Result<Vec<i64>> {
    require_unshifted(mask)?;
    mask.indices().into_iter().map(|k| frequency_of_index(k, mask.len())).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RedundancyReport {
    pub n: usize,
    pub retained: Vec<i64>,
    /// Conjugacy classes ordered by |f|, members in index order.
    pub classes: Vec<Vec<i64>>,
    pub unique_classes: usize,
    pub real_dof: usize,
    pub redundant_pairs: usize,
}

pub fn redundancy_report(mask: &SamplingMask) -> Result<RedundancyReport> {
    let n = mask.len();
    let retained = retained_frequencies(mask)?;
    let mut grouped: BTreeMap<u64, Vec<i64>> = BTreeMap::new();
    for &f in &retained {
        grouped.entry(f.unsigned_abs()).or_default().push(f);
    }
    let classes: Vec<Vec<i64>> = grouped.into_values().collect();
    let real_dof = classes.iter().map(|c| if is_self_conjugate(c[0], n) { 1 } else { 2 }).sum();
    let redundant_pairs = classes.iter().filter(|c| c.len() == 2).count();
    Ok(RedundancyReport { n, unique_classes: classes.len(), retained, classes, real_dof, redundant_pairs })
}

/// Real `(2·|retained|) × N` matrix; rows `2j` and `2j+1` are `cos(2πkn/N)` and
/// `-sin(2πkn/N)` for the j-th retained index `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOperator<T: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
    retained: Vec<usize>,
}

impl<T: Scalar> MeasurementOperator<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[row * self.cols + col]
    }

    pub fn retained_indices(&self) -> &[usize] {
        &self.retained
    }

    pub fn apply(&self, x: &[T]) -> Vec<T> {
        mat_vec(&self.data, self.rows, self.cols, x)
    }

    /// Stacks `(Re Y(k), Im Y(k))` for every retained `k`, matching the row order.
    pub fn measurements(&self, spectrum: &Signal<T>) -> Vec<T> {
        self.retained.iter().flat_map(|&k| [spectrum[k].re, spectrum[k].im]).collect()
    }

    pub fn svd(&self) -> Svd<T> {
        Svd::new(&self.data, self.rows, self.cols)
    }
}

pub fn measurement_matrix<T: Scalar>(mask: &SamplingMask, n: usize) -> Result<MeasurementOperator<T>> {
    require_unshifted(mask)?;
    if mask.len() != n {
        return invalid(format!("mask length {} does not match width {n}", mask.len()));
    }
    let retained = mask.indices();
    let step = T::TAU() / T::from_index(n);
    let mut data = Vec::with_capacity(2 * retained.len() * n);
    for &k in &retained {
        data.extend((0..n).map(|j| (step * T::from_index((k * j) % n)).cos()));
        data.extend((0..n).map(|j| -(step * T::from_index((k * j) % n)).sin()));
    }
    Ok(MeasurementOperator { rows: 2 * retained.len(), cols: n, data, retained })
}

/// Count of singular values above `tol × σ_max`.
pub fn numeric_rank<T: Scalar>(op: &MeasurementOperator<T>, tol: T) -> Result<usize> {
    if !(tol > T::zero() && tol < T::one()) {
        return invalid(format!("rank tolerance {tol} must lie in (0, 1)"));
    }
    if op.rows == 0 || op.cols == 0 {
        return invalid("rank of an empty operator");
    }
    Ok(op.svd().rank(tol))
}

/// Pseudo-inverse reconstruction for a fixed mask, reusable across many measurements.
#[derive(Debug, Clone)]
pub struct LeastSquares<T: Scalar> {
    op: MeasurementOperator<T>,
    svd: Svd<T>,
    tol: T,
}

impl<T: Scalar> LeastSquares<T> {
    pub fn new(mask: &SamplingMask, tol: T) -> Result<Self> {
        if !(tol > T::zero() && tol < T::one()) {
            return invalid(format!("pseudo-inverse tolerance {tol} must lie in (0, 1)"));
        }
        let op = measurement_matrix(mask, mask.len())?;
        let svd = op.svd();
        Ok(Self { op, svd, tol })
    }

    pub fn operator(&self) -> &MeasurementOperator<T> {
        &self.op
    }

    /// Minimum-norm real `x` fitting the retained coefficients of `spectrum`; values on
    /// unsampled lines are ignored.
    pub fn reconstruct(&self, spectrum: &Signal<T>) -> Result<Vec<T>> {
        if spectrum.len() != self.op.cols {
            return invalid(format!("spectrum length {} does not match mask length {}", spectrum.len(), self.op.cols));
        }
        Ok(self.svd.solve(&self.op.measurements(spectrum), self.tol))
    }
}

pub fn ls_reconstruct<T: Scalar>(masked_spectrum: &Signal<T>, mask: &SamplingMask, tol: T) -> Result<Vec<T>> {
    LeastSquares::new(mask, tol)?.reconstruct(masked_spectrum)
}

/// Mean squared modulus error between a real estimate and a (possibly complex) truth.
pub fn mse<T: Scalar>(estimate: &[T], truth: &Signal<T>) -> T {
    let total = estimate
        .iter()
        .zip(truth.as_slice())
        .fold(T::zero(), |acc, (&e, &t)| acc + (Complex::new(e, T::zero()) - t).norm_sqr());
    total / T::from_index(truth.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dft::dft_forward;
    use crate::mask::{equispaced_mask, offset_mask_irregular, shift_mask};

    #[test]
    fn frequency_layout() {
        let want = [0, 1, 2, 3, 4, 5, -6, -5, -4, -3, -2, -1];
        for (k, &f) in want.iter().enumerate() {
            assert_eq!(frequency_of_index(k, 12).unwrap(), f);
        }
        assert_eq!(frequency_of_index(10, 13).unwrap(), -3);
        assert_eq!(frequency_of_index(6, 13).unwrap(), 6);
        assert_eq!(frequency_of_index(0, 1).unwrap(), 0);
        assert!(frequency_of_index(12, 12).is_err());
    }

    #[test]
    fn retained_examples() {
        assert_eq!(retained_frequencies(&equispaced_mask(12, 4, 0).unwrap()).unwrap(), vec![0, 4, -4]);
        assert_eq!(retained_frequencies(&equispaced_mask(12, 4, 1).unwrap()).unwrap(), vec![1, 5, -3]);
        assert_eq!(retained_frequencies(&offset_mask_irregular(13, 4, 1, 2).unwrap()).unwrap(), vec![1, 5, -3]);
        assert!(retained_frequencies(&shift_mask(&equispaced_mask(12, 4, 0).unwrap())).is_err());
    }

    #[test]
    fn report_examples() {
        let r0 = redundancy_report(&equispaced_mask(12, 4, 0).unwrap()).unwrap();
        assert_eq!((r0.unique_classes, r0.redundant_pairs, r0.real_dof), (2, 1, 3));
        assert_eq!(r0.classes, vec![vec![0], vec![4, -4]]);
        let r1 = redundancy_report(&equispaced_mask(12, 4, 1).unwrap()).unwrap();
        assert_eq!((r1.unique_classes, r1.redundant_pairs, r1.real_dof), (3, 0, 6));
        let full = redundancy_report(&SamplingMask::full(8).unwrap()).unwrap();
        assert_eq!(full.real_dof, 8);
        assert_eq!(full.classes.last().unwrap(), &vec![-4]);
    }

    #[test]
    fn operator_matches_transform() {
        let mask = equispaced_mask(12, 4, 1).unwrap();
        let op = measurement_matrix::<f64>(&mask, 12).unwrap();
        assert_eq!((op.rows(), op.cols()), (6, 12));
        let x: Vec<f64> = (0..12).map(|i| ((i * 7 % 5) as f64) - 1.5).collect();
        let spectrum = dft_forward(&Signal::from_real(&x).unwrap());
        let got = op.apply(&x);
        let want = op.measurements(&spectrum);
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!(measurement_matrix::<f64>(&mask, 13).is_err());
    }

    #[test]
    fn rank_examples() {
        let rank = |m: &SamplingMask| numeric_rank(&measurement_matrix::<f64>(m, m.len()).unwrap(), 1e-9).unwrap();
        assert_eq!(rank(&SamplingMask::full(4).unwrap()), 4);
        assert_eq!(rank(&equispaced_mask(12, 4, 0).unwrap()), 3);
        assert_eq!(rank(&equispaced_mask(12, 4, 1).unwrap()), 6);
        let op = measurement_matrix::<f64>(&SamplingMask::full(4).unwrap(), 4).unwrap();
        assert!(numeric_rank(&op, 0.0).is_err());
        assert!(numeric_rank(&op, 1.0).is_err());
    }

    #[test]
    fn ls_full_mask_recovers_real_signal() {
        let x: Vec<f64> = (0..10).map(|i| (i as f64 * 0.7).sin() + 0.3).collect();
        let truth = Signal::from_real(&x).unwrap();
        let rec = ls_reconstruct(&dft_forward(&truth), &SamplingMask::full(10).unwrap(), 1e-9).unwrap();
        assert!(rec.iter().zip(&x).all(|(a, b)| (a - b).abs() < 1e-9));
    }

    #[test]
    fn ls_row_space_component_is_exact() {
        // cos(2π·4n/12) + 1 lies in the span of the offset-0 rows
        let x: Vec<f64> = (0..12).map(|n| 1.0 + (std::f64::consts::TAU * 4.0 * n as f64 / 12.0).cos()).collect();
        let truth = Signal::from_real(&x).unwrap();
        let mask = equispaced_mask(12, 4, 0).unwrap();
        let rec = ls_reconstruct(&dft_forward(&truth), &mask, 1e-9).unwrap();
        assert!(rec.iter().zip(&x).all(|(a, b)| (a - b).abs() < 1e-9));
        assert!(mse(&rec, &truth) < 1e-20);
    }
}
