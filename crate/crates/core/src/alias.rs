//! Image-space consequences of line masking.
//!
//! Keeping the lines `k ≡ o (mod R)` of a width-`N` spectrum (with `R | N`) turns the image
//! into `R` copies of itself, each moved by a multiple of `N/R` and weighted by a root of
//! unity:
//!
//! ```text
//! y(m) = (1/R) Σ_{r=0}^{R-1} x(m + rN/R) · exp(-2πi·r·o/R)
//! ```

use num_complex::Complex;

use crate::dft::{dft2_forward, dft2_inverse, dft_forward, dft_inverse, Image, Signal};
use crate::error::{invalid, Result};
use crate::mask::{equispaced_mask, Layout, MaskImage, SamplingMask};
use crate::scalar::Scalar;

/// Default threshold separating signal from numerical zero in [`support_half_width`].
pub const SUPPORT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AliasCopy<T: Scalar> {
    /// Circular displacement in pixels, `r·N/R`.
    pub shift: usize,
    /// Unit-modulus weight `exp(-2πi·r·o/R)`.
    pub phase: Complex<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AliasPrediction<T: Scalar> {
    pub copies: Vec<AliasCopy<T>>,
    pub predicted: Signal<T>,
}

/// Zeroes every coefficient whose line is not sampled. `layout` is the layout of `spectrum`.
pub fn apply_mask<T: Scalar>(spectrum: &Signal<T>, layout: Layout, mask: &SamplingMask) -> Result<Signal<T>> {
    if spectrum.len() != mask.len() {
        return invalid(format!("spectrum length {} does not match mask length {}", spectrum.len(), mask.len()));
    }
    if layout != mask.layout() {
        return invalid(format!("data layout {layout:?} does not match mask layout {:?}", mask.layout()));
    }
    let zero = Complex::new(T::zero(), T::zero());
    let out = spectrum.as_slice().iter().zip(mask.bits()).map(|(&v, &keep)| if keep { v } else { zero }).collect();
    Ok(Signal::from_vec_unchecked(out))
}

/// `IDFT(mask ⊙ DFT(x))`.
pub fn masked_image<T: Scalar>(x: &Signal<T>, mask: &SamplingMask) -> Result<Signal<T>> {
    if mask.layout() != Layout::Unshifted {
        return invalid("masked_image expects an unshifted mask");
    }
    let spectrum = apply_mask(&dft_forward(x), Layout::Unshifted, mask)?;
    Ok(dft_inverse(&spectrum))
}

/// Masks full k-space lines of a 2D image: 2D transform, zero unsampled lines, inverse.
pub fn masked_image_2d<T: Scalar>(x: &Image<T>, mask: &MaskImage) -> Result<Image<T>> {
    if x.shape() != (mask.rows, mask.cols) {
        return invalid(format!("image shape {:?} does not match mask shape {:?}", x.shape(), (mask.rows, mask.cols)));
    }
    if mask.layout != Layout::Unshifted {
        return invalid("masked_image_2d expects an unshifted mask");
    }
    let spectrum = dft2_forward(x);
    let zero = Complex::new(T::zero(), T::zero());
    let data = spectrum.as_slice().iter().zip(&mask.bits).map(|(&v, &keep)| if keep { v } else { zero }).collect();
    Ok(dft2_inverse(&Image::new(x.rows(), x.cols(), data)?))
}

/// Evaluates the shifted-copies formula directly in image space.
pub fn predicted_alias_image<T: Scalar>(x: &Signal<T>, r: usize, offset: usize) -> Result<AliasPrediction<T>> {
    let n = x.len();
    if r == 0 || !n.is_multiple_of(r) {
        return invalid(format!("width {n} is not a multiple of acceleration {r}"));
    }
    if offset >= r {
        return invalid(format!("offset {offset} must be below acceleration {r}"));
    }
    let stride = n / r;
    let copies: Vec<AliasCopy<T>> = (0..r)
        .map(|j| {
            let angle = -T::TAU() * T::from_index((j * offset) % r) / T::from_index(r);
            AliasCopy { shift: j * stride, phase: Complex::new(angle.cos(), angle.sin()) }
        })
        .collect();
    let samples = x.as_slice();
    let scale = T::from_index(r);
    let predicted = (0..n)
        .map(|m| {
            copies
                .iter()
                .fold(Complex::new(T::zero(), T::zero()), |acc, c| acc + samples[(m + c.shift) % n] * c.phase)
                .unscale(scale)
        })
        .collect();
    Ok(AliasPrediction { copies, predicted: Signal::from_vec_unchecked(predicted) })
}

/// Largest absolute difference between the masked image and its analytic prediction.
pub fn verify_alias_identity<T: Scalar>(x: &Signal<T>, r: usize, offset: usize) -> Result<T> {
    let prediction = predicted_alias_image(x, r, offset)?;
    let mask = equispaced_mask(x.len(), r, offset)?;
    let actual = masked_image(x, &mask)?;
    Ok(actual.max_abs_diff(&prediction.predicted))
}

/// `R · max(Re y, 0)`: exact recovery of a real non-negative image whose support fits in
/// half the field of view, given its offset-1 aliased image.
pub fn clamp_reconstruct<T: Scalar>(y: &Signal<T>, r: usize) -> Vec<T> {
    let scale = T::from_index(r);
    y.as_slice().iter().map(|c| scale * c.re.max(T::zero())).collect()
}

/// Whether all samples with `|x| > tol` fit in one cyclic window of `⌊N/2⌋` pixels.
pub fn support_half_width<T: Scalar>(x: &Signal<T>, tol: T) -> bool {
    let n = x.len();
    let support: Vec<usize> = (0..n).filter(|&i| x[i].norm() > tol).collect();
    if support.is_empty() {
        return true;
    }
    // The smallest covering window starts right after the largest cyclic gap.
    let largest_gap = support
        .iter()
        .zip(support.iter().cycle().skip(1))
        .map(|(&a, &b)| (b + n - a) % n)
        .map(|g| if g == 0 { n } else { g })
        .max()
        .unwrap_or(n);
    let covering = n - largest_gap + 1;
    covering <= n / 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mask::shift_mask;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    /// Brute-force DFT -> mask -> IDFT without any of the crate's transforms.
    fn brute_masked(x: &[Complex<f64>], keep: impl Fn(usize) -> bool) -> Vec<Complex<f64>> {
        let n = x.len();
        let tau = std::f64::consts::TAU;
        let spectrum: Vec<Complex<f64>> = (0..n)
            .map(|k| (0..n).map(|j| x[j] * Complex::from_polar(1.0, -tau * (k * j) as f64 / n as f64)).sum())
            .collect();
        (0..n)
            .map(|m| {
                (0..n)
                    .filter(|&k| keep(k))
                    .map(|k| spectrum[k] * Complex::from_polar(1.0, tau * (k * m) as f64 / n as f64))
                    .sum::<Complex<f64>>()
                    / n as f64
            })
            .collect()
    }

    #[test]
    fn apply_mask_examples() {
        let ones = Signal::from_real(&[1.0; 8]).unwrap();
        let mask = SamplingMask::from_bits((0..8).map(|k| k == 1 || k == 5).collect(), Layout::Unshifted).unwrap();
        let y = apply_mask(&ones, Layout::Unshifted, &mask).unwrap();
        assert_eq!(y.re(), vec![0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        assert_eq!(apply_mask(&y, Layout::Unshifted, &mask).unwrap(), y);
        let full = SamplingMask::full(8).unwrap();
        assert_eq!(apply_mask(&ones, Layout::Unshifted, &full).unwrap(), ones);
        assert!(apply_mask(&ones, Layout::Shifted, &mask).is_err());
        assert!(apply_mask(&ones, Layout::Unshifted, &SamplingMask::full(7).unwrap()).is_err());
        assert!(apply_mask(&ones, Layout::Shifted, &shift_mask(&mask)).is_ok());
    }

    #[test]
    fn delta_aliasing_matches_brute_force() {
        let d = Signal::<f64>::delta(8, 0).unwrap();
        let want0 = [
            c(0.25, 0.0),
            c(0.0, 0.0),
            c(0.25, 0.0),
            c(0.0, 0.0),
            c(0.25, 0.0),
            c(0.0, 0.0),
            c(0.25, 0.0),
            c(0.0, 0.0),
        ];
        let want1 = [
            c(0.25, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.25),
            c(0.0, 0.0),
            c(-0.25, 0.0),
            c(0.0, 0.0),
            c(0.0, -0.25),
            c(0.0, 0.0),
        ];
        for (offset, want) in [(0, want0), (1, want1)] {
            let brute = brute_masked(d.as_slice(), |k| k % 4 == offset);
            for (b, w) in brute.iter().zip(&want) {
                assert!((b - w).norm() < 1e-15);
            }
            let want = Signal::new(want.to_vec()).unwrap();
            let y = masked_image(&d, &equispaced_mask(8, 4, offset).unwrap()).unwrap();
            assert!(y.max_abs_diff(&want) < 1e-15);
            let p = predicted_alias_image(&d, 4, offset).unwrap();
            assert!(p.predicted.max_abs_diff(&want) < 1e-15);
        }
    }

    #[test]
    fn prediction_structure() {
        let x = Signal::<f64>::from_real(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let p = predicted_alias_image(&x, 3, 2).unwrap();
        assert_eq!(p.copies.iter().map(|c| c.shift).collect::<Vec<_>>(), vec![0, 2, 4]);
        assert!(p.copies.iter().all(|c| (c.phase.norm() - 1.0).abs() < 1e-15));
        let p0 = predicted_alias_image(&x, 3, 0).unwrap();
        assert!(p0.copies.iter().all(|copy| (copy.phase - c(1.0, 0.0)).norm() < 1e-15));
        // (1/3)(x(0) + x(2) + x(4))
        assert!((p0.predicted[0] - c(3.0, 0.0)).norm() < 1e-15);
        let single = predicted_alias_image(&x, 1, 0).unwrap();
        assert!(single.predicted.max_abs_diff(&x) < 1e-15);
        assert!(predicted_alias_image(&x, 4, 1).is_err());
        assert!(predicted_alias_image(&x, 3, 3).is_err());
        assert!(verify_alias_identity(&x, 4, 0).is_err());
    }

    #[test]
    fn zero_signal_has_zero_error() {
        let x = Signal::<f64>::zeros(12).unwrap();
        for o in 0..4 {
            assert_eq!(verify_alias_identity(&x, 4, o).unwrap(), 0.0);
        }
    }

    #[test]
    fn clamp_examples() {
        let x = Signal::<f64>::from_real(&[2.0, 3.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let y = masked_image(&x, &equispaced_mask(8, 4, 1).unwrap()).unwrap();
        let rec = clamp_reconstruct(&y, 4);
        for (a, b) in rec.iter().zip(x.re()) {
            assert!((a - b).abs() < 1e-14);
        }
        let full = Signal::<f64>::from_real(&[1.0; 8]).unwrap();
        let y = masked_image(&full, &equispaced_mask(8, 4, 1).unwrap()).unwrap();
        let rec = clamp_reconstruct(&y, 4);
        assert!(rec.iter().zip(full.re()).any(|(a, b)| (a - b).abs() > 0.5));
    }

    #[test]
    fn support_examples() {
        let tol = SUPPORT_TOLERANCE;
        assert!(support_half_width(&Signal::from_real(&[2.0, 3.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap(), tol));
        assert!(!support_half_width(&Signal::from_real(&[1.0; 8]).unwrap(), tol));
        let wrap = Signal::from_real(&[1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(support_half_width(&wrap, tol));
        let exactly_half = Signal::from_real(&[1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(support_half_width(&exactly_half, tol));
        let too_wide = Signal::from_real(&[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(!support_half_width(&too_wide, tol));
        assert!(support_half_width(&Signal::from_real(&[0.0, 1e-13, 0.0]).unwrap(), tol));
        assert!(support_half_width(&Signal::from_real(&[0.0, 5.0, 0.0]).unwrap(), tol));
    }
}
