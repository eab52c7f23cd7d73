//! Dense one-sided Jacobi SVD for the small real matrices of the symmetry analysis.

use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 80;

/// Thin SVD `A = W Vᵀ` where `W = U Σ` is stored unnormalised (its columns have norms
/// equal to the singular values).
#[derive(Debug, Clone)]
pub struct Svd<T: Scalar> {
    rows: usize,
    cols: usize,
    /// Column-major; column j is `σ_j u_j`.
    w: Vec<T>,
    /// Column-major cols × cols; column j is `v_j`.
    v: Vec<T>,
    singular: Vec<T>,
}

impl<T: Scalar> Svd<T> {
    /// Hestenes rotations on column pairs until every pair is orthogonal to working
    /// precision. Input is row-major `rows × cols`.
    pub fn new(a: &[T], rows: usize, cols: usize) -> Self {
        assert_eq!(a.len(), rows * cols, "matrix data does not match its shape");
        let mut w = vec![T::zero(); rows * cols];
        for i in 0..rows {
            for j in 0..cols {
                w[j * rows + i] = a[i * cols + j];
            }
        }
        let mut v = vec![T::zero(); cols * cols];
        for i in 0..cols {
            v[i * cols + i] = T::one();
        }
        let eps = T::epsilon();
        let threshold = eps * T::from_index(rows.max(1));
        // columns below this squared norm are numerically zero; rotating them is noise
        let frob_sq = w.iter().fold(T::zero(), |acc, &x| acc + x * x);
        let negligible = eps * eps * frob_sq;
        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..cols {
                for q in p + 1..cols {
                    let (cp, cq) = (&w[p * rows..(p + 1) * rows], &w[q * rows..(q + 1) * rows]);
                    let (mut alpha, mut beta, mut gamma) = (T::zero(), T::zero(), T::zero());
                    for (&x, &y) in cp.iter().zip(cq) {
                        alpha += x * x;
                        beta += y * y;
                        gamma += x * y;
                    }
                    if alpha <= negligible || beta <= negligible || gamma.abs() <= threshold * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let zeta = (beta - alpha) / (gamma + gamma);
                    let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                    let c = T::one() / (T::one() + t * t).sqrt();
                    let s = c * t;
                    rotate_columns(&mut w, rows, p, q, c, s);
                    rotate_columns(&mut v, cols, p, q, c, s);
                }
            }
            if !rotated {
                break;
            }
        }
        let singular = w
            .chunks(rows.max(1))
            .take(cols)
            .map(|col| col.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt())
            .collect();
        Self { rows, cols, w, v, singular }
    }

    /// Singular values in column order (not sorted).
    pub fn singular_values(&self) -> &[T] {
        &self.singular
    }

    pub fn sorted_singular_values(&self) -> Vec<T> {
        let mut s = self.singular.clone();
        s.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
        s
    }

    pub fn max_singular_value(&self) -> T {
        self.singular.iter().fold(T::zero(), |m, &s| m.max(s))
    }

    /// Number of singular values above `rel_tol · σ_max`.
    pub fn rank(&self, rel_tol: T) -> usize {
        let cutoff = rel_tol * self.max_singular_value();
        self.singular.iter().filter(|&&s| s > cutoff && s > T::zero()).count()
    }

    /// Minimum-norm least-squares solution `A⁺ b`, discarding singular values at or
    /// below `rel_tol · σ_max`.
    pub fn solve(&self, b: &[T], rel_tol: T) -> Vec<T> {
        assert_eq!(b.len(), self.rows, "right-hand side does not match row count");
        let cutoff = rel_tol * self.max_singular_value();
        let mut x = vec![T::zero(); self.cols];
        for (j, &sigma) in self.singular.iter().enumerate() {
            if sigma <= cutoff || sigma == T::zero() {
                continue;
            }
            let col = &self.w[j * self.rows..(j + 1) * self.rows];
            let proj = col.iter().zip(b).fold(T::zero(), |acc, (&wij, &bi)| acc + wij * bi);
            let coef = proj / (sigma * sigma);
            for (xk, &vkj) in x.iter_mut().zip(&self.v[j * self.cols..(j + 1) * self.cols]) {
                *xk += coef * vkj;
            }
        }
        x
    }
}

fn rotate_columns<T: Scalar>(m: &mut [T], len: usize, p: usize, q: usize, c: T, s: T) {
    let (head, tail) = m.split_at_mut(q * len);
    let cp = &mut head[p * len..(p + 1) * len];
    let cq = &mut tail[..len];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

pub fn mat_vec<T: Scalar>(a: &[T], rows: usize, cols: usize, x: &[T]) -> Vec<T> {
    (0..rows)
        .map(|i| a[i * cols..(i + 1) * cols].iter().zip(x).fold(T::zero(), |acc, (&aij, &xj)| acc + aij * xj))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_and_rank_deficient() {
        let a = [3.0, 0.0, 0.0, 0.0, 2.0, 0.0];
        let svd = Svd::new(&a, 2, 3);
        assert_eq!(svd.sorted_singular_values()[..2], [3.0, 2.0]);
        assert_eq!(svd.rank(1e-9), 2);

        // rank one: second row is twice the first
        let b = [1.0, 2.0, 3.0, 2.0, 4.0, 6.0];
        let svd = Svd::new(&b, 2, 3);
        assert_eq!(svd.rank(1e-9), 1);
        let s = svd.sorted_singular_values();
        assert!((s[0] - (5.0f64 * 14.0).sqrt()).abs() < 1e-12);

        assert_eq!(Svd::new(&[0.0; 6], 3, 2).rank(1e-9), 0);
    }

    #[test]
    fn minimum_norm_solution() {
        // x + y = 2 has minimum-norm solution (1, 1)
        let svd = Svd::<f64>::new(&[1.0, 1.0], 1, 2);
        let x = svd.solve(&[2.0], 1e-9);
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 1.0).abs() < 1e-14);
        // overdetermined: least squares fit of a constant
        let svd = Svd::<f64>::new(&[1.0, 1.0, 1.0], 3, 1);
        let x = svd.solve(&[1.0, 2.0, 6.0], 1e-9);
        assert!((x[0] - 3.0).abs() < 1e-14);
    }
}
