//! Dense complex linear algebra used by the selection pipeline.
//!
//! Everything here is sized for combining problems (M up to a few hundred
//! antennas), so the kernels favour clarity and numerical robustness over
//! asymptotic cleverness: unblocked Cholesky, cyclic Jacobi for the Hermitian
//! square root, Householder QR for least squares.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Relative pivot tolerance for Cholesky: a pivot at or below this fraction of
/// the largest diagonal entry is treated as a positive-definiteness failure
/// rather than round-off.
pub const CHOLESKY_PIVOT_RTOL: f64 = 1e-12;

/// Relative eigenvalue clipping threshold for the Hermitian square root.
pub const PSD_CLIP_RTOL: f64 = 1e-10;

/// Condition-number guard for least squares.
pub const LS_CONDITION_LIMIT: f64 = 1e12;

/// Dense complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Build from row slices; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == n_cols), "ragged rows");
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for r in rows {
            data.extend_from_slice(r);
        }
        Self {
            rows: n_rows,
            cols: n_cols,
            data,
        }
    }

    /// Real matrix entries lifted to complex; convenient in tests.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let lifted: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&lifted)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    /// Conjugate transpose.
    pub fn hermitian_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum::<Complex64>()
            })
            .collect()
    }

    pub fn mul_mat(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix-matrix dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.get(r, c) + a * other.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Hermitian inner product `a^H b`.
#[inline]
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[inline]
pub fn norm2_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

#[inline]
pub fn norm2(v: &[Complex64]) -> f64 {
    norm2_sqr(v).sqrt()
}

/// Cholesky factorization `R = L L^H` of a Hermitian positive-definite matrix.
///
/// Only the lower triangle of `R` is read. The factor has a strictly positive
/// real diagonal. A pivot at or below `CHOLESKY_PIVOT_RTOL` times the largest
/// diagonal entry reports `NotPositiveDefinite`.
pub fn cholesky(r: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = r.rows();
    if n == 0 || r.cols() != n {
        return Err(Error::InvalidParams(format!(
            "cholesky needs a square matrix with n >= 1, got {}x{}",
            r.rows(),
            r.cols()
        )));
    }

    let max_diag = (0..n).map(|j| r.get(j, j).re).fold(f64::NEG_INFINITY, f64::max);
    let threshold = CHOLESKY_PIVOT_RTOL * max_diag;

    let mut l = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut pivot = r.get(j, j).re;
        for k in 0..j {
            pivot -= l.get(j, k).norm_sqr();
        }
        if pivot <= threshold || !pivot.is_finite() {
            return Err(Error::NotPositiveDefinite { index: j, pivot });
        }
        let ljj = pivot.sqrt();
        l.set(j, j, Complex64::new(ljj, 0.0));

        for i in (j + 1)..n {
            let mut s = r.get(i, j);
            for k in 0..j {
                s -= l.get(i, k) * l.get(j, k).conj();
            }
            l.set(i, j, s / ljj);
        }
    }
    Ok(l)
}

/// Forward substitution: solves `L y = b` for lower-triangular `L`.
pub fn forward_solve(l: &ComplexMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = l.rows();
    if l.cols() != n {
        return Err(Error::InvalidParams("forward_solve needs a square matrix".into()));
    }
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }
    let mut y = vec![Complex64::ZERO; n];
    for i in 0..n {
        let diag = l.get(i, i);
        if diag == Complex64::ZERO {
            return Err(Error::SingularMatrix(i));
        }
        let mut s = b[i];
        for k in 0..i {
            s -= l.get(i, k) * y[k];
        }
        y[i] = s / diag;
    }
    Ok(y)
}

/// Back substitution: solves `L^H x = y` for lower-triangular `L`.
///
/// Together with [`forward_solve`] this solves `L L^H x = b` in two passes.
pub fn conj_transpose_solve(l: &ComplexMatrix, y: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = l.rows();
    if l.cols() != n {
        return Err(Error::InvalidParams("conj_transpose_solve needs a square matrix".into()));
    }
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: y.len(),
        });
    }
    let mut x = vec![Complex64::ZERO; n];
    for i in (0..n).rev() {
        let diag = l.get(i, i).conj();
        if diag == Complex64::ZERO {
            return Err(Error::SingularMatrix(i));
        }
        let mut s = y[i];
        for k in (i + 1)..n {
            s -= l.get(k, i).conj() * x[k];
        }
        x[i] = s / diag;
    }
    Ok(x)
}

/// Hermitian positive-semidefinite square root via Jacobi eigendecomposition.
///
/// Eigenvalues in `[-PSD_CLIP_RTOL * ||P||_2, 0)` are clipped to zero; anything
/// below that reports `NotPsd`. The input is treated as Hermitian.
pub fn hermitian_sqrt(p: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = p.rows();
    if n == 0 || p.cols() != n {
        return Err(Error::InvalidParams(format!(
            "hermitian_sqrt needs a square matrix with n >= 1, got {}x{}",
            p.rows(),
            p.cols()
        )));
    }

    let (mut eigenvalues, vectors) = jacobi_hermitian_eigen(p);

    let spectral_norm = eigenvalues.iter().fold(0.0f64, |acc, &l| acc.max(l.abs()));
    let threshold = PSD_CLIP_RTOL * spectral_norm;
    for lambda in &mut eigenvalues {
        if *lambda < -threshold {
            return Err(Error::NotPsd {
                eigenvalue: *lambda,
                threshold: -threshold,
            });
        }
        if *lambda < 0.0 {
            *lambda = 0.0;
        }
    }

    // S = V sqrt(Lambda) V^H, assembled Hermitian by construction.
    let sqrt_l: Vec<f64> = eigenvalues.iter().map(|l| l.sqrt()).collect();
    let mut s = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut acc = Complex64::ZERO;
            for (k, &sl) in sqrt_l.iter().enumerate() {
                acc += sl * vectors.get(i, k) * vectors.get(j, k).conj();
            }
            if i == j {
                s.set(i, i, Complex64::new(acc.re, 0.0));
            } else {
                s.set(i, j, acc);
                s.set(j, i, acc.conj());
            }
        }
    }
    Ok(s)
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// Returns `(eigenvalues, V)` with `P = V diag(eigenvalues) V^H` and the
/// columns of `V` orthonormal. Each rotation removes the phase of the pivot
/// entry first, reducing the 2x2 block to the real symmetric case.
fn jacobi_hermitian_eigen(p: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = p.rows();
    let mut a = p.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    const MAX_SWEEPS: usize = 64;
    for _ in 0..MAX_SWEEPS {
        let mut off_sqr = 0.0;
        for r in 0..n {
            for c in (r + 1)..n {
                off_sqr += a.get(r, c).norm_sqr();
            }
        }
        if off_sqr.sqrt() <= 1e-14 * scale {
            break;
        }

        for piv_p in 0..n.saturating_sub(1) {
            for piv_q in (piv_p + 1)..n {
                let gamma = a.get(piv_p, piv_q);
                let abs_g = gamma.norm();
                if abs_g == 0.0 {
                    continue;
                }

                let alpha = a.get(piv_p, piv_p).re;
                let beta = a.get(piv_q, piv_q).re;
                let omega = gamma / abs_g;

                // Rotation G = [[c, -s], [s, c]] with tangent solving
                // t^2 - 2 theta t - 1 = 0 (smaller-magnitude root).
                let theta = (beta - alpha) / (2.0 * abs_g);
                let t = if theta.abs() > 1e150 {
                    -0.5 / theta
                } else {
                    -theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                // Rows/columns outside the pivot pair.
                for k in 0..n {
                    if k == piv_p || k == piv_q {
                        continue;
                    }
                    let akp = a.get(k, piv_p);
                    let akq = a.get(k, piv_q);
                    let new_p = c * omega * akp + s * akq;
                    let new_q = -s * omega * akp + c * akq;
                    a.set(k, piv_p, new_p);
                    a.set(piv_p, k, new_p.conj());
                    a.set(k, piv_q, new_q);
                    a.set(piv_q, k, new_q.conj());
                }

                a.set(piv_p, piv_p, Complex64::new(alpha + t * abs_g, 0.0));
                a.set(piv_q, piv_q, Complex64::new(beta - t * abs_g, 0.0));
                a.set(piv_p, piv_q, Complex64::ZERO);
                a.set(piv_q, piv_p, Complex64::ZERO);

                for k in 0..n {
                    let vkp = v.get(k, piv_p);
                    let vkq = v.get(k, piv_q);
                    v.set(k, piv_p, c * omega * vkp + s * vkq);
                    v.set(k, piv_q, -s * omega * vkp + c * vkq);
                }
            }
        }
    }

    let eigenvalues = (0..n).map(|i| a.get(i, i).re).collect();
    (eigenvalues, v)
}

/// Least squares `min_x ||A x - b||_2` for a tall matrix with full column
/// rank, via Householder QR.
///
/// Reports `RankDeficient` when the ratio of extreme `R` diagonal magnitudes
/// exceeds `LS_CONDITION_LIMIT`.
pub fn ls_solve(a: &ComplexMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let m = a.rows();
    let k = a.cols();
    if b.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: b.len(),
        });
    }
    if k > m {
        return Err(Error::InvalidParams(format!(
            "ls_solve needs cols <= rows, got {m}x{k}"
        )));
    }
    if k == 0 {
        return Ok(Vec::new());
    }

    let mut qr = a.clone();
    let mut rhs = b.to_vec();
    let mut col_norms = vec![0.0f64; k];

    for j in 0..k {
        let sigma = {
            let mut s = 0.0;
            for i in j..m {
                s += qr.get(i, j).norm_sqr();
            }
            s.sqrt()
        };
        col_norms[j] = sigma;
        if sigma == 0.0 {
            continue;
        }

        let pivot = qr.get(j, j);
        let phase = if pivot.norm() > 0.0 {
            pivot / pivot.norm()
        } else {
            Complex64::ONE
        };
        let beta = -phase * sigma;
        // Householder vector v: v_j = pivot - beta, v_i = column entries below.
        let vj = pivot - beta;
        let tau = 1.0 / (sigma * (sigma + pivot.norm()));

        // Reflect the remaining columns and the right-hand side.
        for l in (j + 1)..k {
            let mut w = vj.conj() * qr.get(j, l);
            for i in (j + 1)..m {
                w += qr.get(i, j).conj() * qr.get(i, l);
            }
            w *= tau;
            let new_top = qr.get(j, l) - w * vj;
            qr.set(j, l, new_top);
            for i in (j + 1)..m {
                let val = qr.get(i, l) - w * qr.get(i, j);
                qr.set(i, l, val);
            }
        }
        {
            let mut w = vj.conj() * rhs[j];
            for i in (j + 1)..m {
                w += qr.get(i, j).conj() * rhs[i];
            }
            w *= tau;
            rhs[j] -= w * vj;
            for i in (j + 1)..m {
                rhs[i] -= w * qr.get(i, j);
            }
        }
        qr.set(j, j, beta);
    }

    let max_norm = col_norms.iter().fold(0.0f64, |a, &b| a.max(b));
    let min_norm = col_norms.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let cond = if min_norm > 0.0 {
        max_norm / min_norm
    } else {
        f64::INFINITY
    };
    if !cond.is_finite() || cond > LS_CONDITION_LIMIT {
        return Err(Error::RankDeficient(cond));
    }

    // Back substitution on the k x k upper-triangular system.
    let mut x = vec![Complex64::ZERO; k];
    for j in (0..k).rev() {
        let mut s = rhs[j];
        for l in (j + 1)..k {
            s -= qr.get(j, l) * x[l];
        }
        x[j] = s / qr.get(j, j);
    }
    Ok(x)
}
