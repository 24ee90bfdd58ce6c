//! MSE-optimal sparse antenna selection.
//!
//! The receive MSE of a combining vector factors, after whitening by the
//! Cholesky factor of `R = sigma_x2 h h^H + sigma_v2 I`, into a constant plus
//! `||L^H h_s - L^{-1} h_tilde||^2`. Selecting `K_s` antennas is therefore a
//! sparse approximation over the dictionary `L^H`, solved greedily by
//! orthogonal matching pursuit. The same formulation covers the i.i.d.,
//! correlated and imperfect-CSI cases: only the channel vector fed to
//! [`build_problem`] changes.
//!
//! OMP runs in the Gram domain: correlations against all dictionary columns
//! reduce to `h_tilde - R[:,S] w`, and the support least squares reuses an
//! incrementally grown Cholesky factor of `R[S,S]`. One selection costs
//! `O(K_s^2 M)` after the problem is built.

use crate::error::{Error, Result};
use crate::linalg::{cholesky, forward_solve, inner, ls_solve, norm2_sqr, ComplexMatrix};
use num_complex::Complex64;

/// Largest antenna count accepted by [`exhaustive_select`].
pub const EXHAUSTIVE_LIMIT: usize = 16;

/// Whitened selection problem: scaled estimate, covariance and its factor.
#[derive(Debug, Clone)]
pub struct SelectionProblem {
    h_tilde: Vec<Complex64>,
    r_mat: ComplexMatrix,
    l_mat: ComplexMatrix,
    sigma_x2: f64,
    sigma_v2: f64,
}

impl SelectionProblem {
    #[inline]
    pub fn m(&self) -> usize {
        self.h_tilde.len()
    }

    pub fn h_tilde(&self) -> &[Complex64] {
        &self.h_tilde
    }

    pub fn r_mat(&self) -> &ComplexMatrix {
        &self.r_mat
    }

    pub fn l_mat(&self) -> &ComplexMatrix {
        &self.l_mat
    }

    #[inline]
    pub fn sigma_x2(&self) -> f64 {
        self.sigma_x2
    }

    #[inline]
    pub fn sigma_v2(&self) -> f64 {
        self.sigma_v2
    }

    /// The OMP dictionary `L^H`, materialized.
    pub fn dictionary(&self) -> ComplexMatrix {
        self.l_mat.hermitian_transpose()
    }

    /// The OMP target `L^{-1} h_tilde`.
    pub fn whitened_target(&self) -> Result<Vec<Complex64>> {
        forward_solve(&self.l_mat, &self.h_tilde)
    }
}

/// Sparse combining vector: weights embedded in a length-M vector, the
/// selected antenna indices in selection order, and the sparsity budget.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionVector {
    pub weights: Vec<Complex64>,
    pub support: Vec<usize>,
    pub k_s: usize,
    /// Set when the whitened target was zero (nothing to approximate); the
    /// weights are all zero and the support empty.
    pub zero_target: bool,
}

/// Builds the selection problem `(h_tilde, R, L)` from a channel vector.
///
/// `h_tilde = sigma_x2 * channel_est` and `R = sigma_x2 * channel_est
/// channel_est^H + sigma_v2 * I`. The caller chooses the variant by passing
/// the i.i.d. channel, the correlated channel or the imperfect estimate.
/// With `sigma_v2 > 0` the Cholesky factorization always succeeds; a
/// non-positive noise power surfaces as `NotPositiveDefinite`.
pub fn build_problem(
    channel_est: &[Complex64],
    sigma_x2: f64,
    sigma_v2: f64,
) -> Result<SelectionProblem> {
    let m = channel_est.len();
    if m == 0 {
        return Err(Error::InvalidParams("channel vector must be non-empty".into()));
    }

    let h_tilde: Vec<Complex64> = channel_est.iter().map(|h| sigma_x2 * h).collect();

    let mut r_mat = ComplexMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            if i == j {
                let v = sigma_x2 * channel_est[i].norm_sqr() + sigma_v2;
                r_mat.set(i, i, Complex64::new(v, 0.0));
            } else {
                r_mat.set(i, j, sigma_x2 * channel_est[i] * channel_est[j].conj());
            }
        }
    }

    let l_mat = cholesky(&r_mat)?;
    Ok(SelectionProblem {
        h_tilde,
        r_mat,
        l_mat,
        sigma_x2,
        sigma_v2,
    })
}

/// Incrementally grown Cholesky factor of the support Gram matrix `R[S,S]`.
struct SupportCholesky {
    rows: Vec<Vec<Complex64>>,
}

impl SupportCholesky {
    fn new(capacity: usize) -> Self {
        Self {
            rows: Vec::with_capacity(capacity),
        }
    }

    fn len(&self) -> usize {
        self.rows.len()
    }

    /// Solves `L y = b`.
    fn forward(&self, b: &[Complex64]) -> Vec<Complex64> {
        let k = b.len();
        let mut y = vec![Complex64::ZERO; k];
        for i in 0..k {
            let mut s = b[i];
            for j in 0..i {
                s -= self.rows[i][j] * y[j];
            }
            y[i] = s / self.rows[i][i];
        }
        y
    }

    /// Solves `L^H x = y`.
    fn backward(&self, y: &[Complex64]) -> Vec<Complex64> {
        let k = y.len();
        let mut x = vec![Complex64::ZERO; k];
        for i in (0..k).rev() {
            let mut s = y[i];
            for j in (i + 1)..k {
                s -= self.rows[j][i].conj() * x[j];
            }
            x[i] = s / self.rows[i][i].conj();
        }
        x
    }

    /// Appends one index: `gram_col[j] = R[s_j, new]`, `diag = R[new, new]`.
    fn append(&mut self, gram_col: &[Complex64], diag: f64) -> Result<()> {
        let m_conj = self.forward(gram_col);
        let lam_sqr = diag - norm2_sqr(&m_conj);
        if lam_sqr <= 0.0 || !lam_sqr.is_finite() {
            return Err(Error::NotPositiveDefinite {
                index: self.len(),
                pivot: lam_sqr,
            });
        }
        let mut row: Vec<Complex64> = m_conj.iter().map(|z| z.conj()).collect();
        row.push(Complex64::new(lam_sqr.sqrt(), 0.0));
        self.rows.push(row);
        Ok(())
    }

    /// Solves `R[S,S] w = rhs` through the factor.
    fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        self.backward(&self.forward(rhs))
    }
}

/// Selects `k_s` antennas by orthogonal matching pursuit.
///
/// Runs exactly `k_s` iterations on the dictionary `L^H` and target
/// `L^{-1} h_tilde`. Each iteration picks the unselected column maximizing
/// the normalized residual correlation `|a_j^H r| / ||a_j||`, then re-solves
/// the least squares on the accumulated support; ties go to the lowest
/// antenna index. A zero target short-circuits to a flagged all-zero vector.
pub fn omp_select(problem: &SelectionProblem, k_s: usize) -> Result<SelectionVector> {
    let m = problem.m();
    if k_s == 0 || k_s > m {
        return Err(Error::InvalidSparsity { k_s, m });
    }

    let h_tilde = &problem.h_tilde;
    if norm2_sqr(h_tilde) == 0.0 {
        return Ok(SelectionVector {
            weights: vec![Complex64::ZERO; m],
            support: Vec::new(),
            k_s,
            zero_target: true,
        });
    }

    let r = &problem.r_mat;
    // ||a_j||^2 for column j of L^H equals (L L^H)_jj = R_jj.
    let col_norm_sqr: Vec<f64> = (0..m).map(|j| r.get(j, j).re).collect();

    let mut support: Vec<usize> = Vec::with_capacity(k_s);
    let mut selected = vec![false; m];
    let mut gram = SupportCholesky::new(k_s);
    let mut weights_on_support: Vec<Complex64> = Vec::new();
    // Residual correlations a_j^H r for every column, expressed in the Gram
    // domain: c = h_tilde - R[:,S] w. Starts at the target correlations.
    let mut corr: Vec<Complex64> = h_tilde.clone();

    for iter in 0..k_s {
        let mut best = usize::MAX;
        let mut best_score = f64::NEG_INFINITY;
        for j in 0..m {
            if selected[j] {
                continue;
            }
            let score = corr[j].norm_sqr() / col_norm_sqr[j];
            if score > best_score {
                best_score = score;
                best = j;
            }
        }

        let gram_col: Vec<Complex64> = support.iter().map(|&s| r.get(s, best)).collect();
        gram.append(&gram_col, r.get(best, best).re)?;
        support.push(best);
        selected[best] = true;

        let rhs: Vec<Complex64> = support.iter().map(|&s| h_tilde[s]).collect();
        weights_on_support = gram.solve(&rhs);

        if iter + 1 < k_s {
            for j in 0..m {
                let mut acc = h_tilde[j];
                for (i, &s) in support.iter().enumerate() {
                    acc -= r.get(j, s) * weights_on_support[i];
                }
                corr[j] = acc;
            }
        }
    }

    let mut weights = vec![Complex64::ZERO; m];
    for (i, &s) in support.iter().enumerate() {
        weights[s] = weights_on_support[i];
    }
    Ok(SelectionVector {
        weights,
        support,
        k_s,
        zero_target: false,
    })
}

/// Brute-force reference: evaluates every size-`k_s` support and returns the
/// global least-squares minimizer. Ties break to the lexicographically
/// smallest support. Guarded to small `m`; intended as a test oracle.
pub fn exhaustive_select(problem: &SelectionProblem, k_s: usize) -> Result<SelectionVector> {
    let m = problem.m();
    if m > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge {
            m,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    if k_s == 0 || k_s > m {
        return Err(Error::InvalidSparsity { k_s, m });
    }

    let target = problem.whitened_target()?;
    if norm2_sqr(&target) == 0.0 {
        return Ok(SelectionVector {
            weights: vec![Complex64::ZERO; m],
            support: Vec::new(),
            k_s,
            zero_target: true,
        });
    }
    let dict = problem.dictionary();

    let mut best: Option<(f64, Vec<usize>, Vec<Complex64>)> = None;
    for_each_combination(m, k_s, |support| {
        let sub = ComplexMatrix::from_fn(m, k_s, |r, c| dict.get(r, support[c]));
        let x = ls_solve(&sub, &target)?;
        let fitted = sub.mul_vec(&x);
        let resid = fitted
            .iter()
            .zip(&target)
            .map(|(f, t)| (t - f).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if best.as_ref().is_none_or(|(r, _, _)| resid < *r) {
            best = Some((resid, support.to_vec(), x));
        }
        Ok(())
    })?;

    let (_, support, x) = best.expect("at least one support");
    let mut weights = vec![Complex64::ZERO; m];
    for (i, &s) in support.iter().enumerate() {
        weights[s] = x[i];
    }
    Ok(SelectionVector {
        weights,
        support,
        k_s,
        zero_target: false,
    })
}

/// Calls `f` for every size-`k` index combination of `0..m`, lexicographic.
fn for_each_combination(
    m: usize,
    k: usize,
    mut f: impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx)?;
        let mut i = k;
        while i > 0 && idx[i - 1] == m - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return Ok(());
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Receive MSE of a combining vector, evaluated term by term:
/// `sigma_x2 - h_s^H c sigma_x2 - sigma_x2 c^H h_s + h_s^H (sigma_x2 c c^H)
/// h_s + sigma_v2 ||h_s||^2`.
pub fn mse_direct(
    h_s: &[Complex64],
    channel: &[Complex64],
    sigma_x2: f64,
    sigma_v2: f64,
) -> Result<f64> {
    if h_s.len() != channel.len() {
        return Err(Error::DimensionMismatch {
            expected: channel.len(),
            got: h_s.len(),
        });
    }
    let hs_c = inner(h_s, channel);
    let c_hs = inner(channel, h_s);
    let total = Complex64::new(sigma_x2, 0.0) - sigma_x2 * hs_c - sigma_x2 * c_hs
        + sigma_x2 * hs_c * c_hs
        + Complex64::new(sigma_v2 * norm2_sqr(h_s), 0.0);
    debug_assert!(
        total.im.abs() <= 1e-12 * total.re.abs().max(1.0),
        "MSE should be real, got imaginary part {}",
        total.im
    );
    Ok(total.re)
}

/// Receive MSE through the whitened factorization:
/// `sigma_x2 - ||L^{-1} h_tilde||^2 + ||L^H h_s - L^{-1} h_tilde||^2`.
pub fn mse_factored(h_s: &[Complex64], problem: &SelectionProblem) -> Result<f64> {
    let m = problem.m();
    if h_s.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: h_s.len(),
        });
    }
    let target = problem.whitened_target()?;
    let l = &problem.l_mat;
    let mut resid_sqr = 0.0;
    for i in 0..m {
        // (L^H h_s)_i only involves rows at or below i of the factor.
        let mut v = Complex64::ZERO;
        for j in i..m {
            v += l.get(j, i).conj() * h_s[j];
        }
        resid_sqr += (v - target[i]).norm_sqr();
    }
    Ok(problem.sigma_x2 - norm2_sqr(&target) + resid_sqr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{conj_transpose_solve, norm2};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_vec(rng: &mut ChaCha8Rng, m: usize) -> Vec<Complex64> {
        (0..m)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                c(re, im)
            })
            .collect()
    }

    /// Residual of the whitened least squares for given weights.
    fn whitened_residual(problem: &SelectionProblem, weights: &[Complex64]) -> f64 {
        let target = problem.whitened_target().unwrap();
        let fitted = problem.dictionary().mul_vec(weights);
        fitted
            .iter()
            .zip(&target)
            .map(|(f, t)| (t - f).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    #[test]
    fn build_problem_axis_aligned() {
        let p = build_problem(&[c(1.0, 0.0), c(0.0, 0.0)], 1.0, 1.0).unwrap();
        assert_eq!(p.r_mat().get(0, 0), c(2.0, 0.0));
        assert_eq!(p.r_mat().get(0, 1), c(0.0, 0.0));
        assert_eq!(p.r_mat().get(1, 1), c(1.0, 0.0));
        assert!((p.l_mat().get(0, 0).re - 2.0f64.sqrt()).abs() < 1e-15);
        assert!((p.l_mat().get(1, 1).re - 1.0).abs() < 1e-15);
        assert_eq!(p.h_tilde(), &[c(1.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn build_problem_real_channel() {
        let p = build_problem(&[c(2.0, 0.0), c(1.0, 0.0)], 1.0, 1.0).unwrap();
        let want = [[5.0, 2.0], [2.0, 2.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(p.r_mat().get(i, j), c(want[i][j], 0.0));
            }
        }
        assert_eq!(p.h_tilde(), &[c(2.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn build_problem_zero_signal() {
        let p = build_problem(&[c(3.0, -1.0), c(0.5, 2.0)], 0.0, 2.5).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { c(2.5, 0.0) } else { c(0.0, 0.0) };
                assert_eq!(p.r_mat().get(i, j), want);
            }
        }
        assert!(p.h_tilde().iter().all(|z| *z == Complex64::ZERO));
    }

    #[test]
    fn build_problem_invariants_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xc0de_0001);
        for _ in 0..50 {
            let m = 1 + rng.random_range(0..12usize);
            let ch = random_vec(&mut rng, m);
            let p = build_problem(&ch, 2.0, 0.5).unwrap();
            let recon = p.l_mat().mul_mat(&p.l_mat().hermitian_transpose());
            let mut diff = 0.0;
            for i in 0..m {
                for j in 0..m {
                    diff += (recon.get(i, j) - p.r_mat().get(i, j)).norm_sqr();
                }
            }
            assert!(diff.sqrt() <= 1e-10 * p.r_mat().frobenius_norm());
        }
    }

    #[test]
    fn omp_single_atom_matches_brute_force() {
        let p = build_problem(&[c(2.0, 0.0), c(1.0, 0.0)], 1.0, 1.0).unwrap();
        let sel = omp_select(&p, 1).unwrap();
        assert_eq!(sel.support, vec![0]);
        let exh = exhaustive_select(&p, 1).unwrap();
        assert_eq!(exh.support, vec![0]);
    }

    #[test]
    fn omp_full_support_is_mmse() {
        let p = build_problem(&[c(2.0, 0.0), c(1.0, 0.0)], 1.0, 1.0).unwrap();
        let sel = omp_select(&p, 2).unwrap();
        assert!((sel.weights[0] - c(1.0 / 3.0, 0.0)).norm() < 1e-12);
        assert!((sel.weights[1] - c(1.0 / 6.0, 0.0)).norm() < 1e-12);
        assert!(whitened_residual(&p, &sel.weights) <= 1e-10);
    }

    #[test]
    fn omp_zero_target_flagged() {
        let p = build_problem(&[c(1.0, 1.0), c(2.0, 0.0)], 0.0, 1.0).unwrap();
        let sel = omp_select(&p, 1).unwrap();
        assert!(sel.zero_target);
        assert!(sel.support.is_empty());
        assert!(sel.weights.iter().all(|w| *w == Complex64::ZERO));
    }

    #[test]
    fn omp_rejects_bad_sparsity() {
        let p = build_problem(&[c(1.0, 0.0), c(1.0, 0.0)], 1.0, 1.0).unwrap();
        assert!(matches!(omp_select(&p, 0), Err(Error::InvalidSparsity { .. })));
        assert!(matches!(omp_select(&p, 3), Err(Error::InvalidSparsity { .. })));
    }

    #[test]
    fn exhaustive_full_support_matches_omp() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xc0de_0002);
        let ch = random_vec(&mut rng, 5);
        let p = build_problem(&ch, 1.5, 0.7).unwrap();
        let omp = omp_select(&p, 5).unwrap();
        let exh = exhaustive_select(&p, 5).unwrap();
        for (a, b) in omp.weights.iter().zip(&exh.weights) {
            assert!((a - b).norm() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn exhaustive_never_worse_than_omp() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xc0de_0003);
        for _ in 0..20 {
            let ch = random_vec(&mut rng, 8);
            let p = build_problem(&ch, 1.0, 0.3).unwrap();
            for k in [1usize, 2, 3] {
                let omp = omp_select(&p, k).unwrap();
                let exh = exhaustive_select(&p, k).unwrap();
                let r_omp = whitened_residual(&p, &omp.weights);
                let r_exh = whitened_residual(&p, &exh.weights);
                assert!(
                    r_omp >= r_exh - 1e-12,
                    "greedy beat the global optimum: {r_omp} < {r_exh}"
                );
            }
        }
    }

    #[test]
    fn exhaustive_guards_size() {
        let ch = vec![c(1.0, 0.0); 17];
        let p = build_problem(&ch, 1.0, 1.0).unwrap();
        assert!(matches!(exhaustive_select(&p, 2), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn omp_residual_monotone_and_support_optimal() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xc0de_0004);
        for _ in 0..30 {
            let m = 2 + rng.random_range(0..10usize);
            let ch = random_vec(&mut rng, m);
            let p = build_problem(&ch, 1.0, 0.5).unwrap();
            let mut prev = f64::INFINITY;
            for k in 1..=m {
                let sel = omp_select(&p, k).unwrap();
                assert_eq!(sel.support.len(), k);
                let resid = whitened_residual(&p, &sel.weights);
                assert!(resid <= prev + 1e-12, "residual grew at k={k}");
                prev = resid;

                // Normal-equation check on the support.
                for &s in &sel.support {
                    let mut v = p.h_tilde()[s];
                    for &t in &sel.support {
                        v -= p.r_mat().get(s, t) * sel.weights[t];
                    }
                    assert!(v.norm() <= 1e-8 * norm2(p.h_tilde()).max(1.0));
                }
            }
        }
    }

    #[test]
    fn omp_full_sparsity_equals_mmse_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xc0de_0005);
        for _ in 0..20 {
            let m = 1 + rng.random_range(0..10usize);
            let ch = random_vec(&mut rng, m);
            let p = build_problem(&ch, 1.0, 0.8).unwrap();
            let sel = omp_select(&p, m).unwrap();
            let y = forward_solve(p.l_mat(), p.h_tilde()).unwrap();
            let mmse = conj_transpose_solve(p.l_mat(), &y).unwrap();
            let diff: f64 = sel
                .weights
                .iter()
                .zip(&mmse)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum();
            assert!(diff.sqrt() <= 1e-8 * norm2(&mmse).max(1e-30));
        }
    }

    #[test]
    fn omp_scale_invariant_in_snr_preserving_rescale() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xc0de_0006);
        for _ in 0..20 {
            let m = 3 + rng.random_range(0..8usize);
            let ch = random_vec(&mut rng, m);
            let k = 1 + rng.random_range(0..m);
            let base = build_problem(&ch, 1.3, 0.4).unwrap();
            let scaled = build_problem(&ch, 1.3 * 7.5, 0.4 * 7.5).unwrap();
            let a = omp_select(&base, k).unwrap();
            let b = omp_select(&scaled, k).unwrap();
            assert_eq!(a.support, b.support);
            for (x, y) in a.weights.iter().zip(&b.weights) {
                assert!((x - y).norm() <= 1e-10 * x.norm().max(1.0));
            }
        }
    }

    #[test]
    fn mse_direct_examples() {
        let zero = vec![Complex64::ZERO; 2];
        let ch = [c(2.0, 0.0), c(1.0, 0.0)];
        assert!((mse_direct(&zero, &ch, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);

        let mmse = [c(1.0 / 3.0, 0.0), c(1.0 / 6.0, 0.0)];
        let got = mse_direct(&mmse, &ch, 1.0, 1.0).unwrap();
        assert!((got - 1.0 / 6.0).abs() < 1e-12, "{got}");

        let hs = [c(0.3, -0.7), c(1.2, 0.1)];
        let want = 2.5 * norm2_sqr(&hs);
        assert!((mse_direct(&hs, &ch, 0.0, 2.5).unwrap() - want).abs() < 1e-12);

        assert!(matches!(
            mse_direct(&hs, &[c(1.0, 0.0)], 1.0, 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn mse_factored_examples() {
        let ch = [c(2.0, 0.0), c(1.0, 0.0)];
        let p = build_problem(&ch, 1.0, 1.0).unwrap();

        let zero = vec![Complex64::ZERO; 2];
        assert!((mse_factored(&zero, &p).unwrap() - 1.0).abs() < 1e-12);

        let mmse = [c(1.0 / 3.0, 0.0), c(1.0 / 6.0, 0.0)];
        assert!((mse_factored(&mmse, &p).unwrap() - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn mse_routes_agree_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xc0de_0007);
        for _ in 0..200 {
            let m = 1 + rng.random_range(0..16usize);
            let ch = random_vec(&mut rng, m);
            let hs = random_vec(&mut rng, m);
            let sx: f64 = rng.random_range(0.1..4.0);
            let sv: f64 = rng.random_range(0.1..4.0);
            let p = build_problem(&ch, sx, sv).unwrap();
            let direct = mse_direct(&hs, &ch, sx, sv).unwrap();
            let factored = mse_factored(&hs, &p).unwrap();
            let scale = direct.abs().max(factored.abs()).max(1e-30);
            assert!(
                (direct - factored).abs() <= 1e-10 * scale,
                "direct {direct} vs factored {factored}"
            );
        }
    }

    #[test]
    fn positive_definiteness_across_random_models() {
        use crate::channel::{build_correlation, sample_realization, RngStream};
        let mut rng = ChaCha8Rng::seed_from_u64(0xc0de_0008);
        for trial in 0..200 {
            let m = 2 + rng.random_range(0..31usize);
            let phi: f64 = rng.random_range(0.0..0.99);
            let tau: f64 = rng.random_range(0.0..=1.0);
            let sv: f64 = rng.random_range(1e-4..10.0);
            let model = build_correlation(m, phi).unwrap();
            let real =
                sample_realization(&model, tau, &mut RngStream::new(0xa11ce, 0, trial).rng())
                    .unwrap();
            assert!(build_problem(&real.h_est, 1.0, sv).is_ok(), "trial {trial}");
        }
    }
}
