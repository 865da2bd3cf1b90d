//! One-sided (Hestenes) Jacobi SVD.
//!
//! The taller orientation is orthogonalized column-wise; a wide input is
//! handled through its adjoint. Output is made deterministic by sorting the
//! singular values in descending order and fixing the phase of every left
//! singular vector (first entry of modulus above [`PHASE_FLOOR`] real and
//! nonnegative), with the compensating phase applied to the matching right
//! singular vector.

use super::dense::{
    complete_basis, dot, jacobi_parameters, norm_sqr, normalize_phases, rotate_pair, ComplexMatrix, C64,
};
use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 30;

/// Entries at or below this modulus are skipped when fixing vector phases.
pub const PHASE_FLOOR: f64 = 1e-8;

/// `A = U·Σ·V†` with `Σ` the `n×m` diagonal extension of `sigma`.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
    /// Number of singular values above the rank cutoff.
    pub rank: usize,
    pub rank_tol: f64,
}

impl SvdResult {
    pub fn sigma_matrix(&self) -> ComplexMatrix {
        let diag: Vec<C64> = self.sigma.iter().map(|&s| C64::new(s, 0.0)).collect();
        ComplexMatrix::from_diagonal(self.u.rows(), self.v.rows(), &diag)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.u.mul_unchecked(&self.sigma_matrix()).mul_unchecked(&self.v.adjoint())
    }

    /// `V·Σ⁺·U†`, inverting the singular values above the cutoff.
    pub fn pseudoinverse(&self) -> ComplexMatrix {
        let (n, m) = (self.u.rows(), self.v.rows());
        ComplexMatrix::from_fn(m, n, |i, j| {
            (0..self.rank).map(|k| self.v.get(i, k) * self.u.get(j, k).conj() / self.sigma[k]).sum()
        })
    }
}

/// `max(rows, cols) · ε · σ_max`.
pub fn default_rank_tol(rows: usize, cols: usize, sigma_max: f64) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON * sigma_max
}

pub fn svd(a: &ComplexMatrix, rank_tol: Option<f64>) -> Result<SvdResult> {
    let (n, m) = a.shape();
    let (u_cols, sigma, v_cols) = if n >= m {
        tall_svd(a)?
    } else {
        let (u, s, v) = tall_svd(&a.adjoint())?;
        (v, s, u)
    };
    let sigma_max = sigma.first().copied().unwrap_or(0.0);
    let tol = rank_tol.unwrap_or_else(|| default_rank_tol(n, m, sigma_max));
    let rank = sigma.iter().take_while(|&&s| s > tol).count();
    Ok(SvdResult {
        u: ComplexMatrix::from_columns(n, &u_cols),
        sigma,
        v: ComplexMatrix::from_columns(m, &v_cols),
        rank,
        rank_tol: tol,
    })
}

/// SVD of an `n×m` matrix with `n >= m`, returned as column lists
/// (`n` left vectors, `m` singular values, `m` right vectors).
#[allow(clippy::type_complexity)]
fn tall_svd(a: &ComplexMatrix) -> Result<(Vec<Vec<C64>>, Vec<f64>, Vec<Vec<C64>>)> {
    let (n, m) = a.shape();
    debug_assert!(n >= m);
    let mut work: Vec<Vec<C64>> = (0..m).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<C64>> =
        (0..m).map(|j| (0..m).map(|i| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect()).collect();
    orthogonalize(&mut work, &mut v)?;

    let norms: Vec<f64> = work.iter().map(|c| norm_sqr(c).sqrt()).collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let mut v: Vec<Vec<C64>> = order.iter().map(|&j| v[j].clone()).collect();

    // Columns at noise level are rebuilt by basis completion instead of
    // being normalized.
    let floor = default_rank_tol(n, m, sigma.first().copied().unwrap_or(0.0));
    let mut u: Vec<Vec<C64>> = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        if sigma[k] > floor && sigma[k] > 0.0 {
            u.push(work[j].iter().map(|z| z / sigma[k]).collect());
        } else {
            break;
        }
    }
    complete_basis(n, &mut u);

    let factors = normalize_phases(&mut u, PHASE_FLOOR);
    for (col, f) in v.iter_mut().zip(&factors) {
        for x in col.iter_mut() {
            *x *= f;
        }
    }
    Ok((u, sigma, v))
}

/// Rotates column pairs of `work` until they are mutually orthogonal,
/// accumulating the same rotations into `v`.
fn orthogonalize(work: &mut [Vec<C64>], v: &mut [Vec<C64>]) -> Result<()> {
    let m = work.len();
    let rows = work.first().map_or(0, Vec::len);
    let tol = f64::EPSILON * (rows.max(1) as f64);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..m {
            for q in p + 1..m {
                let alpha = norm_sqr(&work[p]);
                let beta = norm_sqr(&work[q]);
                let gamma = dot(&work[p], &work[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let w = (gamma / g).conj();
                let (c, s) = jacobi_parameters(alpha, beta, g);
                let (lo, hi) = work.split_at_mut(q);
                rotate_pair(&mut lo[p], &mut hi[0], c, s, w);
                let (lo, hi) = v.split_at_mut(q);
                rotate_pair(&mut lo[p], &mut hi[0], c, s, w);
            }
        }
        if !rotated {
            return Ok(());
        }
    }
    Err(Error::NoConvergence { routine: "one-sided Jacobi SVD", sweeps: MAX_SWEEPS })
}
