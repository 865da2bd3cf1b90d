//! Cyclic two-sided Jacobi eigendecomposition for Hermitian matrices.

use super::dense::{jacobi_parameters, normalize_phases, rotate_pair, ComplexMatrix, C64};
use super::svd::{MAX_SWEEPS, PHASE_FLOOR};
use crate::error::{Error, Result};

/// `P = Q·Λ·Q†` with eigenvalues sorted descending.
#[derive(Debug, Clone)]
pub struct HermEig {
    pub q: ComplexMatrix,
    pub lambda: Vec<f64>,
}

impl HermEig {
    /// `Q·φ(Λ)·Q†` for a real spectral function `φ`.
    pub fn apply(&self, phi: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.lambda.len();
        let vals: Vec<f64> = self.lambda.iter().map(|&l| phi(l)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).filter(|&k| vals[k] != 0.0).map(|k| self.q.get(i, k) * self.q.get(j, k).conj() * vals[k]).sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply(|l| l)
    }
}

/// Eigendecomposition of the Hermitian part `(P + P†)/2` of a square matrix.
/// Callers are responsible for checking that `P` is Hermitian to begin with.
pub fn hermitian_eig(p: &ComplexMatrix) -> Result<HermEig> {
    if !p.is_square() {
        return Err(Error::NotEndomorphism { source_obj: p.rows().to_string(), target_obj: p.cols().to_string() });
    }
    let n = p.rows();
    // Column-major working copy so rotations act on contiguous slices.
    let mut cols: Vec<Vec<C64>> =
        (0..n).map(|j| (0..n).map(|i| (p.get(i, j) + p.get(j, i).conj()) * 0.5).collect()).collect();
    let mut q: Vec<Vec<C64>> =
        (0..n).map(|j| (0..n).map(|i| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect()).collect();

    let total: f64 = cols.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let target = f64::EPSILON * total;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|j| (0..n).filter(move |&i| i != j).map(move |i| (i, j)))
            .map(|(i, j)| cols[j][i].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= target {
            converged = true;
            break;
        }
        for a in 0..n {
            for b in a + 1..n {
                let coupling = cols[b][a];
                let g = coupling.norm();
                if g == 0.0 {
                    continue;
                }
                let w = (coupling / g).conj();
                let (c, s) = jacobi_parameters(cols[a][a].re, cols[b][b].re, g);
                // A ← A·W on columns a, b.
                let (lo, hi) = cols.split_at_mut(b);
                rotate_pair(&mut lo[a], &mut hi[0], c, s, w);
                // A ← W†·A on rows a, b.
                let wc = w.conj();
                for col in cols.iter_mut() {
                    let (x, y) = (col[a], col[b]);
                    col[a] = x * c - wc * y * s;
                    col[b] = x * s + wc * y * c;
                }
                cols[b][a] = C64::new(0.0, 0.0);
                cols[a][b] = C64::new(0.0, 0.0);
                cols[a][a] = C64::new(cols[a][a].re, 0.0);
                cols[b][b] = C64::new(cols[b][b].re, 0.0);
                let (lo, hi) = q.split_at_mut(b);
                rotate_pair(&mut lo[a], &mut hi[0], c, s, w);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { routine: "Hermitian Jacobi eigensolver", sweeps: MAX_SWEEPS });
    }

    let diag: Vec<f64> = (0..n).map(|i| cols[i][i].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let lambda = order.iter().map(|&i| diag[i]).collect();
    let mut vecs: Vec<Vec<C64>> = order.iter().map(|&i| q[i].clone()).collect();
    normalize_phases(&mut vecs, PHASE_FLOOR);
    Ok(HermEig { q: ComplexMatrix::from_columns(n, &vecs), lambda })
}
