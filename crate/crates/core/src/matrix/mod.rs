//! The instance of complex matrices with conjugate-transpose dagger.
//!
//! Objects are dimensions, an `n×m` matrix is a map `n -> m`, and
//! composition is the matrix product in diagrammatic order. Under that
//! convention:
//!
//! | predicate        | matrix condition               |
//! |------------------|--------------------------------|
//! | isometry         | `s·s† = I` (orthonormal rows)  |
//! | coisometry       | `r†·r = I` (orthonormal cols)  |
//! | unitary          | both                           |
//! | partial isometry | `q·q†·q = q`                   |
//! | †-idempotent     | orthogonal projector           |

mod dense;
mod eigh;
pub mod json;
mod svd;

pub use dense::{ComplexMatrix, C64};
pub use eigh::{hermitian_eig, HermEig};
pub use svd::{default_rank_tol, svd, SvdResult, MAX_SWEEPS, PHASE_FLOOR};

use serde::Serialize;

use crate::category::{DaggerCategory, SpecialMaps, SquareRoot, Summand, Tolerance};
use crate::error::{Error, Result};

/// Default distance of an idempotent's eigenvalues from `{0, 1}`.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;

/// Ranks entering the involutive-field criterion for the transpose dagger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TransposeRanks {
    pub rank: usize,
    pub rank_a_at: usize,
    pub rank_at_a: usize,
}

impl TransposeRanks {
    pub fn has_mp(&self) -> bool {
        self.rank == self.rank_a_at && self.rank == self.rank_at_a
    }
}

/// `MAT(ℂ)` with a fixed tolerance policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat {
    tol: Tolerance,
    cluster_tol: f64,
}

impl Default for Mat {
    fn default() -> Self {
        Self { tol: Tolerance::numeric(), cluster_tol: DEFAULT_CLUSTER_TOL }
    }
}

impl Mat {
    pub fn new(tol: Tolerance) -> Self {
        Self { tol, ..Self::default() }
    }

    pub fn with_cluster_tol(self, cluster_tol: f64) -> Result<Self> {
        if !(cluster_tol.is_finite() && cluster_tol >= 0.0) {
            return Err(Error::Invalid(format!("cluster tolerance {cluster_tol}")));
        }
        Ok(Self { cluster_tol, ..self })
    }

    pub fn svd(&self, a: &ComplexMatrix) -> Result<SvdResult> {
        svd(a, self.tol.rank_tol())
    }

    pub fn numeric_rank(&self, a: &ComplexMatrix) -> Result<usize> {
        Ok(self.svd(a)?.rank)
    }

    /// Pseudoinverse through the SVD.
    pub fn pinv(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        Ok(self.svd(a)?.pseudoinverse())
    }

    /// Ranks of `A`, `A·Aᵀ` and `Aᵀ·A` with the plain (unconjugated) transpose.
    pub fn transpose_ranks(&self, a: &ComplexMatrix) -> Result<TransposeRanks> {
        let at = a.transpose();
        Ok(TransposeRanks {
            rank: self.numeric_rank(a)?,
            rank_a_at: self.numeric_rank(&a.mul_unchecked(&at))?,
            rank_at_a: self.numeric_rank(&at.mul_unchecked(a))?,
        })
    }

    /// Whether `A` has an M-P inverse for the transpose dagger, decided by
    /// `rank(A·Aᵀ) = rank(A) = rank(Aᵀ·A)`.
    pub fn has_mp_wrt_transpose(&self, a: &ComplexMatrix) -> Result<bool> {
        Ok(self.transpose_ranks(a)?.has_mp())
    }

    fn require_hermitian(&self, p: &ComplexMatrix, slack: f64) -> Result<()> {
        self.require_endomorphism(p)?;
        let check = self.self_adjoint_check(p)?;
        let limit = slack * p.frobenius_norm().max(1.0).powi(2);
        if check.residual > limit {
            return Err(Error::precondition("matrix is not Hermitian", check.residual));
        }
        Ok(())
    }

    /// Eigenvalue cutoff for a Hermitian matrix with the given spectrum.
    fn spectral_cutoff(&self, lambda: &[f64]) -> f64 {
        self.tol.rank_tol().unwrap_or_else(|| {
            let top = lambda.iter().map(|l| l.abs()).fold(0.0, f64::max);
            default_rank_tol(lambda.len(), lambda.len(), top)
        })
    }

    pub fn hermitian_eig(&self, p: &ComplexMatrix) -> Result<HermEig> {
        self.require_hermitian(p, self.tol.eq_tol())?;
        hermitian_eig(p)
    }

    /// Hermitian with every eigenvalue at least `-rank_tol`.
    pub fn is_positive(&self, p: &ComplexMatrix) -> Result<bool> {
        self.require_endomorphism(p)?;
        if !self.self_adjoint_check(p)?.holds {
            return Ok(false);
        }
        let eig = hermitian_eig(p)?;
        let cutoff = self.spectral_cutoff(&eig.lambda);
        Ok(eig.lambda.iter().all(|&l| l >= -cutoff))
    }

    /// Pseudoinverse of a Hermitian matrix through its eigendecomposition.
    pub fn hermitian_pinv(&self, p: &ComplexMatrix) -> Result<ComplexMatrix> {
        let eig = self.hermitian_eig(p)?;
        let cutoff = self.spectral_cutoff(&eig.lambda);
        Ok(eig.apply(|l| if l.abs() > cutoff { 1.0 / l } else { 0.0 }))
    }

    /// Positive square root and its pseudoinverse from one eigendecomposition.
    /// Eigenvalues at or below the cutoff are truncated to zero.
    pub fn sqrt_with_mp(&self, p: &ComplexMatrix) -> Result<SquareRoot<ComplexMatrix>> {
        if !self.is_positive(p)? {
            return Err(Error::precondition("matrix is not positive", 0.0));
        }
        let eig = hermitian_eig(p)?;
        let cutoff = self.spectral_cutoff(&eig.lambda);
        let root = eig.apply(|l| if l > cutoff { l.sqrt() } else { 0.0 });
        let root_mp = eig.apply(|l| if l > cutoff { 1.0 / l.sqrt() } else { 0.0 });
        Ok(SquareRoot { root, root_mp })
    }

    pub fn hermitian_sqrt(&self, p: &ComplexMatrix) -> Result<ComplexMatrix> {
        Ok(self.sqrt_with_mp(p)?.root)
    }

    /// Coisometry `R` (`n×k`, orthonormal columns spanning the range of `E`)
    /// with `R·R† = E` and `R†·R = I_k`.
    pub fn split_dagger_idempotent(&self, e: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.require_hermitian(e, self.cluster_tol).map_err(|err| match err {
            Error::Precondition { residual, .. } => {
                Error::precondition("not a dagger idempotent: matrix is not Hermitian", residual)
            }
            other => other,
        })?;
        let eig = hermitian_eig(e)?;
        let stray = eig.lambda.iter().map(|&l| l.abs().min((l - 1.0).abs())).fold(0.0, f64::max);
        if stray > self.cluster_tol {
            return Err(Error::precondition(
                "not a dagger idempotent: eigenvalues are not clustered at 0 and 1",
                stray,
            ));
        }
        let k = eig.lambda.iter().filter(|&&l| (l - 1.0).abs() <= self.cluster_tol).count();
        let n = e.rows();
        Ok(ComplexMatrix::from_fn(n, k, |i, j| eig.q.get(i, j)))
    }

    /// Isometry `K` (`z×n`, `z = n − rank`) with `K·A = 0`: the left null
    /// space of `A` as orthonormal rows.
    pub fn dagger_kernel(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        let s = self.svd(a)?;
        let n = a.rows();
        let k = s.rank;
        Ok(ComplexMatrix::from_fn(n - k, n, |i, j| s.u.get(j, k + i).conj()))
    }

    /// Mediating map `Z = G·K†` of a map `G` with `G·A = 0` through the kernel `K`.
    /// Fails when `G·A ≠ 0` or when `Z·K` does not give back `G`.
    pub fn kernel_mediator(&self, a: &ComplexMatrix, k: &ComplexMatrix, g: &ComplexMatrix) -> Result<ComplexMatrix> {
        let ga = g.matmul(a)?;
        let kills = self.close(&ga, &ComplexMatrix::zeros(ga.rows(), ga.cols()), self.scale_of(&[g, a]))?;
        if !kills.holds {
            return Err(Error::precondition("G·A is not zero", kills.residual));
        }
        let z = g.matmul(&k.adjoint())?;
        let back = self.close(&z.matmul(k)?, g, self.scale_of(&[g, k, k]))?;
        if !back.holds {
            return Err(Error::Inconsistent(format!("kernel is not universal for G (residual {:e})", back.residual)));
        }
        Ok(z)
    }

    /// Block-diagonal sum `A ⊕ B`.
    pub fn direct_sum(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::block_diagonal(a, b)
    }

    /// Injection `X -> X ⊕ Z` or `Z -> X ⊕ Z` as a coordinate matrix.
    pub fn injection_matrix(x: usize, z: usize, which: Summand) -> ComplexMatrix {
        Self::projection_matrix(x, z, which).adjoint()
    }

    /// Projection `X ⊕ Z -> X` or `X ⊕ Z -> Z` as a coordinate matrix.
    pub fn projection_matrix(x: usize, z: usize, which: Summand) -> ComplexMatrix {
        let (width, offset) = match which {
            Summand::First => (x, 0),
            Summand::Second => (z, x),
        };
        ComplexMatrix::from_fn(x + z, width, |i, j| C64::new(if i == j + offset { 1.0 } else { 0.0 }, 0.0))
    }

    /// Two-sided inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.require_endomorphism(a)?;
        let mut m: Vec<Vec<C64>> = (0..n)
            .map(|i| {
                let mut row: Vec<C64> = (0..n).map(|j| a.get(i, j)).collect();
                row.extend((0..n).map(|j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)));
                row
            })
            .collect();
        let sigma_scale = a.frobenius_norm();
        let floor = self.tol.rank_tol().unwrap_or_else(|| default_rank_tol(n, n, sigma_scale));
        for col in 0..n {
            let pivot = (col..n).max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm())).expect("col < n");
            if m[pivot][col].norm() <= floor {
                return Err(Error::precondition("matrix is singular", m[pivot][col].norm()));
            }
            m.swap(col, pivot);
            let p = m[col][col];
            for x in m[col].iter_mut() {
                *x /= p;
            }
            let pivot_row = m[col].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i == col {
                    continue;
                }
                let factor = row[col];
                if factor == C64::new(0.0, 0.0) {
                    continue;
                }
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= factor * y;
                }
            }
        }
        Ok(ComplexMatrix::from_fn(n, n, |i, j| m[i][n + j]))
    }
}

impl DaggerCategory for Mat {
    type Object = usize;
    type Morphism = ComplexMatrix;

    fn source(&self, f: &ComplexMatrix) -> usize {
        f.rows()
    }

    fn target(&self, f: &ComplexMatrix) -> usize {
        f.cols()
    }

    fn same_object(&self, a: &usize, b: &usize) -> bool {
        a == b
    }

    fn identity(&self, n: &usize) -> ComplexMatrix {
        ComplexMatrix::identity(*n)
    }

    fn compose(&self, f: &ComplexMatrix, g: &ComplexMatrix) -> Result<ComplexMatrix> {
        f.matmul(g)
    }

    fn dagger(&self, f: &ComplexMatrix) -> ComplexMatrix {
        f.adjoint()
    }

    fn deviation(&self, f: &ComplexMatrix, g: &ComplexMatrix) -> Result<f64> {
        f.distance(g)
    }

    fn magnitude(&self, f: &ComplexMatrix) -> f64 {
        f.frobenius_norm()
    }

    fn tolerance(&self) -> Tolerance {
        self.tol
    }

    fn positivity_witness(&self, p: &ComplexMatrix) -> Result<bool> {
        self.is_positive(p)
    }

    fn split_idempotent(&self, e: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.split_dagger_idempotent(e)
    }

    fn dagger_kernel(&self, f: &ComplexMatrix) -> Result<ComplexMatrix> {
        Mat::dagger_kernel(self, f)
    }

    fn square_root(&self, p: &ComplexMatrix) -> Result<SquareRoot<ComplexMatrix>> {
        self.sqrt_with_mp(p)
    }

    fn inverse(&self, f: &ComplexMatrix) -> Result<ComplexMatrix> {
        Mat::inverse(self, f)
    }

    fn mp_inverse(&self, f: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.pinv(f)
    }

    fn direct_sum(&self, f: &ComplexMatrix, g: &ComplexMatrix) -> Result<ComplexMatrix> {
        Ok(Mat::direct_sum(f, g))
    }

    fn injection(&self, x: &usize, z: &usize, which: Summand) -> Result<ComplexMatrix> {
        Ok(Self::injection_matrix(*x, *z, which))
    }

    fn projection(&self, x: &usize, z: &usize, which: Summand) -> Result<ComplexMatrix> {
        Ok(Self::projection_matrix(*x, *z, which))
    }

    fn zero_map(&self, a: &usize, b: &usize) -> Result<ComplexMatrix> {
        Ok(ComplexMatrix::zeros(*a, *b))
    }

    fn add(&self, f: &ComplexMatrix, g: &ComplexMatrix) -> Result<ComplexMatrix> {
        f.add(g)
    }
}
