//! The dagger-category contract shared by every instance, together with the
//! special-map predicates and the Moore-Penrose axiom check.
//!
//! Composition is diagrammatic throughout: `compose(f, g)` is "`f` then `g`".
//! For matrices this is the ordinary product `f·g` of an `n×m` and an `m×p`
//! matrix, so an isometry `s` satisfies `s·s† = 1` (orthonormal rows) and a
//! coisometry `r` satisfies `r†·r = 1` (orthonormal columns).

use std::fmt;

use serde::Serialize;

use crate::error::{Capability, Error, Result};

/// Slack used when comparing morphisms and when truncating small singular
/// values. Exact instances use zero for both.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerance {
    rank_tol: Option<f64>,
    eq_tol: f64,
}

impl Tolerance {
    /// `100 ε` for double precision.
    pub const DEFAULT_EQ_TOL: f64 = 100.0 * f64::EPSILON;

    /// `rank_tol = None` selects the size- and norm-relative default cutoff
    /// of the instance.
    pub fn new(rank_tol: Option<f64>, eq_tol: f64) -> Result<Self> {
        let valid = |x: f64| x.is_finite() && x >= 0.0;
        if !valid(eq_tol) || rank_tol.is_some_and(|r| !valid(r)) {
            return Err(Error::Invalid(format!(
                "tolerances must be finite and nonnegative (rank_tol {rank_tol:?}, eq_tol {eq_tol})"
            )));
        }
        Ok(Self { rank_tol, eq_tol })
    }

    pub const fn exact() -> Self {
        Self { rank_tol: Some(0.0), eq_tol: 0.0 }
    }

    pub const fn numeric() -> Self {
        Self { rank_tol: None, eq_tol: Self::DEFAULT_EQ_TOL }
    }

    pub fn rank_tol(&self) -> Option<f64> {
        self.rank_tol
    }

    pub fn eq_tol(&self) -> f64 {
        self.eq_tol
    }

    pub fn with_eq_tol(self, eq_tol: f64) -> Result<Self> {
        Self::new(self.rank_tol, eq_tol)
    }

    pub fn with_rank_tol(self, rank_tol: Option<f64>) -> Result<Self> {
        Self::new(rank_tol, self.eq_tol)
    }

    /// Largest deviation accepted for operands of combined magnitude `scale`.
    pub fn threshold(&self, scale: f64) -> f64 {
        self.eq_tol * scale.max(1.0)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::numeric()
    }
}

/// Which summand of a binary biproduct `X ⊕ Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Summand {
    First,
    Second,
}

/// An M-P square root together with its own M-P inverse.
#[derive(Debug, Clone)]
pub struct SquareRoot<M> {
    pub root: M,
    pub root_mp: M,
}

/// A dagger category given by an instance value.
///
/// The required methods are the bare structure. The remaining hooks are
/// optional capabilities; the defaults report [`Error::Unsupported`].
pub trait DaggerCategory {
    type Object: Clone + fmt::Debug;
    type Morphism: Clone + fmt::Debug;

    fn source(&self, f: &Self::Morphism) -> Self::Object;
    fn target(&self, f: &Self::Morphism) -> Self::Object;
    fn same_object(&self, a: &Self::Object, b: &Self::Object) -> bool;
    fn identity(&self, obj: &Self::Object) -> Self::Morphism;

    /// Diagrammatic composite `f` then `g`; fails unless `target(f)` is `source(g)`.
    fn compose(&self, f: &Self::Morphism, g: &Self::Morphism) -> Result<Self::Morphism>;

    fn dagger(&self, f: &Self::Morphism) -> Self::Morphism;

    /// Instance-defined distance between parallel maps; zero iff they are equal.
    fn deviation(&self, f: &Self::Morphism, g: &Self::Morphism) -> Result<f64>;

    /// Size of a map used to scale equality checks.
    fn magnitude(&self, f: &Self::Morphism) -> f64;

    fn tolerance(&self) -> Tolerance;

    fn positivity_witness(&self, _p: &Self::Morphism) -> Result<bool> {
        Err(Error::Unsupported(Capability::Positivity))
    }

    /// Coisometry `r` with `r·r† = e` and `r†·r = 1`.
    fn split_idempotent(&self, _e: &Self::Morphism) -> Result<Self::Morphism> {
        Err(Error::Unsupported(Capability::IdempotentSplitting))
    }

    /// Isometry `k: ker(f) -> A` with `k·f = 0`.
    fn dagger_kernel(&self, _f: &Self::Morphism) -> Result<Self::Morphism> {
        Err(Error::Unsupported(Capability::DaggerKernels))
    }

    fn square_root(&self, _p: &Self::Morphism) -> Result<SquareRoot<Self::Morphism>> {
        Err(Error::Unsupported(Capability::SquareRoots))
    }

    fn inverse(&self, _f: &Self::Morphism) -> Result<Self::Morphism> {
        Err(Error::Unsupported(Capability::Inverses))
    }

    fn mp_inverse(&self, _f: &Self::Morphism) -> Result<Self::Morphism> {
        Err(Error::Unsupported(Capability::MoorePenrose))
    }

    fn direct_sum(&self, _f: &Self::Morphism, _g: &Self::Morphism) -> Result<Self::Morphism> {
        Err(Error::Unsupported(Capability::Biproducts))
    }

    /// Injection `X -> X ⊕ Z` (or `Z -> X ⊕ Z`).
    fn injection(&self, _x: &Self::Object, _z: &Self::Object, _which: Summand) -> Result<Self::Morphism> {
        Err(Error::Unsupported(Capability::Biproducts))
    }

    /// Projection `X ⊕ Z -> X` (or `-> Z`).
    fn projection(&self, _x: &Self::Object, _z: &Self::Object, _which: Summand) -> Result<Self::Morphism> {
        Err(Error::Unsupported(Capability::Biproducts))
    }

    fn zero_map(&self, _a: &Self::Object, _b: &Self::Object) -> Result<Self::Morphism> {
        Err(Error::Unsupported(Capability::Biproducts))
    }

    fn add(&self, _f: &Self::Morphism, _g: &Self::Morphism) -> Result<Self::Morphism> {
        Err(Error::Unsupported(Capability::Biproducts))
    }
}

/// Outcome of one scaled equality test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Check {
    pub holds: bool,
    pub residual: f64,
    pub scale: f64,
}

impl Check {
    pub(crate) fn exact(holds: bool) -> Self {
        Check { holds, residual: if holds { 0.0 } else { 1.0 }, scale: 1.0 }
    }

    /// Residual divided by `max(1, scale)`.
    pub fn relative(&self) -> f64 {
        self.residual / self.scale.max(1.0)
    }

    /// Conjunction: holds when both hold; keeps the worse relative residual.
    pub fn and(self, other: Check) -> Check {
        let worse = if other.relative() > self.relative() { other } else { self };
        Check { holds: self.holds && other.holds, ..worse }
    }
}

/// The four Moore-Penrose axioms checked for a candidate pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MpReport {
    pub mp1: bool,
    pub mp2: bool,
    pub mp3: bool,
    pub mp4: bool,
    /// Absolute deviations for `ff°f = f`, `f°ff° = f°`, `(ff°)† = ff°`, `(f°f)† = f°f`.
    pub residuals: [f64; 4],
    /// Operand-magnitude products the residuals are compared against.
    pub scales: [f64; 4],
}

impl MpReport {
    pub fn all_hold(&self) -> bool {
        self.mp1 && self.mp2 && self.mp3 && self.mp4
    }

    pub fn max_relative_residual(&self) -> f64 {
        self.residuals.iter().zip(self.scales).map(|(r, s)| r / s.max(1.0)).fold(0.0, f64::max)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Predicates and checks derived from the bare structure; available on every instance.
pub trait SpecialMaps: DaggerCategory {
    fn scale_of(&self, operands: &[&Self::Morphism]) -> f64 {
        operands.iter().map(|f| self.magnitude(f)).product()
    }

    /// Compares `lhs` with `rhs`, accepting a deviation of `eq_tol × max(1, scale)`.
    fn close(&self, lhs: &Self::Morphism, rhs: &Self::Morphism, scale: f64) -> Result<Check> {
        let residual = self.deviation(lhs, rhs)?;
        let holds = residual <= self.tolerance().threshold(scale);
        Ok(Check { holds, residual, scale })
    }

    fn equals(&self, f: &Self::Morphism, g: &Self::Morphism) -> Result<bool> {
        let scale = self.magnitude(f) * self.magnitude(g);
        Ok(self.close(f, g, scale)?.holds)
    }

    fn compose_all(&self, maps: &[&Self::Morphism]) -> Result<Self::Morphism> {
        let (first, rest) = maps.split_first().ok_or_else(|| Error::Invalid("empty composite".into()))?;
        rest.iter().try_fold((*first).clone(), |acc, g| self.compose(&acc, g))
    }

    fn require_endomorphism(&self, f: &Self::Morphism) -> Result<Self::Object> {
        let (a, b) = (self.source(f), self.target(f));
        if self.same_object(&a, &b) {
            Ok(a)
        } else {
            Err(Error::NotEndomorphism { source_obj: format!("{a:?}"), target_obj: format!("{b:?}") })
        }
    }

    fn require_dual(&self, f: &Self::Morphism, g: &Self::Morphism) -> Result<()> {
        if self.same_object(&self.source(g), &self.target(f)) && self.same_object(&self.target(g), &self.source(f)) {
            Ok(())
        } else {
            Err(Error::mismatch(format!(
                "expected a map {:?} -> {:?}, got {:?} -> {:?}",
                self.target(f),
                self.source(f),
                self.source(g),
                self.target(g)
            )))
        }
    }

    fn isometry_check(&self, f: &Self::Morphism) -> Result<Check> {
        let ffd = self.compose(f, &self.dagger(f))?;
        let m = self.magnitude(f);
        self.close(&ffd, &self.identity(&self.source(f)), m * m)
    }

    fn coisometry_check(&self, f: &Self::Morphism) -> Result<Check> {
        let fdf = self.compose(&self.dagger(f), f)?;
        let m = self.magnitude(f);
        self.close(&fdf, &self.identity(&self.target(f)), m * m)
    }

    fn partial_isometry_check(&self, f: &Self::Morphism) -> Result<Check> {
        let fd = self.dagger(f);
        let ffdf = self.compose_all(&[f, &fd, f])?;
        let m = self.magnitude(f);
        self.close(&ffdf, f, m * m * m)
    }

    fn self_adjoint_check(&self, f: &Self::Morphism) -> Result<Check> {
        self.require_endomorphism(f)?;
        let m = self.magnitude(f);
        self.close(&self.dagger(f), f, m * m)
    }

    fn dagger_idempotent_check(&self, e: &Self::Morphism) -> Result<Check> {
        let adjoint = self.self_adjoint_check(e)?;
        let ee = self.compose(e, e)?;
        let m = self.magnitude(e);
        Ok(adjoint.and(self.close(&ee, e, m * m)?))
    }

    fn is_isometry(&self, f: &Self::Morphism) -> Result<bool> {
        Ok(self.isometry_check(f)?.holds)
    }

    fn is_coisometry(&self, f: &Self::Morphism) -> Result<bool> {
        Ok(self.coisometry_check(f)?.holds)
    }

    fn is_unitary(&self, f: &Self::Morphism) -> Result<bool> {
        Ok(self.isometry_check(f)?.holds && self.coisometry_check(f)?.holds)
    }

    /// `f·f†·f = f`.
    fn is_partial_isometry(&self, f: &Self::Morphism) -> Result<bool> {
        Ok(self.partial_isometry_check(f)?.holds)
    }

    fn is_self_adjoint(&self, f: &Self::Morphism) -> Result<bool> {
        Ok(self.self_adjoint_check(f)?.holds)
    }

    fn is_dagger_idempotent(&self, e: &Self::Morphism) -> Result<bool> {
        Ok(self.dagger_idempotent_check(e)?.holds)
    }

    /// Defined existentially, so it defers to the instance's witness check.
    fn is_positive(&self, p: &Self::Morphism) -> Result<bool> {
        self.require_endomorphism(p)?;
        self.positivity_witness(p)
    }

    /// Checks MP.1–MP.4 for the candidate `g` against `f`.
    fn verify_mp(&self, f: &Self::Morphism, g: &Self::Morphism) -> Result<MpReport> {
        self.require_dual(f, g)?;
        let (nf, ng) = (self.magnitude(f), self.magnitude(g));
        let fg = self.compose(f, g)?;
        let gf = self.compose(g, f)?;
        let c1 = self.close(&self.compose(&fg, f)?, f, nf * nf * ng)?;
        let c2 = self.close(&self.compose(&gf, g)?, g, ng * ng * nf)?;
        let c3 = self.close(&self.dagger(&fg), &fg, nf * ng)?;
        let c4 = self.close(&self.dagger(&gf), &gf, nf * ng)?;
        Ok(MpReport {
            mp1: c1.holds,
            mp2: c2.holds,
            mp3: c3.holds,
            mp4: c4.holds,
            residuals: [c1.residual, c2.residual, c3.residual, c4.residual],
            scales: [c1.scale, c2.scale, c3.scale, c4.scale],
        })
    }
}

impl<C: DaggerCategory + ?Sized> SpecialMaps for C {}
