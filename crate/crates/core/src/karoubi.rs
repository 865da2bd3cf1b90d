//! The dagger Karoubi envelope `Split†(X)` of an instance.
//!
//! Objects are pairs `(A, e)` with `e` a †-idempotent on `A`; a map
//! `(A, e₁) -> (B, e₂)` is a base map `f` with `e₁·f·e₂ = f`. Composition
//! and dagger are inherited, and the identity on `(A, e)` is `e`. Objects
//! are compared by base object and idempotent, within the base tolerance.

use crate::category::{DaggerCategory, SpecialMaps, Tolerance};
use crate::error::{Error, Result};
use crate::mp::require_mp_pair;

#[derive(Debug, Clone, PartialEq)]
pub struct SplitObject<O, M> {
    pub base: O,
    pub e: M,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitMorphism<O, M> {
    pub dom: SplitObject<O, M>,
    pub cod: SplitObject<O, M>,
    pub f: M,
}

type Obj<C> = SplitObject<<C as DaggerCategory>::Object, <C as DaggerCategory>::Morphism>;
type Map<C> = SplitMorphism<<C as DaggerCategory>::Object, <C as DaggerCategory>::Morphism>;

/// `Split†` over a borrowed base instance.
#[derive(Debug)]
pub struct Karoubi<'a, C: ?Sized> {
    base: &'a C,
}

impl<C: ?Sized> Clone for Karoubi<'_, C> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<C: ?Sized> Copy for Karoubi<'_, C> {}

impl<'a, C: DaggerCategory + ?Sized> Karoubi<'a, C> {
    pub fn new(base: &'a C) -> Self {
        Karoubi { base }
    }

    pub fn base(&self) -> &'a C {
        self.base
    }

    /// `(A, e)`, checking that `e` is a †-idempotent.
    pub fn object(&self, e: C::Morphism) -> Result<Obj<C>> {
        let check = self.base.dagger_idempotent_check(&e)?;
        if !check.holds {
            return Err(Error::precondition("object idempotent is not a dagger idempotent", check.residual));
        }
        Ok(SplitObject { base: self.base.source(&e), e })
    }

    /// `(A, 1_A)`.
    pub fn unit_object(&self, a: &C::Object) -> Obj<C> {
        SplitObject { base: a.clone(), e: self.base.identity(a) }
    }

    /// `f: dom -> cod`, checking the base types and `e₁·f·e₂ = f`.
    pub fn morphism(&self, dom: Obj<C>, cod: Obj<C>, f: C::Morphism) -> Result<Map<C>> {
        let b = self.base;
        if !b.same_object(&b.source(&f), &dom.base) || !b.same_object(&b.target(&f), &cod.base) {
            return Err(Error::mismatch(format!(
                "base map {:?} -> {:?} does not match objects over {:?} and {:?}",
                b.source(&f),
                b.target(&f),
                dom.base,
                cod.base
            )));
        }
        let sandwich = b.compose_all(&[&dom.e, &f, &cod.e])?;
        let check = b.close(&sandwich, &f, b.scale_of(&[&dom.e, &f, &cod.e]))?;
        if !check.holds {
            return Err(Error::precondition("e₁·f·e₂ differs from f", check.residual));
        }
        Ok(SplitMorphism { dom, cod, f })
    }

    /// The identity on `(A, e)`, which is `e` itself.
    pub fn split_identity(&self, obj: &Obj<C>) -> Map<C> {
        SplitMorphism { dom: obj.clone(), cod: obj.clone(), f: obj.e.clone() }
    }

    /// `f` as a map `(A, 1) -> (B, 1)`.
    pub fn embed(&self, f: &C::Morphism) -> Map<C> {
        let b = self.base;
        SplitMorphism { dom: self.unit_object(&b.source(f)), cod: self.unit_object(&b.target(f)), f: f.clone() }
    }
}

impl<C: DaggerCategory + ?Sized> DaggerCategory for Karoubi<'_, C> {
    type Object = Obj<C>;
    type Morphism = Map<C>;

    fn source(&self, f: &Map<C>) -> Obj<C> {
        f.dom.clone()
    }

    fn target(&self, f: &Map<C>) -> Obj<C> {
        f.cod.clone()
    }

    fn same_object(&self, a: &Obj<C>, b: &Obj<C>) -> bool {
        self.base.same_object(&a.base, &b.base) && self.base.equals(&a.e, &b.e).unwrap_or(false)
    }

    fn identity(&self, obj: &Obj<C>) -> Map<C> {
        self.split_identity(obj)
    }

    fn compose(&self, f: &Map<C>, g: &Map<C>) -> Result<Map<C>> {
        if !self.same_object(&f.cod, &g.dom) {
            return Err(Error::mismatch("codomain and domain idempotents differ"));
        }
        Ok(SplitMorphism { dom: f.dom.clone(), cod: g.cod.clone(), f: self.base.compose(&f.f, &g.f)? })
    }

    fn dagger(&self, f: &Map<C>) -> Map<C> {
        SplitMorphism { dom: f.cod.clone(), cod: f.dom.clone(), f: self.base.dagger(&f.f) }
    }

    fn deviation(&self, f: &Map<C>, g: &Map<C>) -> Result<f64> {
        if !self.same_object(&f.dom, &g.dom) || !self.same_object(&f.cod, &g.cod) {
            return Err(Error::mismatch("maps between different split objects"));
        }
        self.base.deviation(&f.f, &g.f)
    }

    fn magnitude(&self, f: &Map<C>) -> f64 {
        self.base.magnitude(&f.f)
    }

    fn tolerance(&self) -> Tolerance {
        self.base.tolerance()
    }

    /// A †-idempotent `E` on `(A, e)` splits as the coisometry `E: (A, e) -> (A, E)`.
    fn split_idempotent(&self, e: &Map<C>) -> Result<Map<C>> {
        let check = self.dagger_idempotent_check(e)?;
        if !check.holds {
            return Err(Error::precondition("not a dagger idempotent", check.residual));
        }
        let cod = SplitObject { base: e.dom.base.clone(), e: e.f.clone() };
        Ok(SplitMorphism { dom: e.dom.clone(), cod, f: e.f.clone() })
    }

    fn mp_inverse(&self, f: &Map<C>) -> Result<Map<C>> {
        let base_mp = self.base.mp_inverse(&f.f)?;
        mp_in_karoubi(self, f, base_mp)
    }
}

/// The base M-P inverse `f°` retyped as `(B, e₂) -> (A, e₁)`; checks
/// `e₂·f°·e₁ = f°` and the axioms in the envelope.
pub fn mp_in_karoubi<C: DaggerCategory + ?Sized>(
    k: &Karoubi<'_, C>,
    f: &Map<C>,
    base_mp: C::Morphism,
) -> Result<Map<C>> {
    require_mp_pair(k.base, &f.f, &base_mp)?;
    let g = k.morphism(f.cod.clone(), f.dom.clone(), base_mp).map_err(|e| match e {
        Error::Precondition { residual, .. } => {
            Error::Inconsistent(format!("M-P inverse does not restrict to the split objects ({residual:e})"))
        }
        other => other,
    })?;
    let report = k.verify_mp(f, &g)?;
    if !report.all_hold() {
        return Err(Error::Inconsistent(format!(
            "M-P axioms fail in the envelope (relative residual {:e})",
            report.max_relative_residual()
        )));
    }
    Ok(g)
}

/// A pair of mutually inverse maps in the envelope.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitIso<O, M> {
    pub forward: SplitMorphism<O, M>,
    pub backward: SplitMorphism<O, M>,
}

/// `f: (A, ff°) -> (B, f°f)` with inverse `f°: (B, f°f) -> (A, ff°)`.
pub fn iso_from_mp<C: DaggerCategory + ?Sized>(
    k: &Karoubi<'_, C>,
    f: &C::Morphism,
    f_mp: &C::Morphism,
) -> Result<SplitIso<C::Object, C::Morphism>> {
    let b = k.base;
    require_mp_pair(b, f, f_mp)?;
    let dom = k.object(b.compose(f, f_mp)?)?;
    let cod = k.object(b.compose(f_mp, f)?)?;
    let forward = k.morphism(dom.clone(), cod.clone(), f.clone())?;
    let backward = k.morphism(cod, dom, f_mp.clone())?;
    check_inverse_pair(k, &forward, &backward).map_err(|e| match e {
        Error::Precondition { what, residual } => Error::Inconsistent(format!("{what} ({residual:e})")),
        other => other,
    })?;
    Ok(SplitIso { forward, backward })
}

fn check_inverse_pair<C: DaggerCategory + ?Sized>(k: &Karoubi<'_, C>, f: &Map<C>, g: &Map<C>) -> Result<()> {
    k.require_dual(f, g)?;
    for (a, b, id) in [(f, g, &f.dom), (g, f, &f.cod)] {
        let check = k.close(&k.compose(a, b)?, &k.split_identity(id), k.scale_of(&[a, b]))?;
        if !check.holds {
            return Err(Error::precondition("composite is not the split identity", check.residual));
        }
    }
    Ok(())
}

/// Mutually inverse `F: (A, e₁) -> (B, e₂)` and `G` give the base M-P pair `(f, g)`.
pub fn mp_from_iso<C: DaggerCategory + ?Sized>(
    k: &Karoubi<'_, C>,
    forward: &Map<C>,
    backward: &Map<C>,
) -> Result<(C::Morphism, C::Morphism)> {
    check_inverse_pair(k, forward, backward)?;
    let report = k.base.verify_mp(&forward.f, &backward.f)?;
    if !report.all_hold() {
        return Err(Error::Inconsistent(format!(
            "inverse pair fails the base M-P axioms (relative residual {:e})",
            report.max_relative_residual()
        )));
    }
    Ok((forward.f.clone(), backward.f.clone()))
}
