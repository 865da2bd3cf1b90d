//! Compact SVD, SVD and polar decomposition in any instance that provides
//! the needed hooks, in both directions: from an M-P pair to a
//! decomposition, and from a decomposition back to the M-P inverse.
//!
//! Nothing here looks inside morphisms. Splitting, kernels, biproducts and
//! square roots all come from [`DaggerCategory`] capabilities.

use serde::Serialize;

use crate::category::{Check, DaggerCategory, SpecialMaps, SquareRoot, Summand};
use crate::error::{Error, Result};
use crate::mp::{report_check, require_mp_pair};

type Mor<C> = <C as DaggerCategory>::Morphism;

fn certify<C: DaggerCategory + ?Sized>(cat: &C, f: &Mor<C>, g: Mor<C>, route: &str) -> Result<Mor<C>> {
    let report = cat.verify_mp(f, &g)?;
    if report.all_hold() {
        Ok(g)
    } else {
        Err(Error::Inconsistent(format!(
            "{route}: result fails the M-P axioms (relative residual {:e})",
            report.max_relative_residual()
        )))
    }
}

fn refuse_unless<R: Serialize>(holds: bool, what: &str, worst: f64, report: R) -> Result<R> {
    if holds {
        Ok(report)
    } else {
        Err(Error::precondition(what, worst))
    }
}

fn inverse_check<C: DaggerCategory + ?Sized>(cat: &C, d: &Mor<C>, d_inv: &Mor<C>) -> Result<Check> {
    let scale = cat.scale_of(&[d, d_inv]);
    let left = cat.close(&cat.compose(d, d_inv)?, &cat.identity(&cat.source(d)), scale)?;
    let right = cat.close(&cat.compose(d_inv, d)?, &cat.identity(&cat.target(d)), scale)?;
    Ok(left.and(right))
}

/// `f = r·d·s` with `r: A -> X` a coisometry, `d: X -> Y` invertible and
/// `s: Y -> B` an isometry.
#[derive(Debug, Clone, PartialEq)]
pub struct Gcsvd<M> {
    pub r: M,
    pub d: M,
    pub d_inv: M,
    pub s: M,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GcsvdReport {
    pub reconstruction: Check,
    pub r_coisometry: Check,
    pub s_isometry: Check,
    pub d_inverse: Check,
}

impl GcsvdReport {
    pub fn all_hold(&self) -> bool {
        self.worst().holds
    }

    fn worst(&self) -> Check {
        self.reconstruction.and(self.r_coisometry).and(self.s_isometry).and(self.d_inverse)
    }
}

pub fn check_gcsvd<C: DaggerCategory + ?Sized>(cat: &C, f: &Mor<C>, t: &Gcsvd<Mor<C>>) -> Result<GcsvdReport> {
    let rds = cat.compose_all(&[&t.r, &t.d, &t.s])?;
    Ok(GcsvdReport {
        reconstruction: cat.close(&rds, f, cat.scale_of(&[&t.r, &t.d, &t.s]).max(cat.magnitude(f)))?,
        r_coisometry: cat.coisometry_check(&t.r)?,
        s_isometry: cat.isometry_check(&t.s)?,
        d_inverse: inverse_check(cat, &t.d, &t.d_inv)?,
    })
}

/// `r` splits `ff°`, `s†` splits `f°f`, `d = r†·f·s†` and `d⁻¹ = s·f°·r`.
pub fn gcsvd_from_mp<C: DaggerCategory + ?Sized>(cat: &C, f: &Mor<C>, f_mp: &Mor<C>) -> Result<Gcsvd<Mor<C>>> {
    require_mp_pair(cat, f, f_mp)?;
    let r = cat.split_idempotent(&cat.compose(f, f_mp)?)?;
    let s = cat.dagger(&cat.split_idempotent(&cat.compose(f_mp, f)?)?);
    let d = cat.compose_all(&[&cat.dagger(&r), f, &cat.dagger(&s)])?;
    let d_inv = cat.compose_all(&[&s, f_mp, &r])?;
    let t = Gcsvd { r, d, d_inv, s };
    let report = check_gcsvd(cat, f, &t)?;
    if !report.all_hold() {
        return Err(Error::Inconsistent(format!(
            "split M-P pair does not give a GCSVD (relative residual {:e})",
            report.worst().relative()
        )));
    }
    Ok(t)
}

/// `f° = s†·d⁻¹·r†`, certified against `r·d·s`.
pub fn mp_from_gcsvd<C: DaggerCategory + ?Sized>(cat: &C, t: &Gcsvd<Mor<C>>) -> Result<Mor<C>> {
    let f = cat.compose_all(&[&t.r, &t.d, &t.s])?;
    let report = check_gcsvd(cat, &f, t)?;
    refuse_unless(report.all_hold(), "not a GCSVD", report.worst().relative(), report)?;
    let fo = cat.compose_all(&[&cat.dagger(&t.s), &t.d_inv, &cat.dagger(&t.r)])?;
    certify(cat, &f, fo, "GCSVD")
}

fn require_same_map<C: DaggerCategory + ?Sized>(cat: &C, f1: &Mor<C>, f2: &Mor<C>) -> Result<()> {
    if !cat.same_object(&cat.source(f1), &cat.source(f2)) || !cat.same_object(&cat.target(f1), &cat.target(f2)) {
        return Err(Error::mismatch("decompositions of maps with different types"));
    }
    let check = cat.close(f1, f2, cat.scale_of(&[f1, f2]))?;
    if !check.holds {
        return Err(Error::mismatch(format!("decompositions of different maps (deviation {:e})", check.residual)));
    }
    Ok(())
}

fn require_unitary<C: DaggerCategory + ?Sized>(cat: &C, u: &Mor<C>, name: &str) -> Result<Check> {
    let check = cat.isometry_check(u)?.and(cat.coisometry_check(u)?);
    if !check.holds {
        return Err(Error::Inconsistent(format!("intertwiner {name} is not unitary ({:e})", check.residual)));
    }
    Ok(check)
}

fn require_equal<C: DaggerCategory + ?Sized>(cat: &C, lhs: &[&Mor<C>], rhs: &[&Mor<C>], what: &str) -> Result<()> {
    let scale = cat.scale_of(lhs).max(cat.scale_of(rhs));
    let check = cat.close(&cat.compose_all(lhs)?, &cat.compose_all(rhs)?, scale)?;
    if !check.holds {
        return Err(Error::Inconsistent(format!("{what} fails ({:e})", check.residual)));
    }
    Ok(())
}

/// The unitaries `u = r₁†·r₂` and `v = s₁·s₂†` relating two GCSVDs of one map.
pub fn gcsvd_intertwiners<C: DaggerCategory + ?Sized>(
    cat: &C,
    t1: &Gcsvd<Mor<C>>,
    t2: &Gcsvd<Mor<C>>,
) -> Result<(Mor<C>, Mor<C>)> {
    let f1 = cat.compose_all(&[&t1.r, &t1.d, &t1.s])?;
    let f2 = cat.compose_all(&[&t2.r, &t2.d, &t2.s])?;
    require_same_map(cat, &f1, &f2)?;
    let u = cat.compose(&cat.dagger(&t1.r), &t2.r)?;
    let v = cat.compose(&t1.s, &cat.dagger(&t2.s))?;
    require_unitary(cat, &u, "u")?;
    require_unitary(cat, &v, "v")?;
    require_equal(cat, &[&t1.r, &u], &[&t2.r], "r₁·u = r₂")?;
    require_equal(cat, &[&t1.d, &v], &[&u, &t2.d], "d₁·v = u·d₂")?;
    require_equal(cat, &[&t1.s], &[&v, &t2.s], "s₁ = v·s₂")?;
    Ok((u, v))
}

/// `f = u·(d ⊕ 0)·v` with `u: A -> X ⊕ Z` and `v: Y ⊕ W -> B` unitary.
/// `Z` and `W` are the kernels of `f` and `f†`, carried by `kernel` and `cokernel`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gsvd<O, M> {
    pub u: M,
    pub d: M,
    pub d_inv: M,
    pub v: M,
    pub x: O,
    pub z: O,
    pub y: O,
    pub w: O,
    /// Isometry `k: Z -> A` with `k·f = 0`.
    pub kernel: M,
    /// Isometry `c: W -> B` with `c·f† = 0`.
    pub cokernel: M,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GsvdReport {
    pub reconstruction: Check,
    pub u_unitary: Check,
    pub v_unitary: Check,
    pub d_inverse: Check,
}

impl GsvdReport {
    pub fn all_hold(&self) -> bool {
        self.worst().holds
    }

    fn worst(&self) -> Check {
        self.reconstruction.and(self.u_unitary).and(self.v_unitary).and(self.d_inverse)
    }
}

/// `ff° + k†k = 1` and `f°f + c†c = 1` for the chosen kernels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelIdentities {
    pub source: Check,
    pub target: Check,
}

pub fn kernel_identities<C: DaggerCategory + ?Sized>(
    cat: &C,
    f: &Mor<C>,
    f_mp: &Mor<C>,
    k: &Mor<C>,
    c: &Mor<C>,
) -> Result<KernelIdentities> {
    let side = |range: Mor<C>, ker: &Mor<C>, obj: C::Object, scale: f64| -> Result<Check> {
        let sum = cat.add(&range, &cat.compose(&cat.dagger(ker), ker)?)?;
        cat.close(&sum, &cat.identity(&obj), scale)
    };
    let scale = cat.scale_of(&[f, f_mp]).max(cat.scale_of(&[k, k])).max(cat.scale_of(&[c, c]));
    Ok(KernelIdentities {
        source: side(cat.compose(f, f_mp)?, k, cat.source(f), scale)?,
        target: side(cat.compose(f_mp, f)?, c, cat.target(f), scale)?,
    })
}

fn middle<C: DaggerCategory + ?Sized>(cat: &C, d: &Mor<C>, z: &C::Object, w: &C::Object) -> Result<Mor<C>> {
    cat.direct_sum(d, &cat.zero_map(z, w)?)
}

fn gsvd_map<C: DaggerCategory + ?Sized>(cat: &C, t: &Gsvd<C::Object, Mor<C>>) -> Result<Mor<C>> {
    cat.compose_all(&[&t.u, &middle(cat, &t.d, &t.z, &t.w)?, &t.v])
}

pub fn check_gsvd<C: DaggerCategory + ?Sized>(cat: &C, f: &Mor<C>, t: &Gsvd<C::Object, Mor<C>>) -> Result<GsvdReport> {
    let unitary = |m: &Mor<C>| -> Result<Check> { Ok(cat.isometry_check(m)?.and(cat.coisometry_check(m)?)) };
    let rebuilt = gsvd_map(cat, t)?;
    Ok(GsvdReport {
        reconstruction: cat.close(&rebuilt, f, cat.scale_of(&[&t.u, &t.d, &t.v]).max(cat.magnitude(f)))?,
        u_unitary: unitary(&t.u)?,
        v_unitary: unitary(&t.v)?,
        d_inverse: inverse_check(cat, &t.d, &t.d_inv)?,
    })
}

/// `u = r·ι₁ + k†·ι₂` and `v = π₁·s + π₂·c` from a GCSVD `(r, d, s)` and the
/// kernels `k` of `f` and `c` of `f†`. Refused unless the kernel identities hold.
pub fn gsvd_from_mp<C: DaggerCategory + ?Sized>(cat: &C, f: &Mor<C>, f_mp: &Mor<C>) -> Result<Gsvd<C::Object, Mor<C>>> {
    let gc = gcsvd_from_mp(cat, f, f_mp)?;
    let k = cat.dagger_kernel(f)?;
    let c = cat.dagger_kernel(&cat.dagger(f))?;
    let ids = kernel_identities(cat, f, f_mp, &k, &c)?;
    let both = ids.source.and(ids.target);
    if !both.holds {
        return Err(Error::precondition("kernel identities ff° + k†k = 1, f°f + c†c = 1 fail", both.residual));
    }
    let (x, z) = (cat.target(&gc.r), cat.source(&k));
    let (y, w) = (cat.source(&gc.s), cat.source(&c));
    let u = cat.add(
        &cat.compose(&gc.r, &cat.injection(&x, &z, Summand::First)?)?,
        &cat.compose(&cat.dagger(&k), &cat.injection(&x, &z, Summand::Second)?)?,
    )?;
    let v = cat.add(
        &cat.compose(&cat.projection(&y, &w, Summand::First)?, &gc.s)?,
        &cat.compose(&cat.projection(&y, &w, Summand::Second)?, &c)?,
    )?;
    let t = Gsvd { u, d: gc.d, d_inv: gc.d_inv, v, x, z, y, w, kernel: k, cokernel: c };
    let report = check_gsvd(cat, f, &t)?;
    if !report.all_hold() {
        return Err(Error::Inconsistent(format!(
            "assembled GSVD fails its invariants (relative residual {:e})",
            report.worst().relative()
        )));
    }
    Ok(t)
}

/// `f° = v†·(d⁻¹ ⊕ 0)·u†`, together with the induced GCSVD `(u·π₁, d, ι₁·v)`.
pub fn mp_from_gsvd<C: DaggerCategory + ?Sized>(
    cat: &C,
    t: &Gsvd<C::Object, Mor<C>>,
) -> Result<(Mor<C>, Gcsvd<Mor<C>>)> {
    let f = gsvd_map(cat, t)?;
    let report = check_gsvd(cat, &f, t)?;
    refuse_unless(report.all_hold(), "not a GSVD", report.worst().relative(), report)?;
    let inner = middle(cat, &t.d_inv, &t.w, &t.z)?;
    let fo = cat.compose_all(&[&cat.dagger(&t.v), &inner, &cat.dagger(&t.u)])?;
    let fo = certify(cat, &f, fo, "GSVD")?;
    let induced = Gcsvd {
        r: cat.compose(&t.u, &cat.projection(&t.x, &t.z, Summand::First)?)?,
        d: t.d.clone(),
        d_inv: t.d_inv.clone(),
        s: cat.compose(&cat.injection(&t.y, &t.w, Summand::First)?, &t.v)?,
    };
    let gc = check_gcsvd(cat, &f, &induced)?;
    if !gc.all_hold() {
        return Err(Error::Inconsistent(format!(
            "GSVD does not induce a GCSVD (relative residual {:e})",
            gc.worst().relative()
        )));
    }
    Ok((fo, induced))
}

/// Unitaries `x, y, z, w` relating two GSVDs of one map.
#[derive(Debug, Clone, PartialEq)]
pub struct GsvdIntertwiners<M> {
    pub x: M,
    pub y: M,
    pub z: M,
    pub w: M,
}

/// `x = ι₁u₁†u₂π₁`, `z = ι₂u₁†u₂π₂`, `y = ι₁v₁v₂†π₁`, `w = ι₂v₁v₂†π₂`, checked
/// against `u₁(x ⊕ z) = u₂`, `d₁y = xd₂` and `v₁ = (y ⊕ w)v₂`.
pub fn gsvd_intertwiners<C: DaggerCategory + ?Sized>(
    cat: &C,
    t1: &Gsvd<C::Object, Mor<C>>,
    t2: &Gsvd<C::Object, Mor<C>>,
) -> Result<GsvdIntertwiners<Mor<C>>> {
    require_same_map(cat, &gsvd_map(cat, t1)?, &gsvd_map(cat, t2)?)?;
    let uu = cat.compose(&cat.dagger(&t1.u), &t2.u)?;
    let vv = cat.compose(&t1.v, &cat.dagger(&t2.v))?;
    let block = |m: &Mor<C>, a: (&C::Object, &C::Object), b: (&C::Object, &C::Object), which| -> Result<Mor<C>> {
        let i = cat.injection(a.0, a.1, which)?;
        let p = cat.projection(b.0, b.1, which)?;
        cat.compose_all(&[&i, m, &p])
    };
    let x = block(&uu, (&t1.x, &t1.z), (&t2.x, &t2.z), Summand::First)?;
    let z = block(&uu, (&t1.x, &t1.z), (&t2.x, &t2.z), Summand::Second)?;
    let y = block(&vv, (&t1.y, &t1.w), (&t2.y, &t2.w), Summand::First)?;
    let w = block(&vv, (&t1.y, &t1.w), (&t2.y, &t2.w), Summand::Second)?;
    for (m, name) in [(&x, "x"), (&y, "y"), (&z, "z"), (&w, "w")] {
        require_unitary(cat, m, name)?;
    }
    let xz = cat.direct_sum(&x, &z)?;
    let yw = cat.direct_sum(&y, &w)?;
    require_equal(cat, &[&t1.u, &xz], &[&t2.u], "u₁(x ⊕ z) = u₂")?;
    require_equal(cat, &[&t1.d, &y], &[&x, &t2.d], "d₁y = xd₂")?;
    require_equal(cat, &[&t1.v], &[&yw, &t2.v], "v₁ = (y ⊕ w)v₂")?;
    Ok(GsvdIntertwiners { x, y, z, w })
}

/// `f = u·h` with `u` a partial isometry, `h` positive and M-P invertible,
/// and `u†u = hh°`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polar<M> {
    pub u: M,
    pub h: M,
    pub h_mp: M,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarReport {
    pub reconstruction: Check,
    pub u_partial_isometry: Check,
    pub range_condition: Check,
    pub h_self_adjoint: Check,
    pub h_mp: Check,
}

impl PolarReport {
    pub fn all_hold(&self) -> bool {
        self.worst().holds
    }

    pub fn worst(&self) -> Check {
        self.reconstruction
            .and(self.u_partial_isometry)
            .and(self.range_condition)
            .and(self.h_self_adjoint)
            .and(self.h_mp)
    }
}

pub fn check_polar<C: DaggerCategory + ?Sized>(cat: &C, f: &Mor<C>, p: &Polar<Mor<C>>) -> Result<PolarReport> {
    let uh = cat.compose(&p.u, &p.h)?;
    let udu = cat.compose(&cat.dagger(&p.u), &p.u)?;
    let hh = cat.compose(&p.h, &p.h_mp)?;
    Ok(PolarReport {
        reconstruction: cat.close(&uh, f, cat.scale_of(&[&p.u, &p.h]).max(cat.magnitude(f)))?,
        u_partial_isometry: cat.partial_isometry_check(&p.u)?,
        range_condition: cat.close(&udu, &hh, cat.scale_of(&[&p.u, &p.u]).max(cat.scale_of(&[&p.h, &p.h_mp])))?,
        h_self_adjoint: cat.self_adjoint_check(&p.h)?,
        h_mp: report_check(&cat.verify_mp(&p.h, &p.h_mp)?),
    })
}

/// `h = √(f†f)` from the instance's square roots and `u = f·h°`.
pub fn polar_from_mp<C: DaggerCategory + ?Sized>(cat: &C, f: &Mor<C>, f_mp: &Mor<C>) -> Result<Polar<Mor<C>>> {
    polar_with(cat, f, f_mp, |p| cat.square_root(p))
}

/// As [`polar_from_mp`] with an explicit square-root provider.
pub fn polar_with<C, S>(cat: &C, f: &Mor<C>, f_mp: &Mor<C>, sqrt: S) -> Result<Polar<Mor<C>>>
where
    C: DaggerCategory + ?Sized,
    S: FnOnce(&Mor<C>) -> Result<SquareRoot<Mor<C>>>,
{
    require_mp_pair(cat, f, f_mp)?;
    let gram = cat.compose(&cat.dagger(f), f)?;
    let SquareRoot { root: h, root_mp: h_mp } = sqrt(&gram)?;
    if !cat.is_positive(&h)? {
        return Err(Error::Inconsistent("square root is not positive".into()));
    }
    let squares = cat.close(&cat.compose(&h, &h)?, &gram, cat.scale_of(&[&h, &h]).max(cat.magnitude(&gram)))?;
    if !squares.holds {
        return Err(Error::Inconsistent(format!("square root does not square to f†f ({:e})", squares.residual)));
    }
    let u = cat.compose(f, &h_mp)?;
    let pair = Polar { u, h, h_mp };
    let report = check_polar(cat, f, &pair)?;
    if !report.all_hold() {
        return Err(Error::Inconsistent(format!(
            "polar pair fails its invariants (relative residual {:e})",
            report.worst().relative()
        )));
    }
    Ok(pair)
}

/// `f° = h°·u†`, certified against `u·h`.
pub fn mp_from_polar<C: DaggerCategory + ?Sized>(cat: &C, p: &Polar<Mor<C>>) -> Result<Mor<C>> {
    let f = cat.compose(&p.u, &p.h)?;
    let report = check_polar(cat, &f, p)?;
    refuse_unless(report.all_hold(), "not an M-P polar decomposition", report.worst().relative(), report)?;
    certify(cat, &f, cat.compose(&p.h_mp, &cat.dagger(&p.u))?, "polar")
}
