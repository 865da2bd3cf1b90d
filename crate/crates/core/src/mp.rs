//! Instance-independent constructions and checks for M-P inverses.
//!
//! Every constructor re-runs [`SpecialMaps::verify_mp`] on its result; a
//! failure there after the precondition passed is reported as
//! [`Error::Inconsistent`].

use serde::Serialize;

use crate::category::{Check, DaggerCategory, MpReport, SpecialMaps};
use crate::error::{Error, Result};

type Mor<C> = <C as DaggerCategory>::Morphism;

/// Collapses a report into one check, keeping the worst relative residual.
pub fn report_check(report: &MpReport) -> Check {
    (0..4)
        .map(|k| Check {
            holds: [report.mp1, report.mp2, report.mp3, report.mp4][k],
            residual: report.residuals[k],
            scale: report.scales[k],
        })
        .reduce(Check::and)
        .expect("four axioms")
}

/// Fails with [`Error::Precondition`] unless `g` is an M-P inverse of `f`.
pub fn require_mp_pair<C: DaggerCategory + ?Sized>(cat: &C, f: &Mor<C>, g: &Mor<C>) -> Result<MpReport> {
    let report = cat.verify_mp(f, g)?;
    if report.all_hold() {
        Ok(report)
    } else {
        Err(Error::precondition("candidate is not an M-P inverse", report.max_relative_residual()))
    }
}

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

pub fn mp_of_identity<C: DaggerCategory + ?Sized>(cat: &C, obj: &C::Object) -> Result<Mor<C>> {
    let id = cat.identity(obj);
    certify(cat, &id, id.clone(), "identity")
}

/// `f° = f⁻¹`, with the inverse supplied by the instance.
pub fn mp_of_isomorphism<C: DaggerCategory + ?Sized>(cat: &C, f: &Mor<C>) -> Result<Mor<C>> {
    let inv = cat.inverse(f)?;
    certify(cat, f, inv, "isomorphism")
}

/// `f° = f†` for a partial isometry (so also for (co)isometries and unitaries).
pub fn mp_of_partial_isometry<C: DaggerCategory + ?Sized>(cat: &C, f: &Mor<C>) -> Result<Mor<C>> {
    let check = cat.partial_isometry_check(f)?;
    if !check.holds {
        return Err(Error::precondition("not a partial isometry", check.residual));
    }
    certify(cat, f, cat.dagger(f), "partial isometry")
}

/// `e° = e` for a †-idempotent.
pub fn mp_of_dagger_idempotent<C: DaggerCategory + ?Sized>(cat: &C, e: &Mor<C>) -> Result<Mor<C>> {
    let check = cat.dagger_idempotent_check(e)?;
    if !check.holds {
        return Err(Error::precondition("not a dagger idempotent", check.residual));
    }
    certify(cat, e, e.clone(), "dagger idempotent")
}

/// For an M-P pair `(f, f°)`: the positive map `p = f·f†` and `p° = f°†·f°`.
pub fn mp_of_gram_positive<C: DaggerCategory + ?Sized>(cat: &C, f: &Mor<C>, f_mp: &Mor<C>) -> Result<(Mor<C>, Mor<C>)> {
    require_mp_pair(cat, f, f_mp)?;
    let p = cat.compose(f, &cat.dagger(f))?;
    let p_mp = cat.compose(&cat.dagger(f_mp), f_mp)?;
    let p_mp = certify(cat, &p, p_mp, "positive f·f†")?;
    Ok((p, p_mp))
}

/// `f° = f†·p°` for `p = f·f†` M-P invertible with `p·p°·f = f`.
pub fn mp_from_positive_factor<C: DaggerCategory + ?Sized>(
    cat: &C,
    p: &Mor<C>,
    p_mp: &Mor<C>,
    f: &Mor<C>,
) -> Result<Mor<C>> {
    require_mp_pair(cat, p, p_mp)?;
    let fd = cat.dagger(f);
    let factor = cat.close(&cat.compose(f, &fd)?, p, cat.scale_of(&[f, f]))?;
    if !factor.holds {
        return Err(Error::precondition("p is not f·f†", factor.residual));
    }
    let absorbs = cat.close(&cat.compose_all(&[p, p_mp, f])?, f, cat.scale_of(&[p, p_mp, f]))?;
    if !absorbs.holds {
        return Err(Error::precondition("p·p°·f is not f", absorbs.residual));
    }
    certify(cat, f, cat.compose(&fd, p_mp)?, "positive factor")
}

/// `f° = (f†f)°·f†`, given a solver for the M-P inverse of the Gram map `f†f`.
///
/// The Gram inverse is checked against the axioms, and the route is refused
/// unless `f·(f†f)°·f†f = f`.
pub fn mp_via_gram<C, S>(cat: &C, f: &Mor<C>, gram_solver: S) -> Result<Mor<C>>
where
    C: DaggerCategory + ?Sized,
    S: FnOnce(&Mor<C>) -> Result<Mor<C>>,
{
    let fd = cat.dagger(f);
    let gram = cat.compose(&fd, f)?;
    let gram_mp = gram_solver(&gram)?;
    let report = cat.verify_mp(&gram, &gram_mp)?;
    if !report.all_hold() {
        return Err(Error::NoMpInverse {
            what: "Gram map f†f has no verified M-P inverse".into(),
            residual: report.max_relative_residual(),
        });
    }
    let cond = cat.close(&cat.compose_all(&[f, &gram_mp, &gram])?, f, cat.scale_of(&[f, &gram_mp, &gram]))?;
    if !cond.holds {
        return Err(Error::NoMpInverse { what: "f·(f†f)°·f†f differs from f".into(), residual: cond.residual });
    }
    certify(cat, f, cat.compose(&gram_mp, &fd)?, "Gram route")
}

/// The ten consequences of `f°` being an M-P inverse of `f`, in order:
///
/// 1. `f°° = f`
/// 2. `f†° = f°†`
/// 3. `ff°` and `f°f` are †-idempotents and their own M-P inverses
/// 4. `(ff†)° = f°†f°` and `(f†f)° = f°f°†`
/// 5. `ff° = f°†f†` and `f°f = f†f°†`
/// 6. `f = ff†f°† = f°†f†f`
/// 7. `f° = f°f°†f† = f†f°†f°`
/// 8. `f† = f†ff° = f°ff†`
/// 9. if `f` is self-adjoint then so is `f°`, and `f°f = ff°`
/// 10. if `f° = f†` then `f` is a partial isometry
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedIdentities {
    pub items: [Check; 10],
}

impl DerivedIdentities {
    pub fn all_hold(&self) -> bool {
        self.items.iter().all(|c| c.holds)
    }

    pub fn max_relative_residual(&self) -> f64 {
        self.items.iter().map(Check::relative).fold(0.0, f64::max)
    }
}

pub fn derived_identities_check<C: DaggerCategory + ?Sized>(
    cat: &C,
    f: &Mor<C>,
    f_mp: &Mor<C>,
) -> Result<DerivedIdentities> {
    cat.require_dual(f, f_mp)?;
    let fd = cat.dagger(f);
    let fo = f_mp;
    let fod = cat.dagger(fo);
    // lhs == composite of the listed maps
    let eq = |lhs: &Mor<C>, maps: &[&Mor<C>]| -> Result<Check> {
        cat.close(lhs, &cat.compose_all(maps)?, cat.scale_of(maps).max(cat.magnitude(lhs)))
    };
    let mp = |a: &Mor<C>, b: &Mor<C>| -> Result<Check> { Ok(report_check(&cat.verify_mp(a, b)?)) };

    let ffo = cat.compose(f, fo)?;
    let fof = cat.compose(fo, f)?;

    let i = mp(fo, f)?;
    let ii = mp(&fd, &fod)?;
    let iii = cat
        .dagger_idempotent_check(&ffo)?
        .and(cat.dagger_idempotent_check(&fof)?)
        .and(mp(&ffo, &ffo)?)
        .and(mp(&fof, &fof)?);
    let iv =
        mp(&cat.compose(f, &fd)?, &cat.compose(&fod, fo)?)?.and(mp(&cat.compose(&fd, f)?, &cat.compose(fo, &fod)?)?);
    let v = eq(&ffo, &[&fod, &fd])?.and(eq(&fof, &[&fd, &fod])?);
    let vi = eq(f, &[f, &fd, &fod])?.and(eq(f, &[&fod, &fd, f])?);
    let vii = eq(fo, &[fo, &fod, &fd])?.and(eq(fo, &[&fd, &fod, fo])?);
    let viii = eq(&fd, &[&fd, f, fo])?.and(eq(&fd, &[fo, f, &fd])?);

    let square = cat.same_object(&cat.source(f), &cat.target(f));
    let ix = if square && cat.self_adjoint_check(f)?.holds {
        cat.self_adjoint_check(fo)?.and(cat.close(&fof, &ffo, cat.scale_of(&[f, fo]))?)
    } else {
        Check::exact(true)
    };
    let x = if cat.close(fo, &fd, cat.scale_of(&[f, fo]))?.holds {
        cat.partial_isometry_check(f)?
    } else {
        Check::exact(true)
    };
    Ok(DerivedIdentities { items: [i, ii, iii, iv, v, vi, vii, viii, ix, x] })
}

/// Conditions under which `(fg)° = g°f°`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompositionCriteria<M> {
    /// `gg°f°f`, `fgg°f°` and `g°f°fg` are self-adjoint.
    pub condition_a: Check,
    /// `gg†f°f` and `f†fgg°` are self-adjoint.
    pub condition_b: Check,
    /// `f°fgg†f† = gg†f†` and `gg°f†fg = f†fg`.
    pub condition_c: Check,
    /// `g°f°` when the conditions hold; it has been verified against `fg`.
    #[serde(skip)]
    pub composite_mp: Option<M>,
    /// `f°fgg°` and `gg°f°f` idempotent, `fgg°f° = f°†gg°f†`, `g°f°fg = g†f°fg°†`.
    pub product_rule: Check,
    /// Whether `g°f°` satisfies the M-P axioms against `fg`.
    pub product_is_mp: MpReport,
}

impl<M> CompositionCriteria<M> {
    pub fn conditions_hold(&self) -> bool {
        self.condition_a.holds
    }

    /// The product-rule clauses hold exactly when `g°f°` is an M-P inverse of `fg`.
    pub fn product_rule_agrees(&self) -> bool {
        self.product_rule.holds == self.product_is_mp.all_hold()
    }
}

pub fn composition_criteria<C: DaggerCategory + ?Sized>(
    cat: &C,
    f: &Mor<C>,
    f_mp: &Mor<C>,
    g: &Mor<C>,
    g_mp: &Mor<C>,
) -> Result<CompositionCriteria<Mor<C>>> {
    require_mp_pair(cat, f, f_mp)?;
    require_mp_pair(cat, g, g_mp)?;
    let fg = cat.compose(f, g)?;
    let (fo, go) = (f_mp, g_mp);
    let (fd, gd) = (cat.dagger(f), cat.dagger(g));
    let (fod, god) = (cat.dagger(fo), cat.dagger(go));
    let self_adjoint = |maps: &[&Mor<C>]| -> Result<Check> {
        let m = cat.compose_all(maps)?;
        cat.close(&cat.dagger(&m), &m, cat.scale_of(maps))
    };
    let eq = |lhs: &[&Mor<C>], rhs: &[&Mor<C>]| -> Result<Check> {
        let scale = cat.scale_of(lhs).max(cat.scale_of(rhs));
        cat.close(&cat.compose_all(lhs)?, &cat.compose_all(rhs)?, scale)
    };
    let idempotent = |maps: &[&Mor<C>]| -> Result<Check> {
        let m = cat.compose_all(maps)?;
        let scale = cat.scale_of(maps);
        cat.close(&cat.compose(&m, &m)?, &m, scale * scale)
    };

    let condition_a =
        self_adjoint(&[g, go, fo, f])?.and(self_adjoint(&[f, g, go, fo])?).and(self_adjoint(&[go, fo, f, g])?);
    let condition_b = self_adjoint(&[g, &gd, fo, f])?.and(self_adjoint(&[&fd, f, g, go])?);
    let condition_c = eq(&[fo, f, g, &gd, &fd], &[g, &gd, &fd])?.and(eq(&[g, go, &fd, f, g], &[&fd, f, g])?);

    if condition_a.holds != condition_b.holds || condition_a.holds != condition_c.holds {
        return Err(Error::Inconsistent(format!(
            "composition conditions disagree: a={} ({:e}), b={} ({:e}), c={} ({:e})",
            condition_a.holds,
            condition_a.relative(),
            condition_b.holds,
            condition_b.relative(),
            condition_c.holds,
            condition_c.relative()
        )));
    }

    let product_rule = idempotent(&[fo, f, g, go])?
        .and(idempotent(&[g, go, fo, f])?)
        .and(eq(&[f, g, go, fo], &[&fod, g, go, &fd])?)
        .and(eq(&[go, fo, f, g], &[&gd, fo, f, &god])?);
    let candidate = cat.compose(go, fo)?;
    let product_is_mp = cat.verify_mp(&fg, &candidate)?;

    let composite_mp = if condition_a.holds {
        if !product_is_mp.all_hold() {
            return Err(Error::Inconsistent(format!(
                "composition conditions hold but g°f° fails the axioms (relative residual {:e})",
                product_is_mp.max_relative_residual()
            )));
        }
        Some(candidate)
    } else {
        None
    };
    Ok(CompositionCriteria { condition_a, condition_b, condition_c, composite_mp, product_rule, product_is_mp })
}
