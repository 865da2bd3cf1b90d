mod common;

use common::{corpus, random_relation, random_unitary, rng, scale};
use mpdagger::category::{DaggerCategory, SpecialMaps};
use mpdagger::karoubi::{iso_from_mp, mp_from_iso, mp_in_karoubi, Karoubi, SplitMorphism};
use mpdagger::matrix::{ComplexMatrix, Mat, C64};
use mpdagger::pinj::{all_partial_injections, PartialInjection, Pinj};
use mpdagger::rel::{all_relations, FiniteRelation, Rel};
use mpdagger::Error;

fn real(rows: usize, cols: usize, d: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_real(rows, cols, d).unwrap()
}

#[test]
fn split_identities() {
    let mat = Mat::default();
    let k = Karoubi::new(&mat);
    let one = k.split_identity(&k.unit_object(&2));
    assert_eq!(one.f, ComplexMatrix::identity(2));

    let proj = real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
    let obj = k.object(proj.clone()).unwrap();
    let id = k.split_identity(&obj);
    assert_eq!(id.f, proj);
    assert!(k.morphism(obj.clone(), obj, id.f).is_ok());

    let rk = Karoubi::new(&Rel);
    let per = FiniteRelation::from_pairs(3, 3, [(0, 0)]).unwrap();
    assert_eq!(rk.split_identity(&rk.object(per.clone()).unwrap()).f, per);
}

#[test]
fn objects_need_dagger_idempotents() {
    let mat = Mat::default();
    let k = Karoubi::new(&mat);
    // idempotent, but not self-adjoint
    let oblique = real(2, 2, &[1.0, 1.0, 0.0, 0.0]);
    assert!(matches!(k.object(oblique), Err(Error::Precondition { .. })));
    let rk = Karoubi::new(&Rel);
    assert!(rk.object(FiniteRelation::from_pairs(2, 2, [(0, 1)]).unwrap()).is_err());
}

#[test]
fn morphisms_must_be_absorbed_by_the_idempotents() {
    let mat = Mat::default();
    let k = Karoubi::new(&mat);
    let e = k.object(real(2, 2, &[1.0, 0.0, 0.0, 0.0])).unwrap();
    let whole = k.unit_object(&2);
    assert!(k.morphism(e.clone(), whole.clone(), real(2, 2, &[1.0, 2.0, 0.0, 0.0])).is_ok());
    assert!(matches!(k.morphism(e, whole.clone(), ComplexMatrix::identity(2)), Err(Error::Precondition { .. })));
    assert!(matches!(k.morphism(whole.clone(), whole, ComplexMatrix::identity(3)), Err(Error::TypeMismatch(_))));
}

#[test]
fn embedding_is_functorial() {
    let mat = Mat::default();
    let k = Karoubi::new(&mat);
    assert_eq!(k.embed(&ComplexMatrix::identity(2)), k.identity(&k.unit_object(&2)));
    let mut g = rng(21);
    for a in corpus(21, 20) {
        let b = common::random_matrix(&mut g, a.cols(), 3);
        let embedded = k.compose(&k.embed(&a), &k.embed(&b)).unwrap();
        assert_eq!(embedded.f, a.matmul(&b).unwrap());
        assert_eq!(k.embed(&a).f, a);
    }

    let rk = Karoubi::new(&Rel);
    for _ in 0..50 {
        let (r, s) = (random_relation(&mut g, 3, 4), random_relation(&mut g, 4, 2));
        assert_eq!(rk.compose(&rk.embed(&r), &rk.embed(&s)).unwrap(), rk.embed(&r.compose(&s).unwrap()));
    }
}

#[test]
fn composition_and_dagger_stay_in_the_envelope() {
    let mat = Mat::default();
    let k = Karoubi::new(&mat);
    let mut g = rng(22);
    for a in corpus(22, 50) {
        let fo = mat.pinv(&a).unwrap();
        let iso = iso_from_mp(&k, &a, &fo).unwrap();
        let back = k.dagger(&iso.forward);
        assert!(k.morphism(back.dom.clone(), back.cod.clone(), back.f.clone()).is_ok());
        let round = k.compose(&iso.forward, &iso.backward).unwrap();
        assert!(k.morphism(round.dom.clone(), round.cod.clone(), round.f).is_ok());
        // composing into an unrelated object is a type error
        let other = k.unit_object(&a.cols());
        let stray = SplitMorphism { dom: other.clone(), cod: other, f: random_unitary(&mut g, a.cols()) };
        if a.cols() > 0 && mat.numeric_rank(&a).unwrap() < a.cols() {
            assert!(k.compose(&iso.forward, &stray).is_err());
        }
    }
}

#[test]
fn mp_inverse_in_the_envelope() {
    let mat = Mat::default();
    let k = Karoubi::new(&mat);
    let a = real(2, 2, &[1.0, 2.0, 2.0, 4.0]);
    let got = k.mp_inverse(&k.embed(&a)).unwrap();
    assert!(got.f.distance(&mat.pinv(&a).unwrap()).unwrap() < 1e-14);

    let p = real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
    let obj = k.object(p.clone()).unwrap();
    let f = k.morphism(obj.clone(), obj, p.clone()).unwrap();
    assert_eq!(mp_in_karoubi(&k, &f, p.clone()).unwrap().f, p);

    let rk = Karoubi::new(&Rel);
    for r in all_relations(3, 3).filter(FiniteRelation::is_difunctional) {
        let conv = r.converse();
        let dom = rk.object(r.compose(&conv).unwrap()).unwrap();
        let cod = rk.object(conv.compose(&r).unwrap()).unwrap();
        let f = rk.morphism(dom, cod, r.clone()).unwrap();
        let g = mp_in_karoubi(&rk, &f, conv.clone()).unwrap();
        assert_eq!(g.f, conv);
        assert_eq!(rk.compose(&f, &g).unwrap().f, f.dom.e);
    }
}

#[test]
fn mp_in_karoubi_refuses_a_wrong_base_inverse() {
    let mat = Mat::default();
    let k = Karoubi::new(&mat);
    let a = real(2, 2, &[1.0, 2.0, 2.0, 4.0]);
    assert!(matches!(mp_in_karoubi(&k, &k.embed(&a), ComplexMatrix::identity(2)), Err(Error::Precondition { .. })));
}

#[test]
fn iso_from_mp_examples() {
    let mat = Mat::default();
    let k = Karoubi::new(&mat);
    let u = random_unitary(&mut rng(23), 3);
    let iso = iso_from_mp(&k, &u, &u.adjoint()).unwrap();
    assert!(iso.forward.dom.e.distance(&ComplexMatrix::identity(3)).unwrap() < 1e-13);
    assert!(iso.forward.cod.e.distance(&ComplexMatrix::identity(3)).unwrap() < 1e-13);

    let a = real(2, 2, &[1.0, 2.0, 2.0, 4.0]);
    let iso = iso_from_mp(&k, &a, &mat.pinv(&a).unwrap()).unwrap();
    let fifth = a.scale(C64::new(0.2, 0.0));
    for e in [&iso.forward.dom.e, &iso.forward.cod.e] {
        assert!(e.distance(&fifth).unwrap() < 1e-14);
    }
    let (f, g) = mp_from_iso(&k, &iso.forward, &iso.backward).unwrap();
    assert_eq!((f, g), (a.clone(), mat.pinv(&a).unwrap()));
}

#[test]
fn round_trips_on_three_instances() {
    let mat = Mat::default();
    let k = Karoubi::new(&mat);
    for a in corpus(24, 100) {
        let fo = mat.pinv(&a).unwrap();
        let iso = iso_from_mp(&k, &a, &fo).unwrap();
        let (f, g) = mp_from_iso(&k, &iso.forward, &iso.backward).unwrap();
        assert!(f.distance(&a).unwrap() <= 1e-9 * scale(&a));
        assert!(g.distance(&fo).unwrap() <= 1e-9 * scale(&fo));
    }

    let rk = Karoubi::new(&Rel);
    for r in all_relations(2, 3).filter(FiniteRelation::is_difunctional) {
        let iso = iso_from_mp(&rk, &r, &r.converse()).unwrap();
        assert_eq!(mp_from_iso(&rk, &iso.forward, &iso.backward).unwrap(), (r.clone(), r.converse()));
    }

    let pk = Karoubi::new(&Pinj);
    for f in all_partial_injections(3, 3) {
        let iso = iso_from_mp(&pk, &f, &f.dagger()).unwrap();
        assert_eq!(mp_from_iso(&pk, &iso.forward, &iso.backward).unwrap(), (f.clone(), f.dagger()));
    }
    let id = PartialInjection::identity(2);
    let iso = iso_from_mp(&pk, &id, &id).unwrap();
    assert_eq!(iso.forward.f, id);
}

#[test]
fn mp_from_iso_needs_an_inverse_pair() {
    let mat = Mat::default();
    let k = Karoubi::new(&mat);
    let two = k.embed(&real(1, 1, &[2.0]));
    assert!(matches!(mp_from_iso(&k, &two, &two), Err(Error::Precondition { .. })));
}

#[test]
fn envelope_splits_its_dagger_idempotents() {
    let mat = Mat::default();
    let k = Karoubi::new(&mat);
    let p = real(2, 2, &[0.5, 0.5, 0.5, 0.5]);
    let e = k.embed(&p);
    let s = k.split_idempotent(&e).unwrap();
    assert_eq!(s.cod.e, p);
    // as in the base splitter: s·s† = E and s†·s is the identity on (A, E)
    assert_eq!(k.compose(&s, &k.dagger(&s)).unwrap(), e);
    let back = k.compose(&k.dagger(&s), &s).unwrap();
    assert_eq!(k.deviation(&back, &k.split_identity(&s.cod)).unwrap(), 0.0);
    assert!(k.is_coisometry(&s).unwrap());
}

/// Every M-P pair in the matrix instance splits: ff° and f°f are
/// dagger idempotents and split in the base.
#[test]
fn matrix_maps_are_mp_split() {
    let mat = Mat::default();
    for a in corpus(25, 200) {
        let fo = mat.pinv(&a).unwrap();
        let rank = mat.numeric_rank(&a).unwrap();
        for e in [a.matmul(&fo).unwrap(), fo.matmul(&a).unwrap()] {
            let r = mat.split_dagger_idempotent(&e).unwrap();
            assert_eq!(r.cols(), rank);
            assert!(mat.is_coisometry(&r).unwrap());
            assert!(r.matmul(&r.adjoint()).unwrap().distance(&e).unwrap() <= 1e-9 * scale(&e));
        }
    }
}
