//! Relations between finite sets with converse as the dagger.
//!
//! A relation `R: X -> Y` is stored as one packed bitset row per element of
//! `X`; composition is the boolean matrix product in diagrammatic order.
//!
//! | predicate        | relational condition                          |
//! |------------------|-----------------------------------------------|
//! | isometry         | `R·R† = 1`: total and pairwise-disjoint rows   |
//! | coisometry       | `R†·R = 1`: surjective and injective          |
//! | unitary          | a bijection                                   |
//! | partial isometry | difunctional                                  |
//! | †-idempotent     | partial equivalence relation                  |
//!
//! Equality is exact; the deviation of two relations is the size of their
//! symmetric difference.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::category::{DaggerCategory, SpecialMaps, Tolerance};
use crate::decomp::{gcsvd_from_mp, Gcsvd};
use crate::error::{Error, Result};

/// Largest `src × tgt` accepted by [`brute_force_mp`].
pub const BRUTE_FORCE_CELLS: usize = 16;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteRelation {
    src: usize,
    tgt: usize,
    words: usize,
    bits: Vec<u64>,
}

impl FiniteRelation {
    pub fn empty(src: usize, tgt: usize) -> Self {
        let words = tgt.div_ceil(64);
        FiniteRelation { src, tgt, words, bits: vec![0; src * words] }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Self::empty(n, n);
        for i in 0..n {
            r.insert(i, i);
        }
        r
    }

    pub fn full(src: usize, tgt: usize) -> Self {
        let mut r = Self::empty(src, tgt);
        for i in 0..src {
            for j in 0..tgt {
                r.insert(i, j);
            }
        }
        r
    }

    pub fn from_pairs(src: usize, tgt: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut r = Self::empty(src, tgt);
        for (i, j) in pairs {
            if i >= src || j >= tgt {
                return Err(Error::Invalid(format!("pair ({i}, {j}) out of range for {src}×{tgt}")));
            }
            r.insert(i, j);
        }
        Ok(r)
    }

    /// Relation whose cell `(i, j)` is bit `i·tgt + j` of `mask`.
    pub fn from_mask(src: usize, tgt: usize, mask: u64) -> Self {
        assert!(src * tgt <= 64, "mask holds at most 64 cells");
        let mut r = Self::empty(src, tgt);
        for i in 0..src {
            for j in 0..tgt {
                if mask >> (i * tgt + j) & 1 == 1 {
                    r.insert(i, j);
                }
            }
        }
        r
    }

    pub fn to_mask(&self) -> u64 {
        assert!(self.src * self.tgt <= 64, "mask holds at most 64 cells");
        self.pairs().iter().fold(0, |m, &(i, j)| m | 1 << (i * self.tgt + j))
    }

    pub fn src(&self) -> usize {
        self.src
    }

    pub fn tgt(&self) -> usize {
        self.tgt
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    fn insert(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        i < self.src && j < self.tgt && self.row(i)[j / 64] >> (j % 64) & 1 == 1
    }

    /// Pairs in lexicographic order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.src).flat_map(|i| (0..self.tgt).filter(move |&j| self.contains(i, j)).map(move |j| (i, j))).collect()
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn converse(&self) -> Self {
        let mut r = Self::empty(self.tgt, self.src);
        for (i, j) in self.pairs() {
            r.insert(j, i);
        }
        r
    }

    /// `self` then `other`.
    pub fn compose(&self, other: &FiniteRelation) -> Result<Self> {
        if self.tgt != other.src {
            return Err(Error::mismatch(format!(
                "cannot compose {}→{} with {}→{}",
                self.src, self.tgt, other.src, other.tgt
            )));
        }
        let mut r = Self::empty(self.src, other.tgt);
        for i in 0..self.src {
            for j in 0..self.tgt {
                if self.contains(i, j) {
                    let w = r.words;
                    for (dst, src) in r.bits[i * w..(i + 1) * w].iter_mut().zip(other.row(j)) {
                        *dst |= src;
                    }
                }
            }
        }
        Ok(r)
    }

    pub fn is_subset(&self, other: &FiniteRelation) -> bool {
        self.src == other.src && self.tgt == other.tgt && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    fn symmetric_difference(&self, other: &FiniteRelation) -> usize {
        self.bits.iter().zip(&other.bits).map(|(a, b)| (a ^ b).count_ones() as usize).sum()
    }

    /// Zig-zag closure: `(x,b), (a,b), (a,y) ∈ R` imply `(x,y) ∈ R`.
    /// Equivalently any two rows are disjoint or equal.
    pub fn is_difunctional(&self) -> bool {
        (0..self.src).all(|a| {
            (a + 1..self.src).all(|x| {
                let (ra, rx) = (self.row(a), self.row(x));
                ra == rx || ra.iter().zip(rx).all(|(p, q)| p & q == 0)
            })
        })
    }
}

impl fmt::Debug for FiniteRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRelation({}→{}; {:?})", self.src, self.tgt, self.pairs())
    }
}

/// `REL` restricted to finite sets, identified with their sizes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rel;

impl DaggerCategory for Rel {
    type Object = usize;
    type Morphism = FiniteRelation;

    fn source(&self, f: &FiniteRelation) -> usize {
        f.src
    }

    fn target(&self, f: &FiniteRelation) -> usize {
        f.tgt
    }

    fn same_object(&self, a: &usize, b: &usize) -> bool {
        a == b
    }

    fn identity(&self, n: &usize) -> FiniteRelation {
        FiniteRelation::identity(*n)
    }

    fn compose(&self, f: &FiniteRelation, g: &FiniteRelation) -> Result<FiniteRelation> {
        f.compose(g)
    }

    fn dagger(&self, f: &FiniteRelation) -> FiniteRelation {
        f.converse()
    }

    fn deviation(&self, f: &FiniteRelation, g: &FiniteRelation) -> Result<f64> {
        if (f.src, f.tgt) != (g.src, g.tgt) {
            return Err(Error::mismatch(format!("cannot compare {}→{} with {}→{}", f.src, f.tgt, g.src, g.tgt)));
        }
        Ok(f.symmetric_difference(g) as f64)
    }

    fn magnitude(&self, _f: &FiniteRelation) -> f64 {
        1.0
    }

    fn tolerance(&self) -> Tolerance {
        Tolerance::exact()
    }

    fn split_idempotent(&self, e: &FiniteRelation) -> Result<FiniteRelation> {
        split_per(e)
    }

    fn inverse(&self, f: &FiniteRelation) -> Result<FiniteRelation> {
        let g = f.converse();
        let left = f.compose(&g)? == FiniteRelation::identity(f.src);
        let right = g.compose(f)? == FiniteRelation::identity(f.tgt);
        if left && right {
            Ok(g)
        } else {
            Err(Error::precondition("relation is not a bijection", f.len() as f64))
        }
    }

    fn mp_inverse(&self, f: &FiniteRelation) -> Result<FiniteRelation> {
        mp_inverse_rel(f).ok_or_else(|| Error::NoMpInverse {
            what: "relation is not difunctional".into(),
            residual: f
                .compose(&f.converse())
                .and_then(|p| p.compose(f))
                .map_or(f64::NAN, |ffdf| ffdf.symmetric_difference(f) as f64),
        })
    }
}

/// The converse, when `R` is difunctional.
pub fn mp_inverse_rel(r: &FiniteRelation) -> Option<FiniteRelation> {
    r.is_difunctional().then(|| r.converse())
}

/// Rows of a relation on at most 16 cells, one `u16` mask per source element.
#[derive(Clone, Copy)]
struct Packed {
    rows: [u16; BRUTE_FORCE_CELLS],
    n: usize,
}

impl Packed {
    fn from_relation(r: &FiniteRelation) -> Self {
        let mut rows = [0u16; BRUTE_FORCE_CELLS];
        for (i, j) in r.pairs() {
            rows[i] |= 1 << j;
        }
        Packed { rows, n: r.src }
    }

    /// Candidate `tgt → src` relation encoded by the low `tgt·src` bits of `mask`.
    fn from_mask(mask: u32, n: usize, m: usize) -> Self {
        let mut rows = [0u16; BRUTE_FORCE_CELLS];
        let row_mask = ((1u32 << m) - 1) as u16;
        for (i, row) in rows.iter_mut().enumerate().take(n) {
            *row = (mask >> (i * m)) as u16 & row_mask;
        }
        Packed { rows, n }
    }

    fn compose(&self, other: &Packed) -> Packed {
        let mut rows = [0u16; BRUTE_FORCE_CELLS];
        for (out, &row) in rows.iter_mut().zip(&self.rows[..self.n]) {
            let mut bits = row;
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                *out |= other.rows[j];
                bits &= bits - 1;
            }
        }
        Packed { rows, n: self.n }
    }

    fn converse(&self, m: usize) -> Packed {
        let mut rows = [0u16; BRUTE_FORCE_CELLS];
        for (i, &row) in self.rows[..self.n].iter().enumerate() {
            for (j, out) in rows.iter_mut().enumerate().take(m) {
                if row >> j & 1 == 1 {
                    *out |= 1 << i;
                }
            }
        }
        Packed { rows, n: m }
    }

    fn same(&self, other: &Packed) -> bool {
        self.n == other.n && self.rows[..self.n] == other.rows[..other.n]
    }

    fn to_relation(self, m: usize) -> FiniteRelation {
        let mut r = FiniteRelation::empty(self.n, m);
        for i in 0..self.n {
            for j in 0..m {
                if self.rows[i] >> j & 1 == 1 {
                    r.insert(i, j);
                }
            }
        }
        r
    }
}

/// Exhaustive search for a relation satisfying MP.1–MP.4 against `R`.
///
/// Every one of the `2^(src·tgt)` relations of the dual type is tested.
/// More than one passing candidate would contradict uniqueness and is
/// reported as [`Error::Inconsistent`].
pub fn brute_force_mp(r: &FiniteRelation) -> Result<Option<FiniteRelation>> {
    let (n, m) = (r.src, r.tgt);
    let cells = n * m;
    if cells > BRUTE_FORCE_CELLS {
        return Err(Error::SizeBound { cells, limit: BRUTE_FORCE_CELLS });
    }
    let f = Packed::from_relation(r);
    let passes = |mask: u32| {
        let g = Packed::from_mask(mask, m, n);
        let fg = f.compose(&g);
        if !fg.compose(&f).same(&f) {
            return false;
        }
        let gf = g.compose(&f);
        gf.compose(&g).same(&g) && fg.converse(n).same(&fg) && gf.converse(m).same(&gf)
    };
    let found: Vec<u32> = (0..1u32 << cells).into_par_iter().filter(|&mask| passes(mask)).collect();
    match found.as_slice() {
        [] => Ok(None),
        [mask] => Ok(Some(Packed::from_mask(*mask, m, n).to_relation(n))),
        many => Err(Error::Inconsistent(format!("{} distinct M-P inverses found for {r:?}", many.len()))),
    }
}

/// Splits a partial equivalence relation `E` on `X` as the membership
/// relation `r: X -> classes`, with `r·r† = E` and `r†·r = 1`.
/// Classes are numbered in order of their least member.
pub fn split_per(e: &FiniteRelation) -> Result<FiniteRelation> {
    Rel.require_endomorphism(e)?;
    let symmetric = e.converse() == *e;
    let ee = e.compose(e)?;
    if !symmetric || ee != *e {
        let residual = e.converse().symmetric_difference(e) + ee.symmetric_difference(e);
        return Err(Error::precondition(
            "relation is not a partial equivalence (symmetric and idempotent)",
            residual as f64,
        ));
    }
    let mut classes: Vec<usize> = Vec::new();
    for i in 0..e.src {
        if e.contains(i, i) && !classes.iter().any(|&c| e.row(c) == e.row(i)) {
            classes.push(i);
        }
    }
    let pairs = (0..e.src)
        .flat_map(|i| classes.iter().enumerate().filter(move |&(_, &c)| e.contains(c, i)).map(move |(k, _)| (i, k)));
    FiniteRelation::from_pairs(e.src, classes.len(), pairs.collect::<Vec<_>>())
}

/// Block decomposition of a difunctional relation: membership in source
/// blocks, a bijection of blocks, then membership in target blocks.
pub fn gcsvd_rel(r: &FiniteRelation) -> Result<Gcsvd<FiniteRelation>> {
    let conv = mp_inverse_rel(r)
        .ok_or_else(|| Error::NoMpInverse { what: "relation is not difunctional".into(), residual: 1.0 })?;
    gcsvd_from_mp(&Rel, r, &conv)
}

/// Every relation of the given shape, in mask order.
pub fn all_relations(src: usize, tgt: usize) -> impl Iterator<Item = FiniteRelation> {
    let cells = src * tgt;
    assert!(cells < 64, "too many relations to enumerate");
    (0..1u64 << cells).map(move |mask| FiniteRelation::from_mask(src, tgt, mask))
}

/// `{"src": n, "tgt": m, "pairs": [[i, j], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationFile {
    pub src: usize,
    pub tgt: usize,
    pub pairs: Vec<[usize; 2]>,
}

impl From<&FiniteRelation> for RelationFile {
    fn from(r: &FiniteRelation) -> Self {
        RelationFile { src: r.src, tgt: r.tgt, pairs: r.pairs().into_iter().map(|(i, j)| [i, j]).collect() }
    }
}

impl TryFrom<RelationFile> for FiniteRelation {
    type Error = Error;

    fn try_from(file: RelationFile) -> Result<Self> {
        FiniteRelation::from_pairs(file.src, file.tgt, file.pairs.into_iter().map(|[i, j]| (i, j)))
    }
}

pub fn from_json(text: &str) -> Result<FiniteRelation> {
    let file: RelationFile = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("relation file: {e}")))?;
    file.try_into()
}

pub fn to_json(r: &FiniteRelation) -> String {
    serde_json::to_string(&RelationFile::from(r)).expect("relation file serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(src: usize, tgt: usize, pairs: &[(usize, usize)]) -> FiniteRelation {
        FiniteRelation::from_pairs(src, tgt, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn composition_is_boolean_product() {
        let r = rel(2, 3, &[(0, 0), (1, 2)]);
        let s = rel(3, 2, &[(0, 1), (2, 0), (2, 1)]);
        assert_eq!(r.compose(&s).unwrap(), rel(2, 2, &[(0, 1), (1, 0), (1, 1)]));
        assert!(r.compose(&r).is_err());
    }

    #[test]
    fn wide_rows_span_several_words() {
        let r = rel(2, 130, &[(0, 0), (0, 129), (1, 64)]);
        let back = r.converse().converse();
        assert_eq!(back, r);
        let id = FiniteRelation::identity(130);
        assert_eq!(r.compose(&id).unwrap(), r);
        assert!(r.is_difunctional());
    }

    #[test]
    fn difunctional_examples() {
        assert!(FiniteRelation::full(2, 2).is_difunctional());
        assert!(!rel(2, 2, &[(0, 0), (1, 0), (1, 1)]).is_difunctional());
        assert!(FiniteRelation::empty(3, 2).is_difunctional());
    }

    #[test]
    fn mp_inverse_examples() {
        let id = FiniteRelation::identity(3);
        assert_eq!(mp_inverse_rel(&id), Some(id.clone()));
        let block = rel(2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert_eq!(mp_inverse_rel(&block), Some(block.converse()));
        assert_eq!(mp_inverse_rel(&rel(2, 2, &[(0, 0), (1, 0), (1, 1)])), None);
    }

    #[test]
    fn brute_force_examples() {
        let id = FiniteRelation::identity(2);
        assert_eq!(brute_force_mp(&id).unwrap(), Some(id));
        assert_eq!(brute_force_mp(&rel(2, 2, &[(0, 0), (1, 0), (1, 1)])).unwrap(), None);
        let r = rel(2, 3, &[(0, 1), (0, 2), (1, 0)]);
        assert_eq!(brute_force_mp(&r).unwrap(), Some(r.converse()));
        assert!(matches!(brute_force_mp(&FiniteRelation::empty(3, 6)), Err(Error::SizeBound { cells: 18, limit: 16 })));
    }

    #[test]
    fn brute_force_on_degenerate_shapes() {
        assert_eq!(brute_force_mp(&FiniteRelation::empty(0, 5)).unwrap(), Some(FiniteRelation::empty(5, 0)));
        let r = FiniteRelation::full(1, 16);
        assert_eq!(brute_force_mp(&r).unwrap(), Some(r.converse()));
    }

    #[test]
    fn isometry_of_one_to_two() {
        // s·s† = {(0,0)} = 1 on a one-element set
        let s = rel(1, 2, &[(0, 0), (0, 1)]);
        let ssd = s.compose(&s.converse()).unwrap();
        assert_eq!(ssd, FiniteRelation::identity(1));
        assert!(Rel.is_isometry(&s).unwrap());
        assert!(!Rel.is_coisometry(&s).unwrap());
    }

    #[test]
    fn split_examples() {
        let id = FiniteRelation::identity(2);
        assert_eq!(split_per(&id).unwrap(), id);

        let e = rel(3, 3, &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        let r = split_per(&e).unwrap();
        assert_eq!(r, rel(3, 1, &[(0, 0), (1, 0)]));
        assert_eq!(r.compose(&r.converse()).unwrap(), e);
        assert_eq!(r.converse().compose(&r).unwrap(), FiniteRelation::identity(1));

        let r = split_per(&FiniteRelation::empty(2, 2)).unwrap();
        assert_eq!((r.src(), r.tgt()), (2, 0));
    }

    #[test]
    fn split_orders_classes_by_least_member() {
        let e = rel(4, 4, &[(3, 3), (1, 1), (0, 0), (0, 2), (2, 0), (2, 2)]);
        let r = split_per(&e).unwrap();
        assert_eq!(r, rel(4, 3, &[(0, 0), (1, 1), (2, 0), (3, 2)]));
    }

    #[test]
    fn split_rejects_non_per() {
        let asymmetric = rel(2, 2, &[(0, 1)]);
        assert!(matches!(split_per(&asymmetric), Err(Error::Precondition { .. })));
        let not_transitive = rel(3, 3, &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 0), (1, 2), (2, 1)]);
        assert!(matches!(split_per(&not_transitive), Err(Error::Precondition { .. })));
        assert!(matches!(split_per(&rel(2, 3, &[])), Err(Error::NotEndomorphism { .. })));
    }

    #[test]
    fn gcsvd_blocks() {
        // a, b, c are 0, 1, 2
        let r = rel(3, 3, &[(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)]);
        let t = gcsvd_rel(&r).unwrap();
        assert_eq!(t.r, rel(3, 2, &[(0, 0), (1, 0), (2, 1)]));
        assert_eq!(t.s, rel(2, 3, &[(0, 0), (0, 1), (1, 2)]));
        assert_eq!(t.d, FiniteRelation::identity(2));
        let back = Rel.compose_all(&[&t.r, &t.d, &t.s]).unwrap();
        assert_eq!(back, r);
        assert!(Rel.is_unitary(&t.d).unwrap());

        let swapped = rel(2, 2, &[(0, 1), (1, 0)]);
        let t = gcsvd_rel(&swapped).unwrap();
        assert_eq!(t.d, swapped);

        let t = gcsvd_rel(&FiniteRelation::empty(2, 2)).unwrap();
        assert_eq!((t.d.src(), t.d.tgt()), (0, 0));
        assert_eq!((t.r.src(), t.r.tgt()), (2, 0));

        assert!(gcsvd_rel(&rel(2, 2, &[(0, 0), (1, 0), (1, 1)])).is_err());
    }

    #[test]
    fn json_sorted_output() {
        let r = from_json(r#"{"src":2,"tgt":2,"pairs":[[1,0],[0,1],[1,0]]}"#).unwrap();
        assert_eq!(to_json(&r), r#"{"src":2,"tgt":2,"pairs":[[0,1],[1,0]]}"#);
        assert!(from_json(r#"{"src":1,"tgt":1,"pairs":[[0,1]]}"#).is_err());
        assert!(from_json(r#"{"src":1,"tgt":1,"map":[]}"#).is_err());
    }

    #[test]
    fn mask_round_trip() {
        for r in all_relations(2, 3) {
            assert_eq!(FiniteRelation::from_mask(2, 3, r.to_mask()), r);
        }
        assert_eq!(all_relations(2, 2).count(), 16);
    }
}
