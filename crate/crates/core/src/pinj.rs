//! Partial injections between finite sets: an inverse category, so every
//! map is a partial isometry and its M-P inverse is its partial inverse.
//!
//! | predicate        | condition                      |
//! |------------------|--------------------------------|
//! | isometry         | total                          |
//! | coisometry       | surjective                     |
//! | unitary          | a bijection                    |
//! | partial isometry | always                         |
//! | †-idempotent     | a partial identity             |

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::category::{DaggerCategory, SpecialMaps, Tolerance};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PartialInjection {
    src: usize,
    tgt: usize,
    map: Vec<Option<usize>>,
}

impl PartialInjection {
    /// Checks ranges and injectivity.
    pub fn new(tgt: usize, map: Vec<Option<usize>>) -> Result<Self> {
        let mut hit = vec![false; tgt];
        for (x, y) in map.iter().enumerate() {
            if let Some(y) = *y {
                if y >= tgt {
                    return Err(Error::Invalid(format!("{x} ↦ {y} out of range for target size {tgt}")));
                }
                if std::mem::replace(&mut hit[y], true) {
                    return Err(Error::Invalid(format!("not injective: {y} has two preimages")));
                }
            }
        }
        Ok(PartialInjection { src: map.len(), tgt, map })
    }

    pub fn from_pairs(src: usize, tgt: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut map = vec![None; src];
        for (x, y) in pairs {
            if x >= src {
                return Err(Error::Invalid(format!("{x} ↦ {y} out of range for source size {src}")));
            }
            if map[x].replace(y).is_some_and(|old| old != y) {
                return Err(Error::Invalid(format!("not a function: {x} has two images")));
            }
        }
        Self::new(tgt, map)
    }

    pub fn identity(n: usize) -> Self {
        PartialInjection { src: n, tgt: n, map: (0..n).map(Some).collect() }
    }

    pub fn nowhere(src: usize, tgt: usize) -> Self {
        PartialInjection { src, tgt, map: vec![None; src] }
    }

    pub fn src(&self) -> usize {
        self.src
    }

    pub fn tgt(&self) -> usize {
        self.tgt
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.map.get(x).copied().flatten()
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.map.iter().enumerate().filter_map(|(x, y)| y.map(|y| (x, y))).collect()
    }

    /// The partial inverse.
    pub fn dagger(&self) -> Self {
        let mut map = vec![None; self.tgt];
        for (x, y) in self.pairs() {
            map[y] = Some(x);
        }
        PartialInjection { src: self.tgt, tgt: self.src, map }
    }

    /// `self` then `other`, defined where both stages are.
    pub fn compose(&self, other: &PartialInjection) -> Result<Self> {
        if self.tgt != other.src {
            return Err(Error::mismatch(format!(
                "cannot compose {}→{} with {}→{}",
                self.src, self.tgt, other.src, other.tgt
            )));
        }
        let map = self.map.iter().map(|y| y.and_then(|y| other.map[y])).collect();
        Ok(PartialInjection { src: self.src, tgt: other.tgt, map })
    }
}

impl fmt::Debug for PartialInjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PartialInjection({}→{}; {:?})", self.src, self.tgt, self.pairs())
    }
}

/// `ff†f = f` and, for parallel `g`, `ff†gg† = gg†ff†`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InverseLaws {
    pub regular: bool,
    pub commuting: bool,
}

pub fn verify_inverse_category_laws(f: &PartialInjection, g: &PartialInjection) -> Result<InverseLaws> {
    if (f.src, f.tgt) != (g.src, g.tgt) {
        return Err(Error::mismatch("inverse-category laws need parallel maps"));
    }
    let (fd, gd) = (f.dagger(), g.dagger());
    let regular = f.compose(&fd)?.compose(f)? == *f;
    let ffd = f.compose(&fd)?;
    let ggd = g.compose(&gd)?;
    let commuting = ffd.compose(&ggd)? == ggd.compose(&ffd)?;
    Ok(InverseLaws { regular, commuting })
}

/// Every partial injection of the given shape.
pub fn all_partial_injections(src: usize, tgt: usize) -> Vec<PartialInjection> {
    fn extend(
        x: usize,
        src: usize,
        used: &mut Vec<bool>,
        map: &mut Vec<Option<usize>>,
        out: &mut Vec<PartialInjection>,
    ) {
        if x == src {
            out.push(PartialInjection { src, tgt: used.len(), map: map.clone() });
            return;
        }
        map.push(None);
        extend(x + 1, src, used, map, out);
        map.pop();
        for y in 0..used.len() {
            if !used[y] {
                used[y] = true;
                map.push(Some(y));
                extend(x + 1, src, used, map, out);
                map.pop();
                used[y] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(0, src, &mut vec![false; tgt], &mut Vec::new(), &mut out);
    out
}

/// Finite sets and partial injections.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Pinj;

impl DaggerCategory for Pinj {
    type Object = usize;
    type Morphism = PartialInjection;

    fn source(&self, f: &PartialInjection) -> usize {
        f.src
    }

    fn target(&self, f: &PartialInjection) -> usize {
        f.tgt
    }

    fn same_object(&self, a: &usize, b: &usize) -> bool {
        a == b
    }

    fn identity(&self, n: &usize) -> PartialInjection {
        PartialInjection::identity(*n)
    }

    fn compose(&self, f: &PartialInjection, g: &PartialInjection) -> Result<PartialInjection> {
        f.compose(g)
    }

    fn dagger(&self, f: &PartialInjection) -> PartialInjection {
        f.dagger()
    }

    /// Number of source points where the maps differ.
    fn deviation(&self, f: &PartialInjection, g: &PartialInjection) -> Result<f64> {
        if (f.src, f.tgt) != (g.src, g.tgt) {
            return Err(Error::mismatch(format!("cannot compare {}→{} with {}→{}", f.src, f.tgt, g.src, g.tgt)));
        }
        Ok(f.map.iter().zip(&g.map).filter(|(a, b)| a != b).count() as f64)
    }

    fn magnitude(&self, _f: &PartialInjection) -> f64 {
        1.0
    }

    fn tolerance(&self) -> Tolerance {
        Tolerance::exact()
    }

    /// A partial identity on `D ⊆ X` splits through `|D|`, numbering `D` in order.
    fn split_idempotent(&self, e: &PartialInjection) -> Result<PartialInjection> {
        let check = self.dagger_idempotent_check(e)?;
        if !check.holds {
            return Err(Error::precondition("not a partial identity", check.residual));
        }
        let domain: Vec<usize> = e.pairs().into_iter().map(|(x, _)| x).collect();
        let mut map = vec![None; e.src];
        for (k, &x) in domain.iter().enumerate() {
            map[x] = Some(k);
        }
        PartialInjection::new(domain.len(), map)
    }

    fn inverse(&self, f: &PartialInjection) -> Result<PartialInjection> {
        if self.is_unitary(f)? {
            Ok(f.dagger())
        } else {
            Err(Error::precondition("partial injection is not a bijection", 0.0))
        }
    }

    fn mp_inverse(&self, f: &PartialInjection) -> Result<PartialInjection> {
        Ok(f.dagger())
    }
}

/// `{"src": n, "tgt": m, "map": [[i, j], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PinjFile {
    pub src: usize,
    pub tgt: usize,
    pub map: Vec<[usize; 2]>,
}

impl From<&PartialInjection> for PinjFile {
    fn from(f: &PartialInjection) -> Self {
        PinjFile { src: f.src, tgt: f.tgt, map: f.pairs().into_iter().map(|(x, y)| [x, y]).collect() }
    }
}

impl TryFrom<PinjFile> for PartialInjection {
    type Error = Error;

    fn try_from(file: PinjFile) -> Result<Self> {
        PartialInjection::from_pairs(file.src, file.tgt, file.map.into_iter().map(|[x, y]| (x, y)))
    }
}

pub fn from_json(text: &str) -> Result<PartialInjection> {
    let file: PinjFile =
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("partial injection file: {e}")))?;
    file.try_into()
}

pub fn to_json(f: &PartialInjection) -> String {
    serde_json::to_string(&PinjFile::from(f)).expect("partial injection file serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pi(src: usize, tgt: usize, pairs: &[(usize, usize)]) -> PartialInjection {
        PartialInjection::from_pairs(src, tgt, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn composition_examples() {
        let f = pi(2, 2, &[(0, 1)]);
        assert_eq!(PartialInjection::identity(2).compose(&f).unwrap(), f);
        assert_eq!(f.compose(&PartialInjection::identity(2)).unwrap(), f);
        assert_eq!(f.dagger(), pi(2, 2, &[(1, 0)]));
        let g = pi(2, 2, &[(0, 0)]);
        assert_eq!(f.compose(&g).unwrap(), PartialInjection::nowhere(2, 2));
        assert!(f.compose(&pi(3, 3, &[])).is_err());
    }

    #[test]
    fn rejects_non_injective_and_out_of_range() {
        assert!(PartialInjection::from_pairs(2, 2, [(0, 1), (1, 1)]).is_err());
        assert!(PartialInjection::from_pairs(2, 2, [(0, 2)]).is_err());
        assert!(PartialInjection::from_pairs(2, 2, [(0, 0), (0, 1)]).is_err());
        assert!(from_json(r#"{"src":2,"tgt":1,"map":[[0,0],[1,0]]}"#).is_err());
    }

    #[test]
    fn laws_on_examples() {
        let f = pi(3, 3, &[(0, 2), (2, 1)]);
        let g = pi(3, 3, &[(1, 1), (2, 0)]);
        assert_eq!(verify_inverse_category_laws(&f, &g).unwrap(), InverseLaws { regular: true, commuting: true });
        let b = pi(3, 3, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(b.compose(&b.dagger()).unwrap(), PartialInjection::identity(3));
    }

    #[test]
    fn predicates() {
        let total = pi(2, 3, &[(0, 2), (1, 0)]);
        assert!(Pinj.is_isometry(&total).unwrap());
        assert!(!Pinj.is_coisometry(&total).unwrap());
        assert!(Pinj.is_partial_isometry(&pi(3, 2, &[(1, 0)])).unwrap());
        let e = pi(3, 3, &[(0, 0), (2, 2)]);
        assert!(Pinj.is_dagger_idempotent(&e).unwrap());
        let r = Pinj.split_idempotent(&e).unwrap();
        assert_eq!(r, pi(3, 2, &[(0, 0), (2, 1)]));
        assert_eq!(r.compose(&r.dagger()).unwrap(), e);
        assert_eq!(r.dagger().compose(&r).unwrap(), PartialInjection::identity(2));
    }

    #[test]
    fn enumeration_counts() {
        // Σ_k C(n,k) C(m,k) k!
        assert_eq!(all_partial_injections(0, 0).len(), 1);
        assert_eq!(all_partial_injections(2, 2).len(), 7);
        assert_eq!(all_partial_injections(3, 3).len(), 34);
        assert_eq!(all_partial_injections(2, 3).len(), 13);
    }

    #[test]
    fn json_round_trip() {
        let f = pi(3, 4, &[(2, 0), (0, 3)]);
        let text = to_json(&f);
        assert_eq!(text, r#"{"src":3,"tgt":4,"map":[[0,3],[2,0]]}"#);
        assert_eq!(from_json(&text).unwrap(), f);
    }
}
