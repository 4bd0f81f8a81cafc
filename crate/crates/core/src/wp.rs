//! Deciding equality of two codes from a Følner-set oracle and the
//! word-equality enumerator alone.
//!
//! Given `F` with `ν(F)` a 1/3-Følner set for `{ν(n₁), ν(n₂)}` and `ν`
//! injective on `F`, at least two thirds of `F` is mapped back into `ν(F)` by
//! each `ν(nᵢ)`. Enumerating equalities `nᵢ*f = f′` until both partial maps
//! cover two thirds of `F` yields a common `f` whose two images agree
//! exactly when `ν(n₁) = ν(n₂)`.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::group::{EqualityEnumerator, GroupDescriptor};
use crate::word::{star, ElementCode};

/// Produces, for `(n, D)`, a code set `F` with `ν(F)` a `1/n`-Følner set for
/// `ν(D)` and `|F| = |ν(F)|`.
pub trait FolnerOracle {
    fn folner_set(&mut self, n: u64, d: &[ElementCode]) -> Result<Vec<ElementCode>>;
}

/// An oracle built from a descriptor's explicit Følner sets; records every
/// query as `(n, |D|)`.
#[derive(Clone, Debug)]
pub struct RecordingOracle<'a> {
    desc: &'a GroupDescriptor,
    pub queries: Vec<(u64, usize)>,
}

impl<'a> RecordingOracle<'a> {
    pub fn new(desc: &'a GroupDescriptor) -> Self {
        RecordingOracle {
            desc,
            queries: Vec::new(),
        }
    }
}

impl FolnerOracle for RecordingOracle<'_> {
    fn folner_set(&mut self, n: u64, d: &[ElementCode]) -> Result<Vec<ElementCode>> {
        self.queries.push((n, d.len()));
        let elems: Vec<_> = d.iter().map(|c| self.desc.eval(c)).collect();
        let set = self.desc.natural_folner_set(n, &elems)?;
        Ok(set.iter().map(|x| self.desc.code_for(x)).collect())
    }
}

/// Decides `ν(n₁) = ν(n₂)` consulting equalities only through `eq`.
/// `budget` caps the number of equality pairs consumed.
pub fn decide_equal_via_folner(
    eq: &dyn EqualityEnumerator,
    n1: &ElementCode,
    n2: &ElementCode,
    oracle: &mut dyn FolnerOracle,
    budget: u64,
) -> Result<bool> {
    if n1 == n2 {
        return Ok(true);
    }
    let f = oracle.folner_set(3, &[n1.clone(), n2.clone()])?;
    if f.is_empty() {
        return Err(Error::EmptySet);
    }
    // Working set: F followed by n₁*F and n₂*F, deduplicated.
    let mut index: HashMap<ElementCode, usize> = HashMap::new();
    let mut codes: Vec<ElementCode> = Vec::new();
    let mut intern = |c: ElementCode| -> usize {
        *index.entry(c.clone()).or_insert_with(|| {
            codes.push(c);
            codes.len() - 1
        })
    };
    let in_f: HashMap<usize, usize> = f.iter().enumerate().map(|(k, c)| (intern(c.clone()), k)).collect();
    // For each working-set index, the (i, k) with nᵢ*F[k] at that index.
    let mut products: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for (i, n) in [n1, n2].into_iter().enumerate() {
        for (k, c) in f.iter().enumerate() {
            products.entry(intern(star(n, c))).or_default().push((i, k));
        }
    }
    // sigma[i][k] = index in F of f′ with nᵢ*F[k] = f′.
    let mut sigma: [BTreeMap<usize, usize>; 2] = [BTreeMap::new(), BTreeMap::new()];
    let need = |m: usize| 3 * m >= 2 * f.len();
    let pairs = eq.pairs_among(&codes);
    let mut consumed = 0u64;
    for (a, b) in pairs {
        if need(sigma[0].len()) && need(sigma[1].len()) {
            break;
        }
        if consumed >= budget {
            return Err(Error::Exhausted(budget));
        }
        consumed += 1;
        for (p, q) in [(a, b), (b, a)] {
            if let (Some(list), Some(&target)) = (products.get(&p), in_f.get(&q)) {
                for &(i, k) in list {
                    sigma[i].entry(k).or_insert(target);
                }
            }
        }
    }
    if !(need(sigma[0].len()) && need(sigma[1].len())) {
        return Err(Error::Exhausted(consumed));
    }
    let common = f
        .iter()
        .enumerate()
        .filter(|(k, _)| sigma[0].contains_key(k) && sigma[1].contains_key(k))
        .min_by(|x, y| x.1.cmp(y.1))
        .map(|(k, _)| k)
        .expect("two thirds plus two thirds exceeds one");
    Ok(sigma[0][&common] == sigma[1][&common])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::ZooEnumerator;
    use crate::word::FreeWord;

    fn code(w: &str) -> ElementCode {
        w.parse::<FreeWord>().unwrap().encode()
    }

    #[test]
    fn examples_on_z() {
        let z = GroupDescriptor::Z;
        let eq = ZooEnumerator::new(&z);
        let mut oracle = RecordingOracle::new(&z);
        assert!(decide_equal_via_folner(&eq, &code("g0*g0"), &code("g1*g0"), &mut oracle, 1 << 20).unwrap());
        assert!(!decide_equal_via_folner(&eq, &code("g0"), &code("g0^2"), &mut oracle, 1 << 20).unwrap());
        assert!(oracle.queries.iter().all(|&q| q == (3, 2)));
    }

    #[test]
    fn agrees_with_equality_on_small_codes() {
        let cases = [
            (GroupDescriptor::Z, 25u64),
            (GroupDescriptor::Zd { d: 2 }, 25),
            (GroupDescriptor::Heisenberg, 6),
        ];
        for (desc, top) in cases {
            let eq = ZooEnumerator::new(&desc);
            let mut oracle = RecordingOracle::new(&desc);
            for a in 0..top {
                for b in (0..top).step_by(3) {
                    let (a, b) = (ElementCode::from(a), ElementCode::from(b));
                    let v = decide_equal_via_folner(&eq, &a, &b, &mut oracle, 1 << 22).unwrap();
                    assert_eq!(v, desc.equal(&a, &b), "{desc:?} {a} {b}");
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let z = GroupDescriptor::Z;
        let eq = ZooEnumerator::new(&z);
        let mut oracle = RecordingOracle::new(&z);
        assert!(matches!(
            decide_equal_via_folner(&eq, &code("g0"), &code("g0^2"), &mut oracle, 0),
            Err(Error::Exhausted(0))
        ));
    }
}
