//! Følner defects, Følner sets and the Følner function, plus the two search
//! procedures that make amenability effective.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{CanonicalElement, EqualityEnumerator, GroupDescriptor};
use crate::rational::{one_over, ratio, Q};
use crate::reiter::{self, ReiterFunction};
use crate::word::ElementCode;

/// A finite code set together with its exact defects against each `x ∈ D`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FolnerWitness {
    pub n: u64,
    pub codes: Vec<ElementCode>,
    #[serde(with = "crate::rational::serde_keyed")]
    pub defects: BTreeMap<ElementCode, Q>,
    /// No two codes name the same element.
    pub injective: bool,
}

/// Outcome of [`is_folner`].
#[derive(Clone, Debug, PartialEq)]
pub enum FolnerCheck {
    Witness(FolnerWitness),
    /// The first `x ∈ D` (in the given order) whose defect exceeds `1/n`.
    Refusal { x: ElementCode, defect: Q },
}

impl FolnerCheck {
    pub fn is_witness(&self) -> bool {
        matches!(self, FolnerCheck::Witness(_))
    }
}

fn image(desc: &GroupDescriptor, f: &[ElementCode]) -> Result<HashSet<CanonicalElement>> {
    if f.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(f.iter().map(|c| desc.eval(c)).collect())
}

/// `|A ∖ xA|`, counted as the `y ∈ A` with `x⁻¹y ∉ A`.
fn outside_count(desc: &GroupDescriptor, a: &HashSet<CanonicalElement>, x: &CanonicalElement) -> usize {
    let xi = desc.inverse(x);
    a.iter().filter(|y| !a.contains(&desc.mul(&xi, y))).count()
}

/// Exact `|ν(F) ∖ ν(x)ν(F)| / |ν(F)|`.
pub fn defect(desc: &GroupDescriptor, f: &[ElementCode], x: &ElementCode) -> Result<Q> {
    let a = image(desc, f)?;
    Ok(ratio(outside_count(desc, &a, &desc.eval(x)), a.len()))
}

/// Exact `|ν(F) ∩ ν(x)ν(F)| / |ν(F)|`.
pub fn intersection_ratio(desc: &GroupDescriptor, f: &[ElementCode], x: &ElementCode) -> Result<Q> {
    let a = image(desc, f)?;
    let xe = desc.eval(x);
    let moved: HashSet<CanonicalElement> = a.iter().map(|y| desc.mul(&xe, y)).collect();
    Ok(ratio(a.iter().filter(|y| moved.contains(*y)).count(), a.len()))
}

/// Checks `defect(F, x) ≤ 1/n` for all `x ∈ D`.
pub fn is_folner(desc: &GroupDescriptor, f: &[ElementCode], d: &[ElementCode], n: u64) -> Result<FolnerCheck> {
    let a = image(desc, f)?;
    let bound = one_over(n);
    let mut defects = BTreeMap::new();
    for x in d {
        let v = ratio(outside_count(desc, &a, &desc.eval(x)), a.len());
        if v > bound {
            return Ok(FolnerCheck::Refusal { x: x.clone(), defect: v });
        }
        defects.insert(x.clone(), v);
    }
    Ok(FolnerCheck::Witness(FolnerWitness {
        n,
        codes: f.to_vec(),
        defects,
        injective: a.len() == f.len(),
    }))
}

/// All finite subsets of ℕ ordered by maximum, then size, then
/// lexicographically.
#[derive(Clone, Debug, Default)]
pub struct FiniteSets {
    max: u64,
    /// Current combination of elements below `max`, or `None` before start.
    rest: Option<Vec<u64>>,
}

impl FiniteSets {
    pub fn new() -> Self {
        FiniteSets::default()
    }

    fn advance_rest(&mut self) {
        let m = self.max;
        let rest = match self.rest.take() {
            None => {
                self.rest = Some(vec![]);
                return;
            }
            Some(r) => r,
        };
        let k = rest.len();
        let mut r = rest;
        // Next k-combination of 0..m in lex order.
        let mut i = k;
        while i > 0 {
            i -= 1;
            if r[i] < m - (k - i) as u64 {
                r[i] += 1;
                for j in i + 1..k {
                    r[j] = r[j - 1] + 1;
                }
                self.rest = Some(r);
                return;
            }
        }
        if (k as u64) < m {
            self.rest = Some((0..=k as u64).collect());
        } else {
            self.max += 1;
            self.rest = Some(vec![]);
        }
    }
}

impl Iterator for FiniteSets {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        self.advance_rest();
        let mut out = self.rest.clone().expect("advanced");
        out.push(self.max);
        Some(out)
    }
}

/// First injective witness in [`FiniteSets`] order, scanning at most
/// `budget` candidates.
pub fn search_folner(desc: &GroupDescriptor, n: u64, d: &[ElementCode], budget: u64) -> Result<FolnerWitness> {
    let dx: Vec<CanonicalElement> = d.iter().map(|x| desc.eval(x)).collect();
    let dinv: Vec<CanonicalElement> = dx.iter().map(|x| desc.inverse(x)).collect();
    let bound = one_over(n);
    let mut cache: Vec<CanonicalElement> = Vec::new();
    for cand in FiniteSets::new().take(budget as usize) {
        let top = *cand.last().expect("nonempty") as usize;
        while cache.len() <= top {
            cache.push(desc.eval(&ElementCode::from(cache.len() as u64)));
        }
        let elems: HashSet<&CanonicalElement> = cand.iter().map(|&c| &cache[c as usize]).collect();
        if elems.len() != cand.len() {
            continue;
        }
        let size = elems.len();
        let ok = dinv.iter().all(|xi| {
            let out = elems.iter().filter(|y| !elems.contains(&desc.mul(xi, y))).count();
            ratio(out, size) <= bound
        });
        if ok {
            let codes: Vec<ElementCode> = cand.into_iter().map(ElementCode::from).collect();
            match is_folner(desc, &codes, d, n)? {
                FolnerCheck::Witness(w) => return Ok(w),
                FolnerCheck::Refusal { .. } => unreachable!("search and check disagree"),
            }
        }
    }
    Err(Error::Exhausted(budget))
}

/// Result of [`folner_function`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FolnerValue {
    /// Least size of a Følner set inside the ball; `None` if there is none.
    pub value: Option<usize>,
    /// The ball is not the whole group, so `value` only bounds the true
    /// minimum from above.
    pub truncated: bool,
}

/// Least `|F|` over `F ⊆ ball(radius)` with all defects at most `1/n`.
pub fn folner_function(desc: &GroupDescriptor, n: u64, d: &[ElementCode], radius: u64) -> Result<FolnerValue> {
    let ball = desc.ball(radius)?;
    let truncated = !desc.ball_is_whole_group(radius);
    let index: BTreeMap<&CanonicalElement, usize> = ball.iter().enumerate().map(|(i, x)| (x, i)).collect();
    // For each x, the ball index of x⁻¹y, if it stays in the ball.
    let pre: Vec<Vec<Option<usize>>> = d
        .iter()
        .map(|x| {
            let xi = desc.inverse(&desc.eval(x));
            ball.iter().map(|y| index.get(&desc.mul(&xi, y)).copied()).collect()
        })
        .collect();
    let bound = one_over(n);
    let m = ball.len();
    for k in 1..=m {
        let mut comb: Vec<usize> = (0..k).collect();
        let mut member = vec![false; m];
        loop {
            member.iter_mut().for_each(|b| *b = false);
            for &i in &comb {
                member[i] = true;
            }
            let ok = pre.iter().all(|p| {
                let out = comb.iter().filter(|&&y| !p[y].is_some_and(|z| member[z])).count();
                ratio(out, k) <= bound
            });
            if ok {
                return Ok(FolnerValue { value: Some(k), truncated });
            }
            let mut i = k;
            let mut moved = false;
            while i > 0 {
                i -= 1;
                if comb[i] < m - (k - i) {
                    comb[i] += 1;
                    for j in i + 1..k {
                        comb[j] = comb[j - 1] + 1;
                    }
                    moved = true;
                    break;
                }
            }
            if !moved {
                break;
            }
        }
    }
    Ok(FolnerValue { value: None, truncated })
}

/// Output of [`sigma_search`].
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaResult {
    /// The finite code set found: the support of the certificate.
    pub superset: Vec<ElementCode>,
    /// Reiter function certified by the merge verifier.
    pub certificate: ReiterFunction,
    /// A `1/n`-Følner subset, extracted only when equality is decidable.
    pub subset: Option<Vec<ElementCode>>,
}

/// Finds a finite code set containing a `1/n`-Følner subset using only the
/// equality enumerator; with `decidable` it also extracts that subset.
pub fn sigma_search(
    desc: &GroupDescriptor,
    eq: &dyn EqualityEnumerator,
    decidable: Option<&GroupDescriptor>,
    n: u64,
    d: &[ElementCode],
    budget: u64,
) -> Result<SigmaResult> {
    let size = d.len().max(1) as u64;
    let n_reiter = (n * size).div_ceil(2).max(1);
    let certificate = reiter::compute_reiter(desc, eq, n_reiter, d, budget)?;
    let superset: Vec<ElementCode> = certificate.support().cloned().collect();
    let subset = match decidable {
        Some(g) => Some(reiter::extract_folner(g, &certificate, d, n_reiter, reiter::Bound::NonStrict)?),
        None => None,
    };
    Ok(SigmaResult {
        superset,
        certificate,
        subset,
    })
}

/// `F·g` as codes: right translate by `g`.
pub fn right_translate(f: &[ElementCode], g: &ElementCode) -> Vec<ElementCode> {
    f.iter().map(|c| crate::word::star(c, g)).collect()
}

/// Maximum defect over `D`; zero when `D` is empty.
pub fn max_defect(desc: &GroupDescriptor, f: &[ElementCode], d: &[ElementCode]) -> Result<Q> {
    let mut worst = Q::zero();
    for x in d {
        worst = worst.max(defect(desc, f, x)?);
    }
    Ok(worst)
}

/// Collapses codes to their least representative per element.
pub fn injective_part(desc: &GroupDescriptor, f: &[ElementCode]) -> Vec<ElementCode> {
    let mut seen: BTreeMap<CanonicalElement, ElementCode> = BTreeMap::new();
    for c in f {
        let e = desc.eval(c);
        match seen.get(&e) {
            Some(old) if old <= c => {}
            _ => {
                seen.insert(e, c.clone());
            }
        }
    }
    let out: BTreeSet<ElementCode> = seen.into_values().collect();
    out.into_iter().collect()
}
