//! Finitely supported rational Reiter functions and the merge verifier κ.
//!
//! κ(n, D, f) works on the codes `W = F ∪ ⋃_{g∈D} g⁻¹*F`, `F = supp f`. It
//! starts from the partition of `W` into singletons and merges classes as
//! confirmed equalities arrive. For a partition `E` and `x ∈ D` the ratio is
//!
//! ```text
//! M_E^x(f) = Σ_C |h(C) − h'_x(C)| / Σ f
//! h(C)    = Σ { f(u) : u ∈ F ∩ C }
//! h'_x(C) = Σ { f(u) : u ∈ F, x⁻¹*u ∈ C }
//! ```
//!
//! At the partition into ν-fibers this is `‖ν f − ν f(ν(x)·)‖₁ / ‖f‖₁`, and
//! merging two classes can only lower it. κ certifies once every ratio is at
//! most `1/n`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{CanonicalElement, EqualityEnumerator, GroupDescriptor};
use crate::pairing::decode_tuple;
use crate::rational::{ratio, Q};
use crate::word::{inv, star, ElementCode};

/// A finitely supported function ℕ → ℚ⁺.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReiterFunction {
    #[serde(with = "crate::rational::serde_keyed")]
    support: BTreeMap<ElementCode, Q>,
}

impl ReiterFunction {
    /// Rejects empty supports and non-positive values.
    pub fn new(support: BTreeMap<ElementCode, Q>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::EmptySet);
        }
        if let Some((c, v)) = support.iter().find(|(_, v)| !v.is_positive()) {
            return Err(Error::InvalidArgument(format!(
                "value {} at code {c} is not positive",
                crate::rational::to_text(v)
            )));
        }
        Ok(ReiterFunction { support })
    }

    /// χ_F; duplicate codes count once.
    pub fn characteristic(codes: &[ElementCode]) -> Result<Self> {
        ReiterFunction::new(codes.iter().map(|c| (c.clone(), Q::from_integer(1.into()))).collect())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: ReiterFunction = serde_json::from_str(s).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        ReiterFunction::new(f.support)
    }

    pub fn support(&self) -> impl Iterator<Item = &ElementCode> {
        self.support.keys()
    }

    pub fn values(&self) -> &BTreeMap<ElementCode, Q> {
        &self.support
    }

    pub fn get(&self, c: &ElementCode) -> Q {
        self.support.get(c).cloned().unwrap_or_else(Q::zero)
    }

    pub fn norm(&self) -> Q {
        self.support.values().sum()
    }
}

/// `g ↦ Σ { f(i) : ν(i) = g }`.
pub fn pushforward(desc: &GroupDescriptor, f: &ReiterFunction) -> BTreeMap<CanonicalElement, Q> {
    let mut out: BTreeMap<CanonicalElement, Q> = BTreeMap::new();
    for (c, v) in &f.support {
        *out.entry(desc.eval(c)).or_insert_with(Q::zero) += v;
    }
    out
}

/// `‖h − h(ν(x)·)‖₁ / ‖h‖₁` for `h` the pushforward of `f`.
pub fn l1_ratio(desc: &GroupDescriptor, f: &ReiterFunction, x: &ElementCode) -> Q {
    let h = pushforward(desc, f);
    let xi = desc.inverse(&desc.eval(x));
    let shifted: BTreeMap<CanonicalElement, Q> = h.iter().map(|(g, v)| (desc.mul(&xi, g), v.clone())).collect();
    let keys: BTreeSet<&CanonicalElement> = h.keys().chain(shifted.keys()).collect();
    let zero = Q::zero();
    let diff: Q = keys
        .into_iter()
        .map(|g| (h.get(g).unwrap_or(&zero) - shifted.get(g).unwrap_or(&zero)).abs())
        .sum();
    diff / f.norm()
}

/// Mergeable classes over the working set, with per-`x` class sums kept
/// incrementally.
#[derive(Clone, Debug)]
pub struct PartitionState {
    codes: Vec<ElementCode>,
    parent: Vec<usize>,
    /// Least code index per root.
    rep: Vec<usize>,
    classes: usize,
    /// `diff[x][root] = h(C) − h'_x(C)`.
    diff: Vec<Vec<Q>>,
    totals: Vec<Q>,
    norm: Q,
}

impl PartitionState {
    /// Singleton partition of `F ∪ ⋃ x⁻¹*F`.
    pub fn new(d: &[ElementCode], f: &ReiterFunction) -> Self {
        let mut index: HashMap<ElementCode, usize> = HashMap::new();
        let mut codes: Vec<ElementCode> = Vec::new();
        let mut idx = |c: ElementCode, codes: &mut Vec<ElementCode>| -> usize {
            *index.entry(c.clone()).or_insert_with(|| {
                codes.push(c);
                codes.len() - 1
            })
        };
        let support: Vec<(usize, Q)> = f.support.iter().map(|(c, v)| (idx(c.clone(), &mut codes), v.clone())).collect();
        let mut pre: Vec<Vec<usize>> = Vec::with_capacity(d.len());
        for x in d {
            let xi = inv(x);
            pre.push(f.support.keys().map(|u| idx(star(&xi, u), &mut codes)).collect());
        }
        let w = codes.len();
        let mut diff = vec![vec![Q::zero(); w]; d.len()];
        for (xk, p) in pre.iter().enumerate() {
            for ((u, v), &t) in support.iter().zip(p) {
                diff[xk][*u] += v;
                diff[xk][t] -= v;
            }
        }
        let totals = diff.iter().map(|row| row.iter().map(|v| v.abs()).sum()).collect();
        PartitionState {
            codes,
            parent: (0..w).collect(),
            rep: (0..w).collect(),
            classes: w,
            diff,
            totals,
            norm: f.norm(),
        }
    }

    pub fn codes(&self) -> &[ElementCode] {
        &self.codes
    }

    pub fn class_count(&self) -> usize {
        self.classes
    }

    fn find(&mut self, mut i: usize) -> usize {
        let mut root = i;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[i] != root {
            let next = self.parent[i];
            self.parent[i] = root;
            i = next;
        }
        root
    }

    /// Joins the classes of working-set indices `i` and `j`.
    pub fn merge(&mut self, i: usize, j: usize) {
        let (a, b) = (self.find(i), self.find(j));
        if a == b {
            return;
        }
        let (keep, gone) = if a < b { (a, b) } else { (b, a) };
        for xk in 0..self.diff.len() {
            let moved = std::mem::take(&mut self.diff[xk][gone]);
            let before = self.diff[xk][keep].abs() + moved.abs();
            self.diff[xk][keep] += moved;
            let after = self.diff[xk][keep].abs();
            self.totals[xk] += after - before;
        }
        self.parent[gone] = keep;
        let (ra, rb) = (self.rep[keep], self.rep[gone]);
        self.rep[keep] = if self.codes[ra] <= self.codes[rb] { ra } else { rb };
        self.classes -= 1;
    }

    /// `M^x` for the `k`-th element of `D`.
    pub fn ratio(&self, k: usize) -> Q {
        &self.totals[k] / &self.norm
    }

    pub fn ratios(&self) -> Vec<Q> {
        (0..self.totals.len()).map(|k| self.ratio(k)).collect()
    }

    /// Every ratio is at most `1/n`.
    pub fn certifies(&self, n: u64) -> bool {
        let n = Q::from_integer(n.into());
        self.totals.iter().all(|t| t * &n <= self.norm)
    }

    /// Least-code representative of each class.
    pub fn representatives(&mut self) -> Vec<ElementCode> {
        let roots: Vec<usize> = (0..self.codes.len()).filter(|&i| self.find(i) == i).collect();
        let mut out: Vec<ElementCode> = roots.iter().map(|&i| self.codes[self.rep[i]].clone()).collect();
        out.sort();
        out
    }
}

/// Result of running κ.
#[derive(Clone, Debug, PartialEq)]
pub enum KappaVerdict {
    Certified { moves: u64, ratios: Vec<Q> },
    /// The partition equals the fiber partition and some ratio exceeds `1/n`.
    RefutedAtFullPartition { moves: u64, ratios: Vec<Q> },
    BudgetExhausted { moves: u64, consumed: usize, ratios: Vec<Q> },
}

/// A resumable κ(n, D, f) process.
#[derive(Clone, Debug)]
pub struct Kappa {
    n: u64,
    state: PartitionState,
    pairs: Vec<(usize, usize)>,
    consumed: usize,
    moves: u64,
}

/// What one move of κ did.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    Certified,
    Pending,
    /// No new equality was available; the state did not change.
    Idle,
}

impl Kappa {
    pub fn new(eq: &dyn EqualityEnumerator, n: u64, d: &[ElementCode], f: &ReiterFunction) -> Self {
        let state = PartitionState::new(d, f);
        let pairs = eq.pairs_among(state.codes());
        Kappa {
            n,
            state,
            pairs,
            consumed: 0,
            moves: 0,
        }
    }

    /// Consumes at most one equality, then checks the ratios.
    pub fn step(&mut self) -> Move {
        self.moves += 1;
        let idle = match self.pairs.get(self.consumed) {
            Some(&(i, j)) => {
                self.consumed += 1;
                self.state.merge(i, j);
                false
            }
            None => true,
        };
        if self.state.certifies(self.n) {
            Move::Certified
        } else if idle {
            Move::Idle
        } else {
            Move::Pending
        }
    }

    pub fn state(&self) -> &PartitionState {
        &self.state
    }

    pub fn state_mut(&mut self) -> &mut PartitionState {
        &mut self.state
    }

    pub fn moves(&self) -> u64 {
        self.moves
    }
}

/// Runs κ(n, D, f) for at most `budget` moves. Refutation needs `decidable`.
pub fn kappa_verify(
    eq: &dyn EqualityEnumerator,
    decidable: Option<&GroupDescriptor>,
    n: u64,
    d: &[ElementCode],
    f: &ReiterFunction,
    budget: u64,
) -> KappaVerdict {
    let mut k = Kappa::new(eq, n, d, f);
    let fibers = decidable.map(|g| k.state.codes().iter().map(|c| g.eval(c)).collect::<HashSet<_>>().len());
    while k.moves < budget {
        let mv = k.step();
        if mv == Move::Certified {
            return KappaVerdict::Certified {
                moves: k.moves,
                ratios: k.state.ratios(),
            };
        }
        if fibers == Some(k.state.class_count()) {
            return KappaVerdict::RefutedAtFullPartition {
                moves: k.moves,
                ratios: k.state.ratios(),
            };
        }
        if mv == Move::Idle {
            break;
        }
    }
    KappaVerdict::BudgetExhausted {
        moves: k.moves,
        consumed: k.consumed,
        ratios: k.state.ratios(),
    }
}

/// A triple `(n, D, f)` of the fixed enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triple {
    pub n: u64,
    pub d: Vec<ElementCode>,
    pub f: ReiterFunction,
}

fn bitset(j: &BigUint) -> Vec<ElementCode> {
    (0..j.bits()).filter(|&b| j.bit(b)).map(ElementCode::from).collect()
}

/// Finite code sets: even positions walk the family's level sets, odd
/// positions walk all nonempty finite sets by their bit masks.
pub fn candidate_set(desc: &GroupDescriptor, i: u64) -> Option<Vec<ElementCode>> {
    if i % 2 == 0 {
        let level = desc.level_set(i / 2 + 1).ok()?;
        Some(level.iter().map(|x| desc.code_for(x)).collect())
    } else {
        Some(bitset(&BigUint::from((i - 1) / 2 + 1)))
    }
}

/// The `p`-th triple: `p` is unpaired into `(i, j, l)`, giving `n = i + 1`,
/// `D` the bit set of `j`, and `f = χ` of candidate set `2l` or `2l + 1`
/// following the parity of `p`.
pub fn triple_at(desc: &GroupDescriptor, p: u64) -> Option<Triple> {
    let t = decode_tuple(&BigUint::from(p / 2), 3);
    let n = t[0].to_u64()?.checked_add(1)?;
    let d = bitset(&t[1]);
    let l = t[2].to_u64()?;
    let set = candidate_set(desc, 2 * l + p % 2)?;
    let f = ReiterFunction::characteristic(&set).ok()?;
    Some(Triple { n, d, f })
}

/// A triple emitted by [`enumerate_reiter`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedTriple {
    pub index: u64,
    pub triple: Triple,
    /// Total moves spent across all processes when it certified.
    pub at_move: u64,
}

/// Round-robin over κ processes: round `k` starts process `k` (when it is
/// well defined) and then gives one move to every live process in start
/// order. `emit` returns `true` to stop. Returns the moves spent.
fn dovetail<T>(
    mut spawn: impl FnMut(u64) -> Option<(Kappa, T)>,
    budget: u64,
    mut emit: impl FnMut(u64, &T, u64) -> bool,
) -> u64 {
    let mut live: Vec<(u64, Kappa, T)> = Vec::new();
    let mut moves = 0u64;
    let mut round = 0u64;
    while moves < budget {
        if let Some((k, tag)) = spawn(round) {
            live.push((round, k, tag));
        }
        round += 1;
        let mut slot = 0;
        while slot < live.len() && moves < budget {
            moves += 1;
            let (idx, k, tag) = &mut live[slot];
            if k.step() == Move::Certified {
                if emit(*idx, tag, moves) {
                    return moves;
                }
                live.remove(slot);
            } else {
                slot += 1;
            }
        }
    }
    moves
}

/// Certified triples in the order the dovetailed κ processes certify them,
/// within `budget` total moves.
pub fn enumerate_reiter(desc: &GroupDescriptor, eq: &dyn EqualityEnumerator, budget: u64) -> Vec<CertifiedTriple> {
    let mut out = Vec::new();
    dovetail(
        |p| {
            let t = triple_at(desc, p)?;
            Some((Kappa::new(eq, t.n, &t.d, &t.f), t))
        },
        budget,
        |index, triple, at_move| {
            out.push(CertifiedTriple {
                index,
                triple: triple.clone(),
                at_move,
            });
            false
        },
    );
    out
}

/// A characteristic function certified by κ for `(n, D)`, found by
/// dovetailing κ(n, D, χ_{F_i}) over the candidate sets.
pub fn compute_reiter(
    desc: &GroupDescriptor,
    eq: &dyn EqualityEnumerator,
    n: u64,
    d: &[ElementCode],
    budget: u64,
) -> Result<ReiterFunction> {
    let mut found = None;
    dovetail(
        |i| {
            let set = candidate_set(desc, i)?;
            let f = ReiterFunction::characteristic(&set).ok()?;
            Some((Kappa::new(eq, n, d, &f), f))
        },
        budget,
        |_, f: &ReiterFunction, _| {
            found = Some(f.clone());
            true
        },
    );
    found.ok_or(Error::Exhausted(budget))
}

/// Inequality used when accepting a level set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    /// `defect < |D| / (2n)`.
    Strict,
    /// `defect ≤ |D| / (2n)`.
    NonStrict,
}

/// Scans level sets `{g : ν h(g) ≥ t}` for decreasing `t` and returns the
/// first whose defects meet `|D| / (2n)`, as least codes from `supp h`.
pub fn extract_folner(
    desc: &GroupDescriptor,
    h: &ReiterFunction,
    d: &[ElementCode],
    n: u64,
    bound: Bound,
) -> Result<Vec<ElementCode>> {
    let push = pushforward(desc, h);
    let limit = ratio(d.len(), 2 * n as usize);
    let xs: Vec<CanonicalElement> = d.iter().map(|x| desc.inverse(&desc.eval(x))).collect();
    let mut thresholds: Vec<&Q> = push.values().collect::<BTreeSet<_>>().into_iter().collect();
    thresholds.reverse();
    for t in thresholds {
        let level: HashSet<&CanonicalElement> = push.iter().filter(|(_, v)| *v >= t).map(|(g, _)| g).collect();
        let ok = xs.iter().all(|xi| {
            let out = level.iter().filter(|y| !level.contains(&desc.mul(xi, y))).count();
            let v = ratio(out, level.len());
            match bound {
                Bound::Strict => v < limit,
                Bound::NonStrict => v <= limit,
            }
        });
        if ok {
            let mut least: BTreeMap<&CanonicalElement, &ElementCode> = BTreeMap::new();
            for c in h.support() {
                let g = desc.eval(c);
                if let Some(key) = level.get(&g) {
                    least.entry(*key).or_insert(c);
                }
            }
            let mut codes: Vec<ElementCode> = least.into_values().cloned().collect();
            codes.sort();
            return Ok(codes);
        }
    }
    Err(Error::InvalidArgument("no level set meets the bound; the input is not a Reiter function".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::ZooEnumerator;
    use crate::rational::q;
    use crate::word::FreeWord;
    use num_bigint::BigInt;

    fn code(w: &str) -> ElementCode {
        w.parse::<FreeWord>().unwrap().encode()
    }

    fn z_codes(vals: impl IntoIterator<Item = i64>) -> Vec<ElementCode> {
        vals.into_iter()
            .map(|v| GroupDescriptor::Z.code_for(&CanonicalElement::Int(BigInt::from(v))))
            .collect()
    }

    #[test]
    fn pushforward_merges_fibers() {
        let f = ReiterFunction::new(BTreeMap::from([(code("g0"), q(1, 2)), (code("g1"), q(1, 2))])).unwrap();
        let p = pushforward(&GroupDescriptor::Z, &f);
        assert_eq!(p, BTreeMap::from([(CanonicalElement::Int(1.into()), q(1, 1))]));
    }

    #[test]
    fn rejects_bad_functions() {
        assert!(ReiterFunction::new(BTreeMap::new()).is_err());
        assert!(ReiterFunction::new(BTreeMap::from([(code("g0"), q(0, 1))])).is_err());
        assert!(ReiterFunction::from_json(r#"{"support":{"0":"-1/2"}}"#).is_err());
        let f = ReiterFunction::from_json(r#"{"support":{"0":"1/2","3":"1/2"}}"#).unwrap();
        assert_eq!(f.norm(), q(1, 1));
    }

    #[test]
    fn interval_ratio_at_full_partition() {
        let f = ReiterFunction::characteristic(&z_codes(0..10)).unwrap();
        let d = [code("g0")];
        let mut st = PartitionState::new(&d, &f);
        let z = GroupDescriptor::Z;
        for (i, j) in ZooEnumerator::new(&z).pairs_among(&st.codes().to_vec()) {
            st.merge(i, j);
        }
        assert_eq!(st.ratio(0), q(2, 10));
        assert_eq!(l1_ratio(&z, &f, &d[0]), q(2, 10));
    }

    #[test]
    fn kappa_examples() {
        let z = GroupDescriptor::Z;
        let eq = ZooEnumerator::new(&z);
        let d = [code("g0")];
        let f = ReiterFunction::characteristic(&z_codes(0..10)).unwrap();
        assert!(matches!(kappa_verify(&eq, Some(&z), 5, &d, &f, 100), KappaVerdict::Certified { .. }));
        let g = ReiterFunction::new(BTreeMap::from([(code("g0"), q(1, 2)), (code("g1"), q(1, 2))])).unwrap();
        match kappa_verify(&eq, Some(&z), 2, &d, &g, 100) {
            KappaVerdict::RefutedAtFullPartition { ratios, .. } => assert_eq!(ratios, vec![q(2, 1)]),
            other => panic!("{other:?}"),
        }
        // Without a decision procedure the same instance is never refuted.
        assert!(matches!(kappa_verify(&eq, None, 2, &d, &g, 100), KappaVerdict::BudgetExhausted { .. }));
        assert!(matches!(kappa_verify(&eq, Some(&z), 5, &d, &f, 0), KappaVerdict::BudgetExhausted { .. }));
    }

    #[test]
    fn representatives_are_least_codes() {
        let z = GroupDescriptor::Z;
        let f = ReiterFunction::characteristic(&[code("g0"), code("g1"), code("g2")]).unwrap();
        let mut k = Kappa::new(&ZooEnumerator::new(&z), 1, &[], &f);
        for _ in 0..10 {
            k.step();
        }
        assert_eq!(k.state().class_count(), 1);
        assert_eq!(k.state_mut().representatives(), vec![code("g0")]);
    }

    #[test]
    fn compute_reiter_on_z() {
        let z = GroupDescriptor::Z;
        let eq = ZooEnumerator::new(&z);
        let d = [code("g0")];
        let f = compute_reiter(&z, &eq, 5, &d, 10_000).unwrap();
        assert!(l1_ratio(&z, &f, &d[0]) <= q(1, 5));
        assert!(pushforward(&z, &f).len() >= 10);
        assert!(matches!(kappa_verify(&eq, Some(&z), 5, &d, &f, 10_000), KappaVerdict::Certified { .. }));
        let id = compute_reiter(&z, &eq, 1000, &[ElementCode::identity()], 100).unwrap();
        assert_eq!(id.support().cloned().collect::<Vec<_>>(), vec![ElementCode::identity()]);
        assert_eq!(compute_reiter(&z, &eq, 5, &d, 0), Err(Error::Exhausted(0)));
    }

    #[test]
    fn enumerate_reiter_is_sound() {
        let z = GroupDescriptor::Z;
        let eq = ZooEnumerator::new(&z);
        assert!(enumerate_reiter(&z, &eq, 0).is_empty());
        let out = enumerate_reiter(&z, &eq, 5_000);
        assert!(!out.is_empty());
        for c in &out {
            let t = &c.triple;
            assert!(matches!(kappa_verify(&eq, None, t.n, &t.d, &t.f, 10_000), KappaVerdict::Certified { .. }));
        }
    }

    #[test]
    fn extraction_examples() {
        let z = GroupDescriptor::Z;
        let c = z_codes([0, 1, 2]);
        let h = ReiterFunction::new(BTreeMap::from([
            (c[0].clone(), q(1, 1)),
            (c[1].clone(), q(1, 1)),
            (c[2].clone(), q(1, 2)),
        ]))
        .unwrap();
        let d = [code("g0")];
        let f = extract_folner(&z, &h, &d, 1, Bound::Strict).unwrap();
        let mut expect = c.clone();
        expect.sort();
        assert_eq!(f, expect);
        assert_eq!(extract_folner(&z, &h, &d, 1, Bound::NonStrict).unwrap().len(), 2);

        let f = z_codes(0..8);
        let h = ReiterFunction::characteristic(&f).unwrap();
        let mut sorted = f.clone();
        sorted.sort();
        assert_eq!(extract_folner(&z, &h, &d, 2, Bound::Strict).unwrap(), sorted);
    }
}
