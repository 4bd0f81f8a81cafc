//! Computable Følner sequences checked up to a finite horizon, and the
//! product-set construction on ⊕ℤ driven by a c.e. family of sets.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::folner;
use crate::group::{CanonicalElement, GroupDescriptor};
use crate::rational::{one_over, ratio, Q};
use crate::word::{ElementCode, FreeWord};

/// A total rule `j ↦ F_j` naming finite sets by codes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequenceProgram {
    /// `{-j, …, j}` in ℤ.
    Interval,
    /// `[-j, j]^d` in ℤᵈ.
    Box,
    /// The same set at every stage, given as words.
    Constant { set: Vec<String> },
    /// All of a finite group.
    Whole,
    /// `{k / 2^j : k < 2^j}` on the circle.
    Dyadic,
    /// Explicit stages; undefined past the end of the list.
    List { sets: Vec<Vec<String>> },
}

fn parse_words(words: &[String]) -> Result<Vec<ElementCode>> {
    words.iter().map(|w| Ok(w.parse::<FreeWord>()?.encode())).collect()
}

impl SequenceProgram {
    /// Codes of `F_j`; each element is named by its normal-form code.
    pub fn stage(&self, desc: &GroupDescriptor, j: u64) -> Result<Vec<ElementCode>> {
        use CanonicalElement as E;
        let wrong = || Error::Unsupported(format!("{self:?} does not apply to {desc:?}"));
        let j_i = j as i64;
        let elems: Vec<CanonicalElement> = match self {
            SequenceProgram::Interval => {
                if *desc != GroupDescriptor::Z {
                    return Err(wrong());
                }
                (-j_i..=j_i).map(|v| E::Int(v.into())).collect()
            }
            SequenceProgram::Box => {
                let GroupDescriptor::Zd { d } = desc else { return Err(wrong()) };
                let side = (2 * j + 1) as u128;
                if side.checked_pow(*d as u32).is_none_or(|s| s > crate::group::construct::MAX_CONSTRUCTED as u128) {
                    return Err(Error::Overflow(format!("box of side {side} in dimension {d}")));
                }
                let mut out: Vec<Vec<BigInt>> = vec![vec![]];
                for _ in 0..*d {
                    out = out
                        .into_iter()
                        .flat_map(|p| {
                            (-j_i..=j_i).map(move |v| {
                                let mut q = p.clone();
                                q.push(v.into());
                                q
                            })
                        })
                        .collect();
                }
                out.into_iter().map(E::Vector).collect()
            }
            SequenceProgram::Constant { set } => return parse_words(set),
            SequenceProgram::Whole => {
                if desc.order().is_none() {
                    return Err(wrong());
                }
                desc.ball(0)?
            }
            SequenceProgram::Dyadic => {
                if *desc != GroupDescriptor::CircleRationals {
                    return Err(wrong());
                }
                if j > 16 {
                    return Err(Error::Overflow(format!("2^{j} grid points")));
                }
                let den = BigInt::one() << j as usize;
                (0..1u64 << j)
                    .map(|k| E::Circle(BigRational::new(k.into(), den.clone())))
                    .collect()
            }
            SequenceProgram::List { sets } => {
                let set = sets.get(j as usize).ok_or(Error::Partial(j))?;
                return parse_words(set);
            }
        };
        Ok(elems.iter().map(|x| desc.code_for(x)).collect())
    }
}

/// Where a `(x, n)` row of a horizon check ended up.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Threshold {
    /// Every stage `k` in `[from, horizon]` passes.
    PassesFrom { from: u64 },
    /// The last stage fails; `violations` lists every failing stage.
    Fails { violations: Vec<u64> },
}

impl Threshold {
    /// From per-stage outcomes for `k = 0..=horizon`.
    pub fn from_passes(passes: &[bool]) -> Threshold {
        match passes.iter().rposition(|p| !p) {
            None => Threshold::PassesFrom { from: 0 },
            Some(last) if last + 1 < passes.len() => Threshold::PassesFrom { from: last as u64 + 1 },
            Some(_) => Threshold::Fails {
                violations: (0..passes.len() as u64).filter(|&k| !passes[k as usize]).collect(),
            },
        }
    }

    pub fn passes(&self) -> bool {
        matches!(self, Threshold::PassesFrom { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HorizonRow {
    pub x: ElementCode,
    pub n: u64,
    #[serde(flatten)]
    pub threshold: Threshold,
}

/// Finite-stage instance of "for all x and n, eventually the defect is
/// below 1/n". It never certifies the unbounded statement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HorizonReport {
    pub horizon: u64,
    pub rows: Vec<HorizonRow>,
}

impl HorizonReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.threshold.passes())
    }

    /// Rows for every `x` and `n ≤ n_max` from the outcome at stage row `k`.
    pub(crate) fn build(
        horizon: u64,
        stages: usize,
        xs: &[ElementCode],
        n_max: u64,
        passes: impl Fn(usize, usize, u64) -> bool,
    ) -> HorizonReport {
        let mut rows = Vec::new();
        for (xi, x) in xs.iter().enumerate() {
            for n in 1..=n_max {
                let p: Vec<bool> = (0..stages).map(|k| passes(k, xi, n)).collect();
                rows.push(HorizonRow {
                    x: x.clone(),
                    n,
                    threshold: Threshold::from_passes(&p),
                });
            }
        }
        HorizonReport { horizon, rows }
    }
}

fn below(defects: &[Vec<Q>]) -> impl Fn(usize, usize, u64) -> bool + '_ {
    |k, xi, n| defects[k][xi] < one_over(n)
}

/// For each `x` and `n ≤ n_max`: the least `l` with
/// `|F_k ∖ xF_k| / |F_k| < 1/n` for every `k ∈ [l, horizon]`.
pub fn verify_sequence_horizon(
    desc: &GroupDescriptor,
    prog: &SequenceProgram,
    horizon: u64,
    xs: &[ElementCode],
    n_max: u64,
) -> Result<HorizonReport> {
    let mut defects = Vec::new();
    for k in 0..=horizon {
        let f = prog.stage(desc, k)?;
        if f.is_empty() {
            return Err(Error::Partial(k));
        }
        defects.push(xs.iter().map(|x| folner::defect(desc, &f, x)).collect::<Result<Vec<_>>>()?);
    }
    Ok(HorizonReport::build(horizon, defects.len(), xs, n_max, below(&defects)))
}

/// A description of one member `W_n` of the c.e. family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MemberSpec {
    Empty,
    All,
    /// Finite list, repetitions dropped.
    List(Vec<u64>),
    /// `start, start + step, …` with `step ≥ 1`.
    Progression { start: u64, step: u64 },
    /// `{0, …, n}` for the member's own index `n`.
    UptoN,
}

impl MemberSpec {
    fn parse(v: &serde_json::Value) -> Result<MemberSpec> {
        use serde_json::Value;
        let bad = || Error::InvalidArgument(format!("unrecognized member description {v}"));
        match v {
            Value::String(s) if s == "all" => Ok(MemberSpec::All),
            Value::String(s) if s == "empty" => Ok(MemberSpec::Empty),
            Value::String(s) if s == "upto_n" => Ok(MemberSpec::UptoN),
            Value::Array(items) => {
                let mut out: Vec<u64> = Vec::new();
                for it in items {
                    let x = it.as_u64().ok_or_else(bad)?;
                    if !out.contains(&x) {
                        out.push(x);
                    }
                }
                Ok(MemberSpec::List(out))
            }
            Value::Object(m) => {
                let ap = m.get("ap").and_then(|a| a.as_array()).ok_or_else(bad)?;
                match (ap.first().and_then(|x| x.as_u64()), ap.get(1).and_then(|x| x.as_u64())) {
                    (Some(start), Some(step)) if step >= 1 && ap.len() == 2 => Ok(MemberSpec::Progression { start, step }),
                    _ => Err(bad()),
                }
            }
            _ => Err(bad()),
        }
    }

    fn element(&self, n: u64, idx: u64) -> Option<u64> {
        match self {
            MemberSpec::Empty => None,
            MemberSpec::All => Some(idx),
            MemberSpec::List(v) => v.get(idx as usize).copied(),
            MemberSpec::Progression { start, step } => start.checked_add(idx.checked_mul(*step)?),
            MemberSpec::UptoN => (idx <= n).then_some(idx),
        }
    }

    fn is_finite(&self) -> bool {
        !matches!(self, MemberSpec::All | MemberSpec::Progression { .. })
    }

    fn len(&self, n: u64) -> u64 {
        match self {
            MemberSpec::Empty => 0,
            MemberSpec::List(v) => v.len() as u64,
            MemberSpec::UptoN => n + 1,
            _ => u64::MAX,
        }
    }
}

/// The family `n ↦ W_n` for `n ≥ 1` plus its fixed repetition-free
/// enumeration of `{(n, x) : x ∈ W_n}`: stage `t` lists, for `n = 1..t`,
/// element number `t - n` of `W_n` when it exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CeFamilyModel {
    members: BTreeMap<u64, MemberSpec>,
    default: MemberSpec,
}

impl CeFamilyModel {
    /// Parses `{"W": {"1": "all", "2": [0,1,2], "3": {"ap": [0, 2]}, "default": "upto_n"}}`.
    pub fn from_json(s: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let w = v
            .get("W")
            .and_then(|w| w.as_object())
            .ok_or_else(|| Error::InvalidArgument("model needs an object under \"W\"".into()))?;
        let mut members = BTreeMap::new();
        let mut default = MemberSpec::Empty;
        for (k, spec) in w {
            let spec = MemberSpec::parse(spec)?;
            if k == "default" {
                default = spec;
            } else {
                let n: u64 = k
                    .parse()
                    .ok()
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| Error::InvalidArgument(format!("member index `{k}` must be a positive integer")))?;
                members.insert(n, spec);
            }
        }
        Ok(CeFamilyModel { members, default })
    }

    pub fn new(members: BTreeMap<u64, MemberSpec>, default: MemberSpec) -> Self {
        CeFamilyModel { members, default }
    }

    fn member(&self, n: u64) -> &MemberSpec {
        self.members.get(&n).unwrap_or(&self.default)
    }

    /// Least `n` with `W_n` infinite.
    pub fn infinite_member(&self) -> Option<u64> {
        let explicit = self.members.iter().find(|(_, m)| !m.is_finite()).map(|(&n, _)| n);
        if self.default.is_finite() {
            return explicit;
        }
        let first_default = (1..).find(|n| !self.members.contains_key(n)).expect("finitely many explicit members");
        Some(explicit.map_or(first_default, |e| e.min(first_default)))
    }

    /// Number of pairs, if finite.
    pub fn total_pairs(&self) -> Option<u64> {
        if self.default != MemberSpec::Empty || self.infinite_member().is_some() {
            return None;
        }
        Some(self.members.iter().map(|(&n, m)| m.len(n)).sum())
    }

    /// Pairs `(n_s, x_s)` for `s = 1, 2, …` up to `count` of them.
    pub fn pairs(&self, count: u64) -> Vec<(u64, u64)> {
        let cap = self.total_pairs().map_or(count, |t| t.min(count));
        let mut out = Vec::new();
        let mut t = 1u64;
        while (out.len() as u64) < cap {
            for n in 1..=t {
                if let Some(x) = self.member(n).element(n, t - n) {
                    out.push((n, x));
                    if out.len() as u64 == cap {
                        break;
                    }
                }
            }
            t += 1;
        }
        out
    }
}

/// `Π F_i` in ⊕ℤ over coordinates `i = 1..`, each `F_i` a finite integer set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductSet {
    pub factors: BTreeMap<u64, Vec<i64>>,
}

impl ProductSet {
    pub fn len(&self) -> BigUint {
        self.factors.values().map(|f| BigUint::from(f.len())).product()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.values().any(|f| f.is_empty())
    }

    /// Exact `|F ∖ vF| / |F|` for a translation `v`, by factoring over
    /// coordinates.
    pub fn defect(&self, v: &BTreeMap<BigUint, BigInt>) -> Q {
        let mut kept = Q::one();
        for (coord, shift) in v {
            if shift.is_zero() {
                continue;
            }
            let Some(f) = coord.to_u64().and_then(|c| self.factors.get(&c)) else {
                return Q::one();
            };
            let Some(s) = shift.to_i64() else { return Q::one() };
            let hits = f.iter().filter(|&&a| f.binary_search(&(a - s)).is_ok()).count();
            kept *= ratio(hits, f.len());
        }
        Q::one() - kept
    }

    /// Codes of every element; only for small products.
    pub fn materialize(&self, desc: &GroupDescriptor) -> Result<Vec<ElementCode>> {
        if self.len() > BigUint::from(crate::group::construct::MAX_CONSTRUCTED) {
            return Err(Error::Overflow(format!("product of {} elements", self.len())));
        }
        let mut out: Vec<BTreeMap<BigUint, BigInt>> = vec![BTreeMap::new()];
        for (&c, f) in &self.factors {
            out = out
                .into_iter()
                .flat_map(|p| {
                    f.iter().map(move |&a| {
                        let mut q = p.clone();
                        if a != 0 {
                            q.insert(BigUint::from(c), BigInt::from(a));
                        }
                        q
                    })
                })
                .collect();
        }
        Ok(out.into_iter().map(|m| desc.code_for(&CanonicalElement::Sparse(m))).collect())
    }
}

/// `F_s = Π_{i=1..s} F_{s,i}` with `F_{s,i} = {-s..s}`, except that the
/// coordinate `n_s` of the `s`-th enumerated pair, when `n_s ≤ s`, gets
/// `{-1, 0, 1}`.
pub fn build_reduction_set(model: &CeFamilyModel, s: u64) -> ProductSet {
    let pairs = model.pairs(s);
    let exceptional = pairs.get(s as usize - 1).map(|&(n, _)| n).filter(|&n| n <= s);
    let s_i = s as i64;
    let factors = (1..=s)
        .map(|i| {
            let f = if Some(i) == exceptional {
                vec![-1, 0, 1]
            } else {
                (-s_i..=s_i).collect()
            };
            (i, f)
        })
        .collect();
    ProductSet { factors }
}

/// The two outcomes the construction separates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CaseVerdict {
    /// All members finite, and every tested row passes by the horizon.
    BehavesAsFolner { report: HorizonReport },
    /// All members finite, yet some row still fails at the horizon.
    Inconclusive { report: HorizonReport },
    /// `W_generator` is infinite: stages `s ≥ generator` where `F_s` is not
    /// 1/4-Følner for that generator.
    InfinitelyOftenBad { generator: u64, failing: Vec<u64> },
}

fn unit_vector(i: u64) -> BTreeMap<BigUint, BigInt> {
    BTreeMap::from([(BigUint::from(i), BigInt::one())])
}

/// Horizon check of the reduction sequence for generators `g_i`, `i ∈ gens`,
/// and `n ≤ n_max`, stages `s = 1..=horizon`.
pub fn verify_reduction_horizon(model: &CeFamilyModel, horizon: u64, gens: &[u64], n_max: u64) -> HorizonReport {
    let xs: Vec<ElementCode> = gens.iter().map(|&i| FreeWord::power(i, 1).encode()).collect();
    // Row k of the table is stage s = k + 1.
    let defects: Vec<Vec<Q>> = (1..=horizon)
        .map(|s| {
            let f = build_reduction_set(model, s);
            gens.iter().map(|&i| f.defect(&unit_vector(i))).collect()
        })
        .collect();
    let mut report = HorizonReport::build(horizon, defects.len(), &xs, n_max, below(&defects));
    for row in &mut report.rows {
        if let Threshold::PassesFrom { from } = &mut row.threshold {
            *from += 1;
        } else if let Threshold::Fails { violations } = &mut row.threshold {
            violations.iter_mut().for_each(|k| *k += 1);
        }
    }
    report
}

/// Separates the two cases of the construction up to `horizon`.
pub fn reduction_case_study(model: &CeFamilyModel, horizon: u64, gens: &[u64], n_max: u64) -> CaseVerdict {
    match model.infinite_member() {
        Some(g) => {
            let quarter = one_over(4);
            let failing = (g.max(1)..=horizon)
                .filter(|&s| build_reduction_set(model, s).defect(&unit_vector(g)) > quarter)
                .collect();
            CaseVerdict::InfinitelyOftenBad { generator: g, failing }
        }
        None => {
            let report = verify_reduction_horizon(model, horizon, gens, n_max);
            if report.all_pass() {
                CaseVerdict::BehavesAsFolner { report }
            } else {
                CaseVerdict::Inconclusive { report }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(w: &str) -> ElementCode {
        w.parse::<FreeWord>().unwrap().encode()
    }

    #[test]
    fn interval_program_threshold() {
        let r = verify_sequence_horizon(&GroupDescriptor::Z, &SequenceProgram::Interval, 100, &[code("g0")], 10).unwrap();
        let row = r.rows.iter().find(|r| r.n == 10).unwrap();
        assert_eq!(row.threshold, Threshold::PassesFrom { from: 5 });
    }

    #[test]
    fn constant_singleton_fails_everywhere() {
        let prog = SequenceProgram::Constant { set: vec!["1".into()] };
        let r = verify_sequence_horizon(&GroupDescriptor::Z, &prog, 20, &[code("g0")], 3).unwrap();
        for row in &r.rows {
            assert_eq!(row.threshold, Threshold::Fails { violations: (0..=20).collect() });
        }
    }

    #[test]
    fn whole_finite_group_passes_from_zero() {
        let g = GroupDescriptor::Finite {
            table: vec![vec![0, 1], vec![1, 0]],
        };
        let r = verify_sequence_horizon(&g, &SequenceProgram::Whole, 10, &[code("g0")], 5).unwrap();
        assert!(r.rows.iter().all(|row| row.threshold == Threshold::PassesFrom { from: 0 }));
    }

    #[test]
    fn short_list_is_partial() {
        let prog = SequenceProgram::List {
            sets: vec![vec!["1".into()], vec!["1".into(), "g0".into()]],
        };
        assert_eq!(
            verify_sequence_horizon(&GroupDescriptor::Z, &prog, 5, &[code("g0")], 2),
            Err(Error::Partial(2))
        );
    }

    #[test]
    fn model_parsing_and_enumeration() {
        let m = CeFamilyModel::from_json(r#"{"W":{"1":"all","2":[0,1,2,2]}}"#).unwrap();
        assert_eq!(m.infinite_member(), Some(1));
        assert_eq!(m.pairs(6), vec![(1, 0), (1, 1), (2, 0), (1, 2), (2, 1), (1, 3)]);
        let e = CeFamilyModel::from_json(r#"{"W":{}}"#).unwrap();
        assert_eq!(e.total_pairs(), Some(0));
        assert!(e.pairs(10).is_empty());
        assert!(CeFamilyModel::from_json(r#"{"W":{"0":"all"}}"#).is_err());
        assert!(CeFamilyModel::from_json(r#"{"W":{"1":{"ap":[0,0]}}}"#).is_err());
        let u = CeFamilyModel::from_json(r#"{"W":{"default":"upto_n"}}"#).unwrap();
        assert_eq!(u.infinite_member(), None);
        assert_eq!(u.total_pairs(), None);
        assert_eq!(u.pairs(4), vec![(1, 0), (1, 1), (2, 0), (2, 1)]);
    }

    #[test]
    fn reduction_set_sizes() {
        let m = CeFamilyModel::from_json(r#"{"W":{"1":"all"}}"#).unwrap();
        // Pair 2 is (1, 1): coordinate 1 is exceptional.
        let f = build_reduction_set(&m, 2);
        assert_eq!(f.len(), BigUint::from(15u32));
        assert_eq!(f.factors[&1], vec![-1, 0, 1]);
        let e = CeFamilyModel::from_json(r#"{"W":{"5":[7]}}"#).unwrap();
        assert_eq!(build_reduction_set(&e, 2).len(), BigUint::from(25u32));
        assert_eq!(f.defect(&unit_vector(1)), crate::rational::q(1, 3));
        assert_eq!(f.defect(&unit_vector(3)), Q::one());
    }
}
