//! Means `m_j(x) = Σ_{|i| ≤ j} x(i) / (2j+1)` of binary sequences on ℤ,
//! convergence moduli, a sequence whose means converge arbitrarily slowly,
//! and the binary-expansion embedding of `2^ℤ` into `[0, 1]`.
//!
//! All sequences here are symmetric: `x(-i) = x(i)`.

pub mod expr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{one_over, Q};

pub use expr::NatFunction;

/// Values on `0..=N` followed by a periodic tail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawExplicit", into = "RawExplicit")]
pub struct ExplicitSeq {
    values: Vec<bool>,
    period: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct RawExplicit {
    values: Vec<u8>,
    period: Vec<u8>,
}

fn bits(v: &[u8]) -> Result<Vec<bool>> {
    v.iter()
        .map(|&b| match b {
            0 => Ok(false),
            1 => Ok(true),
            _ => Err(Error::InvalidArgument(format!("sequence entry {b} is not 0 or 1"))),
        })
        .collect()
}

impl TryFrom<RawExplicit> for ExplicitSeq {
    type Error = Error;
    fn try_from(r: RawExplicit) -> Result<Self> {
        ExplicitSeq::new(bits(&r.values)?, bits(&r.period)?)
    }
}

impl From<ExplicitSeq> for RawExplicit {
    fn from(x: ExplicitSeq) -> Self {
        let raw = |v: &[bool]| v.iter().map(|&b| b as u8).collect();
        RawExplicit {
            values: raw(&x.values),
            period: raw(&x.period),
        }
    }
}

impl ExplicitSeq {
    /// `values[i] = x(i)` for `i ≤ N`; `x(N + 1 + r) = period[r mod p]`.
    pub fn new(values: Vec<bool>, period: Vec<bool>) -> Result<Self> {
        if values.is_empty() || period.is_empty() {
            return Err(Error::InvalidArgument("values and period must be nonempty".into()));
        }
        Ok(ExplicitSeq { values, period })
    }

    pub fn constant(bit: bool) -> Self {
        ExplicitSeq {
            values: vec![bit],
            period: vec![bit],
        }
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn period(&self) -> &[bool] {
        &self.period
    }

    fn last_explicit(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    fn at(&self, i: u64) -> bool {
        let n = self.last_explicit();
        if i <= n {
            self.values[i as usize]
        } else {
            self.period[((i - n - 1) % self.period.len() as u64) as usize]
        }
    }

    /// Density of the tail, the limit of the means.
    pub fn density(&self) -> Q {
        let ones = self.period.iter().filter(|&&b| b).count();
        Q::new(ones.into(), self.period.len().into())
    }

    fn ones_upto(&self, j: u64) -> u64 {
        let n = self.last_explicit();
        let head = self.values[1..=(j.min(n) as usize)].iter().filter(|&&b| b).count() as u64;
        if j <= n {
            return head;
        }
        let p = self.period.len() as u64;
        let len = j - n;
        let per = self.period.iter().filter(|&&b| b).count() as u64;
        let rest = self.period[..(len % p) as usize].iter().filter(|&&b| b).count() as u64;
        head + (len / p) * per + rest
    }
}

/// Run-length description of positions `1..=end`, with `x(0) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSegments", into = "RawSegments")]
pub struct Segments {
    /// `(last position, bit)` with strictly increasing positions.
    runs: Vec<(u64, bool)>,
    ones_before: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct RawSegments {
    runs: Vec<(u64, u8)>,
}

impl TryFrom<RawSegments> for Segments {
    type Error = Error;
    fn try_from(r: RawSegments) -> Result<Self> {
        let ok = r.runs.windows(2).all(|w| w[0].0 < w[1].0) && r.runs.first().is_none_or(|r| r.0 >= 1);
        if !ok {
            return Err(Error::InvalidArgument("runs must end at increasing positions ≥ 1".into()));
        }
        let flags = bits(&r.runs.iter().map(|x| x.1).collect::<Vec<_>>())?;
        Ok(Segments::from_runs(r.runs.iter().map(|x| x.0).zip(flags).collect()))
    }
}

impl From<Segments> for RawSegments {
    fn from(s: Segments) -> Self {
        RawSegments {
            runs: s.runs.iter().map(|&(e, b)| (e, b as u8)).collect(),
        }
    }
}

impl Segments {
    fn from_runs(runs: Vec<(u64, bool)>) -> Self {
        let mut ones_before = Vec::with_capacity(runs.len());
        let (mut acc, mut start) = (0u64, 1u64);
        for &(end, bit) in &runs {
            ones_before.push(acc);
            if bit {
                acc += end + 1 - start;
            }
            start = end + 1;
        }
        Segments { runs, ones_before }
    }

    fn push(&mut self, len: u64, bit: bool) {
        if len == 0 {
            return;
        }
        let end = self.end() + len;
        match self.runs.last_mut() {
            Some(last) if last.1 == bit => last.0 = end,
            _ => self.runs.push((end, bit)),
        }
        *self = Segments::from_runs(std::mem::take(&mut self.runs));
    }

    pub fn runs(&self) -> &[(u64, bool)] {
        &self.runs
    }

    pub fn end(&self) -> u64 {
        self.runs.last().map_or(0, |r| r.0)
    }

    fn ones_upto(&self, j: u64) -> u64 {
        let j = j.min(self.end());
        if j == 0 {
            return 0;
        }
        let r = self.runs.partition_point(|&(end, _)| end < j);
        let (_, bit) = self.runs[r];
        self.ones_before[r] + if bit { j + 1 - self.start(r) } else { 0 }
    }

    fn start(&self, r: usize) -> u64 {
        if r == 0 {
            1
        } else {
            self.runs[r - 1].0 + 1
        }
    }

    fn at(&self, i: u64) -> bool {
        let r = self.runs.partition_point(|&(end, _)| end < i);
        self.runs[r].1
    }
}

/// A symmetric binary sequence on ℤ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BinarySeqZ {
    Explicit(ExplicitSeq),
    /// Defined on `[-end, end]` only; its means tend to zero.
    Constructed(Segments),
}

impl BinarySeqZ {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidArgument(e.to_string()))
    }

    /// Largest `j` with `x` known on `[-j, j]`.
    pub fn defined_upto(&self) -> Option<u64> {
        match self {
            BinarySeqZ::Explicit(_) => None,
            BinarySeqZ::Constructed(s) => Some(s.end()),
        }
    }

    pub fn at(&self, i: i64) -> Result<bool> {
        let i = i.unsigned_abs();
        match self {
            BinarySeqZ::Explicit(x) => Ok(x.at(i)),
            BinarySeqZ::Constructed(_) if i == 0 => Ok(true),
            BinarySeqZ::Constructed(s) if i <= s.end() => Ok(s.at(i)),
            BinarySeqZ::Constructed(_) => Err(Error::Partial(i)),
        }
    }

    /// `Σ_{-j ≤ i ≤ j} x(i)`.
    pub fn window_sum(&self, j: u64) -> Result<u64> {
        match self {
            BinarySeqZ::Explicit(x) => Ok(x.values[0] as u64 + 2 * x.ones_upto(j)),
            BinarySeqZ::Constructed(s) if j <= s.end() => Ok(1 + 2 * s.ones_upto(j)),
            BinarySeqZ::Constructed(_) => Err(Error::Partial(j)),
        }
    }

    pub fn limit(&self) -> Q {
        match self {
            BinarySeqZ::Explicit(x) => x.density(),
            BinarySeqZ::Constructed(_) => Q::zero(),
        }
    }
}

/// `m_j(x)` over `{-j, …, j}`.
pub fn mean_at(x: &BinarySeqZ, j: u64) -> Result<Q> {
    Ok(Q::new(x.window_sum(j)?.into(), (2 * j + 1).into()))
}

/// One inductive step of the slow-convergence construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct X0Step {
    pub k: u64,
    pub f_k: u64,
    pub i_prev: u64,
    pub i_prime: u64,
    pub t: u64,
    pub i_k: u64,
    /// `Σ_{|i| ≤ i_k} x(i)`.
    pub window_ones: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct X0Construction {
    pub seq: BinarySeqZ,
    pub steps: Vec<X0Step>,
}

fn overflow(k: u64) -> Error {
    Error::Overflow(format!("construction step {k} exceeds 64-bit positions"))
}

/// Least integer strictly above `num / 2`, for `num` possibly negative.
fn above_half(num: i128) -> i128 {
    num.div_euclid(2) + 1
}

/// Builds `x₀` with `x₀(0) = 1` for steps `k = 3..=k_max`, so that
/// `m_{i_k - 1}(x₀) ≥ 1/k` with `i_k - 1 ≥ f(k)` while the means still tend
/// to zero. The starting block is `i₂ = 5` with bits `0,0,0,1,1` on `1..5`.
pub fn build_x0(f: &NatFunction, k_max: u64) -> Result<X0Construction> {
    let mut seg = Segments::from_runs(vec![(3, false), (5, true)]);
    let (mut i_prev, mut s) = (5u64, 5u64);
    let mut steps = Vec::new();
    for k in 3..=k_max {
        let fk = f.eval_u64(k)?;
        let (kk, fi, si) = (k as i128, fk as i128, s as i128);
        let mass = 2 * fi + si;
        // 1/k ≤ mass / (2f + 2i' + 1) < 1/(k-1), i' ≥ i_prev, least.
        let i_prime = above_half((kk - 1) * mass - 2 * fi - 1).max(i_prev as i128);
        assert!(
            2 * fi + 2 * i_prime + 1 <= kk * mass,
            "sandwich unsatisfiable at k = {k}"
        );
        // mass / (2f + 2t + 1) < 1/k, t > i', least.
        let t = above_half(kk * mass - 2 * fi - 1).max(i_prime + 1);
        let i_k = u64::try_from(fi + t).map_err(|_| overflow(k))?;
        let (i_prime, t) = (i_prime as u64, t as u64);
        seg.push(i_prime - i_prev, false);
        seg.push(fk, true);
        seg.push(i_k - i_prime - fk, false);
        s = s.checked_add(2 * fk).ok_or_else(|| overflow(k))?;
        assert!(
            (s as i128) * kk < 2 * i_k as i128 + 1 && 2 * i_k as i128 - 1 <= (s as i128) * kk,
            "step invariant fails at k = {k}"
        );
        steps.push(X0Step {
            k,
            f_k: fk,
            i_prev,
            i_prime,
            t,
            i_k,
            window_ones: s,
        });
        i_prev = i_k;
    }
    Ok(X0Construction {
        seq: BinarySeqZ::Constructed(seg),
        steps,
    })
}

/// Whether `f(k)` is a convergence bound at `k`, as far as `horizon` shows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ViolationStatus {
    /// `j > f(k)` with `|m_j(x) - m(x)| ≥ 1/k`.
    Found { j: u64 },
    /// No such `j` up to the horizon; says nothing beyond it.
    NoneUpToHorizon,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModulusRow {
    pub k: u64,
    pub f_k: u64,
    /// Least `j` with `|m_{j'} - m| < 1/k` for all `j < j' ≤ horizon`;
    /// `None` when the horizon itself is still off by `1/k`.
    pub j_min: Option<u64>,
    pub violation: ViolationStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModulusTable {
    pub horizon: u64,
    pub rows: Vec<ModulusRow>,
}

impl ModulusTable {
    pub fn violations(&self) -> Vec<(u64, u64)> {
        self.rows
            .iter()
            .filter_map(|r| match r.violation {
                ViolationStatus::Found { j } => Some((r.k, j)),
                ViolationStatus::NoneUpToHorizon => None,
            })
            .collect()
    }
}

/// Last `j ≤ horizon` with `|m_j(x) - m(x)| ≥ 1/k`, for `k = 1..=k_max`.
fn last_far(x: &BinarySeqZ, k_max: u64, horizon: u64) -> Result<Vec<Option<u64>>> {
    let m = x.limit();
    let (p, q) = (m.numer().clone(), m.denom().clone());
    let mut last = vec![None; k_max as usize + 1];
    // Per j the far-off k form an up-set starting at ceil(q b / |a q - p b|).
    let mut from_k: Vec<Option<u64>> = vec![None; k_max as usize + 2];
    for j in 0..=horizon {
        let a = BigInt::from(x.window_sum(j)?);
        let b = BigInt::from(2 * j + 1);
        let diff = (&a * &q - &p * &b).abs();
        if diff.is_zero() {
            continue;
        }
        let need = (&q * &b + &diff - BigInt::one()) / &diff;
        if let Ok(kmin) = u64::try_from(need) {
            if kmin <= k_max {
                from_k[kmin as usize] = Some(j);
            }
        }
    }
    let mut best: Option<u64> = None;
    for k in 1..=k_max as usize {
        best = best.max(from_k[k]);
        last[k] = best;
    }
    Ok(last)
}

/// For `k = 1..=k_max`: the modulus `j_min` of `x` on `[0, horizon]` and a
/// witness that `f` fails as a modulus at `k`, if one exists there.
pub fn modulus_table(x: &BinarySeqZ, f: &NatFunction, k_max: u64, horizon: u64) -> Result<ModulusTable> {
    if let Some(end) = x.defined_upto() {
        if horizon > end {
            return Err(Error::Partial(end + 1));
        }
    }
    let last = last_far(x, k_max, horizon)?;
    let mut rows = Vec::new();
    for k in 1..=k_max {
        let f_k = f.eval_u64(k)?;
        let l = last[k as usize];
        let j_min = match l {
            Some(j) if j == horizon => None,
            Some(j) => Some(j),
            None => Some(0),
        };
        let violation = match l {
            Some(j) if j > f_k => ViolationStatus::Found { j },
            _ => ViolationStatus::NoneUpToHorizon,
        };
        rows.push(ModulusRow { k, f_k, j_min, violation });
    }
    Ok(ModulusTable { horizon, rows })
}

/// `ĝ(n) = Σ_{i ≤ n} Σ_{j ≤ n} g_i(j)` over the listed `g_i` (indices from 1).
pub fn dominator(gs: &[NatFunction], n: u64) -> Result<BigUint> {
    let mut total = BigUint::zero();
    for g in gs.iter().take(n as usize) {
        for j in 1..=n {
            total += g.eval(j)?;
        }
    }
    Ok(total)
}

/// Position in ℤ of the `t`-th element (from 1) of the order `0, -1, 1, -2, 2, …`.
pub fn folner_order_position(t: u64) -> i64 {
    assert!(t >= 1);
    if t % 2 == 0 {
        -((t / 2) as i64)
    } else {
        ((t - 1) / 2) as i64
    }
}

/// `Σ_{t ≤ n} x(g_t) / 2^t` in the order `0, -1, 1, -2, 2, …`.
pub fn real_embed(x: &BinarySeqZ, n: u64) -> Result<Q> {
    let mut num = BigInt::zero();
    for t in 1..=n {
        num <<= 1;
        if x.at(folner_order_position(t))? {
            num += 1;
        }
    }
    Ok(Q::new(num, BigInt::one() << n as usize))
}

/// The exact limit of [`real_embed`] for an eventually periodic sequence.
pub fn real_limit(x: &ExplicitSeq) -> Q {
    let seq = BinarySeqZ::Explicit(x.clone());
    // Digits 1..=2N+1 cover |i| ≤ N; afterwards every block of 2p digits repeats.
    let head = 2 * x.last_explicit() + 1;
    let prefix = real_embed(&seq, head).expect("explicit sequences are total");
    let block_len = 2 * x.period.len();
    let mut block = BigInt::zero();
    for b in x.period.iter().flat_map(|&b| [b, b]) {
        block = (block << 1) + BigInt::from(b as u8);
    }
    let repeat = (BigInt::one() << block_len) - 1;
    prefix + Q::new(block, repeat * (BigInt::one() << head as usize))
}

/// A nearby sequence whose mean differs by more than one half.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discontinuity {
    /// Digits kept from `x`.
    pub n: u64,
    pub x_prime: ExplicitSeq,
    #[serde(with = "crate::rational::serde_text")]
    pub r: Q,
    #[serde(with = "crate::rational::serde_text")]
    pub r_prime: Q,
    #[serde(with = "crate::rational::serde_text")]
    pub m: Q,
    #[serde(with = "crate::rational::serde_text")]
    pub m_prime: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum WitnessOutcome {
    Witness(Discontinuity),
    Refused { reason: String },
}

/// Keeps the first `n = 2i + 1` digits of `x` and replaces the tail by all
/// zeros when `m(x) > 1/2`, all ones when `m(x) < 1/2`. `n` is least with
/// `q < P_n`, `P_n + 2^{-n} < q'` and `2^{-n} < ε`; searched up to `max_n`.
pub fn discontinuity_witness(x: &ExplicitSeq, q: &Q, q_prime: &Q, eps: &Q, max_n: u64) -> Result<WitnessOutcome> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("ε must be positive".into()));
    }
    let r = real_limit(x);
    if !(q < &r && &r < q_prime) {
        return Err(Error::InvalidArgument(format!(
            "the sequence represents {} outside the interval",
            crate::rational::to_text(&r)
        )));
    }
    let m = x.density();
    let half = one_over(2);
    if m == half {
        return Ok(WitnessOutcome::Refused {
            reason: "m(x) = 1/2: neither constant tail moves the mean by more than 1/2".into(),
        });
    }
    let tail = m < half;
    let seq = BinarySeqZ::Explicit(x.clone());
    let mut i = 0u64;
    loop {
        let n = 2 * i + 1;
        if n > max_n {
            return Ok(WitnessOutcome::Refused {
                reason: format!("no prefix of length ≤ {max_n} fits: need q < P_n, P_n + 2^-n < q' and 2^-n < ε"),
            });
        }
        let p_n = real_embed(&seq, n)?;
        let step = Q::new(BigInt::one(), BigInt::one() << n as usize);
        if q < &p_n && &(&p_n + &step) < q_prime && &step < eps {
            let values = (0..=i).map(|v| x.at(v)).collect();
            let x_prime = ExplicitSeq::new(values, vec![tail])?;
            let r_prime = if tail { &p_n + &step } else { p_n };
            let m_prime = x_prime.density();
            debug_assert!((&r - &r_prime).abs() < *eps && (&m - &m_prime).abs() > half);
            return Ok(WitnessOutcome::Witness(Discontinuity {
                n,
                x_prime,
                r,
                r_prime,
                m,
                m_prime,
            }));
        }
        i += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn explicit(values: &[u8], period: &[u8]) -> BinarySeqZ {
        BinarySeqZ::Explicit(ExplicitSeq::new(bits(values).unwrap(), bits(period).unwrap()).unwrap())
    }

    #[test]
    fn means_examples() {
        assert_eq!(mean_at(&explicit(&[1], &[0]), 5).unwrap(), q(1, 11));
        assert_eq!(mean_at(&explicit(&[1], &[1]), 17).unwrap(), Q::one());
        let base = BinarySeqZ::Constructed(Segments::from_runs(vec![(3, false), (5, true)]));
        assert_eq!(mean_at(&base, 5).unwrap(), q(5, 11));
        assert_eq!(mean_at(&base, 6), Err(Error::Partial(6)));
    }

    #[test]
    fn construction_small_case() {
        let c = build_x0(&"8".parse().unwrap(), 3).unwrap();
        let s = &c.steps[0];
        assert_eq!((s.i_prime, s.t, s.i_k), (13, 24, 32));
        let BinarySeqZ::Constructed(seg) = &c.seq else { panic!() };
        assert_eq!(seg.runs(), &[(3, false), (5, true), (13, false), (21, true), (32, false)]);
    }

    #[test]
    fn segment_sums_match_bits() {
        let c = build_x0(&"k^2".parse().unwrap(), 7).unwrap();
        let end = c.seq.defined_upto().unwrap();
        let mut acc = 1u64;
        for j in 1..=end {
            acc += 2 * c.seq.at(j as i64).unwrap() as u64;
            assert_eq!(c.seq.window_sum(j).unwrap(), acc);
        }
    }

    #[test]
    fn explicit_prefix_sums() {
        let x = explicit(&[0, 1, 1, 0], &[1, 0, 0]);
        let mut acc = 0u64;
        for j in 0..40 {
            acc += if j == 0 { x.at(0).unwrap() as u64 } else { 2 * x.at(j).unwrap() as u64 };
            assert_eq!(x.window_sum(j as u64).unwrap(), acc);
        }
        assert_eq!(x.limit(), q(1, 3));
    }

    #[test]
    fn zero_sequence_has_no_violations() {
        let t = modulus_table(&explicit(&[0], &[0]), &"k".parse().unwrap(), 8, 200).unwrap();
        assert!(t.violations().is_empty());
        assert!(t.rows.iter().all(|r| r.j_min == Some(0)));
    }

    #[test]
    fn constructed_sequence_violates_its_function() {
        let f: NatFunction = "2^k".parse().unwrap();
        let c = build_x0(&f, 10).unwrap();
        let t = modulus_table(&c.seq, &f, 10, c.seq.defined_upto().unwrap()).unwrap();
        let expected: Vec<(u64, u64)> = c.steps.iter().map(|s| (s.k, s.i_k - 1)).collect();
        assert_eq!(t.violations(), expected);
        let mins: Vec<_> = t.rows.iter().map(|r| r.j_min.unwrap()).collect();
        assert!(mins.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn dominator_arithmetic() {
        let gs = vec!["k".parse().unwrap()];
        assert_eq!(dominator(&gs, 3).unwrap(), BigUint::from(6u32));
        let three: Vec<NatFunction> = (0..3).map(|_| "k".parse().unwrap()).collect();
        assert_eq!(dominator(&three, 3).unwrap(), BigUint::from(18u32));
    }

    #[test]
    fn embedding_examples() {
        assert_eq!(real_embed(&explicit(&[0], &[0]), 30).unwrap(), Q::zero());
        assert_eq!(real_embed(&explicit(&[1], &[0]), 30).unwrap(), q(1, 2));
        let ones = ExplicitSeq::constant(true);
        assert_eq!(real_limit(&ones), Q::one());
        assert_eq!(real_limit(&ExplicitSeq::new(vec![true], vec![false]).unwrap()), q(1, 2));
        let x = ExplicitSeq::new(vec![false, true], vec![true, false]).unwrap();
        let approx = real_embed(&BinarySeqZ::Explicit(x.clone()), 60).unwrap();
        assert!((real_limit(&x) - approx).abs() < q(1, 1 << 59));
    }

    #[test]
    fn witness_flips_the_tail() {
        let x = ExplicitSeq::new(vec![false, false], vec![true]).unwrap();
        let eps = q(1, 1024);
        let WitnessOutcome::Witness(w) = discontinuity_witness(&x, &Q::zero(), &Q::one(), &eps, 200).unwrap() else {
            panic!()
        };
        assert_eq!(w.m_prime, Q::zero());
        assert!((&w.r - &w.r_prime).abs() < eps);
        assert_eq!(real_limit(&w.x_prime), w.r_prime);
        let half = ExplicitSeq::new(vec![true], vec![true, false]).unwrap();
        assert!(matches!(
            discontinuity_witness(&half, &Q::zero(), &Q::one(), &eps, 200).unwrap(),
            WitnessOutcome::Refused { .. }
        ));
    }
}
