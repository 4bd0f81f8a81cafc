//! Concrete numbered groups. Each family fixes where generator `g_i` goes;
//! evaluation of a code is then the induced homomorphism from the free group.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Q;
use crate::word::{ElementCode, FreeWord, Letter};

/// A group family together with its generator-image rule.
///
/// | family | `g_i` ↦ |
/// |---|---|
/// | `Z` | 1 |
/// | `Zd` | e_{i mod d} |
/// | `DirectSumZ` | e_i |
/// | `Lamplighter` | i = 0: shift, otherwise the lamp at 0 |
/// | `Heisenberg` | g0 ↦ x, g1 ↦ y, rest ↦ central z |
/// | `Finite` | the (i mod (k−1))-th non-identity element |
/// | `CircleRationals` | 1/(i+1) mod 1 |
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum GroupDescriptor {
    Z,
    Zd { d: usize },
    DirectSumZ,
    Lamplighter,
    Heisenberg,
    Finite { table: Vec<Vec<usize>> },
    CircleRationals,
}

/// Unique normal form of a group element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CanonicalElement {
    Int(BigInt),
    Vector(Vec<BigInt>),
    /// Nonzero coordinates of an element of ⊕ℤ.
    Sparse(BTreeMap<BigUint, BigInt>),
    Lamplighter { lamps: BTreeSet<BigInt>, pos: BigInt },
    /// `[a, b, c]` with product `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')`.
    Heisenberg([BigInt; 3]),
    Finite(usize),
    /// A rational in [0, 1).
    Circle(BigRational),
}

/// How distances are measured on a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricKind {
    /// The {0,1}-metric.
    Discrete,
    /// Arc length on ℝ/ℤ, at most 1/2.
    Arc,
}

impl GroupDescriptor {
    pub fn from_json(s: &str) -> Result<Self> {
        let desc: GroupDescriptor =
            serde_json::from_str(s).map_err(|e| Error::Descriptor(e.to_string()))?;
        desc.validate()?;
        Ok(desc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("descriptor serializes")
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GroupDescriptor::Zd { d } if *d == 0 => {
                Err(Error::Descriptor("Zd needs d >= 1".into()))
            }
            GroupDescriptor::Finite { table } => validate_table(table),
            _ => Ok(()),
        }
    }

    pub fn metric_kind(&self) -> MetricKind {
        match self {
            GroupDescriptor::CircleRationals => MetricKind::Arc,
            _ => MetricKind::Discrete,
        }
    }

    /// Group order for finite families.
    pub fn order(&self) -> Option<usize> {
        match self {
            GroupDescriptor::Finite { table } => Some(table.len()),
            _ => None,
        }
    }

    pub fn identity(&self) -> CanonicalElement {
        use CanonicalElement as E;
        match self {
            GroupDescriptor::Z => E::Int(BigInt::zero()),
            GroupDescriptor::Zd { d } => E::Vector(vec![BigInt::zero(); *d]),
            GroupDescriptor::DirectSumZ => E::Sparse(BTreeMap::new()),
            GroupDescriptor::Lamplighter => E::Lamplighter {
                lamps: BTreeSet::new(),
                pos: BigInt::zero(),
            },
            GroupDescriptor::Heisenberg => E::Heisenberg(Default::default()),
            GroupDescriptor::Finite { table } => E::Finite(finite_identity(table)),
            GroupDescriptor::CircleRationals => E::Circle(BigRational::zero()),
        }
    }

    pub fn generator_image(&self, i: &BigUint) -> CanonicalElement {
        use CanonicalElement as E;
        match self {
            GroupDescriptor::Z => E::Int(BigInt::one()),
            GroupDescriptor::Zd { d } => {
                let k = (i % BigUint::from(*d)).to_usize().expect("index below d");
                let mut v = vec![BigInt::zero(); *d];
                v[k] = BigInt::one();
                E::Vector(v)
            }
            GroupDescriptor::DirectSumZ => E::Sparse(BTreeMap::from([(i.clone(), BigInt::one())])),
            GroupDescriptor::Lamplighter => {
                if i.is_zero() {
                    E::Lamplighter {
                        lamps: BTreeSet::new(),
                        pos: BigInt::one(),
                    }
                } else {
                    E::Lamplighter {
                        lamps: BTreeSet::from([BigInt::zero()]),
                        pos: BigInt::zero(),
                    }
                }
            }
            GroupDescriptor::Heisenberg => {
                let mut v: [BigInt; 3] = Default::default();
                let slot = if i.is_zero() {
                    0
                } else if i.is_one() {
                    1
                } else {
                    2
                };
                v[slot] = BigInt::one();
                E::Heisenberg(v)
            }
            GroupDescriptor::Finite { table } => {
                let others = finite_non_identity(table);
                if others.is_empty() {
                    E::Finite(finite_identity(table))
                } else {
                    let k = (i % BigUint::from(others.len())).to_usize().expect("small index");
                    E::Finite(others[k])
                }
            }
            GroupDescriptor::CircleRationals => {
                let den = BigInt::from_biguint(Sign::Plus, i + 1u32);
                E::Circle(frac(&BigRational::new(BigInt::one(), den)))
            }
        }
    }

    pub fn mul(&self, a: &CanonicalElement, b: &CanonicalElement) -> CanonicalElement {
        use CanonicalElement as E;
        match (self, a, b) {
            (GroupDescriptor::Z, E::Int(x), E::Int(y)) => E::Int(x + y),
            (GroupDescriptor::Zd { .. }, E::Vector(x), E::Vector(y)) => {
                E::Vector(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            (GroupDescriptor::DirectSumZ, E::Sparse(x), E::Sparse(y)) => {
                let mut out = x.clone();
                for (k, v) in y {
                    let e = out.entry(k.clone()).or_insert_with(BigInt::zero);
                    *e += v;
                    if e.is_zero() {
                        out.remove(k);
                    }
                }
                E::Sparse(out)
            }
            (
                GroupDescriptor::Lamplighter,
                E::Lamplighter { lamps: f, pos: p },
                E::Lamplighter { lamps: g, pos: q },
            ) => {
                let mut lamps = f.clone();
                for t in g {
                    let s = t + p;
                    if !lamps.remove(&s) {
                        lamps.insert(s);
                    }
                }
                E::Lamplighter { lamps, pos: p + q }
            }
            (GroupDescriptor::Heisenberg, E::Heisenberg(x), E::Heisenberg(y)) => E::Heisenberg([
                &x[0] + &y[0],
                &x[1] + &y[1],
                &x[2] + &y[2] + &x[0] * &y[1],
            ]),
            (GroupDescriptor::Finite { table }, E::Finite(x), E::Finite(y)) => {
                E::Finite(table[*x][*y])
            }
            (GroupDescriptor::CircleRationals, E::Circle(x), E::Circle(y)) => E::Circle(frac(&(x + y))),
            _ => panic!("element does not belong to {self:?}"),
        }
    }

    pub fn inverse(&self, a: &CanonicalElement) -> CanonicalElement {
        use CanonicalElement as E;
        match (self, a) {
            (GroupDescriptor::Z, E::Int(x)) => E::Int(-x),
            (GroupDescriptor::Zd { .. }, E::Vector(x)) => E::Vector(x.iter().map(|v| -v).collect()),
            (GroupDescriptor::DirectSumZ, E::Sparse(x)) => {
                E::Sparse(x.iter().map(|(k, v)| (k.clone(), -v)).collect())
            }
            (GroupDescriptor::Lamplighter, E::Lamplighter { lamps, pos }) => E::Lamplighter {
                lamps: lamps.iter().map(|t| t - pos).collect(),
                pos: -pos,
            },
            (GroupDescriptor::Heisenberg, E::Heisenberg(x)) => {
                E::Heisenberg([-&x[0], -&x[1], &x[0] * &x[1] - &x[2]])
            }
            (GroupDescriptor::Finite { table }, E::Finite(x)) => {
                let id = finite_identity(table);
                E::Finite((0..table.len()).find(|&y| table[*x][y] == id).expect("group table"))
            }
            (GroupDescriptor::CircleRationals, E::Circle(x)) => E::Circle(frac(&-x)),
            _ => panic!("element does not belong to {self:?}"),
        }
    }

    pub fn pow(&self, a: &CanonicalElement, e: &BigInt) -> CanonicalElement {
        use CanonicalElement as E;
        match (self, a) {
            (GroupDescriptor::Z, E::Int(x)) => E::Int(x * e),
            (GroupDescriptor::Zd { .. }, E::Vector(x)) => E::Vector(x.iter().map(|v| v * e).collect()),
            (GroupDescriptor::DirectSumZ, E::Sparse(x)) => {
                if e.is_zero() {
                    E::Sparse(BTreeMap::new())
                } else {
                    E::Sparse(x.iter().map(|(k, v)| (k.clone(), v * e)).collect())
                }
            }
            (GroupDescriptor::CircleRationals, E::Circle(x)) => {
                E::Circle(frac(&(x * BigRational::from_integer(e.clone()))))
            }
            _ => {
                let base = if e.is_negative() { self.inverse(a) } else { a.clone() };
                let mut result = self.identity();
                let mut sq = base;
                let mut k = e.magnitude().clone();
                while !k.is_zero() {
                    if k.bit(0) {
                        result = self.mul(&result, &sq);
                    }
                    k >>= 1u32;
                    if !k.is_zero() {
                        sq = self.mul(&sq, &sq);
                    }
                }
                result
            }
        }
    }

    pub fn eval_word(&self, w: &FreeWord) -> CanonicalElement {
        w.letters().iter().fold(self.identity(), |acc, l| {
            let g = self.generator_image(&l.gen);
            self.mul(&acc, &self.pow(&g, &l.exp))
        })
    }

    /// ν(c): the group element named by a code.
    pub fn eval(&self, c: &ElementCode) -> CanonicalElement {
        self.eval_word(&c.decode())
    }

    /// Decides ν(a) = ν(b).
    pub fn equal(&self, a: &ElementCode, b: &ElementCode) -> bool {
        self.eval(a) == self.eval(b)
    }

    /// A word evaluating to `x`: a section of ν used to name elements by codes.
    pub fn word_for(&self, x: &CanonicalElement) -> FreeWord {
        use CanonicalElement as E;
        let gen = |i: usize| BigUint::from(i);
        match (self, x) {
            (GroupDescriptor::Z, E::Int(v)) => FreeWord::power(0u32, v.clone()),
            (GroupDescriptor::Zd { .. }, E::Vector(v)) => FreeWord::reduce(
                v.iter().enumerate().map(|(i, e)| Letter { gen: gen(i), exp: e.clone() }),
            ),
            (GroupDescriptor::DirectSumZ, E::Sparse(m)) => FreeWord::reduce(
                m.iter().map(|(i, e)| Letter { gen: i.clone(), exp: e.clone() }),
            ),
            (GroupDescriptor::Lamplighter, E::Lamplighter { lamps, pos }) => {
                let mut letters = Vec::new();
                for t in lamps {
                    letters.push(Letter { gen: gen(0), exp: t.clone() });
                    letters.push(Letter { gen: gen(1), exp: BigInt::one() });
                    letters.push(Letter { gen: gen(0), exp: -t });
                }
                letters.push(Letter { gen: gen(0), exp: pos.clone() });
                FreeWord::reduce(letters)
            }
            (GroupDescriptor::Heisenberg, E::Heisenberg([a, b, c])) => FreeWord::reduce([
                Letter { gen: gen(0), exp: a.clone() },
                Letter { gen: gen(1), exp: b.clone() },
                Letter { gen: gen(2), exp: c - a * b },
            ]),
            (GroupDescriptor::Finite { table }, E::Finite(x)) => {
                match finite_non_identity(table).iter().position(|y| y == x) {
                    Some(j) => FreeWord::power(j, 1),
                    None => FreeWord::identity(),
                }
            }
            (GroupDescriptor::CircleRationals, E::Circle(r)) => {
                if r.is_zero() {
                    FreeWord::identity()
                } else {
                    let g = r.denom().magnitude() - 1u32;
                    FreeWord::power(g, r.numer().clone())
                }
            }
            _ => panic!("element does not belong to {self:?}"),
        }
    }

    /// The code of [`word_for`](Self::word_for); injective on elements.
    pub fn code_for(&self, x: &CanonicalElement) -> ElementCode {
        self.word_for(x).encode()
    }

    /// Canonical elements within `radius`: an interval for ℤ, a box for ℤᵈ,
    /// the whole group for finite families, and a word-length ball otherwise.
    pub fn ball(&self, radius: u64) -> Result<Vec<CanonicalElement>> {
        use CanonicalElement as E;
        let r = radius as i64;
        match self {
            GroupDescriptor::Z => Ok((-r..=r).map(|v| E::Int(v.into())).collect()),
            GroupDescriptor::Zd { d } => {
                let mut out = vec![vec![]];
                for _ in 0..*d {
                    out = out
                        .into_iter()
                        .flat_map(|p: Vec<BigInt>| {
                            (-r..=r).map(move |v| {
                                let mut q = p.clone();
                                q.push(v.into());
                                q
                            })
                        })
                        .collect();
                }
                Ok(out.into_iter().map(E::Vector).collect())
            }
            GroupDescriptor::Finite { table } => Ok((0..table.len()).map(E::Finite).collect()),
            GroupDescriptor::CircleRationals => Err(Error::Unsupported(
                "the circle has no finite balls; use metric operations".into(),
            )),
            GroupDescriptor::DirectSumZ | GroupDescriptor::Lamplighter | GroupDescriptor::Heisenberg => {
                let gens: Vec<CanonicalElement> = match self {
                    GroupDescriptor::DirectSumZ => {
                        (0..radius.max(1)).map(|i| self.generator_image(&BigUint::from(i))).collect()
                    }
                    _ => (0..2u32).map(|i| self.generator_image(&BigUint::from(i))).collect(),
                };
                Ok(self.cayley_ball(&gens, radius))
            }
        }
    }

    /// True when `ball(radius)` is all of G.
    pub fn ball_is_whole_group(&self, _radius: u64) -> bool {
        matches!(self, GroupDescriptor::Finite { .. })
    }

    fn cayley_ball(&self, gens: &[CanonicalElement], radius: u64) -> Vec<CanonicalElement> {
        let mut steps: Vec<CanonicalElement> = gens.to_vec();
        steps.extend(gens.iter().map(|g| self.inverse(g)));
        let mut seen: HashSet<CanonicalElement> = HashSet::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::from([(self.identity(), 0u64)]);
        seen.insert(self.identity());
        while let Some((x, d)) = queue.pop_front() {
            order.push(x.clone());
            if d == radius {
                continue;
            }
            for s in &steps {
                let y = self.mul(s, &x);
                if seen.insert(y.clone()) {
                    queue.push_back((y, d + 1));
                }
            }
        }
        order
    }

    /// Distance under the family's right-invariant metric (exact).
    pub fn distance(&self, a: &CanonicalElement, b: &CanonicalElement) -> Q {
        match (self.metric_kind(), a, b) {
            (MetricKind::Arc, CanonicalElement::Circle(x), CanonicalElement::Circle(y)) => {
                let delta = (x - y).abs();
                let other = BigRational::one() - &delta;
                if delta < other {
                    delta
                } else {
                    other
                }
            }
            _ => {
                if a == b {
                    Q::zero()
                } else {
                    Q::one()
                }
            }
        }
    }
}

fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

fn finite_identity(table: &[Vec<usize>]) -> usize {
    (0..table.len())
        .find(|&e| (0..table.len()).all(|x| table[e][x] == x && table[x][e] == x))
        .expect("validated table has an identity")
}

fn finite_non_identity(table: &[Vec<usize>]) -> Vec<usize> {
    let id = finite_identity(table);
    (0..table.len()).filter(|&x| x != id).collect()
}

fn validate_table(table: &[Vec<usize>]) -> Result<()> {
    let k = table.len();
    let bad = |m: &str| Err(Error::Descriptor(format!("Finite table: {m}")));
    if k == 0 {
        return bad("empty");
    }
    if table.iter().any(|row| row.len() != k || row.iter().any(|&v| v >= k)) {
        return bad("must be a square table over 0..k");
    }
    let Some(id) =
        (0..k).find(|&e| (0..k).all(|x| table[e][x] == x && table[x][e] == x))
    else {
        return bad("no identity element");
    };
    for x in 0..k {
        if !(0..k).any(|y| table[x][y] == id && table[y][x] == id) {
            return bad("an element lacks an inverse");
        }
        for y in 0..k {
            for z in 0..k {
                if table[table[x][y]][z] != table[x][table[y][z]] {
                    return bad("not associative");
                }
            }
        }
    }
    Ok(())
}

impl fmt::Display for CanonicalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CanonicalElement as E;
        let join = |v: &mut dyn Iterator<Item = String>| v.collect::<Vec<_>>().join(",");
        match self {
            E::Int(v) => write!(f, "{v}"),
            E::Vector(v) => write!(f, "({})", join(&mut v.iter().map(|x| x.to_string()))),
            E::Sparse(m) => write!(f, "{{{}}}", join(&mut m.iter().map(|(k, v)| format!("{k}:{v}")))),
            E::Lamplighter { lamps, pos } => {
                write!(f, "[{}]@{pos}", join(&mut lamps.iter().map(|x| x.to_string())))
            }
            E::Heisenberg([a, b, c]) => write!(f, "[{a},{b},{c}]"),
            E::Finite(x) => write!(f, "#{x}"),
            E::Circle(r) => write!(f, "{}", crate::rational::to_text(r)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(s: &str) -> ElementCode {
        s.parse::<FreeWord>().unwrap().encode()
    }

    fn z3() -> GroupDescriptor {
        GroupDescriptor::Finite {
            table: vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
        }
    }

    #[test]
    fn eval_examples() {
        let z = GroupDescriptor::Z;
        assert_eq!(z.eval(&code("g0^3")), CanonicalElement::Int(3.into()));
        assert_eq!(z.eval(&code("g0*g1")), CanonicalElement::Int(2.into()));
        let ds = GroupDescriptor::DirectSumZ;
        assert_eq!(
            ds.eval(&code("g2*g2")),
            CanonicalElement::Sparse(BTreeMap::from([(BigUint::from(2u32), BigInt::from(2))]))
        );
        assert_eq!(z.eval(&ElementCode::identity()), z.identity());
    }

    #[test]
    fn equal_examples() {
        let z = GroupDescriptor::Z;
        assert!(z.equal(&code("g0*g0"), &code("g1*g0")));
        assert!(!z.equal(&code("g0"), &code("g0^2")));
        assert!(z3().equal(&code("g0^3"), &ElementCode::identity()));
    }

    #[test]
    fn descriptor_json() {
        let d = GroupDescriptor::from_json(r#"{"family":"Zd","d":2}"#).unwrap();
        assert_eq!(d, GroupDescriptor::Zd { d: 2 });
        assert_eq!(
            GroupDescriptor::from_json(r#"{"family":"CircleRationals"}"#).unwrap(),
            GroupDescriptor::CircleRationals
        );
        assert!(GroupDescriptor::from_json(r#"{"family":"Nope"}"#).is_err());
        assert!(GroupDescriptor::from_json(r#"{"family":"Finite","table":[[0,1],[0,1]]}"#).is_err());
        assert!(GroupDescriptor::from_json(r#"{"family":"Finite","table":[[0,1],[1,0]]}"#).is_ok());
        assert!(GroupDescriptor::from_json(r#"{"family":"Zd","d":0}"#).is_err());
    }

    #[test]
    fn heisenberg_is_nonabelian() {
        let h = GroupDescriptor::Heisenberg;
        let xy = h.eval(&code("g0*g1"));
        let yx = h.eval(&code("g1*g0"));
        assert_ne!(xy, yx);
        let comm = h.eval(&code("g0*g1*g0^-1*g1^-1"));
        assert_eq!(comm, h.eval(&code("g2")));
    }

    #[test]
    fn lamplighter_lamp_is_involution() {
        let l = GroupDescriptor::Lamplighter;
        assert!(l.equal(&code("g1^2"), &ElementCode::identity()));
        assert!(l.equal(&code("g1"), &code("g5")));
        assert!(!l.equal(&code("g0*g1*g0^-1"), &code("g1")));
    }

    #[test]
    fn circle_generators_are_dense_fractions() {
        let c = GroupDescriptor::CircleRationals;
        assert_eq!(c.eval(&code("g0")), c.identity());
        assert_eq!(c.eval(&code("g2^2")), CanonicalElement::Circle(crate::rational::q(2, 3)));
        assert_eq!(
            c.distance(&c.eval(&code("g2")), &c.eval(&code("g1"))),
            crate::rational::q(1, 6)
        );
    }

    #[test]
    fn words_for_elements_evaluate_back() {
        let families = [
            GroupDescriptor::Z,
            GroupDescriptor::Zd { d: 3 },
            GroupDescriptor::DirectSumZ,
            GroupDescriptor::Lamplighter,
            GroupDescriptor::Heisenberg,
            z3(),
            GroupDescriptor::CircleRationals,
        ];
        for desc in &families {
            for n in 0..400u64 {
                let x = desc.eval(&ElementCode::from(n));
                assert_eq!(desc.eval_word(&desc.word_for(&x)), x, "{desc:?} code {n}");
            }
        }
    }

    #[test]
    fn balls() {
        assert_eq!(GroupDescriptor::Z.ball(2).unwrap().len(), 5);
        assert_eq!(GroupDescriptor::Zd { d: 2 }.ball(1).unwrap().len(), 9);
        assert_eq!(z3().ball(0).unwrap().len(), 3);
        // Lamplighter ball of radius 1: identity, shift±1, lamp.
        assert_eq!(GroupDescriptor::Lamplighter.ball(1).unwrap().len(), 4);
        assert!(GroupDescriptor::CircleRationals.ball(1).is_err());
    }
}
