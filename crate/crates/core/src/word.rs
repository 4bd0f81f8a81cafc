//! The enumerated free group (ℕ, *, ⁻¹, 1) on generators g0, g1, g2, …
//!
//! Reduced words are put in bijection with ℕ. A nonempty word of length L is
//! coded as `pair(L - 1, tuple)` where each letter contributes
//! `pair(generator step, exponent code)`. Generator steps skip the previous
//! letter's generator, so every tuple decodes to a reduced word. Codes 0 and
//! 1 are swapped at the end so that the identity gets code 1.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pairing::{decode_tuple, encode_tuple, nat_to_nonzero, nonzero_to_nat, pair, unpair};

/// One letter `g_gen^exp` of a free word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: BigUint,
    pub exp: BigInt,
}

impl Letter {
    pub fn new(gen: impl Into<BigUint>, exp: impl Into<BigInt>) -> Self {
        Letter {
            gen: gen.into(),
            exp: exp.into(),
        }
    }
}

/// A reduced word in the free group on countably many generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord::default()
    }

    /// Builds a word from letters that must already be reduced.
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        for (i, l) in letters.iter().enumerate() {
            if l.exp.is_zero() || (i > 0 && letters[i - 1].gen == l.gen) {
                return Err(Error::NotReduced(i));
            }
        }
        Ok(FreeWord { letters })
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if l.exp.is_zero() {
                continue;
            }
            match out.last_mut() {
                Some(top) if top.gen == l.gen => {
                    top.exp += l.exp;
                    if top.exp.is_zero() {
                        out.pop();
                    }
                }
                _ => out.push(l),
            }
        }
        FreeWord { letters: out }
    }

    /// `g_gen^exp`, or the identity when `exp == 0`.
    pub fn power(gen: impl Into<BigUint>, exp: impl Into<BigInt>) -> Self {
        FreeWord::reduce([Letter::new(gen, exp)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        FreeWord::reduce(self.letters.iter().chain(other.letters.iter()).cloned())
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    gen: l.gen.clone(),
                    exp: -&l.exp,
                })
                .collect(),
        }
    }

    pub fn encode(&self) -> ElementCode {
        if self.letters.is_empty() {
            return ElementCode::identity();
        }
        let mut prev: Option<&BigUint> = None;
        let cells: Vec<BigUint> = self
            .letters
            .iter()
            .map(|l| {
                let step = match prev {
                    Some(p) if &l.gen > p => &l.gen - 1u32,
                    _ => l.gen.clone(),
                };
                prev = Some(&l.gen);
                pair(&step, &nonzero_to_nat(&l.exp))
            })
            .collect();
        let raw = pair(&BigUint::from(self.letters.len() - 1), &encode_tuple(&cells)) + 1u32;
        ElementCode(swap01(raw))
    }

    pub fn decode(code: &ElementCode) -> FreeWord {
        let raw = swap01(code.0.clone());
        if raw.is_zero() {
            return FreeWord::identity();
        }
        let (len_minus_one, tuple) = unpair(&(raw - 1u32));
        let len = usize::try_from(&len_minus_one).expect("word length exceeds address space");
        let mut letters: Vec<Letter> = Vec::with_capacity(len + 1);
        for cell in decode_tuple(&tuple, len + 1) {
            let (step, z) = unpair(&cell);
            let gen = match letters.last() {
                Some(p) if step >= p.gen => step + 1u32,
                _ => step,
            };
            letters.push(Letter {
                gen,
                exp: nat_to_nonzero(&z),
            });
        }
        FreeWord { letters }
    }
}

fn swap01(n: BigUint) -> BigUint {
    if n.is_zero() {
        BigUint::one()
    } else if n.is_one() {
        BigUint::zero()
    } else {
        n
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if l.exp.is_one() {
                write!(f, "g{}", l.gen)?;
            } else {
                write!(f, "g{}^{}", l.gen, l.exp)?;
            }
        }
        Ok(())
    }
}

impl FromStr for FreeWord {
    type Err = Error;

    /// Parses `g0^2*g1^-1`. `1`, `e` and the empty string denote the identity.
    /// Adjacent letters on the same generator are merged.
    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::WordSyntax {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let t = s.trim();
        if t.is_empty() || t == "1" || t == "e" {
            return Ok(FreeWord::identity());
        }
        let mut letters = Vec::new();
        for part in t.split('*') {
            let part = part.trim();
            let body = part
                .strip_prefix('g')
                .ok_or_else(|| err("each factor must start with `g`"))?;
            let (gen, exp) = match body.split_once('^') {
                Some((g, e)) => (g, e),
                None => (body, "1"),
            };
            let gen: BigUint = gen.parse().map_err(|_| err("bad generator index"))?;
            let exp: BigInt = exp.parse().map_err(|_| err("bad exponent"))?;
            letters.push(Letter { gen, exp });
        }
        Ok(FreeWord::reduce(letters))
    }
}

/// A natural number naming an element of the enumerated free group.
/// Serialized as a decimal string; deserialization also accepts a JSON integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementCode(pub BigUint);

impl Serialize for ElementCode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for ElementCode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(ElementCode::from(v)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl FromStr for ElementCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .parse::<BigUint>()
            .map(ElementCode)
            .map_err(|_| Error::InvalidArgument(format!("`{s}` is not a natural number")))
    }
}

impl ElementCode {
    pub fn identity() -> Self {
        ElementCode(BigUint::one())
    }

    pub fn decode(&self) -> FreeWord {
        FreeWord::decode(self)
    }

    pub fn to_u64(&self) -> Option<u64> {
        u64::try_from(&self.0).ok()
    }
}

impl From<u64> for ElementCode {
    fn from(v: u64) -> Self {
        ElementCode(BigUint::from(v))
    }
}

impl fmt::Display for ElementCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn encode_word(w: &FreeWord) -> ElementCode {
    w.encode()
}

pub fn decode_word(c: &ElementCode) -> FreeWord {
    FreeWord::decode(c)
}

/// The group operation on codes: concatenate, then reduce.
pub fn star(a: &ElementCode, b: &ElementCode) -> ElementCode {
    a.decode().concat(&b.decode()).encode()
}

pub fn inv(a: &ElementCode) -> ElementCode {
    a.decode().inverse().encode()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FreeWord {
        s.parse().unwrap()
    }

    #[test]
    fn identity_has_code_one() {
        assert_eq!(FreeWord::identity().encode(), ElementCode::from(1));
        assert!(ElementCode::from(1).decode().is_identity());
    }

    #[test]
    fn single_letter_round_trip() {
        let g = w("g0");
        assert_eq!(g.encode().decode(), g);
        assert_eq!(g.encode(), ElementCode::from(0));
    }

    #[test]
    fn exhaustive_round_trip_below_ten_thousand() {
        for n in 0..10_000u64 {
            let c = ElementCode::from(n);
            let word = c.decode();
            assert!(FreeWord::new(word.letters().to_vec()).is_ok(), "code {n} not reduced");
            assert_eq!(word.encode(), c);
        }
    }

    #[test]
    fn encode_rejects_unreduced() {
        let bad = vec![Letter::new(0u32, 1), Letter::new(0u32, 2)];
        assert_eq!(FreeWord::new(bad), Err(Error::NotReduced(1)));
        assert_eq!(FreeWord::new(vec![Letter::new(3u32, 0)]), Err(Error::NotReduced(0)));
    }

    #[test]
    fn star_examples() {
        let a = w("g0").encode();
        assert_eq!(star(&a, &ElementCode::identity()), a);
        assert_eq!(star(&a, &inv(&a)), ElementCode::identity());
        assert_eq!(star(&a, &a), w("g0^2").encode());
        assert_eq!(star(&w("g0*g1").encode(), &w("g1^-1").encode()), a);
    }

    #[test]
    fn parse_and_display() {
        let word = w("g0^2*g1^-1");
        assert_eq!(word.to_string(), "g0^2*g1^-1");
        assert_eq!(w("g3*g3^-1"), FreeWord::identity());
        assert_eq!(w("1").to_string(), "1");
        assert!("x0".parse::<FreeWord>().is_err());
        assert!("g0^".parse::<FreeWord>().is_err());
    }

    #[test]
    fn code_json_forms() {
        let c = ElementCode::from(42);
        assert_eq!(serde_json::to_string(&c).unwrap(), "\"42\"");
        assert_eq!(serde_json::from_str::<ElementCode>("42").unwrap(), c);
        assert_eq!(serde_json::from_str::<ElementCode>("\"42\"").unwrap(), c);
    }

    #[test]
    fn long_words_have_moderate_codes() {
        let mut letters = Vec::new();
        for i in 0..40u32 {
            letters.push(Letter::new(i % 2, i as i64 + 1));
        }
        let word = FreeWord::new(letters).unwrap();
        let code = word.encode();
        assert!(code.0.bits() < 4000);
        assert_eq!(code.decode(), word);
    }
}
