//! Explicit Følner sets per family, used by oracles and by the structured
//! part of the Reiter search.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::group::zoo::{CanonicalElement, GroupDescriptor};

/// Largest set any constructor here will materialize.
pub const MAX_CONSTRUCTED: usize = 200_000;

fn too_big(what: &str, size: u128) -> Error {
    Error::Overflow(format!("{what} would have {size} elements (cap {MAX_CONSTRUCTED})"))
}

fn small(v: &BigInt, what: &str) -> Result<i64> {
    v.to_i64()
        .filter(|x| x.abs() < 1 << 20)
        .ok_or_else(|| Error::Overflow(format!("{what} coordinate {v} too large")))
}

fn check_size(what: &str, size: u128) -> Result<()> {
    if size > MAX_CONSTRUCTED as u128 {
        Err(too_big(what, size))
    } else {
        Ok(())
    }
}

/// Cartesian product of integer ranges, as vectors.
fn boxes(ranges: &[(i64, i64)]) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> = vec![vec![]];
    for &(lo, hi) in ranges {
        out = out
            .into_iter()
            .flat_map(|p| {
                (lo..hi).map(move |v| {
                    let mut q = p.clone();
                    q.push(BigInt::from(v));
                    q
                })
            })
            .collect();
    }
    out
}

fn box_size(ranges: &[(i64, i64)]) -> u128 {
    ranges.iter().map(|&(lo, hi)| (hi - lo).max(0) as u128).product()
}

impl GroupDescriptor {
    /// A set whose defect is at most `1/n` for every element of `d`.
    pub fn natural_folner_set(&self, n: u64, d: &[CanonicalElement]) -> Result<Vec<CanonicalElement>> {
        use CanonicalElement as E;
        let n = n.max(1) as i64;
        match self {
            GroupDescriptor::Z => {
                let m = d
                    .iter()
                    .map(|x| match x {
                        E::Int(v) => small(v, "Z"),
                        _ => unreachable!(),
                    })
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .map(i64::abs)
                    .max()
                    .unwrap_or(0)
                    .max(1);
                let len = n * m;
                check_size("interval", len as u128)?;
                Ok((0..len).map(|v| E::Int(v.into())).collect())
            }
            GroupDescriptor::Zd { d: dim } => {
                let mut m = 1;
                for x in d {
                    let E::Vector(v) = x else { unreachable!() };
                    let l1: i64 = v.iter().map(|c| small(c, "Zd").map(i64::abs)).sum::<Result<i64>>()?;
                    m = m.max(l1);
                }
                let ranges = vec![(0, n * m); *dim];
                check_size("box", box_size(&ranges))?;
                Ok(boxes(&ranges).into_iter().map(E::Vector).collect())
            }
            GroupDescriptor::DirectSumZ => {
                let mut coords: BTreeSet<BigUint> = BTreeSet::new();
                let mut m = 1;
                for x in d {
                    let E::Sparse(v) = x else { unreachable!() };
                    coords.extend(v.keys().cloned());
                    let l1: i64 = v.values().map(|c| small(c, "DirectSumZ").map(i64::abs)).sum::<Result<i64>>()?;
                    m = m.max(l1);
                }
                let coords: Vec<BigUint> = coords.into_iter().collect();
                let ranges = vec![(0, n * m); coords.len()];
                check_size("box", box_size(&ranges))?;
                Ok(boxes(&ranges)
                    .into_iter()
                    .map(|v| {
                        E::Sparse(
                            coords
                                .iter()
                                .cloned()
                                .zip(v)
                                .filter(|(_, c)| !c.is_zero())
                                .collect(),
                        )
                    })
                    .collect())
            }
            GroupDescriptor::Heisenberg => {
                let (mut a, mut b, mut c) = (0i64, 0i64, 0i64);
                for x in d {
                    let E::Heisenberg(v) = x else { unreachable!() };
                    a = a.max(small(&v[0], "Heisenberg")?.abs());
                    b = b.max(small(&v[1], "Heisenberg")?.abs());
                    c = c.max(small(&v[2], "Heisenberg")?.abs());
                }
                let l = (2 * n * (a + b)).max(1);
                let m = (2 * n * (c + a * l)).max(1);
                let ranges = [(0, l), (0, l), (0, m)];
                check_size("box", box_size(&ranges))?;
                Ok(boxes(&ranges)
                    .into_iter()
                    .map(|v| E::Heisenberg([v[0].clone(), v[1].clone(), v[2].clone()]))
                    .collect())
            }
            GroupDescriptor::Lamplighter => {
                // Positions s in [0, A); lamps relative to s inside [lo - A + 1, hi].
                let mut p = 0i64;
                let mut lamps: Vec<i64> = Vec::new();
                for x in d {
                    let E::Lamplighter { lamps: f, pos } = x else { unreachable!() };
                    p = p.max(small(pos, "Lamplighter")?.abs());
                    for t in f {
                        lamps.push(small(t, "Lamplighter")?);
                    }
                }
                let a = (n * p).max(1);
                let window: Vec<i64> = match (lamps.iter().min(), lamps.iter().max()) {
                    (Some(&lo), Some(&hi)) => (lo - a + 1..=hi).collect(),
                    _ => Vec::new(),
                };
                lamplighter_set(0, a, &window)
            }
            GroupDescriptor::Finite { table } => Ok((0..table.len()).map(E::Finite).collect()),
            GroupDescriptor::CircleRationals => {
                // The finite subgroup generated by D is invariant.
                let mut den = BigInt::one();
                for x in d {
                    let E::Circle(r) = x else { unreachable!() };
                    den = den.lcm(r.denom());
                }
                let size = den.to_u64().filter(|&s| s as usize <= MAX_CONSTRUCTED);
                let size = size.ok_or_else(|| too_big("circle subgroup", u128::MAX))?;
                Ok((0..size)
                    .map(|k| E::Circle(BigRational::new(BigInt::from(k), den.clone())))
                    .collect())
            }
        }
    }

    /// The `level`-th set of a fixed increasing family of finite sets that is
    /// eventually invariant under any fixed finite set of elements.
    pub fn level_set(&self, level: u64) -> Result<Vec<CanonicalElement>> {
        use CanonicalElement as E;
        let l = level as i64;
        match self {
            GroupDescriptor::Z => Ok((0..l.max(1)).map(|v| E::Int(v.into())).collect()),
            GroupDescriptor::Zd { d } => {
                let ranges = vec![(0, l.max(1)); *d];
                check_size("box", box_size(&ranges))?;
                Ok(boxes(&ranges).into_iter().map(E::Vector).collect())
            }
            GroupDescriptor::DirectSumZ => {
                let ranges = vec![(-l, l + 1); level as usize + 1];
                check_size("box", box_size(&ranges))?;
                Ok(boxes(&ranges)
                    .into_iter()
                    .map(|v| {
                        E::Sparse(
                            v.into_iter()
                                .enumerate()
                                .filter(|(_, c)| !c.is_zero())
                                .map(|(i, c)| (BigUint::from(i), c))
                                .collect(),
                        )
                    })
                    .collect())
            }
            GroupDescriptor::Heisenberg => {
                let ranges = [(-l, l + 1), (-l, l + 1), (-l * l, l * l + 1)];
                check_size("box", box_size(&ranges))?;
                Ok(boxes(&ranges)
                    .into_iter()
                    .map(|v| E::Heisenberg([v[0].clone(), v[1].clone(), v[2].clone()]))
                    .collect())
            }
            GroupDescriptor::Lamplighter => {
                let window: Vec<i64> = (-2 * l..=l).collect();
                lamplighter_set(-l, l + 1, &window)
            }
            GroupDescriptor::Finite { table } => Ok((0..table.len()).map(E::Finite).collect()),
            GroupDescriptor::CircleRationals => {
                let den: u64 = (1..=level.max(1)).product();
                if den as usize > MAX_CONSTRUCTED {
                    return Err(too_big("circle grid", den as u128));
                }
                Ok((0..den)
                    .map(|k| E::Circle(BigRational::new(BigInt::from(k), BigInt::from(den))))
                    .collect())
            }
        }
    }
}

/// `{(h, s) : s in [s_lo, s_hi), supp h ⊆ s + window}`.
fn lamplighter_set(s_lo: i64, s_hi: i64, window: &[i64]) -> Result<Vec<CanonicalElement>> {
    let w = window.len();
    if w >= 40 {
        return Err(too_big("lamplighter set", u128::MAX));
    }
    check_size("lamplighter set", ((s_hi - s_lo).max(0) as u128) << w)?;
    let mut out = Vec::new();
    for s in s_lo..s_hi {
        for mask in 0u64..(1u64 << w) {
            let lamps: BTreeSet<BigInt> = (0..w)
                .filter(|&b| mask >> b & 1 == 1)
                .map(|b| BigInt::from(window[b] + s))
                .collect();
            out.push(CanonicalElement::Lamplighter {
                lamps,
                pos: BigInt::from(s),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::FreeWord;

    /// `|F ∖ xF| / |F|` over canonical elements, duplicates collapsed.
    fn canonical_defect(
        desc: &GroupDescriptor,
        f: &BTreeSet<CanonicalElement>,
        x: &CanonicalElement,
    ) -> BigRational {
        let moved: BTreeSet<CanonicalElement> = f.iter().map(|y| desc.mul(x, y)).collect();
        let outside = f.iter().filter(|y| !moved.contains(*y)).count();
        crate::rational::ratio(outside, f.len())
    }

    fn elem(desc: &GroupDescriptor, w: &str) -> CanonicalElement {
        desc.eval_word(&w.parse::<FreeWord>().unwrap())
    }

    fn max_defect(desc: &GroupDescriptor, f: &[CanonicalElement], d: &[CanonicalElement]) -> BigRational {
        let set: BTreeSet<_> = f.iter().cloned().collect();
        d.iter()
            .map(|x| canonical_defect(desc, &set, x))
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    #[test]
    fn natural_sets_meet_their_bound() {
        let cases: Vec<(GroupDescriptor, Vec<&str>)> = vec![
            (GroupDescriptor::Z, vec!["g0", "g0^-3"]),
            (GroupDescriptor::Zd { d: 2 }, vec!["g0*g1", "g1^-1"]),
            (GroupDescriptor::DirectSumZ, vec!["g3", "g5^2"]),
            (GroupDescriptor::Heisenberg, vec!["g0", "g1", "g2"]),
            (GroupDescriptor::Lamplighter, vec!["g0", "g1", "g0*g1*g0^-2"]),
            (GroupDescriptor::CircleRationals, vec!["g2", "g3^3"]),
        ];
        for (desc, words) in cases {
            let d: Vec<_> = words.iter().map(|w| elem(&desc, w)).collect();
            for n in 1..4 {
                let f = desc.natural_folner_set(n, &d).unwrap();
                assert!(
                    max_defect(&desc, &f, &d) <= crate::rational::one_over(n),
                    "{desc:?} n={n}"
                );
            }
        }
    }

    #[test]
    fn level_sets_become_invariant() {
        let z = GroupDescriptor::Z;
        let x = vec![elem(&z, "g0")];
        assert_eq!(max_defect(&z, &z.level_set(10).unwrap(), &x), crate::rational::q(1, 10));
        let l = GroupDescriptor::Lamplighter;
        let x = vec![elem(&l, "g0"), elem(&l, "g1")];
        let small = max_defect(&l, &l.level_set(1).unwrap(), &x);
        let big = max_defect(&l, &l.level_set(3).unwrap(), &x);
        assert!(big < small);
    }
}
