//! Cantor pairing on arbitrary-precision naturals, plus a balanced
//! tuple coding built from it.
//!
//! The tuple coding nests pairs as a balanced binary tree, so the bit length
//! of a code grows linearly with the tuple length instead of doubling at
//! every level as a right-nested tower would.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// `pair(x, y) = (x + y)(x + y + 1)/2 + y`, a bijection ℕ² → ℕ.
pub fn pair(x: &BigUint, y: &BigUint) -> BigUint {
    let w = x + y;
    let tri = (&w * (&w + 1u32)) >> 1u32;
    tri + y
}

/// Inverse of [`pair`].
pub fn unpair(z: &BigUint) -> (BigUint, BigUint) {
    let disc: BigUint = (z << 3u32) + 1u32;
    let w = (disc.sqrt() - 1u32) >> 1u32;
    let tri = (&w * (&w + 1u32)) >> 1u32;
    let y = z - tri;
    let x = w - &y;
    (x, y)
}

/// Codes a nonempty tuple as a single natural. Bijective for each fixed length.
pub fn encode_tuple(items: &[BigUint]) -> BigUint {
    match items.len() {
        0 => panic!("encode_tuple: empty tuple has no code"),
        1 => items[0].clone(),
        len => {
            let mid = len.div_ceil(2);
            pair(&encode_tuple(&items[..mid]), &encode_tuple(&items[mid..]))
        }
    }
}

/// Inverse of [`encode_tuple`] for a tuple of length `len >= 1`.
pub fn decode_tuple(code: &BigUint, len: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(len);
    decode_into(code, len, &mut out);
    out
}

fn decode_into(code: &BigUint, len: usize, out: &mut Vec<BigUint>) {
    match len {
        0 => panic!("decode_tuple: length must be positive"),
        1 => out.push(code.clone()),
        len => {
            let mid = len.div_ceil(2);
            let (l, r) = unpair(code);
            decode_into(&l, mid, out);
            decode_into(&r, len - mid, out);
        }
    }
}

/// Nonzero integers ↔ ℕ: 1 ↦ 0, −1 ↦ 1, 2 ↦ 2, −2 ↦ 3, …
pub(crate) fn nonzero_to_nat(e: &num_bigint::BigInt) -> BigUint {
    use num_bigint::Sign;
    let mag = e.magnitude();
    match e.sign() {
        Sign::Plus => (mag - 1u32) << 1u32,
        Sign::Minus => ((mag - 1u32) << 1u32) + 1u32,
        Sign::NoSign => panic!("zero exponent has no code"),
    }
}

pub(crate) fn nat_to_nonzero(z: &BigUint) -> num_bigint::BigInt {
    use num_bigint::{BigInt, Sign};
    let half: BigUint = (z >> 1u32) + BigUint::one();
    if (z & BigUint::one()).is_zero() {
        BigInt::from_biguint(Sign::Plus, half)
    } else {
        BigInt::from_biguint(Sign::Minus, half)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn pair_small_values() {
        assert_eq!(pair(&n(0), &n(0)), n(0));
        assert_eq!(pair(&n(1), &n(0)), n(1));
        assert_eq!(pair(&n(0), &n(1)), n(2));
        assert_eq!(pair(&n(2), &n(0)), n(3));
    }

    #[test]
    fn unpair_inverts_pair_exhaustively() {
        for z in 0..5000u64 {
            let (x, y) = unpair(&n(z));
            assert_eq!(pair(&x, &y), n(z));
        }
    }

    #[test]
    fn tuples_round_trip() {
        for len in 1..7 {
            for code in 0..300u64 {
                let t = decode_tuple(&n(code), len);
                assert_eq!(t.len(), len);
                assert_eq!(encode_tuple(&t), n(code));
            }
        }
    }

    #[test]
    fn exponent_coding() {
        use num_bigint::BigInt;
        for z in 0..200u64 {
            let e = nat_to_nonzero(&n(z));
            assert_ne!(e, BigInt::from(0));
            assert_eq!(nonzero_to_nat(&e), n(z));
        }
        assert_eq!(nat_to_nonzero(&n(0)), BigInt::from(1));
        assert_eq!(nat_to_nonzero(&n(1)), BigInt::from(-1));
    }
}
