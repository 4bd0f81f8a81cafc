use std::collections::{BTreeMap, HashSet};

use folner_core::folner;
use folner_core::means::{self, BinarySeqZ, ExplicitSeq, NatFunction};
use folner_core::metric::matching::{maximum_matching, Bipartite, Matching};
use folner_core::pairing::{decode_tuple, encode_tuple, pair, unpair};
use folner_core::rational::{self, q, Q};
use folner_core::reiter::{PartitionState, ReiterFunction};
use folner_core::sequences::ProductSet;
use folner_core::{inv, star, CanonicalElement, ElementCode, FreeWord, GroupDescriptor, Letter};
use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

fn letters() -> impl Strategy<Value = Vec<(u8, i8)>> {
    prop::collection::vec((0u8..5, -3i8..=3), 0..6)
}

fn to_word(ls: &[(u8, i8)]) -> FreeWord {
    FreeWord::reduce(ls.iter().filter(|(_, e)| *e != 0).map(|&(g, e)| Letter::new(g as u64, e as i64)))
}

fn circle(num: i64, den: i64) -> CanonicalElement {
    CanonicalElement::Circle(q(num.rem_euclid(den), den))
}

proptest! {
    #[test]
    fn word_codes_round_trip(ls in letters()) {
        let w = to_word(&ls);
        prop_assert_eq!(FreeWord::decode(&w.encode()), w);
    }

    #[test]
    fn codes_round_trip(c in 0u64..1_000_000) {
        let code = ElementCode::from(c);
        prop_assert_eq!(code.decode().encode(), code);
    }

    #[test]
    fn word_text_round_trip(ls in letters()) {
        let w = to_word(&ls);
        prop_assert_eq!(w.to_string().parse::<FreeWord>().unwrap(), w);
    }

    #[test]
    fn pairing_round_trip(x in 0u64..1 << 40, y in 0u64..1 << 40) {
        let (x, y) = (BigUint::from(x), BigUint::from(y));
        prop_assert_eq!(unpair(&pair(&x, &y)), (x, y));
    }

    #[test]
    fn tuples_round_trip(items in prop::collection::vec(0u64..10_000, 1..5)) {
        let items: Vec<BigUint> = items.into_iter().map(BigUint::from).collect();
        prop_assert_eq!(decode_tuple(&encode_tuple(&items), items.len()), items);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in letters(), b in letters()) {
        let (a, b) = (to_word(&a).encode(), to_word(&b).encode());
        for g in [GroupDescriptor::Z, GroupDescriptor::Lamplighter, GroupDescriptor::Heisenberg, GroupDescriptor::CircleRationals] {
            prop_assert_eq!(g.eval(&star(&a, &b)), g.mul(&g.eval(&a), &g.eval(&b)));
            prop_assert_eq!(g.eval(&inv(&a)), g.inverse(&g.eval(&a)));
        }
        prop_assert_eq!(star(&a, &inv(&a)), ElementCode::identity());
    }

    #[test]
    fn circle_distance_is_right_invariant(x in 0i64..60, y in 0i64..60, z in 0i64..60, den in 1i64..60) {
        let g = GroupDescriptor::CircleRationals;
        let (x, y, z) = (circle(x, den), circle(y, den + 1), circle(z, 7));
        let d = g.distance(&x, &y);
        prop_assert_eq!(g.distance(&g.mul(&x, &z), &g.mul(&y, &z)), d.clone());
        prop_assert!(d <= q(1, 2));
        prop_assert_eq!(d == q(0, 1), x == y);
    }

    #[test]
    fn text_rationals_round_trip(n in -1000i64..1000, d in 1i64..1000) {
        let v = q(n, d);
        prop_assert_eq!(rational::parse(&rational::to_text(&v)).unwrap(), v);
    }

    #[test]
    fn merges_never_raise_ratios(
        support in prop::collection::btree_map(0u64..400, 1u32..6, 1..8),
        xs in prop::collection::vec(0u64..60, 1..3),
        merges in prop::collection::vec((0usize..64, 0usize..64), 0..20),
    ) {
        let f = ReiterFunction::new(support.into_iter().map(|(c, v)| (ElementCode::from(c), Q::from_integer(v.into()))).collect()).unwrap();
        let d: Vec<ElementCode> = xs.into_iter().map(ElementCode::from).collect();
        let mut p = PartitionState::new(&d, &f);
        let len = p.codes().len();
        let mut before = p.ratios();
        for (i, j) in merges {
            p.merge(i % len, j % len);
            let after = p.ratios();
            prop_assert!(after.iter().zip(&before).all(|(a, b)| a <= b));
            before = after;
        }
    }

    #[test]
    fn modulus_minima_are_monotone(values in prop::collection::vec(any::<bool>(), 1..30), period in prop::collection::vec(any::<bool>(), 1..5)) {
        let x = BinarySeqZ::Explicit(ExplicitSeq::new(values, period).unwrap());
        let f: NatFunction = "k".parse().unwrap();
        let t = means::modulus_table(&x, &f, 12, 400).unwrap();
        let mins: Vec<u64> = t.rows.iter().map_while(|r| r.j_min).collect();
        prop_assert!(mins.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn product_defect_matches_materialized(
        sides in prop::collection::vec(prop::collection::btree_set(-3i64..=3, 1..5), 1..4),
        coord in 1u64..4,
        shift in -2i64..=2,
    ) {
        let factors: BTreeMap<u64, Vec<i64>> = sides.into_iter().enumerate().map(|(i, s)| (i as u64 + 1, s.into_iter().collect())).collect();
        let ps = ProductSet { factors };
        let g = GroupDescriptor::DirectSumZ;
        let codes = ps.materialize(&g).unwrap();
        let v = BTreeMap::from([(BigUint::from(coord), BigInt::from(shift))]);
        let x = g.code_for(&CanonicalElement::Sparse(if shift == 0 { BTreeMap::new() } else { v.clone() }));
        prop_assert_eq!(ps.defect(&v), folner::defect(&g, &codes, &x).unwrap());
    }

    #[test]
    fn repaired_matching_stays_maximum(edges in prop::collection::vec((0usize..12, 0usize..12), 0..60)) {
        let mut g = Bipartite::new(12, 12);
        let mut m = Matching::empty(&g);
        let mut last = 0;
        for (u, v) in edges {
            if g.add_edge(u, v) {
                m.repair(&g);
            }
            prop_assert!(m.size() >= last);
            prop_assert_eq!(m.size(), maximum_matching(&g).size());
            let pairs = m.pairs();
            let rights: HashSet<usize> = pairs.iter().map(|p| p.1).collect();
            prop_assert_eq!(rights.len(), pairs.len());
            prop_assert!(pairs.iter().all(|&(a, b)| g.neighbours(a).contains(&b)));
            last = m.size();
        }
    }
}
