//! Seeded randomized sweep over the core algorithms.

use folner_core::folner;
use folner_core::metric::matching::{hall_certificate, hall_exhaustive, maximum_matching, Bipartite};
use folner_core::metric::{estimate_distance, ExactDistances, NaturalMetricOracle};
use folner_core::rational::{one_over, q};
use folner_core::wp::{decide_equal_via_folner, RecordingOracle};
use folner_core::{CanonicalElement, ElementCode, FreeWord, GroupDescriptor, Letter, ZooEnumerator};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures.is_empty())
    }
}

fn random_word(rng: &mut ChaCha8Rng, gens: u64, max_len: usize) -> FreeWord {
    let len = rng.gen_range(0..=max_len);
    FreeWord::reduce((0..len).map(|_| {
        let e: i64 = if rng.gen_bool(0.5) { 1 } else { -1 } * rng.gen_range(1..=3);
        Letter::new(rng.gen_range(0..gens), e)
    }))
}

fn interval_defects(rng: &mut ChaCha8Rng) -> Check {
    let g = GroupDescriptor::Z;
    let x = FreeWord::power(0u64, 1).encode();
    let mut failures = Vec::new();
    let cases = 50;
    for _ in 0..cases {
        let i: i64 = rng.gen_range(1..300);
        let f: Vec<ElementCode> = (-i..=i).map(|v| g.code_for(&CanonicalElement::Int(v.into()))).collect();
        match folner::defect(&g, &f, &x) {
            Ok(d) if d == q(1, 2 * i + 1) => {}
            other => failures.push(format!("i = {i}: {other:?}")),
        }
    }
    Check {
        name: "interval_defects",
        cases,
        failures,
    }
}

fn word_problem(rng: &mut ChaCha8Rng) -> Check {
    let g = GroupDescriptor::Z;
    let eq = ZooEnumerator::new(&g);
    let mut failures = Vec::new();
    let cases = 100;
    for _ in 0..cases {
        let w1 = random_word(rng, 4, 4);
        let w2 = if rng.gen_bool(0.5) {
            g.word_for(&g.eval_word(&w1))
        } else {
            random_word(rng, 4, 4)
        };
        let (a, b) = (w1.encode(), w2.encode());
        let mut oracle = RecordingOracle::new(&g);
        match decide_equal_via_folner(&eq, &a, &b, &mut oracle, 1 << 20) {
            Ok(v) if v == g.equal(&a, &b) && oracle.queries.iter().all(|&q| q == (3, 2)) => {}
            other => failures.push(format!("{w1} vs {w2}: {other:?}")),
        }
    }
    Check {
        name: "word_problem",
        cases,
        failures,
    }
}

fn matching_duality(rng: &mut ChaCha8Rng) -> Check {
    let mut failures = Vec::new();
    let cases = 100;
    for case in 0..cases {
        let (l, r) = (rng.gen_range(0..=10), rng.gen_range(1..=10));
        let p = rng.gen_range(0.05..0.6);
        let mut gr = Bipartite::new(l, r);
        for u in 0..l {
            for v in 0..r {
                if rng.gen_bool(p) {
                    gr.add_edge(u, v);
                }
            }
        }
        let m = maximum_matching(&gr);
        let hall = l - hall_certificate(&gr, &m).deficiency();
        let brute = hall_exhaustive(&gr);
        if m.size() != hall || hall != brute {
            failures.push(format!("case {case}: augmenting {}, certificate {hall}, exhaustive {brute}", m.size()));
        }
    }
    Check {
        name: "matching_duality",
        cases,
        failures,
    }
}

fn distance_estimates(rng: &mut ChaCha8Rng) -> Check {
    let g = GroupDescriptor::CircleRationals;
    let eps = one_over(10);
    let mut failures = Vec::new();
    let cases = 10;
    for _ in 0..cases {
        let mut point = || {
            let den: i64 = rng.gen_range(1..=6);
            CanonicalElement::Circle(q(rng.gen_range(0..den), den))
        };
        let (a, b) = (point(), point());
        let truth = g.distance(&a, &b);
        let mut oracle = NaturalMetricOracle::new(&g);
        let mut facts = ExactDistances::new(&g);
        match estimate_distance(&g.code_for(&a), &g.code_for(&b), &eps, &mut oracle, &mut facts, 1 << 22) {
            Ok(e) if e.q0 <= truth && truth < &e.q0 + &eps => {}
            other => failures.push(format!("{a:?} vs {b:?}: {other:?}")),
        }
    }
    Check {
        name: "distance_estimates",
        cases,
        failures,
    }
}

fn right_invariance(rng: &mut ChaCha8Rng) -> Check {
    let g = GroupDescriptor::CircleRationals;
    let mut failures = Vec::new();
    let cases = 100;
    for _ in 0..cases {
        let mut point = || {
            let den: i64 = rng.gen_range(1..=12);
            CanonicalElement::Circle(q(rng.gen_range(0..den), den))
        };
        let (x, y, z) = (point(), point(), point());
        let (d1, d2) = (g.distance(&x, &y), g.distance(&g.mul(&x, &z), &g.mul(&y, &z)));
        if d1 != d2 || d1.is_negative() || d1 > q(1, 2) {
            failures.push(format!("{x:?}, {y:?}, {z:?}"));
        }
    }
    Check {
        name: "right_invariance",
        cases,
        failures,
    }
}

pub fn run(seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = vec![
        interval_defects(&mut rng),
        word_problem(&mut rng),
        matching_duality(&mut rng),
        distance_estimates(&mut rng),
        right_invariance(&mut rng),
    ];
    Report { seed, checks }
}
