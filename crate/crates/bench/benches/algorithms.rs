use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use folner_core::folner;
use folner_core::means::{self, NatFunction};
use folner_core::metric::matching::{maximum_matching, Bipartite};
use folner_core::metric::{self, ExactDistances, NaturalMetricOracle};
use folner_core::rational::q;
use folner_core::reiter;
use folner_core::wp::{decide_equal_via_folner, RecordingOracle};
use folner_core::{CanonicalElement, ElementCode, FreeWord, GroupDescriptor, ZooEnumerator};

fn word(w: &str) -> ElementCode {
    w.parse::<FreeWord>().unwrap().encode()
}

fn folner_search(c: &mut Criterion) {
    let mut g = c.benchmark_group("folner_search");
    for n in [2u64, 4, 8] {
        g.bench_with_input(BenchmarkId::new("Z", n), &n, |b, &n| {
            b.iter(|| folner::search_folner(&GroupDescriptor::Z, n, &[word("g0")], 1 << 26).unwrap())
        });
    }
    g.bench_function("function_Z_n4", |b| {
        b.iter(|| folner::folner_function(&GroupDescriptor::Z, 4, &[word("g0"), word("g0^-1")], 8).unwrap())
    });
    g.finish();
}

fn reiter_compute(c: &mut Criterion) {
    let z = GroupDescriptor::Z;
    let eq = ZooEnumerator::new(&z);
    c.bench_function("reiter_compute_Z_n4", |b| {
        b.iter(|| reiter::compute_reiter(&z, &eq, black_box(4), &[word("g0")], 1 << 22).unwrap())
    });
}

fn word_problem(c: &mut Criterion) {
    let lamp = GroupDescriptor::Lamplighter;
    let eq = ZooEnumerator::new(&lamp);
    let (a, b) = (word("g0*g1*g0^-1"), word("g1*g0*g1*g0^-1*g1"));
    c.bench_function("decide_eq_lamplighter", |bench| {
        bench.iter(|| {
            let mut oracle = RecordingOracle::new(&lamp);
            decide_equal_via_folner(&eq, &a, &b, &mut oracle, 1 << 24).unwrap()
        })
    });
}

fn matching(c: &mut Criterion) {
    let mut g = c.benchmark_group("hopcroft_karp");
    for size in [50usize, 200, 800] {
        let mut graph = Bipartite::new(size, size);
        // Deterministic sparse graph: each left vertex sees about 6 right vertices.
        for u in 0..size {
            for k in 1..=6 {
                graph.add_edge(u, (u * 7919 + k * 104_729) % size);
            }
        }
        g.bench_with_input(BenchmarkId::from_parameter(size), &graph, |b, graph| {
            b.iter(|| maximum_matching(black_box(graph)).size())
        });
    }
    g.finish();
}

fn distance_estimate(c: &mut Criterion) {
    let circle = GroupDescriptor::CircleRationals;
    let a = circle.code_for(&CanonicalElement::Circle(q(1, 3)));
    let b = circle.code_for(&CanonicalElement::Circle(q(3, 4)));
    c.bench_function("estimate_distance_eps_1_20", |bench| {
        bench.iter(|| {
            let mut oracle = NaturalMetricOracle::new(&circle);
            let mut facts = ExactDistances::new(&circle);
            metric::estimate_distance(&a, &b, &q(1, 20), &mut oracle, &mut facts, 1 << 24).unwrap()
        })
    });
}

fn slow_convergence(c: &mut Criterion) {
    let f: NatFunction = "2^k".parse().unwrap();
    c.bench_function("build_x0_kmax_12", |b| b.iter(|| means::build_x0(&f, black_box(12)).unwrap()));
    let x = means::build_x0(&f, 10).unwrap().seq;
    c.bench_function("modulus_table_kmax_10", |b| b.iter(|| means::modulus_table(&x, &f, 10, 20_000).unwrap()));
}

criterion_group!(benches, folner_search, reiter_compute, word_problem, matching, distance_estimate, slow_convergence);
criterion_main!(benches);
