//! Re-checks witness documents from group arithmetic alone. Nothing here
//! calls the search, defect, κ or matching code of the core crate.

use std::collections::{BTreeMap, HashMap, HashSet};

use folner_core::rational::{to_text, Q};
use folner_core::{CanonicalElement, ElementCode, GroupDescriptor};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::witness::Witness;

#[derive(Debug, Serialize)]
pub struct Verdict {
    pub kind: &'static str,
    pub valid: bool,
    /// Each failed condition, in the order checked.
    pub problems: Vec<String>,
}

fn frac(a: usize, b: usize) -> Q {
    Q::new(BigInt::from(a), BigInt::from(b))
}

fn within(v: &Q, n: u64) -> bool {
    v * Q::from_integer(BigInt::from(n)) <= Q::from_integer(BigInt::from(1))
}

/// Images of `codes`; reports codes that collide.
fn images(g: &GroupDescriptor, codes: &[ElementCode], problems: &mut Vec<String>) -> Vec<CanonicalElement> {
    let mut seen: HashMap<CanonicalElement, &ElementCode> = HashMap::new();
    let mut out = Vec::new();
    for c in codes {
        let e = g.eval(c);
        if let Some(prev) = seen.get(&e) {
            problems.push(format!("codes {prev} and {c} name the same element"));
            continue;
        }
        seen.insert(e.clone(), c);
        out.push(e);
    }
    out
}

fn folner(
    g: &GroupDescriptor,
    d: &[ElementCode],
    n: u64,
    codes: &[ElementCode],
    defects: &BTreeMap<ElementCode, Q>,
    injective: bool,
) -> Vec<String> {
    let mut problems = Vec::new();
    if codes.is_empty() {
        problems.push("empty set".into());
        return problems;
    }
    let elems = images(g, codes, &mut problems);
    if !injective {
        problems.push("witness does not claim injectivity".into());
    }
    let set: HashSet<&CanonicalElement> = elems.iter().collect();
    for x in d {
        // |A ∖ xA| = |xA ∖ A|.
        let xe = g.eval(x);
        let out = elems.iter().filter(|a| !set.contains(&g.mul(&xe, a))).count();
        let v = frac(out, elems.len());
        if !within(&v, n) {
            problems.push(format!("defect {} for {x} exceeds 1/{n}", to_text(&v)));
        }
        match defects.get(x) {
            Some(claimed) if *claimed == v => {}
            Some(claimed) => problems.push(format!("claimed defect {} for {x}, actual {}", to_text(claimed), to_text(&v))),
            None => problems.push(format!("no defect recorded for {x}")),
        }
    }
    if defects.len() != d.iter().collect::<HashSet<_>>().len() {
        problems.push("defects list elements outside D".into());
    }
    problems
}

fn reiter(g: &GroupDescriptor, n: u64, d: &[ElementCode], f: &BTreeMap<ElementCode, Q>) -> Vec<String> {
    let mut problems = Vec::new();
    if f.is_empty() {
        problems.push("empty support".into());
        return problems;
    }
    let mut h: HashMap<CanonicalElement, Q> = HashMap::new();
    for (c, v) in f {
        if !v.is_positive() {
            problems.push(format!("value at {c} is not positive"));
        }
        *h.entry(g.eval(c)).or_insert_with(Q::zero) += v;
    }
    let norm: Q = h.values().sum();
    for x in d {
        // Σ_y |h(y) − h(x⁻¹y)| over y ∈ supp h ∪ x·supp h.
        let xe = g.eval(x);
        let xi = g.inverse(&xe);
        let mut support: HashSet<CanonicalElement> = h.keys().cloned().collect();
        support.extend(h.keys().map(|y| g.mul(&xe, y)));
        let zero = Q::zero();
        let mut l1 = Q::zero();
        for y in &support {
            let a = h.get(y).unwrap_or(&zero);
            let b = h.get(&g.mul(&xi, y)).unwrap_or(&zero);
            l1 += (a - b).abs();
        }
        let v = l1 / &norm;
        if !within(&v, n) {
            problems.push(format!("l1 ratio {} for {x} exceeds 1/{n}", to_text(&v)));
        }
    }
    problems
}

/// Simple augmenting-path matching on an adjacency matrix.
fn matching_size(adj: &[Vec<bool>]) -> usize {
    fn augment(adj: &[Vec<bool>], u: usize, seen: &mut [bool], mate: &mut [Option<usize>]) -> bool {
        for v in 0..seen.len() {
            if adj[u][v] && !seen[v] {
                seen[v] = true;
                if mate[v].is_none_or(|w| augment(adj, w, seen, mate)) {
                    mate[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    let right = adj.first().map_or(0, Vec::len);
    let mut mate = vec![None; right];
    (0..adj.len())
        .filter(|&u| augment(adj, u, &mut vec![false; right], &mut mate))
        .count()
}

fn metric(g: &GroupDescriptor, w: &folner_core::metric::MetricWitness) -> Vec<String> {
    let mut problems = Vec::new();
    if w.codes.is_empty() || w.l == 0 || w.m == 0 || w.n == 0 {
        problems.push("empty set or zero parameter".into());
        return problems;
    }
    let elems = images(g, &w.codes, &mut problems);
    let ball = Q::new(BigInt::from(1), BigInt::from(w.m));
    let size = elems.len();
    let claimed: HashMap<&ElementCode, usize> = w.mus.iter().map(|(e, mu)| (e, *mu)).collect();
    for e in &w.d {
        let ee = g.eval(e);
        let adj: Vec<Vec<bool>> = elems
            .iter()
            .map(|a| elems.iter().map(|b| g.distance(&g.mul(&ee, b), a) < ball).collect())
            .collect();
        let mu = matching_size(&adj);
        if (w.n as u128) * (mu as u128) < (w.n as u128 - 1) * size as u128 {
            problems.push(format!("matching number {mu} for {e} is below {}/{} of {size}", w.n - 1, w.n));
        }
        if claimed.get(e) != Some(&mu) {
            problems.push(format!("claimed matching number for {e} differs from {mu}"));
        }
    }
    let step = Q::new(BigInt::from(1), BigInt::from(w.l));
    let mut sorted = w.codes.clone();
    sorted.sort();
    let mut expected = 0usize;
    for (a, i) in sorted.iter().enumerate() {
        for j in &sorted[a + 1..] {
            expected += 1;
            let Some(entry) = w.assignment.iter().find(|x| &x.i == i && &x.j == j) else {
                problems.push(format!("no assigned distance for ({i}, {j})"));
                continue;
            };
            let d = g.distance(&g.eval(i), &g.eval(j));
            if !(entry.q <= d && d < &entry.q + &step) {
                problems.push(format!("distance of ({i}, {j}) is {}, outside [{}, +1/{})", to_text(&d), to_text(&entry.q), w.l));
            }
        }
    }
    if w.assignment.len() != expected {
        problems.push("assignment has extra entries".into());
    }
    problems
}

pub fn verify(w: &Witness) -> Verdict {
    let (kind, problems) = match w {
        Witness::Folner { group, d, witness } => (
            "folner",
            folner(group, d, witness.n, &witness.codes, &witness.defects, witness.injective),
        ),
        Witness::Reiter { group, n, d, function } => ("reiter", reiter(group, *n, d, function.values())),
        Witness::MetricFolner { group, witness } => ("metric_folner", metric(group, witness)),
    };
    Verdict {
        kind,
        valid: problems.is_empty(),
        problems,
    }
}
