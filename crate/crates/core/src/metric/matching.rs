//! Maximum bipartite matching with a Hall-deficiency certificate.
//!
//! For a left side `L`, `μ = |L| - max_{S ⊆ L} (|S| - |N(S)|)`. The maximizing
//! `S` is read off the final matching: left vertices reachable from free left
//! vertices by alternating paths.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

/// Left vertices `0..left`, right vertices `0..right`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bipartite {
    right: usize,
    adj: Vec<Vec<usize>>,
}

impl Bipartite {
    pub fn new(left: usize, right: usize) -> Self {
        Bipartite {
            right,
            adj: vec![Vec::new(); left],
        }
    }

    pub fn left(&self) -> usize {
        self.adj.len()
    }

    pub fn right(&self) -> usize {
        self.right
    }

    /// Ignores an edge that is already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(v < self.right, "right vertex out of range");
        if self.adj[u].contains(&v) {
            return false;
        }
        self.adj[u].push(v);
        true
    }

    pub fn neighbours(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }
}

/// A matching kept alongside its graph; grows under edge insertion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub mate_left: Vec<Option<usize>>,
    pub mate_right: Vec<Option<usize>>,
}

impl Matching {
    pub fn empty(g: &Bipartite) -> Self {
        Matching {
            mate_left: vec![None; g.left()],
            mate_right: vec![None; g.right()],
        }
    }

    pub fn size(&self) -> usize {
        self.mate_left.iter().flatten().count()
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.mate_left
            .iter()
            .enumerate()
            .filter_map(|(u, v)| v.map(|v| (u, v)))
            .collect()
    }

    fn try_augment(&mut self, g: &Bipartite, u: usize, seen: &mut [bool]) -> bool {
        for &v in g.neighbours(u) {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            let free = match self.mate_right[v] {
                None => true,
                Some(w) => self.try_augment(g, w, seen),
            };
            if free {
                self.mate_left[u] = Some(v);
                self.mate_right[v] = Some(u);
                return true;
            }
        }
        false
    }

    /// Restores maximality after edges were added; the size never drops.
    pub fn repair(&mut self, g: &Bipartite) {
        loop {
            let mut grew = false;
            let mut seen = vec![false; g.right()];
            for u in 0..g.left() {
                if self.mate_left[u].is_none() && self.try_augment(g, u, &mut seen) {
                    grew = true;
                }
            }
            if !grew {
                return;
            }
        }
    }
}

/// Hopcroft–Karp.
pub fn maximum_matching(g: &Bipartite) -> Matching {
    const INF: usize = usize::MAX;
    let mut m = Matching::empty(g);
    let mut dist = vec![INF; g.left()];
    loop {
        // Layered BFS from free left vertices.
        let mut queue = VecDeque::new();
        for u in 0..g.left() {
            if m.mate_left[u].is_none() {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = INF;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbours(u) {
                match m.mate_right[v] {
                    None => found = true,
                    Some(w) if dist[w] == INF => {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found {
            return m;
        }
        fn dfs(g: &Bipartite, m: &mut Matching, dist: &mut [usize], u: usize) -> bool {
            for i in 0..g.neighbours(u).len() {
                let v = g.neighbours(u)[i];
                let ok = match m.mate_right[v] {
                    None => true,
                    Some(w) => dist[w] == dist[u] + 1 && dfs(g, m, dist, w),
                };
                if ok {
                    m.mate_left[u] = Some(v);
                    m.mate_right[v] = Some(u);
                    return true;
                }
            }
            dist[u] = usize::MAX;
            false
        }
        for u in 0..g.left() {
            if m.mate_left[u].is_none() {
                dfs(g, &mut m, &mut dist, u);
            }
        }
    }
}

/// Optimality certificate for a maximum matching.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallCertificate {
    /// `S ⊆ L` with `|S| - |N(S)| = |L| - μ`.
    pub deficiency_set: Vec<usize>,
    pub neighbourhood: Vec<usize>,
}

impl HallCertificate {
    pub fn deficiency(&self) -> usize {
        self.deficiency_set.len() - self.neighbourhood.len()
    }
}

/// Left vertices reachable from free left vertices by alternating paths.
/// Requires `m` maximum.
pub fn hall_certificate(g: &Bipartite, m: &Matching) -> HallCertificate {
    let mut in_s = vec![false; g.left()];
    let mut in_n = vec![false; g.right()];
    let mut queue: VecDeque<usize> = (0..g.left()).filter(|&u| m.mate_left[u].is_none()).collect();
    for &u in &queue {
        in_s[u] = true;
    }
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbours(u) {
            if in_n[v] {
                continue;
            }
            in_n[v] = true;
            let w = m.mate_right[v].expect("a free right neighbour would extend the matching");
            if !in_s[w] {
                in_s[w] = true;
                queue.push_back(w);
            }
        }
    }
    HallCertificate {
        deficiency_set: (0..g.left()).filter(|&u| in_s[u]).collect(),
        neighbourhood: (0..g.right()).filter(|&v| in_n[v]).collect(),
    }
}

/// `|L| - max_S (|S| - |N(S)|)` over all `2^|L|` subsets.
pub fn hall_exhaustive(g: &Bipartite) -> usize {
    assert!(g.left() <= 20, "exhaustive Hall check is exponential");
    let masks: Vec<u64> = (0..g.left())
        .map(|u| g.neighbours(u).iter().fold(0u64, |acc, &v| acc | (1 << v)))
        .collect();
    assert!(g.right() <= 64, "neighbourhood masks hold 64 vertices");
    let mut best = 0i64;
    for s in 0u32..(1 << g.left()) {
        let mut n = 0u64;
        for (u, mask) in masks.iter().enumerate() {
            if s >> u & 1 == 1 {
                n |= mask;
            }
        }
        best = best.max(s.count_ones() as i64 - n.count_ones() as i64);
    }
    g.left() - best as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(left: usize, right: usize, edges: &[(usize, usize)]) -> Bipartite {
        let mut g = Bipartite::new(left, right);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    #[test]
    fn small_cases() {
        let g = graph(3, 3, &[(0, 0), (1, 0), (2, 0)]);
        let m = maximum_matching(&g);
        assert_eq!(m.size(), 1);
        let c = hall_certificate(&g, &m);
        assert_eq!(c.deficiency(), 2);
        assert_eq!(hall_exhaustive(&g), 1);

        let g = graph(3, 3, &[(0, 0), (0, 1), (1, 0), (2, 1), (2, 2)]);
        assert_eq!(maximum_matching(&g).size(), 3);
        assert_eq!(hall_exhaustive(&g), 3);

        let g = graph(0, 4, &[]);
        assert_eq!(maximum_matching(&g).size(), 0);
    }

    #[test]
    fn repair_tracks_insertions() {
        let mut g = Bipartite::new(3, 3);
        let mut m = Matching::empty(&g);
        let mut last = 0;
        for (u, v) in [(0, 0), (1, 0), (1, 1), (2, 1), (0, 2)] {
            g.add_edge(u, v);
            m.repair(&g);
            assert!(m.size() >= last);
            last = m.size();
            assert_eq!(m.size(), maximum_matching(&g).size());
        }
        assert_eq!(last, 3);
    }
}
