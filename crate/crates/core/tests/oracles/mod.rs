//! Reference implementations for the tests. They share no code with the
//! library and favour obviousness over speed.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use rand::Rng;

/// Every node from which `origin` can be reached, found by repeatedly
/// sweeping the arc list until nothing changes. Includes `origin`.
pub fn reaching_set(arcs: &[(u32, u32)], origin: u32) -> BTreeSet<u32> {
    let mut set = BTreeSet::from([origin]);
    loop {
        let before = set.len();
        for &(s, d) in arcs {
            if set.contains(&d) {
                set.insert(s);
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

/// Kahn's algorithm over an arbitrary node labelling.
pub fn is_acyclic(arcs: &[(u32, u32)]) -> bool {
    let nodes: BTreeSet<u32> = arcs.iter().flat_map(|&(s, d)| [s, d]).collect();
    let mut indeg: std::collections::BTreeMap<u32, usize> = nodes.iter().map(|&n| (n, 0)).collect();
    for &(_, d) in arcs {
        *indeg.get_mut(&d).unwrap() += 1;
    }
    let mut queue: VecDeque<u32> = indeg.iter().filter(|(_, &k)| k == 0).map(|(&n, _)| n).collect();
    let mut seen = 0;
    while let Some(n) = queue.pop_front() {
        seen += 1;
        for &(s, d) in arcs {
            if s == n {
                let k = indeg.get_mut(&d).unwrap();
                *k -= 1;
                if *k == 0 {
                    queue.push_back(d);
                }
            }
        }
    }
    seen == nodes.len()
}

/// All-pairs shortest path lengths by Floyd-Warshall; `None` when unreachable.
pub fn all_pairs_distances(n: usize, arcs: &[(usize, usize)]) -> Vec<Vec<Option<usize>>> {
    let mut d = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(0);
    }
    for &(s, t) in arcs {
        d[s][t] = Some(1);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

/// All permutations of 0..n in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// Tries every bijection.
pub fn isomorphic(n: usize, a: &[(usize, usize)], m: usize, b: &[(usize, usize)]) -> bool {
    if n != m || a.len() != b.len() {
        return false;
    }
    let target: BTreeSet<(usize, usize)> = b.iter().copied().collect();
    permutations(n)
        .iter()
        .any(|p| a.iter().all(|&(s, d)| target.contains(&(p[s], p[d]))))
}

pub fn relabel(arcs: &[(usize, usize)], perm: &[usize]) -> Vec<(usize, usize)> {
    arcs.iter().map(|&(s, d)| (perm[s], perm[d])).collect()
}

pub fn shuffled(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        p.swap(i, j);
    }
    p
}

/// Random DAG on `n` nodes: arcs only from a higher to a lower position of
/// a hidden random order, each present with probability `p`.
pub fn random_dag(n: usize, p: f64, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    let order = shuffled(n, rng);
    let mut arcs = Vec::new();
    for hi in 0..n {
        for lo in 0..hi {
            if rng.random_bool(p) {
                arcs.push((order[hi], order[lo]));
            }
        }
    }
    arcs
}

/// Inverse-CDF sampler for the discrete power law P(x) = x^(-a) / zeta(a),
/// x >= 1. Values up to `table` use an exact cumulative table; the remaining
/// mass is drawn from the continuous Pareto law on [table + 1/2, inf) and
/// rounded, which matches the discrete tail to O(table^(-a-2)).
pub struct PowerLawSampler {
    cumulative: Vec<f64>,
    tail_start: f64,
    a: f64,
    total: f64,
}

impl PowerLawSampler {
    pub fn new(a: f64, table: usize) -> Self {
        let mut cumulative = Vec::with_capacity(table);
        let mut acc = 0.0;
        for x in 1..=table {
            acc += (x as f64).powf(-a);
            cumulative.push(acc);
        }
        let tail_start = table as f64 + 0.5;
        let tail = tail_start.powf(1.0 - a) / (a - 1.0);
        PowerLawSampler {
            cumulative,
            tail_start,
            a,
            total: acc + tail,
        }
    }

    pub fn sample(&self, rng: &mut impl Rng) -> u64 {
        let u = rng.random::<f64>() * self.total;
        let table_mass = *self.cumulative.last().unwrap();
        if u < table_mass {
            self.cumulative.partition_point(|&c| c <= u) as u64 + 1
        } else {
            let v: f64 = 1.0 - rng.random::<f64>();
            (self.tail_start * v.powf(-1.0 / (self.a - 1.0))).round() as u64
        }
    }
}
