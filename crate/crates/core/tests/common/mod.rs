//! Brute-force reference implementations used by the integration tests.
//! They share no code with the library beyond its plain data types.

#![allow(dead_code)]

use std::collections::HashSet;

use condavg_core::{BitString, ConceptClass, DirectedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Symmetric adjacency matrix built straight from the edge list.
pub fn adjacency(g: &DirectedGraph) -> Vec<Vec<bool>> {
    let n = g.order();
    let mut a = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

pub fn mask_members(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

pub fn mask_independent(a: &[Vec<bool>], members: &[usize]) -> bool {
    members
        .iter()
        .enumerate()
        .all(|(i, &u)| members[i + 1..].iter().all(|&v| !a[u][v]))
}

/// Largest independent set by enumerating all `2^n` subsets.
pub fn brute_alpha(g: &DirectedGraph) -> usize {
    let a = adjacency(g);
    brute_max_subset(g.order(), |m| mask_independent(&a, m))
}

/// Largest subset (by enumeration) satisfying `pred`.
pub fn brute_max_subset(n: usize, mut pred: impl FnMut(&[usize]) -> bool) -> usize {
    let mut best = 0;
    for mask in 0u32..(1u32 << n) {
        let members = mask_members(mask, n);
        if members.len() > best && pred(&members) {
            best = members.len();
        }
    }
    best
}

pub fn members(cc: &ConceptClass) -> Vec<BitString> {
    cc.iter().expect("enumerable").collect()
}

pub fn brute_shatters(concepts: &[BitString], set: &[usize]) -> bool {
    let patterns: HashSet<Vec<bool>> = concepts
        .iter()
        .map(|c| set.iter().map(|&i| c.get(i)).collect())
        .collect();
    patterns.len() == 1usize << set.len()
}

pub fn brute_vc(concepts: &[BitString], n: usize) -> usize {
    brute_max_subset(n, |s| brute_shatters(concepts, s))
}

pub fn brute_alpha1(g: &DirectedGraph, cc: &ConceptClass) -> usize {
    let a = adjacency(g);
    let cs = members(cc);
    brute_max_subset(g.order(), |s| mask_independent(&a, s) && brute_shatters(&cs, s))
}

pub fn brute_bichromatic(g: &DirectedGraph, c: &BitString) -> Vec<usize> {
    let n = g.order();
    let mut out = Vec::new();
    for x in 0..n {
        let mut has = false;
        for (u, v) in g.edges() {
            if u == x && c.get(v) != c.get(x) {
                has = true;
            }
        }
        if has {
            out.push(x);
        }
    }
    out
}

pub fn brute_alpha2(g: &DirectedGraph, c: &BitString) -> usize {
    let a = adjacency(g);
    let bichromatic = brute_bichromatic(g, c);
    brute_max_subset(g.order(), |s| {
        mask_independent(&a, s) && s.iter().all(|v| bichromatic.contains(v))
    })
}

/// Hamming-distance-1 pairs `(i, j)`, `i < j`, by a quadratic scan.
pub fn brute_oig_edges(patterns: &[BitString]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..patterns.len() {
        for j in i + 1..patterns.len() {
            let diff = (0..patterns[i].len())
                .filter(|&k| patterns[i].get(k) != patterns[j].get(k))
                .count();
            if diff == 1 {
                out.push((i, j));
            }
        }
    }
    out
}

/// Minimum over all `2^|E|` orientations of the maximum out-degree.
pub fn brute_min_max_outdegree(vertices: usize, edges: &[(usize, usize)]) -> usize {
    let mut best = usize::MAX;
    for mask in 0u64..(1u64 << edges.len()) {
        let mut out = vec![0usize; vertices];
        for (k, &(u, v)) in edges.iter().enumerate() {
            if mask >> k & 1 == 1 {
                out[u] += 1;
            } else {
                out[v] += 1;
            }
        }
        best = best.min(out.into_iter().max().unwrap_or(0));
    }
    if best == usize::MAX {
        0
    } else {
        best
    }
}

/// Conditional average straight from the definition, with its own loop order.
pub fn direct_conditional(g: &DirectedGraph, w: &[f64], c: &BitString, x: usize) -> Option<f64> {
    let mut hood = vec![x];
    for (u, v) in g.edges() {
        if u == x {
            hood.push(v);
        }
    }
    let den: f64 = hood.iter().rev().map(|&u| w[u]).sum();
    if den <= 0.0 {
        return None;
    }
    let num: f64 = hood.iter().rev().filter(|&&u| c.get(u)).map(|&u| w[u]).sum();
    Some(num / den)
}

/// Risk summed in reverse vertex order.
pub fn reversed_risk(g: &DirectedGraph, w: &[f64], c: &BitString, h: &[f64]) -> f64 {
    (0..g.order())
        .rev()
        .filter(|&x| w[x] > 0.0)
        .map(|x| {
            let y = direct_conditional(g, w, c, x).expect("positive weight");
            w[x] * (h[x] - y) * (h[x] - y)
        })
        .sum()
}

/// Exact `E[(mean - mu)^2]` by enumerating all `2^m` Bernoulli outcomes.
pub fn enumerated_mean_sq_error(mu: f64, m: usize) -> f64 {
    let mut total = 0.0;
    for mask in 0u32..(1u32 << m) {
        let ones = mask.count_ones() as i32;
        let p = mu.powi(ones) * (1.0 - mu).powi(m as i32 - ones);
        let mean = ones as f64 / m as f64;
        total += p * (mean - mu) * (mean - mu);
    }
    total
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> DirectedGraph {
    let p: f64 = rng.gen_range(0.0..0.7);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    DirectedGraph::new(n, edges).expect("valid edges")
}

pub fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n)
        .map(|_| if rng.gen_bool(0.2) { 0.0 } else { rng.gen::<f64>() })
        .collect();
    if w.iter().all(|&x| x == 0.0) {
        w[0] = 1.0;
    }
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w
}

pub fn random_concept(rng: &mut ChaCha8Rng, n: usize) -> BitString {
    BitString::from_bools((0..n).map(|_| rng.gen::<bool>()))
}

pub fn random_explicit_class(rng: &mut ChaCha8Rng, n: usize, max_size: usize) -> ConceptClass {
    let size = rng.gen_range(1..=max_size);
    let mut seen = HashSet::new();
    let mut concepts = Vec::new();
    for _ in 0..size {
        let c = random_concept(rng, n);
        if seen.insert(c.clone()) {
            concepts.push(c);
        }
    }
    ConceptClass::explicit(concepts).expect("non-empty and duplicate-free")
}

/// All `2^width` patterns.
pub fn cube(width: usize) -> Vec<BitString> {
    (0..1u64 << width).map(|r| BitString::from_lex_rank(width, r)).collect()
}
