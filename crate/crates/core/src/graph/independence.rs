//! Exact and heuristic maximum independent sets.
//!
//! The exact solver is a branch and bound over the symmetric closure of the
//! edge relation: degree-0/1 reductions, branching on a vertex of largest
//! residual degree (include first), greedy clique-cover upper bound, and the
//! greedy set as the starting incumbent. The budget counts search nodes.
//!
//! Once the optimum is known the witness is canonicalized to the
//! lexicographically smallest maximum independent set, so reports are
//! reproducible.

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{DirectedGraph, VertexId};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndependentSet {
    pub size: usize,
    /// Sorted vertex list.
    pub witness: Vec<VertexId>,
}

struct Exhausted;

struct Solver<'a> {
    adj: &'a [FixedBitSet],
    budget: u64,
    explored: u64,
    best: Vec<VertexId>,
    // stop as soon as a set of this size is found
    stop_at: usize,
}

impl Solver<'_> {
    fn residual_degree(&self, v: VertexId, cand: &FixedBitSet) -> usize {
        self.adj[v].intersection_count(cand)
    }

    fn remove_closed(&self, cand: &mut FixedBitSet, v: VertexId) {
        cand.difference_with(&self.adj[v]);
        cand.remove(v);
    }

    fn clique_cover_bound(&self, cand: &FixedBitSet) -> usize {
        // each entry is the set of vertices adjacent to every clique member
        let mut commons: Vec<FixedBitSet> = Vec::new();
        for v in cand.ones() {
            match commons.iter_mut().find(|c| c.contains(v)) {
                Some(c) => c.intersect_with(&self.adj[v]),
                None => commons.push(self.adj[v].clone()),
            }
        }
        commons.len()
    }

    fn search(&mut self, mut cand: FixedBitSet, current: &mut Vec<VertexId>) -> std::result::Result<(), Exhausted> {
        self.explored += 1;
        if self.explored > self.budget {
            return Err(Exhausted);
        }
        let mark = current.len();

        // degree-0 and degree-1 vertices belong to some maximum independent set
        loop {
            let pick = cand.ones().find(|&v| self.residual_degree(v, &cand) <= 1);
            match pick {
                Some(v) => {
                    current.push(v);
                    self.remove_closed(&mut cand, v);
                }
                None => break,
            }
        }

        let result = self.branch(cand, current);
        current.truncate(mark);
        result
    }

    fn branch(&mut self, mut cand: FixedBitSet, current: &mut Vec<VertexId>) -> std::result::Result<(), Exhausted> {
        if current.len() > self.best.len() {
            self.best = current.clone();
        }
        if cand.is_clear() || self.best.len() >= self.stop_at {
            return Ok(());
        }
        // sets of size <= floor are not worth finding
        let target_floor = if self.stop_at == usize::MAX {
            0
        } else {
            self.stop_at - 1
        };
        let floor = self.best.len().max(target_floor);
        let remaining = cand.count_ones(..);
        if current.len() + remaining <= floor {
            return Ok(());
        }
        if current.len() + self.clique_cover_bound(&cand) <= floor {
            return Ok(());
        }

        let mut pivot = usize::MAX;
        let mut pivot_deg = 0;
        for v in cand.ones() {
            let d = self.residual_degree(v, &cand);
            if pivot == usize::MAX || d > pivot_deg {
                pivot = v;
                pivot_deg = d;
            }
        }

        let mut with = cand.clone();
        self.remove_closed(&mut with, pivot);
        current.push(pivot);
        self.search(with, current)?;
        current.pop();

        if self.best.len() >= self.stop_at {
            return Ok(());
        }
        cand.remove(pivot);
        self.search(cand, current)
    }
}

fn full_set(n: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.insert_range(..);
    s
}

/// Exact independence number with a lexicographically smallest maximum
/// witness. Exceeding `budget` search nodes is an error carrying the best
/// independent set found so far.
pub fn independence_number(g: &DirectedGraph, budget: u64) -> Result<IndependentSet> {
    let n = g.order();
    let adj = g.undirected_adjacency();
    let incumbent = greedy_independent_set(g, 0);
    let mut solver = Solver {
        adj,
        budget,
        explored: 0,
        best: incumbent,
        stop_at: usize::MAX,
    };
    let exhausted = |solver: &Solver, best: Vec<VertexId>| {
        let mut witness = best;
        witness.sort_unstable();
        Error::BudgetExhausted {
            budget: solver.budget,
            lower_bound: witness.len(),
            witness,
        }
    };

    if solver.search(full_set(n), &mut Vec::new()).is_err() {
        let best = solver.best.clone();
        return Err(exhausted(&solver, best));
    }
    let alpha = solver.best.len();
    let fallback = solver.best.clone();

    // canonical witness: scan vertices in order, keep v whenever the
    // remaining candidates still admit a completion to size alpha
    let mut chosen = Vec::with_capacity(alpha);
    let mut cand = full_set(n);
    for v in 0..n {
        if chosen.len() == alpha {
            break;
        }
        if !cand.contains(v) {
            continue;
        }
        let mut rest = cand.clone();
        solver.remove_closed(&mut rest, v);
        let need = alpha - chosen.len() - 1;
        let feasible = need == 0 || {
            solver.best.clear();
            solver.stop_at = need;
            if solver.search(rest.clone(), &mut Vec::new()).is_err() {
                return Err(exhausted(&solver, fallback));
            }
            solver.best.len() >= need
        };
        if feasible {
            chosen.push(v);
            cand = rest;
        } else {
            cand.remove(v);
        }
    }
    debug_assert_eq!(chosen.len(), alpha);
    Ok(IndependentSet {
        size: alpha,
        witness: chosen,
    })
}

/// Minimum-residual-degree greedy independent set; ties between equal
/// degrees are broken by a seeded random priority.
pub fn greedy_independent_set(g: &DirectedGraph, seed: u64) -> Vec<VertexId> {
    let n = g.order();
    let adj = g.undirected_adjacency();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let priority: Vec<u64> = (0..n).map(|_| rng.gen()).collect();
    let mut alive = full_set(n);
    let mut picked = Vec::new();
    while !alive.is_clear() {
        let v = alive
            .ones()
            .min_by_key(|&v| (adj[v].intersection_count(&alive), priority[v], v))
            .expect("alive set is non-empty");
        picked.push(v);
        alive.difference_with(&adj[v]);
        alive.remove(v);
    }
    picked.sort_unstable();
    picked
}
