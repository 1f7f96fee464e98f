//! The characterization parameters: α1 (largest independent shattered set),
//! α2 (largest independent bichromatic set) and their family variants.
//!
//! Witnesses are lexicographically smallest among maximum sets.

use serde::Serialize;

use crate::concepts::{Concept, ConceptClass};
use crate::error::{Error, Result};
use crate::graph::{independence_number, DirectedGraph, IndependentSet, VertexId};
use crate::learner::choose_k;

/// Default leading constant of [`theoretical_sample_bound`].
pub const DEFAULT_BOUND_CONSTANT: f64 = 8.0;

fn check_concept(g: &DirectedGraph, c: &Concept) -> Result<()> {
    if c.len() != g.order() {
        return Err(Error::arg(format!(
            "concept has length {} but the graph has {} vertices",
            c.len(),
            g.order()
        )));
    }
    Ok(())
}

fn check_class(g: &DirectedGraph, cc: &ConceptClass) -> Result<()> {
    if cc.domain_size() != g.order() {
        return Err(Error::arg(format!(
            "class is over {} points but the graph has {} vertices",
            cc.domain_size(),
            g.order()
        )));
    }
    Ok(())
}

/// Depth-first search over sorted vertex sets, extending only sets that pass
/// `accept`. The property must be hereditary. Keeps the first set found of
/// each new record size, which is the lexicographically smallest one.
struct HereditarySearch<F> {
    n: usize,
    cap: usize,
    budget: u64,
    explored: u64,
    best: Vec<VertexId>,
    accept: F,
}

impl<F: FnMut(&[VertexId]) -> Result<bool>> HereditarySearch<F> {
    fn run(mut self) -> Result<IndependentSet> {
        let mut current = Vec::new();
        match self.grow(0, &mut current) {
            Ok(()) => Ok(IndependentSet {
                size: self.best.len(),
                witness: self.best,
            }),
            Err(Error::BudgetExhausted { budget, .. }) => Err(Error::BudgetExhausted {
                budget,
                lower_bound: self.best.len(),
                witness: self.best,
            }),
            Err(e) => Err(e),
        }
    }

    fn grow(&mut self, from: VertexId, current: &mut Vec<VertexId>) -> Result<()> {
        self.explored += 1;
        if self.explored > self.budget {
            return Err(Error::BudgetExhausted {
                budget: self.budget,
                lower_bound: 0,
                witness: Vec::new(),
            });
        }
        if current.len() > self.best.len() {
            self.best = current.clone();
        }
        for v in from..self.n {
            if self.best.len() >= self.cap || current.len() + (self.n - v) <= self.best.len() {
                break;
            }
            current.push(v);
            if (self.accept)(current)? {
                self.grow(v + 1, current)?;
            }
            current.pop();
        }
        Ok(())
    }
}

fn floor_log2(x: usize) -> usize {
    if x == 0 {
        0
    } else {
        (usize::BITS - 1 - x.leading_zeros()) as usize
    }
}

/// Largest independent set of `g` shattered by `cc`.
pub fn alpha1(g: &DirectedGraph, cc: &ConceptClass, budget: u64) -> Result<IndependentSet> {
    check_class(g, cc)?;
    match cc {
        ConceptClass::Full { .. } => independence_number(g, budget),
        ConceptClass::Singleton(_) => Ok(IndependentSet {
            size: 0,
            witness: Vec::new(),
        }),
        ConceptClass::Thresholds { n } => Ok(if *n == 0 {
            IndependentSet {
                size: 0,
                witness: Vec::new(),
            }
        } else {
            IndependentSet {
                size: 1,
                witness: vec![0],
            }
        }),
        ConceptClass::Explicit { n, concepts } => HereditarySearch {
            n: *n,
            cap: floor_log2(concepts.len()),
            budget,
            explored: 0,
            best: Vec::new(),
            accept: |set: &[VertexId]| {
                let (&last, rest) = set.split_last().expect("non-empty");
                // independence first: it is the cheaper test
                Ok(rest.iter().all(|&u| !g.adjacent(u, last)) && cc.shatters(set)?)
            },
        }
        .run(),
    }
}

/// Vertices with an out-neighbor of the opposite label.
pub fn bichromatic_vertices(g: &DirectedGraph, c: &Concept) -> Result<Vec<VertexId>> {
    check_concept(g, c)?;
    Ok((0..g.order())
        .filter(|&x| g.out_neighbors(x).iter().any(|&u| c.get(u) != c.get(x)))
        .collect())
}

fn alpha_of_induced(g: &DirectedGraph, set: &[VertexId], budget: u64) -> Result<IndependentSet> {
    let (sub, map) = g.induced_subgraph(set)?;
    match independence_number(&sub, budget) {
        Ok(r) => Ok(IndependentSet {
            size: r.size,
            witness: r.witness.iter().map(|&i| map[i]).collect(),
        }),
        Err(Error::BudgetExhausted {
            budget,
            lower_bound,
            witness,
        }) => Err(Error::BudgetExhausted {
            budget,
            lower_bound,
            witness: witness.iter().map(|&i| map[i]).collect(),
        }),
        Err(e) => Err(e),
    }
}

/// `α(G_c)`: the independence number of the bichromatic subgraph.
pub fn alpha2_concept(g: &DirectedGraph, c: &Concept, budget: u64) -> Result<IndependentSet> {
    let xc = bichromatic_vertices(g, c)?;
    alpha_of_induced(g, &xc, budget)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Alpha2Witness {
    pub size: usize,
    pub witness: Vec<VertexId>,
    pub concept: Concept,
}

/// Maximum of [`alpha2_concept`] over the class; ties keep the first member.
pub fn alpha2_class(g: &DirectedGraph, cc: &ConceptClass, budget: u64) -> Result<Alpha2Witness> {
    check_class(g, cc)?;
    if let ConceptClass::Full { n } = cc {
        // any independent set of vertices with an out-neighbor is made
        // bichromatic by labeling exactly that set 1
        let with_out: Vec<VertexId> = (0..*n).filter(|&v| !g.out_neighbors(v).is_empty()).collect();
        let r = alpha_of_induced(g, &with_out, budget)?;
        let mut concept = Concept::zeros(*n);
        for &v in &r.witness {
            concept.set(v, true);
        }
        return Ok(Alpha2Witness {
            size: r.size,
            witness: r.witness,
            concept,
        });
    }
    let mut best: Option<Alpha2Witness> = None;
    for c in cc.iter()? {
        let r = alpha2_concept(g, &c, budget)?;
        if best.as_ref().is_none_or(|b| r.size > b.size) {
            best = Some(Alpha2Witness {
                size: r.size,
                witness: r.witness,
                concept: c,
            });
        }
    }
    Ok(best.expect("concept classes are non-empty"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyParams {
    pub alpha1: IndependentSet,
    pub alpha2: IndependentSet,
    /// Index of the pair attaining `alpha2`.
    pub alpha2_pair: usize,
}

/// α1 and α2 of a family of (graph, concept) pairs over one domain.
pub fn family_params(pairs: &[(DirectedGraph, Concept)], budget: u64) -> Result<FamilyParams> {
    let (first, _) = pairs
        .first()
        .ok_or_else(|| Error::arg("family must contain at least one pair"))?;
    let n = first.order();
    for (i, (g, c)) in pairs.iter().enumerate() {
        if g.order() != n {
            return Err(Error::arg(format!("pair {i} has {} vertices, expected {n}", g.order())));
        }
        check_concept(g, c)?;
    }
    let alpha1 = HereditarySearch {
        n,
        cap: floor_log2(pairs.len()),
        budget,
        explored: 0,
        best: Vec::new(),
        accept: |set: &[VertexId]| {
            let needed = 1usize << set.len();
            let mut seen = std::collections::HashSet::new();
            for (g, c) in pairs {
                if g.is_independent(set)? {
                    seen.insert(c.project(set));
                    if seen.len() == needed {
                        return Ok(true);
                    }
                }
            }
            Ok(false)
        },
    }
    .run()?;
    let mut alpha2 = IndependentSet {
        size: 0,
        witness: Vec::new(),
    };
    let mut alpha2_pair = 0;
    for (i, (g, c)) in pairs.iter().enumerate() {
        let r = alpha2_concept(g, c, budget)?;
        if i == 0 || r.size > alpha2.size {
            alpha2 = r;
            alpha2_pair = i;
        }
    }
    Ok(FamilyParams {
        alpha1,
        alpha2,
        alpha2_pair,
    })
}

/// Planning estimate `⌈C0 (α1 + α2 max(1, ln 1/ε)) / ε⌉ · k(δ)`, with the
/// first factor at least 1 and `k` from [`choose_k`].
pub fn theoretical_sample_bound(alpha1: usize, alpha2: usize, eps: f64, delta: f64) -> Result<u64> {
    theoretical_sample_bound_with(DEFAULT_BOUND_CONSTANT, alpha1, alpha2, eps, delta)
}

pub fn theoretical_sample_bound_with(c0: f64, alpha1: usize, alpha2: usize, eps: f64, delta: f64) -> Result<u64> {
    for (name, v) in [("eps", eps), ("delta", delta)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::arg(format!("{name} = {v} outside (0, 1)")));
        }
    }
    let log_term = (1.0 / eps).ln().max(1.0);
    let per_block = (c0 * (alpha1 as f64 + alpha2 as f64 * log_term) / eps).ceil().max(1.0);
    Ok(per_block as u64 * choose_k(delta)? as u64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParamValue {
    pub value: usize,
    pub witness: Vec<VertexId>,
    /// False when the search budget ran out and `value` is only a lower bound.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParamReport {
    pub alpha: ParamValue,
    pub alpha1: ParamValue,
    pub alpha2: ParamValue,
    /// Member of the class attaining `alpha2`, when it was determined.
    pub alpha2_concept: Option<Concept>,
}

impl ParamReport {
    pub fn all_exact(&self) -> bool {
        self.alpha.exact && self.alpha1.exact && self.alpha2.exact
    }
}

fn tolerate_budget(r: Result<IndependentSet>) -> Result<ParamValue> {
    match r {
        Ok(s) => Ok(ParamValue {
            value: s.size,
            witness: s.witness,
            exact: true,
        }),
        Err(Error::BudgetExhausted {
            lower_bound, witness, ..
        }) => Ok(ParamValue {
            value: lower_bound,
            witness,
            exact: false,
        }),
        Err(e) => Err(e),
    }
}

/// α(G), α1(G,C) and α2(G,C); budget exhaustion degrades a value to a
/// flagged lower bound instead of failing.
pub fn param_report(g: &DirectedGraph, cc: &ConceptClass, budget: u64) -> Result<ParamReport> {
    let alpha = tolerate_budget(independence_number(g, budget))?;
    let alpha1 = tolerate_budget(alpha1(g, cc, budget))?;
    let (alpha2, alpha2_concept) = match alpha2_class(g, cc, budget) {
        Ok(w) => (
            ParamValue {
                value: w.size,
                witness: w.witness,
                exact: true,
            },
            Some(w.concept),
        ),
        Err(Error::BudgetExhausted {
            lower_bound, witness, ..
        }) => (
            ParamValue {
                value: lower_bound,
                witness,
                exact: false,
            },
            None,
        ),
        Err(e) => return Err(e),
    };
    Ok(ParamReport {
        alpha,
        alpha1,
        alpha2,
        alpha2_concept,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> Concept {
        s.parse().unwrap()
    }

    #[test]
    fn alpha1_special_classes() {
        let g = DirectedGraph::path(5);
        assert_eq!(alpha1(&g, &ConceptClass::full(5), 1_000).unwrap().size, 3);
        assert_eq!(
            alpha1(&g, &ConceptClass::singleton(bs("01010")), 1_000).unwrap().size,
            0
        );
        let e = DirectedGraph::edgeless(4);
        let cc = ConceptClass::explicit(vec![bs("0000"), bs("0110"), bs("1010"), bs("1100")]).unwrap();
        assert_eq!(alpha1(&e, &cc, 1_000).unwrap().size, cc.vc_dimension().unwrap());
    }

    #[test]
    fn alpha1_explicit_respects_edges() {
        let g = DirectedGraph::new(3, [(0, 1)]).unwrap();
        let cc = ConceptClass::explicit(vec![bs("000"), bs("010"), bs("100"), bs("110")]).unwrap();
        // {0,1} is shattered but not independent
        let r = alpha1(&g, &cc, 1_000).unwrap();
        assert_eq!(r.size, 1);
        assert_eq!(r.witness, vec![0]);
    }

    #[test]
    fn bichromatic_on_out_star() {
        let g = DirectedGraph::star(4, false);
        let c = bs("10000");
        assert_eq!(bichromatic_vertices(&g, &c).unwrap(), vec![0]);
        assert!(bichromatic_vertices(&g, &bs("11111")).unwrap().is_empty());
    }

    #[test]
    fn alpha2_on_stars_and_edgeless() {
        let g = DirectedGraph::star(6, true);
        let c = bs("1000000");
        let r = alpha2_concept(&g, &c, 1_000).unwrap();
        assert_eq!(r.size, 6);
        assert_eq!(r.witness, (1..=6).collect::<Vec<_>>());
        assert_eq!(
            alpha2_concept(&DirectedGraph::edgeless(4), &bs("0101"), 10)
                .unwrap()
                .size,
            0
        );
    }

    #[test]
    fn alpha2_class_full_fast_path() {
        let g = DirectedGraph::star(5, true);
        let w = alpha2_class(&g, &ConceptClass::full(6), 1_000).unwrap();
        assert_eq!(w.size, 5);
        assert_eq!(alpha2_concept(&g, &w.concept, 1_000).unwrap().size, 5);
    }

    #[test]
    fn tournament_bounds() {
        let g = DirectedGraph::tournament(6, 3);
        let r = param_report(&g, &ConceptClass::full(6), 10_000).unwrap();
        assert_eq!(r.alpha.value, 1);
        assert!(r.alpha1.value <= 1 && r.alpha2.value <= 1);
        assert!(r.all_exact());
    }

    #[test]
    fn family_single_pair() {
        let g = DirectedGraph::star(3, true);
        let c = bs("1000");
        let f = family_params(&[(g.clone(), c.clone())], 1_000).unwrap();
        assert_eq!(f.alpha1.size, 0);
        assert_eq!(f.alpha2.size, alpha2_concept(&g, &c, 1_000).unwrap().size);
    }

    #[test]
    fn sample_bound() {
        assert_eq!(
            theoretical_sample_bound(0, 0, 0.1, 0.1).unwrap(),
            choose_k(0.1).unwrap() as u64
        );
        // ceil(8 * (3 + 10 ln 10) / 0.1) = 2083, ceil(23 ln 10) = 53
        assert_eq!(theoretical_sample_bound(3, 10, 0.1, 0.1).unwrap(), 2_083 * 53);
        assert!(theoretical_sample_bound(1, 1, 0.0, 0.5).is_err());
    }
}
