//! Finite directed neighborhood graphs.
//!
//! A [`DirectedGraph`] stores out- and in-adjacency lists plus an undirected
//! adjacency bitset used by the independence solvers. Learners only touch a
//! graph through edge and neighborhood queries.

mod independence;
mod json;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use independence::{greedy_independent_set, independence_number, IndependentSet};
pub use json::GraphJson;

/// Dense vertex index in `[0, n)`.
pub type VertexId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedGraph {
    n: usize,
    out: Vec<Vec<VertexId>>,
    inn: Vec<Vec<VertexId>>,
    // symmetric closure of the edge relation
    adj: Vec<FixedBitSet>,
}

impl DirectedGraph {
    /// Builds a graph from ordered pairs. Self-loops, duplicate pairs and
    /// out-of-range endpoints are rejected.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::arg(format!("edge ({u},{v}) has an endpoint outside [0,{n})")));
            }
            if u == v {
                return Err(Error::arg(format!("self-loop at vertex {u}")));
            }
            out[u].push(v);
            inn[v].push(u);
        }
        for (u, list) in out.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::arg(format!("duplicate edge ({u},{})", w[0])));
            }
        }
        for list in &mut inn {
            list.sort_unstable();
        }
        let mut adj = vec![FixedBitSet::with_capacity(n); n];
        for (u, list) in out.iter().enumerate() {
            for &v in list {
                adj[u].insert(v);
                adj[v].insert(u);
            }
        }
        Ok(DirectedGraph { n, out, inn, adj })
    }

    pub fn edgeless(n: usize) -> Self {
        Self::new(n, std::iter::empty()).expect("edgeless graph is valid")
    }

    /// Every ordered pair of distinct vertices is an edge.
    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)));
        Self::new(n, edges).expect("complete graph is valid")
    }

    /// A uniformly random orientation of the complete undirected graph.
    pub fn tournament(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen::<bool>() {
                    edges.push((u, v));
                } else {
                    edges.push((v, u));
                }
            }
        }
        Self::new(n, edges).expect("tournament is valid")
    }

    /// Star with root 0 and leaves `1..=leaves`. Root-to-leaf edges always,
    /// leaf-to-root edges too when `bidirected`.
    pub fn star(leaves: usize, bidirected: bool) -> Self {
        let mut edges: Vec<_> = (1..=leaves).map(|l| (0, l)).collect();
        if bidirected {
            edges.extend((1..=leaves).map(|l| (l, 0)));
        }
        Self::new(leaves + 1, edges).expect("star is valid")
    }

    /// Directed path `0 -> 1 -> ... -> n-1`.
    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|v| (v - 1, v))).expect("path is valid")
    }

    /// Each ordered pair is an edge independently with probability `p`.
    pub fn random(n: usize, p: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.gen::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        Self::new(n, edges).expect("random graph is valid")
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v,
                order: self.n,
            })
        }
    }

    /// Edge oracle: is `(u, v)` an edge?
    #[inline]
    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.n && self.out[u].binary_search(&v).is_ok()
    }

    /// Edge in either direction.
    #[inline]
    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        u < self.n && v < self.n && self.adj[u].contains(v)
    }

    /// Open out-neighborhood `N+(v)`, sorted.
    #[inline]
    pub fn out_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.out[v]
    }

    /// In-neighborhood `N-(v)`, sorted.
    #[inline]
    pub fn in_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.inn[v]
    }

    pub(crate) fn undirected_adjacency(&self) -> &[FixedBitSet] {
        &self.adj
    }

    pub fn total_degree(&self, v: VertexId) -> usize {
        self.adj[v].count_ones(..)
    }

    /// `N[v] = N+(v) ∪ {v}`, sorted.
    pub fn closed_out_neighborhood(&self, v: VertexId) -> Result<Vec<VertexId>> {
        self.check_vertex(v)?;
        let list = &self.out[v];
        let pos = list.partition_point(|&u| u < v);
        let mut res = Vec::with_capacity(list.len() + 1);
        res.extend_from_slice(&list[..pos]);
        res.push(v);
        res.extend_from_slice(&list[pos..]);
        Ok(res)
    }

    pub fn in_neighborhood(&self, v: VertexId) -> Result<Vec<VertexId>> {
        self.check_vertex(v)?;
        Ok(self.inn[v].clone())
    }

    /// No edge in either direction between any two distinct members.
    pub fn is_independent(&self, set: &[VertexId]) -> Result<bool> {
        for &v in set {
            self.check_vertex(v)?;
        }
        for (i, &u) in set.iter().enumerate() {
            for &v in &set[i + 1..] {
                if u != v && self.adj[u].contains(v) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Subgraph induced by `set`; vertex `i` of the result is `set[i]` here.
    /// Returns the graph and the new-to-old index map.
    pub fn induced_subgraph(&self, set: &[VertexId]) -> Result<(DirectedGraph, Vec<VertexId>)> {
        let mut new_index = vec![usize::MAX; self.n];
        for (i, &v) in set.iter().enumerate() {
            self.check_vertex(v)?;
            if new_index[v] != usize::MAX {
                return Err(Error::arg(format!("vertex {v} listed twice")));
            }
            new_index[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &u) in set.iter().enumerate() {
            for &v in &self.out[u] {
                if new_index[v] != usize::MAX {
                    edges.push((i, new_index[v]));
                }
            }
        }
        let sub = DirectedGraph::new(set.len(), edges)?;
        Ok((sub, set.to_vec()))
    }

    /// Vertices with empty in- and out-neighborhoods.
    pub fn isolated_vertices(&self) -> Vec<VertexId> {
        (0..self.n)
            .filter(|&v| self.out[v].is_empty() && self.inn[v].is_empty())
            .collect()
    }

    /// Same vertex set with every edge reversed.
    pub fn transpose(&self) -> DirectedGraph {
        DirectedGraph::new(self.n, self.edges().map(|(u, v)| (v, u))).expect("transpose is valid")
    }

    /// Applies a uniformly random relabeling of the vertices.
    pub fn shuffled(&self, seed: u64) -> (DirectedGraph, Vec<VertexId>) {
        let mut perm: Vec<VertexId> = (0..self.n).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let g = DirectedGraph::new(self.n, self.edges().map(|(u, v)| (perm[u], perm[v]))).expect("relabeling is valid");
        (g, perm)
    }
}
