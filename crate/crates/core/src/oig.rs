//! One-inclusion graphs of finite pattern classes, min-max out-degree
//! orientations, and the transductive predictor they induce.
//!
//! An orientation stores, for every edge, its head `σ(e)`. The other
//! endpoint is the tail, and a vertex's out-degree counts the edges it is
//! the tail of. Predicting a held-out coordinate returns the head of the
//! edge joining the two candidate patterns.

use std::collections::{HashMap, VecDeque};
use std::path::Path;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{Error, Result};

/// Largest pattern length whose full cube may be materialized.
pub const PATTERN_BITS_LIMIT: usize = 20;
/// Largest number of patterns in a class.
pub const PATTERN_LIMIT: usize = 1 << PATTERN_BITS_LIMIT;

/// Non-empty, duplicate-free set of equal-length patterns in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PatternClass {
    width: usize,
    patterns: Vec<BitString>,
}

impl PatternClass {
    pub fn new(width: usize, mut patterns: Vec<BitString>) -> Result<Self> {
        if patterns.is_empty() {
            return Err(Error::arg("pattern class must be non-empty"));
        }
        if let Some(p) = patterns.iter().find(|p| p.len() != width) {
            return Err(Error::arg(format!("pattern {p} does not have length {width}")));
        }
        patterns.sort_unstable();
        patterns.dedup();
        if patterns.len() > PATTERN_LIMIT {
            return Err(Error::GuardExceeded(format!(
                "{} patterns exceed the limit of {PATTERN_LIMIT}",
                patterns.len()
            )));
        }
        Ok(PatternClass { width, patterns })
    }

    /// Number of coordinates.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of patterns.
    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn patterns(&self) -> &[BitString] {
        &self.patterns
    }

    pub fn index_of(&self, p: &BitString) -> Option<usize> {
        self.patterns.binary_search(p).ok()
    }

    /// `{"patterns":[[0,1,...],...]}`.
    pub fn from_json_str(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            patterns: Vec<BitString>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| Error::Parse(format!("patterns: {e}")))?;
        let width = raw.patterns.first().map_or(0, BitString::len);
        Self::new(width, raw.patterns)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct OigEdge {
    /// Index of the lexicographically smaller endpoint.
    pub u: usize,
    pub v: usize,
    /// The coordinate where the endpoints differ.
    pub coord: usize,
}

#[derive(Clone, Debug)]
pub struct OneInclusionGraph {
    class: PatternClass,
    /// Sorted by `(u, v)`.
    edges: Vec<OigEdge>,
    incident: Vec<Vec<usize>>,
}

impl OneInclusionGraph {
    pub fn class(&self) -> &PatternClass {
        &self.class
    }

    pub fn vertex_count(&self) -> usize {
        self.class.len()
    }

    pub fn edges(&self) -> &[OigEdge] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.incident.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// The edge joining patterns `a` and `b`, if any.
    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        self.edges.binary_search_by(|e| (e.u, e.v).cmp(&(u, v))).ok()
    }
}

/// Connects patterns at Hamming distance 1 by bucketing on each masked coordinate.
pub fn build_oig(pc: &PatternClass) -> OneInclusionGraph {
    let n = pc.len();
    let mut edges = Vec::new();
    let mut buckets: HashMap<BitString, usize> = HashMap::with_capacity(n);
    for coord in 0..pc.width() {
        buckets.clear();
        for (i, p) in pc.patterns().iter().enumerate() {
            let mut key = p.clone();
            key.set(coord, false);
            if let Some(j) = buckets.insert(key, i) {
                edges.push(OigEdge {
                    u: j.min(i),
                    v: j.max(i),
                    coord,
                });
            }
        }
    }
    edges.sort_unstable();
    let mut incident = vec![Vec::new(); n];
    for (k, e) in edges.iter().enumerate() {
        incident[e.u].push(k);
        incident[e.v].push(k);
    }
    OneInclusionGraph {
        class: pc.clone(),
        edges,
        incident,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orientation {
    /// `heads[k]` is the endpoint edge `k` points to.
    pub heads: Vec<usize>,
}

impl Orientation {
    pub fn out_degrees(&self, oig: &OneInclusionGraph) -> Vec<usize> {
        let mut out = vec![0; oig.vertex_count()];
        for (e, &h) in oig.edges().iter().zip(&self.heads) {
            out[if h == e.u { e.v } else { e.u }] += 1;
        }
        out
    }

    pub fn max_out_degree(&self, oig: &OneInclusionGraph) -> usize {
        self.out_degrees(oig).into_iter().max().unwrap_or(0)
    }
}

struct Arc_ {
    to: usize,
    cap: u32,
}

/// Dinic's algorithm over a fixed arc insertion order.
struct FlowNetwork {
    arcs: Vec<Arc_>,
    adj: Vec<Vec<usize>>,
    level: Vec<i32>,
    cursor: Vec<usize>,
}

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        FlowNetwork {
            arcs: Vec::new(),
            adj: vec![Vec::new(); nodes],
            level: vec![0; nodes],
            cursor: vec![0; nodes],
        }
    }

    fn add(&mut self, from: usize, to: usize, cap: u32) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc_ { to, cap });
        self.adj[from].push(id);
        self.arcs.push(Arc_ { to: from, cap: 0 });
        self.adj[to].push(id + 1);
        id
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &a in &self.adj[v] {
                let arc = &self.arcs[a];
                if arc.cap > 0 && self.level[arc.to] < 0 {
                    self.level[arc.to] = self.level[v] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        self.level[t] >= 0
    }

    // iterative blocking-flow search; every augmenting path carries one unit
    fn augment(&mut self, s: usize, t: usize) -> bool {
        let mut path: Vec<usize> = Vec::new();
        let mut v = s;
        loop {
            if v == t {
                for &a in &path {
                    self.arcs[a].cap -= 1;
                    self.arcs[a ^ 1].cap += 1;
                }
                return true;
            }
            let mut advanced = false;
            while self.cursor[v] < self.adj[v].len() {
                let a = self.adj[v][self.cursor[v]];
                let arc = &self.arcs[a];
                if arc.cap > 0 && self.level[arc.to] == self.level[v] + 1 {
                    path.push(a);
                    v = arc.to;
                    advanced = true;
                    break;
                }
                self.cursor[v] += 1;
            }
            if !advanced {
                if v == s {
                    return false;
                }
                // dead end: retreat and skip the arc that led here
                self.level[v] = -1;
                let a = path.pop().expect("non-source node has an incoming path arc");
                v = self.arcs[a ^ 1].to;
                self.cursor[v] += 1;
            }
        }
    }

    fn max_flow(&mut self, s: usize, t: usize) -> usize {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.cursor.iter_mut().for_each(|c| *c = 0);
            while self.augment(s, t) {
                flow += 1;
            }
        }
        flow
    }
}

/// Orientation with out-degree at most `k` everywhere, if one exists.
fn orient_within(oig: &OneInclusionGraph, k: usize) -> Option<Orientation> {
    let m = oig.edges().len();
    let n = oig.vertex_count();
    let source = 0;
    let sink = 1 + m + n;
    let mut net = FlowNetwork::new(m + n + 2);
    let mut take = Vec::with_capacity(m);
    for (i, e) in oig.edges().iter().enumerate() {
        net.add(source, 1 + i, 1);
        let to_u = net.add(1 + i, 1 + m + e.u, 1);
        net.add(1 + i, 1 + m + e.v, 1);
        take.push(to_u);
    }
    for v in 0..n {
        net.add(1 + m + v, sink, k as u32);
    }
    if net.max_flow(source, sink) < m {
        return None;
    }
    // flow into an endpoint makes it the tail of that edge
    let heads = oig
        .edges()
        .iter()
        .zip(&take)
        .map(|(e, &a)| if net.arcs[a].cap == 0 { e.v } else { e.u })
        .collect();
    Some(Orientation { heads })
}

/// Exact minimum of the maximum out-degree, by binary search on the bound
/// with a max-flow feasibility check.
pub fn orient_min_max_outdegree(oig: &OneInclusionGraph) -> (Orientation, usize) {
    let (mut lo, mut hi) = (0, oig.max_degree());
    let mut best = orient_within(oig, hi).expect("max degree bound is always feasible");
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match orient_within(oig, mid) {
            Some(o) => {
                best = o;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    if best.max_out_degree(oig) != lo {
        best = orient_within(oig, lo).expect("bound found feasible by the search");
    }
    (best, lo)
}

/// A pattern class with its canonical orientation.
#[derive(Debug)]
pub struct OneInclusionPredictor {
    oig: OneInclusionGraph,
    orientation: Orientation,
    max_out_degree: usize,
}

impl OneInclusionPredictor {
    pub fn new(pc: &PatternClass) -> Self {
        let oig = build_oig(pc);
        let (orientation, max_out_degree) = orient_min_max_outdegree(&oig);
        OneInclusionPredictor {
            oig,
            orientation,
            max_out_degree,
        }
    }

    pub fn class(&self) -> &PatternClass {
        self.oig.class()
    }

    pub fn graph(&self) -> &OneInclusionGraph {
        &self.oig
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    pub fn max_out_degree(&self) -> usize {
        self.max_out_degree
    }

    /// Label of coordinate `hole` given every other coordinate of `known`
    /// (the value of `known` at `hole` is ignored).
    pub fn predict_coordinate(&self, known: &BitString, hole: usize) -> Result<bool> {
        let pc = self.class();
        if known.len() != pc.width() || hole >= pc.width() {
            return Err(Error::arg(format!(
                "query of length {} with hole {hole} against patterns of length {}",
                known.len(),
                pc.width()
            )));
        }
        let mut zero = known.clone();
        zero.set(hole, false);
        let one = zero.flipped(hole);
        match (pc.index_of(&zero), pc.index_of(&one)) {
            (Some(a), Some(b)) => {
                let e = self
                    .oig
                    .edge_between(a, b)
                    .expect("patterns at distance 1 are joined by an edge");
                Ok(self.orientation.heads[e] == b)
            }
            (Some(_), None) => Ok(false),
            (None, Some(_)) => Ok(true),
            (None, None) => Err(Error::NotRealizable(format!(
                "no pattern extends the observed labels at coordinate {hole}"
            ))),
        }
    }

    /// Predicts the last coordinate from the labels of the others.
    pub fn predict(&self, observed: &BitString) -> Result<bool> {
        let w = self.class().width();
        if w == 0 || observed.len() + 1 != w {
            return Err(Error::arg(format!(
                "observed prefix has length {} for patterns of length {w}",
                observed.len()
            )));
        }
        let mut known = BitString::zeros(w);
        for i in 0..observed.len() {
            known.set(i, observed.get(i));
        }
        self.predict_coordinate(&known, w - 1)
    }

    /// Leave-one-out mistakes on `truth` over all coordinates, sharing this orientation.
    pub fn loo_error(&self, truth: &BitString) -> Result<LooError> {
        if self.class().index_of(truth).is_none() {
            return Err(Error::arg(format!("pattern {truth} is not in the class")));
        }
        let holdouts = truth.len();
        let mut mistakes = 0;
        for i in 0..holdouts {
            if self.predict_coordinate(truth, i)? != truth.get(i) {
                mistakes += 1;
            }
        }
        Ok(LooError { mistakes, holdouts })
    }
}

/// `oig_predict` as a free function; builds the orientation on every call.
pub fn oig_predict(pc: &PatternClass, observed: &BitString) -> Result<bool> {
    OneInclusionPredictor::new(pc).predict(observed)
}

/// `loo_error` as a free function; builds the orientation on every call.
pub fn loo_error(pc: &PatternClass, truth: &BitString) -> Result<LooError> {
    OneInclusionPredictor::new(pc).loo_error(truth)
}

/// Exact rational `mistakes / holdouts`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LooError {
    pub mistakes: usize,
    pub holdouts: usize,
}

impl LooError {
    pub fn value(&self) -> f64 {
        if self.holdouts == 0 {
            0.0
        } else {
            self.mistakes as f64 / self.holdouts as f64
        }
    }
}

/// Shared memo from pattern class to its canonical predictor.
#[derive(Debug, Default)]
pub struct OrientationCache {
    map: Mutex<HashMap<PatternClass, Arc<OneInclusionPredictor>>>,
}

impl OrientationCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, pc: PatternClass) -> Arc<OneInclusionPredictor> {
        if let Some(p) = self.map.lock().expect("cache lock").get(&pc) {
            return Arc::clone(p);
        }
        // built outside the lock; a concurrent duplicate build yields the same value
        let built = Arc::new(OneInclusionPredictor::new(&pc));
        Arc::clone(self.map.lock().expect("cache lock").entry(pc).or_insert(built))
    }

    pub fn len(&self) -> usize {
        self.map.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pc(patterns: &[&str]) -> PatternClass {
        let ps: Vec<BitString> = patterns.iter().map(|p| p.parse().unwrap()).collect();
        PatternClass::new(ps[0].len(), ps).unwrap()
    }

    #[test]
    fn single_edge() {
        let c = pc(&["0", "1"]);
        let g = build_oig(&c);
        assert_eq!(g.edges().len(), 1);
        assert_eq!(orient_min_max_outdegree(&g).1, 1);
    }

    #[test]
    fn square() {
        let c = pc(&["00", "01", "10", "11"]);
        let g = build_oig(&c);
        assert_eq!(g.edges().len(), 4);
        assert!((0..4).all(|v| g.degree(v) == 2));
        let (o, k) = orient_min_max_outdegree(&g);
        assert_eq!(k, 1);
        assert_eq!(o.max_out_degree(&g), 1);
    }

    #[test]
    fn cube_needs_two() {
        let all: Vec<String> = (0..8).map(|r| BitString::from_lex_rank(3, r).to_string()).collect();
        let refs: Vec<&str> = all.iter().map(String::as_str).collect();
        let g = build_oig(&pc(&refs));
        // 12 edges over 8 vertices: average out-degree 1.5
        assert_eq!(orient_min_max_outdegree(&g).1, 2);
    }

    #[test]
    fn prediction_cases() {
        let unique = OneInclusionPredictor::new(&pc(&["01", "10"]));
        assert!(unique.predict(&"0".parse().unwrap()).unwrap());
        assert!(!unique.predict(&"1".parse().unwrap()).unwrap());

        let pair = OneInclusionPredictor::new(&pc(&["00", "01"]));
        let first = pair.predict(&"0".parse().unwrap()).unwrap();
        for _ in 0..5 {
            assert_eq!(pair.predict(&"0".parse().unwrap()).unwrap(), first);
        }
        assert!(matches!(
            pair.predict(&"1".parse().unwrap()),
            Err(Error::NotRealizable(_))
        ));
    }

    #[test]
    fn loo_cases() {
        let single = pc(&["0110"]);
        assert_eq!(loo_error(&single, &"0110".parse().unwrap()).unwrap().mistakes, 0);
        let full1 = pc(&["0", "1"]);
        for t in ["0", "1"] {
            assert!(loo_error(&full1, &t.parse().unwrap()).unwrap().mistakes <= 1);
        }
    }

    #[test]
    fn cache_returns_same_predictor() {
        let cache = OrientationCache::new();
        let a = cache.get(pc(&["00", "01", "11"]));
        let b = cache.get(pc(&["11", "01", "00"]));
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(cache.len(), 1);
    }

    #[test]
    fn json_patterns() {
        let p = PatternClass::from_json_str(r#"{"patterns":[[0,1],[1,1],[0,1]]}"#).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.width(), 2);
        assert!(PatternClass::from_json_str(r#"{"patterns":[]}"#).is_err());
    }
}
