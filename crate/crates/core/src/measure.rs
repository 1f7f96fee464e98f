//! Finite distributions, labeled samples, conditional averages and exact risk.

use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::concepts::Concept;
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, VertexId};

/// Tolerance on the total weight accepted at construction.
pub const LOAD_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    weights: Vec<f64>,
}

impl Distribution {
    /// Validates non-negativity and a total within [`LOAD_TOLERANCE`] of 1,
    /// then renormalizes.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::arg("distribution over an empty domain"));
        }
        if let Some(i) = weights.iter().position(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::arg(format!("weight {i} is {}", weights[i])));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > LOAD_TOLERANCE {
            return Err(Error::arg(format!("weights sum to {total}, expected 1")));
        }
        Ok(Distribution {
            weights: weights.into_iter().map(|w| w / total).collect(),
        })
    }

    /// Normalizes arbitrary non-negative weights with a positive total.
    pub fn from_unnormalized(weights: Vec<f64>) -> Result<Self> {
        if let Some(i) = weights.iter().position(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::arg(format!("weight {i} is {}", weights[i])));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::arg("weights have zero total"));
        }
        Ok(Distribution {
            weights: weights.into_iter().map(|w| w / total).collect(),
        })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::arg("distribution over an empty domain"));
        }
        Ok(Distribution {
            weights: vec![1.0 / n as f64; n],
        })
    }

    pub fn point_mass(n: usize, v: VertexId) -> Result<Self> {
        if v >= n {
            return Err(Error::InvalidVertex { vertex: v, order: n });
        }
        let mut weights = vec![0.0; n];
        weights[v] = 1.0;
        Ok(Distribution { weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, v: VertexId) -> f64 {
        self.weights[v]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn mass(&self, set: &[VertexId]) -> f64 {
        set.iter().map(|&v| self.weights[v]).sum()
    }

    pub fn support(&self) -> Vec<VertexId> {
        (0..self.len()).filter(|&v| self.weights[v] > 0.0).collect()
    }

    /// `{"weights":[...]}`, normalized at load.
    pub fn from_json_str(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            weights: Vec<f64>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| Error::Parse(format!("distribution: {e}")))?;
        Self::new(raw.weights)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    fn check_graph(&self, g: &DirectedGraph) -> Result<()> {
        if self.len() != g.order() {
            return Err(Error::arg(format!(
                "distribution has {} weights but the graph has {} vertices",
                self.len(),
                g.order()
            )));
        }
        Ok(())
    }
}

impl Serialize for Distribution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            weights: &'a [f64],
        }
        Raw { weights: &self.weights }.serialize(s)
    }
}

/// Multiset of labeled examples; a vertex never carries both labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabeledSample {
    items: Vec<(VertexId, bool)>,
}

impl LabeledSample {
    pub fn new(items: Vec<(VertexId, bool)>) -> Result<Self> {
        let mut seen = std::collections::HashMap::new();
        for &(v, y) in &items {
            if let Some(prev) = seen.insert(v, y) {
                if prev != y {
                    return Err(Error::NotRealizable(format!("vertex {v} appears with both labels")));
                }
            }
        }
        Ok(LabeledSample { items })
    }

    /// Labels every listed vertex with `c`.
    pub fn labeled_by(c: &Concept, vertices: &[VertexId]) -> Result<Self> {
        if let Some(&v) = vertices.iter().find(|&&v| v >= c.len()) {
            return Err(Error::InvalidVertex {
                vertex: v,
                order: c.len(),
            });
        }
        Ok(LabeledSample {
            items: vertices.iter().map(|&v| (v, c.get(v))).collect(),
        })
    }

    pub fn items(&self) -> &[(VertexId, bool)] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Contiguous sub-sample `[start, end)`.
    pub fn slice(&self, start: usize, end: usize) -> LabeledSample {
        LabeledSample {
            items: self.items[start..end].to_vec(),
        }
    }

    pub fn check_order(&self, n: usize) -> Result<()> {
        match self.items.iter().find(|&&(v, _)| v >= n) {
            Some(&(v, _)) => Err(Error::InvalidVertex { vertex: v, order: n }),
            None => Ok(()),
        }
    }

    /// Debug dump: one `vertex,label` line per example.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        for &(v, y) in &self.items {
            w.write_record([v.to_string(), (y as u8).to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// A map from vertices to predictions in `[0, 1]`.
pub trait Predictor {
    fn predict(&self, x: VertexId) -> Result<f64>;
}

impl<F: Fn(VertexId) -> f64> Predictor for F {
    fn predict(&self, x: VertexId) -> Result<f64> {
        Ok(self(x))
    }
}

/// Conditional label average over `N[x]` for unnormalized weights.
pub(crate) fn weighted_average(g: &DirectedGraph, weights: &[f64], c: &Concept, x: VertexId) -> Result<f64> {
    let mut num = if c.get(x) { weights[x] } else { 0.0 };
    let mut den = weights[x];
    for &u in g.out_neighbors(x) {
        den += weights[u];
        if c.get(u) {
            num += weights[u];
        }
    }
    if den <= 0.0 {
        return Err(Error::UndefinedConditional { vertex: x });
    }
    // a monochromatic neighborhood must give exactly 0 or 1
    if num == den {
        return Ok(1.0);
    }
    Ok((num / den).clamp(0.0, 1.0))
}

fn check_instance(g: &DirectedGraph, d: &Distribution, c: &Concept) -> Result<()> {
    d.check_graph(g)?;
    if c.len() != g.order() {
        return Err(Error::arg(format!(
            "concept has length {} but the graph has {} vertices",
            c.len(),
            g.order()
        )));
    }
    Ok(())
}

/// `E[c(x') | x' in N[x]]` under `d`.
pub fn conditional_average(g: &DirectedGraph, d: &Distribution, c: &Concept, x: VertexId) -> Result<f64> {
    check_instance(g, d, c)?;
    g.check_vertex(x)?;
    weighted_average(g, d.weights(), c, x)
}

/// Conditional averages for every vertex; `None` where the neighborhood has no mass.
pub fn conditional_averages(g: &DirectedGraph, d: &Distribution, c: &Concept) -> Result<Vec<Option<f64>>> {
    check_instance(g, d, c)?;
    (0..g.order())
        .map(|x| match weighted_average(g, d.weights(), c, x) {
            Ok(y) => Ok(Some(y)),
            Err(Error::UndefinedConditional { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect()
}

pub fn pointwise_loss<P: Predictor + ?Sized>(h: &P, y: f64, x: VertexId) -> Result<f64> {
    let diff = h.predict(x)? - y;
    Ok(diff * diff)
}

/// Exact squared-loss risk; zero-weight vertices are skipped.
pub fn risk<P: Predictor + ?Sized>(g: &DirectedGraph, d: &Distribution, c: &Concept, h: &P) -> Result<f64> {
    check_instance(g, d, c)?;
    let mut total = 0.0;
    for x in 0..g.order() {
        let w = d.weight(x);
        if w == 0.0 {
            continue;
        }
        let y = weighted_average(g, d.weights(), c, x)?;
        total += w * pointwise_loss(h, y, x)?;
    }
    Ok(total.clamp(0.0, 1.0))
}

/// `m` i.i.d. draws by inverse CDF from a ChaCha8 stream seeded with `seed`.
pub fn draw_sample(d: &Distribution, c: &Concept, m: usize, seed: u64) -> Result<LabeledSample> {
    if c.len() != d.len() {
        return Err(Error::arg("concept and distribution lengths differ"));
    }
    let mut cumulative = Vec::with_capacity(d.len());
    let mut acc = 0.0;
    for &w in d.weights() {
        acc += w;
        cumulative.push(acc);
    }
    let total = acc;
    let last_positive = d
        .weights()
        .iter()
        .rposition(|&w| w > 0.0)
        .ok_or_else(|| Error::arg("distribution has no mass"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let items = (0..m)
        .map(|_| {
            let u = rng.gen::<f64>() * total;
            let v = cumulative.partition_point(|&cw| cw <= u).min(last_positive);
            (v, c.get(v))
        })
        .collect();
    Ok(LabeledSample { items })
}

/// `(sum_v d(v) d(N+(v)), sum_v d(v) d(N-(v)))`; the two are equal.
pub fn degree_sums(g: &DirectedGraph, d: &Distribution) -> Result<(f64, f64)> {
    d.check_graph(g)?;
    let w = d.weights();
    let mut out_sum = 0.0;
    let mut in_sum = 0.0;
    for v in 0..g.order() {
        out_sum += w[v] * g.out_neighbors(v).iter().map(|&u| w[u]).sum::<f64>();
        in_sum += w[v] * g.in_neighbors(v).iter().map(|&u| w[u]).sum::<f64>();
    }
    Ok((out_sum, in_sum))
}

/// First vertex, in index order, with `d(N+(v)) >= d(N-(v))`.
pub fn balanced_vertex(g: &DirectedGraph, d: &Distribution) -> Result<VertexId> {
    d.check_graph(g)?;
    let all: Vec<VertexId> = (0..g.order()).collect();
    balanced_in(g, d.weights(), &all, &vec![true; g.order()])
        .ok_or_else(|| Error::arg("balanced vertex of an empty graph"))
}

// Balanced vertex of the subgraph induced by `members` (flagged in `alive`).
fn balanced_in(g: &DirectedGraph, w: &[f64], members: &[VertexId], alive: &[bool]) -> Option<VertexId> {
    let masses = |v: VertexId| {
        let out: f64 = g.out_neighbors(v).iter().filter(|&&u| alive[u]).map(|&u| w[u]).sum();
        let inn: f64 = g.in_neighbors(v).iter().filter(|&&u| alive[u]).map(|&u| w[u]).sum();
        (out, inn)
    };
    members
        .iter()
        .copied()
        .find(|&v| {
            let (out, inn) = masses(v);
            out >= inn
        })
        .or_else(|| {
            // only reachable through rounding; take the least unbalanced vertex
            members.iter().copied().max_by(|&a, &b| {
                let (oa, ia) = masses(a);
                let (ob, ib) = masses(b);
                (oa - ia).total_cmp(&(ob - ib)).then(b.cmp(&a))
            })
        })
}

fn closed_mass(g: &DirectedGraph, w: &[f64], v: VertexId) -> f64 {
    w[v] + g.out_neighbors(v).iter().map(|&u| w[u]).sum::<f64>()
}

/// `{v : d(N[v]) <= lambda}` and its mass.
pub fn light_mass(g: &DirectedGraph, d: &Distribution, lambda: f64) -> Result<(f64, Vec<VertexId>)> {
    d.check_graph(g)?;
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::arg(format!("lambda {lambda} outside [0, 1]")));
    }
    let light: Vec<VertexId> = (0..g.order())
        .filter(|&v| closed_mass(g, d.weights(), v) <= lambda)
        .collect();
    Ok((d.mass(&light), light))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RemovalRound {
    pub picked: VertexId,
    /// Sorted; includes `picked`.
    pub removed: Vec<VertexId>,
    pub removed_mass: f64,
}

/// Repeatedly picks a balanced vertex of the residual light subgraph and
/// removes it together with its residual in- and out-neighbors.
pub fn light_removal_witness(g: &DirectedGraph, d: &Distribution, lambda: f64) -> Result<Vec<RemovalRound>> {
    let (_, light) = light_mass(g, d, lambda)?;
    let w = d.weights();
    let mut alive = vec![false; g.order()];
    for &v in &light {
        alive[v] = true;
    }
    let mut residual = light;
    let mut rounds = Vec::new();
    while let Some(v) = balanced_in(g, w, &residual, &alive) {
        let mut removed: Vec<VertexId> = std::iter::once(v)
            .chain(g.out_neighbors(v).iter().copied())
            .chain(g.in_neighbors(v).iter().copied())
            .filter(|&u| alive[u])
            .collect();
        removed.sort_unstable();
        removed.dedup();
        for &u in &removed {
            alive[u] = false;
        }
        residual.retain(|&u| alive[u]);
        rounds.push(RemovalRound {
            picked: v,
            removed_mass: removed.iter().map(|&u| w[u]).sum(),
            removed,
        });
    }
    Ok(rounds)
}

/// Exact `E[(mean of m Bernoulli(mu)) - mu]^2 = mu(1 - mu)/m`.
pub fn empirical_mean_sq_error(mu: f64, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::arg("empirical mean of zero draws"));
    }
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::arg(format!("mu {mu} outside [0, 1]")));
    }
    Ok(mu * (1.0 - mu) / m as f64)
}
