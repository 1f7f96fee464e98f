//! The conditional-average learner, its median-amplified form and the
//! ERM-based variant.
//!
//! Algorithm 1 at a test point `x`: if any sample point lies in `N[x]`, return
//! the fraction of those points labeled 1. Otherwise take the sample points
//! that are isolated among the distinct sample points plus `x`, restrict the
//! class to them (with `x` as the last coordinate) and run the one-inclusion
//! graph predictor.

use std::sync::Arc;

use crate::bits::BitString;
use crate::concepts::{Concept, ConceptClass};
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, VertexId};
use crate::measure::{LabeledSample, Predictor};
use crate::oig::OrientationCache;

/// Multiplier of `ln(1/δ)` in [`choose_k`]; above `1/KL(1/5 || 1/10)`.
pub const AMPLIFICATION_CONSTANT: f64 = 23.0;

/// Per-vertex counts of one (sub)sample.
#[derive(Clone, Debug)]
struct Block {
    sample: LabeledSample,
    count: Vec<u32>,
    ones: Vec<u32>,
    /// Distinct sample vertices adjacent to no other distinct sample vertex.
    isolated: Vec<VertexId>,
}

impl Block {
    fn new(g: &DirectedGraph, sample: LabeledSample) -> Self {
        let n = g.order();
        let mut count = vec![0u32; n];
        let mut ones = vec![0u32; n];
        for &(v, y) in sample.items() {
            count[v] += 1;
            ones[v] += y as u32;
        }
        let distinct: Vec<VertexId> = (0..n).filter(|&v| count[v] > 0).collect();
        let isolated = distinct
            .iter()
            .copied()
            .filter(|&u| distinct.iter().all(|&w| w == u || !g.adjacent(u, w)))
            .collect();
        Block {
            sample,
            count,
            ones,
            isolated,
        }
    }

    /// `(M_x, number of those labeled 1)` over `N[x]`, with multiplicity.
    fn neighborhood_counts(&self, g: &DirectedGraph, x: VertexId) -> (u32, u32) {
        let mut m = self.count[x];
        let mut k = self.ones[x];
        for &u in g.out_neighbors(x) {
            m += self.count[u];
            k += self.ones[u];
        }
        (m, k)
    }

    fn label_of(&self, v: VertexId) -> bool {
        self.ones[v] > 0
    }
}

#[derive(Clone, Debug)]
enum Mode {
    Algorithm1(Block),
    Amplified(Vec<Block>),
    Erm { h: Concept, block: Block },
}

/// A fitted learner; predictions are computed lazily per test point.
#[derive(Clone, Debug)]
pub struct TrainedModel<'a> {
    g: &'a DirectedGraph,
    cc: &'a ConceptClass,
    mode: Mode,
    cache: Arc<OrientationCache>,
}

fn check_inputs(g: &DirectedGraph, cc: &ConceptClass, sample: &LabeledSample) -> Result<()> {
    if cc.domain_size() != g.order() {
        return Err(Error::arg(format!(
            "class is over {} points but the graph has {} vertices",
            cc.domain_size(),
            g.order()
        )));
    }
    sample.check_order(g.order())?;
    if !cc.is_realizable(sample)? {
        return Err(Error::NotRealizable("no member of the class fits the sample".into()));
    }
    Ok(())
}

pub fn fit_algorithm1<'a>(
    g: &'a DirectedGraph,
    cc: &'a ConceptClass,
    sample: &LabeledSample,
) -> Result<TrainedModel<'a>> {
    check_inputs(g, cc, sample)?;
    Ok(TrainedModel {
        g,
        cc,
        mode: Mode::Algorithm1(Block::new(g, sample.clone())),
        cache: Arc::new(OrientationCache::new()),
    })
}

/// Splits the sample into `k` contiguous blocks of `⌊|S|/k⌋` points (the
/// remainder is discarded) and predicts the pointwise median.
pub fn fit_amplified<'a>(
    g: &'a DirectedGraph,
    cc: &'a ConceptClass,
    sample: &LabeledSample,
    k: usize,
) -> Result<TrainedModel<'a>> {
    if k == 0 {
        return Err(Error::arg("amplification needs at least one block"));
    }
    if sample.len() < k {
        return Err(Error::arg(format!(
            "sample of size {} cannot be split into {k} non-empty blocks",
            sample.len()
        )));
    }
    check_inputs(g, cc, sample)?;
    let b = sample.len() / k;
    let blocks = (0..k)
        .map(|i| Block::new(g, sample.slice(i * b, (i + 1) * b)))
        .collect();
    Ok(TrainedModel {
        g,
        cc,
        mode: Mode::Amplified(blocks),
        cache: Arc::new(OrientationCache::new()),
    })
}

/// ERM on `sample_1` (first consistent member in class order), averaged
/// with the labels of `sample_2` points in `N[x]`.
pub fn fit_erm<'a>(
    g: &'a DirectedGraph,
    cc: &'a ConceptClass,
    sample_1: &LabeledSample,
    sample_2: &LabeledSample,
) -> Result<TrainedModel<'a>> {
    check_inputs(g, cc, sample_2)?;
    sample_1.check_order(g.order())?;
    let h = cc
        .first_consistent(sample_1)?
        .ok_or_else(|| Error::NotRealizable("no member of the class fits the ERM sample".into()))?;
    Ok(TrainedModel {
        g,
        cc,
        mode: Mode::Erm {
            h,
            block: Block::new(g, sample_2.clone()),
        },
        cache: Arc::new(OrientationCache::new()),
    })
}

/// Odd length: middle order statistic; even length: midpoint of the two
/// central order statistics.
pub fn median_combine(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::arg("median of an empty list"));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    Ok(if k % 2 == 1 {
        v[k / 2]
    } else {
        (v[k / 2 - 1] + v[k / 2]) / 2.0
    })
}

/// Number of blocks for confidence `1 - δ`: `max(1, ⌈23 ln(1/δ)⌉)`.
pub fn choose_k(delta: f64) -> Result<usize> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::arg(format!("delta = {delta} outside (0, 1)")));
    }
    // the slack absorbs rounding in ln, so that δ = 1/e gives exactly 23
    let k = (AMPLIFICATION_CONSTANT * (1.0 / delta).ln() - 1e-9).ceil();
    Ok((k as usize).max(1))
}

impl TrainedModel<'_> {
    pub fn mode_name(&self) -> &'static str {
        match self.mode {
            Mode::Algorithm1(_) => "algorithm1",
            Mode::Amplified(_) => "amplified",
            Mode::Erm { .. } => "erm",
        }
    }

    /// Number of sub-models (1 unless amplified).
    pub fn blocks(&self) -> usize {
        match &self.mode {
            Mode::Amplified(b) => b.len(),
            _ => 1,
        }
    }

    /// The concept selected by ERM, if this is an ERM model.
    pub fn erm_concept(&self) -> Option<&Concept> {
        match &self.mode {
            Mode::Erm { h, .. } => Some(h),
            _ => None,
        }
    }

    /// `M_x` for the (first) block.
    pub fn neighbor_count(&self, x: VertexId) -> Result<u32> {
        self.g.check_vertex(x)?;
        let block = match &self.mode {
            Mode::Algorithm1(b) | Mode::Erm { block: b, .. } => b,
            Mode::Amplified(bs) => &bs[0],
        };
        Ok(block.neighborhood_counts(self.g, x).0)
    }

    fn predict_block(&self, block: &Block, x: VertexId) -> Result<f64> {
        let (m, k) = block.neighborhood_counts(self.g, x);
        if m > 0 {
            return Ok(k as f64 / m as f64);
        }
        let coords: Vec<VertexId> = block
            .isolated
            .iter()
            .copied()
            .filter(|&u| !self.g.adjacent(u, x))
            .chain(std::iter::once(x))
            .collect();
        let observed = BitString::from_bools(coords[..coords.len() - 1].iter().map(|&u| block.label_of(u)));
        let predictor = self.cache.get(self.cc.restrict(&coords)?);
        match predictor.predict(&observed) {
            Ok(bit) => Ok(bit as u8 as f64),
            Err(Error::NotRealizable(msg)) => Err(Error::Precondition(format!(
                "one-inclusion predictor found no extension for a realizable sample: {msg}"
            ))),
            Err(e) => Err(e),
        }
    }

    pub fn predict_all(&self) -> Result<Vec<f64>> {
        (0..self.g.order()).map(|x| self.predict(x)).collect()
    }

    pub fn sample_len(&self) -> usize {
        match &self.mode {
            Mode::Algorithm1(b) | Mode::Erm { block: b, .. } => b.sample.len(),
            Mode::Amplified(bs) => bs.iter().map(|b| b.sample.len()).sum(),
        }
    }
}

impl Predictor for TrainedModel<'_> {
    fn predict(&self, x: VertexId) -> Result<f64> {
        self.g.check_vertex(x)?;
        match &self.mode {
            Mode::Algorithm1(block) => self.predict_block(block, x),
            Mode::Amplified(blocks) => {
                let preds = blocks
                    .iter()
                    .map(|b| self.predict_block(b, x))
                    .collect::<Result<Vec<_>>>()?;
                median_combine(&preds)
            }
            Mode::Erm { h, block } => {
                let (m, k) = block.neighborhood_counts(self.g, x);
                Ok((h.get(x) as u32 + k) as f64 / (m + 1) as f64)
            }
        }
    }
}
