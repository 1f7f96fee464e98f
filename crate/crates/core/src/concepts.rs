//! Binary concepts, enumerable concept classes and partial concepts.
//!
//! Generator-backed kinds (`Full`, `Singleton`, `Thresholds`) enumerate
//! lazily and answer shattering, restriction and consistency queries
//! analytically; `Explicit` classes fall back to scanning their members.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, VertexId};
use crate::measure::LabeledSample;
use crate::oig::PatternClass;

/// Labels of all vertices; bit `i` is the label of vertex `i`.
pub type Concept = BitString;

/// Largest domain for which the full class may be enumerated.
pub const FULL_ENUMERATION_LIMIT: usize = 20;
/// Largest set a shattering query accepts.
pub const SHATTER_LIMIT: usize = 30;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConceptClass {
    /// Duplicate-free, non-empty, enumerated in the given order.
    Explicit {
        n: usize,
        concepts: Vec<Concept>,
    },
    /// All `2^n` labelings, in lexicographic order.
    Full {
        n: usize,
    },
    Singleton(Concept),
    /// `concept_t(i) = 1` iff `i < t`, for `t = 0..=n`.
    Thresholds {
        n: usize,
    },
}

impl ConceptClass {
    pub fn explicit(concepts: Vec<Concept>) -> Result<Self> {
        let first = concepts
            .first()
            .ok_or_else(|| Error::arg("explicit concept class must be non-empty"))?;
        let n = first.len();
        let mut seen = HashSet::with_capacity(concepts.len());
        for (i, c) in concepts.iter().enumerate() {
            if c.len() != n {
                return Err(Error::arg(format!(
                    "concept {i} has length {} but concept 0 has length {n}",
                    c.len()
                )));
            }
            if !seen.insert(c) {
                return Err(Error::arg(format!("concept {i} ({c}) is a duplicate")));
            }
        }
        Ok(ConceptClass::Explicit { n, concepts })
    }

    pub fn full(n: usize) -> Self {
        ConceptClass::Full { n }
    }

    pub fn singleton(c: Concept) -> Self {
        ConceptClass::Singleton(c)
    }

    pub fn thresholds(n: usize) -> Self {
        ConceptClass::Thresholds { n }
    }

    pub fn domain_size(&self) -> usize {
        match self {
            ConceptClass::Explicit { n, .. } | ConceptClass::Full { n } | ConceptClass::Thresholds { n } => *n,
            ConceptClass::Singleton(c) => c.len(),
        }
    }

    /// Number of members (saturating for huge full classes).
    pub fn size(&self) -> u128 {
        match self {
            ConceptClass::Explicit { concepts, .. } => concepts.len() as u128,
            ConceptClass::Full { n } => 1u128.checked_shl(*n as u32).unwrap_or(u128::MAX),
            ConceptClass::Singleton(_) => 1,
            ConceptClass::Thresholds { n } => *n as u128 + 1,
        }
    }

    fn kind_name(&self) -> &'static str {
        match self {
            ConceptClass::Explicit { .. } => "explicit",
            ConceptClass::Full { .. } => "full",
            ConceptClass::Singleton(_) => "singleton",
            ConceptClass::Thresholds { .. } => "thresholds",
        }
    }

    fn check_enumerable(&self) -> Result<()> {
        match self {
            ConceptClass::Full { n } if *n > FULL_ENUMERATION_LIMIT => Err(Error::GuardExceeded(format!(
                "full class over {n} points has 2^{n} members (limit 2^{FULL_ENUMERATION_LIMIT})"
            ))),
            _ => Ok(()),
        }
    }

    /// Enumerates the members in canonical order. Each call gets its own cursor.
    pub fn iter(&self) -> Result<ConceptIter<'_>> {
        self.check_enumerable()?;
        Ok(ConceptIter {
            class: self,
            next: 0,
            end: self.size() as u64,
        })
    }

    /// The `index`-th member in canonical order.
    pub fn get(&self, index: u64) -> Result<Concept> {
        if (index as u128) >= self.size() {
            return Err(Error::arg(format!(
                "concept index {index} out of range for a class of {} members",
                self.size()
            )));
        }
        Ok(match self {
            ConceptClass::Explicit { concepts, .. } => concepts[index as usize].clone(),
            ConceptClass::Full { n } => BitString::from_lex_rank(*n, index),
            ConceptClass::Singleton(c) => c.clone(),
            ConceptClass::Thresholds { n } => threshold_concept(*n, index as usize),
        })
    }

    pub fn contains(&self, c: &Concept) -> bool {
        if c.len() != self.domain_size() {
            return false;
        }
        match self {
            ConceptClass::Explicit { concepts, .. } => concepts.contains(c),
            ConceptClass::Full { .. } => true,
            ConceptClass::Singleton(s) => s == c,
            ConceptClass::Thresholds { .. } => {
                let t = c.count_ones();
                (0..c.len()).all(|i| c.get(i) == (i < t))
            }
        }
    }

    fn check_coords(&self, coords: &[VertexId]) -> Result<()> {
        let n = self.domain_size();
        let mut seen = HashSet::with_capacity(coords.len());
        for &v in coords {
            if v >= n {
                return Err(Error::InvalidVertex { vertex: v, order: n });
            }
            if !seen.insert(v) {
                return Err(Error::arg(format!("vertex {v} listed twice")));
            }
        }
        Ok(())
    }

    /// Whether the class realizes all `2^|set|` patterns on `set`.
    pub fn shatters(&self, set: &[VertexId]) -> Result<bool> {
        if set.len() > SHATTER_LIMIT {
            return Err(Error::arg(format!(
                "shattering query on {} points exceeds the limit of {SHATTER_LIMIT}",
                set.len()
            )));
        }
        self.check_coords(set)?;
        let k = set.len();
        Ok(match self {
            ConceptClass::Full { .. } => true,
            ConceptClass::Singleton(_) => k == 0,
            ConceptClass::Thresholds { .. } => k <= 1,
            ConceptClass::Explicit { concepts, .. } => {
                let needed = 1usize << k;
                if concepts.len() < needed {
                    return Ok(false);
                }
                let mut patterns = HashSet::with_capacity(needed);
                for c in concepts {
                    let mask = set.iter().fold(0u32, |acc, &v| (acc << 1) | c.get(v) as u32);
                    patterns.insert(mask);
                    if patterns.len() == needed {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }

    /// Size of a largest shattered subset of the domain.
    pub fn vc_dimension(&self) -> Result<usize> {
        Ok(match self {
            ConceptClass::Full { n } => *n,
            ConceptClass::Singleton(_) => 0,
            ConceptClass::Thresholds { n } => (*n).min(1),
            ConceptClass::Explicit { n, concepts } => {
                let cap = (usize::BITS - 1 - concepts.len().leading_zeros()) as usize;
                let mut best = 0;
                let mut current = Vec::new();
                self.grow_shattered(0, *n, cap, &mut current, &mut best)?;
                best
            }
        })
    }

    fn grow_shattered(
        &self,
        from: VertexId,
        n: usize,
        cap: usize,
        current: &mut Vec<VertexId>,
        best: &mut usize,
    ) -> Result<()> {
        *best = (*best).max(current.len());
        if *best >= cap || current.len() + (n - from) <= *best {
            return Ok(());
        }
        for v in from..n {
            current.push(v);
            if self.shatters(current)? {
                self.grow_shattered(v + 1, n, cap, current, best)?;
            }
            current.pop();
            if *best >= cap {
                break;
            }
        }
        Ok(())
    }

    /// Distinct patterns realized on `coords` (in the listed order), sorted
    /// lexicographically.
    pub fn restrict(&self, coords: &[VertexId]) -> Result<PatternClass> {
        self.check_coords(coords)?;
        let k = coords.len();
        let patterns: Vec<BitString> = match self {
            ConceptClass::Full { .. } => {
                if k > crate::oig::PATTERN_BITS_LIMIT {
                    return Err(Error::GuardExceeded(format!(
                        "restriction of the full class to {k} points has 2^{k} patterns"
                    )));
                }
                (0..(1u64 << k)).map(|r| BitString::from_lex_rank(k, r)).collect()
            }
            ConceptClass::Singleton(c) => vec![c.project(coords)],
            ConceptClass::Thresholds { n } => {
                // only t = 0 and t = v + 1 for listed v give distinct patterns
                let ts = std::iter::once(0).chain(coords.iter().map(|&v| v + 1));
                ts.map(|t| threshold_concept(*n, t).project(coords)).collect()
            }
            ConceptClass::Explicit { concepts, .. } => concepts.iter().map(|c| c.project(coords)).collect(),
        };
        PatternClass::new(k, patterns)
    }

    /// First member, in canonical order, that agrees with every example.
    pub fn first_consistent(&self, sample: &LabeledSample) -> Result<Option<Concept>> {
        let n = self.domain_size();
        for &(v, _) in sample.items() {
            if v >= n {
                return Err(Error::InvalidVertex { vertex: v, order: n });
            }
        }
        let agrees = |c: &Concept| sample.items().iter().all(|&(v, y)| c.get(v) == y);
        Ok(match self {
            ConceptClass::Explicit { concepts, .. } => concepts.iter().find(|c| agrees(c)).cloned(),
            ConceptClass::Full { n } => {
                // smallest in lexicographic order: unconstrained vertices are 0
                let mut c = BitString::zeros(*n);
                for &(v, y) in sample.items() {
                    c.set(v, y);
                }
                Some(c)
            }
            ConceptClass::Singleton(c) => agrees(c).then(|| c.clone()),
            ConceptClass::Thresholds { n } => {
                let t = sample
                    .items()
                    .iter()
                    .filter(|&&(_, y)| y)
                    .map(|&(v, _)| v + 1)
                    .max()
                    .unwrap_or(0);
                let c = threshold_concept(*n, t);
                agrees(&c).then_some(c)
            }
        })
    }

    pub fn is_realizable(&self, sample: &LabeledSample) -> Result<bool> {
        Ok(self.first_consistent(sample)?.is_some())
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: ConceptClassJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("concept class: {e}")))?;
        raw.try_into()
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::from_json_str(&std::fs::read_to_string(path)?).map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> ConceptClassJson {
        match self {
            ConceptClass::Explicit { concepts, .. } => ConceptClassJson::Explicit {
                concepts: concepts.clone(),
            },
            ConceptClass::Full { n } => ConceptClassJson::Full { n: *n },
            ConceptClass::Singleton(c) => ConceptClassJson::Singleton { labels: c.clone() },
            ConceptClass::Thresholds { n } => ConceptClassJson::Thresholds { n: *n },
        }
    }
}

impl std::fmt::Display for ConceptClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}(n={})", self.kind_name(), self.domain_size())
    }
}

pub fn threshold_concept(n: usize, t: usize) -> Concept {
    BitString::from_bools((0..n).map(|i| i < t))
}

pub struct ConceptIter<'a> {
    class: &'a ConceptClass,
    next: u64,
    end: u64,
}

impl Iterator for ConceptIter<'_> {
    type Item = Concept;

    fn next(&mut self) -> Option<Concept> {
        if self.next >= self.end {
            return None;
        }
        let c = self.class.get(self.next).ok();
        self.next += 1;
        c
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = (self.end - self.next) as usize;
        (rest, Some(rest))
    }
}

/// Wire form: `{"kind":"explicit","concepts":[[0,1,..],..]}`,
/// `{"kind":"full","n":k}`, `{"kind":"singleton","labels":[..]}`,
/// `{"kind":"thresholds","n":k}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ConceptClassJson {
    Explicit { concepts: Vec<Concept> },
    Full { n: usize },
    Singleton { labels: Concept },
    Thresholds { n: usize },
}

impl TryFrom<ConceptClassJson> for ConceptClass {
    type Error = Error;

    fn try_from(raw: ConceptClassJson) -> Result<Self> {
        Ok(match raw {
            ConceptClassJson::Explicit { concepts } => ConceptClass::explicit(concepts)?,
            ConceptClassJson::Full { n } => ConceptClass::full(n),
            ConceptClassJson::Singleton { labels } => ConceptClass::singleton(labels),
            ConceptClassJson::Thresholds { n } => ConceptClass::thresholds(n),
        })
    }
}

/// A concept over `{0, 1, undefined}`; `None` marks an undefined label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialConcept {
    pub labels: Vec<Option<bool>>,
}

impl PartialConcept {
    pub fn new(labels: Vec<Option<bool>>) -> Self {
        PartialConcept { labels }
    }

    pub fn support(&self) -> Vec<VertexId> {
        (0..self.labels.len()).filter(|&i| self.labels[i].is_some()).collect()
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            labels: Vec<Option<u8>>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| Error::Parse(format!("partial concept: {e}")))?;
        let labels = raw
            .labels
            .into_iter()
            .map(|l| match l {
                None => Ok(None),
                Some(0) => Ok(Some(false)),
                Some(1) => Ok(Some(true)),
                Some(other) => Err(Error::Parse(format!("label must be 0, 1 or null, got {other}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PartialConcept { labels })
    }
}

/// Encodes each partial concept as a (graph, concept) pair: the concept
/// agrees on the support and is 1 elsewhere; the graph leaves the support
/// isolated and puts a bidirected clique on the rest.
pub fn encode_partial_class(pcs: &[PartialConcept], n: usize) -> Result<Vec<(DirectedGraph, Concept)>> {
    pcs.iter()
        .enumerate()
        .map(|(idx, pc)| {
            if pc.labels.len() != n {
                return Err(Error::arg(format!(
                    "partial concept {idx} has length {} (expected {n})",
                    pc.labels.len()
                )));
            }
            let concept = BitString::from_bools(pc.labels.iter().map(|l| l.unwrap_or(true)));
            let undefined: Vec<VertexId> = (0..n).filter(|&i| pc.labels[i].is_none()).collect();
            let edges = undefined
                .iter()
                .flat_map(|&u| undefined.iter().filter(move |&&v| v != u).map(move |&v| (u, v)));
            Ok((DirectedGraph::new(n, edges)?, concept))
        })
        .collect()
}
