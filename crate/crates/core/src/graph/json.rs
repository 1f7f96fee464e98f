//! `{"n": <int>, "edges": [[u,v], ...]}` with 0-based indices.
//!
//! Self-loops and duplicate pairs are rejected while the edge array is being
//! read, so the error carries the line and column of the offending pair.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::de::{DeserializeSeed, Error as _, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

use super::{DirectedGraph, VertexId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub n: usize,
    pub edges: EdgeList,
}

#[derive(Debug, Clone, Serialize)]
#[serde(transparent)]
pub struct EdgeList(pub Vec<(VertexId, VertexId)>);

// Checks each pair inside its own array so error positions point at it.
struct EdgeSeed<'a> {
    seen: &'a mut HashSet<(VertexId, VertexId)>,
}

impl<'de> DeserializeSeed<'de> for EdgeSeed<'_> {
    type Value = (VertexId, VertexId);

    fn deserialize<D: Deserializer<'de>>(self, deserializer: D) -> std::result::Result<Self::Value, D::Error> {
        deserializer.deserialize_seq(self)
    }
}

impl<'de> Visitor<'de> for EdgeSeed<'_> {
    type Value = (VertexId, VertexId);

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a [u, v] pair")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Self::Value, A::Error> {
        let u: VertexId = seq.next_element()?.ok_or_else(|| A::Error::invalid_length(0, &self))?;
        let v: VertexId = seq.next_element()?.ok_or_else(|| A::Error::invalid_length(1, &self))?;
        if seq.next_element::<serde::de::IgnoredAny>()?.is_some() {
            return Err(A::Error::invalid_length(3, &self));
        }
        if u == v {
            return Err(A::Error::custom(format!("self-loop [{u},{v}]")));
        }
        if !self.seen.insert((u, v)) {
            return Err(A::Error::custom(format!("duplicate edge [{u},{v}]")));
        }
        Ok((u, v))
    }
}

impl<'de> Deserialize<'de> for EdgeList {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct EdgeVisitor;

        impl<'de> Visitor<'de> for EdgeVisitor {
            type Value = EdgeList;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an array of [u, v] pairs")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<EdgeList, A::Error> {
                let mut seen = HashSet::new();
                let mut edges = Vec::new();
                while let Some(e) = seq.next_element_seed(EdgeSeed { seen: &mut seen })? {
                    edges.push(e);
                }
                Ok(EdgeList(edges))
            }
        }

        deserializer.deserialize_seq(EdgeVisitor)
    }
}

impl DirectedGraph {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: GraphJson = serde_json::from_str(text).map_err(|e| Error::Parse(format!("graph: {e}")))?;
        DirectedGraph::new(raw.n, raw.edges.0)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text).map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: self.order(),
            edges: EdgeList(self.edges().collect()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = DirectedGraph::new(4, [(0, 1), (1, 0), (2, 3)]).unwrap();
        let text = serde_json::to_string(&g.to_json()).unwrap();
        assert_eq!(text, r#"{"n":4,"edges":[[0,1],[1,0],[2,3]]}"#);
        assert_eq!(DirectedGraph::from_json_str(&text).unwrap(), g);
    }

    #[test]
    fn duplicate_is_line_anchored() {
        let text = "{\n  \"n\": 3,\n  \"edges\": [\n    [0, 1],\n    [0, 1]\n  ]\n}";
        let err = DirectedGraph::from_json_str(text).unwrap_err().to_string();
        assert!(err.contains("duplicate edge [0,1]"), "{err}");
        assert!(err.contains("line 5"), "{err}");
    }

    #[test]
    fn self_loop_is_line_anchored() {
        let text = "{\"n\": 3,\n\"edges\": [[0, 1],\n[2, 2]]}";
        let err = DirectedGraph::from_json_str(text).unwrap_err().to_string();
        assert!(err.contains("self-loop [2,2]"), "{err}");
        assert!(err.contains("line 3"), "{err}");
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(DirectedGraph::from_json_str(r#"{"n":2,"edges":[[0,2]]}"#).is_err());
    }
}
