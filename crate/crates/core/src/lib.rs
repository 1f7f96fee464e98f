//! Learning conditional averages over directed graphs: graph and concept
//! primitives, the characterization parameters, the conditional-average
//! learner with its one-inclusion-graph fallback, lower-bound instance
//! generators and a reproducible experiment runner.

pub mod bits;
pub mod concepts;
pub mod error;
pub mod graph;
pub mod hardness;
pub mod harness;
pub mod learner;
pub mod measure;
pub mod oig;
pub mod params;

pub use bits::BitString;
pub use concepts::{Concept, ConceptClass, PartialConcept};
pub use error::{Error, Result};
pub use graph::{DirectedGraph, VertexId};
pub use measure::{Distribution, LabeledSample, Predictor};
