//! Recognition, decomposition and augmentation of (k, l)-sparse multigraphs.
//!
//! A multigraph is **(k, l)-sparse** when every vertex subset spanning at
//! least one edge spans at most `k·|V'| − l` of them, and **tight** when it
//! is sparse with exactly `k·n − l` edges in total. These families tie
//! together pebble games, pseudoforest ("map") decompositions, bipartite
//! matchings and matroid unions, and this crate implements all four views
//! with deliberate redundancy — every constructive result can be checked by
//! an independent algorithm, and at small scale by brute force.
//!
//! ```
//! use ksparse::{MultiGraph, Sparsity};
//!
//! let g = MultiGraph::complete(4);
//! assert_eq!(ksparse::pebble::run(&g, 2, 2)?.classification, Sparsity::Tight);
//!
//! // Tight at (2, 2) means: adding any 2 ambient edges leaves a graph that
//! // splits into 2 edge-disjoint spanning maps.
//! assert_eq!(ksparse::augment::predict_any(&g, 2, 2), Ok(true));
//! # Ok::<(), ksparse::pebble::PebbleError>(())
//! ```
//!
//! Modules:
//!
//! * [`graph`] — the multigraph itself and its bounded ambient complement;
//! * [`pebble`] — the (k, l)-pebble game recognizer with violation witnesses;
//! * [`maps`] — k-map decompositions via bipartite matching and via
//!   orientation, cross-checking each other;
//! * [`augment`] — the any-/some-/mixed-addition results;
//! * [`matroid`] — independence oracles, matroid-union partitioning, and
//!   decompositions into spanning trees plus maps;
//! * [`oracle`] — exhaustive brute-force ground truth for all of the above;
//! * [`enumerate`] — corpus enumeration and seeded random graph generation.

pub mod augment;
pub mod enumerate;
pub mod graph;
pub mod maps;
pub mod matroid;
pub mod oracle;
pub mod pebble;

pub use augment::{AugmentCertificate, AugmentError, AugmentationResult};
pub use graph::{Edge, EdgeId, EdgeSet, GraphError, MultiGraph, Vertex, VertexSet};
pub use maps::{MapDecomposition, NotTight};
pub use matroid::{IndependenceOracle, TreesAndMapsPartition, UnionPartition};
pub use pebble::{PebbleGameOutcome, Sparsity};
