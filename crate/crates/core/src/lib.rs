//! Combinatorics of random cographs through their cotree encoding.
//!
//! * [`graph`]: bit-matrix graphs, disjoint union, join, complement, induced
//!   subgraphs and small-graph canonical forms.
//! * [`cotree`]: cotrees, the cograph bijection, recognition, induced
//!   subtrees and the cotree text format.
//! * [`series`] and [`enumeration`]: exact truncated power series and the
//!   generating functions counting labeled and unlabeled cographs, with or
//!   without marked leaves.
//! * [`sampling`]: uniform and Boltzmann samplers for canonical cotrees and
//!   decorated binary trees.
//! * [`stats`]: degrees, vertex connectivity, induced-subtree laws, subgraph
//!   densities and distances between empirical laws.
//! * [`oracle`]: exhaustive reference enumerations used to cross-check the
//!   fast paths.
//! * [`render`]: adjacency-matrix images.
//! * [`checks`]: the verification suites behind the `check` command.

pub mod checks;
pub mod cotree;
pub mod enumeration;
pub mod experiment;
pub mod graph;
pub mod montecarlo;
pub mod oracle;
pub mod render;
pub mod sampling;
pub mod series;
pub mod stats;

pub use cotree::{Cotree, CotreeBuilder, CotreeError, Decoration, NodeId};
pub use graph::{Cograph, GraphError};
pub use series::TruncatedSeries;
