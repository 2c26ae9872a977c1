//! Exact tools for tiling k-uniform hypergraphs: degree and link queries,
//! exhaustive factor oracles, a clique-weight local search, absorbing
//! families, lower-bound constructions and random-greedy partial designs.

pub mod absorb;
pub mod caps;
pub mod combinatorics;
pub mod constructions;
pub mod design;
pub mod error;
pub mod factor;
pub mod hypergraph;
pub mod independence;
pub mod io;
pub mod params;
pub mod pattern;
pub mod random;
pub mod rng;
pub mod vertex_set;

pub use caps::Caps;
pub use error::{Error, Result};
pub use hypergraph::{Hypergraph, InducedSubgraph};
pub use pattern::{Embedding, Pattern, PatternKind};
pub use vertex_set::VertexSet;
