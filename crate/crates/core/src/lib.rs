//! Interlinked-cycle-cover (ICC) index coding.
//!
//! A side-information [`Digraph`] describes which messages each receiver
//! already holds. [`IccTemplate`] parametrizes the ICC digraph family; its
//! scalar-linear XOR code saves `k - 1` transmissions and is decodable
//! receiver by receiver ([`codec`]). [`schemes`] covers arbitrary digraphs
//! with disjoint ICC, cycle or clique pieces, and [`oracles`] re-checks
//! decodability over GF(2) and compares lengths against the MAIS bound.

pub mod codec;
pub mod graph;
pub mod oracles;
pub mod packet;
pub mod schemes;
pub mod search;
pub mod template;

pub use codec::{CodedSymbol, IndexCode, SymbolKind};
pub use graph::{Cycle, Digraph, GraphError, VertexId};
pub use packet::PacketVector;
pub use schemes::{CoverPlan, Piece, SchemeReport};
pub use search::{SearchLimits, SearchMode};
pub use template::{Coord, IccTemplate, Labeling, PathId};
