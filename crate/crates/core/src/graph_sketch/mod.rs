//! Graph-aware sketch layers built on the primitives in [`crate::sketch`].

pub mod agm;
pub mod bank;
pub mod block;
pub mod vectors;

pub use agm::{AgmLayout, AgmSketch, ForestError, SpanningForest};
pub use bank::{induced_filter, EdgeVectorBank, VertexVectorBank};
pub use block::{BlockDecode, BlockSparseRecovery};
