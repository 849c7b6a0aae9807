//! Single-pass sketching algorithms for dynamic graph streams.
//!
//! The crate is layered bottom-up:
//!
//! * [`stream`]: edge updates, the edge index space, replay and file formats.
//! * [`sketch`]: linear sketches (AMS zero test, ℓ0 sampler, exact sparse recovery).
//! * [`graph_sketch`]: per-vertex boundary/neighborhood vectors and the spanning-forest sketch.
//! * [`estimators`]: small-component counting, component counting and MST weight.
//! * [`testers`]: streaming property testers.
//! * [`oracle`]: exact reference algorithms on explicit graphs.
//! * [`generate`]: hard-instance and planted-instance generators.
//! * [`experiment`]: Monte-Carlo harness used by the CLI.

pub mod error;
pub mod estimators;
pub mod experiment;
pub mod generate;
pub mod graph_sketch;
pub mod oracle;
pub mod probe;
pub mod sketch;
pub mod stream;
pub mod testers;

pub use error::{Error, Result};
pub use stream::{EdgeUpdate, Stream, StreamHeader, Vertex};
