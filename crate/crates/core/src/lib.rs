//! Finite higher-rank graphs: canonical paths, minimal common extensions,
//! exhaustive sets, aperiodicity searches, boundary paths and concrete
//! Toeplitz/Cuntz-Krieger families verified on finite truncations.

pub mod alignment;
pub mod aperiodicity;
pub mod boundary;
pub mod degree;
pub mod graph;
pub mod par;
pub mod repalg;

pub use degree::{Degree, ExtDegree};
pub use graph::{EdgeId, GraphError, KGraph, Path, PathError, VertexId};
pub use par::Execution;
