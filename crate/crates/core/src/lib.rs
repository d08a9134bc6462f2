//! Exact and high-precision machinery for block-weighted random planar maps:
//! truncated power series, a brute-force map enumerator, the eight block
//! decomposition schemes, phase-transition diagnostics and a conditioned
//! Galton-Watson block-tree sampler.

pub mod closed_forms;
pub mod error;
pub mod oracle;
pub mod sampler;
pub mod schemes;
pub mod series;
pub mod transition;
pub mod verify;

pub use error::{Error, Result};
