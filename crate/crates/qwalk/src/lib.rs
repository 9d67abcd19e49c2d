//! Discrete-time coined quantum walk search on the n-dimensional hypercube.
//!
//! The walk alternates a Grover diffusion coin on the direction register with
//! a direction-conditioned shift on the node register; marking a single node
//! with the -I coin turns the walk into an O(sqrt(N)) oracle search. The
//! crate provides:
//!
//! * [`full`] — exact simulation on the full n * 2^n space;
//! * [`collapsed`] — the walk restricted to the 2n-dimensional bit-swap
//!   symmetric subspace (a walk on the line), the fast path;
//! * [`spectral`] — eigendecomposition of the collapsed operators and the
//!   arc/overlap/angle checks;
//! * [`search`] — the search driver, probability curves and the closed-form
//!   Grover baseline;
//! * [`verify`] — the aggregated numerical verification harness.
//!
//! See the crate examples for runnable entry points per capability, and the
//! `qwalk` binary for the CSV/JSON command-line front end.

pub mod binom;
pub mod collapsed;
pub mod config;
pub mod error;
pub mod full;
pub mod search;
pub mod spectral;
pub mod verify;

pub use config::{MarkingCoin, WalkConfig};
pub use error::{Error, Result};
pub use full::FullState;
pub use collapsed::{CollapsedOperator, CollapsedState};
pub use search::{Backend, SearchOutcome};
pub use spectral::{EigenPair, SpectralSummary};
