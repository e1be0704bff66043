//! A laboratory for three-qubit pure-state entanglement.
//!
//! The crate samples Haar-random three-qubit states, reduces them to the
//! Acín five-term canonical form, evaluates two families of local-unitary
//! polynomial invariants, classifies states into entanglement classes,
//! minimizes Rényi decomposition entropies and maximizes class-overlap
//! fidelities over local unitaries, and maps ensembles into the
//! entanglement polytope with analytic reference distributions for all of
//! the above.
//!
//! Module map:
//!
//! * [`state`] — states, Haar sampling, local-unitary action, reductions
//! * [`canonical`] — the five-term canonical form and its inverse
//! * [`invariants`] — the I- and J-families plus cross-checking oracles
//! * [`classes`] — class predicates, generators, SLOCC labels
//! * [`optimize`] — minimal RIU entropies and maximal class overlaps
//! * [`polytope`] — polygon inequalities, GHZ pyramid, density grids
//! * [`stats`] — analytic pdfs, histograms, beta-like fits, KS distances
//! * [`ensemble`] — deterministic block-parallel Monte Carlo plumbing

pub mod canonical;
pub mod classes;
pub mod ensemble;
pub mod invariants;
pub mod linalg;
pub mod optimize;
pub mod polytope;
mod simplex;
pub mod state;
pub mod stats;

pub use canonical::{acin_decompose, reconstruct, AcinForm};
pub use classes::{classify, make_class_state, slocc_label, ClassId, SloccClass};
pub use invariants::{InvariantSetI, InvariantSetJ};
pub use optimize::{max_overlap, riu_entropy, OptimizerConfig};
pub use polytope::{in_ghz_pyramid, polytope_point, PolytopePoint};
pub use state::{apply_local, sample_haar_state, LocalUnitary, Party, PureState3Q, RngSeed};
