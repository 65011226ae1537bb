//! Dissipative dynamics of two resonant qubits indirectly coupled through a
//! single truncated bosonic mode, together with the correlation and coherence
//! measures commonly used to characterize the reduced two-qubit state:
//! quantum mutual information, classical correlation, quantum discord,
//! l1-norm coherence, Wootters concurrence, and entanglement of formation.
//!
//! The crate is organized bottom-up:
//!
//! - [`qlinalg`]: dense complex linear algebra sized for small Hilbert spaces
//!   (tensor products, partial traces, Hermitian eigendecomposition, PSD
//!   matrix square root).
//! - [`model`]: the composite Hilbert space, embedded operators, the
//!   excitation-swap interaction Hamiltonian, and the dissipation channels.
//! - [`dynamics`]: fixed-step RK4 integration of the master equation with
//!   sampling callbacks and conservation diagnostics.
//! - [`measures`]: all correlation/coherence quantities of a two-qubit state,
//!   including the projective-measurement optimization behind the discord.
//! - [`scenarios`]: the built-in initial-state families and default
//!   parameters.
//! - [`cli`]: batch front end (config parsing, CSV/JSON output, sweeps).
//! - [`validation`]: the self-check suite run by `corrbus validate` and by
//!   the `acceptance` integration test target.

pub mod cli;
pub mod dynamics;
mod error;
pub mod measures;
pub mod model;
pub mod qlinalg;
pub mod scenarios;
pub mod validation;

pub use error::{Error, Result};
pub use qlinalg::{CMatrix, HermEigResult};
