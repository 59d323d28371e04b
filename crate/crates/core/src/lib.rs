//! Correlation polytopes, the elliptope, LHV raffles and spin singlets.
//!
//! The crate turns systems of logically connected events into correlation
//! polytopes and their facet inequalities, checks correlation triples of
//! balanced random variables against the elliptope, builds local
//! hidden-variable ("raffle") models of the three-setting experiment, and
//! simulates spin-`s` singlets that fill the whole elliptope.
//!
//! Modules:
//!
//! - [`event_algebra`]: event systems, propositional constraints, truth-table rows.
//! - [`polytope`]: exact rational V- to H-representation and membership tests.
//! - [`correlations`]: Pearson coefficients, the elliptope, Gram realization.
//! - [`raffles`]: LHV ticket models, correlation regions, elliptope coverage.
//! - [`quantum`]: spin operators, the singlet, inferred correlation triples.

pub mod correlations;
pub mod error;
pub mod event_algebra;
pub mod polytope;
pub mod quantum;
pub mod raffles;
pub mod rational;

pub use error::{Error, Result};

use serde::{Deserialize, Serialize};

/// Size caps that keep exhaustive computations at desk scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Maximum number of events in an [`event_algebra::EventSystem`].
    pub max_events: usize,
    /// Maximum vertex count accepted by facet enumeration.
    pub max_vertices: usize,
    /// Maximum affine dimension accepted by facet enumeration.
    pub max_dim: usize,
    /// Maximum spin, stored as `2s`.
    pub max_twice_spin: u32,
    /// Maximum number of values per variable in raffle models.
    pub max_k: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_events: 16,
            max_vertices: 40,
            max_dim: 10,
            max_twice_spin: 8,
            max_k: 9,
        }
    }
}

/// Default tolerance for inputs backed by exact rationals.
pub const EXACT_TOL: f64 = 1e-12;
/// Default tolerance for floating-point inputs.
pub const FLOAT_TOL: f64 = 1e-9;
