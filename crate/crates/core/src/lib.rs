//! Matroid intersection over independence oracles.
//!
//! Every independence query goes through a [`QueryLedger`] and is tagged with
//! the stage that asked it. The exact solver ([`pipeline::solve`]) combines
//! a greedy start, distance-bounded shortest augmenting paths
//! ([`classic::cunningham_until`]) and phase-based augmentation with
//! heavy/light categorization ([`reachability::augmentation`]).

pub mod audit;
pub mod classic;
pub mod error;
pub mod exchange;
pub mod hidden;
pub mod instance;
pub mod ledger;
pub mod matroid;
pub mod neighborhood;
pub mod pipeline;
pub mod reachability;
pub mod reference;
pub mod rng;

/// Index of a ground-set element, in `0..n`.
pub type ElementId = usize;

pub use error::{Error, Result};
pub use exchange::{AugmentingPath, ExchangeGraph};
pub use instance::{generate_instance, Family, InstancePair, MatroidInstance};
pub use ledger::{MatroidId, QueryLedger, Stage};
pub use matroid::{IndependenceOracle, Matroid, MatroidKind};
pub use neighborhood::{EdgeAudit, NeighborhoodOracle, Vertex};
pub use pipeline::{solve, solve_approx, PipelineConfig, SolveReport};
pub use reachability::Mode;
