//! Joint optimization of per-phase AI automation and software team sizing.
//!
//! The crate models a six-phase development lifecycle in which a fraction of
//! each phase's work can be delegated to AI agents at the price of human
//! oversight and residual coordination overhead. On top of that labor model
//! it provides:
//!
//! - tipping-point analysis: how many full-time positions the automated
//!   hours absorb, and how large a headcount reduction stays workload-stable
//!   ([`labor`]);
//! - a mixed real/integer NSGA-II that searches automation fractions and
//!   team size against cost and quality simultaneously ([`evo`]);
//! - Pareto-front quality indicators and multi-run statistics ([`metrics`]);
//! - deterministic sensitivity sweeps over the oversight and coordination
//!   parameters ([`sweep`]).
//!
//! Everything outside [`evo::run`] is a pure function of its inputs; the
//! optimizer itself is deterministic for a fixed seed.

pub mod error;
pub mod evo;
pub mod labor;
pub mod metrics;
pub mod phase;
pub mod sweep;

pub use error::Error;
pub use phase::{Phase, PhaseMap};
