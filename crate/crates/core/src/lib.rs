//! Time-varying graphs, temporal journeys, and opinion dynamics over them.
//!
//! The crate is split in two layers. The lower layer (`interval`, `tvg`,
//! `journey`) models graphs whose edges come and go over continuous time and
//! answers reachability questions that respect time ordering. The upper layer
//! (`epistemic`, `dynamics`, `metrics`) builds agents whose internal
//! representations live on such graphs and runs bounded-confidence opinion
//! updates where each agent's tolerance is derived from its own mind rather
//! than set globally.
//!
//! No IO lives here; the crate is `no_std` with `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod dynamics;
pub mod epistemic;
pub mod interval;
pub mod journey;
pub mod metrics;
pub mod tvg;

pub use interval::{IntervalSet, TimeError, TimeInstant, TimeInterval};
pub use tvg::{EdgeDates, NodeId, StaticGraph, TemporalEdge, TimeVaryingGraph, TvgError};
