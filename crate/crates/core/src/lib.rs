//! Decentralized multi-agent multi-armed bandits over a lossy d-regular network.
//!
//! Every agent runs a UCB sampling rule over its own samples plus the last
//! rewards it hears from neighbours. Each link of a fixed d-regular graph
//! carries a message with probability `p` at every step. The crate simulates
//! the group, measures cumulative pseudo-regret over Monte Carlo replications,
//! and evaluates the closed-form regret bound so the two can be compared.
//!
//! Module map:
//! - [`env`]: arm reward distributions and gaps
//! - [`network`]: circulant d-regular graphs and per-step link realizations
//! - [`policy`]: per-agent counters and the UCB index
//! - [`engine`]: the synchronous simulation loop and replication aggregation
//! - [`analysis`]: threshold, tail bound and group regret bound
//! - [`cli`]: config files, sweeps, CSV output and bound verification

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod engine;
pub mod env;
pub mod error;
pub mod network;
pub mod policy;
pub mod rng;

pub use error::{Error, Result};
