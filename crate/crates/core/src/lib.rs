//! Sequential logic optimization under sequential observability don't cares.
//!
//! The optimizer unrolls a sequential and-inverter graph into a k-frame
//! base-case network (starting from the initial state) and a (k+1)-frame
//! inductive-case network (starting from an arbitrary state). Each candidate
//! fanin rewiring of each gate is validated frame by frame with windowed SAT
//! checks and, when valid in every base frame and the last inductive frame,
//! applied to all three networks at once so later candidates see it.
//!
//! Modules:
//! - [`aig`]: the graph, structural hashing, rewiring and cleanup
//! - [`aiger`]: AIGER reader and writer
//! - [`unroll`]: base and inductive frame networks, per-frame edits
//! - [`window`]: bounded windows and resubstitution divisors
//! - [`odc`]: the windowed validity check for one edit in one frame
//! - [`opt`]: the optimization loop
//! - [`equiv`]: simulation, bounded and exhaustive sequential equivalence

pub mod aig;
pub mod aiger;
pub mod fixtures;
pub mod gen;
pub mod unroll;
pub mod window;
pub mod odc;
pub mod equiv;
pub mod opt;
mod sweep;

pub use aig::{Aig, AigError, Latch, Lit, Node, NodeId, Stats};
