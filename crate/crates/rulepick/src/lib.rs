//! Rule picking for rank aggregation by split consistency.
//!
//! Given a profile of voter rankings and a set of candidate aggregation
//! rules, the crate estimates how much each rule's outputs disagree across
//! random halves of the electorate and picks the most consistent rule.
//! Around that core sit axiom audits, an annealing search over positional
//! scoring vectors, an exact solver for perfectly consistent positional
//! rules, synthetic profile generators and dataset parsers.

pub mod abc;
pub mod axioms;
pub mod data;
pub mod distance;
mod error;
#[cfg(test)]
mod fixtures;
pub mod numeric;
pub mod optimize;
pub mod perfpos;
pub mod profile;
pub mod rules;

pub use error::{Error, ErrorKind, Result};
pub use profile::{AlternativeId, PositionCounts, Profile, StrictRanking, WeakRanking};
