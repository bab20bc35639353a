//! Profile generators, dataset readers and writers, and report output.

pub mod formats;
pub mod preflib;
pub mod sample;

pub use formats::{
    emit_report, parse_medals_csv, parse_scores_csv, read_instance_json, read_profile_json, write_instance_json,
    write_profile_json, ScoreTable,
};
pub use preflib::{parse_preflib, parse_preflib_weak, PreflibFormat};
pub use sample::{
    assign_partial, default_pl_strengths, sample_profile, DistributionKind, DistributionSpec, PartialSpec,
    DEFAULT_MALLOWS_PHI,
};

use crate::Profile;

/// A profile together with display names for its alternatives.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedProfile {
    pub profile: Profile,
    pub names: Vec<String>,
}

impl NamedProfile {
    /// Uses each alternative's id as its name.
    pub fn unnamed(profile: Profile) -> Self {
        let names = (0..profile.m()).map(|i| i.to_string()).collect();
        NamedProfile { profile, names }
    }
}
