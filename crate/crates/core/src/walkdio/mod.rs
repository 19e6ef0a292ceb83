//! Random walks on SU(2) / SO(3) driven by measures with exact algebraic
//! entries: sampling, distances to closed subgroups, almost-Diophantine
//! profiles and the free-group baseline.

mod kesten;
mod measure;
mod profile;
mod subgroup;
mod walk;

pub use kesten::{free_group_return_probabilities, kesten_baseline, KestenReport};
pub use measure::{
    entry_to_json, parse_entry, parse_measure_json, pythagorean_rotation, quaternion_to_rotation, Atom, ExactElement,
    MeasureSpec,
};
pub use profile::{diophantine_profile, subgroup_hit_probability, DioProfile, DioRow, FamilyOptions, HitCurve, HitRow};
pub use subgroup::{axial_kmeans, distance_to_subgroup, standard_family, SubgroupModel};
pub use walk::{block_rng, exact_distribution, sample_walk, walk_fold, WalkSample, DEFAULT_HEIGHT_CAP, BLOCK};

use thiserror::Error;

use crate::Diagnostic;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WalkError {
    #[error("parse error at {pointer}: {message}")]
    ParseError { pointer: String, message: String },
    #[error("not a probability measure: {0}")]
    NotProbability(String),
    #[error("atom {atom} is not an element of the group")]
    NotInGroup { atom: usize },
    #[error("measure declared symmetric but the inverse of atom {atom} is missing or has a different weight")]
    NotSymmetric { atom: usize },
    #[error("entries come from different quadratic fields")]
    MixedFields,
    #[error("atom {atom} has non-real entries")]
    NonReal { atom: usize },
    #[error("measure has no atoms")]
    EmptyMeasure,
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("exact entries exceed the height budget of {bits} bits")]
    HeightOverflow { bits: u64 },
    #[error("membership is undecidable without exact entries")]
    UndecidableMembership,
}

impl Diagnostic for WalkError {
    fn module(&self) -> &'static str {
        "walkdio"
    }
    fn code(&self) -> &'static str {
        match self {
            WalkError::ParseError { .. } => "ParseError",
            WalkError::NotProbability(_) => "NotProbability",
            WalkError::NotInGroup { .. } => "NotInGroup",
            WalkError::NotSymmetric { .. } => "NotSymmetric",
            WalkError::MixedFields => "MixedFields",
            WalkError::NonReal { .. } => "NonReal",
            WalkError::EmptyMeasure => "EmptyMeasure",
            WalkError::BadParameter(_) => "BadParameter",
            WalkError::HeightOverflow { .. } => "HeightOverflow",
            WalkError::UndecidableMembership => "UndecidableMembership",
        }
    }
}
