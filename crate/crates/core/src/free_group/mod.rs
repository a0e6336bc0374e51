//! Free groups: reduced words, homomorphisms given by generator images, and
//! finite-index subgroups represented by transitive permutation actions.

mod enumerate;
mod rep;
mod word;

pub use enumerate::{low_index_reps, EnumerationLimits, DEFAULT_MAX_WORK};
pub use rep::{
    abelian_kernel_rep, is_normal, mod_p_kernel_rep, orbits, pushforward_escape, pushforward_leq,
    rep_equivalent, subgroup_leq, PermRep, MAX_KERNEL_DEGREE,
};
pub use word::{substitute, FreeWord, GeneratorImages, Letter};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid permutation representation: {0}")]
    InvalidRep(String),
    #[error("action is not transitive; orbits: {orbits:?}")]
    NotTransitive { orbits: Vec<Vec<usize>> },
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("generator x{generator} out of range for rank {rank}")]
    GeneratorOutOfRange { generator: usize, rank: usize },
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("cannot parse word: {0}")]
    Parse(String),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
}
