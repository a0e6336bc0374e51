//! Covering theory of finite graphs, organised around the finite levels of
//! profinite coverings.
//!
//! - [`graph`]: Serre graphs, morphisms, congruences, quotients.
//! - [`free_group`]: words and finite-index subgroups as coset actions.
//! - [`covering`]: coverings, monodromy, lifting, deck groups, orbit maps.
//! - [`tower`]: chains of covering squares (truncated inverse systems).
//! - [`formats`]: the versioned JSON file formats.

pub mod covering;
pub mod formats;
pub mod free_group;
pub mod graph;
pub mod sample;
pub mod tower;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
