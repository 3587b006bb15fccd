//! Seeded generation of geometric figures paired with captions.
//!
//! A run draws an ordered group of clauses from a [`catalog::Catalog`]
//! ([`selector`]), constructs coordinates that satisfy every clause's
//! relations ([`geometry`]), renders the scene to SVG ([`render`]) and
//! describes it in text ([`caption`]). [`dataset`] drives this over many
//! samples and audits the result.

pub mod caption;
pub mod catalog;
pub mod dataset;
pub mod error;
pub mod geometry;
pub mod instance;
pub mod render;
pub mod rng;
pub mod selector;
pub mod util;

pub use catalog::{reference_catalog, Catalog, ClauseDef, Difficulty};
pub use dataset::{build_dataset, compute_stats, verify_dataset, GenConfig, Generator};
pub use geometry::{Scene, Vec2};
pub use instance::{parse_instance, ClauseInstance};
pub use selector::{select_group, ClauseGroup, Complexity, SelectionRules};
