//! Corpus generation, statistics and verification over JSONL manifests.

mod build;
mod config;
mod generate;
mod manifest;
mod stats;
mod verify;

pub use build::{build_dataset, build_with, RunReport};
pub use config::{Counts, GenConfig};
pub use generate::{Generator, RenderedGroup, Sample, SampleFailure, MAX_SAMPLE_RETRIES};
pub use manifest::{
    complexity_plan, image_path, sample_id, ManifestRecord, IMAGE_DIR, MANIFEST_FILE, REPORT_FILE,
};
pub use stats::{compute_stats, compute_stats_from_reader, ClauseStats, StatsReport};
pub use verify::{verify_dataset, verify_record, SampleViolation, VerifyReport};
