//! Per-sample random streams.
//!
//! Every stream is a pure function of `(master_seed, index, salt, stage)`, so
//! a sample comes out the same whichever worker builds it and in whatever
//! order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SampleRng = ChaCha8Rng;

/// Pipeline stages with their own stream, so that changing how one stage
/// consumes randomness leaves the others untouched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Select,
    Construct,
    Style,
    Mask,
    Caption,
    /// Dataset-level draws such as the complexity shuffle.
    Plan,
}

impl Stage {
    fn tag(self) -> &'static [u8; 8] {
        match self {
            Stage::Select => b"select\0\0",
            Stage::Construct => b"construc",
            Stage::Style => b"style\0\0\0",
            Stage::Mask => b"mask\0\0\0\0",
            Stage::Caption => b"caption\0",
            Stage::Plan => b"plan\0\0\0\0",
        }
    }
}

/// Seed lineage of one sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleSeed {
    pub master: u64,
    pub index: u64,
    /// Bumped when a sample is retried after a failed attempt.
    pub salt: u32,
}

impl SampleSeed {
    pub fn new(master: u64, index: u64) -> Self {
        Self {
            master,
            index,
            salt: 0,
        }
    }

    pub fn with_salt(self, salt: u32) -> Self {
        Self { salt, ..self }
    }

    pub fn rng(&self, stage: Stage) -> SampleRng {
        let mut seed = [0u8; 32];
        seed[..8].copy_from_slice(&self.master.to_le_bytes());
        seed[8..12].copy_from_slice(&self.salt.to_le_bytes());
        seed[12..20].copy_from_slice(stage.tag());
        let mut rng = ChaCha8Rng::from_seed(seed);
        rng.set_stream(self.index);
        rng
    }
}

/// Stream for dataset-wide decisions under `master`.
pub fn plan_rng(master: u64) -> SampleRng {
    SampleSeed::new(master, u64::MAX).rng(Stage::Plan)
}
