use indexmap::IndexMap;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::Counts;
use crate::rng::plan_rng;
use crate::selector::Complexity;

/// One manifest line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestRecord {
    pub id: String,
    pub complexity: Complexity,
    /// Clause instances in textual form, in construction order.
    pub clauses: Vec<String>,
    /// Scene-unit coordinates before layout.
    pub points: IndexMap<String, [f64; 2]>,
    pub max_residual: f64,
    pub caption: String,
    pub caption_mode: String,
    /// Image path relative to the manifest's directory.
    pub image: String,
    pub seed: u64,
    pub index: u64,
}

impl ManifestRecord {
    pub fn to_line(&self) -> String {
        // Serializing plain data with string keys cannot fail.
        serde_json::to_string(self).expect("manifest record serializes")
    }
}

pub const MANIFEST_FILE: &str = "manifest.jsonl";
pub const REPORT_FILE: &str = "run_report.json";
pub const IMAGE_DIR: &str = "images";

pub fn sample_id(index: u64) -> String {
    format!("{index:06}")
}

pub fn image_path(index: u64) -> String {
    format!("{IMAGE_DIR}/{}.svg", sample_id(index))
}

/// Complexity of every index: the blocks `[Easy; e] [Medium; m] [Hard; h]`
/// shuffled by a stream derived from the master seed alone.
pub fn complexity_plan(counts: &Counts, master_seed: u64) -> Vec<Complexity> {
    let mut plan: Vec<Complexity> = Complexity::ALL
        .iter()
        .flat_map(|&c| std::iter::repeat_n(c, counts.get(c)))
        .collect();
    plan.shuffle(&mut plan_rng(master_seed));
    plan
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_counts_and_determinism() {
        let counts = Counts::new(200, 400, 400);
        let plan = complexity_plan(&counts, 9);
        for c in Complexity::ALL {
            assert_eq!(plan.iter().filter(|&&p| p == c).count(), counts.get(c));
        }
        assert_eq!(plan, complexity_plan(&counts, 9));
        assert_ne!(plan, complexity_plan(&counts, 10));
        // Shuffled, so a short prefix already mixes complexities.
        assert!(plan[..50].iter().any(|&c| c != plan[0]));
    }

    #[test]
    fn record_field_order() {
        let r = ManifestRecord {
            id: sample_id(3),
            complexity: Complexity::Easy,
            clauses: vec!["segment A B".into()],
            points: [("A".to_string(), [0.0, 0.0]), ("B".to_string(), [1.5, -2.0])]
                .into_iter()
                .collect(),
            max_residual: 0.0,
            caption: "Segment AB.".into(),
            caption_mode: "offline".into(),
            image: image_path(3),
            seed: 42,
            index: 3,
        };
        let line = r.to_line();
        assert_eq!(
            line,
            r#"{"id":"000003","complexity":"easy","clauses":["segment A B"],"points":{"A":[0.0,0.0],"B":[1.5,-2.0]},"max_residual":0.0,"caption":"Segment AB.","caption_mode":"offline","image":"images/000003.svg","seed":42,"index":3}"#
        );
        let back: ManifestRecord = serde_json::from_str(&line).unwrap();
        assert_eq!(back, r);
    }
}
