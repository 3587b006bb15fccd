use std::collections::HashSet;
use std::path::Path;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::Serialize;

use super::manifest::ManifestRecord;
use crate::caption::{CaptionMode, RequiredTokens};
use crate::catalog::Catalog;
use crate::error::StatsError;
use crate::geometry::{max_residual, sketch_scene, Vec2, EPS_CONSTRUCT};
use crate::instance::{check_point_flow, parse_instance, ClauseInstance};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleViolation {
    /// Sample id, or `line N` when the line does not parse.
    pub id: String,
    /// 1-based manifest line.
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct VerifyReport {
    pub samples: usize,
    pub violations: Vec<SampleViolation>,
}

impl VerifyReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    /// Ids with at least one violation, in manifest order.
    pub fn failing_ids(&self) -> Vec<&str> {
        let mut seen = HashSet::new();
        self.violations
            .iter()
            .map(|v| v.id.as_str())
            .filter(|id| seen.insert(*id))
            .collect()
    }
}

/// Text content of every `<text>` element, and of those with class `label`.
fn svg_texts(doc: &roxmltree::Document) -> (HashSet<String>, HashSet<String>) {
    let mut all = HashSet::new();
    let mut labels = HashSet::new();
    for n in doc.descendants().filter(|n| n.has_tag_name("text")) {
        let t: String = n
            .descendants()
            .filter(|c| c.is_text())
            .filter_map(|c| c.text())
            .collect();
        if n.attribute("class") == Some("label") {
            labels.insert(t.clone());
        }
        all.insert(t);
    }
    (all, labels)
}

/// Checks one record against the catalog and its image. Returns one message
/// per problem found.
pub fn verify_record(record: &ManifestRecord, catalog: &Catalog, base_dir: &Path) -> Vec<String> {
    let mut problems = Vec::new();

    let mut instances: Vec<ClauseInstance> = Vec::with_capacity(record.clauses.len());
    for text in &record.clauses {
        match parse_instance(text, catalog) {
            Ok(i) => instances.push(i),
            Err(e) => problems.push(format!("clause `{text}`: {e}")),
        }
    }
    let clauses_ok = problems.is_empty();
    if clauses_ok {
        if let Err(e) = check_point_flow(&instances, catalog) {
            problems.push(e.to_string());
        }
    }

    let points: IndexMap<String, Vec2> = record
        .points
        .iter()
        .map(|(k, [x, y])| (k.clone(), Vec2::new(*x, *y)))
        .collect();
    for inst in &instances {
        for p in inst.point_names() {
            if !points.contains_key(p) {
                problems.push(format!("no coordinates for point {p}"));
            }
        }
    }
    if let Some((name, _)) = points.iter().find(|(_, p)| !p.is_finite()) {
        problems.push(format!("non-finite coordinates for {name}"));
    }
    match max_residual(&instances, catalog, &points) {
        Ok(r) if r <= EPS_CONSTRUCT => {}
        Ok(r) => problems.push(format!("constraint residual {r:e} exceeds {EPS_CONSTRUCT:e}")),
        Err(e) => problems.push(format!("residual: {e}")),
    }
    if !(record.max_residual <= EPS_CONSTRUCT) {
        problems.push(format!("stored max_residual {} exceeds tolerance", record.max_residual));
    }
    if let Err(e) = CaptionMode::from_str(&record.caption_mode) {
        problems.push(e);
    }

    let image = base_dir.join(&record.image);
    match std::fs::read_to_string(&image) {
        Err(e) => problems.push(format!("image {}: {e}", image.display())),
        Ok(text) => match roxmltree::Document::parse(&text) {
            Err(e) => problems.push(format!("image {} does not parse: {e}", image.display())),
            Ok(doc) => {
                let (texts, labels) = svg_texts(&doc);
                let scene = sketch_scene(&instances, catalog, &points);
                for l in &scene.labels {
                    if !labels.contains(l) {
                        problems.push(format!("label {l} missing from image"));
                    }
                }
                for a in &scene.annotations {
                    let t = a.text();
                    if !texts.contains(&t) {
                        problems.push(format!("annotation {t} missing from image"));
                    }
                }
            }
        },
    }

    if record.caption.trim().is_empty() {
        problems.push("empty caption".into());
    } else if clauses_ok {
        let missing = RequiredTokens::for_instances(&instances, catalog).missing_from(&record.caption);
        if !missing.is_empty() {
            problems.push(format!("caption lacks {}", missing.join(", ")));
        }
    }
    problems
}

/// Verifies every line of a manifest. Image paths resolve against the
/// manifest's directory. Only an unreadable manifest is an error; everything
/// else is reported.
pub fn verify_dataset(manifest: &Path, catalog: &Catalog) -> Result<VerifyReport, StatsError> {
    let text = std::fs::read_to_string(manifest).map_err(|source| StatsError::Io {
        path: manifest.display().to_string(),
        source,
    })?;
    let base = manifest.parent().unwrap_or(Path::new(""));
    let mut report = VerifyReport::default();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        report.samples += 1;
        let line_no = i + 1;
        match serde_json::from_str::<ManifestRecord>(line) {
            Err(e) => report.violations.push(SampleViolation {
                id: format!("line {line_no}"),
                line: line_no,
                message: format!("malformed record: {e}"),
            }),
            Ok(rec) => {
                for message in verify_record(&rec, catalog, base) {
                    report.violations.push(SampleViolation {
                        id: rec.id.clone(),
                        line: line_no,
                        message,
                    });
                }
            }
        }
    }
    Ok(report)
}
