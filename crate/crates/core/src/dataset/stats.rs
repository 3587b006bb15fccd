use std::collections::{BTreeMap, HashSet};
use std::io::{BufRead, Write};
use std::path::Path;

use serde::Serialize;

use super::manifest::ManifestRecord;
use crate::catalog::Catalog;
use crate::error::StatsError;
use crate::selector::Complexity;

/// Frequency and caption length of one clause across a manifest.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ClauseStats {
    pub clause: String,
    pub easy: usize,
    pub medium: usize,
    pub hard: usize,
    pub total: usize,
    /// Mean caption length over samples containing the clause; 0 if none.
    pub mean_caption_chars: f64,
    pub mean_caption_words: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct StatsReport {
    /// Sorted by clause id.
    pub clauses: Vec<ClauseStats>,
    pub samples: usize,
    pub samples_easy: usize,
    pub samples_medium: usize,
    pub samples_hard: usize,
    /// Clause instances over all samples; equals the sum of `total`.
    pub total_instances: usize,
    /// Catalog clauses that never occur (only when a catalog was given).
    pub unused: Vec<String>,
}

impl StatsReport {
    pub fn get(&self, clause: &str) -> Option<&ClauseStats> {
        self.clauses.iter().find(|c| c.clause == clause)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.clauses {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing CSV to memory");
        String::from_utf8(buf).expect("CSV is UTF-8")
    }
}

#[derive(Default)]
struct Acc {
    per: [usize; 3],
    samples: usize,
    chars: usize,
    words: usize,
}

fn slot(c: Complexity) -> usize {
    match c {
        Complexity::Easy => 0,
        Complexity::Medium => 1,
        Complexity::Hard => 2,
    }
}

/// Exact counts and means from manifest lines. With a catalog, every
/// catalog clause gets a row, including unused ones.
pub fn compute_stats_from_reader<R: BufRead>(
    reader: R,
    catalog: Option<&Catalog>,
) -> Result<StatsReport, StatsError> {
    let mut acc: BTreeMap<String, Acc> = BTreeMap::new();
    if let Some(cat) = catalog {
        for def in cat.clauses() {
            acc.entry(def.id.clone()).or_default();
        }
    }
    let mut report = StatsReport::default();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| StatsError::Malformed {
            line: line_no,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: ManifestRecord = serde_json::from_str(&line).map_err(|e| StatsError::Malformed {
            line: line_no,
            message: e.to_string(),
        })?;
        report.samples += 1;
        match rec.complexity {
            Complexity::Easy => report.samples_easy += 1,
            Complexity::Medium => report.samples_medium += 1,
            Complexity::Hard => report.samples_hard += 1,
        }
        let chars = rec.caption.chars().count();
        let words = rec.caption.split_whitespace().count();
        let mut seen = HashSet::new();
        for text in &rec.clauses {
            let id = text.split_whitespace().next().ok_or(StatsError::Malformed {
                line: line_no,
                message: "empty clause text".into(),
            })?;
            let a = acc.entry(id.to_string()).or_default();
            a.per[slot(rec.complexity)] += 1;
            report.total_instances += 1;
            if seen.insert(id) {
                a.samples += 1;
                a.chars += chars;
                a.words += words;
            }
        }
    }
    for (clause, a) in acc {
        let mean = |v: usize| if a.samples > 0 { v as f64 / a.samples as f64 } else { 0.0 };
        let total = a.per.iter().sum();
        if total == 0 {
            report.unused.push(clause.clone());
        }
        report.clauses.push(ClauseStats {
            easy: a.per[0],
            medium: a.per[1],
            hard: a.per[2],
            total,
            mean_caption_chars: mean(a.chars),
            mean_caption_words: mean(a.words),
            clause,
        });
    }
    Ok(report)
}

pub fn compute_stats(manifest: &Path, catalog: Option<&Catalog>) -> Result<StatsReport, StatsError> {
    let f = std::fs::File::open(manifest).map_err(|source| StatsError::Io {
        path: manifest.display().to_string(),
        source,
    })?;
    compute_stats_from_reader(std::io::BufReader::new(f), catalog)
}
