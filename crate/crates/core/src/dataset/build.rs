use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::generate::{Generator, Sample, SampleFailure};
use super::manifest::{complexity_plan, ManifestRecord, IMAGE_DIR, MANIFEST_FILE, REPORT_FILE};
use super::verify::verify_record;
use super::{Counts, GenConfig};
use crate::error::BuildError;
use crate::selector::Complexity;

/// Summary of one build invocation, also written as `run_report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub total: usize,
    /// Samples generated by this run.
    pub generated: usize,
    /// Samples kept from an earlier run.
    pub skipped: usize,
    /// Failed sample attempts, recovered or not.
    pub retries: usize,
    /// Indices that failed every attempt.
    pub failures: Vec<u64>,
    pub wall_time_secs: f64,
    /// Generated samples per second.
    pub throughput: f64,
    pub workers: usize,
    pub master_seed: u64,
    pub counts: Counts,
    pub caption_modes: BTreeMap<String, usize>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> BuildError + '_ {
    move |source| BuildError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Length in bytes of the longest prefix of `manifest` whose records belong to
/// this build and still verify, and the number of such records.
fn valid_prefix(manifest: &Path, gen: &Generator, plan: &[Complexity]) -> (u64, usize) {
    let Ok(text) = fs::read_to_string(manifest) else {
        return (0, 0);
    };
    let base = manifest.parent().unwrap_or(Path::new(""));
    let seed = gen.config().master_seed;
    let (mut bytes, mut kept) = (0u64, 0usize);
    for chunk in text.split_inclusive('\n') {
        if !chunk.ends_with('\n') || kept >= plan.len() {
            break;
        }
        let Ok(rec) = serde_json::from_str::<ManifestRecord>(chunk) else {
            break;
        };
        let belongs = rec.index == kept as u64 && rec.seed == seed && rec.complexity == plan[kept];
        if !belongs || !verify_record(&rec, gen.catalog(), base).is_empty() {
            break;
        }
        bytes += chunk.len() as u64;
        kept += 1;
    }
    (bytes, kept)
}

enum Msg {
    Done(usize, Box<Sample>),
    Failed(SampleFailure),
    Io(BuildError),
}

/// Builds the dataset described by `cfg` into `cfg.output_dir`.
pub fn build_dataset(cfg: &GenConfig) -> Result<RunReport, BuildError> {
    let catalog = cfg.load_catalog()?;
    build_with(&Generator::new(cfg.clone(), catalog))
}

/// Builds with a prepared generator. Samples are produced in parallel and
/// written in index order; an existing manifest is resumed from its longest
/// valid prefix.
pub fn build_with(gen: &Generator) -> Result<RunReport, BuildError> {
    let cfg = gen.config();
    let started = Instant::now();
    let out = cfg.output_dir.as_path();
    let images = out.join(IMAGE_DIR);
    fs::create_dir_all(&images).map_err(io_err(&images))?;
    let manifest_path = out.join(MANIFEST_FILE);

    let plan = complexity_plan(&cfg.counts, cfg.master_seed);
    let total = plan.len();
    let (keep_bytes, skipped) = valid_prefix(&manifest_path, gen, &plan);
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&manifest_path)
        .map_err(io_err(&manifest_path))?;
    file.set_len(keep_bytes).map_err(io_err(&manifest_path))?;
    let mut writer = BufWriter::new(file);
    if skipped > 0 {
        log::info!("resuming: skipped: {skipped}");
    }

    let workers = cfg.worker_count().min((total - skipped).max(1));
    let next = AtomicUsize::new(skipped);
    let abort = AtomicBool::new(false);
    let (tx, rx) = mpsc::channel::<Msg>();

    let mut generated = 0usize;
    let mut retries = 0usize;
    let mut failures: Vec<SampleFailure> = Vec::new();
    let mut io_error: Option<BuildError> = None;
    let mut caption_modes: BTreeMap<String, usize> = BTreeMap::new();

    std::thread::scope(|s| {
        for _ in 0..workers {
            let tx = tx.clone();
            let (next, abort, plan, images) = (&next, &abort, &plan, &images);
            s.spawn(move || loop {
                if abort.load(Ordering::Relaxed) {
                    break;
                }
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= plan.len() {
                    break;
                }
                let msg = match gen.generate_sample(i as u64, plan[i]) {
                    Err(f) => Msg::Failed(f),
                    Ok(sample) => {
                        let path = images.join(format!("{}.svg", sample.record.id));
                        match fs::write(&path, &sample.svg) {
                            Ok(()) => Msg::Done(i, Box::new(sample)),
                            Err(e) => Msg::Io(io_err(&path)(e)),
                        }
                    }
                };
                if tx.send(msg).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        let mut pending: BTreeMap<usize, Box<Sample>> = BTreeMap::new();
        let mut want = skipped;
        for msg in rx {
            match msg {
                Msg::Done(i, sample) => {
                    pending.insert(i, sample);
                }
                Msg::Failed(f) => {
                    log::error!("sample {} failed after {} attempts: {}", f.index, f.attempts, f.error);
                    failures.push(f);
                    abort.store(true, Ordering::Relaxed);
                }
                Msg::Io(e) => {
                    abort.store(true, Ordering::Relaxed);
                    io_error.get_or_insert(e);
                }
            }
            while io_error.is_none() {
                let Some(sample) = pending.remove(&want) else { break };
                let line = sample.record.to_line();
                if let Err(e) = writeln!(writer, "{line}") {
                    io_error = Some(io_err(&manifest_path)(e));
                    abort.store(true, Ordering::Relaxed);
                    break;
                }
                generated += 1;
                retries += sample.retries as usize;
                *caption_modes.entry(sample.record.caption_mode.clone()).or_default() += 1;
                want += 1;
                if generated.is_multiple_of(1000) {
                    log::info!("{} / {total} samples", want);
                }
            }
        }
    });
    writer.flush().map_err(io_err(&manifest_path))?;

    let wall = started.elapsed().as_secs_f64();
    let mut failed: Vec<u64> = failures.iter().map(|f| f.index).collect();
    failed.sort_unstable();
    let report = RunReport {
        total,
        generated,
        skipped,
        retries: retries + failures.iter().map(|f| f.attempts as usize).sum::<usize>(),
        failures: failed.clone(),
        wall_time_secs: wall,
        throughput: if wall > 0.0 { generated as f64 / wall } else { 0.0 },
        workers,
        master_seed: cfg.master_seed,
        counts: cfg.counts,
        caption_modes,
    };
    let report_path = out.join(REPORT_FILE);
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    File::create(&report_path)
        .and_then(|mut f| f.write_all(json.as_bytes()))
        .map_err(io_err(&report_path))?;
    log::info!(
        "generated {generated}, skipped {skipped}, {:.1} samples/s with {workers} workers",
        report.throughput
    );

    if let Some(e) = io_error {
        return Err(e);
    }
    if let Some(first) = failures.iter().min_by_key(|f| f.index) {
        return Err(BuildError::Aborted {
            failed,
            first_error: first.error.to_string(),
        });
    }
    Ok(report)
}
