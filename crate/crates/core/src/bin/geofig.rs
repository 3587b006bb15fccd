use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use geofig::caption::CaptionMode;
use geofig::catalog::{parse_catalog, reference_catalog, Catalog};
use geofig::dataset::{build_dataset, compute_stats, verify_dataset, Counts, GenConfig, Generator};
use geofig::error::BuildError;
use geofig::instance::parse_instance;
use geofig::rng::SampleSeed;

#[derive(Parser)]
#[command(name = "geofig", version, about = "Generate and check geometric figure / caption datasets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a dataset (resumes an interrupted build in the same directory).
    Generate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Per-complexity counts as E,M,H.
        #[arg(long)]
        counts: Option<Counts>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Clause frequencies and caption lengths from a manifest.
    Stats {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// List catalog clauses that never occur.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Re-check every sample of a manifest.
    Verify {
        #[arg(long)]
        manifest: PathBuf,
        /// Catalog document; `reference` for the built-in catalog.
        #[arg(long)]
        catalog: PathBuf,
    },
    /// Run the full pipeline on an explicit clause group and write one SVG.
    RenderOne {
        /// Clause texts separated by `;`, e.g. "triangle A B C; midpoint M A B".
        #[arg(long)]
        clauses: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
}

const EXIT_USAGE: u8 = 1;
const EXIT_ABORTED: u8 = 2;
const EXIT_VIOLATIONS: u8 = 3;

fn load_catalog(path: &Path) -> Result<Catalog> {
    if path.as_os_str() == "reference" {
        return Ok(reference_catalog());
    }
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading catalog {}", path.display()))?;
    parse_catalog(&text).with_context(|| format!("parsing catalog {}", path.display()))
}

fn generate(
    config: &Path,
    seed: Option<u64>,
    counts: Option<Counts>,
    workers: Option<usize>,
    out: Option<PathBuf>,
) -> Result<ExitCode> {
    let mut cfg = GenConfig::from_file(config)?;
    if let Some(s) = seed {
        cfg.master_seed = s;
    }
    if let Some(c) = counts {
        cfg.counts = c;
    }
    if let Some(w) = workers {
        cfg.workers = w;
    }
    if let Some(o) = out {
        cfg.output_dir = o;
    }
    match build_dataset(&cfg) {
        Ok(r) => {
            println!("generated: {}", r.generated);
            println!("skipped: {}", r.skipped);
            println!("retries: {}", r.retries);
            println!(
                "wall time: {:.2}s ({:.1} samples/s, {} workers)",
                r.wall_time_secs, r.throughput, r.workers
            );
            println!("output: {}", cfg.output_dir.display());
            Ok(ExitCode::SUCCESS)
        }
        Err(e @ BuildError::Aborted { .. }) => {
            eprintln!("error: {e}");
            Ok(ExitCode::from(EXIT_ABORTED))
        }
        Err(e) => Err(e.into()),
    }
}

fn stats(manifest: &Path, csv: Option<PathBuf>, catalog: Option<PathBuf>) -> Result<ExitCode> {
    let catalog = catalog.as_deref().map(load_catalog).transpose()?;
    let report = compute_stats(manifest, catalog.as_ref())?;
    println!(
        "samples: {} (easy {}, medium {}, hard {}), clause instances: {}",
        report.samples,
        report.samples_easy,
        report.samples_medium,
        report.samples_hard,
        report.total_instances
    );
    println!(
        "{:<22} {:>6} {:>6} {:>6} {:>6} {:>10} {:>10}",
        "clause", "easy", "medium", "hard", "total", "chars", "words"
    );
    for c in &report.clauses {
        println!(
            "{:<22} {:>6} {:>6} {:>6} {:>6} {:>10.1} {:>10.1}",
            c.clause, c.easy, c.medium, c.hard, c.total, c.mean_caption_chars, c.mean_caption_words
        );
    }
    if !report.unused.is_empty() {
        println!("never used: {}", report.unused.join(", "));
    }
    if let Some(path) = csv {
        let f = std::fs::File::create(&path)
            .with_context(|| format!("creating {}", path.display()))?;
        report.write_csv(f)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(manifest: &Path, catalog: &Path) -> Result<ExitCode> {
    let catalog = load_catalog(catalog)?;
    let report = verify_dataset(manifest, &catalog)?;
    for v in &report.violations {
        println!("{} (line {}): {}", v.id, v.line, v.message);
    }
    println!(
        "{} samples, {} violations in {} samples",
        report.samples,
        report.violations.len(),
        report.failing_ids().len()
    );
    Ok(if report.is_clean() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VIOLATIONS)
    })
}

fn render_one(
    clauses: &str,
    out: &Path,
    seed: u64,
    config: Option<PathBuf>,
    catalog: Option<PathBuf>,
) -> Result<ExitCode> {
    let mut cfg = match config {
        Some(p) => GenConfig::from_file(&p)?,
        None => GenConfig::default(),
    };
    if let Some(c) = catalog {
        cfg.catalog = Some(c);
    }
    let catalog = match &cfg.catalog {
        Some(p) => load_catalog(p)?,
        None => reference_catalog(),
    };
    let instances = clauses
        .split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| parse_instance(t, &catalog).with_context(|| format!("clause `{t}`")))
        .collect::<Result<Vec<_>>>()?;
    if instances.is_empty() {
        bail!("no clauses given");
    }
    let gen = Generator::new(cfg, catalog);
    let r = gen.render_group(&instances, SampleSeed::new(seed, 0))?;
    std::fs::write(out, &r.svg).with_context(|| format!("writing {}", out.display()))?;
    println!("{}", r.caption);
    if r.caption_mode != CaptionMode::Offline {
        eprintln!("caption mode: {}", r.caption_mode.as_str());
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Generate {
            config,
            seed,
            counts,
            workers,
            out,
        } => generate(&config, seed, counts, workers, out),
        Command::Stats {
            manifest,
            csv,
            catalog,
        } => stats(&manifest, csv, catalog),
        Command::Verify { manifest, catalog } => verify(&manifest, &catalog),
        Command::RenderOne {
            clauses,
            out,
            seed,
            config,
            catalog,
        } => render_one(&clauses, &out, seed, config, catalog),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
