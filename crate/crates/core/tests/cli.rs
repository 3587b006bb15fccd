use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn geofig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geofig"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_config(dir: &Path, extra: &str) -> String {
    let path = dir.join("config.toml");
    fs::write(
        &path,
        format!("master_seed = 9\noutput_dir = \"data\"\nworkers = 2\n{extra}"),
    )
    .unwrap();
    path.display().to_string()
}

#[test]
fn generate_stats_verify_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "");
    let o = geofig(&["generate", "--config", &cfg, "--counts", "2,4,4"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("generated: 10"));

    let o = geofig(&["generate", "--config", &cfg, "--counts", "2,4,4"]);
    assert!(stdout(&o).contains("skipped: 10"));
    assert!(stdout(&o).contains("generated: 0"));

    let manifest = tmp.path().join("data/manifest.jsonl");
    let m = manifest.display().to_string();
    let csv = tmp.path().join("stats.csv");
    let o = geofig(&["stats", "--manifest", &m, "--csv", &csv.display().to_string()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("samples: 10"));
    assert!(fs::read_to_string(&csv).unwrap().starts_with("clause,easy,medium,hard,total"));

    let o = geofig(&["verify", "--manifest", &m, "--catalog", "reference"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let catalog = tmp.path().join("catalog.toml");
    fs::write(&catalog, geofig::catalog::REFERENCE_CATALOG).unwrap();
    let o = geofig(&["verify", "--manifest", &m, "--catalog", &catalog.display().to_string()]);
    assert_eq!(o.status.code(), Some(0));

    let first = fs::read_dir(tmp.path().join("data/images"))
        .unwrap()
        .next()
        .unwrap()
        .unwrap()
        .path();
    fs::remove_file(first).unwrap();
    let o = geofig(&["verify", "--manifest", &m, "--catalog", "reference"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn flags_override_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "[counts]\neasy = 50\n");
    let out = tmp.path().join("elsewhere");
    let o = geofig(&[
        "generate",
        "--config",
        &cfg,
        "--counts",
        "1,1,1",
        "--seed",
        "77",
        "--workers",
        "1",
        "--out",
        &out.display().to_string(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(out.join("manifest.jsonl")).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.contains("\"seed\":77"));
}

#[test]
fn abort_exit_code() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "[thresholds]\nmax_extent = 0.2\n");
    let o = geofig(&["generate", "--config", &cfg, "--counts", "2,0,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("aborted"));
}

#[test]
fn usage_errors() {
    assert_eq!(geofig(&[]).status.code(), Some(1));
    assert_eq!(geofig(&["generate"]).status.code(), Some(1));
    assert_eq!(geofig(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(geofig(&["--help"]).status.code(), Some(0));
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "bogus_key = 1\n");
    assert_eq!(geofig(&["generate", "--config", &cfg]).status.code(), Some(1));
    let o = geofig(&["generate", "--config", "/nonexistent/config.toml"]);
    assert_eq!(o.status.code(), Some(1));
    let o = geofig(&["generate", "--config", &cfg, "--counts", "1,2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn render_one_writes_svg_and_caption() {
    let tmp = tempfile::tempdir().unwrap();
    let svg = tmp.path().join("one.svg");
    let o = geofig(&[
        "render-one",
        "--clauses",
        "triangle A B C; midpoint M A B; angle_annot A B D 60",
        "--out",
        &svg.display().to_string(),
        "--seed",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let caption = stdout(&o);
    assert!(caption.contains("60°") && caption.contains('M'));
    let doc = fs::read_to_string(&svg).unwrap();
    assert!(roxmltree::Document::parse(&doc).is_ok());
    assert!(doc.contains(">60°</text>"));

    let o = geofig(&[
        "render-one",
        "--clauses",
        "midpoint M A B",
        "--out",
        &svg.display().to_string(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}
