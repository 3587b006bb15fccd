//! Python bindings: `import geofig_py`.

use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use geofig::catalog::{format_catalog, parse_catalog};
use geofig::dataset::{build_dataset, compute_stats, verify_dataset, Counts, GenConfig, Generator};
use geofig::rng::{SampleSeed, Stage};
use geofig::selector::Complexity;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py(py: Python<'_>, value: &impl serde::Serialize) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// A validated clause catalog.
#[pyclass(name = "Catalog", frozen)]
struct PyCatalog {
    inner: geofig::Catalog,
}

#[pymethods]
impl PyCatalog {
    /// The built-in 24-clause catalog.
    #[staticmethod]
    fn reference() -> Self {
        Self {
            inner: geofig::reference_catalog(),
        }
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        parse_catalog(text).map(|inner| Self { inner }).map_err(value_err)
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        let text = std::fs::read_to_string(&path).map_err(value_err)?;
        Self::parse(&text)
    }

    #[getter]
    fn version(&self) -> &str {
        self.inner.version()
    }

    fn clause_ids(&self) -> Vec<String> {
        self.inner.clauses().iter().map(|c| c.id.clone()).collect()
    }

    fn difficulty(&self, clause_id: &str) -> PyResult<&'static str> {
        self.inner
            .get(clause_id)
            .map(|c| c.difficulty.as_str())
            .ok_or_else(|| value_err(format!("unknown clause {clause_id}")))
    }

    fn to_text(&self) -> String {
        format_catalog(&self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Catalog(version={:?}, clauses={})", self.inner.version(), self.inner.len())
    }
}

fn catalog_or_reference(catalog: Option<&PyCatalog>) -> geofig::Catalog {
    catalog.map_or_else(geofig::reference_catalog, |c| c.inner.clone())
}

/// Parses and re-prints a clause instance in canonical form.
#[pyfunction]
#[pyo3(signature = (text, catalog=None))]
fn parse_instance(text: &str, catalog: Option<&PyCatalog>) -> PyResult<String> {
    let cat = catalog_or_reference(catalog);
    geofig::parse_instance(text, &cat).map(|i| i.to_string()).map_err(value_err)
}

/// Draws a clause group for `complexity` ("easy", "medium" or "hard").
#[pyfunction]
#[pyo3(signature = (complexity, seed, index=0, catalog=None))]
fn select_group(complexity: &str, seed: u64, index: u64, catalog: Option<&PyCatalog>) -> PyResult<Vec<String>> {
    let cat = catalog_or_reference(catalog);
    let c: Complexity = complexity.parse().map_err(value_err)?;
    let mut rng = SampleSeed::new(seed, index).rng(Stage::Select);
    let g = geofig::select_group(c, &cat, &GenConfig::default().rules, &mut rng).map_err(value_err)?;
    Ok(g.instances.iter().map(ToString::to_string).collect())
}

/// Constructs, renders and captions explicit clause instances. Returns a
/// dict with `svg`, `caption`, `caption_mode`, `points` and `max_residual`.
#[pyfunction]
#[pyo3(signature = (clauses, seed=0, index=0, catalog=None))]
fn render_group(
    py: Python<'_>,
    clauses: Vec<String>,
    seed: u64,
    index: u64,
    catalog: Option<&PyCatalog>,
) -> PyResult<Py<PyAny>> {
    let cat = catalog_or_reference(catalog);
    let group = clauses
        .iter()
        .map(|t| geofig::parse_instance(t, &cat))
        .collect::<Result<Vec<_>, _>>()
        .map_err(value_err)?;
    let gen = Generator::new(GenConfig::default(), cat);
    let out = py
        .detach(|| gen.render_group(&group, SampleSeed::new(seed, index)))
        .map_err(value_err)?;
    let points: indexmap::IndexMap<&str, [f64; 2]> =
        out.scene.points.iter().map(|(k, p)| (k.as_str(), [p.x, p.y])).collect();
    to_py(
        py,
        &serde_json::json!({
            "svg": out.svg,
            "caption": out.caption,
            "caption_mode": out.caption_mode.as_str(),
            "points": points,
            "max_residual": out.max_residual,
        }),
    )
}

/// Generates one dataset sample and returns its manifest record as a dict.
#[pyfunction]
#[pyo3(signature = (complexity, seed, index=0))]
fn generate_sample(py: Python<'_>, complexity: &str, seed: u64, index: u64) -> PyResult<(Py<PyAny>, String)> {
    let c: Complexity = complexity.parse().map_err(value_err)?;
    let cfg = GenConfig {
        master_seed: seed,
        ..GenConfig::default()
    };
    let gen = Generator::new(cfg, geofig::reference_catalog());
    let s = py
        .detach(|| gen.generate_sample(index, c))
        .map_err(|f| value_err(format!("sample {} failed after {} attempts: {}", f.index, f.attempts, f.error)))?;
    Ok((to_py(py, &s.record)?, s.svg))
}

/// Builds a dataset. Keyword arguments override the config file.
#[pyfunction]
#[pyo3(signature = (config=None, output_dir=None, counts=None, seed=None, workers=None))]
fn build(
    py: Python<'_>,
    config: Option<PathBuf>,
    output_dir: Option<PathBuf>,
    counts: Option<(usize, usize, usize)>,
    seed: Option<u64>,
    workers: Option<usize>,
) -> PyResult<Py<PyAny>> {
    let mut cfg = match config {
        Some(p) => GenConfig::from_file(&p).map_err(value_err)?,
        None => GenConfig::default(),
    };
    if let Some(d) = output_dir {
        cfg.output_dir = d;
    }
    if let Some((e, m, h)) = counts {
        cfg.counts = Counts::new(e, m, h);
    }
    if let Some(s) = seed {
        cfg.master_seed = s;
    }
    if let Some(w) = workers {
        cfg.workers = w;
    }
    let report = py
        .detach(|| build_dataset(&cfg))
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    to_py(py, &report)
}

/// Per-clause statistics for a manifest.
#[pyfunction]
fn stats(py: Python<'_>, manifest: PathBuf) -> PyResult<Py<PyAny>> {
    let cat = geofig::reference_catalog();
    let report = compute_stats(&manifest, Some(&cat)).map_err(value_err)?;
    to_py(py, &report)
}

/// Re-checks every manifest record. Returns the list of violations.
#[pyfunction]
#[pyo3(signature = (manifest, catalog=None))]
fn verify(py: Python<'_>, manifest: PathBuf, catalog: Option<&PyCatalog>) -> PyResult<Py<PyAny>> {
    let cat = catalog_or_reference(catalog);
    let report = verify_dataset(&manifest, &cat).map_err(value_err)?;
    to_py(py, &report.violations)
}

#[pymodule]
fn geofig_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCatalog>()?;
    m.add_function(wrap_pyfunction!(parse_instance, m)?)?;
    m.add_function(wrap_pyfunction!(select_group, m)?)?;
    m.add_function(wrap_pyfunction!(render_group, m)?)?;
    m.add_function(wrap_pyfunction!(generate_sample, m)?)?;
    m.add_function(wrap_pyfunction!(build, m)?)?;
    m.add_function(wrap_pyfunction!(stats, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
