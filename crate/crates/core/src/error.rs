use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("clause `{clause}`: {message}")]
    Semantic { clause: String, message: String },
    #[error("no independent Easy clause")]
    NoIndependentEasy,
}

impl CatalogError {
    pub(crate) fn semantic(clause: &str, message: impl Into<String>) -> Self {
        CatalogError::Semantic {
            clause: clause.to_string(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InstanceError {
    #[error("empty clause text")]
    Empty,
    #[error("unknown clause id `{0}`")]
    UnknownClause(String),
    #[error("clause `{clause}` takes {expected} arguments, got {found}")]
    Arity {
        clause: String,
        expected: usize,
        found: usize,
    },
    #[error("clause `{clause}`: `{literal}` is not a number (parameter `{param}`)")]
    BadNumber {
        clause: String,
        param: String,
        literal: String,
    },
    #[error("clause `{clause}`: {param}={value} outside [{lo}, {hi}]")]
    OutOfRange {
        clause: String,
        param: String,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("clause `{clause}`: `{name}` is not a valid point name")]
    BadPointName { clause: String, name: String },
    #[error("clause `{clause}`: point `{name}` bound twice")]
    DuplicatePoint { clause: String, name: String },
    #[error("clause `{clause}`: prerequisite point `{name}` is not defined")]
    UndefinedPoint { clause: String, name: String },
    #[error("clause `{clause}`: new point `{name}` is already defined")]
    Redefined { clause: String, name: String },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SelectionError {
    #[error("selection exhausted for {complexity} complexity after {rounds} redraw rounds")]
    Exhausted { complexity: String, rounds: usize },
    #[error("invalid selection rules: {0}")]
    Rules(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ResidualError {
    #[error("constraint references missing point `{0}`")]
    MissingPoint(String),
    #[error("zero-length direction in {0}")]
    ZeroLength(&'static str),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error("no constructor registered for clause `{0}`")]
    UnknownConstructor(String),
    #[error("clause `{0}` is not in the catalog")]
    UnknownClause(String),
    #[error("construction exhausted at clause `{clause}` after {group_retries} group retries")]
    Exhausted { clause: String, group_retries: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LayoutError {
    #[error("scene has no points")]
    Empty,
    #[error("scene has zero extent")]
    ZeroExtent,
    #[error("scene has non-finite coordinates")]
    NonFinite,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TemplateError {
    #[error("unterminated placeholder in template `{0}`")]
    Unterminated(String),
    #[error("malformed placeholder `{{{0}}}`")]
    Malformed(String),
    #[error("unresolved placeholder `{{{0}}}`")]
    Unresolved(String),
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("config syntax: {0}")]
    Syntax(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

/// Why one attempt at a sample failed.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SampleError {
    #[error(transparent)]
    Selection(#[from] SelectionError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Residual(#[from] ResidualError),
    #[error("constructed residual {0} exceeds tolerance")]
    ResidualTooLarge(f64),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("output error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("generation aborted; failing indices: {failed:?} ({first_error})")]
    Aborted { failed: Vec<u64>, first_error: String },
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("cannot read manifest {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed manifest line {line}: {message}")]
    Malformed { line: usize, message: String },
}
