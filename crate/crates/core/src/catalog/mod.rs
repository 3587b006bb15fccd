//! The clause catalog: declarative definitions of every geometric clause the
//! generator can draw from.
//!
//! A clause names the points it introduces, the points it consumes from the
//! existing figure, any numeric inputs, the geometric relations its points must
//! satisfy, how it is drawn, and how it is described in text.

mod document;
mod validate;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub(crate) use document::is_identifier as is_param_name;
pub use document::{format_catalog, parse_catalog, parse_constraint, parse_directive, parse_param};
pub use validate::{validate_clause, ValidationReport, Violation, RECOMMENDED_TEMPLATE_COUNT};

use crate::caption::CaptionTemplate;
use crate::error::CatalogError;

/// The reference catalog shipped with the crate.
pub const REFERENCE_CATALOG: &str = include_str!("../../catalog/reference.toml");

/// Parses the shipped reference catalog.
pub fn reference_catalog() -> Catalog {
    parse_catalog(REFERENCE_CATALOG).expect("shipped reference catalog is valid")
}

/// Difficulty of a single clause.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Difficulty {
    Easy,
    Medium,
    Hard,
}

impl Difficulty {
    pub const ALL: [Difficulty; 3] = [Difficulty::Easy, Difficulty::Medium, Difficulty::Hard];

    pub fn as_str(self) -> &'static str {
        match self {
            Difficulty::Easy => "easy",
            Difficulty::Medium => "medium",
            Difficulty::Hard => "hard",
        }
    }
}

impl fmt::Display for Difficulty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Difficulty {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "easy" => Ok(Difficulty::Easy),
            "medium" => Ok(Difficulty::Medium),
            "hard" => Ok(Difficulty::Hard),
            other => Err(format!("unknown difficulty `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Category {
    Object,
    Property,
    Transform,
    Numeric,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::Object => "object",
            Category::Property => "property",
            Category::Transform => "transform",
            Category::Numeric => "numeric",
        }
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "object" => Ok(Category::Object),
            "property" => Ok(Category::Property),
            "transform" => Ok(Category::Transform),
            "numeric" => Ok(Category::Numeric),
            other => Err(format!("unknown category `{other}`")),
        }
    }
}

/// Closed interval of admissible numeric values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumRange {
    pub lo: f64,
    pub hi: f64,
}

impl NumRange {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.lo && v <= self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamKind {
    /// A point the clause introduces.
    NewPoint,
    /// A point that must already exist (a prerequisite point).
    RefPoint,
    /// Length in scene units.
    Length(NumRange),
    /// Angle in degrees.
    Angle(NumRange),
}

impl ParamKind {
    pub fn is_point(&self) -> bool {
        matches!(self, ParamKind::NewPoint | ParamKind::RefPoint)
    }

    pub fn is_numeric(&self) -> bool {
        !self.is_point()
    }

    pub fn range(&self) -> Option<NumRange> {
        match self {
            ParamKind::Length(r) | ParamKind::Angle(r) => Some(*r),
            _ => None,
        }
    }

    /// Sampling grid step: integer lengths, 5 degree angles.
    pub fn step(&self) -> Option<f64> {
        match self {
            ParamKind::Length(_) => Some(1.0),
            ParamKind::Angle(_) => Some(5.0),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamSpec {
    pub name: String,
    pub kind: ParamKind,
}

/// Geometric relation primitives used to state (and later audit) a clause's
/// inter-dependencies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Primitive {
    /// `collinear(A,B,C)`
    Collinear,
    /// `midpoint(M;A,B)`
    Midpoint,
    /// `dist_eq(A,B;C,D)`: |AB| = |CD|
    DistEq,
    /// `dist_const(A,B;v)`: |AB| = v
    DistConst,
    /// `angle_const(A,B,C;t)`: angle ABC = t degrees
    AngleConst,
    /// `parallel(A,B;C,D)`
    Parallel,
    /// `perpendicular(A,B;C,D)`
    Perpendicular,
    /// `on_circle(P;O,A)`: |OP| = |OA|
    OnCircle,
    /// `convex(P1,...,Pn)`: the cycle turns consistently
    ConvexCycle,
}

impl Primitive {
    pub fn keyword(self) -> &'static str {
        match self {
            Primitive::Collinear => "collinear",
            Primitive::Midpoint => "midpoint",
            Primitive::DistEq => "dist_eq",
            Primitive::DistConst => "dist_const",
            Primitive::AngleConst => "angle_const",
            Primitive::Parallel => "parallel",
            Primitive::Perpendicular => "perpendicular",
            Primitive::OnCircle => "on_circle",
            Primitive::ConvexCycle => "convex",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        Some(match s {
            "collinear" => Primitive::Collinear,
            "midpoint" => Primitive::Midpoint,
            "dist_eq" => Primitive::DistEq,
            "dist_const" => Primitive::DistConst,
            "angle_const" => Primitive::AngleConst,
            "parallel" => Primitive::Parallel,
            "perpendicular" => Primitive::Perpendicular,
            "on_circle" => Primitive::OnCircle,
            "convex" => Primitive::ConvexCycle,
            _ => return None,
        })
    }

    /// Number of point arguments; `None` for variadic (convex, at least 3).
    pub fn point_arity(self) -> Option<usize> {
        match self {
            Primitive::Collinear | Primitive::Midpoint | Primitive::OnCircle => Some(3),
            Primitive::DistEq | Primitive::Parallel | Primitive::Perpendicular => Some(4),
            Primitive::DistConst => Some(2),
            Primitive::AngleConst => Some(3),
            Primitive::ConvexCycle => None,
        }
    }

    /// Whether the last argument is a numeric parameter.
    pub fn has_scalar(self) -> bool {
        matches!(self, Primitive::DistConst | Primitive::AngleConst)
    }

    /// Residual is dimensionless and unchanged by rotation, scaling and
    /// translation. The others are lengths and scale with the figure.
    pub fn is_scale_invariant(self) -> bool {
        matches!(
            self,
            Primitive::Collinear
                | Primitive::Parallel
                | Primitive::Perpendicular
                | Primitive::ConvexCycle
                | Primitive::AngleConst
        )
    }

    /// Index at which the second argument group starts in the canonical
    /// textual form, e.g. 1 for `midpoint(M;A,B)`.
    fn group_split(self, n_args: usize) -> Option<usize> {
        match self {
            Primitive::Midpoint | Primitive::OnCircle => Some(1),
            Primitive::DistEq | Primitive::Parallel | Primitive::Perpendicular => Some(2),
            Primitive::DistConst | Primitive::AngleConst => Some(n_args - 1),
            Primitive::Collinear | Primitive::ConvexCycle => None,
        }
    }
}

/// A relation over the owning clause's parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintForm {
    pub primitive: Primitive,
    pub args: Vec<String>,
}

impl ConstraintForm {
    pub fn point_args(&self) -> &[String] {
        if self.primitive.has_scalar() {
            &self.args[..self.args.len().saturating_sub(1)]
        } else {
            &self.args
        }
    }

    pub fn scalar_arg(&self) -> Option<&str> {
        if self.primitive.has_scalar() {
            self.args.last().map(String::as_str)
        } else {
            None
        }
    }
}

impl fmt::Display for ConstraintForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.primitive.keyword())?;
        let split = self.primitive.group_split(self.args.len());
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(if Some(i) == split { ";" } else { "," })?;
            }
            f.write_str(a)?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dash {
    #[default]
    Solid,
    Dashed,
}

/// Declarative drawing instruction.
#[derive(Debug, Clone, PartialEq)]
pub enum SketchDirective {
    Segment { a: String, b: String, dash: Dash },
    Circle { center: String, through: String, dash: Dash },
    /// Minor arc around `center` from `from` to `to`.
    Arc { center: String, from: String, to: String, dash: Dash },
    Mark { point: String },
    AngleMark { a: String, b: String, c: String, value: String },
    LengthLabel { a: String, b: String, value: String },
}

impl SketchDirective {
    pub fn point_args(&self) -> Vec<&str> {
        match self {
            SketchDirective::Segment { a, b, .. } => vec![a, b],
            SketchDirective::Circle { center, through, .. } => vec![center, through],
            SketchDirective::Arc { center, from, to, .. } => vec![center, from, to],
            SketchDirective::Mark { point } => vec![point],
            SketchDirective::AngleMark { a, b, c, .. } => vec![a, b, c],
            SketchDirective::LengthLabel { a, b, .. } => vec![a, b],
        }
    }

    pub fn value_arg(&self) -> Option<&str> {
        match self {
            SketchDirective::AngleMark { value, .. } | SketchDirective::LengthLabel { value, .. } => {
                Some(value)
            }
            _ => None,
        }
    }
}

impl fmt::Display for SketchDirective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dash = |d: &Dash| if *d == Dash::Dashed { ",dashed" } else { "" };
        match self {
            SketchDirective::Segment { a, b, dash: d } => write!(f, "segment({a},{b}{})", dash(d)),
            SketchDirective::Circle { center, through, dash: d } => {
                write!(f, "circle({center},{through}{})", dash(d))
            }
            SketchDirective::Arc { center, from, to, dash: d } => {
                write!(f, "arc({center},{from},{to}{})", dash(d))
            }
            SketchDirective::Mark { point } => write!(f, "mark({point})"),
            SketchDirective::AngleMark { a, b, c, value } => write!(f, "angle({a},{b},{c};{value})"),
            SketchDirective::LengthLabel { a, b, value } => write!(f, "length({a},{b};{value})"),
        }
    }
}

/// A catalog entry.
#[derive(Debug, Clone, PartialEq)]
pub struct ClauseDef {
    pub id: String,
    pub name: String,
    pub category: Category,
    pub difficulty: Difficulty,
    pub params: Vec<ParamSpec>,
    pub constraints: Vec<ConstraintForm>,
    pub sketch: Vec<SketchDirective>,
    pub templates: Vec<CaptionTemplate>,
}

impl ClauseDef {
    pub fn param(&self, name: &str) -> Option<&ParamSpec> {
        self.params.iter().find(|p| p.name == name)
    }

    /// Number of prerequisite points.
    pub fn ref_count(&self) -> usize {
        self.params.iter().filter(|p| p.kind == ParamKind::RefPoint).count()
    }

    pub fn new_point_count(&self) -> usize {
        self.params.iter().filter(|p| p.kind == ParamKind::NewPoint).count()
    }

    pub fn is_independent(&self) -> bool {
        self.ref_count() == 0
    }

    pub fn has_length_param(&self) -> bool {
        self.params.iter().any(|p| matches!(p.kind, ParamKind::Length(_)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct TierCounts {
    pub easy: usize,
    pub medium: usize,
    pub hard: usize,
}

/// An immutable, validated set of clause definitions.
#[derive(Debug, Clone)]
pub struct Catalog {
    version: String,
    clauses: Vec<ClauseDef>,
    by_id: HashMap<String, usize>,
}

impl PartialEq for Catalog {
    fn eq(&self, other: &Self) -> bool {
        self.version == other.version && self.clauses == other.clauses
    }
}

impl Catalog {
    /// Builds a catalog, enforcing every catalog and clause invariant.
    pub fn new(version: impl Into<String>, clauses: Vec<ClauseDef>) -> Result<Self, CatalogError> {
        let cat = Self::new_partial(version, clauses)?;
        if !cat
            .clauses
            .iter()
            .any(|c| c.difficulty == Difficulty::Easy && c.is_independent())
        {
            return Err(CatalogError::NoIndependentEasy);
        }
        Ok(cat)
    }

    /// Like [`Catalog::new`] but without requiring an independent Easy
    /// clause. Selection from such a catalog can fail; useful for exercising
    /// the selector's exhaustion path.
    pub fn new_partial(
        version: impl Into<String>,
        clauses: Vec<ClauseDef>,
    ) -> Result<Self, CatalogError> {
        let mut by_id = HashMap::with_capacity(clauses.len());
        for (i, c) in clauses.iter().enumerate() {
            if by_id.insert(c.id.clone(), i).is_some() {
                return Err(CatalogError::semantic(&c.id, "duplicate clause id"));
            }
            let report = validate_clause(c);
            if let Some(v) = report.violations.first() {
                return Err(CatalogError::semantic(&c.id, v.to_string()));
            }
        }
        Ok(Self {
            version: version.into(),
            clauses,
            by_id,
        })
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn clauses(&self) -> &[ClauseDef] {
        &self.clauses
    }

    pub fn get(&self, id: &str) -> Option<&ClauseDef> {
        self.by_id.get(id).map(|&i| &self.clauses[i])
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn counts(&self) -> TierCounts {
        let mut t = TierCounts::default();
        for c in &self.clauses {
            match c.difficulty {
                Difficulty::Easy => t.easy += 1,
                Difficulty::Medium => t.medium += 1,
                Difficulty::Hard => t.hard += 1,
            }
        }
        t
    }

    pub fn of_difficulty(&self, d: Difficulty) -> impl Iterator<Item = &ClauseDef> {
        self.clauses.iter().filter(move |c| c.difficulty == d)
    }
}
