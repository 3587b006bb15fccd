//! Catalog document reading and writing.
//!
//! The document is TOML with one `[[clause]]` table per clause. Inside a
//! record, parameters, constraints and sketch directives are short strings in
//! a small clause language:
//!
//! ```text
//! params      = ["M:new", "A:ref", "v:len:1:12", "t:angle:20:160"]
//! constraints = ["midpoint(M;A,B)", "dist_const(A,B;v)"]
//! sketch      = ["segment(A,B)", "circle(O,A,dashed)", "mark(M)", "angle(A,B,C;t)"]
//! ```

use std::fmt::Write as _;

use serde::Deserialize;

use super::{
    Catalog, Category, ClauseDef, ConstraintForm, Dash, Difficulty, NumRange, ParamKind, ParamSpec,
    Primitive, SketchDirective,
};
use crate::caption::CaptionTemplate;
use crate::error::CatalogError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogDoc {
    version: String,
    #[serde(default, rename = "clause")]
    clauses: Vec<ClauseRecord>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClauseRecord {
    id: String,
    name: String,
    category: String,
    difficulty: String,
    params: Vec<String>,
    #[serde(default)]
    constraints: Vec<String>,
    #[serde(default)]
    sketch: Vec<String>,
    #[serde(default)]
    templates: Vec<String>,
}

/// Parses a catalog document, preserving clause order.
pub fn parse_catalog(source: &str) -> Result<Catalog, CatalogError> {
    let doc: CatalogDoc = toml::from_str(source).map_err(|e| {
        let (line, column) = e
            .span()
            .map(|s| line_col(source, s.start))
            .unwrap_or((0, 0));
        CatalogError::Syntax {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    let clauses = doc
        .clauses
        .into_iter()
        .map(record_to_def)
        .collect::<Result<Vec<_>, _>>()?;
    Catalog::new(doc.version, clauses)
}

fn line_col(source: &str, offset: usize) -> (usize, usize) {
    let before = &source[..offset.min(source.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn record_to_def(r: ClauseRecord) -> Result<ClauseDef, CatalogError> {
    let id = r.id;
    let sem = |m: String| CatalogError::semantic(&id, m);
    if !is_identifier(&id) {
        return Err(sem(format!("`{id}` is not a valid clause id")));
    }
    let category = r.category.parse::<Category>().map_err(sem)?;
    let difficulty = r.difficulty.parse::<Difficulty>().map_err(sem)?;
    let params = r
        .params
        .iter()
        .map(|s| parse_param(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(sem)?;
    let constraints = r
        .constraints
        .iter()
        .map(|s| parse_constraint(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(sem)?;
    let sketch = r
        .sketch
        .iter()
        .map(|s| parse_directive(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(sem)?;
    let templates = r
        .templates
        .iter()
        .map(|s| CaptionTemplate::parse(s).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(sem)?;
    Ok(ClauseDef {
        id: id.clone(),
        name: r.name,
        category,
        difficulty,
        params,
        constraints,
        sketch,
        templates,
    })
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses `name:kind[:lo:hi]`.
pub fn parse_param(s: &str) -> Result<ParamSpec, String> {
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    let name = parts[0];
    if !is_identifier(name) {
        return Err(format!("bad parameter name in `{s}`"));
    }
    let range = |parts: &[&str]| -> Result<NumRange, String> {
        match parts {
            [lo, hi] => {
                let lo: f64 = lo.parse().map_err(|_| format!("bad lower bound in `{s}`"))?;
                let hi: f64 = hi.parse().map_err(|_| format!("bad upper bound in `{s}`"))?;
                Ok(NumRange::new(lo, hi))
            }
            _ => Err(format!("numeric parameter `{s}` needs `:lo:hi`")),
        }
    };
    let kind = match parts.get(1).copied() {
        Some("new") if parts.len() == 2 => ParamKind::NewPoint,
        Some("ref") if parts.len() == 2 => ParamKind::RefPoint,
        Some("len") => ParamKind::Length(range(&parts[2..])?),
        Some("angle") => ParamKind::Angle(range(&parts[2..])?),
        _ => return Err(format!("malformed parameter `{s}`")),
    };
    Ok(ParamSpec {
        name: name.to_string(),
        kind,
    })
}

fn format_param(p: &ParamSpec) -> String {
    match p.kind {
        ParamKind::NewPoint => format!("{}:new", p.name),
        ParamKind::RefPoint => format!("{}:ref", p.name),
        ParamKind::Length(r) => format!("{}:len:{}:{}", p.name, r.lo, r.hi),
        ParamKind::Angle(r) => format!("{}:angle:{}:{}", p.name, r.lo, r.hi),
    }
}

/// Splits `head(a,b;c)` into `head` and its arguments. `,` and `;` are both
/// separators; `;` only marks argument groups for readers.
fn split_call(s: &str) -> Result<(&str, Vec<&str>), String> {
    let s = s.trim();
    let open = s.find('(').ok_or_else(|| format!("expected `(` in `{s}`"))?;
    if !s.ends_with(')') {
        return Err(format!("expected `)` at end of `{s}`"));
    }
    let head = s[..open].trim();
    let inner = &s[open + 1..s.len() - 1];
    let args: Vec<&str> = inner.split([',', ';']).map(str::trim).collect();
    if args.iter().any(|a| !is_identifier(a)) {
        return Err(format!("bad argument list in `{s}`"));
    }
    Ok((head, args))
}

/// Parses a constraint such as `dist_eq(A,B;C,D)`.
pub fn parse_constraint(s: &str) -> Result<ConstraintForm, String> {
    let (head, args) = split_call(s)?;
    let primitive =
        Primitive::from_keyword(head).ok_or_else(|| format!("unknown primitive `{head}`"))?;
    let expected = primitive.point_arity().map(|n| n + usize::from(primitive.has_scalar()));
    match expected {
        Some(n) if args.len() != n => {
            return Err(format!("`{head}` takes {n} arguments in `{s}`"));
        }
        None if args.len() < 3 => return Err(format!("`{head}` takes at least 3 points in `{s}`")),
        _ => {}
    }
    Ok(ConstraintForm {
        primitive,
        args: args.into_iter().map(String::from).collect(),
    })
}

/// Parses a sketch directive such as `segment(A,B,dashed)` or `angle(A,B,C;t)`.
pub fn parse_directive(s: &str) -> Result<SketchDirective, String> {
    let (head, mut args) = split_call(s)?;
    let dash = match args.last().copied() {
        Some("dashed") => {
            args.pop();
            Dash::Dashed
        }
        Some("solid") => {
            args.pop();
            Dash::Solid
        }
        _ => Dash::Solid,
    };
    let own = |a: &str| a.to_string();
    let styled = matches!(head, "segment" | "circle" | "arc");
    if !styled && dash == Dash::Dashed {
        return Err(format!("`{head}` takes no style in `{s}`"));
    }
    let d = match (head, args.as_slice()) {
        ("segment", [a, b]) => SketchDirective::Segment { a: own(a), b: own(b), dash },
        ("circle", [o, a]) => SketchDirective::Circle { center: own(o), through: own(a), dash },
        ("arc", [o, a, b]) => SketchDirective::Arc {
            center: own(o),
            from: own(a),
            to: own(b),
            dash,
        },
        ("mark", [p]) => SketchDirective::Mark { point: own(p) },
        ("angle", [a, b, c, v]) => SketchDirective::AngleMark {
            a: own(a),
            b: own(b),
            c: own(c),
            value: own(v),
        },
        ("length", [a, b, v]) => SketchDirective::LengthLabel { a: own(a), b: own(b), value: own(v) },
        _ => return Err(format!("malformed directive `{s}`")),
    };
    Ok(d)
}

fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

fn write_list(out: &mut String, key: &str, items: &[String]) {
    if items.is_empty() {
        let _ = writeln!(out, "{key} = []");
        return;
    }
    let _ = writeln!(out, "{key} = [");
    for it in items {
        let _ = writeln!(out, "    {},", quote(it));
    }
    out.push_str("]\n");
}

/// Writes a catalog back out as a document that [`parse_catalog`] accepts.
pub fn format_catalog(catalog: &Catalog) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "version = {}", quote(catalog.version()));
    for c in catalog.clauses() {
        out.push_str("\n[[clause]]\n");
        let _ = writeln!(out, "id = {}", quote(&c.id));
        let _ = writeln!(out, "name = {}", quote(&c.name));
        let _ = writeln!(out, "category = {}", quote(c.category.as_str()));
        let _ = writeln!(out, "difficulty = {}", quote(c.difficulty.as_str()));
        let params: Vec<String> = c.params.iter().map(format_param).collect();
        let _ = writeln!(
            out,
            "params = [{}]",
            params.iter().map(|p| quote(p)).collect::<Vec<_>>().join(", ")
        );
        let cons: Vec<String> = c.constraints.iter().map(ToString::to_string).collect();
        write_list(&mut out, "constraints", &cons);
        let sketch: Vec<String> = c.sketch.iter().map(ToString::to_string).collect();
        write_list(&mut out, "sketch", &sketch);
        let templates: Vec<String> = c.templates.iter().map(|t| t.as_str().to_string()).collect();
        write_list(&mut out, "templates", &templates);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
version = "t"

[[clause]]
id = "segment"
name = "Segment"
category = "object"
difficulty = "easy"
params = ["A:new", "B:new"]
sketch = ["segment(A,B)", "mark(A)", "mark(B)"]
templates = ["Segment {A}{B} is drawn."]
"#;

    #[test]
    fn parses_minimal_document() {
        let c = parse_catalog(MINIMAL).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.clauses()[0].sketch.len(), 3);
    }

    #[test]
    fn syntax_error_carries_position() {
        let bad = "version = \"t\"\n[[clause]\nid = 3\n";
        match parse_catalog(bad) {
            Err(CatalogError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn dangling_param_names_clause() {
        let src = MINIMAL.replace("\"mark(B)\"", "\"mark(X)\"");
        match parse_catalog(&src) {
            Err(CatalogError::Semantic { clause, message }) => {
                assert_eq!(clause, "segment");
                assert!(message.contains('X'), "{message}");
            }
            other => panic!("expected semantic error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_id_rejected() {
        let src = format!("{MINIMAL}{}", &MINIMAL[MINIMAL.find("[[clause]]").unwrap()..]);
        match parse_catalog(&src) {
            Err(CatalogError::Semantic { clause, message }) => {
                assert_eq!(clause, "segment");
                assert!(message.contains("duplicate"));
            }
            other => panic!("expected duplicate error, got {other:?}"),
        }
    }

    #[test]
    fn empty_templates_rejected() {
        let src = MINIMAL.replace("templates = [\"Segment {A}{B} is drawn.\"]", "templates = []");
        match parse_catalog(&src) {
            Err(CatalogError::Semantic { clause, message }) => {
                assert_eq!(clause, "segment");
                assert!(message.contains("templates empty"), "{message}");
            }
            other => panic!("expected semantic error, got {other:?}"),
        }
    }

    #[test]
    fn empty_clause_list_has_no_independent_easy() {
        let err = parse_catalog("version = \"t\"\n").unwrap_err();
        assert_eq!(err, CatalogError::NoIndependentEasy);
        assert_eq!(err.to_string(), "no independent Easy clause");
    }

    #[test]
    fn param_forms() {
        assert_eq!(parse_param("A:new").unwrap().kind, ParamKind::NewPoint);
        assert_eq!(
            parse_param("t:angle:20:160").unwrap().kind,
            ParamKind::Angle(NumRange::new(20.0, 160.0))
        );
        assert!(parse_param("v:len").is_err());
        assert!(parse_param("A:point").is_err());
        assert!(parse_param("A:new:1:2").is_err());
    }

    #[test]
    fn constraint_forms_round_trip() {
        for s in [
            "midpoint(M;A,B)",
            "dist_eq(A,B;C,D)",
            "dist_const(A,B;v)",
            "angle_const(A,B,C;t)",
            "collinear(A,B,C)",
            "convex(A,B,C,D,E)",
            "on_circle(P;O,A)",
        ] {
            assert_eq!(parse_constraint(s).unwrap().to_string(), s);
        }
        assert!(parse_constraint("midpoint(M,A)").is_err());
        assert!(parse_constraint("convex(A,B)").is_err());
        assert!(parse_constraint("tangent(A,B)").is_err());
    }

    #[test]
    fn directive_forms_round_trip() {
        for s in [
            "segment(A,B)",
            "segment(A,B,dashed)",
            "circle(O,A)",
            "arc(O,A,B,dashed)",
            "mark(P)",
            "angle(A,B,C;t)",
            "length(A,B;v)",
        ] {
            assert_eq!(parse_directive(s).unwrap().to_string(), s);
        }
        assert!(parse_directive("mark(P,dashed)").is_err());
        assert!(parse_directive("segment(A)").is_err());
    }
}
