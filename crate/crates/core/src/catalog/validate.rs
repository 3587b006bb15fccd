use std::collections::HashSet;
use std::fmt;

use super::{Category, ClauseDef, ParamKind, Primitive, SketchDirective};
use crate::caption::PlaceholderKind;

/// Template count below which conformance tooling warns.
pub const RECOMMENDED_TEMPLATE_COUNT: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    BadId,
    DuplicateParam(String),
    EmptyRange(String),
    AngleRangeOutOfBounds(String),
    ProducesNothing,
    TemplatesEmpty,
    /// `(item, param)`: `item` references `param`, which is not declared.
    UnknownParam(String, String),
    /// `(item, param)`: `param` has the wrong kind for its position in `item`.
    WrongKind(String, String),
    ConstraintArity(String),
    /// `(template index, param)`: template does not mention the parameter.
    TemplateOmits(usize, String),
    NumericWithoutAnnotation,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadId => write!(f, "id is not an identifier"),
            Violation::DuplicateParam(p) => write!(f, "parameter `{p}` declared twice"),
            Violation::EmptyRange(p) => write!(f, "parameter `{p}` has an empty range"),
            Violation::AngleRangeOutOfBounds(p) => {
                write!(f, "angle parameter `{p}` must lie strictly inside (0, 180)")
            }
            Violation::ProducesNothing => write!(f, "clause introduces no point and draws nothing"),
            Violation::TemplatesEmpty => write!(f, "templates empty"),
            Violation::UnknownParam(item, p) => write!(f, "`{item}` references undeclared param `{p}`"),
            Violation::WrongKind(item, p) => write!(f, "`{item}` uses `{p}` with the wrong kind"),
            Violation::ConstraintArity(item) => write!(f, "`{item}` has the wrong number of arguments"),
            Violation::TemplateOmits(i, p) => write!(f, "template {i} omits param `{p}`"),
            Violation::NumericWithoutAnnotation => {
                write!(f, "numeric clause has no angle or length annotation")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every clause-level invariant, collecting all violations.
pub fn validate_clause(def: &ClauseDef) -> ValidationReport {
    let mut r = ValidationReport::default();
    let v = &mut r.violations;

    if !super::document::is_identifier(&def.id) {
        v.push(Violation::BadId);
    }
    let mut seen = HashSet::new();
    for p in &def.params {
        if !seen.insert(p.name.as_str()) {
            v.push(Violation::DuplicateParam(p.name.clone()));
        }
        if let Some(range) = p.kind.range() {
            if !(range.lo.is_finite() && range.hi.is_finite() && range.lo <= range.hi) {
                v.push(Violation::EmptyRange(p.name.clone()));
            }
            if matches!(p.kind, ParamKind::Angle(_)) && !(range.lo > 0.0 && range.hi < 180.0) {
                v.push(Violation::AngleRangeOutOfBounds(p.name.clone()));
            }
        }
    }
    if def.new_point_count() == 0 && def.sketch.is_empty() {
        v.push(Violation::ProducesNothing);
    }
    if def.templates.is_empty() {
        v.push(Violation::TemplatesEmpty);
    }

    let kind_of = |name: &str| def.param(name).map(|p| p.kind);
    let check_point = |v: &mut Vec<Violation>, item: String, name: &str| match kind_of(name) {
        None => v.push(Violation::UnknownParam(item, name.to_string())),
        Some(k) if !k.is_point() => v.push(Violation::WrongKind(item, name.to_string())),
        _ => {}
    };

    for c in &def.constraints {
        let item = c.to_string();
        let arity_ok = match c.primitive.point_arity() {
            Some(n) => c.point_args().len() == n && (c.scalar_arg().is_some() == c.primitive.has_scalar()),
            None => c.args.len() >= 3,
        };
        if !arity_ok {
            v.push(Violation::ConstraintArity(item.clone()));
        }
        for a in c.point_args() {
            check_point(v, item.clone(), a);
        }
        if let Some(s) = c.scalar_arg() {
            let ok = match (c.primitive, kind_of(s)) {
                (_, None) => {
                    v.push(Violation::UnknownParam(item.clone(), s.to_string()));
                    true
                }
                (Primitive::DistConst, Some(ParamKind::Length(_))) => true,
                (Primitive::AngleConst, Some(ParamKind::Angle(_))) => true,
                _ => false,
            };
            if !ok {
                v.push(Violation::WrongKind(item, s.to_string()));
            }
        }
    }

    for d in &def.sketch {
        let item = d.to_string();
        for a in d.point_args() {
            check_point(v, item.clone(), a);
        }
        if let Some(val) = d.value_arg() {
            let ok = match (d, kind_of(val)) {
                (_, None) => {
                    v.push(Violation::UnknownParam(item.clone(), val.to_string()));
                    true
                }
                (SketchDirective::AngleMark { .. }, Some(ParamKind::Angle(_))) => true,
                (SketchDirective::LengthLabel { .. }, Some(ParamKind::Length(_))) => true,
                _ => false,
            };
            if !ok {
                v.push(Violation::WrongKind(item, val.to_string()));
            }
        }
    }

    for (i, t) in def.templates.iter().enumerate() {
        let item = format!("template {i}");
        let mut mentioned = HashSet::new();
        for ph in t.placeholders() {
            mentioned.insert(ph.name.as_str());
            let ok = match (ph.kind, kind_of(&ph.name)) {
                (_, None) => {
                    v.push(Violation::UnknownParam(item.clone(), ph.name.clone()));
                    true
                }
                (PlaceholderKind::Point, Some(k)) => k.is_point(),
                (PlaceholderKind::Length, Some(k)) => matches!(k, ParamKind::Length(_)),
                (PlaceholderKind::Angle, Some(k)) => matches!(k, ParamKind::Angle(_)),
            };
            if !ok {
                v.push(Violation::WrongKind(item.clone(), ph.name.clone()));
            }
        }
        for p in &def.params {
            if !mentioned.contains(p.name.as_str()) {
                v.push(Violation::TemplateOmits(i, p.name.clone()));
            }
        }
    }

    if def.category == Category::Numeric
        && !def.sketch.iter().any(|d| {
            matches!(d, SketchDirective::AngleMark { .. } | SketchDirective::LengthLabel { .. })
        })
    {
        v.push(Violation::NumericWithoutAnnotation);
    }

    if !def.templates.is_empty() && def.templates.len() < RECOMMENDED_TEMPLATE_COUNT {
        r.warnings.push(format!(
            "clause `{}` has {} templates (recommended {RECOMMENDED_TEMPLATE_COUNT})",
            def.id,
            def.templates.len()
        ));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{parse_constraint, parse_directive, parse_param, Difficulty};
    use crate::caption::CaptionTemplate;

    fn midpoint_def() -> ClauseDef {
        ClauseDef {
            id: "midpoint".into(),
            name: "Midpoint".into(),
            category: Category::Property,
            difficulty: Difficulty::Easy,
            params: ["M:new", "A:ref", "B:ref"].iter().map(|s| parse_param(s).unwrap()).collect(),
            constraints: vec![parse_constraint("midpoint(M;A,B)").unwrap()],
            sketch: vec![
                parse_directive("segment(A,B)").unwrap(),
                parse_directive("mark(M)").unwrap(),
            ],
            templates: vec![CaptionTemplate::parse("{M} is the midpoint of segment {A}{B}.").unwrap()],
        }
    }

    #[test]
    fn valid_midpoint_has_empty_report() {
        let r = validate_clause(&midpoint_def());
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        assert_eq!(r.warnings.len(), 1, "fewer than 20 templates warns");
    }

    #[test]
    fn zero_templates_reported() {
        let mut d = midpoint_def();
        d.templates.clear();
        let r = validate_clause(&d);
        assert!(r.violations.iter().any(|v| v.to_string() == "templates empty"));
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn constraint_with_absent_param_named() {
        let mut d = midpoint_def();
        d.constraints.push(parse_constraint("collinear(A,B,X)").unwrap());
        let r = validate_clause(&d);
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::UnknownParam(_, p) if p == "X")));
    }

    #[test]
    fn reports_every_violation() {
        let mut d = midpoint_def();
        d.templates.clear();
        d.sketch.push(parse_directive("mark(Y)").unwrap());
        d.params.push(parse_param("t:angle:0:200").unwrap());
        let r = validate_clause(&d);
        assert!(r.violations.len() >= 3, "{:?}", r.violations);
    }

    #[test]
    fn scalar_kind_mismatch() {
        let mut d = midpoint_def();
        d.params.push(parse_param("t:angle:20:160").unwrap());
        d.constraints.push(parse_constraint("dist_const(A,B;t)").unwrap());
        let r = validate_clause(&d);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::WrongKind(_, p) if p == "t")));
    }

    #[test]
    fn numeric_needs_annotation() {
        let mut d = midpoint_def();
        d.category = Category::Numeric;
        assert!(validate_clause(&d)
            .violations
            .contains(&Violation::NumericWithoutAnnotation));
    }

    #[test]
    fn template_must_mention_every_param() {
        let mut d = midpoint_def();
        d.templates = vec![CaptionTemplate::parse("{M} bisects the segment.").unwrap()];
        let r = validate_clause(&d);
        assert!(r.violations.contains(&Violation::TemplateOmits(0, "A".into())));
    }
}
