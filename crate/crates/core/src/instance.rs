//! Clause instances: a catalog clause with concrete point names and numbers.
//!
//! The textual form is the clause id followed by one argument per parameter,
//! in declaration order: `midpoint M A B`, `angle_annot A B C 60`.

use std::collections::HashSet;
use std::fmt;

use crate::catalog::{Catalog, ClauseDef, ParamKind};
use crate::error::InstanceError;
use crate::util::format_number;

#[derive(Debug, Clone, PartialEq)]
pub enum Binding {
    Point(String),
    /// Scene units for lengths, degrees for angles.
    Number(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClauseInstance {
    pub clause_id: String,
    /// `(param name, binding)` in parameter declaration order.
    pub args: Vec<(String, Binding)>,
}

impl ClauseInstance {
    pub fn binding(&self, param: &str) -> Option<&Binding> {
        self.args.iter().find(|(p, _)| p == param).map(|(_, b)| b)
    }

    pub fn point(&self, param: &str) -> Option<&str> {
        match self.binding(param)? {
            Binding::Point(p) => Some(p),
            Binding::Number(_) => None,
        }
    }

    pub fn number(&self, param: &str) -> Option<f64> {
        match self.binding(param)? {
            Binding::Number(v) => Some(*v),
            Binding::Point(_) => None,
        }
    }

    /// All bound point names, in parameter order.
    pub fn point_names(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(|(_, b)| match b {
            Binding::Point(p) => Some(p.as_str()),
            Binding::Number(_) => None,
        })
    }

    /// Point names bound to parameters of the given kind.
    pub fn points_of_kind<'a>(
        &'a self,
        def: &'a ClauseDef,
        kind: ParamKind,
    ) -> impl Iterator<Item = &'a str> + 'a {
        def.params
            .iter()
            .filter(move |p| p.kind == kind)
            .filter_map(move |p| self.point(&p.name))
    }
}

impl fmt::Display for ClauseInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.clause_id)?;
        for (_, b) in &self.args {
            match b {
                Binding::Point(p) => write!(f, " {p}")?,
                Binding::Number(v) => write!(f, " {}", format_number(*v))?,
            }
        }
        Ok(())
    }
}

/// Point names are a capital letter with an optional numeric suffix.
pub fn is_point_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase()) && chars.all(|c| c.is_ascii_digit())
}

/// Parses `<clause-id> <arg>...` against the catalog.
pub fn parse_instance(text: &str, catalog: &Catalog) -> Result<ClauseInstance, InstanceError> {
    let mut words = text.split_whitespace();
    let id = words.next().ok_or(InstanceError::Empty)?;
    let def = catalog
        .get(id)
        .ok_or_else(|| InstanceError::UnknownClause(id.to_string()))?;
    let words: Vec<&str> = words.collect();
    if words.len() != def.params.len() {
        return Err(InstanceError::Arity {
            clause: id.to_string(),
            expected: def.params.len(),
            found: words.len(),
        });
    }
    let mut seen = HashSet::new();
    let mut args = Vec::with_capacity(words.len());
    for (param, word) in def.params.iter().zip(words) {
        let binding = match param.kind.range() {
            None => {
                if !is_point_name(word) {
                    return Err(InstanceError::BadPointName {
                        clause: id.to_string(),
                        name: word.to_string(),
                    });
                }
                if !seen.insert(word) {
                    return Err(InstanceError::DuplicatePoint {
                        clause: id.to_string(),
                        name: word.to_string(),
                    });
                }
                Binding::Point(word.to_string())
            }
            Some(range) => {
                let value: f64 = word
                    .parse()
                    .ok()
                    .filter(|v: &f64| v.is_finite())
                    .ok_or_else(|| InstanceError::BadNumber {
                        clause: id.to_string(),
                        param: param.name.clone(),
                        literal: word.to_string(),
                    })?;
                if !range.contains(value) {
                    return Err(InstanceError::OutOfRange {
                        clause: id.to_string(),
                        param: param.name.clone(),
                        value,
                        lo: range.lo,
                        hi: range.hi,
                    });
                }
                Binding::Number(value)
            }
        };
        args.push((param.name.clone(), binding));
    }
    Ok(ClauseInstance {
        clause_id: id.to_string(),
        args,
    })
}

/// Checks that a sequence of instances is well-founded: every prerequisite
/// point was introduced by an earlier instance and no point is introduced
/// twice. Returns the defined point names in introduction order.
pub fn check_point_flow(
    instances: &[ClauseInstance],
    catalog: &Catalog,
) -> Result<Vec<String>, InstanceError> {
    let mut pool: Vec<String> = Vec::new();
    for inst in instances {
        let def = catalog
            .get(&inst.clause_id)
            .ok_or_else(|| InstanceError::UnknownClause(inst.clause_id.clone()))?;
        for name in inst.points_of_kind(def, ParamKind::RefPoint) {
            if !pool.iter().any(|p| p == name) {
                return Err(InstanceError::UndefinedPoint {
                    clause: inst.clause_id.clone(),
                    name: name.to_string(),
                });
            }
        }
        for name in inst.points_of_kind(def, ParamKind::NewPoint) {
            if pool.iter().any(|p| p == name) {
                return Err(InstanceError::Redefined {
                    clause: inst.clause_id.clone(),
                    name: name.to_string(),
                });
            }
            pool.push(name.to_string());
        }
    }
    Ok(pool)
}
