//! Caption generation: template filling, offline composition, and optional
//! refinement through a chat-completion service.

mod refine;

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use refine::{
    extract_content, refine, CaptionMode, ChatClient, HttpChatClient, RefineError, RefinerConfig,
    DEFAULT_INSTRUCTION,
};

use crate::catalog::{Catalog, SketchDirective};
use crate::error::TemplateError;
use crate::instance::ClauseInstance;
use crate::util::{format_degrees, format_number};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaceholderKind {
    /// `{P}`
    Point,
    /// `{len:v}`
    Length,
    /// `{deg:t}`
    Angle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Placeholder {
    pub kind: PlaceholderKind,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Piece {
    Text(String),
    Slot(Placeholder),
}

/// A caption template such as `"{M} is the midpoint of segment {A}{B}."`.
#[derive(Debug, Clone, PartialEq)]
pub struct CaptionTemplate {
    source: String,
    pieces: Vec<Piece>,
}

impl CaptionTemplate {
    pub fn parse(source: &str) -> Result<Self, TemplateError> {
        let mut pieces = Vec::new();
        let mut rest = source;
        while let Some(open) = rest.find('{') {
            if open > 0 {
                pieces.push(Piece::Text(rest[..open].to_string()));
            }
            let after = &rest[open + 1..];
            let close = after
                .find('}')
                .ok_or_else(|| TemplateError::Unterminated(source.to_string()))?;
            let body = &after[..close];
            let (kind, name) = match body.split_once(':') {
                None => (PlaceholderKind::Point, body),
                Some(("len", n)) => (PlaceholderKind::Length, n),
                Some(("deg", n)) => (PlaceholderKind::Angle, n),
                Some(_) => return Err(TemplateError::Malformed(body.to_string())),
            };
            if !crate::catalog::is_param_name(name) {
                return Err(TemplateError::Malformed(body.to_string()));
            }
            pieces.push(Piece::Slot(Placeholder {
                kind,
                name: name.to_string(),
            }));
            rest = &after[close + 1..];
        }
        if rest.contains('}') {
            return Err(TemplateError::Malformed(rest.to_string()));
        }
        if !rest.is_empty() {
            pieces.push(Piece::Text(rest.to_string()));
        }
        Ok(Self {
            source: source.to_string(),
            pieces,
        })
    }

    pub fn as_str(&self) -> &str {
        &self.source
    }

    pub fn placeholders(&self) -> impl Iterator<Item = &Placeholder> {
        self.pieces.iter().filter_map(|p| match p {
            Piece::Slot(ph) => Some(ph),
            Piece::Text(_) => None,
        })
    }
}

impl fmt::Display for CaptionTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

/// Substitutes every placeholder from the instance's bindings.
pub fn fill_template(
    template: &CaptionTemplate,
    instance: &ClauseInstance,
) -> Result<String, TemplateError> {
    let mut out = String::with_capacity(template.source.len());
    for piece in &template.pieces {
        match piece {
            Piece::Text(t) => out.push_str(t),
            Piece::Slot(ph) => {
                let unresolved = || TemplateError::Unresolved(ph.name.clone());
                match ph.kind {
                    PlaceholderKind::Point => out.push_str(instance.point(&ph.name).ok_or_else(unresolved)?),
                    PlaceholderKind::Length => {
                        out.push_str(&format_number(instance.number(&ph.name).ok_or_else(unresolved)?))
                    }
                    PlaceholderKind::Angle => {
                        out.push_str(&format_degrees(instance.number(&ph.name).ok_or_else(unresolved)?))
                    }
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DraftMode {
    Offline,
    Refined,
}

/// One filled sentence per clause instance.
#[derive(Debug, Clone, PartialEq)]
pub struct CaptionDraft {
    pub sentences: Vec<String>,
    pub mode: DraftMode,
}

const CONNECTORS: [&str; 3] = ["Additionally, ", "Furthermore, ", "Moreover, "];

impl CaptionDraft {
    /// Joins sentences with rotating connectors, sentence case and terminal
    /// punctuation.
    pub fn join(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.sentences.iter().enumerate() {
            let s = s.trim();
            if s.is_empty() {
                continue;
            }
            if !out.is_empty() {
                out.push(' ');
            }
            let mut sentence = if i == 0 {
                capitalize(s)
            } else {
                format!("{}{}", CONNECTORS[(i - 1) % CONNECTORS.len()], decapitalize(s))
            };
            if !sentence.ends_with(['.', '!', '?']) {
                sentence.push('.');
            }
            out.push_str(&sentence);
        }
        out
    }
}

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Lowercases a leading ordinary word; point names such as `M` or `AB` keep
/// their case.
fn decapitalize(s: &str) -> String {
    let first_word = s.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("");
    let is_name = !first_word.is_empty()
        && first_word.chars().all(|c| c.is_ascii_uppercase() || c.is_ascii_digit());
    if is_name {
        return s.to_string();
    }
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Draws one template per instance uniformly and fills it.
pub fn draft_offline<R: Rng + ?Sized>(
    instances: &[ClauseInstance],
    catalog: &Catalog,
    rng: &mut R,
) -> Result<CaptionDraft, TemplateError> {
    let mut sentences = Vec::with_capacity(instances.len());
    for inst in instances {
        let def = catalog
            .get(&inst.clause_id)
            .ok_or_else(|| TemplateError::Unresolved(inst.clause_id.clone()))?;
        let t = &def.templates[rng.gen_range(0..def.templates.len())];
        sentences.push(fill_template(t, inst)?);
    }
    Ok(CaptionDraft {
        sentences,
        mode: DraftMode::Offline,
    })
}

/// Deterministic template-join caption.
pub fn compose_offline<R: Rng + ?Sized>(
    instances: &[ClauseInstance],
    catalog: &Catalog,
    rng: &mut R,
) -> Result<String, TemplateError> {
    Ok(draft_offline(instances, catalog, rng)?.join())
}

/// Tokens a caption must contain verbatim.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RequiredTokens {
    pub points: Vec<String>,
    pub numbers: Vec<String>,
}

impl RequiredTokens {
    /// Every bound point name, plus the text of every numeric annotation the
    /// clauses draw.
    pub fn for_instances(instances: &[ClauseInstance], catalog: &Catalog) -> Self {
        let mut t = RequiredTokens::default();
        for inst in instances {
            for p in inst.point_names() {
                if !t.points.iter().any(|q| q == p) {
                    t.points.push(p.to_string());
                }
            }
            let Some(def) = catalog.get(&inst.clause_id) else {
                continue;
            };
            for d in &def.sketch {
                let text = match d {
                    SketchDirective::AngleMark { value, .. } => inst.number(value).map(format_degrees),
                    SketchDirective::LengthLabel { value, .. } => inst.number(value).map(format_number),
                    _ => None,
                };
                if let Some(text) = text {
                    if !t.numbers.contains(&text) {
                        t.numbers.push(text);
                    }
                }
            }
        }
        t
    }

    /// Tokens missing from `caption`; empty when the caption is complete.
    pub fn missing_from(&self, caption: &str) -> Vec<String> {
        let names = point_tokens(caption);
        let mut missing: Vec<String> = self
            .points
            .iter()
            .filter(|p| !names.iter().any(|n| n == *p))
            .cloned()
            .collect();
        missing.extend(
            self.numbers
                .iter()
                .filter(|n| !contains_number(caption, n))
                .cloned(),
        );
        missing
    }
}

/// Point names appearing in text. Runs of capitals and digits such as `ABC`
/// or `A1B` are split into individual names.
pub fn point_tokens(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let starts_word = i == 0 || !chars[i - 1].is_alphanumeric();
        if starts_word && chars[i].is_ascii_uppercase() {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_uppercase() || chars[j].is_ascii_digit()) {
                j += 1;
            }
            // A capitalised word such as "Triangle" is not a run of names.
            if j == chars.len() || !chars[j].is_alphabetic() {
                let mut k = i;
                while k < j {
                    let mut e = k + 1;
                    while e < j && chars[e].is_ascii_digit() {
                        e += 1;
                    }
                    out.push(chars[k..e].iter().collect());
                    k = e;
                }
            }
            i = j.max(i + 1);
        } else {
            i += 1;
        }
    }
    out
}

/// Whether `number` (e.g. `7`, `7.5`, `60°`) occurs as a standalone numeral.
pub fn contains_number(text: &str, number: &str) -> bool {
    let mut start = 0;
    while let Some(pos) = text[start..].find(number) {
        let at = start + pos;
        let before = text[..at].chars().next_back();
        let after = text[at + number.len()..].chars().next();
        let digit_like = |c: char| c.is_ascii_digit() || c.is_ascii_uppercase();
        let ok_before = !matches!(before, Some(c) if digit_like(c) || c == '.');
        let ok_after = match after {
            None => true,
            Some(c) if c.is_ascii_digit() => false,
            Some('.') => !text[at + number.len() + 1..]
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_digit()),
            Some(_) => true,
        };
        if ok_before && ok_after {
            return true;
        }
        start = at + number.len().max(1);
    }
    false
}
