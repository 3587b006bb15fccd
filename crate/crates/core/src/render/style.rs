use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::Scene;

/// Minimum contrast between any stroke or text color and the background.
pub const MIN_CONTRAST: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Palette {
    /// Dark colors for strokes and text, `#rrggbb`.
    pub strokes: Vec<String>,
    /// Light background colors, `#rrggbb`.
    pub backgrounds: Vec<String>,
    /// SVG dash array for dashed strokes.
    pub dash_array: String,
}

impl Default for Palette {
    fn default() -> Self {
        let s = |v: &[&str]| v.iter().map(|c| c.to_string()).collect();
        Self {
            strokes: s(&[
                "#1f2937", "#b91c1c", "#1d4ed8", "#047857", "#7c3aed", "#c2410c", "#0f766e",
                "#be185d", "#4d7c0f", "#374151", "#92400e", "#1e3a8a",
            ]),
            backgrounds: s(&["#ffffff", "#fdf6e3", "#f0f9ff", "#f7fee7", "#fef2f2", "#f5f3ff"]),
            dash_array: "8 6".into(),
        }
    }
}

impl Palette {
    pub fn validate(&self) -> Result<(), String> {
        if self.strokes.is_empty() || self.backgrounds.is_empty() {
            return Err("palette needs at least one stroke and one background color".into());
        }
        for c in self.strokes.iter().chain(&self.backgrounds) {
            parse_hex(c).ok_or_else(|| format!("`{c}` is not a #rrggbb color"))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StylePlan {
    pub background: String,
    /// One color per scene stroke, in stroke order.
    pub stroke_colors: Vec<String>,
    /// Labels and annotations.
    pub text_color: String,
    pub dash_array: String,
}

/// `#rrggbb` to RGB bytes.
pub fn parse_hex(c: &str) -> Option<[u8; 3]> {
    let h = c.strip_prefix('#')?;
    if h.len() != 6 || !h.is_ascii() {
        return None;
    }
    let byte = |i: usize| u8::from_str_radix(&h[i..i + 2], 16).ok();
    Some([byte(0)?, byte(2)?, byte(4)?])
}

fn luminance(rgb: [u8; 3]) -> f64 {
    let lin = |v: u8| {
        let c = f64::from(v) / 255.0;
        if c <= 0.03928 {
            c / 12.92
        } else {
            ((c + 0.055) / 1.055).powf(2.4)
        }
    };
    0.2126 * lin(rgb[0]) + 0.7152 * lin(rgb[1]) + 0.0722 * lin(rgb[2])
}

/// WCAG contrast ratio between two `#rrggbb` colors; 1.0 if either fails to
/// parse.
pub fn contrast_ratio(a: &str, b: &str) -> f64 {
    match (parse_hex(a), parse_hex(b)) {
        (Some(a), Some(b)) => {
            let (la, lb) = (luminance(a), luminance(b));
            (la.max(lb) + 0.05) / (la.min(lb) + 0.05)
        }
        _ => 1.0,
    }
}

/// Draws a background and an independent color per stroke. Only colors with
/// at least [`MIN_CONTRAST`] against the background are eligible; if none
/// qualifies, black or white is used, whichever contrasts more.
pub fn plan_style<R: Rng + ?Sized>(scene: &Scene, rng: &mut R, palette: &Palette) -> StylePlan {
    let background = palette
        .backgrounds
        .choose(rng)
        .cloned()
        .unwrap_or_else(|| "#ffffff".into());
    let eligible: Vec<&String> = palette
        .strokes
        .iter()
        .filter(|c| contrast_ratio(c, &background) >= MIN_CONTRAST)
        .collect();
    let fallback = if contrast_ratio("#000000", &background) >= contrast_ratio("#ffffff", &background) {
        "#000000".to_string()
    } else {
        "#ffffff".to_string()
    };
    let pick = |rng: &mut R| {
        eligible
            .choose(rng)
            .map(|c| c.to_string())
            .unwrap_or_else(|| fallback.clone())
    };
    let stroke_colors = scene.strokes.iter().map(|_| pick(rng)).collect();
    let text_color = pick(rng);
    StylePlan {
        background,
        stroke_colors,
        text_color,
        dash_array: palette.dash_array.clone(),
    }
}
