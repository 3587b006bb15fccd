//! Scene to SVG: aspect-fit layout, color styling, random masking.

mod layout;
mod mask;
mod style;
mod svg;

use serde::{Deserialize, Serialize};

pub use layout::{layout, LaidOutScene};
pub use mask::{masked_length, plan_mask, stroke_length, MaskParams, MaskPlan, Rect};
pub use style::{contrast_ratio, parse_hex, plan_style, Palette, StylePlan};
pub use svg::render;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CanvasSpec {
    pub width: u32,
    pub height: u32,
    pub margin: u32,
    pub stroke_width: f64,
    pub font_size: f64,
}

impl Default for CanvasSpec {
    fn default() -> Self {
        Self {
            width: 512,
            height: 512,
            margin: 32,
            stroke_width: 2.0,
            font_size: 16.0,
        }
    }
}

impl CanvasSpec {
    pub fn validate(&self) -> Result<(), String> {
        if self.width == 0 || self.height == 0 {
            return Err("canvas dimensions must be positive".into());
        }
        if 2 * self.margin >= self.width.min(self.height) {
            return Err("canvas margin must be less than half the smaller dimension".into());
        }
        if !(self.stroke_width > 0.0 && self.font_size > 0.0) {
            return Err("stroke_width and font_size must be positive".into());
        }
        Ok(())
    }
}
