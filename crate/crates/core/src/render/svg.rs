use std::fmt::Write as _;

use super::{CanvasSpec, LaidOutScene, MaskPlan, StylePlan};
use crate::catalog::Dash;
use crate::geometry::{arc_sweep, Annotation, StrokeKind, Vec2};

/// Fixed two-decimal coordinate; never prints `-0.00`.
fn n(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn dash_attr(dash: Dash, style: &StylePlan) -> String {
    match dash {
        Dash::Solid => String::new(),
        Dash::Dashed => format!(r#" stroke-dasharray="{}""#, style.dash_array),
    }
}

/// SVG path for the minor arc about `c` from `f` to `t`.
fn arc_path(c: Vec2, f: Vec2, t: Vec2, r: f64) -> String {
    let sweep = if arc_sweep(c, f, t) > 0.0 { 1 } else { 0 };
    format!(
        "M {} {} A {} {} 0 0 {} {} {}",
        n(f.x),
        n(f.y),
        n(r),
        n(r),
        sweep,
        n(t.x),
        n(t.y)
    )
}

/// Emits a standalone SVG document: background, strokes in scene order,
/// annotation marks and text, point labels, then mask patches.
pub fn render(laid: &LaidOutScene, style: &StylePlan, mask: &MaskPlan, canvas: &CanvasSpec) -> String {
    let scene = &laid.scene;
    let (w, h) = (canvas.width, canvas.height);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect class="background" x="0" y="0" width="{w}" height="{h}" fill="{}"/>"#,
        style.background
    );

    let _ = writeln!(
        out,
        r#"<g class="strokes" fill="none" stroke-width="{}" stroke-linecap="round">"#,
        n(canvas.stroke_width)
    );
    for (i, s) in scene.strokes.iter().enumerate() {
        let color = style
            .stroke_colors
            .get(i)
            .map(String::as_str)
            .unwrap_or("#000000");
        let dash = dash_attr(s.dash, style);
        match &s.kind {
            StrokeKind::Segment { a, b } => {
                let (Some(pa), Some(pb)) = (scene.point(a), scene.point(b)) else {
                    continue;
                };
                let _ = writeln!(
                    out,
                    r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}"{dash}/>"#,
                    n(pa.x),
                    n(pa.y),
                    n(pb.x),
                    n(pb.y)
                );
            }
            StrokeKind::Circle { center, radius } => {
                let Some(c) = scene.point(center) else { continue };
                let _ = writeln!(
                    out,
                    r#"<circle cx="{}" cy="{}" r="{}" stroke="{color}"{dash}/>"#,
                    n(c.x),
                    n(c.y),
                    n(*radius)
                );
            }
            StrokeKind::Arc { center, from, to } => {
                let (Some(c), Some(f), Some(t)) =
                    (scene.point(center), scene.point(from), scene.point(to))
                else {
                    continue;
                };
                let _ = writeln!(
                    out,
                    r#"<path d="{}" stroke="{color}"{dash}/>"#,
                    arc_path(c, f, t, f.dist(c))
                );
            }
        }
    }
    let _ = writeln!(out, "</g>");

    let text_attrs = format!(
        r#"font-family="sans-serif" font-size="{}" text-anchor="middle" dominant-baseline="central" fill="{}""#,
        n(canvas.font_size),
        style.text_color
    );
    let _ = writeln!(
        out,
        r#"<g class="annotations" fill="none" stroke="{}" stroke-width="{}">"#,
        style.text_color,
        n(canvas.stroke_width * 0.75)
    );
    for (i, ann) in scene.annotations.iter().enumerate() {
        if let Annotation::Angle { a, b, c, degrees } = ann {
            let (Some(pa), Some(pb), Some(pc)) = (scene.point(a), scene.point(b), scene.point(c))
            else {
                continue;
            };
            let r = laid.angle_mark_radii.get(i).copied().unwrap_or(0.0);
            let (Some(u), Some(v)) = ((pa - pb).normalized(), (pc - pb).normalized()) else {
                continue;
            };
            if (degrees - 90.0).abs() < 1e-9 {
                let s = r * 0.7;
                let (p1, p2, p3) = (pb + u * s, pb + u * s + v * s, pb + v * s);
                let _ = writeln!(
                    out,
                    r#"<path d="M {} {} L {} {} L {} {}"/>"#,
                    n(p1.x),
                    n(p1.y),
                    n(p2.x),
                    n(p2.y),
                    n(p3.x),
                    n(p3.y)
                );
            } else {
                let _ = writeln!(out, r#"<path d="{}"/>"#, arc_path(pb, pb + u * r, pb + v * r, r));
            }
        }
    }
    let _ = writeln!(out, "</g>");

    for (ann, at) in scene.annotations.iter().zip(&laid.annotation_anchors) {
        let _ = writeln!(
            out,
            r#"<text class="annotation" x="{}" y="{}" {text_attrs}>{}</text>"#,
            n(at.x),
            n(at.y),
            escape(&ann.text())
        );
    }
    for (name, at) in &laid.label_anchors {
        let _ = writeln!(
            out,
            r#"<text class="label" x="{}" y="{}" {text_attrs}>{}</text>"#,
            n(at.x),
            n(at.y),
            escape(name)
        );
    }
    for r in &mask.patches {
        let _ = writeln!(
            out,
            r#"<rect class="mask" x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
            n(r.x),
            n(r.y),
            n(r.w),
            n(r.h),
            style.background
        );
    }
    out.push_str("</svg>\n");
    out
}
