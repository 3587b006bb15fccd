use std::f64::consts::TAU;

use indexmap::IndexMap;

use super::CanvasSpec;
use crate::error::LayoutError;
use crate::geometry::{arc_sweep, Annotation, Scene, StrokeKind, Vec2};

/// Points within this many pixels of a stroke count as lying on it when
/// choosing label positions.
const ON_STROKE_PX: f64 = 0.5;

/// A scene mapped to canvas pixels (y down) with label positions.
#[derive(Debug, Clone, PartialEq)]
pub struct LaidOutScene {
    /// Coordinates and circle radii in pixels.
    pub scene: Scene,
    /// Pixels per scene unit.
    pub scale: f64,
    /// Center of each label's text.
    pub label_anchors: IndexMap<String, Vec2>,
    /// Center of each annotation's text, in annotation order.
    pub annotation_anchors: Vec<Vec2>,
    /// Radius of angle-mark arcs, per annotation (0 for length labels).
    pub angle_mark_radii: Vec<f64>,
}

/// Fits the scene's bounding box into the canvas minus margins, preserving
/// aspect ratio, centered, y flipped.
pub fn layout(scene: &Scene, canvas: &CanvasSpec) -> Result<LaidOutScene, LayoutError> {
    let (lo, hi) = scene.bounds().ok_or(LayoutError::Empty)?;
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(LayoutError::NonFinite);
    }
    let (w, h) = (hi.x - lo.x, hi.y - lo.y);
    if w <= 0.0 && h <= 0.0 {
        return Err(LayoutError::ZeroExtent);
    }
    let avail_w = f64::from(canvas.width - 2 * canvas.margin);
    let avail_h = f64::from(canvas.height - 2 * canvas.margin);
    let fit = |avail: f64, len: f64| if len > 0.0 { avail / len } else { f64::INFINITY };
    let scale = fit(avail_w, w).min(fit(avail_h, h));
    let mid = (lo + hi) * 0.5;
    let center = Vec2::new(f64::from(canvas.width) / 2.0, f64::from(canvas.height) / 2.0);
    let map = |p: Vec2| Vec2::new(center.x + (p.x - mid.x) * scale, center.y - (p.y - mid.y) * scale);

    let mut out = scene.clone();
    for p in out.points.values_mut() {
        *p = map(*p);
    }
    for s in &mut out.strokes {
        if let StrokeKind::Circle { radius, .. } = &mut s.kind {
            *radius *= scale;
        }
    }
    let label_anchors = out
        .labels
        .iter()
        .filter_map(|name| {
            let p = out.point(name)?;
            Some((name.clone(), label_anchor(&out, p, canvas.font_size)))
        })
        .collect();
    let (annotation_anchors, angle_mark_radii) = annotation_positions(&out, canvas.font_size);
    Ok(LaidOutScene {
        scene: out,
        scale,
        label_anchors,
        annotation_anchors,
        angle_mark_radii,
    })
}

/// Length labels sit beside the segment midpoint, on the side away from the
/// figure's centroid; angle labels sit on the angle bisector just outside
/// the mark.
fn annotation_positions(scene: &Scene, font_size: f64) -> (Vec<Vec2>, Vec<f64>) {
    let n = scene.points.len().max(1) as f64;
    let centroid = scene.points.values().fold(Vec2::ZERO, |acc, p| acc + *p) / n;
    let mut anchors = Vec::with_capacity(scene.annotations.len());
    let mut radii = Vec::with_capacity(scene.annotations.len());
    for ann in &scene.annotations {
        match ann {
            Annotation::Length { a, b, .. } => {
                let (pa, pb) = (
                    scene.point(a).unwrap_or_default(),
                    scene.point(b).unwrap_or_default(),
                );
                let m = (pa + pb) * 0.5;
                let mut normal = (pb - pa).perp().normalized().unwrap_or(Vec2::new(0.0, -1.0));
                if normal.dot(m - centroid) < 0.0 {
                    normal = -normal;
                }
                anchors.push(m + normal * (font_size * 0.9));
                radii.push(0.0);
            }
            Annotation::Angle { a, b, c, .. } => {
                let (pa, pb, pc) = (
                    scene.point(a).unwrap_or_default(),
                    scene.point(b).unwrap_or_default(),
                    scene.point(c).unwrap_or_default(),
                );
                let (u, v) = (pa - pb, pc - pb);
                let r = (font_size * 1.4).min(0.45 * u.norm().min(v.norm()));
                let (un, vn) = (
                    u.normalized().unwrap_or(Vec2::new(1.0, 0.0)),
                    v.normalized().unwrap_or(Vec2::new(0.0, -1.0)),
                );
                let bis = (un + vn).normalized().unwrap_or(un.perp());
                anchors.push(pb + bis * (r + font_size * 0.9));
                radii.push(r);
            }
        }
    }
    (anchors, radii)
}

/// Directions of strokes leaving `p`, in pixel space.
fn incident_directions(scene: &Scene, p: Vec2) -> Vec<Vec2> {
    let mut dirs = Vec::new();
    for s in &scene.strokes {
        match &s.kind {
            StrokeKind::Segment { a, b } => {
                let (Some(pa), Some(pb)) = (scene.point(a), scene.point(b)) else {
                    continue;
                };
                let d = pb - pa;
                let len2 = d.dot(d);
                if len2 == 0.0 {
                    continue;
                }
                let t = (p - pa).dot(d) / len2;
                if (pa + d * t.clamp(0.0, 1.0)).dist(p) > ON_STROKE_PX {
                    continue;
                }
                if t * len2.sqrt() > ON_STROKE_PX {
                    dirs.push(-d);
                }
                if (1.0 - t) * len2.sqrt() > ON_STROKE_PX {
                    dirs.push(d);
                }
            }
            StrokeKind::Circle { center, radius } => {
                let Some(c) = scene.point(center) else { continue };
                if (p.dist(c) - radius).abs() <= ON_STROKE_PX {
                    let tangent = (p - c).perp();
                    dirs.push(tangent);
                    dirs.push(-tangent);
                }
            }
            StrokeKind::Arc { center, from, to } => {
                let (Some(c), Some(f), Some(t)) =
                    (scene.point(center), scene.point(from), scene.point(to))
                else {
                    continue;
                };
                let sign = arc_sweep(c, f, t).signum();
                if f.dist(p) <= ON_STROKE_PX {
                    dirs.push((f - c).perp() * sign);
                }
                if t.dist(p) <= ON_STROKE_PX {
                    dirs.push((t - c).perp() * -sign);
                }
            }
        }
    }
    dirs.retain(|d| d.norm() > 0.0);
    dirs
}

/// Label center along the bisector of the widest free angular gap around the
/// point; 8 px to the north-east when nothing is attached to it.
fn label_anchor(scene: &Scene, p: Vec2, font_size: f64) -> Vec2 {
    let mut angles: Vec<f64> = incident_directions(scene, p)
        .iter()
        .map(|d| d.angle().rem_euclid(TAU))
        .collect();
    if angles.is_empty() {
        let off = 8.0 + font_size * 0.5;
        return p + Vec2::new(off, -off);
    }
    angles.sort_by(f64::total_cmp);
    let mut best = (angles[0] + TAU - angles[angles.len() - 1], angles[angles.len() - 1]);
    for w in angles.windows(2) {
        let gap = w[1] - w[0];
        if gap > best.0 {
            best = (gap, w[0]);
        }
    }
    let dir = Vec2::from_angle(best.1 + best.0 / 2.0);
    p + dir * (font_size * 0.9)
}
