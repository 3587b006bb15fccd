use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::LaidOutScene;
use crate::geometry::{arc_sweep, Scene, Stroke, StrokeKind, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaskParams {
    /// Chance that an image is masked at all.
    pub probability: f64,
    /// Patch count is uniform over `1..=max_patches`.
    pub max_patches: usize,
    /// Patch side bounds, pixels.
    pub min_side: f64,
    pub max_side: f64,
    /// Upper bound on masked stroke length over total stroke length.
    pub max_fraction: f64,
    /// Placement attempts per patch before it is dropped.
    pub attempts: usize,
}

impl Default for MaskParams {
    fn default() -> Self {
        Self {
            probability: 0.5,
            max_patches: 2,
            min_side: 8.0,
            max_side: 24.0,
            max_fraction: 0.05,
            attempts: 32,
        }
    }
}

impl MaskParams {
    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=1.0).contains(&self.probability) {
            return Err("mask.probability must lie in [0, 1]".into());
        }
        if !(self.min_side > 0.0 && self.min_side <= self.max_side) {
            return Err("mask sides must satisfy 0 < min_side <= max_side".into());
        }
        if !(0.0..=1.0).contains(&self.max_fraction) {
            return Err("mask.max_fraction must lie in [0, 1]".into());
        }
        Ok(())
    }
}

/// Axis-aligned rectangle in pixels; `(x, y)` is the top-left corner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl Rect {
    pub fn centered(c: Vec2, w: f64, h: f64) -> Self {
        Self {
            x: c.x - w / 2.0,
            y: c.y - h / 2.0,
            w,
            h,
        }
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.x && p.x <= self.x + self.w && p.y >= self.y && p.y <= self.y + self.h
    }

    pub fn intersects(&self, o: &Rect) -> bool {
        self.x < o.x + o.w && o.x < self.x + self.w && self.y < o.y + o.h && o.y < self.y + self.h
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MaskPlan {
    pub patches: Vec<Rect>,
}

impl MaskPlan {
    pub fn is_empty(&self) -> bool {
        self.patches.is_empty()
    }
}

/// Resolved pixel geometry of a stroke.
enum Geom {
    Segment(Vec2, Vec2),
    Circle(Vec2, f64),
    /// Center, radius, start angle, signed sweep.
    Arc(Vec2, f64, f64, f64),
}

fn geom(scene: &Scene, s: &Stroke) -> Option<Geom> {
    Some(match &s.kind {
        StrokeKind::Segment { a, b } => Geom::Segment(scene.point(a)?, scene.point(b)?),
        StrokeKind::Circle { center, radius } => Geom::Circle(scene.point(center)?, *radius),
        StrokeKind::Arc { center, from, to } => {
            let (c, f, t) = (scene.point(center)?, scene.point(from)?, scene.point(to)?);
            Geom::Arc(c, f.dist(c), (f - c).angle(), arc_sweep(c, f, t))
        }
    })
}

impl Geom {
    fn length(&self) -> f64 {
        match *self {
            Geom::Segment(a, b) => a.dist(b),
            Geom::Circle(_, r) => TAU * r,
            Geom::Arc(_, r, _, sweep) => r * sweep.abs(),
        }
    }

    /// Point at parameter `u` in [0, 1].
    fn at(&self, u: f64) -> Vec2 {
        match *self {
            Geom::Segment(a, b) => a + (b - a) * u,
            Geom::Circle(c, r) => c + Vec2::from_angle(TAU * u) * r,
            Geom::Arc(c, r, start, sweep) => c + Vec2::from_angle(start + sweep * u) * r,
        }
    }

    /// Parameter intervals of the stroke lying inside `rect`.
    fn intervals_in(&self, rect: &Rect) -> Vec<(f64, f64)> {
        match *self {
            Geom::Segment(a, b) => clip_segment(a, b, rect).into_iter().collect(),
            Geom::Circle(c, r) => {
                let mut cuts = vec![0.0, 1.0];
                cuts.extend(circle_crossings(c, r, rect).into_iter().map(|t| t / TAU));
                inside_runs(cuts, |u| rect.contains(self.at(u)))
            }
            Geom::Arc(c, r, start, sweep) => {
                let mut cuts = vec![0.0, 1.0];
                if sweep != 0.0 {
                    for phi in circle_crossings(c, r, rect) {
                        let u = ((phi - start) * sweep.signum()).rem_euclid(TAU) / sweep.abs();
                        if u > 0.0 && u < 1.0 {
                            cuts.push(u);
                        }
                    }
                }
                inside_runs(cuts, |u| rect.contains(self.at(u)))
            }
        }
    }
}

/// Liang-Barsky clipping; returns the parameter interval inside `rect`.
fn clip_segment(a: Vec2, b: Vec2, rect: &Rect) -> Option<(f64, f64)> {
    let d = b - a;
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    let edges = [
        (-d.x, a.x - rect.x),
        (d.x, rect.x + rect.w - a.x),
        (-d.y, a.y - rect.y),
        (d.y, rect.y + rect.h - a.y),
    ];
    for (p, q) in edges {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
        }
    }
    (t0 < t1).then_some((t0, t1))
}

/// Angles in [0, 2pi) where the circle crosses the lines bounding `rect`.
fn circle_crossings(c: Vec2, r: f64, rect: &Rect) -> Vec<f64> {
    let mut out = Vec::new();
    for x in [rect.x, rect.x + rect.w] {
        let dx = x - c.x;
        if dx.abs() <= r {
            let dy = (r * r - dx * dx).sqrt();
            out.push(dy.atan2(dx).rem_euclid(TAU));
            out.push((-dy).atan2(dx).rem_euclid(TAU));
        }
    }
    for y in [rect.y, rect.y + rect.h] {
        let dy = y - c.y;
        if dy.abs() <= r {
            let dx = (r * r - dy * dy).sqrt();
            out.push(dy.atan2(dx).rem_euclid(TAU));
            out.push(dy.atan2(-dx).rem_euclid(TAU));
        }
    }
    out
}

/// Splits [0, 1] at `cuts` and keeps the pieces whose midpoint is inside.
fn inside_runs(mut cuts: Vec<f64>, inside: impl Fn(f64) -> bool) -> Vec<(f64, f64)> {
    cuts.retain(|u| (0.0..=1.0).contains(u));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.windows(2)
        .filter(|w| w[1] > w[0] && inside((w[0] + w[1]) / 2.0))
        .map(|w| (w[0], w[1]))
        .collect()
}

fn union_measure(mut iv: Vec<(f64, f64)>) -> f64 {
    iv.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut total = 0.0;
    let mut cur: Option<(f64, f64)> = None;
    for (a, b) in iv {
        cur = match cur {
            Some((s, e)) if a <= e => Some((s, e.max(b))),
            Some((s, e)) => {
                total += e - s;
                Some((a, b))
            }
            None => Some((a, b)),
        };
    }
    if let Some((s, e)) = cur {
        total += e - s;
    }
    total
}

/// Length of a single stroke in the scene's units.
pub fn stroke_length(scene: &Scene, stroke: &Stroke) -> f64 {
    geom(scene, stroke).map_or(0.0, |g| g.length())
}

/// Stroke length covered by the union of `patches`, summed over strokes.
pub fn masked_length(scene: &Scene, patches: &[Rect]) -> f64 {
    scene
        .strokes
        .iter()
        .filter_map(|s| geom(scene, s))
        .map(|g| {
            let iv = patches.iter().flat_map(|r| g.intervals_in(r)).collect();
            union_measure(iv) * g.length()
        })
        .sum()
}

/// Approximate text boxes of labels and annotations.
fn text_boxes(laid: &LaidOutScene, font_size: f64) -> Vec<Rect> {
    let labels = laid
        .label_anchors
        .iter()
        .map(|(name, c)| (*c, name.chars().count()));
    let anns = laid
        .scene
        .annotations
        .iter()
        .zip(&laid.annotation_anchors)
        .map(|(a, c)| (*c, a.text().chars().count()));
    labels
        .chain(anns)
        .map(|(c, chars)| Rect::centered(c, font_size * (0.7 * chars as f64 + 0.6), font_size * 1.4))
        .collect()
}

/// Draws mask patches over a laid-out scene: each patch is centered near a
/// random stroke point, touches a stroke, keeps clear of text, and the union
/// of patches covers at most `max_fraction` of total stroke length.
pub fn plan_mask<R: Rng + ?Sized>(
    laid: &LaidOutScene,
    rng: &mut R,
    params: &MaskParams,
    font_size: f64,
) -> MaskPlan {
    let scene = &laid.scene;
    let geoms: Vec<Geom> = scene.strokes.iter().filter_map(|s| geom(scene, s)).collect();
    let total: f64 = geoms.iter().map(Geom::length).sum();
    if total <= 0.0 || params.max_patches == 0 || !rng.gen_bool(params.probability) {
        return MaskPlan::default();
    }
    let count = rng.gen_range(1..=params.max_patches);
    let texts = text_boxes(laid, font_size);
    let budget = params.max_fraction * total;
    let mut patches: Vec<Rect> = Vec::with_capacity(count);
    for _ in 0..count {
        for _ in 0..params.attempts {
            let mut t = rng.gen_range(0.0..total);
            let mut at = geoms[0].at(0.0);
            for g in &geoms {
                let len = g.length();
                if t <= len {
                    at = g.at(if len > 0.0 { t / len } else { 0.0 });
                    break;
                }
                t -= len;
            }
            let side = rng.gen_range(params.min_side..=params.max_side);
            let jitter = Vec2::new(
                rng.gen_range(-side / 4.0..=side / 4.0),
                rng.gen_range(-side / 4.0..=side / 4.0),
            );
            let rect = Rect::centered(at + jitter, side, side);
            if texts.iter().any(|b| b.intersects(&rect)) {
                continue;
            }
            if masked_length(scene, std::slice::from_ref(&rect)) <= 0.0 {
                continue;
            }
            patches.push(rect);
            if masked_length(scene, &patches) > budget {
                patches.pop();
                continue;
            }
            break;
        }
    }
    MaskPlan { patches }
}
