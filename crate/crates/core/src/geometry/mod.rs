//! Coordinates, scenes, constraint residuals and per-clause constructions.

mod construct;
mod constraint;
mod degeneracy;

use std::ops::{Add, Div, Mul, Neg, Sub};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

pub use construct::{
    construct_scene, construct_scene_with, has_constructor, sketch_scene, ConstructionLimits,
    EPS_CONSTRUCT,
};
pub use constraint::{bind_constraints, evaluate_constraint, max_residual, BoundConstraint};
pub use degeneracy::{check_degeneracy, Degeneracy, DegeneracyReport, DegeneracyThresholds};

use crate::catalog::Dash;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, s)
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    /// Counter-clockwise perpendicular.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Option<Vec2> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self / n)
    }

    pub fn rotate(self, theta: f64) -> Vec2 {
        let (s, c) = theta.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    fn div(self, k: f64) -> Vec2 {
        Vec2::new(self.x / k, self.y / k)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Unsigned angle at `b` between rays `ba` and `bc`, in radians.
pub fn angle_at(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    let u = a - b;
    let v = c - b;
    u.cross(v).abs().atan2(u.dot(v))
}

pub fn midpoint(a: Vec2, b: Vec2) -> Vec2 {
    (a + b) * 0.5
}

/// Orthogonal projection of `p` onto line `ab`.
pub fn perpendicular_foot(p: Vec2, a: Vec2, b: Vec2) -> Vec2 {
    let d = b - a;
    a + d * ((p - a).dot(d) / d.dot(d))
}

/// Mirror image of `p` across line `ab`.
pub fn reflect_across_line(p: Vec2, a: Vec2, b: Vec2) -> Vec2 {
    perpendicular_foot(p, a, b) * 2.0 - p
}

/// Rotation of `p` about `center` by `theta` radians, counter-clockwise.
pub fn rotate_about(p: Vec2, center: Vec2, theta: f64) -> Vec2 {
    center + (p - center).rotate(theta)
}

/// Center of the circle through three points; `None` when collinear.
pub fn circumcenter(a: Vec2, b: Vec2, c: Vec2) -> Option<Vec2> {
    let ab = b - a;
    let ac = c - a;
    let d = 2.0 * ab.cross(ac);
    if d.abs() < 1e-12 {
        return None;
    }
    let (b2, c2) = (ab.dot(ab), ac.dot(ac));
    let off = Vec2::new(ac.y * b2 - ab.y * c2, ab.x * c2 - ac.x * b2) / d;
    Some(a + off)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StrokeKind {
    Segment { a: String, b: String },
    Circle { center: String, radius: f64 },
    /// Minor arc about `center` from `from` to `to`.
    Arc { center: String, from: String, to: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrokeShape {
    Line,
    Curve,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stroke {
    pub kind: StrokeKind,
    pub dash: Dash,
}

impl Stroke {
    pub fn shape(&self) -> StrokeShape {
        match self.kind {
            StrokeKind::Segment { .. } => StrokeShape::Line,
            StrokeKind::Circle { .. } | StrokeKind::Arc { .. } => StrokeShape::Curve,
        }
    }

    fn same_geometry(&self, other: &Stroke) -> bool {
        match (&self.kind, &other.kind) {
            (StrokeKind::Segment { a, b }, StrokeKind::Segment { a: c, b: d }) => {
                (a == c && b == d) || (a == d && b == c)
            }
            (
                StrokeKind::Circle { center, radius },
                StrokeKind::Circle {
                    center: c2,
                    radius: r2,
                },
            ) => center == c2 && (radius - r2).abs() <= 1e-9 * radius.abs().max(1.0),
            (a @ StrokeKind::Arc { .. }, b @ StrokeKind::Arc { .. }) => a == b,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Annotation {
    /// Angle `abc` (vertex `b`) labelled with `degrees`.
    Angle {
        a: String,
        b: String,
        c: String,
        degrees: f64,
    },
    /// Segment `ab` labelled with `value` scene units.
    Length { a: String, b: String, value: f64 },
}

impl Annotation {
    pub fn text(&self) -> String {
        match self {
            Annotation::Angle { degrees, .. } => crate::util::format_degrees(*degrees),
            Annotation::Length { value, .. } => crate::util::format_number(*value),
        }
    }
}

/// Named points with the strokes, labels and annotations drawn over them.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Scene {
    pub points: IndexMap<String, Vec2>,
    pub strokes: Vec<Stroke>,
    /// Points whose names are drawn.
    pub labels: Vec<String>,
    pub annotations: Vec<Annotation>,
}

impl Scene {
    pub fn point(&self, name: &str) -> Option<Vec2> {
        self.points.get(name).copied()
    }

    /// Adds a stroke unless an identical one is already present.
    pub fn add_stroke(&mut self, stroke: Stroke) {
        if !self.strokes.iter().any(|s| s.same_geometry(&stroke)) {
            self.strokes.push(stroke);
        }
    }

    pub fn add_label(&mut self, point: &str) {
        if !self.labels.iter().any(|l| l == point) {
            self.labels.push(point.to_string());
        }
    }

    pub fn add_annotation(&mut self, ann: Annotation) {
        if !self.annotations.contains(&ann) {
            self.annotations.push(ann);
        }
    }

    /// Axis-aligned bounds over points and full circles: `(min, max)`.
    pub fn bounds(&self) -> Option<(Vec2, Vec2)> {
        let mut it = self.points.values();
        let first = *it.next()?;
        let (mut lo, mut hi) = (first, first);
        let mut grow = |p: Vec2| {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        };
        for p in it {
            grow(*p);
        }
        for s in &self.strokes {
            match &s.kind {
                StrokeKind::Circle { center, radius } => {
                    if let Some(c) = self.point(center) {
                        grow(c - Vec2::new(*radius, *radius));
                        grow(c + Vec2::new(*radius, *radius));
                    }
                }
                StrokeKind::Arc { center, from, to } => {
                    if let (Some(c), Some(f), Some(t)) =
                        (self.point(center), self.point(from), self.point(to))
                    {
                        for p in arc_extreme_points(c, f, t) {
                            grow(p);
                        }
                    }
                }
                StrokeKind::Segment { .. } => {}
            }
        }
        Some((lo, hi))
    }

    /// Largest side of the bounding box.
    pub fn extent(&self) -> f64 {
        self.bounds()
            .map(|(lo, hi)| (hi.x - lo.x).max(hi.y - lo.y))
            .unwrap_or(0.0)
    }
}

/// Signed sweep of the minor arc from `f` to `t` about `c`, in (-pi, pi].
pub fn arc_sweep(c: Vec2, f: Vec2, t: Vec2) -> f64 {
    let u = f - c;
    let v = t - c;
    u.cross(v).atan2(u.dot(v))
}

/// Endpoints plus any axis-extreme points the minor arc passes through.
fn arc_extreme_points(c: Vec2, f: Vec2, t: Vec2) -> Vec<Vec2> {
    let r = f.dist(c);
    let start = (f - c).angle();
    let sweep = arc_sweep(c, f, t);
    let mut pts = vec![f, t];
    for k in 0..4 {
        let a = k as f64 * std::f64::consts::FRAC_PI_2;
        let mut d = (a - start).rem_euclid(std::f64::consts::TAU);
        if sweep < 0.0 {
            d -= std::f64::consts::TAU;
        }
        if d.abs() <= sweep.abs() {
            pts.push(c + Vec2::from_angle(a) * r);
        }
    }
    pts
}

/// Rotation, uniform scale and translation: `p -> s * R(theta) * p + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityTransform {
    pub rotation: f64,
    pub scale: f64,
    pub translation: Vec2,
}

impl Default for SimilarityTransform {
    fn default() -> Self {
        Self {
            rotation: 0.0,
            scale: 1.0,
            translation: Vec2::ZERO,
        }
    }
}

impl SimilarityTransform {
    pub fn apply(&self, p: Vec2) -> Vec2 {
        p.rotate(self.rotation) * self.scale + self.translation
    }
}

/// Applies `t` to every point and scales circle radii.
pub fn apply_similarity(scene: &Scene, t: &SimilarityTransform) -> Scene {
    assert!(t.scale > 0.0, "similarity scale must be positive");
    let mut out = scene.clone();
    for p in out.points.values_mut() {
        *p = t.apply(*p);
    }
    for s in &mut out.strokes {
        if let StrokeKind::Circle { radius, .. } = &mut s.kind {
            *radius *= t.scale;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn scene_with(points: &[(&str, f64, f64)]) -> Scene {
        let mut s = Scene::default();
        for (n, x, y) in points {
            s.points.insert(n.to_string(), Vec2::new(*x, *y));
        }
        s
    }

    #[test]
    fn identity_transform_is_noop() {
        let mut s = scene_with(&[("A", 1.0, 2.0), ("O", -1.0, 0.5)]);
        s.strokes.push(Stroke {
            kind: StrokeKind::Circle {
                center: "O".into(),
                radius: 2.0,
            },
            dash: Dash::Solid,
        });
        assert_eq!(apply_similarity(&s, &SimilarityTransform::default()), s);
    }

    #[test]
    fn quarter_turn() {
        let s = scene_with(&[("A", 1.0, 0.0)]);
        let t = SimilarityTransform {
            rotation: FRAC_PI_2,
            ..Default::default()
        };
        let a = apply_similarity(&s, &t).point("A").unwrap();
        assert!((a.x - 0.0).abs() < 1e-15 && (a.y - 1.0).abs() < 1e-15);
    }

    #[test]
    fn radii_scale() {
        let mut s = scene_with(&[("O", 0.0, 0.0)]);
        s.strokes.push(Stroke {
            kind: StrokeKind::Circle {
                center: "O".into(),
                radius: 2.0,
            },
            dash: Dash::Solid,
        });
        let t = SimilarityTransform {
            scale: 1.5,
            ..Default::default()
        };
        match &apply_similarity(&s, &t).strokes[0].kind {
            StrokeKind::Circle { radius, .. } => assert_eq!(*radius, 3.0),
            _ => unreachable!(),
        }
    }

    #[test]
    fn strokes_dedupe() {
        let mut s = Scene::default();
        let seg = |a: &str, b: &str| Stroke {
            kind: StrokeKind::Segment {
                a: a.into(),
                b: b.into(),
            },
            dash: Dash::Solid,
        };
        s.add_stroke(seg("A", "B"));
        s.add_stroke(seg("B", "A"));
        s.add_stroke(seg("A", "C"));
        assert_eq!(s.strokes.len(), 2);
    }

    #[test]
    fn circle_bounds_included() {
        let mut s = scene_with(&[("O", 0.0, 0.0), ("A", 1.0, 0.0)]);
        s.strokes.push(Stroke {
            kind: StrokeKind::Circle {
                center: "O".into(),
                radius: 1.0,
            },
            dash: Dash::Solid,
        });
        assert_eq!(s.extent(), 2.0);
    }

    #[test]
    fn arc_bounds_pass_through_axis_points() {
        // Quarter arc from +x to +y passes no further axis points.
        let mut s = scene_with(&[("O", 0.0, 0.0), ("A", 1.0, 0.0), ("B", 0.0, 1.0)]);
        s.strokes.push(Stroke {
            kind: StrokeKind::Arc {
                center: "O".into(),
                from: "A".into(),
                to: "B".into(),
            },
            dash: Dash::Solid,
        });
        assert_eq!(s.extent(), 1.0);
        // Arc from 135 deg to 45 deg clockwise... minor arc passes through +y.
        let a = Vec2::from_angle(0.75 * std::f64::consts::PI);
        let b = Vec2::from_angle(0.25 * std::f64::consts::PI);
        let ext = arc_extreme_points(Vec2::ZERO, a, b);
        assert!(ext.iter().any(|p| (p.y - 1.0).abs() < 1e-12));
    }

    #[test]
    fn circumcenter_equidistant() {
        let (a, b, c) = (Vec2::new(0.0, 0.0), Vec2::new(4.0, 0.0), Vec2::new(1.0, 3.0));
        let o = circumcenter(a, b, c).unwrap();
        assert!((o.dist(a) - o.dist(b)).abs() < 1e-12);
        assert!((o.dist(a) - o.dist(c)).abs() < 1e-12);
        assert!(circumcenter(a, b, Vec2::new(8.0, 0.0)).is_none());
    }
}
