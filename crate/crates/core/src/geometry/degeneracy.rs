use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{arc_sweep, Scene, StrokeKind, Vec2};

/// Strokes meeting at a shared endpoint closer than this (radians) lie on top
/// of each other and read as one line; they are not a sliver angle.
const OVERLAP_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DegeneracyThresholds {
    /// Scene units.
    pub min_pair_dist: f64,
    /// Degrees.
    pub min_angle_deg: f64,
    /// Scene units.
    pub max_extent: f64,
}

impl Default for DegeneracyThresholds {
    fn default() -> Self {
        Self {
            min_pair_dist: 0.15,
            min_angle_deg: 8.0,
            max_extent: 20.0,
        }
    }
}

impl DegeneracyThresholds {
    pub fn validate(&self) -> Result<(), String> {
        if self.min_pair_dist > 0.0 && self.min_angle_deg > 0.0 && self.max_extent > 0.0 {
            Ok(())
        } else {
            Err("degeneracy thresholds must be positive".into())
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Degeneracy {
    NonFinite { point: String },
    PairDistance { a: String, b: String, dist: f64 },
    StrokeAngle { at: String, degrees: f64 },
    Extent { extent: f64 },
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degeneracy::NonFinite { point } => write!(f, "point {point} is not finite"),
            Degeneracy::PairDistance { a, b, dist } => {
                write!(f, "pair distance {dist} < δ ({a}, {b})")
            }
            Degeneracy::StrokeAngle { at, degrees } => {
                write!(f, "stroke angle {degrees:.3}° < α at {at}")
            }
            Degeneracy::Extent { extent } => write!(f, "extent {extent} > max_extent"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DegeneracyReport {
    pub violations: Vec<Degeneracy>,
}

impl DegeneracyReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Directions of strokes leaving each endpoint.
fn endpoint_directions(scene: &Scene) -> HashMap<&str, Vec<(usize, Vec2)>> {
    let mut out: HashMap<&str, Vec<(usize, Vec2)>> = HashMap::new();
    for (i, s) in scene.strokes.iter().enumerate() {
        match &s.kind {
            StrokeKind::Segment { a, b } => {
                if let (Some(pa), Some(pb)) = (scene.point(a), scene.point(b)) {
                    out.entry(a.as_str()).or_default().push((i, pb - pa));
                    out.entry(b.as_str()).or_default().push((i, pa - pb));
                }
            }
            StrokeKind::Arc { center, from, to } => {
                if let (Some(c), Some(f), Some(t)) =
                    (scene.point(center), scene.point(from), scene.point(to))
                {
                    let sign = arc_sweep(c, f, t).signum();
                    out.entry(from.as_str())
                        .or_default()
                        .push((i, (f - c).perp() * sign));
                    out.entry(to.as_str())
                        .or_default()
                        .push((i, (t - c).perp() * -sign));
                }
            }
            StrokeKind::Circle { .. } => {}
        }
    }
    out
}

/// Lists coincident points, sliver angles between strokes sharing an
/// endpoint, and oversize figures.
pub fn check_degeneracy(scene: &Scene, th: &DegeneracyThresholds) -> DegeneracyReport {
    let mut violations = Vec::new();
    for (name, p) in &scene.points {
        if !p.is_finite() {
            violations.push(Degeneracy::NonFinite { point: name.clone() });
        }
    }
    if !violations.is_empty() {
        return DegeneracyReport { violations };
    }

    let pts: Vec<(&String, &Vec2)> = scene.points.iter().collect();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = pts[i].1.dist(*pts[j].1);
            if d < th.min_pair_dist {
                violations.push(Degeneracy::PairDistance {
                    a: pts[i].0.clone(),
                    b: pts[j].0.clone(),
                    dist: d,
                });
            }
        }
    }

    let min_angle = th.min_angle_deg.to_radians();
    let dirs = endpoint_directions(scene);
    for (name, _) in &scene.points {
        let Some(list) = dirs.get(name.as_str()) else {
            continue;
        };
        for i in 0..list.len() {
            for j in i + 1..list.len() {
                if list[i].0 == list[j].0 {
                    continue;
                }
                let (u, v) = (list[i].1, list[j].1);
                let ang = u.cross(v).abs().atan2(u.dot(v));
                if ang < min_angle && ang > OVERLAP_TOL {
                    violations.push(Degeneracy::StrokeAngle {
                        at: name.clone(),
                        degrees: ang.to_degrees(),
                    });
                }
            }
        }
    }

    let extent = scene.extent();
    if !(extent <= th.max_extent) {
        violations.push(Degeneracy::Extent { extent });
    }
    DegeneracyReport { violations }
}
