use std::f64::consts::TAU;

use rand::{Rng, RngCore};

use super::{
    bind_constraints, check_degeneracy, circumcenter, evaluate_constraint, midpoint,
    perpendicular_foot, reflect_across_line, rotate_about, Annotation, DegeneracyThresholds,
    Scene, Stroke, StrokeKind, Vec2,
};
use crate::catalog::{Catalog, ClauseDef, ParamKind, SketchDirective};
use crate::error::ConstructionError;
use crate::instance::ClauseInstance;

/// Largest residual a constructed scene may carry, in scene units.
pub const EPS_CONSTRUCT: f64 = 1e-9;

/// Radius of the disc around the current centroid in which later independent
/// clauses are placed.
const PLACEMENT_RADIUS: f64 = 2.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstructionLimits {
    /// Attempts per clause before the whole group is rebuilt.
    pub per_clause_retries: usize,
    pub group_retries: usize,
}

impl Default for ConstructionLimits {
    fn default() -> Self {
        Self {
            per_clause_retries: 64,
            group_retries: 8,
        }
    }
}

/// Prerequisite coordinates and numeric values of one instance, in parameter
/// order.
struct Inputs {
    refs: Vec<Vec2>,
    nums: Vec<f64>,
}

/// Returns the clause's new points in parameter order, or `None` when the
/// prerequisites admit no construction.
type Constructor = fn(&Inputs, &mut dyn RngCore) -> Option<Vec<Vec2>>;

fn sign(rng: &mut dyn RngCore) -> f64 {
    if rng.gen_bool(0.5) {
        1.0
    } else {
        -1.0
    }
}

fn segment(_: &Inputs, _: &mut dyn RngCore) -> Option<Vec<Vec2>> {
    Some(vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0)])
}

fn triangle(_: &Inputs, rng: &mut dyn RngCore) -> Option<Vec<Vec2>> {
    let c = Vec2::new(rng.gen_range(-0.3..1.3), rng.gen_range(0.4..1.2));
    Some(vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), c])
}

fn circle(_: &Inputs, _: &mut dyn RngCore) -> Option<Vec<Vec2>> {
    Some(vec![Vec2::new(0.0, 0.0), Vec2::new(0.6, 0.0)])
}

fn square(_: &Inputs, _: &mut dyn RngCore) -> Option<Vec<Vec2>> {
    Some(vec![
        Vec2::new(0.0, 0.0),
        Vec2::new(1.0, 0.0),
        Vec2::new(1.0, 1.0),
        Vec2::new(0.0, 1.0),
    ])
}

fn midpoint_of(i: &Inputs, _: &mut dyn RngCore) -> Option<Vec<Vec2>> {
    Some(vec![midpoint(i.refs[0], i.refs[1])])
}

fn segment_length(i: &Inputs, _: &mut dyn RngCore) -> Option<Vec<Vec2>> {
    Some(vec![Vec2::new(0.0, 0.0), Vec2::new(i.nums[0], 0.0)])
}

/// Vertex at the origin, first ray along +x; `A`, `B`, `C` order.
fn angle_value(i: &Inputs, rng: &mut dyn RngCore) -> Option<Vec<Vec2>> {
    let t = i.nums[0].to_radians();
    let (r1, r2) = (rng.gen_range(0.7..1.3), rng.gen_range(0.7..1.3));
    Some(vec![
        Vec2::new(r1, 0.0),
        Vec2::ZERO,
        Vec2::from_angle(t) * r2,
    ])
}

fn circle_radius(i: &Inputs, _: &mut dyn RngCore) -> Option<Vec<Vec2>> {
    Some(vec![Vec2::ZERO, Vec2::new(i.nums[0], 0.0)])
}

fn isosceles_triangle(_: &Inputs, rng: &mut dyn RngCore) -> Option<Vec<Vec2>> {
    let h = rng.gen_range(0.3..1.5);
    Some(vec![
        Vec2::new(0.0, h),
        Vec2::new(-0.5, 0.0),
        Vec2::new(0.5, 0.0),
    ])
}

fn trapezoid(_: &Inputs, rng: &mut dyn RngCore) -> Option<Vec<Vec2>> {
    let a = rng.gen_range(-0.3..0.5);
    let w = rng.gen_range(0.3..0.8);
    let h = rng.gen_range(0.4..1.0);
    Some(vec![
        Vec2::new(0.0, 0.0),
        Vec2::new(1.0, 0.0),
        Vec2::new(a + w, h),
        Vec2::new(a, h),
    ])
}

fn parallelogram(_: &Inputs, rng: &mut dyn RngCore) -> Option<Vec<Vec2>> {
    let d = Vec2::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.4..1.2));
    let b = Vec2::new(1.0, 0.0);
    Some(vec![Vec2::ZERO, b, b + d, d])
}

/// `P` on the circle about `O` through `A`.
fn on_circle(i: &Inputs, rng: &mut dyn RngCore) -> Option<Vec<Vec2>> {
    let (o, a) = (i.refs[0], i.refs[1]);
    Some(vec![rotate_about(a, o, rng.gen_range(0.0..TAU))])
}

/// Foot `H` of the perpendicular from `C` to line `AB`.
fn foot(i: &Inputs, _: &mut dyn RngCore) -> Option<Vec<Vec2>> {
    let (c, a, b) = (i.refs[0], i.refs[1], i.refs[2]);
    (a.dist(b) > 0.0).then(|| vec![perpendicular_foot(c, a, b)])
}

/// `D` on the line through `C` parallel to `AB`.
fn parallel_line(i: &Inputs, rng: &mut dyn RngCore) -> Option<Vec<Vec2>> {
    let (c, a, b) = (i.refs[0], i.refs[1], i.refs[2]);
    let lambda = rng.gen_range(0.6..1.2) * sign(rng);
    Some(vec![c + (b - a) * lambda])
}

/// New ray endpoint `C` so that angle `ABC` equals the bound value.
fn angle_ray(i: &Inputs, rng: &mut dyn RngCore) -> Option<Vec<Vec2>> {
    let (a, b) = (i.refs[0], i.refs[1]);
    let t = i.nums[0].to_radians() * sign(rng);
    let k = rng.gen_range(0.6..1.2);
    Some(vec![b + (a - b).rotate(t) * k])
}

fn length_annot(i: &Inputs, rng: &mut dyn RngCore) -> Option<Vec<Vec2>> {
    let a = i.refs[0];
    Some(vec![a + Vec2::from_angle(rng.gen_range(0.0..TAU)) * i.nums[0]])
}

fn reflect_point(i: &Inputs, _: &mut dyn RngCore) -> Option<Vec<Vec2>> {
    let (p, a, b) = (i.refs[0], i.refs[1], i.refs[2]);
    (a.dist(b) > 0.0).then(|| vec![reflect_across_line(p, a, b)])
}

fn sas_triangle(i: &Inputs, _: &mut dyn RngCore) -> Option<Vec<Vec2>> {
    let (v, w, t) = (i.nums[0], i.nums[1], i.nums[2].to_radians());
    Some(vec![Vec2::new(v, 0.0), Vec2::ZERO, Vec2::from_angle(t) * w])
}

fn regular_pentagon(_: &Inputs, _: &mut dyn RngCore) -> Option<Vec<Vec2>> {
    Some(
        (0..5)
            .map(|k| Vec2::from_angle(TAU / 4.0 + TAU * k as f64 / 5.0) * 0.7)
            .collect(),
    )
}

/// `Q` is `P` turned counter-clockwise about `O`.
fn rotate_point(i: &Inputs, _: &mut dyn RngCore) -> Option<Vec<Vec2>> {
    let (p, o) = (i.refs[0], i.refs[1]);
    Some(vec![rotate_about(p, o, i.nums[0].to_radians())])
}

fn circumcircle(i: &Inputs, _: &mut dyn RngCore) -> Option<Vec<Vec2>> {
    circumcenter(i.refs[0], i.refs[1], i.refs[2]).map(|o| vec![o])
}

/// Square `ABCD` on either side of `AB`; returns `C`, `D`.
fn square_on_segment(i: &Inputs, rng: &mut dyn RngCore) -> Option<Vec<Vec2>> {
    let (a, b) = (i.refs[0], i.refs[1]);
    let side = (b - a).perp() * sign(rng);
    Some(vec![b + side, a + side])
}

/// Tangent segment `TU` touching the circle about `O` at `A`, centered on `A`.
fn tangent_at_point(i: &Inputs, rng: &mut dyn RngCore) -> Option<Vec<Vec2>> {
    let (o, a) = (i.refs[0], i.refs[1]);
    let r = a.dist(o);
    let dir = (a - o).perp().normalized()?;
    let half = dir * (r * rng.gen_range(0.6..1.2));
    Some(vec![a + half, a - half])
}

fn constructor(id: &str) -> Option<Constructor> {
    Some(match id {
        "segment" => segment,
        "triangle" => triangle,
        "circle" => circle,
        "square" => square,
        "midpoint" => midpoint_of,
        "segment_length" => segment_length,
        "angle_value" => angle_value,
        "circle_radius" => circle_radius,
        "isosceles_triangle" => isosceles_triangle,
        "trapezoid" => trapezoid,
        "parallelogram" => parallelogram,
        "on_circle" => on_circle,
        "perpendicular_foot" => foot,
        "parallel_line" => parallel_line,
        "angle_annot" | "right_angle_mark" => angle_ray,
        "length_annot" => length_annot,
        "reflect_point" => reflect_point,
        "sas_triangle" => sas_triangle,
        "regular_pentagon" => regular_pentagon,
        "rotate_point" => rotate_point,
        "circumcircle" => circumcircle,
        "square_on_segment" => square_on_segment,
        "tangent_at_point" => tangent_at_point,
        _ => return None,
    })
}

/// Whether a constructor is registered for the clause id.
pub fn has_constructor(id: &str) -> bool {
    constructor(id).is_some()
}

/// Centers a canonical configuration on its centroid, then rotates, scales
/// and places it. Clauses carrying a length value keep their scale.
fn place_independent(
    def: &ClauseDef,
    pts: Vec<Vec2>,
    scene: &Scene,
    rng: &mut dyn RngCore,
) -> Vec<Vec2> {
    let n = pts.len() as f64;
    let centroid = pts.iter().fold(Vec2::ZERO, |acc, p| acc + *p) / n;
    let theta = rng.gen_range(0.0..TAU);
    let scale = if def.has_length_param() {
        1.0
    } else {
        rng.gen_range(1.0..3.0) * rng.gen_range(0.5..1.5)
    };
    let offset = if scene.points.is_empty() {
        Vec2::ZERO
    } else {
        let c = scene.points.values().fold(Vec2::ZERO, |acc, p| acc + *p)
            / scene.points.len() as f64;
        let r = PLACEMENT_RADIUS * rng.gen_range(0.0f64..1.0).sqrt();
        c + Vec2::from_angle(rng.gen_range(0.0..TAU)) * r
    };
    pts.into_iter()
        .map(|p| (p - centroid).rotate(theta) * scale + offset)
        .collect()
}

fn apply_sketch(scene: &mut Scene, def: &ClauseDef, inst: &ClauseInstance) {
    let pt = |name: &String| inst.point(name).unwrap_or_default().to_string();
    for d in &def.sketch {
        match d {
            SketchDirective::Segment { a, b, dash } => scene.add_stroke(Stroke {
                kind: StrokeKind::Segment { a: pt(a), b: pt(b) },
                dash: *dash,
            }),
            SketchDirective::Circle { center, through, dash } => {
                let (c, t) = (pt(center), pt(through));
                let radius = match (scene.point(&c), scene.point(&t)) {
                    (Some(pc), Some(pt)) => pc.dist(pt),
                    _ => continue,
                };
                scene.add_stroke(Stroke {
                    kind: StrokeKind::Circle { center: c, radius },
                    dash: *dash,
                });
            }
            SketchDirective::Arc { center, from, to, dash } => scene.add_stroke(Stroke {
                kind: StrokeKind::Arc {
                    center: pt(center),
                    from: pt(from),
                    to: pt(to),
                },
                dash: *dash,
            }),
            SketchDirective::Mark { point } => scene.add_label(&pt(point)),
            SketchDirective::AngleMark { a, b, c, value } => {
                if let Some(degrees) = inst.number(value) {
                    scene.add_annotation(Annotation::Angle {
                        a: pt(a),
                        b: pt(b),
                        c: pt(c),
                        degrees,
                    });
                }
            }
            SketchDirective::LengthLabel { a, b, value } => {
                if let Some(v) = inst.number(value) {
                    scene.add_annotation(Annotation::Length {
                        a: pt(a),
                        b: pt(b),
                        value: v,
                    });
                }
            }
        }
    }
}

/// Rebuilds the strokes, labels and annotations of a group over known
/// coordinates. Instances naming unknown clauses are skipped.
pub fn sketch_scene(
    group: &[ClauseInstance],
    catalog: &Catalog,
    points: &indexmap::IndexMap<String, Vec2>,
) -> Scene {
    let mut scene = Scene {
        points: points.clone(),
        ..Scene::default()
    };
    for inst in group {
        if let Some(def) = catalog.get(&inst.clause_id) {
            apply_sketch(&mut scene, def, inst);
        }
    }
    scene
}

/// One attempt at adding `inst` to `scene`; `None` on rejection.
fn try_clause(
    scene: &Scene,
    def: &ClauseDef,
    inst: &ClauseInstance,
    ctor: Constructor,
    th: &DegeneracyThresholds,
    rng: &mut dyn RngCore,
) -> Option<Scene> {
    let mut inputs = Inputs {
        refs: Vec::new(),
        nums: Vec::new(),
    };
    for p in &def.params {
        match p.kind {
            ParamKind::RefPoint => inputs.refs.push(scene.point(inst.point(&p.name)?)?),
            ParamKind::Length(_) | ParamKind::Angle(_) => inputs.nums.push(inst.number(&p.name)?),
            ParamKind::NewPoint => {}
        }
    }
    let mut new_pts = ctor(&inputs, rng)?;
    if def.is_independent() {
        new_pts = place_independent(def, new_pts, scene, rng);
    }
    let names: Vec<&str> = inst.points_of_kind(def, ParamKind::NewPoint).collect();
    if names.len() != new_pts.len() {
        return None;
    }
    let mut next = scene.clone();
    for (n, p) in names.iter().zip(&new_pts) {
        if !p.is_finite() {
            return None;
        }
        next.points.insert(n.to_string(), *p);
    }
    for c in bind_constraints(def, inst) {
        match evaluate_constraint(&c, &next.points) {
            Ok(r) if r <= EPS_CONSTRUCT => {}
            _ => return None,
        }
    }
    apply_sketch(&mut next, def, inst);
    check_degeneracy(&next, th).is_empty().then_some(next)
}

/// Builds coordinates, strokes, labels and annotations for an ordered group
/// of instances.
pub fn construct_scene<R: Rng + ?Sized>(
    group: &[ClauseInstance],
    catalog: &Catalog,
    thresholds: &DegeneracyThresholds,
    rng: &mut R,
) -> Result<Scene, ConstructionError> {
    construct_scene_with(group, catalog, thresholds, &ConstructionLimits::default(), rng)
}

/// [`construct_scene`] with explicit retry budgets.
pub fn construct_scene_with<R: Rng + ?Sized>(
    group: &[ClauseInstance],
    catalog: &Catalog,
    thresholds: &DegeneracyThresholds,
    limits: &ConstructionLimits,
    rng: &mut R,
) -> Result<Scene, ConstructionError> {
    let mut plan = Vec::with_capacity(group.len());
    for inst in group {
        let def = catalog
            .get(&inst.clause_id)
            .ok_or_else(|| ConstructionError::UnknownClause(inst.clause_id.clone()))?;
        let ctor = constructor(&def.id)
            .ok_or_else(|| ConstructionError::UnknownConstructor(def.id.clone()))?;
        plan.push((def, inst, ctor));
    }
    let mut rng = RngAdapter(rng);
    let mut failed_at = group.first().map(|i| i.clause_id.clone()).unwrap_or_default();
    'group: for _ in 0..limits.group_retries.max(1) {
        let mut scene = Scene::default();
        for (def, inst, ctor) in &plan {
            let mut built = None;
            for _ in 0..limits.per_clause_retries.max(1) {
                built = try_clause(&scene, def, inst, *ctor, thresholds, &mut rng);
                if built.is_some() {
                    break;
                }
            }
            match built {
                Some(s) => scene = s,
                None => {
                    failed_at = inst.clause_id.clone();
                    continue 'group;
                }
            }
        }
        return Ok(scene);
    }
    Err(ConstructionError::Exhausted {
        clause: failed_at,
        group_retries: limits.group_retries,
    })
}

/// Lets a generic, possibly unsized rng be used where `&mut dyn RngCore` is
/// expected.
struct RngAdapter<'a, R: ?Sized>(&'a mut R);

impl<R: RngCore + ?Sized> RngCore for RngAdapter<'_, R> {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.0.fill_bytes(dest)
    }
    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.0.try_fill_bytes(dest)
    }
}
