use indexmap::IndexMap;

use super::{angle_at, Vec2};
use crate::catalog::{Catalog, ClauseDef, ConstraintForm, Primitive};
use crate::error::ResidualError;
use crate::instance::ClauseInstance;

/// A constraint with point names and numeric values substituted.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundConstraint {
    pub primitive: Primitive,
    pub points: Vec<String>,
    /// Length in scene units or angle in degrees.
    pub scalar: Option<f64>,
}

impl BoundConstraint {
    pub fn bind(form: &ConstraintForm, inst: &ClauseInstance) -> Option<Self> {
        let points = form
            .point_args()
            .iter()
            .map(|p| inst.point(p).map(str::to_string))
            .collect::<Option<Vec<_>>>()?;
        let scalar = match form.scalar_arg() {
            Some(s) => Some(inst.number(s)?),
            None => None,
        };
        Some(Self {
            primitive: form.primitive,
            points,
            scalar,
        })
    }
}

/// Binds every constraint of `def` to the instance's arguments.
pub fn bind_constraints(def: &ClauseDef, inst: &ClauseInstance) -> Vec<BoundConstraint> {
    def.constraints
        .iter()
        .filter_map(|c| BoundConstraint::bind(c, inst))
        .collect()
}

fn unit(v: Vec2, what: &'static str) -> Result<Vec2, ResidualError> {
    v.normalized().ok_or(ResidualError::ZeroLength(what))
}

/// Non-negative residual; zero exactly when the constraint holds.
pub fn evaluate_constraint(
    c: &BoundConstraint,
    points: &IndexMap<String, Vec2>,
) -> Result<f64, ResidualError> {
    let p = c
        .points
        .iter()
        .map(|n| {
            points
                .get(n)
                .copied()
                .ok_or_else(|| ResidualError::MissingPoint(n.clone()))
        })
        .collect::<Result<Vec<Vec2>, _>>()?;
    let scalar = c.scalar.unwrap_or(0.0);
    let r = match c.primitive {
        Primitive::Collinear => {
            let u = p[1] - p[0];
            let v = p[2] - p[0];
            let (nu, nv) = (u.norm(), v.norm());
            if nu == 0.0 || nv == 0.0 {
                return Err(ResidualError::ZeroLength("collinear"));
            }
            u.cross(v).abs() / (nu * nv)
        }
        Primitive::Midpoint => p[0].dist((p[1] + p[2]) * 0.5),
        Primitive::DistEq => (p[0].dist(p[1]) - p[2].dist(p[3])).abs(),
        Primitive::DistConst => (p[0].dist(p[1]) - scalar).abs(),
        Primitive::AngleConst => {
            unit(p[0] - p[1], "angle_const")?;
            unit(p[2] - p[1], "angle_const")?;
            (angle_at(p[0], p[1], p[2]) - scalar.to_radians()).abs()
        }
        Primitive::Parallel => {
            let u = unit(p[1] - p[0], "parallel")?;
            let v = unit(p[3] - p[2], "parallel")?;
            u.cross(v).abs()
        }
        Primitive::Perpendicular => {
            let u = unit(p[1] - p[0], "perpendicular")?;
            let v = unit(p[3] - p[2], "perpendicular")?;
            u.dot(v).abs()
        }
        Primitive::OnCircle => (p[1].dist(p[0]) - p[1].dist(p[2])).abs(),
        Primitive::ConvexCycle => {
            let n = p.len();
            let mut turns = Vec::with_capacity(n);
            for i in 0..n {
                let e1 = unit(p[(i + 1) % n] - p[i], "convex")?;
                let e2 = unit(p[(i + 2) % n] - p[(i + 1) % n], "convex")?;
                turns.push(e1.cross(e2));
            }
            let orientation = if turns.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
            let worst = turns
                .iter()
                .map(|t| orientation * t)
                .fold(f64::INFINITY, f64::min);
            (-worst).max(0.0)
        }
    };
    Ok(r)
}

/// Largest residual over every constraint of every instance.
pub fn max_residual(
    instances: &[ClauseInstance],
    catalog: &Catalog,
    points: &IndexMap<String, Vec2>,
) -> Result<f64, ResidualError> {
    let mut worst: f64 = 0.0;
    for inst in instances {
        let Some(def) = catalog.get(&inst.clause_id) else {
            continue;
        };
        for c in bind_constraints(def, inst) {
            worst = worst.max(evaluate_constraint(&c, points)?);
        }
    }
    Ok(worst)
}
