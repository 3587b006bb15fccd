//! Rule-based clause selection under a target image complexity.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, ClauseDef, Difficulty, ParamKind};
use crate::error::SelectionError;
use crate::instance::{Binding, ClauseInstance};

/// Total number of slot redraws allowed per group.
pub const REDRAW_ROUNDS: usize = 32;

/// Complexity of a whole image, as opposed to the difficulty of one clause.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Complexity {
    Easy,
    Medium,
    Hard,
}

impl Complexity {
    pub const ALL: [Complexity; 3] = [Complexity::Easy, Complexity::Medium, Complexity::Hard];

    pub fn as_str(self) -> &'static str {
        match self {
            Complexity::Easy => "easy",
            Complexity::Medium => "medium",
            Complexity::Hard => "hard",
        }
    }

    /// Clause difficulties a slot may fall back to when its drawn difficulty
    /// has no compatible clause.
    fn redraw_set(self) -> &'static [Difficulty] {
        match self {
            Complexity::Easy => &[Difficulty::Easy],
            Complexity::Medium => &[Difficulty::Easy, Difficulty::Medium],
            Complexity::Hard => &Difficulty::ALL,
        }
    }
}

impl fmt::Display for Complexity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Complexity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "easy" => Ok(Complexity::Easy),
            "medium" => Ok(Complexity::Medium),
            "hard" => Ok(Complexity::Hard),
            other => Err(format!("unknown complexity `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SelectionRules {
    /// Chance that a Medium group carries one Hard clause.
    pub hard_in_medium_prob: f64,
    pub easy_count: usize,
    pub medium_count: usize,
    pub hard_count_min: usize,
    pub hard_count_max: usize,
}

impl Default for SelectionRules {
    fn default() -> Self {
        Self {
            hard_in_medium_prob: 0.1,
            easy_count: 1,
            medium_count: 2,
            hard_count_min: 3,
            hard_count_max: 5,
        }
    }
}

impl SelectionRules {
    pub fn validate(&self) -> Result<(), SelectionError> {
        let bad = |m: &str| Err(SelectionError::Rules(m.to_string()));
        if !(0.0..=1.0).contains(&self.hard_in_medium_prob) {
            return bad("hard_in_medium_prob must lie in [0, 1]");
        }
        if self.easy_count == 0 || self.medium_count == 0 {
            return bad("clause counts must be positive");
        }
        if self.hard_count_min < 3 {
            return bad("hard_count_min must be at least 3");
        }
        if self.hard_count_max < self.hard_count_min {
            return bad("hard_count_max must be at least hard_count_min");
        }
        Ok(())
    }
}

/// Points defined so far, in definition order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PointPool {
    names: Vec<String>,
}

impl PointPool {
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names.iter().any(|n| n == name)
    }

    /// Next unused name in the order A..Z, A1..Z1, A2..
    pub fn fresh_name(&self) -> String {
        (0usize..)
            .flat_map(|round| {
                (b'A'..=b'Z').map(move |c| {
                    if round == 0 {
                        (c as char).to_string()
                    } else {
                        format!("{}{round}", c as char)
                    }
                })
            })
            .find(|n| !self.contains(n))
            .expect("name space is unbounded")
    }

    fn push(&mut self, name: String) {
        debug_assert!(!self.contains(&name));
        self.names.push(name);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClauseGroup {
    pub complexity: Complexity,
    pub instances: Vec<ClauseInstance>,
    pub final_pool: PointPool,
}

pub fn draw_count<R: Rng + ?Sized>(complexity: Complexity, rules: &SelectionRules, rng: &mut R) -> usize {
    match complexity {
        Complexity::Easy => rules.easy_count,
        Complexity::Medium => rules.medium_count,
        Complexity::Hard => rng.gen_range(rules.hard_count_min..=rules.hard_count_max),
    }
}

pub fn draw_difficulty_sequence<R: Rng + ?Sized>(
    complexity: Complexity,
    count: usize,
    rules: &SelectionRules,
    rng: &mut R,
) -> Vec<Difficulty> {
    match complexity {
        Complexity::Easy => vec![Difficulty::Easy; count],
        Complexity::Medium => {
            let hard_slot = (count > 0 && rng.gen_bool(rules.hard_in_medium_prob))
                .then(|| rng.gen_range(0..count));
            (0..count)
                .map(|i| {
                    if Some(i) == hard_slot {
                        Difficulty::Hard
                    } else {
                        *[Difficulty::Easy, Difficulty::Medium].choose(rng).unwrap()
                    }
                })
                .collect()
        }
        Complexity::Hard => (0..count)
            .map(|_| *Difficulty::ALL.choose(rng).unwrap())
            .collect(),
    }
}

pub fn is_compatible(def: &ClauseDef, pool: &PointPool) -> bool {
    pool.len() >= def.ref_count()
}

/// Grid values of a numeric parameter: lengths step 1, angles step 5, from
/// the lower bound.
pub fn numeric_grid(kind: &ParamKind) -> Vec<f64> {
    let (Some(r), Some(step)) = (kind.range(), kind.step()) else {
        return Vec::new();
    };
    let n = ((r.hi - r.lo) / step + 1e-9).floor().max(0.0) as usize;
    (0..=n).map(|k| r.lo + k as f64 * step).collect()
}

/// Binds prerequisite points (uniformly, without replacement), fresh names
/// and numeric values; extends `pool` with the new names.
pub fn bind_arguments<R: Rng + ?Sized>(def: &ClauseDef, pool: &mut PointPool, rng: &mut R) -> ClauseInstance {
    let mut candidates = pool.names.clone();
    let refs = def.ref_count();
    let (picked, _) = candidates.partial_shuffle(rng, refs);
    let mut refs_iter = picked.iter().cloned();
    let mut args = Vec::with_capacity(def.params.len());
    for p in &def.params {
        let b = match &p.kind {
            ParamKind::RefPoint => Binding::Point(refs_iter.next().expect("compatible pool")),
            ParamKind::NewPoint => {
                let n = pool.fresh_name();
                pool.push(n.clone());
                Binding::Point(n)
            }
            kind => Binding::Number(*numeric_grid(kind).choose(rng).expect("non-empty range")),
        };
        args.push((p.name.clone(), b));
    }
    ClauseInstance {
        clause_id: def.id.clone(),
        args,
    }
}

/// Draws an ordered, compatible clause group for `complexity`.
pub fn select_group<R: Rng + ?Sized>(
    complexity: Complexity,
    catalog: &Catalog,
    rules: &SelectionRules,
    rng: &mut R,
) -> Result<ClauseGroup, SelectionError> {
    rules.validate()?;
    let count = draw_count(complexity, rules, rng);
    let slots = draw_difficulty_sequence(complexity, count, rules, rng);
    let mut pool = PointPool::default();
    let mut instances = Vec::with_capacity(count);
    let mut rounds = 0;
    for mut difficulty in slots {
        loop {
            let compatible: Vec<&ClauseDef> = catalog
                .of_difficulty(difficulty)
                .filter(|d| is_compatible(d, &pool))
                .collect();
            if let Some(def) = compatible.choose(rng) {
                instances.push(bind_arguments(def, &mut pool, rng));
                break;
            }
            rounds += 1;
            if rounds > REDRAW_ROUNDS {
                return Err(SelectionError::Exhausted {
                    complexity: complexity.to_string(),
                    rounds: REDRAW_ROUNDS,
                });
            }
            difficulty = *complexity.redraw_set().choose(rng).unwrap();
        }
    }
    Ok(ClauseGroup {
        complexity,
        instances,
        final_pool: pool,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::reference_catalog;
    use crate::instance::check_point_flow;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fresh_names_roll_over() {
        let mut pool = PointPool::default();
        for _ in 0..26 {
            let n = pool.fresh_name();
            pool.push(n);
        }
        assert_eq!(pool.names()[25], "Z");
        assert_eq!(pool.fresh_name(), "A1");
        pool.push("A1".into());
        assert_eq!(pool.fresh_name(), "B1");
    }

    #[test]
    fn counts_follow_rules() {
        let rules = SelectionRules::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(draw_count(Complexity::Easy, &rules, &mut rng), 1);
        assert_eq!(draw_count(Complexity::Medium, &rules, &mut rng), 2);
        for _ in 0..200 {
            assert!((3..=5).contains(&draw_count(Complexity::Hard, &rules, &mut rng)));
        }
    }

    #[test]
    fn compatibility_by_pool_size() {
        let cat = reference_catalog();
        let mid = cat.get("midpoint").unwrap();
        let seg = cat.get("segment").unwrap();
        let mut pool = PointPool::default();
        assert!(is_compatible(seg, &pool));
        pool.push("A".into());
        assert!(!is_compatible(mid, &pool));
        pool.push("B".into());
        pool.push("C".into());
        assert!(is_compatible(mid, &pool));
    }

    #[test]
    fn angle_grid_in_five_degree_steps() {
        let cat = reference_catalog();
        let t = &cat.get("angle_annot").unwrap().param("t").unwrap().kind;
        let grid = numeric_grid(t);
        assert_eq!(grid.len(), 29);
        assert_eq!((grid[0], grid[28]), (20.0, 160.0));
    }

    #[test]
    fn groups_conform() {
        let cat = reference_catalog();
        let rules = SelectionRules::default();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for c in Complexity::ALL {
            for _ in 0..300 {
                let g = select_group(c, &cat, &rules, &mut rng).unwrap();
                assert!(cat.get(&g.instances[0].clause_id).unwrap().is_independent());
                check_point_flow(&g.instances, &cat).unwrap();
                let diffs: Vec<Difficulty> = g
                    .instances
                    .iter()
                    .map(|i| cat.get(&i.clause_id).unwrap().difficulty)
                    .collect();
                match c {
                    Complexity::Easy => assert_eq!(diffs, vec![Difficulty::Easy]),
                    Complexity::Medium => {
                        assert_eq!(diffs.len(), 2);
                        assert!(diffs.iter().filter(|d| **d == Difficulty::Hard).count() <= 1);
                    }
                    Complexity::Hard => assert!((3..=5).contains(&diffs.len())),
                }
            }
        }
    }

    #[test]
    fn dependent_only_easy_tier_exhausts() {
        let full = reference_catalog();
        let clauses = full
            .clauses()
            .iter()
            .filter(|c| c.difficulty != Difficulty::Easy || !c.is_independent())
            .cloned()
            .collect::<Vec<_>>();
        assert!(Catalog::new("t", clauses.clone()).is_err());
        let cat = Catalog::new_partial("t", clauses).unwrap();
        let err = select_group(
            Complexity::Easy,
            &cat,
            &SelectionRules::default(),
            &mut ChaCha8Rng::seed_from_u64(2),
        )
        .unwrap_err();
        assert_eq!(
            err,
            SelectionError::Exhausted {
                complexity: "easy".into(),
                rounds: REDRAW_ROUNDS
            }
        );
    }

    #[test]
    fn deterministic_under_seed() {
        let cat = reference_catalog();
        let rules = SelectionRules::default();
        let a = select_group(Complexity::Hard, &cat, &rules, &mut ChaCha8Rng::seed_from_u64(5));
        let b = select_group(Complexity::Hard, &cat, &rules, &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(a, b);
    }
}
