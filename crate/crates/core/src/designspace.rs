//! Design variables, objective constraints and the feasible region they induce.
//!
//! The feasible region is never stored. Membership of a point or a whole box is
//! computed on demand by pushing it through the response surfaces and
//! comparing against each objective bound. Box membership is exact because
//! surface extrema over boxes are exact.

use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, check_dim};
use crate::modeltheory::{CmpOp, Formula, Signature, Term, parse_formula};
use crate::orthotope::Ranking;
use crate::surface::{DesignPoint, Interval, QuadraticResponseSurface};

pub const DEFAULT_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_GRID_CAP: u128 = 10_000_000;

/// Lattice cap, overridable through `CDD_MAX_GRID`.
pub fn grid_cap() -> u128 {
    std::env::var("CDD_MAX_GRID").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_GRID_CAP)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawVariable", into = "RawVariable")]
pub struct DesignVariable {
    pub name: String,
    pub unit: String,
    pub ambient: Interval,
}

#[derive(Serialize, Deserialize)]
struct RawVariable {
    name: String,
    #[serde(default)]
    unit: String,
    lo: f64,
    hi: f64,
}

impl TryFrom<RawVariable> for DesignVariable {
    type Error = Error;

    fn try_from(raw: RawVariable) -> Result<Self> {
        DesignVariable::new(raw.name, raw.unit, raw.lo, raw.hi)
    }
}

impl From<DesignVariable> for RawVariable {
    fn from(v: DesignVariable) -> Self {
        RawVariable { name: v.name, unit: v.unit, lo: v.ambient.lo, hi: v.ambient.hi }
    }
}

impl DesignVariable {
    pub fn new(name: impl Into<String>, unit: impl Into<String>, lo: f64, hi: f64) -> Result<Self> {
        let name = name.into();
        let ambient = Interval::new(lo, hi)?;
        if ambient.width() <= 0.0 {
            return Err(Error::Schema(format!("variable `{name}` needs lo < hi")));
        }
        Ok(DesignVariable { name, unit: unit.into(), ambient })
    }
}

/// `surface <= bound`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawConstraint", into = "RawConstraint")]
pub struct ObjectiveConstraint {
    pub surface: String,
    pub bound: f64,
}

#[derive(Serialize, Deserialize)]
struct RawConstraint {
    surface: String,
    #[serde(default = "le")]
    op: String,
    bound: f64,
}

fn le() -> String {
    "<=".into()
}

impl TryFrom<RawConstraint> for ObjectiveConstraint {
    type Error = Error;

    fn try_from(raw: RawConstraint) -> Result<Self> {
        if raw.op != "<=" {
            return Err(Error::UnsupportedRelation(raw.op));
        }
        if !raw.bound.is_finite() {
            return Err(Error::Schema(format!("bound on `{}` must be finite", raw.surface)));
        }
        Ok(ObjectiveConstraint { surface: raw.surface, bound: raw.bound })
    }
}

impl From<ObjectiveConstraint> for RawConstraint {
    fn from(c: ObjectiveConstraint) -> Self {
        RawConstraint { surface: c.surface, op: le(), bound: c.bound }
    }
}

impl fmt::Display for ObjectiveConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {}", self.surface, self.bound)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RankingSpec {
    Auto,
    Explicit(Ranking),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawRanking {
    Keyword(String),
    Explicit(Vec<usize>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    #[serde(default)]
    name: Option<String>,
    variables: Vec<DesignVariable>,
    surfaces: Vec<QuadraticResponseSurface>,
    #[serde(default)]
    constraints: Vec<ObjectiveConstraint>,
    seed: Vec<f64>,
    #[serde(default)]
    ranking: Option<RawRanking>,
    #[serde(default)]
    tolerance: Option<f64>,
}

/// A validated constraint-driven design problem.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignProblem {
    name: String,
    variables: Vec<DesignVariable>,
    surfaces: Vec<QuadraticResponseSurface>,
    constraints: Vec<ObjectiveConstraint>,
    /// Index into `surfaces` for each constraint.
    constraint_surface: Vec<usize>,
    seed: DesignPoint,
    ranking: RankingSpec,
    tolerance: f64,
}

impl DesignProblem {
    pub fn new(
        name: impl Into<String>,
        variables: Vec<DesignVariable>,
        surfaces: Vec<QuadraticResponseSurface>,
        constraints: Vec<ObjectiveConstraint>,
        seed: DesignPoint,
        ranking: RankingSpec,
        tolerance: f64,
    ) -> Result<Self> {
        let n = variables.len();
        if n == 0 {
            return Err(Error::Schema("a problem needs at least one design variable".into()));
        }
        for (i, v) in variables.iter().enumerate() {
            if variables[..i].iter().any(|w| w.name == v.name) {
                return Err(Error::Schema(format!("variable `{}` declared twice", v.name)));
            }
        }
        for (i, s) in surfaces.iter().enumerate() {
            check_dim(n, s.dimension())?;
            if surfaces[..i].iter().any(|t| t.name == s.name) {
                return Err(Error::Schema(format!("surface `{}` declared twice", s.name)));
            }
        }
        let constraint_surface = constraints
            .iter()
            .map(|c| {
                surfaces
                    .iter()
                    .position(|s| s.name == c.surface)
                    .ok_or_else(|| Error::UnknownSurfaceReference(c.surface.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        check_dim(n, seed.len())?;
        if let RankingSpec::Explicit(r) = &ranking {
            check_dim(n, r.len())?;
        }
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(Error::Schema(format!("tolerance must be positive, got {tolerance}")));
        }
        let problem = DesignProblem {
            name: name.into(),
            variables,
            surfaces,
            constraints,
            constraint_surface,
            seed,
            ranking,
            tolerance,
        };
        problem.check_seed()?;
        Ok(problem)
    }

    /// Parses and validates a problem document. `fallback_name` is used when
    /// the document carries no `name`.
    pub fn from_json(text: &str, fallback_name: &str) -> Result<Self> {
        let raw: RawProblem = serde_json::from_str(text)?;
        let ranking = match raw.ranking {
            None => RankingSpec::Auto,
            Some(RawRanking::Keyword(k)) if k == "auto" => RankingSpec::Auto,
            Some(RawRanking::Keyword(k)) => return Err(Error::Schema(format!("unknown ranking `{k}`"))),
            Some(RawRanking::Explicit(p)) => RankingSpec::Explicit(Ranking::new(p)?),
        };
        DesignProblem::new(
            raw.name.unwrap_or_else(|| fallback_name.to_string()),
            raw.variables,
            raw.surfaces,
            raw.constraints,
            DesignPoint(raw.seed),
            ranking,
            raw.tolerance.unwrap_or(DEFAULT_TOLERANCE),
        )
    }

    /// Problem document in the same schema `from_json` reads.
    pub fn to_json(&self) -> String {
        let ranking = match &self.ranking {
            RankingSpec::Auto => serde_json::json!("auto"),
            RankingSpec::Explicit(r) => serde_json::json!(r),
        };
        let doc = serde_json::json!({
            "name": self.name,
            "variables": self.variables,
            "surfaces": self.surfaces,
            "constraints": self.constraints,
            "seed": self.seed,
            "ranking": ranking,
            "tolerance": self.tolerance,
        });
        serde_json::to_string_pretty(&doc).expect("problems serialize")
    }

    fn check_seed(&self) -> Result<()> {
        let region = self.region();
        let pf = region.point(&self.seed)?;
        if !pf.in_ambient {
            return Err(Error::InfeasibleSeed(format!("seed {:?} lies outside the ambient box", self.seed.0)));
        }
        for (c, slack) in self.constraints.iter().zip(&pf.slacks) {
            if *slack < self.tolerance {
                return Err(Error::InfeasibleSeed(format!(
                    "constraint `{c}` has slack {slack} at the seed (needs >= {})",
                    self.tolerance
                )));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[DesignVariable] {
        &self.variables
    }

    pub fn surfaces(&self) -> &[QuadraticResponseSurface] {
        &self.surfaces
    }

    pub fn constraints(&self) -> &[ObjectiveConstraint] {
        &self.constraints
    }

    /// Surface bound by constraint `i`.
    pub fn constraint_surface(&self, i: usize) -> &QuadraticResponseSurface {
        &self.surfaces[self.constraint_surface[i]]
    }

    pub fn bound_for_surface(&self, surface: usize) -> Option<f64> {
        self.constraint_surface.iter().position(|&s| s == surface).map(|i| self.constraints[i].bound)
    }

    pub fn seed(&self) -> &DesignPoint {
        &self.seed
    }

    pub fn ranking(&self) -> &RankingSpec {
        &self.ranking
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn ambient(&self) -> Vec<Interval> {
        self.variables.iter().map(|v| v.ambient).collect()
    }

    pub fn region(&self) -> FeasibleRegion<'_> {
        FeasibleRegion { problem: self }
    }

    pub fn with_seed(&self, seed: DesignPoint) -> Result<Self> {
        let mut p = self.clone();
        check_dim(p.dimension(), seed.len())?;
        p.seed = seed;
        p.check_seed()?;
        Ok(p)
    }

    pub fn with_ranking(&self, ranking: RankingSpec) -> Result<Self> {
        if let RankingSpec::Explicit(r) = &ranking {
            check_dim(self.dimension(), r.len())?;
        }
        Ok(DesignProblem { ranking, ..self.clone() })
    }

    pub fn with_tolerance(&self, tolerance: f64) -> Result<Self> {
        DesignProblem::new(
            self.name.clone(),
            self.variables.clone(),
            self.surfaces.clone(),
            self.constraints.clone(),
            self.seed.clone(),
            self.ranking.clone(),
            tolerance,
        )
    }

    pub fn with_constraints(&self, constraints: Vec<ObjectiveConstraint>) -> Result<Self> {
        DesignProblem::new(
            self.name.clone(),
            self.variables.clone(),
            self.surfaces.clone(),
            constraints,
            self.seed.clone(),
            self.ranking.clone(),
            self.tolerance,
        )
    }

    /// Reorders the design variables: new variable `k` is old variable `perm[k]`.
    /// Surfaces, seed and an explicit ranking are permuted to match.
    pub fn permute_variables(&self, perm: &Ranking) -> Result<Self> {
        check_dim(self.dimension(), perm.len())?;
        let pick = |v: &[f64]| perm.iter().map(|&k| v[k]).collect::<Vec<_>>();
        let surfaces = self
            .surfaces
            .iter()
            .map(|s| {
                QuadraticResponseSurface::new(
                    s.name.clone(),
                    s.unit.clone(),
                    s.beta0,
                    pick(&s.linear),
                    pick(&s.quadratic),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let ranking = match &self.ranking {
            RankingSpec::Auto => RankingSpec::Auto,
            RankingSpec::Explicit(r) => {
                let inverse = perm.inverse();
                RankingSpec::Explicit(Ranking::new(r.iter().map(|&old| inverse[old]).collect())?)
            }
        };
        DesignProblem::new(
            self.name.clone(),
            perm.iter().map(|&k| self.variables[k].clone()).collect(),
            surfaces,
            self.constraints.clone(),
            DesignPoint(pick(&self.seed)),
            ranking,
            self.tolerance,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointFeasibility {
    pub feasible: bool,
    pub in_ambient: bool,
    /// `bound - value` per constraint.
    pub slacks: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxFeasibility {
    pub feasible: bool,
    /// `bound - max over the box` per constraint.
    pub slacks: Vec<f64>,
    /// A point of the box attaining each constraint's maximum.
    pub worst_points: Vec<DesignPoint>,
}

/// Row-major (last axis fastest) lattice over the ambient box.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub axes: Vec<Vec<f64>>,
    pub feasible: Vec<bool>,
}

impl Lattice {
    pub fn len(&self) -> usize {
        self.feasible.len()
    }

    pub fn is_empty(&self) -> bool {
        self.feasible.is_empty()
    }

    pub fn point(&self, mut index: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.axes.len()];
        for (k, axis) in self.axes.iter().enumerate().rev() {
            x[k] = axis[index % axis.len()];
            index /= axis.len();
        }
        x
    }

    pub fn feasible_fraction(&self) -> f64 {
        self.feasible.iter().filter(|&&f| f).count() as f64 / self.len() as f64
    }
}

/// `k`-th of `count` evenly spaced values over `iv`, hitting both ends exactly.
pub fn lattice_value(iv: Interval, k: usize, count: usize) -> f64 {
    if k + 1 == count { iv.hi } else { iv.lo + iv.width() * (k as f64) / ((count - 1) as f64) }
}

/// The subset of the ambient box where every objective constraint holds.
#[derive(Debug, Clone, Copy)]
pub struct FeasibleRegion<'a> {
    problem: &'a DesignProblem,
}

impl<'a> FeasibleRegion<'a> {
    pub fn problem(&self) -> &'a DesignProblem {
        self.problem
    }

    pub fn point(&self, x: &[f64]) -> Result<PointFeasibility> {
        let p = self.problem;
        check_dim(p.dimension(), x.len())?;
        let in_ambient = p.variables.iter().zip(x).all(|(v, &xj)| v.ambient.contains(xj));
        let slacks = (0..p.constraints.len())
            .map(|i| p.constraint_surface(i).evaluate(x).map(|z| p.constraints[i].bound - z))
            .collect::<Result<Vec<_>>>()?;
        let feasible = in_ambient && slacks.iter().all(|&s| s >= 0.0);
        Ok(PointFeasibility { feasible, in_ambient, slacks })
    }

    pub fn is_point_feasible(&self, x: &[f64]) -> Result<bool> {
        self.point(x).map(|pf| pf.feasible)
    }

    pub fn boxed(&self, bx: &[Interval]) -> Result<BoxFeasibility> {
        let p = self.problem;
        check_dim(p.dimension(), bx.len())?;
        if let Some(j) = (0..bx.len()).find(|&j| !p.variables[j].ambient.contains_interval(&bx[j])) {
            return Err(Error::BoxOutsideAmbient { variable: j });
        }
        let mut slacks = Vec::with_capacity(p.constraints.len());
        let mut worst_points = Vec::with_capacity(p.constraints.len());
        for (i, c) in p.constraints.iter().enumerate() {
            let (max, at) = p.constraint_surface(i).box_extremum(bx, crate::surface::Extremum::Max)?;
            slacks.push(c.bound - max);
            worst_points.push(at);
        }
        let feasible = slacks.iter().all(|&s| s >= 0.0);
        Ok(BoxFeasibility { feasible, slacks, worst_points })
    }

    pub fn is_box_feasible(&self, bx: &[Interval]) -> Result<bool> {
        self.boxed(bx).map(|b| b.feasible)
    }

    /// Membership on the inclusive lattice with `resolution[j]` points per axis.
    pub fn grid(&self, resolution: &[usize]) -> Result<Lattice> {
        self.grid_capped(resolution, grid_cap())
    }

    pub fn grid_capped(&self, resolution: &[usize], cap: u128) -> Result<Lattice> {
        let p = self.problem;
        check_dim(p.dimension(), resolution.len())?;
        if let Some(&r) = resolution.iter().find(|&&r| r < 2) {
            return Err(Error::Schema(format!("lattice resolution must be at least 2 per axis, got {r}")));
        }
        let total = resolution.iter().try_fold(1u128, |acc, &r| acc.checked_mul(r as u128)).unwrap_or(u128::MAX);
        if total > cap {
            return Err(Error::CapExceeded { what: "lattice size", requested: total, cap });
        }
        let axes: Vec<Vec<f64>> = p
            .variables
            .iter()
            .zip(resolution)
            .map(|(v, &r)| (0..r).map(|k| lattice_value(v.ambient, k, r)).collect())
            .collect();
        let mut lattice = Lattice { axes, feasible: Vec::with_capacity(total as usize) };
        for idx in 0..total as usize {
            let x = lattice.point(idx);
            lattice.feasible.push(self.is_point_feasible(&x)?);
        }
        Ok(lattice)
    }
}

/// Reads a requirement of the form `IDENT <= NUMBER` as a constraint on the
/// named surface.
pub fn quantify_requirement(text: &str, problem: &DesignProblem) -> Result<ObjectiveConstraint> {
    let formula = parse_formula(text, &Signature::default())?;
    let (op, lhs, rhs) = match &formula {
        Formula::Cmp(op, lhs, rhs) => (op.as_str(), lhs, rhs),
        Formula::Eq(lhs, rhs) => ("=", lhs, rhs),
        _ => return Err(Error::Schema(format!("requirement `{text}` is not of the form IDENT <= NUMBER"))),
    };
    let (Term::Var(name), Term::Num(bound)) = (lhs, rhs) else {
        return Err(Error::Schema(format!("requirement `{text}` is not of the form IDENT <= NUMBER")));
    };
    if !problem.surfaces.iter().any(|s| s.name == *name) {
        return Err(Error::UnknownSurfaceReference(name.clone()));
    }
    if op != CmpOp::Le.as_str() {
        return Err(Error::UnsupportedRelation(op.to_string()));
    }
    let bound = bound
        .to_f64()
        .filter(|b| b.is_finite())
        .ok_or_else(|| Error::Schema(format!("bound {bound} is not representable")))?;
    Ok(ObjectiveConstraint { surface: name.clone(), bound })
}
