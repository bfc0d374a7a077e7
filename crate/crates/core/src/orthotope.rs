//! Maximal inscribed orthotopes.
//!
//! The greedy solver starts from the point box at the seed and widens one
//! coordinate at a time, in ranking order, until a constraint or the ambient
//! bound stops it. Every widening is closed form: with the other coordinates
//! fixed, each constraint leaves a budget for coordinate `j` and the admitted
//! values are a sublevel set of a one-dimensional quadratic.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::designspace::{DesignProblem, RankingSpec, grid_cap, lattice_value};
use crate::error::{Error, Result, check_dim};
use crate::surface::Interval;

/// Coefficients below this magnitude are treated as absent.
pub const NEGLIGIBLE: f64 = 1e-12;

/// Oracle limits.
pub const ORACLE_MAX_DIMENSION: usize = 3;
pub const ORACLE_MAX_RESOLUTION: usize = 201;

/// A permutation of variable indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Ranking(Vec<usize>);

impl TryFrom<Vec<usize>> for Ranking {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Ranking::new(v)
    }
}

impl From<Ranking> for Vec<usize> {
    fn from(r: Ranking) -> Self {
        r.0
    }
}

impl Deref for Ranking {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl Ranking {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &k in &order {
            if k >= order.len() || seen[k] {
                return Err(Error::Schema(format!("ranking {order:?} is not a permutation of 0..{}", order.len())));
            }
            seen[k] = true;
        }
        Ok(Ranking(order))
    }

    pub fn identity(n: usize) -> Self {
        Ranking((0..n).collect())
    }

    /// Parses `"2,0,1"`.
    pub fn parse(text: &str) -> Result<Self> {
        let order = text
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| Error::Schema(format!("bad ranking entry `{}`", s.trim()))))
            .collect::<Result<Vec<_>>>()?;
        Ranking::new(order)
    }

    /// `inverse()[self[k]] == k`.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.0.len()];
        for (k, &v) in self.0.iter().enumerate() {
            inv[v] = k;
        }
        inv
    }
}

impl fmt::Display for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// One closed interval per design variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Orthotope {
    pub intervals: Vec<Interval>,
}

impl Deref for Orthotope {
    type Target = [Interval];

    fn deref(&self) -> &[Interval] {
        &self.intervals
    }
}

impl Orthotope {
    pub fn new(intervals: Vec<Interval>) -> Self {
        Orthotope { intervals }
    }

    pub fn point(x: &[f64]) -> Self {
        Orthotope { intervals: x.iter().map(|&v| Interval::point(v)).collect() }
    }

    pub fn widths(&self) -> Vec<f64> {
        self.intervals.iter().map(Interval::width).collect()
    }

    pub fn volume(&self) -> f64 {
        self.intervals.iter().map(Interval::width).product()
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        x.len() == self.intervals.len() && self.intervals.iter().zip(x).all(|(iv, &v)| iv.contains(v))
    }

    pub fn contains(&self, other: &Orthotope) -> bool {
        other.len() == self.len() && self.intervals.iter().zip(&other.intervals).all(|(a, b)| a.contains_interval(b))
    }

    pub fn with_interval(&self, j: usize, iv: Interval) -> Orthotope {
        let mut o = self.clone();
        o.intervals[j] = iv;
        o
    }

    /// Two-dimensional shadow on coordinates `(j, k)`.
    pub fn project(&self, j: usize, k: usize) -> Result<(Interval, Interval)> {
        for i in [j, k] {
            if i >= self.len() {
                return Err(Error::IndexOutOfRange { index: i, len: self.len() });
            }
        }
        Ok((self.intervals[j], self.intervals[k]))
    }
}

/// What stops an endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Binding {
    Ambient,
    Constraint { index: usize, surface: String },
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Binding::Ambient => f.write_str("ambient"),
            Binding::Constraint { surface, .. } => f.write_str(surface),
        }
    }
}

/// Audit record of one expansion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub factor: usize,
    pub variable: String,
    pub before: Interval,
    pub after: Interval,
    pub lo_binding: Binding,
    pub hi_binding: Binding,
    /// Budget left to coordinate `factor` by each constraint.
    pub budgets: Vec<f64>,
    /// `bound - box max` per constraint after the step.
    pub slacks: Vec<f64>,
    /// Constraints whose surface does not depend on this coordinate.
    pub no_effect: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Lo,
    Hi,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FaceStatus {
    Ambient,
    Blocked { constraint: usize, surface: String },
    Unblocked,
}

/// Outcome of pushing one face outward.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceCheck {
    pub variable: usize,
    pub side: Side,
    #[serde(flatten)]
    pub status: FaceStatus,
    pub epsilon: f64,
    /// Smallest constraint slack of the pushed box; absent on ambient faces.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slack: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Certificate {
    pub faces: Vec<FaceCheck>,
}

impl Certificate {
    /// Maximal when no face can be pushed out.
    pub fn is_maximal(&self) -> bool {
        self.faces.iter().all(|f| f.status != FaceStatus::Unblocked)
    }

    pub fn unblocked(&self) -> impl Iterator<Item = &FaceCheck> {
        self.faces.iter().filter(|f| f.status == FaceStatus::Unblocked)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub orthotope: Orthotope,
    pub ranking: Ranking,
    pub steps: Vec<Step>,
    pub certificate: Certificate,
}

impl SolveResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solve results serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    /// Overrides the problem's ranking policy.
    pub ranking: Option<Ranking>,
    /// Relative push for certification; defaults to the problem tolerance.
    pub epsilon: Option<f64>,
}

/// Sensitivity score per variable: summed `|dz/dx_j|` at the seed over the
/// constrained surfaces, scaled by the ambient width.
pub fn rank_scores(p: &DesignProblem) -> Vec<f64> {
    let mut surfaces: Vec<usize> = (0..p.constraints().len())
        .map(|i| p.surfaces().iter().position(|s| s.name == p.constraints()[i].surface).unwrap())
        .collect();
    surfaces.sort_unstable();
    surfaces.dedup();
    p.variables()
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let total: f64 = surfaces
                .iter()
                .map(|&s| p.surfaces()[s].sensitivity(j, p.seed()).expect("validated dimension").abs())
                .sum();
            total * v.ambient.width()
        })
        .collect()
}

/// Descending sensitivity score, ties to the lower index.
pub fn auto_rank(p: &DesignProblem) -> Ranking {
    let scores = rank_scores(p);
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    Ranking(order)
}

/// Ranking that a solve without overrides would use.
pub fn effective_ranking(p: &DesignProblem) -> Ranking {
    match p.ranking() {
        RankingSpec::Explicit(r) => r.clone(),
        RankingSpec::Auto => auto_rank(p),
    }
}

/// Relative push per axis.
pub fn face_epsilons(p: &DesignProblem, relative: f64) -> Vec<f64> {
    p.variables().iter().map(|v| relative * v.ambient.width()).collect()
}

/// Limits one constraint places on coordinate `j`, as the connected piece of
/// `{x : b x + q x^2 <= r}` containing `s`. `None` means no limit.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Admitted {
    lo: Option<f64>,
    hi: Option<f64>,
}

const FREE: Admitted = Admitted { lo: None, hi: None };

fn admitted(b: f64, q: f64, r: f64, s: f64) -> Admitted {
    let pinned = Admitted { lo: Some(s), hi: Some(s) };
    if q == 0.0 {
        return if b > 0.0 {
            Admitted { lo: None, hi: Some((r / b).max(s)) }
        } else if b < 0.0 {
            Admitted { lo: Some((r / b).min(s)), hi: None }
        } else {
            FREE
        };
    }
    // q x^2 + b x - r = 0
    let disc = b * b + 4.0 * q * r;
    if disc < 0.0 {
        return if q > 0.0 { pinned } else { FREE };
    }
    let m = -0.5 * (b + b.signum() * disc.sqrt());
    let (x1, x2) = if m == 0.0 { (0.0, 0.0) } else { (m / q, -r / m) };
    let (small, large) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
    // A seed just outside the admitted set is a rounding artefact of a fully
    // spent budget; it is taken as lying on the boundary.
    if q > 0.0 {
        Admitted { lo: Some(small.min(s)), hi: Some(large.max(s)) }
    } else if s <= small {
        Admitted { lo: None, hi: Some(small) }
    } else if s >= large {
        Admitted { lo: Some(large), hi: None }
    } else if s - small <= large - s {
        Admitted { lo: None, hi: Some(s) }
    } else {
        Admitted { lo: Some(s), hi: None }
    }
}

/// Widens coordinate `j` of a feasible box to its limit. Returns the new box
/// and the audit record.
pub fn expand_factor(p: &DesignProblem, bx: &Orthotope, j: usize) -> Result<(Orthotope, Step)> {
    let n = p.dimension();
    check_dim(n, bx.len())?;
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, len: n });
    }
    let s = p.seed()[j];
    let before = bx.intervals[j];
    if !before.contains(s) {
        return Err(Error::SeedNotContained { variable: j });
    }
    let region = p.region();
    if !region.boxed(bx)?.feasible {
        return Err(Error::InfeasibleInput);
    }
    let ambient = p.variables()[j].ambient;

    let mut lo = (ambient.lo, Binding::Ambient);
    let mut hi = (ambient.hi, Binding::Ambient);
    let mut budgets = Vec::with_capacity(p.constraints().len());
    let mut no_effect = Vec::new();
    for (i, c) in p.constraints().iter().enumerate() {
        let surf = p.constraint_surface(i);
        let others: f64 =
            (0..n).filter(|&k| k != j).map(|k| surf.term_extremum(k, bx[k], crate::surface::Extremum::Max).0).sum();
        let r = c.bound - surf.beta0 - others;
        budgets.push(r);
        let (b, q) = (surf.linear[j], surf.quadratic[j]);
        if b.abs() < NEGLIGIBLE && q.abs() < NEGLIGIBLE {
            no_effect.push(i);
            continue;
        }
        let a = admitted(b, q, r, s);
        let binding = || Binding::Constraint { index: i, surface: c.surface.clone() };
        if let Some(l) = a.lo.filter(|&l| l > lo.0) {
            lo = (l, binding());
        }
        if let Some(h) = a.hi.filter(|&h| h < hi.0) {
            hi = (h, binding());
        }
    }
    let mut after = Interval { lo: lo.0.min(before.lo), hi: hi.0.max(before.hi) };

    // Roots carry rounding error; pull endpoints back until the exact test passes.
    let feasible = |iv: Interval| region.boxed(&bx.with_interval(j, iv)).map(|b| b.feasible);
    if !feasible(Interval { lo: after.lo, hi: before.hi })? {
        after.lo = bisect(after.lo, before.lo, |x| feasible(Interval { lo: x, hi: before.hi }))?;
    }
    if !feasible(after)? {
        after.hi = bisect(after.hi, before.hi, |x| feasible(Interval { lo: after.lo, hi: x }))?;
    }
    let out = bx.with_interval(j, after);
    let check = region.boxed(&out)?;
    assert!(check.feasible, "expansion of factor {j} left the feasible region");
    let step = Step {
        factor: j,
        variable: p.variables()[j].name.clone(),
        before,
        after,
        lo_binding: lo.1,
        hi_binding: hi.1,
        budgets,
        slacks: check.slacks,
        no_effect,
    };
    Ok((out, step))
}

/// Farthest point from `good` toward `bad` (exclusive) where `ok` holds.
fn bisect(bad: f64, good: f64, ok: impl Fn(f64) -> Result<bool>) -> Result<f64> {
    let (mut bad, mut good) = (bad, good);
    for _ in 0..200 {
        let mid = 0.5 * (bad + good);
        if mid == bad || mid == good {
            break;
        }
        if ok(mid)? {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(good)
}

pub fn solve_greedy(p: &DesignProblem) -> Result<SolveResult> {
    solve_greedy_with(p, &SolveOptions::default())
}

pub fn solve_greedy_with(p: &DesignProblem, options: &SolveOptions) -> Result<SolveResult> {
    let ranking = match &options.ranking {
        Some(r) => {
            check_dim(p.dimension(), r.len())?;
            r.clone()
        }
        None => effective_ranking(p),
    };
    let mut bx = Orthotope::point(p.seed());
    let mut steps = Vec::with_capacity(ranking.len());
    for &j in ranking.iter() {
        let (next, step) = expand_factor(p, &bx, j)?;
        bx = next;
        steps.push(step);
    }
    let eps = face_epsilons(p, options.epsilon.unwrap_or(p.tolerance()));
    let certificate = verify_maximality(p, &bx, &eps)?;
    Ok(SolveResult { orthotope: bx, ranking, steps, certificate })
}

/// Pushes each of the 2N faces outward by `eps[j]` (clamped to the ambient
/// box) and records whether the pushed box is still feasible.
pub fn verify_maximality(p: &DesignProblem, bx: &Orthotope, eps: &[f64]) -> Result<Certificate> {
    let n = p.dimension();
    check_dim(n, bx.len())?;
    check_dim(n, eps.len())?;
    let region = p.region();
    if !region.boxed(bx)?.feasible {
        return Err(Error::InfeasibleInput);
    }
    let mut faces = Vec::with_capacity(2 * n);
    for j in 0..n {
        let ambient = p.variables()[j].ambient;
        let iv = bx[j];
        for side in [Side::Lo, Side::Hi] {
            let (on_bound, pushed) = match side {
                Side::Lo => (iv.lo <= ambient.lo, Interval { lo: (iv.lo - eps[j]).max(ambient.lo), hi: iv.hi }),
                Side::Hi => (iv.hi >= ambient.hi, Interval { lo: iv.lo, hi: (iv.hi + eps[j]).min(ambient.hi) }),
            };
            let face = if on_bound {
                FaceCheck { variable: j, side, status: FaceStatus::Ambient, epsilon: eps[j], slack: None }
            } else {
                let check = region.boxed(&bx.with_interval(j, pushed))?;
                let worst = check
                    .slacks
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
                    .map(|(i, &s)| (i, s));
                let status = match worst {
                    Some((i, s)) if s < 0.0 => {
                        FaceStatus::Blocked { constraint: i, surface: p.constraints()[i].surface.clone() }
                    }
                    _ => FaceStatus::Unblocked,
                };
                FaceCheck { variable: j, side, status, epsilon: eps[j], slack: worst.map(|w| w.1) }
            };
            faces.push(face);
        }
    }
    Ok(Certificate { faces })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOptions {
    pub resolution: usize,
    pub ranking: Ranking,
    /// Lattice resolution of the exhaustive max-volume search; skipped when `None`.
    pub global_resolution: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub resolution: usize,
    /// Lattice spacing per axis.
    pub steps: Vec<f64>,
    /// Widest lattice-aligned interval per factor, taken in ranking order.
    pub lattice_order: Orthotope,
    /// The same search with each endpoint refined inside its boundary cell by
    /// repeated sub-lattice scans, so grid rounding does not feed later steps.
    pub greedy_order: Orthotope,
    pub global: Option<Orthotope>,
}

/// Sub-lattice levels used to refine an endpoint.
const REFINE_LEVELS: usize = 12;

/// Lattice endpoint candidates on one axis: the lattice points below and above
/// the seed coordinate, plus the seed coordinate itself.
fn candidates(ambient: Interval, resolution: usize, s: f64) -> (Vec<f64>, Vec<f64>) {
    let axis: Vec<f64> = (0..resolution).map(|k| lattice_value(ambient, k, resolution)).collect();
    let mut lows: Vec<f64> = axis.iter().copied().filter(|&x| x < s).collect();
    lows.push(s);
    let mut highs = vec![s];
    highs.extend(axis.iter().copied().filter(|&x| x > s));
    (lows, highs)
}

/// Brute-force box test: every corner is point-feasible and the analytic box
/// maximum respects every bound.
fn oracle_feasible(p: &DesignProblem, bx: &[Interval]) -> Result<bool> {
    let region = p.region();
    let n = bx.len();
    let mut corner = vec![0.0; n];
    for mask in 0..(1usize << n) {
        for (k, c) in corner.iter_mut().enumerate() {
            *c = if mask >> k & 1 == 0 { bx[k].lo } else { bx[k].hi };
        }
        if !region.is_point_feasible(&corner)? {
            return Ok(false);
        }
    }
    region.is_box_feasible(bx)
}

fn check_oracle_caps(p: &DesignProblem, resolution: usize) -> Result<()> {
    if p.dimension() > ORACLE_MAX_DIMENSION {
        return Err(Error::CapExceeded {
            what: "oracle dimension",
            requested: p.dimension() as u128,
            cap: ORACLE_MAX_DIMENSION as u128,
        });
    }
    if resolution > ORACLE_MAX_RESOLUTION {
        return Err(Error::CapExceeded {
            what: "oracle resolution",
            requested: resolution as u128,
            cap: ORACLE_MAX_RESOLUTION as u128,
        });
    }
    let cells = (resolution as u128).pow(p.dimension() as u32);
    let cap = grid_cap();
    if cells > cap {
        return Err(Error::CapExceeded { what: "lattice size", requested: cells, cap });
    }
    if resolution < 2 {
        return Err(Error::Schema(format!("oracle resolution must be at least 2, got {resolution}")));
    }
    Ok(())
}

/// Exhaustive lattice search for boxes through the seed.
pub fn oracle_solve(p: &DesignProblem, options: &OracleOptions) -> Result<OracleResult> {
    check_oracle_caps(p, options.resolution)?;
    check_dim(p.dimension(), options.ranking.len())?;
    let seed = p.seed();
    let mut lattice: Vec<Interval> = seed.iter().map(|&x| Interval::point(x)).collect();
    let mut refined = lattice.clone();
    for &j in options.ranking.iter() {
        let (lows, highs) = candidates(p.variables()[j].ambient, options.resolution, seed[j]);
        let (l, h) = widest_pair(p, &lattice, j, &lows, &highs)?;
        lattice[j] = Interval { lo: lows[l], hi: highs[h] };

        let (l, h) = widest_pair(p, &refined, j, &lows, &highs)?;
        refined[j] = Interval { lo: lows[l], hi: highs[h] };
        if l > 0 {
            refine(p, &mut refined, j, Side::Lo, lows[l - 1], options.resolution)?;
        }
        if h + 1 < highs.len() {
            refine(p, &mut refined, j, Side::Hi, highs[h + 1], options.resolution)?;
        }
    }
    let global = match options.global_resolution {
        Some(r) => {
            check_oracle_caps(p, r)?;
            Some(global_search(p, r)?)
        }
        None => None,
    };
    Ok(OracleResult {
        resolution: options.resolution,
        steps: grid_steps(p, options.resolution),
        lattice_order: Orthotope::new(lattice),
        greedy_order: Orthotope::new(refined),
        global,
    })
}

/// Indices into `lows`/`highs` of the widest feasible interval for factor `j`,
/// ties to the lower start. Every pair is a candidate.
fn widest_pair(p: &DesignProblem, bx: &[Interval], j: usize, lows: &[f64], highs: &[f64]) -> Result<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = (0..lows.len()).flat_map(|l| (0..highs.len()).map(move |h| (l, h))).collect();
    let width = |&(l, h): &(usize, usize)| highs[h] - lows[l];
    pairs.sort_by(|a, b| width(b).total_cmp(&width(a)).then(lows[a.0].total_cmp(&lows[b.0])));
    let mut trial = bx.to_vec();
    for (l, h) in pairs {
        trial[j] = Interval { lo: lows[l], hi: highs[h] };
        if oracle_feasible(p, &trial)? {
            return Ok((l, h));
        }
    }
    // the seed pair is the box already known to be feasible
    Ok((lows.len() - 1, 0))
}

/// Moves one endpoint of factor `j` toward `outer`, a value known to be
/// infeasible, scanning a fresh sub-lattice of the remaining gap at each level.
fn refine(p: &DesignProblem, bx: &mut [Interval], j: usize, side: Side, outer: f64, resolution: usize) -> Result<()> {
    let mut inner = match side {
        Side::Lo => bx[j].lo,
        Side::Hi => bx[j].hi,
    };
    let mut outer = outer;
    let set = |bx: &mut [Interval], x: f64| match side {
        Side::Lo => bx[j].lo = x,
        Side::Hi => bx[j].hi = x,
    };
    for _ in 0..REFINE_LEVELS {
        let (a, b) = (inner, outer);
        let mut next_outer = b;
        for k in 1..resolution - 1 {
            let x = a + (b - a) * (k as f64) / ((resolution - 1) as f64);
            if x == inner || x == b {
                continue;
            }
            set(bx, x);
            if oracle_feasible(p, bx)? {
                inner = x;
            } else {
                next_outer = x;
                break;
            }
        }
        outer = next_outer;
        set(bx, inner);
        if (outer - inner).abs() <= 4.0 * f64::EPSILON * inner.abs().max(outer.abs()) {
            break;
        }
    }
    Ok(())
}

/// Largest-volume lattice box containing the seed; ties keep the first found.
fn global_search(p: &DesignProblem, resolution: usize) -> Result<Orthotope> {
    let seed = p.seed();
    let per_axis: Vec<Vec<Interval>> = p
        .variables()
        .iter()
        .zip(seed.iter())
        .map(|(v, &s)| {
            let (lows, highs) = candidates(v.ambient, resolution, s);
            lows.iter().flat_map(|&l| highs.iter().map(move |&h| Interval { lo: l, hi: h })).collect()
        })
        .collect();
    let mut best = Orthotope::point(seed);
    let mut best_volume = 0.0;
    let mut index = vec![0usize; per_axis.len()];
    loop {
        let bx: Vec<Interval> = index.iter().zip(&per_axis).map(|(&i, axis)| axis[i]).collect();
        let volume: f64 = bx.iter().map(Interval::width).product();
        if volume > best_volume && oracle_feasible(p, &bx)? {
            best_volume = volume;
            best = Orthotope::new(bx);
        }
        let mut k = index.len();
        loop {
            if k == 0 {
                return Ok(best);
            }
            k -= 1;
            index[k] += 1;
            if index[k] < per_axis[k].len() {
                break;
            }
            index[k] = 0;
        }
    }
}

pub fn grid_steps(p: &DesignProblem, resolution: usize) -> Vec<f64> {
    p.variables().iter().map(|v| v.ambient.width() / (resolution - 1) as f64).collect()
}

/// Largest endpoint gap between two boxes, in grid steps.
pub fn endpoint_gap_in_steps(a: &Orthotope, b: &Orthotope, steps: &[f64]) -> f64 {
    a.iter()
        .zip(b.iter())
        .zip(steps)
        .map(|((x, y), &h)| ((x.lo - y.lo).abs() / h).max((x.hi - y.hi).abs() / h))
        .fold(0.0, f64::max)
}
