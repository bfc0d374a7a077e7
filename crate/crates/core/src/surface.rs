//! Pure-quadratic response surfaces.
//!
//! A surface maps a design point `x` to an objective value
//!
//! ```text
//! z = beta0 + sum_j linear[j] * x_j + sum_j quadratic[j] * x_j^2
//! ```
//!
//! There are no interaction terms, so the surface is a sum of independent
//! one-dimensional terms `t_j(x) = linear[j] * x + quadratic[j] * x^2`. That
//! separability is what makes extrema over axis-aligned boxes exact: each
//! coordinate is extremized on its own interval.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, check_dim};

/// Closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInterval")]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Deserialize)]
struct RawInterval {
    lo: f64,
    hi: f64,
}

impl TryFrom<RawInterval> for Interval {
    type Error = Error;

    fn try_from(raw: RawInterval) -> Result<Self> {
        Interval::new(raw.lo, raw.hi)
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Schema(format!("interval bounds must be finite, got [{lo}, {hi}]")));
        }
        if lo > hi {
            return Err(Error::Schema(format!("interval lower bound {lo} exceeds upper bound {hi}")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// A point in the design space, in variable units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DesignPoint(pub Vec<f64>);

impl Deref for DesignPoint {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for DesignPoint {
    fn from(v: Vec<f64>) -> Self {
        DesignPoint(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremum {
    Max,
    Min,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSurface")]
pub struct QuadraticResponseSurface {
    pub name: String,
    pub unit: String,
    pub beta0: f64,
    pub linear: Vec<f64>,
    pub quadratic: Vec<f64>,
}

#[derive(Deserialize)]
struct RawSurface {
    name: String,
    #[serde(default)]
    unit: String,
    beta0: f64,
    linear: Vec<f64>,
    quadratic: Vec<f64>,
}

impl TryFrom<RawSurface> for QuadraticResponseSurface {
    type Error = Error;

    fn try_from(raw: RawSurface) -> Result<Self> {
        QuadraticResponseSurface::new(raw.name, raw.unit, raw.beta0, raw.linear, raw.quadratic)
    }
}

/// Value of the one-dimensional term `b*x + q*x^2`.
///
/// `evaluate` and `box_extremum` both go through this so that a point box
/// reproduces `evaluate` bit for bit.
#[inline]
pub fn term_value(b: f64, q: f64, x: f64) -> f64 {
    b * x + q * x * x
}

impl QuadraticResponseSurface {
    pub fn new(
        name: impl Into<String>,
        unit: impl Into<String>,
        beta0: f64,
        linear: Vec<f64>,
        quadratic: Vec<f64>,
    ) -> Result<Self> {
        let name = name.into();
        check_dim(linear.len(), quadratic.len())?;
        let finite =
            beta0.is_finite() && linear.iter().all(|c| c.is_finite()) && quadratic.iter().all(|c| c.is_finite());
        if !finite {
            return Err(Error::Schema(format!("surface `{name}` has non-finite coefficients")));
        }
        Ok(QuadraticResponseSurface { name, unit: unit.into(), beta0, linear, quadratic })
    }

    pub fn dimension(&self) -> usize {
        self.linear.len()
    }

    /// The coordinate-`j` term `linear[j]*x + quadratic[j]*x^2` (no bounds check).
    pub fn term(&self, j: usize, x: f64) -> f64 {
        term_value(self.linear[j], self.quadratic[j], x)
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dimension(), x.len())?;
        Ok(x.iter().enumerate().fold(self.beta0, |acc, (j, &xj)| acc + self.term(j, xj)))
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dimension(), x.len())?;
        Ok(x.iter().zip(self.linear.iter().zip(&self.quadratic)).map(|(&xj, (&b, &q))| b + 2.0 * q * xj).collect())
    }

    /// Partial derivative with respect to `x_j` at `x0`.
    pub fn sensitivity(&self, j: usize, x0: &[f64]) -> Result<f64> {
        check_dim(self.dimension(), x0.len())?;
        if j >= self.dimension() {
            return Err(Error::IndexOutOfRange { index: j, len: self.dimension() });
        }
        Ok(self.linear[j] + 2.0 * self.quadratic[j] * x0[j])
    }

    /// Stationary point `-b / (2q)` of the coordinate-`j` term, if it is curved.
    pub fn vertex(&self, j: usize) -> Option<f64> {
        let q = self.quadratic[j];
        (q != 0.0).then(|| -self.linear[j] / (2.0 * q))
    }

    /// Extremum of the coordinate-`j` term over `iv`, with an attaining point.
    ///
    /// Candidates are both endpoints and, when it lies strictly inside, the
    /// vertex. Ties go to the lower coordinate. The vertex value is widened
    /// outward by a few ulps so the result bounds every float evaluation of the
    /// term inside `iv`.
    pub fn term_extremum(&self, j: usize, iv: Interval, mode: Extremum) -> (f64, f64) {
        let better = |a: f64, b: f64| match mode {
            Extremum::Max => a > b,
            Extremum::Min => a < b,
        };
        let mut best = (self.term(j, iv.lo), iv.lo);
        let q = self.quadratic[j];
        let vertex_is_candidate = match mode {
            Extremum::Max => q < 0.0,
            Extremum::Min => q > 0.0,
        };
        if let Some(v) = self.vertex(j).filter(|&v| vertex_is_candidate && iv.lo < v && v < iv.hi) {
            let raw = self.term(j, v);
            let slop = 8.0 * f64::EPSILON * ((self.linear[j] * v).abs() + (q * v * v).abs());
            let widened = match mode {
                Extremum::Max => raw + slop,
                Extremum::Min => raw - slop,
            };
            if better(widened, best.0) {
                best = (widened, v);
            }
        }
        let at_hi = self.term(j, iv.hi);
        if better(at_hi, best.0) {
            best = (at_hi, iv.hi);
        }
        best
    }

    /// Exact extremum over an axis-aligned box and a point attaining it.
    pub fn box_extremum(&self, bx: &[Interval], mode: Extremum) -> Result<(f64, DesignPoint)> {
        check_dim(self.dimension(), bx.len())?;
        let mut value = self.beta0;
        let mut point = Vec::with_capacity(bx.len());
        for (j, iv) in bx.iter().enumerate() {
            let (t, x) = self.term_extremum(j, *iv, mode);
            value += t;
            point.push(x);
        }
        Ok((value, DesignPoint(point)))
    }

    pub fn box_max(&self, bx: &[Interval]) -> Result<f64> {
        self.box_extremum(bx, Extremum::Max).map(|(v, _)| v)
    }
}
