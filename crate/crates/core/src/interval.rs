//! Outward-rounded scalar intervals and boxes of intervals.

use std::fmt;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rounding::RoundingPolicy;

/// A closed interval `[lo, hi]` with finite bounds and `lo <= hi`.
///
/// Empty intervals cannot be constructed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };
    pub const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::IntervalOverflow);
        }
        // normalise -0.0 so equality and hashing behave
        Ok(Interval {
            lo: lo + 0.0,
            hi: hi + 0.0,
        })
    }

    pub fn point(x: f64) -> Result<Self> {
        Interval::new(x, x)
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// `hi - lo`, rounded up.
    pub fn width(&self) -> f64 {
        RoundingPolicy::OUTWARD_64.sub_up(self.hi, self.lo)
    }

    /// A midpoint that is guaranteed to lie inside the interval.
    pub fn mid(&self) -> f64 {
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Largest absolute value over the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// `[max(0, lo), max(0, hi)]`.
    pub fn relu(&self) -> Interval {
        Interval {
            lo: self.lo.max(0.0),
            hi: self.hi.max(0.0),
        }
    }
}

impl TryFrom<[f64; 2]> for Interval {
    type Error = Error;

    fn try_from(v: [f64; 2]) -> Result<Self> {
        Interval::new(v[0], v[1])
    }
}

impl From<Interval> for [f64; 2] {
    fn from(i: Interval) -> Self {
        [i.lo, i.hi]
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

fn checked(lo: f64, hi: f64) -> Result<Interval> {
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::IntervalOverflow);
    }
    Interval::new(lo, hi)
}

/// Interval operations under a rounding policy.
impl RoundingPolicy {
    pub fn add(self, a: Interval, b: Interval) -> Result<Interval> {
        checked(self.add_down(a.lo, b.lo), self.add_up(a.hi, b.hi))
    }

    pub fn sub(self, a: Interval, b: Interval) -> Result<Interval> {
        checked(self.sub_down(a.lo, b.hi), self.sub_up(a.hi, b.lo))
    }

    /// `c * a` for a real scalar `c`.
    pub fn scale(self, c: f64, a: Interval) -> Result<Interval> {
        if !c.is_finite() {
            return Err(Error::IntervalOverflow);
        }
        if c >= 0.0 {
            checked(self.mul_down(c, a.lo), self.mul_up(c, a.hi))
        } else {
            checked(self.mul_down(c, a.hi), self.mul_up(c, a.lo))
        }
    }

    pub fn mul(self, a: Interval, b: Interval) -> Result<Interval> {
        let (lo, hi) = self.mul_bounds(a, b);
        checked(lo, hi)
    }

    /// Raw bounds of an interval product, possibly infinite.
    #[inline]
    pub(crate) fn mul_bounds(self, a: Interval, b: Interval) -> (f64, f64) {
        let pairs = [(a.lo, b.lo), (a.lo, b.hi), (a.hi, b.lo), (a.hi, b.hi)];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (x, y) in pairs {
            lo = lo.min(self.mul_down(x, y));
            hi = hi.max(self.mul_up(x, y));
        }
        (lo, hi)
    }

    /// `W v + b` with interval `v`. Row `i` contains every
    /// `sum_j W[i,j] x_j + b[i]` with `x_j` in `v[j]`.
    pub fn matvec(self, w: &Array2<f64>, b: &Array1<f64>, v: &[Interval]) -> Result<Vec<Interval>> {
        let (rows, cols) = w.dim();
        if cols != v.len() {
            return Err(Error::dims("matvec input", cols, v.len()));
        }
        if b.len() != rows {
            return Err(Error::dims("matvec bias", rows, b.len()));
        }
        let mut out = Vec::with_capacity(rows);
        for (row, &bias) in w.outer_iter().zip(b.iter()) {
            let mut lo = bias;
            let mut hi = bias;
            for (&wij, x) in row.iter().zip(v) {
                if wij >= 0.0 {
                    lo = self.add_down(lo, self.mul_down(wij, x.lo));
                    hi = self.add_up(hi, self.mul_up(wij, x.hi));
                } else {
                    lo = self.add_down(lo, self.mul_down(wij, x.hi));
                    hi = self.add_up(hi, self.mul_up(wij, x.lo));
                }
            }
            out.push(checked(lo, hi)?);
        }
        Ok(out)
    }
}

/// A vector of intervals: an axis-aligned region of the input space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntervalBox {
    dims: Vec<Interval>,
}

impl IntervalBox {
    pub fn new(dims: Vec<Interval>) -> Self {
        IntervalBox { dims }
    }

    pub fn from_bounds(bounds: &[(f64, f64)]) -> Result<Self> {
        bounds
            .iter()
            .map(|&(lo, hi)| Interval::new(lo, hi))
            .collect::<Result<Vec<_>>>()
            .map(IntervalBox::new)
    }

    pub fn from_point(x: &[f64]) -> Result<Self> {
        x.iter()
            .map(|&v| Interval::point(v))
            .collect::<Result<Vec<_>>>()
            .map(IntervalBox::new)
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dims(&self) -> &[Interval] {
        &self.dims
    }

    pub fn get(&self, j: usize) -> Interval {
        self.dims[j]
    }

    pub fn set(&mut self, j: usize, v: Interval) {
        self.dims[j] = v;
    }

    pub fn midpoint(&self) -> Vec<f64> {
        self.dims.iter().map(Interval::mid).collect()
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        x.len() == self.dims.len() && self.dims.iter().zip(x).all(|(d, &v)| d.contains(v))
    }

    pub fn is_subset_of(&self, other: &IntervalBox) -> bool {
        self.len() == other.len() && self.dims.iter().zip(&other.dims).all(|(a, b)| a.is_subset_of(b))
    }

    /// Widest dimension and its index; the lowest index wins ties.
    pub fn max_width(&self) -> (f64, usize) {
        let mut best = (f64::NEG_INFINITY, 0);
        for (j, d) in self.dims.iter().enumerate() {
            let w = d.width();
            if w > best.0 {
                best = (w, j);
            }
        }
        if self.dims.is_empty() {
            (0.0, 0)
        } else {
            best
        }
    }

    /// Product of the widths (nearest rounding; for accounting only).
    pub fn volume(&self) -> f64 {
        self.dims.iter().map(|d| d.hi - d.lo).product()
    }

    /// Split dimension `j` at its midpoint into `[lo, mid]` and `[mid, hi]`.
    pub fn bisect(&self, j: usize) -> Result<(IntervalBox, IntervalBox)> {
        let d = *self
            .dims
            .get(j)
            .ok_or(Error::dims("bisect index", self.dims.len(), j))?;
        if d.is_point() {
            return Err(Error::Unsplittable(j));
        }
        let mid = d.mid();
        let mut left = self.clone();
        let mut right = self.clone();
        left.dims[j] = Interval { lo: d.lo, hi: mid };
        right.dims[j] = Interval { lo: mid, hi: d.hi };
        Ok((left, right))
    }

    /// Iterate over the points of a `per_dim`-per-axis grid including the faces.
    pub fn grid(&self, per_dim: usize) -> impl Iterator<Item = Vec<f64>> + '_ {
        let n = per_dim.max(1);
        let total = n.checked_pow(self.dims.len() as u32).unwrap_or(usize::MAX);
        (0..total).map(move |mut k| {
            self.dims
                .iter()
                .map(|d| {
                    let i = k % n;
                    k /= n;
                    if n == 1 {
                        d.mid()
                    } else {
                        let t = i as f64 / (n - 1) as f64;
                        (d.lo + t * (d.hi - d.lo)).clamp(d.lo, d.hi)
                    }
                })
                .collect()
        })
    }
}

impl fmt::Display for IntervalBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (j, d) in self.dims.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}
