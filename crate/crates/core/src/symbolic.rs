//! Linear symbolic bounds over the network inputs.
//!
//! Every neuron carries a pair of linear expressions `(low, up)` over the `d`
//! network inputs such that, for every input in the analysed box,
//! `low(x) <= neuron(x) <= up(x)`.
//!
//! Coefficients are stored as plain floats. When an affine layer combines
//! expressions, each output coefficient is computed with downward and
//! upward rounding; the stored coefficient is the midpoint of the two and
//! the residual, weighted by the largest input magnitude in the box, is
//! folded into the constant term (subtracted for `low`, added for `up`).
//! The expressions are therefore only sound over the box they were built
//! for, which is the only place they are ever evaluated.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalBox};
use crate::rounding::RoundingPolicy;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearExpr {
    coeffs: Vec<f64>,
    constant: f64,
}

impl LinearExpr {
    pub fn new(coeffs: Vec<f64>, constant: f64) -> Result<Self> {
        if !constant.is_finite() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::IntervalOverflow);
        }
        Ok(LinearExpr { coeffs, constant })
    }

    pub fn constant(d: usize, c: f64) -> Self {
        LinearExpr {
            coeffs: vec![0.0; d],
            constant: c,
        }
    }

    pub fn zero(d: usize) -> Self {
        LinearExpr::constant(d, 0.0)
    }

    /// The expression `x_j`.
    pub fn input(d: usize, j: usize) -> Self {
        let mut coeffs = vec![0.0; d];
        coeffs[j] = 1.0;
        LinearExpr {
            coeffs,
            constant: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> f64 {
        self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Round-to-nearest evaluation at a point.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().zip(x).fold(self.constant, |acc, (c, v)| acc + c * v)
    }

    /// Sound lower bound of the expression over `x`.
    pub fn lower_bound(&self, x: &IntervalBox, policy: RoundingPolicy) -> Result<f64> {
        self.check_dim(x)?;
        let mut lo = self.constant;
        for (&c, d) in self.coeffs.iter().zip(x.dims()) {
            let v = if c >= 0.0 { d.lo() } else { d.hi() };
            lo = policy.add_down(lo, policy.mul_down(c, v));
        }
        finite(lo)
    }

    /// Sound upper bound of the expression over `x`.
    pub fn upper_bound(&self, x: &IntervalBox, policy: RoundingPolicy) -> Result<f64> {
        self.check_dim(x)?;
        let mut hi = self.constant;
        for (&c, d) in self.coeffs.iter().zip(x.dims()) {
            let v = if c >= 0.0 { d.hi() } else { d.lo() };
            hi = policy.add_up(hi, policy.mul_up(c, v));
        }
        finite(hi)
    }

    /// Interval containing `{ self(x) : x in box }`.
    pub fn bounds(&self, x: &IntervalBox, policy: RoundingPolicy) -> Result<Interval> {
        Interval::new(self.lower_bound(x, policy)?, self.upper_bound(x, policy)?)
    }

    /// Sound bounds of `self - other` over `x`, with the coefficient
    /// differences kept as intervals so nothing is lost to cancellation.
    pub fn difference_bounds(
        &self,
        other: &LinearExpr,
        x: &IntervalBox,
        policy: RoundingPolicy,
    ) -> Result<Interval> {
        self.check_dim(x)?;
        other.check_dim(x)?;
        let mut lo = policy.sub_down(self.constant, other.constant);
        let mut hi = policy.sub_up(self.constant, other.constant);
        for ((&a, &b), d) in self.coeffs.iter().zip(&other.coeffs).zip(x.dims()) {
            let c = Interval::new(policy.sub_down(a, b), policy.sub_up(a, b))?;
            let (plo, phi) = policy.mul_bounds(c, *d);
            lo = policy.add_down(lo, plo);
            hi = policy.add_up(hi, phi);
        }
        Interval::new(finite(lo)?, finite(hi)?)
    }

    fn check_dim(&self, x: &IntervalBox) -> Result<()> {
        if self.coeffs.len() != x.len() {
            return Err(Error::dims("linear expression", self.coeffs.len(), x.len()));
        }
        Ok(())
    }
}

fn finite(v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::IntervalOverflow)
    }
}

/// Lower and upper symbolic bound of one neuron.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymInterval {
    pub low: LinearExpr,
    pub up: LinearExpr,
}

impl SymInterval {
    pub fn exact(e: LinearExpr) -> Self {
        SymInterval {
            low: e.clone(),
            up: e,
        }
    }

    /// The identity bounds `(x_j, x_j)` for every input.
    pub fn inputs(d: usize) -> Vec<SymInterval> {
        (0..d).map(|j| SymInterval::exact(LinearExpr::input(d, j))).collect()
    }

    /// `[lower(low), upper(up)]` over `x`.
    pub fn concretize(&self, x: &IntervalBox, policy: RoundingPolicy) -> Result<Interval> {
        let lo = self.low.lower_bound(x, policy)?;
        let hi = self.up.upper_bound(x, policy)?;
        // `low <= up` pointwise, so lo <= hi up to rounding of two separate sums
        Interval::new(lo.min(hi), hi.max(lo))
    }
}

/// Activation state of a ReLU over a box, i.e. its gradient interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReluState {
    Zero,
    Active,
    Unstable,
}

impl ReluState {
    pub fn gradient(self) -> Interval {
        match self {
            ReluState::Zero => Interval::ZERO,
            ReluState::Active => Interval::ONE,
            ReluState::Unstable => Interval::UNIT,
        }
    }
}

/// Symbolic image of an affine layer `W prev + b`.
///
/// Positive weights pair `up` with `up`, negative weights pair `up` with
/// `low`. `domain` is the box the expressions are valid over; it bounds the
/// contribution of coefficient rounding error.
pub fn affine_sym(
    prev: &[SymInterval],
    w: &Array2<f64>,
    b: &Array1<f64>,
    domain: &IntervalBox,
    policy: RoundingPolicy,
) -> Result<Vec<SymInterval>> {
    let (rows, cols) = w.dim();
    if cols != prev.len() {
        return Err(Error::dims("affine layer input", cols, prev.len()));
    }
    if b.len() != rows {
        return Err(Error::dims("affine layer bias", rows, b.len()));
    }
    let d = domain.len();
    if let Some(bad) = prev.iter().find(|s| s.low.dim() != d || s.up.dim() != d) {
        return Err(Error::dims("symbolic input", d, bad.low.dim().max(bad.up.dim())));
    }
    let mags: Vec<f64> = domain.dims().iter().map(Interval::mag).collect();

    let mut out = Vec::with_capacity(rows);
    let mut acc = Accumulator::new(d);
    for (row, &bias) in w.outer_iter().zip(b.iter()) {
        acc.reset(bias);
        for (&wk, s) in row.iter().zip(prev) {
            if wk > 0.0 {
                acc.add(policy, wk, &s.up, &s.low);
            } else if wk < 0.0 {
                acc.add(policy, wk, &s.low, &s.up);
            }
        }
        out.push(acc.finish(policy, &mags)?);
    }
    Ok(out)
}

/// Directed accumulators for one output neuron.
struct Accumulator {
    up_lo: Vec<f64>,
    up_hi: Vec<f64>,
    low_lo: Vec<f64>,
    low_hi: Vec<f64>,
    up_const: f64,
    low_const: f64,
}

impl Accumulator {
    fn new(d: usize) -> Self {
        Accumulator {
            up_lo: vec![0.0; d],
            up_hi: vec![0.0; d],
            low_lo: vec![0.0; d],
            low_hi: vec![0.0; d],
            up_const: 0.0,
            low_const: 0.0,
        }
    }

    fn reset(&mut self, bias: f64) {
        for v in [&mut self.up_lo, &mut self.up_hi, &mut self.low_lo, &mut self.low_hi] {
            v.iter_mut().for_each(|c| *c = 0.0);
        }
        self.up_const = bias;
        self.low_const = bias;
    }

    /// Add `w * into_up` to the upper expression and `w * into_low` to the lower one.
    fn add(&mut self, p: RoundingPolicy, w: f64, into_up: &LinearExpr, into_low: &LinearExpr) {
        self.up_const = p.add_up(self.up_const, p.mul_up(w, into_up.constant));
        self.low_const = p.add_down(self.low_const, p.mul_down(w, into_low.constant));
        for (j, &c) in into_up.coeffs.iter().enumerate() {
            if c != 0.0 {
                self.up_lo[j] = p.add_down(self.up_lo[j], p.mul_down(w, c));
                self.up_hi[j] = p.add_up(self.up_hi[j], p.mul_up(w, c));
            }
        }
        for (j, &c) in into_low.coeffs.iter().enumerate() {
            if c != 0.0 {
                self.low_lo[j] = p.add_down(self.low_lo[j], p.mul_down(w, c));
                self.low_hi[j] = p.add_up(self.low_hi[j], p.mul_up(w, c));
            }
        }
    }

    fn finish(&self, p: RoundingPolicy, mags: &[f64]) -> Result<SymInterval> {
        let (up_coeffs, up_slack) = settle(p, &self.up_lo, &self.up_hi, mags);
        let (low_coeffs, low_slack) = settle(p, &self.low_lo, &self.low_hi, mags);
        let up = LinearExpr::new(up_coeffs, p.add_up(self.up_const, up_slack))?;
        let low = LinearExpr::new(low_coeffs, p.sub_down(self.low_const, low_slack))?;
        Ok(SymInterval { low, up })
    }
}

/// Midpoint coefficients plus the worst-case effect of their error over the box.
fn settle(p: RoundingPolicy, lo: &[f64], hi: &[f64], mags: &[f64]) -> (Vec<f64>, f64) {
    let mut slack = 0.0;
    let coeffs = lo
        .iter()
        .zip(hi)
        .zip(mags)
        .map(|((&l, &h), &m)| {
            if l == h {
                return l;
            }
            let c = (0.5 * l + 0.5 * h).clamp(l, h);
            let err = p.sub_up(h, c).max(p.sub_up(c, l));
            slack = p.add_up(slack, p.mul_up(err, m));
            c
        })
        .collect();
    (coeffs, slack)
}

/// Pass a symbolic interval through a ReLU over box `x`.
///
/// * upper bound of `up` is `<= 0`: the neuron is always off, both become 0.
/// * lower bound of `low` is `>= 0`: always on, bounds pass through.
/// * otherwise `low` becomes 0 and `up` is replaced by its concrete upper
///   bound unless `up` itself stays positive over the box.
pub fn relu_sym(
    s: &SymInterval,
    x: &IntervalBox,
    policy: RoundingPolicy,
) -> Result<(SymInterval, ReluState)> {
    let d = x.len();
    let up_hi = s.up.upper_bound(x, policy)?;
    if up_hi <= 0.0 {
        return Ok((SymInterval::exact(LinearExpr::zero(d)), ReluState::Zero));
    }
    let low_lo = s.low.lower_bound(x, policy)?;
    if low_lo >= 0.0 {
        return Ok((s.clone(), ReluState::Active));
    }
    let up_lo = s.up.lower_bound(x, policy)?;
    let up = if up_lo <= 0.0 {
        LinearExpr::constant(d, up_hi)
    } else {
        s.up.clone()
    };
    Ok((
        SymInterval {
            low: LinearExpr::zero(d),
            up,
        },
        ReluState::Unstable,
    ))
}
