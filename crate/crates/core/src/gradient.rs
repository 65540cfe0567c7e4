//! Interval Jacobians, smear-based split selection and monotonicity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalBox};
use crate::network::Network;
use crate::propagation::ReluMaskMatrix;
use crate::rounding::RoundingPolicy;

/// Bounds on `d output_i / d input_j` over a box, row-major `rows x cols`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalJacobian {
    rows: usize,
    cols: usize,
    entries: Vec<Interval>,
}

impl IntervalJacobian {
    pub fn new(rows: usize, cols: usize, entries: Vec<Interval>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::dims("jacobian entries", rows * cols, entries.len()));
        }
        Ok(IntervalJacobian { rows, cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Interval {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Interval] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Keep only the listed rows.
    pub fn select_rows(&self, rows: &[usize]) -> IntervalJacobian {
        let entries = rows.iter().flat_map(|&i| self.row(i).iter().copied()).collect();
        IntervalJacobian {
            rows: rows.len(),
            cols: self.cols,
            entries,
        }
    }

    /// Convert derivatives with respect to normalized inputs into
    /// derivatives with respect to raw inputs (`d/dx_j = d/du_j / range_j`).
    pub fn to_raw_inputs(&self, net: &Network, policy: RoundingPolicy) -> Result<IntervalJacobian> {
        let Some(norm) = net.normalization() else {
            return Ok(self.clone());
        };
        if norm.range.len() != self.cols {
            return Err(Error::dims("jacobian columns", norm.range.len(), self.cols));
        }
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let r = norm.range[k % self.cols];
                Interval::new(policy.div_down(g.lo(), r), policy.div_up(g.hi(), r))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntervalJacobian {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }
}

/// Interval Jacobian of all outputs with respect to the network inputs.
///
/// Starts from the output layer weights and walks backwards: each hidden
/// layer multiplies the running gradient elementwise by the ReLU gradient
/// intervals (`[0,0]`, `[1,1]` or `[0,1]`) and then by that layer's weights.
pub fn backward_gradient(
    net: &Network,
    masks: &ReluMaskMatrix,
    policy: RoundingPolicy,
) -> Result<IntervalJacobian> {
    let m = net.output_dim();
    let seeds: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let mut r = vec![0.0; m];
            r[i] = 1.0;
            r
        })
        .collect();
    backward_gradient_of(net, masks, &seeds, policy)
}

/// Interval gradient of linear functionals `sum_i seed[i] * output_i`.
pub fn backward_gradient_of(
    net: &Network,
    masks: &ReluMaskMatrix,
    seeds: &[Vec<f64>],
    policy: RoundingPolicy,
) -> Result<IntervalJacobian> {
    if !masks.matches(net) {
        return Err(Error::ShapeMismatch("relu masks do not match network".into()));
    }
    let layers = net.layers();
    let last = &layers[layers.len() - 1];
    let m = net.output_dim();
    if let Some(bad) = seeds.iter().find(|s| s.len() != m) {
        return Err(Error::dims("gradient seed", m, bad.len()));
    }

    // g = seeds * W_last, one row per seed
    let mut cols = last.in_size();
    let mut g: Vec<Interval> = Vec::with_capacity(seeds.len() * cols);
    for s in seeds {
        for j in 0..cols {
            let (mut lo, mut hi) = (0.0, 0.0);
            for (i, &a) in s.iter().enumerate() {
                let w = last.weights()[[i, j]];
                lo = policy.add_down(lo, policy.mul_down(a, w));
                hi = policy.add_up(hi, policy.mul_up(a, w));
            }
            g.push(checked(lo, hi)?);
        }
    }

    for (layer, mask) in layers[..layers.len() - 1].iter().zip(masks.layers()).rev() {
        // hadamard with the relu gradient intervals
        for row in g.chunks_mut(cols) {
            for (v, state) in row.iter_mut().zip(mask) {
                *v = policy.mul(*v, state.gradient())?;
            }
        }
        // (rows x out) * (out x in)
        let w = layer.weights();
        let next_cols = layer.in_size();
        let mut next = Vec::with_capacity(seeds.len() * next_cols);
        for row in g.chunks(cols) {
            for j in 0..next_cols {
                let (mut lo, mut hi) = (0.0, 0.0);
                for (k, gk) in row.iter().enumerate() {
                    let wkj = w[[k, j]];
                    if wkj == 0.0 || (gk.lo() == 0.0 && gk.hi() == 0.0) {
                        continue;
                    }
                    let (plo, phi) = if wkj > 0.0 {
                        (policy.mul_down(gk.lo(), wkj), policy.mul_up(gk.hi(), wkj))
                    } else {
                        (policy.mul_down(gk.hi(), wkj), policy.mul_up(gk.lo(), wkj))
                    };
                    lo = policy.add_down(lo, plo);
                    hi = policy.add_up(hi, phi);
                }
                next.push(checked(lo, hi)?);
            }
        }
        g = next;
        cols = next_cols;
    }
    IntervalJacobian::new(seeds.len(), cols, g)
}

fn checked(lo: f64, hi: f64) -> Result<Interval> {
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::IntervalOverflow);
    }
    Interval::new(lo, hi)
}

/// Pick the input with the largest smear `max_i |J_ij| * width(x_j)`.
///
/// Only dimensions wider than `precision` are candidates; ties go to the
/// lowest index. `|J_ij|` is `max(|lo|, |hi|)`.
pub fn smear_split_choice(j: &IntervalJacobian, x: &IntervalBox, precision: f64) -> Result<usize> {
    if j.cols() != x.len() {
        return Err(Error::dims("smear box", j.cols(), x.len()));
    }
    let mut best: Option<(f64, usize)> = None;
    for (col, d) in x.dims().iter().enumerate() {
        let w = d.width();
        if w <= precision {
            continue;
        }
        let g = (0..j.rows()).map(|i| j.get(i, col).mag()).fold(0.0, f64::max);
        let smear = g * w;
        if best.is_none_or(|(s, _)| smear > s) {
            best = Some((smear, col));
        }
    }
    best.map(|(_, col)| col).ok_or(Error::Exhausted)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    Unknown,
}

/// Per-input monotonicity over the listed outputs: increasing when every
/// listed row has a strictly positive lower bound in that column,
/// decreasing when every upper bound is strictly negative.
pub fn monotonic_features(j: &IntervalJacobian, outputs: &[usize]) -> Vec<Monotonicity> {
    (0..j.cols())
        .map(|col| {
            if outputs.is_empty() {
                return Monotonicity::Unknown;
            }
            if outputs.iter().all(|&i| j.get(i, col).lo() > 0.0) {
                Monotonicity::Increasing
            } else if outputs.iter().all(|&i| j.get(i, col).hi() < 0.0) {
                Monotonicity::Decreasing
            } else {
                Monotonicity::Unknown
            }
        })
        .collect()
}
