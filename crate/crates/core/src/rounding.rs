//! Directed rounding of floating-point primitives.
//!
//! Every primitive computes the round-to-nearest result and then checks the
//! rounding error with an error-free transformation (two-sum for additions,
//! fused multiply-add for products). When the result was inexact it is
//! nudged by one ULP in the requested direction, otherwise it is returned
//! unchanged. The returned lower bound is therefore never above the exact
//! real result and the upper bound never below it, and exact inputs such as
//! small integers stay exact.
//!
//! In [`Precision::Bits32`] mode the 64-bit directed result is additionally
//! rounded outward onto the `f32` grid.

use serde::{Deserialize, Serialize};

/// How primitive results are rounded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoundingMode {
    /// Nudge inexact results one ULP outward.
    #[default]
    UlpNudge,
    /// Plain round-to-nearest. Not sound; useful only for comparisons.
    None,
}

/// Floating-point grid that interval bounds live on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    Bits32,
    #[default]
    Bits64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundingPolicy {
    pub mode: RoundingMode,
    pub precision: Precision,
}

// Below this magnitude the fma residual of a product may itself underflow,
// so the error-free check is not trustworthy and we always nudge.
const TINY: f64 = 1.0e-290;

impl RoundingPolicy {
    pub const OUTWARD_64: RoundingPolicy = RoundingPolicy {
        mode: RoundingMode::UlpNudge,
        precision: Precision::Bits64,
    };

    pub const OUTWARD_32: RoundingPolicy = RoundingPolicy {
        mode: RoundingMode::UlpNudge,
        precision: Precision::Bits32,
    };

    pub const fn new(mode: RoundingMode, precision: Precision) -> Self {
        RoundingPolicy { mode, precision }
    }

    #[inline]
    fn nudges(self) -> bool {
        self.mode == RoundingMode::UlpNudge
    }

    /// Round a 64-bit value down onto the working grid.
    #[inline]
    pub fn narrow_down(self, x: f64) -> f64 {
        match self.precision {
            Precision::Bits64 => x,
            Precision::Bits32 => {
                let y = x as f32;
                if self.nudges() && (y as f64) > x {
                    y.next_down() as f64
                } else {
                    y as f64
                }
            }
        }
    }

    /// Round a 64-bit value up onto the working grid.
    #[inline]
    pub fn narrow_up(self, x: f64) -> f64 {
        match self.precision {
            Precision::Bits64 => x,
            Precision::Bits32 => {
                let y = x as f32;
                if self.nudges() && (y as f64) < x {
                    y.next_up() as f64
                } else {
                    y as f64
                }
            }
        }
    }

    #[inline]
    pub fn add_down(self, a: f64, b: f64) -> f64 {
        let s = a + b;
        if !self.nudges() || !s.is_finite() {
            return self.narrow_down(s);
        }
        let s = if two_sum_residual(a, b, s) < 0.0 {
            s.next_down()
        } else {
            s
        };
        self.narrow_down(s)
    }

    #[inline]
    pub fn add_up(self, a: f64, b: f64) -> f64 {
        let s = a + b;
        if !self.nudges() || !s.is_finite() {
            return self.narrow_up(s);
        }
        let s = if two_sum_residual(a, b, s) > 0.0 {
            s.next_up()
        } else {
            s
        };
        self.narrow_up(s)
    }

    #[inline]
    pub fn sub_down(self, a: f64, b: f64) -> f64 {
        self.add_down(a, -b)
    }

    #[inline]
    pub fn sub_up(self, a: f64, b: f64) -> f64 {
        self.add_up(a, -b)
    }

    #[inline]
    pub fn mul_down(self, a: f64, b: f64) -> f64 {
        if a == 0.0 || b == 0.0 {
            return 0.0;
        }
        let p = a * b;
        if !self.nudges() || !p.is_finite() {
            return self.narrow_down(p);
        }
        let p = if p.abs() < TINY || a.mul_add(b, -p) < 0.0 {
            p.next_down()
        } else {
            p
        };
        self.narrow_down(p)
    }

    #[inline]
    pub fn mul_up(self, a: f64, b: f64) -> f64 {
        if a == 0.0 || b == 0.0 {
            return 0.0;
        }
        let p = a * b;
        if !self.nudges() || !p.is_finite() {
            return self.narrow_up(p);
        }
        let p = if p.abs() < TINY || a.mul_add(b, -p) > 0.0 {
            p.next_up()
        } else {
            p
        };
        self.narrow_up(p)
    }

    #[inline]
    pub fn div_down(self, a: f64, b: f64) -> f64 {
        if a == 0.0 && b != 0.0 {
            return 0.0;
        }
        let q = a / b;
        if !self.nudges() || !q.is_finite() {
            return self.narrow_down(q);
        }
        // a = q*b + r exactly; sign of r/b tells which side of q the quotient lies.
        let r = -q.mul_add(b, -a);
        let below = (r < 0.0) != (b < 0.0) && r != 0.0;
        let q = if q.abs() < TINY || below {
            q.next_down()
        } else {
            q
        };
        self.narrow_down(q)
    }

    #[inline]
    pub fn div_up(self, a: f64, b: f64) -> f64 {
        if a == 0.0 && b != 0.0 {
            return 0.0;
        }
        let q = a / b;
        if !self.nudges() || !q.is_finite() {
            return self.narrow_up(q);
        }
        let r = -q.mul_add(b, -a);
        let above = (r > 0.0) == (b > 0.0) && r != 0.0;
        let q = if q.abs() < TINY || above {
            q.next_up()
        } else {
            q
        };
        self.narrow_up(q)
    }
}

#[inline]
fn two_sum_residual(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}
