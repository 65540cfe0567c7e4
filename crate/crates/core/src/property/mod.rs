//! Security properties: an input region plus a constraint on the outputs.

mod parse;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use parse::{parse_constraint, parse_property};

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalBox};
use crate::network::Network;
use crate::propagation::ForwardResult;
use crate::rounding::RoundingPolicy;

/// Primitive output comparisons. Indices are 0-based output positions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Atom {
    /// `y_i <= c`
    OutLe(usize, f64),
    /// `y_i >= c`
    OutGe(usize, f64),
    /// `y_i - y_j <= c`
    DiffLe(usize, usize, f64),
    /// `y_i <= y_j` for every `j`
    IsMin(usize),
    /// `y_i >= y_j` for every `j`
    IsMax(usize),
    /// some `y_j <= y_i`, `j != i`
    NotMin(usize),
    /// some `y_j >= y_i`, `j != i`
    NotMax(usize),
}

impl Atom {
    fn indices(&self) -> Vec<usize> {
        match *self {
            Atom::OutLe(i, _) | Atom::OutGe(i, _) => vec![i],
            Atom::DiffLe(i, j, _) => vec![i, j],
            Atom::IsMin(i) | Atom::IsMax(i) | Atom::NotMin(i) | Atom::NotMax(i) => vec![i],
        }
    }

    /// The atom as `sum_k a_k y_k <= c`, for the linear atoms.
    pub fn linear_form(&self, outputs: usize) -> Option<(Vec<f64>, f64)> {
        let mut a = vec![0.0; outputs];
        match *self {
            Atom::OutLe(i, c) => {
                a[i] = 1.0;
                Some((a, c))
            }
            Atom::OutGe(i, c) => {
                a[i] = -1.0;
                Some((a, -c))
            }
            Atom::DiffLe(i, j, c) => {
                a[i] += 1.0;
                a[j] -= 1.0;
                Some((a, c))
            }
            _ => None,
        }
    }
}

/// Boolean combination of atoms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Constraint {
    Atom(Atom),
    And(Vec<Constraint>),
    Or(Vec<Constraint>),
    Not(Box<Constraint>),
}

impl Constraint {
    pub fn atom(a: Atom) -> Self {
        Constraint::Atom(a)
    }

    /// Rewrite the min/max atoms into pairwise differences. Ties count in
    /// favour of the atom: `IsMin(i)` holds when `y_i` equals the minimum.
    pub fn desugar(&self, outputs: usize) -> Constraint {
        let others = |i: usize| (0..outputs).filter(move |&j| j != i);
        match self {
            Constraint::Atom(a) => match *a {
                Atom::IsMin(i) => Constraint::And(
                    others(i).map(|j| Constraint::Atom(Atom::DiffLe(i, j, 0.0))).collect(),
                ),
                Atom::IsMax(i) => Constraint::And(
                    others(i).map(|j| Constraint::Atom(Atom::DiffLe(j, i, 0.0))).collect(),
                ),
                Atom::NotMin(i) => Constraint::Or(
                    others(i).map(|j| Constraint::Atom(Atom::DiffLe(j, i, 0.0))).collect(),
                ),
                Atom::NotMax(i) => Constraint::Or(
                    others(i).map(|j| Constraint::Atom(Atom::DiffLe(i, j, 0.0))).collect(),
                ),
                other => Constraint::Atom(other),
            },
            Constraint::And(cs) => Constraint::And(cs.iter().map(|c| c.desugar(outputs)).collect()),
            Constraint::Or(cs) => Constraint::Or(cs.iter().map(|c| c.desugar(outputs)).collect()),
            Constraint::Not(c) => Constraint::Not(Box::new(c.desugar(outputs))),
        }
    }

    pub fn validate(&self, outputs: usize) -> Result<()> {
        self.walk_atoms(&mut |a| {
            for i in a.indices() {
                if i >= outputs {
                    return Err(Error::IndexOutOfRange { index: i, outputs });
                }
            }
            Ok(())
        })
    }

    /// Sorted distinct output indices mentioned anywhere in the tree.
    pub fn referenced_outputs(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let _ = self.walk_atoms(&mut |a| {
            out.extend(a.indices());
            Ok(())
        });
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        let _ = self.walk_atoms(&mut |a| {
            out.push(*a);
            Ok(())
        });
        out
    }

    fn walk_atoms(&self, f: &mut impl FnMut(&Atom) -> Result<()>) -> Result<()> {
        match self {
            Constraint::Atom(a) => f(a),
            Constraint::And(cs) | Constraint::Or(cs) => cs.iter().try_for_each(|c| c.walk_atoms(f)),
            Constraint::Not(c) => c.walk_atoms(f),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::OutLe(i, c) => write!(f, "le {i} {c}"),
            Atom::OutGe(i, c) => write!(f, "ge {i} {c}"),
            Atom::DiffLe(i, j, c) => write!(f, "diffle {i} {j} {c}"),
            Atom::IsMin(i) => write!(f, "ismin {i}"),
            Atom::IsMax(i) => write!(f, "ismax {i}"),
            Atom::NotMin(i) => write!(f, "notmin {i}"),
            Atom::NotMax(i) => write!(f, "notmax {i}"),
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, name: &str, cs: &[Constraint]| {
            write!(f, "{name}(")?;
            for (k, c) in cs.iter().enumerate() {
                if k > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, ")")
        };
        match self {
            Constraint::Atom(a) => write!(f, "{a}"),
            Constraint::And(cs) => list(f, "and", cs),
            Constraint::Or(cs) => list(f, "or", cs),
            Constraint::Not(c) => write!(f, "not({c})"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Units {
    /// Region bounds are raw physical values; the network normalizes them.
    #[default]
    Raw,
    /// Region bounds are already in the network's normalized coordinates.
    Normalized,
}

/// Union of input boxes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputSpec {
    pub regions: Vec<IntervalBox>,
    pub units: Units,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Property {
    pub name: Option<String>,
    pub outputs: usize,
    pub domain: Option<IntervalBox>,
    pub input: InputSpec,
    /// Desugared output constraint.
    pub constraint: Constraint,
}

impl Property {
    pub fn new(input: InputSpec, constraint: Constraint, outputs: usize) -> Result<Self> {
        let d = input.regions.first().ok_or(Error::EmptyRegion)?.len();
        if let Some(r) = input.regions.iter().find(|r| r.len() != d) {
            return Err(Error::dims("region", d, r.len()));
        }
        constraint.validate(outputs)?;
        Ok(Property {
            name: None,
            outputs,
            domain: None,
            input,
            constraint: constraint.desugar(outputs),
        })
    }

    pub fn input_dim(&self) -> usize {
        self.input.regions[0].len()
    }

    /// Check the property against a network and return the network view it
    /// should be analysed with (normalization dropped for `Units::Normalized`).
    pub fn bind(&self, net: &Network) -> Result<Network> {
        if self.input_dim() != net.input_dim() {
            return Err(Error::dims("property inputs", net.input_dim(), self.input_dim()));
        }
        if self.outputs != net.output_dim() {
            return Err(Error::dims("property outputs", net.output_dim(), self.outputs));
        }
        Ok(match self.input.units {
            Units::Raw => net.clone(),
            Units::Normalized => net.without_normalization(),
        })
    }
}

/// An L-infinity ball around a seed input that must keep its label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobustnessSpec {
    pub seed: Vec<f64>,
    pub radius: f64,
    pub label: usize,
    /// Optional input domain the ball is clamped to.
    pub domain: Option<IntervalBox>,
}

/// Box `[seed - r, seed + r]` (clamped to the domain) with `IsMax(label)`.
pub fn robustness_to_property(r: &RobustnessSpec, outputs: usize) -> Result<Property> {
    if r.radius.is_nan() || r.radius < 0.0 {
        return Err(Error::NegativeRadius(r.radius));
    }
    let p = RoundingPolicy::OUTWARD_64;
    let mut dims = Vec::with_capacity(r.seed.len());
    for (j, &s) in r.seed.iter().enumerate() {
        let mut lo = p.sub_down(s, r.radius);
        let mut hi = p.add_up(s, r.radius);
        if let Some(dom) = &r.domain {
            if dom.len() != r.seed.len() {
                return Err(Error::dims("robustness domain", r.seed.len(), dom.len()));
            }
            lo = lo.max(dom.get(j).lo());
            hi = hi.min(dom.get(j).hi());
            if lo > hi {
                return Err(Error::EmptyRegion);
            }
        }
        dims.push(Interval::new(lo, hi)?);
    }
    if dims.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let input = InputSpec {
        regions: vec![IntervalBox::new(dims)],
        units: Units::Raw,
    };
    let mut prop = Property::new(input, Constraint::Atom(Atom::IsMax(r.label)), outputs)?;
    prop.domain = r.domain.clone();
    Ok(prop)
}

/// Three-valued truth of a constraint over a whole box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Truth {
    /// Holds at every point.
    True,
    /// Fails at every point.
    False,
    Unknown,
}

impl Truth {
    fn not(self) -> Truth {
        match self {
            Truth::True => Truth::False,
            Truth::False => Truth::True,
            Truth::Unknown => Truth::Unknown,
        }
    }

    fn compare(upper: f64, lower: f64, c: f64) -> Truth {
        if upper <= c {
            Truth::True
        } else if lower > c {
            Truth::False
        } else {
            Truth::Unknown
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TriState {
    Holds,
    MayViolate,
}

/// Bounds on `y_i - y_j` over the analysed box.
fn difference(fr: &ForwardResult, i: usize, j: usize, policy: RoundingPolicy) -> Result<Interval> {
    if i == j {
        return Ok(Interval::ZERO);
    }
    match &fr.out_sym {
        Some(sym) => {
            let x = &fr.input_box;
            let hi = sym[i].up.difference_bounds(&sym[j].low, x, policy)?.hi();
            let lo = sym[i].low.difference_bounds(&sym[j].up, x, policy)?.lo();
            // each side is sound on its own; intersect with the plain difference
            let plain = policy.sub(fr.out_bounds[i], fr.out_bounds[j])?;
            Interval::new(lo.max(plain.lo()), hi.min(plain.hi()))
        }
        None => policy.sub(fr.out_bounds[i], fr.out_bounds[j]),
    }
}

fn assess_atom(fr: &ForwardResult, a: &Atom, policy: RoundingPolicy) -> Truth {
    let m = fr.out_bounds.len();
    let outcome = match *a {
        Atom::OutLe(i, c) => {
            let b = fr.out_bounds[i];
            Ok(Truth::compare(b.hi(), b.lo(), c))
        }
        Atom::OutGe(i, c) => {
            let b = fr.out_bounds[i];
            // y >= c  <=>  -y <= -c
            Ok(Truth::compare(-b.lo(), -b.hi(), -c))
        }
        Atom::DiffLe(i, j, c) => {
            difference(fr, i, j, policy).map(|d| Truth::compare(d.hi(), d.lo(), c))
        }
        _ => Ok(assess_tree(fr, &Constraint::Atom(*a).desugar(m), policy)),
    };
    outcome.unwrap_or(Truth::Unknown)
}

fn assess_tree(fr: &ForwardResult, c: &Constraint, policy: RoundingPolicy) -> Truth {
    match c {
        Constraint::Atom(a) => assess_atom(fr, a, policy),
        Constraint::And(cs) => {
            let mut all_true = true;
            for c in cs {
                match assess_tree(fr, c, policy) {
                    Truth::False => return Truth::False,
                    Truth::Unknown => all_true = false,
                    Truth::True => {}
                }
            }
            if all_true {
                Truth::True
            } else {
                Truth::Unknown
            }
        }
        Constraint::Or(cs) => {
            let mut all_false = true;
            for c in cs {
                match assess_tree(fr, c, policy) {
                    Truth::True => return Truth::True,
                    Truth::Unknown => all_false = false,
                    Truth::False => {}
                }
            }
            if all_false {
                Truth::False
            } else {
                Truth::Unknown
            }
        }
        Constraint::Not(c) => assess_tree(fr, c, policy).not(),
    }
}

/// Three-valued evaluation of a constraint from sound output bounds.
pub fn assess(fr: &ForwardResult, c: &Constraint, policy: RoundingPolicy) -> Truth {
    assess_tree(fr, c, policy)
}

/// `Holds` only when the bounds prove the constraint on the whole box.
pub fn check_sound(fr: &ForwardResult, c: &Constraint, policy: RoundingPolicy) -> TriState {
    match assess(fr, c, policy) {
        Truth::True => TriState::Holds,
        _ => TriState::MayViolate,
    }
}

/// Exact evaluation of the constraint at a concrete output vector.
pub fn check_concrete(y: &[f64], c: &Constraint) -> bool {
    match c {
        Constraint::Atom(a) => match *a {
            Atom::OutLe(i, k) => y[i] <= k,
            Atom::OutGe(i, k) => y[i] >= k,
            Atom::DiffLe(i, j, k) => y[i] - y[j] <= k,
            sugar => check_concrete(y, &Constraint::Atom(sugar).desugar(y.len())),
        },
        Constraint::And(cs) => cs.iter().all(|c| check_concrete(y, c)),
        Constraint::Or(cs) => cs.iter().any(|c| check_concrete(y, c)),
        Constraint::Not(c) => !check_concrete(y, c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fr(bounds: &[(f64, f64)]) -> ForwardResult {
        ForwardResult {
            out_bounds: bounds.iter().map(|&(l, h)| Interval::new(l, h).unwrap()).collect(),
            out_sym: None,
            masks: None,
            input_box: IntervalBox::from_bounds(&[(0.0, 1.0)]).unwrap(),
        }
    }

    const P: RoundingPolicy = RoundingPolicy::OUTWARD_64;

    #[test]
    fn check_sound_examples() {
        let le20 = Constraint::Atom(Atom::OutLe(0, 20.0));
        assert_eq!(check_sound(&fr(&[(6.0, 16.0)]), &le20, P), TriState::Holds);
        assert_eq!(check_sound(&fr(&[(0.0, 22.0)]), &le20, P), TriState::MayViolate);
        let not_ge = Constraint::Not(Box::new(Constraint::Atom(Atom::OutGe(0, 23.0))));
        assert_eq!(check_sound(&fr(&[(0.0, 22.0)]), &not_ge, P), TriState::Holds);
    }

    #[test]
    fn assess_detects_certain_violation() {
        let le = Constraint::Atom(Atom::OutLe(0, 5.0));
        assert_eq!(assess(&fr(&[(6.0, 16.0)]), &le, P), Truth::False);
        assert_eq!(assess(&fr(&[(0.0, 16.0)]), &le, P), Truth::Unknown);
        assert_eq!(assess(&fr(&[(0.0, 16.0)]), &Constraint::And(vec![]), P), Truth::True);
        assert_eq!(assess(&fr(&[(0.0, 16.0)]), &Constraint::Or(vec![]), P), Truth::False);
    }

    #[test]
    fn check_concrete_examples() {
        let le20 = Constraint::Atom(Atom::OutLe(0, 20.0));
        let le15 = Constraint::Atom(Atom::OutLe(0, 15.0));
        assert!(check_concrete(&[16.0], &le20));
        assert!(!check_concrete(&[16.0], &le15));
        assert!(check_concrete(&[1.0, 2.0, 0.0], &Constraint::Atom(Atom::IsMin(2))));
        assert!(!check_concrete(&[1.0, 2.0, 0.0], &Constraint::Atom(Atom::IsMin(0))));
    }

    #[test]
    fn desugar_shapes() {
        let c = Constraint::Atom(Atom::IsMin(4)).desugar(5);
        match &c {
            Constraint::And(cs) => {
                assert_eq!(cs.len(), 4);
                assert!(cs.contains(&Constraint::Atom(Atom::DiffLe(4, 0, 0.0))));
            }
            other => panic!("unexpected {other:?}"),
        }
        let n = Constraint::Atom(Atom::NotMax(0)).desugar(3);
        assert_eq!(
            n,
            Constraint::Or(vec![
                Constraint::Atom(Atom::DiffLe(0, 1, 0.0)),
                Constraint::Atom(Atom::DiffLe(0, 2, 0.0)),
            ])
        );
    }

    #[test]
    fn ties_favour_min_and_max_atoms() {
        let y = [1.0, 1.0, 3.0];
        assert!(check_concrete(&y, &Constraint::Atom(Atom::IsMin(0))));
        assert!(check_concrete(&y, &Constraint::Atom(Atom::NotMin(0))));
        assert!(check_concrete(&[3.0, 3.0], &Constraint::Atom(Atom::IsMax(1))));
    }

    #[test]
    fn validate_rejects_large_index() {
        let c = Constraint::Atom(Atom::DiffLe(0, 7, 0.0));
        assert_eq!(c.validate(5), Err(Error::IndexOutOfRange { index: 7, outputs: 5 }));
    }

    #[test]
    fn robustness_examples() {
        let r = RobustnessSpec {
            seed: vec![0.5, 0.25],
            radius: 0.0,
            label: 1,
            domain: None,
        };
        let p = robustness_to_property(&r, 3).unwrap();
        assert_eq!(p.input.regions[0], IntervalBox::from_point(&[0.5, 0.25]).unwrap());
        assert_eq!(p.constraint, Constraint::Atom(Atom::IsMax(1)).desugar(3));

        let seed = vec![0.5; 784];
        let ball = robustness_to_property(
            &RobustnessSpec {
                seed,
                radius: 1.0,
                label: 3,
                domain: None,
            },
            10,
        )
        .unwrap();
        assert!(ball.input.regions[0].dims().iter().all(|d| d.width() == 2.0));

        let clamped = robustness_to_property(
            &RobustnessSpec {
                seed: vec![0.0, 0.5],
                radius: 0.25,
                label: 0,
                domain: Some(IntervalBox::from_bounds(&[(0.0, 1.0), (0.0, 1.0)]).unwrap()),
            },
            2,
        )
        .unwrap();
        assert_eq!(
            clamped.input.regions[0],
            IntervalBox::from_bounds(&[(0.0, 0.25), (0.25, 0.75)]).unwrap()
        );

        let neg = RobustnessSpec {
            seed: vec![0.0],
            radius: -1.0,
            label: 0,
            domain: None,
        };
        assert_eq!(robustness_to_property(&neg, 1), Err(Error::NegativeRadius(-1.0)));
    }
}
