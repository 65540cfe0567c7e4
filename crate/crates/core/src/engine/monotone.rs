//! Endpoint substitution for inputs the violation condition is monotone in.
//!
//! The violation condition is the negation of the constraint pushed down to
//! literals `a.y <= c` or `a.y > c`. Along input `j` a literal is preserved
//! when moving up (or down) if the interval gradient of `a.y` has the right
//! sign over the box. A direction that preserves every literal preserves the
//! whole condition, so a violation exists in the box iff one exists on the
//! corresponding face. Under an `Or` each branch may instead pick its own
//! face, which leaves both faces to check.

use crate::error::Result;
use crate::gradient::backward_gradient_of;
use crate::interval::Interval;
use crate::network::Network;
use crate::propagation::ForwardResult;
use crate::property::{assess, Atom, Constraint, Truth};
use crate::rounding::RoundingPolicy;

/// Which faces of an input dimension still have to be checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Faces {
    Low,
    High,
    Both,
}

// bit set of directions that preserve a condition
const UP: u8 = 1;
const DOWN: u8 = 2;
const ANY: u8 = UP | DOWN;

enum Cond {
    /// index into the literal table; `holds` says which side is the condition
    Lit { id: usize, holds: bool },
    And(Vec<Cond>),
    Or(Vec<Cond>),
}

struct Builder {
    m: usize,
    atoms: Vec<Atom>,
}

impl Builder {
    fn lit(&mut self, a: Atom, holds: bool) -> Option<Cond> {
        a.linear_form(self.m)?;
        let id = self.atoms.iter().position(|x| *x == a).unwrap_or_else(|| {
            self.atoms.push(a);
            self.atoms.len() - 1
        });
        Some(Cond::Lit { id, holds })
    }

    /// Condition under which `c` has the truth value `want`, in negation
    /// normal form.
    fn nnf(&mut self, c: &Constraint, want: bool) -> Option<Cond> {
        Some(match c {
            Constraint::Atom(a) => self.lit(*a, want)?,
            Constraint::And(cs) | Constraint::Or(cs) => {
                let kids = cs.iter().map(|c| self.nnf(c, want)).collect::<Option<Vec<_>>>()?;
                if matches!(c, Constraint::And(_)) == want {
                    Cond::And(kids)
                } else {
                    Cond::Or(kids)
                }
            }
            Constraint::Not(c) => self.nnf(c, !want)?,
        })
    }
}

struct Literal {
    truth: Truth,
    /// gradient of `a.y` per input
    grad: Vec<Interval>,
}

fn dirs(c: &Cond, lits: &[Literal], j: usize) -> u8 {
    match c {
        Cond::Lit { id, holds } => {
            let l = &lits[*id];
            if l.truth != Truth::Unknown {
                return ANY;
            }
            let g = l.grad[j];
            let (inc, dec) = (g.lo() >= 0.0, g.hi() <= 0.0);
            // `a.y > c` survives increases of a.y; `a.y <= c` survives decreases
            let (up, down) = if *holds { (dec, inc) } else { (inc, dec) };
            (if up { UP } else { 0 }) | (if down { DOWN } else { 0 })
        }
        Cond::And(cs) | Cond::Or(cs) => cs.iter().fold(ANY, |acc, c| acc & dirs(c, lits, j)),
    }
}

fn faces(c: &Cond, lits: &[Literal], j: usize) -> Option<Faces> {
    let d = dirs(c, lits, j);
    if d & UP != 0 {
        return Some(Faces::High);
    }
    if d & DOWN != 0 {
        return Some(Faces::Low);
    }
    let Cond::Or(cs) = c else {
        return None;
    };
    let mut acc: Option<Faces> = None;
    for c in cs {
        let f = faces(c, lits, j)?;
        acc = Some(match acc {
            None => f,
            Some(a) if a == f => a,
            Some(_) => Faces::Both,
        });
    }
    acc
}

/// For each input dimension, the faces that must be kept, or `None` when
/// no reduction applies. Dimensions of zero width are never reduced.
pub(crate) fn reducible_faces(
    net: &Network,
    fr: &ForwardResult,
    constraint: &Constraint,
    policy: RoundingPolicy,
) -> Result<Vec<Option<Faces>>> {
    let d = fr.input_box.len();
    let Some(masks) = &fr.masks else {
        return Ok(vec![None; d]);
    };
    let mut b = Builder {
        m: net.output_dim(),
        atoms: Vec::new(),
    };
    let Some(violation) = b.nnf(constraint, false) else {
        return Ok(vec![None; d]);
    };
    if b.atoms.is_empty() {
        return Ok(vec![None; d]);
    }
    let seeds: Vec<Vec<f64>> = b
        .atoms
        .iter()
        .map(|a| a.linear_form(b.m).expect("linear atom").0)
        .collect();
    let jac = backward_gradient_of(net, masks, &seeds, policy)?;
    let lits: Vec<Literal> = b
        .atoms
        .iter()
        .enumerate()
        .map(|(k, a)| Literal {
            truth: assess(fr, &Constraint::Atom(*a), policy),
            grad: jac.row(k).to_vec(),
        })
        .collect();
    Ok((0..d)
        .map(|j| {
            if fr.input_box.get(j).is_point() {
                None
            } else {
                faces(&violation, &lits, j)
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::IntervalBox;
    use crate::network::{Activation, Layer};
    use crate::propagation::symbolic_forward;
    use ndarray::array;

    const P: RoundingPolicy = RoundingPolicy::OUTWARD_64;

    fn two_neuron_net() -> Network {
        Network::new(
            vec![
                Layer::new(array![[2.0, 3.0], [1.0, 1.0]], array![0.0, 0.0], Activation::Relu).unwrap(),
                Layer::new(array![[1.0, -1.0]], array![0.0], Activation::Identity).unwrap(),
            ],
            None,
        )
        .unwrap()
    }

    fn faces_for(c: Constraint) -> Vec<Option<Faces>> {
        let net = two_neuron_net();
        let b = IntervalBox::from_bounds(&[(4.0, 6.0), (1.0, 5.0)]).unwrap();
        let fr = symbolic_forward(&net, &b, P).unwrap();
        reducible_faces(&net, &fr, &c, P).unwrap()
    }

    #[test]
    fn upper_bound_keeps_high_faces() {
        // out = x + 2y, increasing in both; violations of y0 <= 15 sit high
        let f = faces_for(Constraint::Atom(Atom::OutLe(0, 15.0)));
        assert_eq!(f, vec![Some(Faces::High), Some(Faces::High)]);
    }

    #[test]
    fn lower_bound_keeps_low_faces() {
        let f = faces_for(Constraint::Atom(Atom::OutGe(0, 8.0)));
        assert_eq!(f, vec![Some(Faces::Low), Some(Faces::Low)]);
    }

    #[test]
    fn band_needs_both_faces() {
        // violation is y0 < 8 or y0 > 15
        let c = Constraint::And(vec![
            Constraint::Atom(Atom::OutGe(0, 8.0)),
            Constraint::Atom(Atom::OutLe(0, 15.0)),
        ]);
        assert_eq!(faces_for(c), vec![Some(Faces::Both), Some(Faces::Both)]);
    }

    #[test]
    fn conflicting_conjunction_is_not_reduced() {
        // violation is 8 <= y0 <= 15: no face is enough
        let c = Constraint::Or(vec![
            Constraint::Atom(Atom::OutLe(0, 8.0)),
            Constraint::Atom(Atom::OutGe(0, 15.0)),
        ]);
        assert_eq!(faces_for(c), vec![None, None]);
    }

    #[test]
    fn decided_literals_do_not_block() {
        // y0 >= 0 is proven over the box, so only y0 <= 15 matters
        let c = Constraint::And(vec![
            Constraint::Atom(Atom::OutGe(0, 0.0)),
            Constraint::Atom(Atom::OutLe(0, 15.0)),
        ]);
        assert_eq!(faces_for(c), vec![Some(Faces::High), Some(Faces::High)]);
    }
}
