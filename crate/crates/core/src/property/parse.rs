//! Text format for properties.
//!
//! ```text
//! # comment
//! name: phi1
//! units: raw            # or `normalized`
//! outputs: 5
//! domain:               # one `lo hi` line per input
//! 0 60760
//! ...
//! region:               # repeat for unions; `*` takes the domain value
//! 55947.691 *
//! *
//! 0.2                   # a single number is a point
//! ...
//! constraint:
//! and(le 0 1500, notmin 0)
//! ```

use super::{Atom, Constraint, InputSpec, Property, Units};
use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalBox};

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Domain,
    Region,
    Constraint,
}

#[derive(Clone, Copy)]
enum Bound {
    Value(f64),
    Domain,
}

/// Parse a property file; the returned constraint is desugared.
pub fn parse_property(text: &str) -> Result<Property> {
    let mut name = None;
    let mut units = Units::Raw;
    let mut outputs: Option<usize> = None;
    let mut domain: Vec<(f64, f64)> = Vec::new();
    let mut regions: Vec<(usize, Vec<(Bound, Bound)>)> = Vec::new();
    let mut constraint_lines: Vec<(usize, String)> = Vec::new();
    let mut constraint_line = 0;
    let mut section = Section::None;

    for (idx, raw) in text.lines().enumerate() {
        let n = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some((key, value)) = header(line) {
            let value = value.trim();
            section = Section::None;
            match key {
                "name" => name = Some(value.to_string()),
                "units" => {
                    units = match value {
                        "raw" => Units::Raw,
                        "normalized" => Units::Normalized,
                        other => return Err(Error::parse(n, format!("unknown units `{other}`"))),
                    }
                }
                "outputs" => {
                    outputs = Some(
                        value
                            .parse()
                            .map_err(|_| Error::parse(n, format!("bad output count `{value}`")))?,
                    )
                }
                "domain" => {
                    if !domain.is_empty() {
                        return Err(Error::parse(n, "domain given twice"));
                    }
                    section = Section::Domain;
                }
                "region" => {
                    regions.push((n, Vec::new()));
                    section = Section::Region;
                }
                "constraint" => {
                    if constraint_line != 0 {
                        return Err(Error::parse(n, "constraint given twice"));
                    }
                    constraint_line = n;
                    section = Section::Constraint;
                }
                other => return Err(Error::parse(n, format!("unknown section `{other}`"))),
            }
            if !value.is_empty() && matches!(section, Section::Domain | Section::Region | Section::Constraint) {
                if section == Section::Constraint {
                    constraint_lines.push((n, value.to_string()));
                } else {
                    return Err(Error::parse(n, "section header must be on its own line"));
                }
            }
            continue;
        }
        match section {
            Section::None => return Err(Error::parse(n, format!("unexpected line `{line}`"))),
            Section::Domain => {
                let (lo, hi) = bound_pair(n, line)?;
                match (lo, hi) {
                    (Bound::Value(lo), Bound::Value(hi)) if lo <= hi => domain.push((lo, hi)),
                    (Bound::Value(_), Bound::Value(_)) => return Err(Error::EmptyRegion),
                    _ => return Err(Error::parse(n, "domain bounds must be numbers")),
                }
            }
            Section::Region => {
                let pair = bound_pair(n, line)?;
                regions.last_mut().expect("region section open").1.push(pair);
            }
            Section::Constraint => {
                constraint_lines.push((n, line.to_string()));
            }
        }
    }

    let outputs = outputs.ok_or_else(|| Error::parse(0, "missing `outputs:`"))?;
    if regions.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let d = if domain.is_empty() {
        regions[0].1.len()
    } else {
        domain.len()
    };
    let mut boxes = Vec::with_capacity(regions.len());
    for (n, lines) in &regions {
        if lines.len() != d {
            return Err(Error::parse(
                *n,
                format!("region has {} lines, expected {d}", lines.len()),
            ));
        }
        let mut dims = Vec::with_capacity(d);
        for (j, &(lo, hi)) in lines.iter().enumerate() {
            let resolve = |b: Bound, pick_hi: bool| -> Result<f64> {
                match b {
                    Bound::Value(v) => Ok(v),
                    Bound::Domain => domain
                        .get(j)
                        .map(|&(l, h)| if pick_hi { h } else { l })
                        .ok_or_else(|| Error::parse(*n, "`*` needs a domain section")),
                }
            };
            let lo = resolve(lo, false)?;
            let hi = resolve(hi, true)?;
            if lo > hi {
                return Err(Error::EmptyRegion);
            }
            dims.push(Interval::new(lo, hi).map_err(|e| Error::parse(*n, e.to_string()))?);
        }
        boxes.push(IntervalBox::new(dims));
    }

    if constraint_line == 0 {
        return Err(Error::parse(0, "missing `constraint:`"));
    }
    let constraint = parse_lines(&constraint_lines, constraint_line)?;

    let mut prop = Property::new(
        InputSpec {
            regions: boxes,
            units,
        },
        constraint,
        outputs,
    )?;
    prop.name = name;
    if !domain.is_empty() {
        prop.domain = Some(IntervalBox::from_bounds(&domain)?);
    }
    Ok(prop)
}

fn header(line: &str) -> Option<(&str, &str)> {
    let (key, rest) = line.split_once(':')?;
    let key = key.trim();
    if !key.is_empty() && key.chars().all(|c| c.is_ascii_alphabetic() || c == '_') {
        Some((key, rest))
    } else {
        None
    }
}

fn bound(n: usize, t: &str) -> Result<Bound> {
    if t == "*" {
        return Ok(Bound::Domain);
    }
    let v: f64 = t
        .parse()
        .map_err(|_| Error::parse(n, format!("bad number `{t}`")))?;
    if !v.is_finite() {
        return Err(Error::parse(n, format!("bound `{t}` is not finite")));
    }
    Ok(Bound::Value(v))
}

fn bound_pair(n: usize, line: &str) -> Result<(Bound, Bound)> {
    let toks: Vec<&str> = line
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .collect();
    match toks[..] {
        [one] => {
            let b = bound(n, one)?;
            Ok((b, b))
        }
        [lo, hi] => Ok((bound(n, lo)?, bound(n, hi)?)),
        _ => Err(Error::parse(n, "expected `lo hi`, a single value, or `*`")),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Word(String),
    Open,
    Close,
    Comma,
}

fn tokenize(lines: &[(usize, String)]) -> Vec<(usize, Tok)> {
    let mut out = Vec::new();
    for (n, line) in lines {
        let n = *n;
        let mut word = String::new();
        for c in line.chars() {
            let t = match c {
                '(' => Some(Tok::Open),
                ')' => Some(Tok::Close),
                ',' => Some(Tok::Comma),
                c if c.is_whitespace() => None,
                c => {
                    word.push(c);
                    continue;
                }
            };
            if !word.is_empty() {
                out.push((n, Tok::Word(std::mem::take(&mut word))));
            }
            if let Some(t) = t {
                out.push((n, t));
            }
        }
        if !word.is_empty() {
            out.push((n, Tok::Word(word)));
        }
    }
    out
}

struct ExprParser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    last_line: usize,
}

impl ExprParser {
    fn line(&self) -> usize {
        self.toks.get(self.pos).map_or(self.last_line, |t| t.0)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.1.clone());
        self.pos += 1;
        t
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line(), msg)
    }

    fn word(&mut self, what: &str) -> Result<String> {
        match self.next() {
            Some(Tok::Word(w)) => Ok(w),
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn index(&mut self) -> Result<usize> {
        let w = self.word("an output index")?;
        w.parse().map_err(|_| self.err(format!("bad output index `{w}`")))
    }

    fn number(&mut self) -> Result<f64> {
        let w = self.word("a number")?;
        match w.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(self.err(format!("bad number `{w}`"))),
        }
    }

    fn expr(&mut self) -> Result<Constraint> {
        let head = self.word("a constraint")?;
        let c = match head.as_str() {
            "and" | "or" | "not" => {
                if self.next() != Some(Tok::Open) {
                    return Err(self.err(format!("expected `(` after `{head}`")));
                }
                let mut args = Vec::new();
                loop {
                    match self.peek() {
                        Some(Tok::Close) => {
                            self.pos += 1;
                            break;
                        }
                        Some(Tok::Comma) => {
                            self.pos += 1;
                        }
                        Some(_) => args.push(self.expr()?),
                        None => return Err(self.err(format!("unclosed `{head}(`"))),
                    }
                }
                match head.as_str() {
                    "and" => Constraint::And(args),
                    "or" => Constraint::Or(args),
                    _ => {
                        if args.len() != 1 {
                            return Err(self.err("`not` takes exactly one argument"));
                        }
                        Constraint::Not(Box::new(args.pop().expect("one arg")))
                    }
                }
            }
            "le" => Constraint::Atom(Atom::OutLe(self.index()?, self.number()?)),
            "ge" => Constraint::Atom(Atom::OutGe(self.index()?, self.number()?)),
            "diffle" => {
                let i = self.index()?;
                let j = self.index()?;
                Constraint::Atom(Atom::DiffLe(i, j, self.number()?))
            }
            "ismin" => Constraint::Atom(Atom::IsMin(self.index()?)),
            "ismax" => Constraint::Atom(Atom::IsMax(self.index()?)),
            "notmin" => Constraint::Atom(Atom::NotMin(self.index()?)),
            "notmax" => Constraint::Atom(Atom::NotMax(self.index()?)),
            other => return Err(self.err(format!("unknown constraint `{other}`"))),
        };
        Ok(c)
    }
}

/// Parse a constraint expression on its own (not desugared).
pub fn parse_constraint(text: &str, first_line: usize) -> Result<Constraint> {
    let lines: Vec<(usize, String)> = text
        .lines()
        .enumerate()
        .map(|(k, l)| (first_line + k, l.split('#').next().unwrap_or("").to_string()))
        .collect();
    parse_lines(&lines, first_line)
}

fn parse_lines(lines: &[(usize, String)], header_line: usize) -> Result<Constraint> {
    let toks = tokenize(lines);
    let last_line = toks.last().map_or(header_line, |t| t.0);
    let mut p = ExprParser {
        toks,
        pos: 0,
        last_line,
    };
    let c = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.err("trailing tokens after constraint"));
    }
    Ok(c)
}
