//! Line-based UTF-8 text format.
//!
//! Three directives, one per line, `#` starts a comment:
//!
//! ```text
//! n 8
//! tour 1 2 3 4 5 6 7 8
//! e 1 5 1/1
//! ```
//!
//! A file holds an instance line followed by either one tour line or any
//! number of edge-weight lines. Serialization is bit-exact: canonical tour
//! order, edges sorted by `(i, j)`, fractions in lowest terms with a positive
//! denominator.

use std::collections::BTreeSet;

use num::BigInt;

use crate::base::{Edge, FractionalPoint, Instance, Tour};
use crate::error::{Error, Result};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Instance(Instance),
    Tour(Instance, Tour),
    Point(Instance, FractionalPoint),
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses `p/q` (q > 0) or a bare integer.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q <= BigInt::from(0) {
            return None;
        }
        Some(Rational::new(p, q))
    } else {
        let p: BigInt = s.parse().ok()?;
        Some(Rational::from_integer(p))
    }
}

/// `p/q` in lowest terms, or a bare integer when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_input(text: &str) -> Result<Parsed> {
    let mut inst: Option<Instance> = None;
    let mut tour: Option<Tour> = None;
    let mut edges: Vec<(Edge, Rational)> = Vec::new();
    let mut seen_edges: BTreeSet<Edge> = BTreeSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut toks = line.split_whitespace();
        let head = toks.next().unwrap();
        match head {
            "n" => {
                if inst.is_some() {
                    return Err(err(lineno, "duplicate n line"));
                }
                let n: usize = toks
                    .next()
                    .ok_or_else(|| err(lineno, "missing value after n"))?
                    .parse()
                    .map_err(|_| err(lineno, "n must be a positive integer"))?;
                if toks.next().is_some() {
                    return Err(err(lineno, "trailing tokens after n"));
                }
                inst = Some(Instance::new(n).map_err(|e| err(lineno, e.to_string()))?);
            }
            "tour" => {
                let inst = inst.ok_or_else(|| err(lineno, "tour line before n line"))?;
                if tour.is_some() {
                    return Err(err(lineno, "duplicate tour line"));
                }
                if !edges.is_empty() {
                    return Err(err(lineno, "file mixes tour and edge lines"));
                }
                let vs: Vec<usize> = toks
                    .map(|t| {
                        t.parse()
                            .map_err(|_| err(lineno, format!("bad vertex `{t}`")))
                    })
                    .collect::<Result<_>>()?;
                if vs.len() != inst.n() {
                    return Err(err(
                        lineno,
                        format!("tour lists {} vertices, n={}", vs.len(), inst.n()),
                    ));
                }
                tour = Some(Tour::new(vs).map_err(|e| err(lineno, e.to_string()))?);
            }
            "e" => {
                let inst = inst.ok_or_else(|| err(lineno, "edge line before n line"))?;
                if tour.is_some() {
                    return Err(err(lineno, "file mixes tour and edge lines"));
                }
                let i: usize = toks
                    .next()
                    .ok_or_else(|| err(lineno, "edge line needs `e i j p/q`"))?
                    .parse()
                    .map_err(|_| err(lineno, "bad endpoint"))?;
                let j: usize = toks
                    .next()
                    .ok_or_else(|| err(lineno, "edge line needs `e i j p/q`"))?
                    .parse()
                    .map_err(|_| err(lineno, "bad endpoint"))?;
                let w = toks
                    .next()
                    .ok_or_else(|| err(lineno, "edge line needs a weight"))?;
                if toks.next().is_some() {
                    return Err(err(lineno, "trailing tokens on edge line"));
                }
                let w = parse_rational(w).ok_or_else(|| {
                    err(lineno, format!("`{w}` is not a rational p/q with q > 0"))
                })?;
                let edge = Edge::new(i, j, inst.n()).map_err(|e| err(lineno, e.to_string()))?;
                if !seen_edges.insert(edge) {
                    return Err(err(lineno, format!("duplicate edge {edge}")));
                }
                edges.push((edge, w));
            }
            _ => return Err(err(lineno, format!("unknown directive `{head}`"))),
        }
    }

    let inst = inst.ok_or_else(|| err(1, "missing n line"))?;
    if let Some(t) = tour {
        return Ok(Parsed::Tour(inst, t));
    }
    if edges.is_empty() {
        return Ok(Parsed::Instance(inst));
    }
    let mut p = FractionalPoint::new(&inst);
    for (e, w) in edges {
        p.set(e, w);
    }
    Ok(Parsed::Point(inst, p))
}

pub fn serialize(value: &Parsed) -> String {
    match value {
        Parsed::Instance(inst) => format!("n {}\n", inst.n()),
        Parsed::Tour(inst, t) => format!("n {}\ntour {}\n", inst.n(), t),
        Parsed::Point(inst, p) => {
            let mut out = format!("n {}\n", inst.n());
            for (e, w) in p.iter() {
                let (a, b) = e.endpoints();
                out.push_str(&format!("e {} {} {}/{}\n", a, b, w.numer(), w.denom()));
            }
            out
        }
    }
}
