//! Shared vocabulary: instances, edges and their circulant lengths, canonical
//! tours, length profiles, and fractional edge-weight vectors.
//!
//! Vertices are labelled `1..=n` throughout, and modular arithmetic on labels
//! always maps back into `[1, n]` (never 0). Edge lengths live in `[1, d]`
//! with `d = n/2` rounded down; on a circulant instance the cost of an edge
//! depends only on its length.

use std::collections::BTreeMap;

use num::{BigInt, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// A complete graph on `1..=n` whose edge costs depend only on edge length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Instance {
    n: usize,
}

impl Instance {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!(
                "an instance needs at least 2 vertices, got {n}"
            )));
        }
        Ok(Instance { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The largest edge length, `floor(n/2)`.
    pub fn d(&self) -> usize {
        self.n / 2
    }

    /// Circlet-specific operations are stated only for n divisible by 4.
    pub fn require_circlet(&self) -> Result<()> {
        if self.n < 4 || !self.n.is_multiple_of(4) {
            Err(Error::UnsupportedInstance { n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        1..=self.n
    }

    /// All edges of K_n in sorted `(i, j)` order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.n * (self.n - 1) / 2);
        for a in 1..self.n {
            for b in (a + 1)..=self.n {
                out.push(Edge { a, b });
            }
        }
        out
    }

    /// Maps an integer onto the vertex label in `[1, n]` congruent to it.
    pub fn label(&self, v: i64) -> usize {
        let n = self.n as i64;
        ((v - 1).rem_euclid(n) + 1) as usize
    }
}

/// An unordered pair of distinct vertices, stored with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    a: usize,
    b: usize,
}

impl Edge {
    pub fn new(i: usize, j: usize, n: usize) -> Result<Self> {
        if i == j || i < 1 || j < 1 || i > n || j > n {
            return Err(Error::InvalidEdge { i, j, n });
        }
        Ok(Edge {
            a: i.min(j),
            b: i.max(j),
        })
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.a, self.b)
    }

    /// Circulant length: `min(|i-j|, n-|i-j|)`, in `[1, floor(n/2)]`.
    pub fn length(&self, n: usize) -> usize {
        let diff = self.b - self.a;
        diff.min(n - diff)
    }
}

impl std::fmt::Display for Edge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{},{}}}", self.a, self.b)
    }
}

/// `min(|i-j|, n-|i-j|)` after validating the pair.
pub fn edge_length(inst: &Instance, i: usize, j: usize) -> Result<usize> {
    Ok(Edge::new(i, j, inst.n())?.length(inst.n()))
}

/// A Hamiltonian cycle on `1..=n`, kept in canonical form: the visit order
/// starts at vertex 1 and its second vertex is the smaller of the two
/// neighbours of 1, so every undirected cycle has exactly one representation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tour {
    order: Vec<usize>,
}

impl Tour {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        if n < 3 {
            return Err(Error::InvalidTour(format!(
                "a tour needs at least 3 vertices, got {n}"
            )));
        }
        let mut seen = vec![false; n + 1];
        for &v in &order {
            if v < 1 || v > n {
                return Err(Error::InvalidTour(format!(
                    "vertex {v} out of range 1..={n}"
                )));
            }
            if seen[v] {
                return Err(Error::InvalidTour(format!("duplicate vertex {v}")));
            }
            seen[v] = true;
        }
        let mut t = Tour { order };
        t.canonicalize();
        Ok(t)
    }

    fn canonicalize(&mut self) {
        let n = self.order.len();
        let pos = self.order.iter().position(|&v| v == 1).unwrap();
        self.order.rotate_left(pos);
        if self.order[1] > self.order[n - 1] {
            self.order[1..].reverse();
        }
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn edges(&self) -> Vec<Edge> {
        let n = self.n();
        (0..n)
            .map(|i| {
                Edge::new(self.order[i], self.order[(i + 1) % n], n)
                    .expect("tour vertices are valid")
            })
            .collect()
    }

    /// The two tour neighbours of each vertex; index `v - 1`.
    pub fn adjacency(&self) -> Vec<[usize; 2]> {
        let n = self.n();
        let mut adj = vec![[0usize; 2]; n];
        for i in 0..n {
            let v = self.order[i];
            adj[v - 1] = [self.order[(i + n - 1) % n], self.order[(i + 1) % n]];
        }
        adj
    }

    pub fn contains_edge(&self, i: usize, j: usize) -> bool {
        if i < 1 || j < 1 || i > self.n() || j > self.n() || i == j {
            return false;
        }
        let adj = self.adjacency();
        adj[i - 1][0] == j || adj[i - 1][1] == j
    }

    /// Relabels every vertex `v` as `v + m` (mod n, mapped into `[1, n]`).
    pub fn rotate(&self, m: usize) -> Tour {
        let n = self.n();
        let order = self.order.iter().map(|&v| (v - 1 + m) % n + 1).collect();
        Tour::new(order).expect("rotation preserves tour validity")
    }

    /// Relabels every vertex `v` as `n - v` (mod n, mapped into `[1, n]`).
    pub fn reflect(&self) -> Tour {
        let n = self.n();
        let order = self
            .order
            .iter()
            .map(|&v| if v == n { n } else { n - v })
            .collect();
        Tour::new(order).expect("reflection preserves tour validity")
    }

    /// Integer count of tour edges of each length, indexed by length - 1.
    pub fn length_counts(&self) -> Vec<u64> {
        let n = self.n();
        let mut counts = vec![0u64; n / 2];
        for e in self.edges() {
            counts[e.length(n) - 1] += 1;
        }
        counts
    }
}

impl std::fmt::Display for Tour {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let strs: Vec<String> = self.order.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", strs.join(" "))
    }
}

/// The projection of an edge-weight vector to lengths: entry `i` is the total
/// weight carried by edges of length `i + 1`. Integer-valued for tours.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthProfile {
    t: Vec<Rational>,
}

impl LengthProfile {
    pub fn new(t: Vec<Rational>) -> Self {
        LengthProfile { t }
    }

    pub fn from_counts(counts: &[u64]) -> Self {
        LengthProfile {
            t: counts
                .iter()
                .map(|&c| Rational::from_integer(BigInt::from(c)))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.t.len()
    }

    /// Total weight of edges of the given length (1-based).
    pub fn get(&self, length: usize) -> &Rational {
        &self.t[length - 1]
    }

    pub fn values(&self) -> &[Rational] {
        &self.t
    }

    pub fn sum(&self) -> Rational {
        self.t.iter().fold(Rational::zero(), |acc, v| acc + v)
    }

    /// The entries as integers, when every entry is a nonnegative integer.
    pub fn integer_counts(&self) -> Option<Vec<i64>> {
        self.t
            .iter()
            .map(|v| {
                if v.is_integer() && !v.is_negative() {
                    v.to_integer().to_i64()
                } else {
                    None
                }
            })
            .collect()
    }
}

/// A symmetric rational edge-weight vector on K_n. Only nonzero weights are
/// stored; absent edges read as 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalPoint {
    n: usize,
    w: BTreeMap<Edge, Rational>,
}

impl FractionalPoint {
    pub fn new(inst: &Instance) -> Self {
        FractionalPoint {
            n: inst.n(),
            w: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn set(&mut self, e: Edge, weight: Rational) {
        if weight.is_zero() {
            self.w.remove(&e);
        } else {
            self.w.insert(e, weight);
        }
    }

    pub fn weight(&self, e: &Edge) -> Rational {
        self.w.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Edge, &Rational)> {
        self.w.iter()
    }

    pub fn support_size(&self) -> usize {
        self.w.len()
    }

    /// The 0/1 point of a tour.
    pub fn tour_indicator(inst: &Instance, tour: &Tour) -> Result<Self> {
        if tour.n() != inst.n() {
            return Err(Error::SizeMismatch {
                what: "tour",
                got: tour.n(),
                expected: inst.n(),
            });
        }
        let mut p = FractionalPoint::new(inst);
        for e in tour.edges() {
            p.set(e, Rational::one_value());
        }
        Ok(p)
    }

    pub fn degree(&self, v: usize) -> Rational {
        let mut deg = Rational::zero();
        for (e, w) in &self.w {
            let (a, b) = e.endpoints();
            if a == v || b == v {
                deg += w;
            }
        }
        deg
    }
}

trait RationalOne {
    fn one_value() -> Rational;
}

impl RationalOne for Rational {
    fn one_value() -> Rational {
        Rational::from_integer(BigInt::from(1))
    }
}

/// Integer length profile of a tour on this instance.
pub fn length_profile(inst: &Instance, tour: &Tour) -> Result<LengthProfile> {
    if tour.n() != inst.n() {
        return Err(Error::SizeMismatch {
            what: "tour",
            got: tour.n(),
            expected: inst.n(),
        });
    }
    Ok(LengthProfile::from_counts(&tour.length_counts()))
}

/// Rational length profile of a fractional point on this instance.
pub fn project_weights(inst: &Instance, x: &FractionalPoint) -> Result<LengthProfile> {
    if x.n() != inst.n() {
        return Err(Error::SizeMismatch {
            what: "fractional point",
            got: x.n(),
            expected: inst.n(),
        });
    }
    let mut t = vec![Rational::zero(); inst.d()];
    for (e, w) in x.iter() {
        t[e.length(inst.n()) - 1] += w;
    }
    Ok(LengthProfile::new(t))
}
