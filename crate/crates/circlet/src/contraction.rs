//! Window statistics and the 4-vertex contraction.
//!
//! A *window* W_u is the vertex quadruple u, u+1, u+d, u+d+1 and T_u counts
//! the tour's length-1 and length-d edges inside it. Three 3-edge patterns in
//! a window (kinds A, B1, B2) let the window be contracted away: the five-edge
//! chain joining the two outer neighbours j and k through the window is
//! replaced by the single edge {j, k}, the four window vertices are deleted,
//! and the remaining vertices are relabelled
//!
//! ```text
//! s' = s - 2  (s <= d),    s' = s - 4  (s > d + 2),
//! ```
//!
//! which keeps vertex parity. On circlet costs the contraction drops the tour
//! cost by at least 4: each untouched edge loses 0 or 2, and the chain itself
//! loses at least 4 for a B2 pattern, or an even amount at least 2 for an A
//! pattern with the shortfall forced onto some other edge by a parity
//! argument on the four vertex groups of the contracted graph.
//!
//! Kinds follow the window drawings: at u = 1 with both verticals present the
//! pattern is A (edges {d+1,1}, {1,2}, {2,d+2}); with the bottom edge present
//! it is B1 ({2,1}, {1,d+1}, {d+1,d+2}) or B2 ({1,2}, {2,d+2}, {d+2,d+1}).
//! B1 turns into B2 under the relabelling v -> n - v, so contraction handles
//! only A and B2.

use crate::base::{Edge, Instance, Tour};
use crate::error::{Error, Result};
use crate::ineq::CircletCoefficients;

/// The four vertices u, u+1, u+d, u+d+1 (labels mod n). As a vertex set the
/// window is determined by u mod d.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub u: usize,
    pub vertices: [usize; 4],
}

impl Window {
    pub fn new(inst: &Instance, u: usize) -> Result<Self> {
        let n = inst.n();
        if !n.is_multiple_of(2) || n < 4 {
            return Err(Error::Domain(format!(
                "windows need an even vertex count of at least 4, got n={n}"
            )));
        }
        if u < 1 || u > n {
            return Err(Error::Domain(format!("window index {u} out of 1..={n}")));
        }
        let d = inst.d() as i64;
        let u_i = u as i64;
        Ok(Window {
            u,
            vertices: [
                inst.label(u_i),
                inst.label(u_i + 1),
                inst.label(u_i + d),
                inst.label(u_i + d + 1),
            ],
        })
    }
}

/// T_u: how many of the four length-1/length-d edges of the window the tour
/// uses. Between 0 and 4; 4 closes the window into a cycle, so it can occur
/// only when the window is the entire vertex set (n = 4).
pub fn window_count(tour: &Tour, u: usize) -> Result<usize> {
    let inst = Instance::new(tour.n())?;
    let w = Window::new(&inst, u)?;
    let [a, b, c, e] = w.vertices;
    let mut t = 0;
    for (x, y) in [(a, b), (c, e), (a, c), (b, e)] {
        if tour.contains_edge(x, y) {
            t += 1;
        }
    }
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowIdentity {
    pub lhs: u64,
    pub rhs: u64,
}

/// The window identity `t_1 + 2 t_d = T_1 + ... + T_d`: each length-1 edge
/// lies in exactly one of the d windows and each length-d edge in exactly two.
pub fn window_identity(tour: &Tour) -> Result<WindowIdentity> {
    let inst = Instance::new(tour.n())?;
    if inst.n() % 2 != 0 {
        return Err(Error::Domain(format!(
            "window identity needs even n, got {}",
            inst.n()
        )));
    }
    let counts = tour.length_counts();
    let lhs = counts[0] + 2 * counts[inst.d() - 1];
    let mut rhs = 0u64;
    for u in 1..=inst.d() {
        rhs += window_count(tour, u)? as u64;
    }
    Ok(WindowIdentity { lhs, rhs })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StructureKind {
    A,
    B1,
    B2,
}

impl std::fmt::Display for StructureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StructureKind::A => write!(f, "A"),
            StructureKind::B1 => write!(f, "B1"),
            StructureKind::B2 => write!(f, "B2"),
        }
    }
}

/// One detected window pattern, with the outer endpoints of its five-edge
/// chain read off the tour.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructureHit {
    pub u: usize,
    pub kind: StructureKind,
    pub j: usize,
    pub k: usize,
}

fn other_neighbor(adj: &[[usize; 2]], v: usize, not: usize) -> usize {
    let [x, y] = adj[v - 1];
    if x == not {
        y
    } else {
        x
    }
}

/// Scans every window position for the three patterns. Deterministic order
/// by (u, kind).
pub fn detect_structures(tour: &Tour) -> Result<Vec<StructureHit>> {
    let inst = Instance::new(tour.n())?;
    inst.require_circlet()?;
    let adj = tour.adjacency();
    let has = |x: usize, y: usize| adj[x - 1][0] == y || adj[x - 1][1] == y;
    let mut hits = Vec::new();
    for u in 1..=inst.n() {
        let w = Window::new(&inst, u)?;
        let [a, b, c, e] = w.vertices; // u, u+1, u+d, u+d+1
        if has(c, a) && has(a, b) && has(b, e) {
            hits.push(StructureHit {
                u,
                kind: StructureKind::A,
                j: other_neighbor(&adj, e, b),
                k: other_neighbor(&adj, c, a),
            });
        }
        if has(b, a) && has(a, c) && has(c, e) {
            hits.push(StructureHit {
                u,
                kind: StructureKind::B1,
                j: other_neighbor(&adj, b, a),
                k: other_neighbor(&adj, e, c),
            });
        }
        if has(a, b) && has(b, e) && has(e, c) {
            hits.push(StructureHit {
                u,
                kind: StructureKind::B2,
                j: other_neighbor(&adj, a, b),
                k: other_neighbor(&adj, c, e),
            });
        }
    }
    Ok(hits)
}

/// A hit moved to the reference position: rotated so u = 1, with B1 patterns
/// reflected into B2 first. The permutation applied is recorded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedHit {
    pub tour: Tour,
    pub hit: StructureHit,
    /// Label shift applied after any reflection: v -> v + rotation (mod n).
    pub rotation: usize,
    pub reflected: bool,
}

fn check_hit_edges(tour: &Tour, hit: &StructureHit) -> Result<()> {
    let inst = Instance::new(tour.n())?;
    let w = Window::new(&inst, hit.u)?;
    let [a, b, c, e] = w.vertices;
    let edges = match hit.kind {
        StructureKind::A => [(c, a), (a, b), (b, e)],
        StructureKind::B1 => [(b, a), (a, c), (c, e)],
        StructureKind::B2 => [(a, b), (b, e), (e, c)],
    };
    for (x, y) in edges {
        if !tour.contains_edge(x, y) {
            return Err(Error::Domain(format!(
                "tour does not contain the kind-{} pattern at u={}",
                hit.kind, hit.u
            )));
        }
    }
    Ok(())
}

pub fn normalize_hit(tour: &Tour, hit: &StructureHit) -> Result<NormalizedHit> {
    check_hit_edges(tour, hit)?;
    let inst = Instance::new(tour.n())?;
    inst.require_circlet()?;
    let n = inst.n();
    let reflect_label = |v: usize| if v == n { n } else { n - v };

    let (tour, u, kind, j, k, reflected) = match hit.kind {
        StructureKind::A | StructureKind::B2 => {
            (tour.clone(), hit.u, hit.kind, hit.j, hit.k, false)
        }
        StructureKind::B1 => {
            // Reflection sends the B1 pattern at u to a B2 pattern at n-u-1,
            // carrying j and k along.
            let w = inst.label(n as i64 - hit.u as i64 - 1);
            (
                tour.reflect(),
                w,
                StructureKind::B2,
                reflect_label(hit.j),
                reflect_label(hit.k),
                true,
            )
        }
    };
    let rotation = (n + 1 - u) % n;
    let shift = |v: usize| (v - 1 + rotation) % n + 1;
    let normalized = NormalizedHit {
        tour: tour.rotate(rotation),
        hit: StructureHit {
            u: 1,
            kind,
            j: shift(j),
            k: shift(k),
        },
        rotation,
        reflected,
    };
    check_hit_edges(&normalized.tour, &normalized.hit)?;
    Ok(normalized)
}

/// How one untouched edge changes under the contraction of the window at
/// u = 1: the new length, the new circlet cost, and the drop (0 or 2). An
/// edge keeps its cost exactly when it stays on one side of the cut with
/// endpoints of opposite parity, or crosses sides with endpoints of equal
/// parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PerEdgeDelta {
    pub new_length: usize,
    pub new_cost: i64,
    pub delta: i64,
}

fn circlet_cost(d: usize, len: usize) -> i64 {
    if len % 2 == 1 {
        len as i64
    } else {
        (d - len) as i64
    }
}

fn in_deleted_window(d: usize, v: usize) -> bool {
    v == 1 || v == 2 || v == d + 1 || v == d + 2
}

pub fn per_edge_delta(inst: &Instance, s: usize, t: usize) -> Result<PerEdgeDelta> {
    inst.require_circlet()?;
    let n = inst.n();
    let d = inst.d();
    if s == t || s < 1 || t < 1 || s > n || t > n {
        return Err(Error::InvalidEdge { i: s, j: t, n });
    }
    if in_deleted_window(d, s) || in_deleted_window(d, t) {
        return Err(Error::Domain(format!(
            "edge {{{s},{t}}} touches the deleted window {{1,2,{},{}}}",
            d + 1,
            d + 2
        )));
    }
    let len = Edge::new(s, t, n)?.length(n);
    let cost = circlet_cost(d, len);
    let same_side = (s <= d) == (t <= d);
    let new_length = if same_side { len } else { len - 2 };
    let same_parity = s % 2 == t % 2;
    let new_cost = if same_side != same_parity {
        cost
    } else {
        cost - 2
    };
    debug_assert_eq!(new_cost, circlet_cost(d - 2, new_length));
    Ok(PerEdgeDelta {
        new_length,
        new_cost,
        delta: cost - new_cost,
    })
}

fn relabel_after_contraction(d: usize, s: usize) -> usize {
    if s <= d {
        s - 2
    } else {
        s - 4
    }
}

/// The five-edge chain removed when contracting a normalized hit, in path
/// order from j to k.
fn chain_edges(d: usize, hit: &StructureHit) -> [(usize, usize); 5] {
    match hit.kind {
        // j - 1 - 2 - (d+2) - (d+1) - k
        StructureKind::B2 => [
            (hit.j, 1),
            (1, 2),
            (2, d + 2),
            (d + 2, d + 1),
            (d + 1, hit.k),
        ],
        // j - (d+2) - 2 - 1 - (d+1) - k
        StructureKind::A => [
            (hit.j, d + 2),
            (d + 2, 2),
            (2, 1),
            (1, d + 1),
            (d + 1, hit.k),
        ],
        StructureKind::B1 => unreachable!("normalized hits are A or B2"),
    }
}

/// Contracts a hit normalized to u = 1: deletes vertices 1, 2, d+1, d+2,
/// replaces the chain from j to k by the edge {j, k}, and relabels. The
/// result is a tour on n - 4 vertices.
pub fn contract(tour: &Tour, hit: &StructureHit) -> Result<Tour> {
    let inst = Instance::new(tour.n())?;
    inst.require_circlet()?;
    if hit.kind == StructureKind::B1 {
        return Err(Error::Domain(
            "kind B1 cannot be contracted directly; reflect it to B2 with normalize_hit".into(),
        ));
    }
    if hit.u != 1 {
        return Err(Error::Domain(
            "hit must be normalized to u=1 before contraction; use normalize_hit".into(),
        ));
    }
    check_hit_edges(tour, hit)?;
    let n = inst.n();
    let d = inst.d();
    if in_deleted_window(d, hit.j) || in_deleted_window(d, hit.k) || hit.j == hit.k {
        return Err(Error::NotContractible(format!(
            "outer endpoints j={} k={} overlap the window on n={}",
            hit.j, hit.k, n
        )));
    }
    let chain = chain_edges(d, hit);
    for (x, y) in chain {
        if !tour.contains_edge(x, y) {
            return Err(Error::Domain(format!(
                "chain edge {{{x},{y}}} missing from tour"
            )));
        }
    }
    let chain_set: std::collections::BTreeSet<Edge> = chain
        .iter()
        .map(|&(x, y)| Edge::new(x, y, n).expect("chain edges are valid"))
        .collect();

    let m = n - 4;
    let mut adj: Vec<Vec<usize>> = vec![Vec::with_capacity(2); m + 1];
    let mut push = |x: usize, y: usize| {
        adj[x].push(y);
        adj[y].push(x);
    };
    for e in tour.edges() {
        if chain_set.contains(&e) {
            continue;
        }
        let (x, y) = e.endpoints();
        push(
            relabel_after_contraction(d, x),
            relabel_after_contraction(d, y),
        );
    }
    push(
        relabel_after_contraction(d, hit.j),
        relabel_after_contraction(d, hit.k),
    );

    let mut order = Vec::with_capacity(m);
    let mut prev = 0usize;
    let mut cur = 1usize;
    for _ in 0..m {
        order.push(cur);
        if adj[cur].len() != 2 {
            return Err(Error::Internal(format!(
                "contracted vertex {cur} has degree {}",
                adj[cur].len()
            )));
        }
        let nxt = if adj[cur][0] == prev {
            adj[cur][1]
        } else {
            adj[cur][0]
        };
        prev = cur;
        cur = nxt;
    }
    if cur != 1 {
        return Err(Error::Internal(
            "contracted edge set is not a single cycle".into(),
        ));
    }
    Tour::new(order).map_err(|e| Error::Internal(format!("contracted tour invalid: {e}")))
}

/// The full bookkeeping of one contraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionReport {
    /// The hit as detected, in the original labels.
    pub original_hit: StructureHit,
    pub rotation: usize,
    pub reflected: bool,
    /// Tour and hit after normalization to u = 1 (B1 reflected into B2).
    pub normalized: Tour,
    pub kind: StructureKind,
    pub j: usize,
    pub k: usize,
    pub contracted: Tour,
    pub chain_cost: i64,
    pub new_edge_cost: i64,
    pub chain_delta: i64,
    /// Untouched edges in normalized labels with old and new costs.
    pub per_edge: Vec<(Edge, i64, i64)>,
    pub aggregate: i64,
}

impl ContractionReport {
    /// One-line report in the external text format.
    pub fn summary_line(&self) -> String {
        format!(
            "contract {} u={} j={} k={} delta={}",
            self.original_hit.kind,
            self.original_hit.u,
            self.original_hit.j,
            self.original_hit.k,
            self.aggregate
        )
    }
}

fn circlet_value_of(tour: &Tour) -> Result<i64> {
    let inst = Instance::new(tour.n())?;
    let coeffs = CircletCoefficients::new(&inst)?;
    Ok(coeffs.evaluate_counts(&tour.length_counts()))
}

/// Contracts a normalized hit and accounts for every cost change. The report
/// is cross-checked internally: the chain delta plus the per-edge deltas must
/// equal the direct difference of circlet values, the aggregate must be at
/// least 4, and an A-pattern chain must drop by an even amount with any
/// shortfall below 4 covered by a cheaper untouched edge.
pub fn aggregate_delta(tour: &Tour, hit: &StructureHit) -> Result<ContractionReport> {
    let inst = Instance::new(tour.n())?;
    inst.require_circlet()?;
    let d = inst.d();
    let n = inst.n();
    let contracted = contract(tour, hit)?;

    let coeffs = CircletCoefficients::new(&inst)?;
    let chain = chain_edges(d, hit);
    let mut chain_cost = 0i64;
    for (x, y) in chain {
        chain_cost += coeffs.cost_of_length(Edge::new(x, y, n)?.length(n));
    }
    let jp = relabel_after_contraction(d, hit.j);
    let kp = relabel_after_contraction(d, hit.k);
    let new_edge_cost = circlet_cost(d - 2, Edge::new(jp, kp, n - 4)?.length(n - 4));
    let chain_delta = chain_cost - new_edge_cost;

    let chain_set: std::collections::BTreeSet<Edge> = chain
        .iter()
        .map(|&(x, y)| Edge::new(x, y, n).expect("chain edges are valid"))
        .collect();
    let mut per_edge = Vec::new();
    let mut per_edge_total = 0i64;
    for e in tour.edges() {
        if chain_set.contains(&e) {
            continue;
        }
        let (s, t) = e.endpoints();
        let old = coeffs.cost_of_length(e.length(n));
        let change = per_edge_delta(&inst, s, t)?;
        per_edge_total += change.delta;
        per_edge.push((e, old, change.new_cost));
    }

    let aggregate = chain_delta + per_edge_total;
    let direct = circlet_value_of(tour)? - circlet_value_of(&contracted)?;
    if aggregate != direct {
        return Err(Error::Internal(format!(
            "delta bookkeeping ({aggregate}) disagrees with direct recomputation ({direct})"
        )));
    }
    if aggregate < 4 {
        return Err(Error::Internal(format!(
            "contraction dropped cost by {aggregate} < 4"
        )));
    }
    match hit.kind {
        StructureKind::B2 => {
            if chain_delta < 4 {
                return Err(Error::Internal(format!("B2 chain delta {chain_delta} < 4")));
            }
        }
        StructureKind::A => {
            if chain_delta < 2 || chain_delta % 2 != 0 {
                return Err(Error::Internal(format!(
                    "A chain delta {chain_delta} is not an even value >= 2"
                )));
            }
            if chain_delta == 2 && per_edge_total < 2 {
                return Err(Error::Internal(
                    "A chain delta of 2 without a cheaper untouched edge".into(),
                ));
            }
        }
        StructureKind::B1 => unreachable!(),
    }

    Ok(ContractionReport {
        original_hit: *hit,
        rotation: 0,
        reflected: false,
        normalized: tour.clone(),
        kind: hit.kind,
        j: hit.j,
        k: hit.k,
        contracted,
        chain_cost,
        new_edge_cost,
        chain_delta,
        per_edge,
        aggregate,
    })
}

/// Normalizes a raw hit and contracts it, keeping the original coordinates
/// in the report.
pub fn contract_and_report(tour: &Tour, hit: &StructureHit) -> Result<ContractionReport> {
    let normalized = normalize_hit(tour, hit)?;
    let mut report = aggregate_delta(&normalized.tour, &normalized.hit)?;
    report.original_hit = *hit;
    report.rotation = normalized.rotation;
    report.reflected = normalized.reflected;
    Ok(report)
}

fn require_outer(inst: &Instance, v: usize, what: &str) -> Result<()> {
    let d = inst.d();
    if v < 1 || v > inst.n() || in_deleted_window(d, v) {
        return Err(Error::Domain(format!(
            "{what}={v} must lie outside the window {{1,2,{},{}}} on n={}",
            d + 1,
            d + 2,
            inst.n()
        )));
    }
    Ok(())
}

/// Closed-form value of `chain cost - new edge cost - threshold` for a
/// contraction at u = 1, split over the parities and sides of the outer
/// endpoints. The threshold is 4 for a B2 chain and 2 for an A chain, so the
/// value is nonnegative in every case; an A-chain value of zero happens in
/// exactly four of the sixteen cases.
pub fn appendix_case_value(
    inst: &Instance,
    kind: StructureKind,
    j: usize,
    k: usize,
) -> Result<i64> {
    inst.require_circlet()?;
    require_outer(inst, j, "j")?;
    require_outer(inst, k, "k")?;
    if j == k {
        return Err(Error::Domain("j and k must be distinct".into()));
    }
    let n = inst.n() as i64;
    let d = n / 2;
    let (j, k) = (j as i64, k as i64);
    let top = |v: i64| v <= d;
    let even = |v: i64| v % 2 == 0;

    let value = match kind {
        StructureKind::B1 => {
            return Err(Error::Domain(
                "casework is defined for the A and B2 chains; reflect B1 to B2 first".into(),
            ))
        }
        StructureKind::B2 => match (even(j), even(k)) {
            (true, true) => {
                if top(j) && top(k) {
                    j - k + (j - k).abs()
                } else if !top(j) && !top(k) {
                    k - j + (k - j).abs()
                } else if top(j) {
                    if k < d + j {
                        2 * k - n - 4
                    } else {
                        2 * j - 4
                    }
                } else if j < d + k {
                    n - 2 * k
                } else {
                    2 * n - 2 * j
                }
            }
            (false, false) => {
                if top(j) && top(k) {
                    k - j + (k - j).abs()
                } else if !top(j) && !top(k) {
                    j - k + (j - k).abs()
                } else if top(j) {
                    if k < d + j {
                        n - 2 * j
                    } else {
                        2 * n - 2 * k
                    }
                } else if j < d + k {
                    2 * j - n - 4
                } else {
                    2 * k - 4
                }
            }
            (false, true) => {
                if top(j) && top(k) {
                    if j > k {
                        n - 2 * j
                    } else {
                        n - 2 * k
                    }
                } else if !top(j) && !top(k) {
                    if j > k {
                        2 * k - n - 4
                    } else {
                        2 * j - n - 4
                    }
                } else if top(j) {
                    if k < d + j {
                        0
                    } else {
                        2 * k - 2 * j - n
                    }
                } else if j < d + k {
                    0
                } else {
                    2 * j - 2 * k - n
                }
            }
            (true, false) => {
                if top(j) && top(k) {
                    j + k - (j - k).abs() - 4
                } else if !top(j) && !top(k) {
                    2 * n - j - k - (j - k).abs()
                } else if top(j) {
                    if k > d + j {
                        0
                    } else {
                        n + 2 * j - 2 * k
                    }
                } else if j > d + k {
                    0
                } else {
                    n - 2 * j + 2 * k
                }
            }
        },
        StructureKind::A => match (even(j), even(k)) {
            (true, true) => {
                if top(j) && top(k) {
                    j - k + (j - k).abs()
                } else if !top(j) && !top(k) {
                    2 + (j - k).abs() - (j - k)
                } else if top(j) {
                    if k < d + j {
                        2 * k - n - 4
                    } else {
                        2 * j - 4
                    }
                } else if j < d + k {
                    n - 2 * k + 2
                } else {
                    2 * n - 2 * j + 2
                }
            }
            (false, false) => {
                if top(j) && top(k) {
                    2 + (k - j).abs() + (k - j)
                } else if !top(j) && !top(k) {
                    (j - k).abs() + (j - k)
                } else if top(j) {
                    if k < d + j {
                        n + 2 - 2 * j
                    } else {
                        2 * n + 2 - 2 * k
                    }
                } else if j < d + k {
                    2 * j - n - 4
                } else {
                    2 * k - 4
                }
            }
            (false, true) => {
                if top(j) && top(k) {
                    if j > k {
                        n + 2 - 2 * j
                    } else {
                        n + 2 - 2 * k
                    }
                } else if !top(j) && !top(k) {
                    if j > k {
                        2 * k - n - 4
                    } else {
                        2 * j - n - 4
                    }
                } else if top(j) {
                    if k < d + j {
                        2
                    } else {
                        2 * k - 2 * j - n + 2
                    }
                } else if j < d + k {
                    0
                } else {
                    2 * j - 2 * k - n
                }
            }
            (true, false) => {
                if top(j) && top(k) {
                    if j > k {
                        2 * k - 4
                    } else {
                        2 * j - 4
                    }
                } else if !top(j) && !top(k) {
                    if j > k {
                        2 * n + 2 - 2 * j
                    } else {
                        2 * n + 2 - 2 * k
                    }
                } else if top(j) {
                    if k < d + j {
                        n + 2 * j - 2 * k
                    } else {
                        0
                    }
                } else if j < d + k {
                    n + 2 - 2 * j + 2 * k
                } else {
                    2
                }
            }
        },
    };
    Ok(value)
}

/// The same quantity computed directly from edge costs before and after
/// contraction, as an independent cross-check of the closed forms.
pub fn appendix_direct_value(
    inst: &Instance,
    kind: StructureKind,
    j: usize,
    k: usize,
) -> Result<i64> {
    inst.require_circlet()?;
    require_outer(inst, j, "j")?;
    require_outer(inst, k, "k")?;
    if j == k {
        return Err(Error::Domain("j and k must be distinct".into()));
    }
    let n = inst.n();
    let d = inst.d();
    let cost = |a: usize, b: usize| circlet_cost(d, Edge::new(a, b, n).unwrap().length(n));
    let jp = relabel_after_contraction(d, j);
    let kp = relabel_after_contraction(d, k);
    let new_cost = circlet_cost(d - 2, Edge::new(jp, kp, n - 4)?.length(n - 4));
    Ok(match kind {
        StructureKind::B2 => cost(j, 1) + cost(d + 1, k) - new_cost - 2,
        StructureKind::A => cost(j, d + 2) + cost(d + 1, k) - new_cost - 1,
        StructureKind::B1 => {
            return Err(Error::Domain(
                "casework is defined for the A and B2 chains; reflect B1 to B2 first".into(),
            ))
        }
    })
}

/// The four endpoint configurations where an A-chain contraction saves
/// exactly the threshold (closed form equal to zero).
pub fn appendix_is_zero_case(inst: &Instance, j: usize, k: usize) -> bool {
    let n = inst.n() as i64;
    let d = n / 2;
    let (j, k) = (j as i64, k as i64);
    let top = |v: i64| (3..=d).contains(&v);
    let bottom = |v: i64| (d + 3..=n).contains(&v);
    let even = |v: i64| v % 2 == 0;
    (even(j) && even(k) && top(j) && top(k) && j < k)
        || (!even(j) && !even(k) && bottom(j) && bottom(k) && j < k)
        || (!even(j) && even(k) && bottom(j) && top(k) && j < d + k)
        || (even(j) && !even(k) && top(j) && bottom(k) && k > d + j)
}

/// The four parity/side classes of the surviving vertices: the groups with
/// top-odd or bottom-even labels form one class pair and the groups with
/// top-even or bottom-odd labels the other. Edges that keep their cost under
/// contraction run exactly between groups of opposite class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexGroup {
    TopOdd,
    TopEven,
    BottomOdd,
    BottomEven,
}

impl VertexGroup {
    fn classify(d: usize, v: usize) -> Result<Self> {
        if in_deleted_window(d, v) {
            return Err(Error::Domain(format!("vertex {v} lies in the window")));
        }
        Ok(match (v <= d, v % 2 == 1) {
            (true, true) => VertexGroup::TopOdd,
            (true, false) => VertexGroup::TopEven,
            (false, true) => VertexGroup::BottomOdd,
            (false, false) => VertexGroup::BottomEven,
        })
    }

    /// True for the class containing top-even and bottom-odd vertices; the
    /// chain endpoints land here exactly in the zero cases.
    pub fn in_s2(&self) -> bool {
        matches!(self, VertexGroup::TopEven | VertexGroup::BottomOdd)
    }

    fn index(&self) -> usize {
        match self {
            VertexGroup::TopOdd => 0,
            VertexGroup::TopEven => 1,
            VertexGroup::BottomOdd => 2,
            VertexGroup::BottomEven => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupWalk {
    /// Group of every vertex on the tour path from j to k, in order.
    pub walk: Vec<VertexGroup>,
    /// Whether every step keeps edge cost (runs between opposite classes).
    pub uses_only_g_circle: bool,
    /// Visits per group, ordered TopOdd, TopEven, BottomOdd, BottomEven.
    /// The path covers every surviving vertex, so each count is (n-4)/4.
    pub group_visit_counts: [usize; 4],
}

/// Traces the tour path joining the outer endpoints of a normalized hit
/// through the four vertex groups. A walk that starts and ends in the
/// top-even/bottom-odd class and uses only cost-preserving edges would have
/// to visit that class once more than the other, so it cannot cover four
/// equal-size groups; this is the obstruction that forces a cheaper edge
/// whenever an A chain saves only 2.
pub fn group_walk_trace(tour: &Tour, hit: &StructureHit) -> Result<GroupWalk> {
    let inst = Instance::new(tour.n())?;
    inst.require_circlet()?;
    if hit.u != 1 || hit.kind == StructureKind::B1 {
        return Err(Error::Domain(
            "group walk needs a hit normalized to u=1 of kind A or B2".into(),
        ));
    }
    check_hit_edges(tour, hit)?;
    let d = inst.d();
    require_outer(&inst, hit.j, "j")?;
    require_outer(&inst, hit.k, "k")?;

    // Walk away from the window starting at j.
    let adj = tour.adjacency();
    let mut prev = match hit.kind {
        StructureKind::B2 => 1,
        StructureKind::A => d + 2,
        StructureKind::B1 => unreachable!(),
    };
    let mut cur = hit.j;
    let mut vertices = vec![cur];
    while cur != hit.k {
        let nxt = other_neighbor(&adj, cur, prev);
        prev = cur;
        cur = nxt;
        vertices.push(cur);
        if vertices.len() > tour.n() {
            return Err(Error::Internal("walk failed to reach k".into()));
        }
    }

    let mut walk = Vec::with_capacity(vertices.len());
    let mut counts = [0usize; 4];
    for &v in &vertices {
        let g = VertexGroup::classify(d, v)?;
        counts[g.index()] += 1;
        walk.push(g);
    }
    let mut uses_only_g_circle = true;
    for pair in vertices.windows(2) {
        if per_edge_delta(&inst, pair[0], pair[1])?.delta != 0 {
            uses_only_g_circle = false;
            break;
        }
    }
    Ok(GroupWalk {
        walk,
        uses_only_g_circle,
        group_visit_counts: counts,
    })
}
