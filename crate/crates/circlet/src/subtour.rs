//! Subtour-LP points and the strength calculation.
//!
//! The half/one point puts weight 1/2 on every length-1 edge and weight 1 on
//! every length-d edge; the lambda family interpolates between it and the
//! canonical tour. Feasibility for the subtour LP is checked exactly: box
//! bounds, degree-2 equalities, and a global minimum cut of at least 2 on
//! the weighted support (Stoer-Wagner with rational weights).

use num::{BigInt, Signed, Zero};

use crate::base::{project_weights, Edge, FractionalPoint, Instance};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::ineq::tt_coeffs;
use crate::oracle::min_tour_cost;
use crate::Rational;

fn rat(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

fn ratq(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Weight 1/2 on every length-1 edge, 1 on every length-d edge, 0 elsewhere.
pub fn half_one_point(inst: &Instance) -> Result<FractionalPoint> {
    inst.require_circlet()?;
    let n = inst.n();
    let d = inst.d();
    let mut x = FractionalPoint::new(inst);
    for v in 1..=n {
        let w = v % n + 1;
        x.set(Edge::new(v, w, n)?, ratq(1, 2));
    }
    for v in 1..=d {
        x.set(Edge::new(v, v + d, n)?, rat(1));
    }
    Ok(x)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaPoint {
    pub point: FractionalPoint,
    /// Whether both weight classes fall inside [0, 1]; true iff
    /// lambda lies in [1/2, 1].
    pub box_feasible: bool,
}

/// Weight `lambda` on every length-1 edge and `2 - 2 lambda` on every
/// length-d edge. Every vertex has degree exactly 2 for any lambda; values
/// outside [1/2, 1] are still constructed but flagged box-infeasible.
pub fn lambda_point(inst: &Instance, lambda: &Rational) -> Result<LambdaPoint> {
    inst.require_circlet()?;
    let n = inst.n();
    let d = inst.d();
    let chord_weight = rat(2) - rat(2) * lambda;
    let mut x = FractionalPoint::new(inst);
    for v in 1..=n {
        let w = v % n + 1;
        x.set(Edge::new(v, w, n)?, lambda.clone());
    }
    for v in 1..=d {
        x.set(Edge::new(v, v + d, n)?, chord_weight.clone());
    }
    let box_feasible = *lambda >= ratq(1, 2) && *lambda <= rat(1);
    Ok(LambdaPoint {
        point: x,
        box_feasible,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Box { edge: Edge, weight: Rational },
    Degree { vertex: usize, degree: Rational },
    Cut { side: Vec<usize>, weight: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubtourCheck {
    pub feasible: bool,
    pub witness: Option<Witness>,
}

/// Exact subtour-LP feasibility: all weights in [0, 1], degree exactly 2 at
/// every vertex, and every proper cut of weight at least 2. Returns the first
/// violated constraint as a witness.
pub fn subtour_feasible(inst: &Instance, x: &FractionalPoint, caps: &Caps) -> Result<SubtourCheck> {
    let n = inst.n();
    if x.n() != n {
        return Err(Error::SizeMismatch {
            what: "fractional point",
            got: x.n(),
            expected: n,
        });
    }
    if n > caps.subtour {
        return Err(Error::BudgetExceeded {
            what: "subtour feasibility",
            n,
            cap: caps.subtour,
            hint: "",
        });
    }
    for (e, w) in x.iter() {
        if w.is_negative() || *w > rat(1) {
            return Ok(SubtourCheck {
                feasible: false,
                witness: Some(Witness::Box {
                    edge: *e,
                    weight: w.clone(),
                }),
            });
        }
    }
    let mut degrees = vec![Rational::zero(); n + 1];
    for (e, w) in x.iter() {
        let (a, b) = e.endpoints();
        degrees[a] += w;
        degrees[b] += w;
    }
    for (v, degree) in degrees.iter().enumerate().skip(1) {
        if *degree != rat(2) {
            return Ok(SubtourCheck {
                feasible: false,
                witness: Some(Witness::Degree {
                    vertex: v,
                    degree: degree.clone(),
                }),
            });
        }
    }
    let mut w = vec![vec![Rational::zero(); n]; n];
    for (e, wt) in x.iter() {
        let (a, b) = e.endpoints();
        w[a - 1][b - 1] = wt.clone();
        w[b - 1][a - 1] = wt.clone();
    }
    let (side, weight) = stoer_wagner(n, w);
    if weight < rat(2) {
        return Ok(SubtourCheck {
            feasible: false,
            witness: Some(Witness::Cut { side, weight }),
        });
    }
    Ok(SubtourCheck {
        feasible: true,
        witness: None,
    })
}

/// Deterministic global minimum cut on nonnegative rational weights. Returns
/// one side of a minimum cut (original vertex labels, sorted) and its weight.
/// Ties break toward the earliest phase and the smallest vertex index.
fn stoer_wagner(n: usize, mut w: Vec<Vec<Rational>>) -> (Vec<usize>, Rational) {
    assert!(n >= 2, "cuts need at least 2 vertices");
    let mut groups: Vec<Vec<usize>> = (1..=n).map(|v| vec![v]).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut best: Option<(Vec<usize>, Rational)> = None;

    while active.len() > 1 {
        // One phase: grow a set from the first active vertex by maximum
        // connection weight; the last vertex added defines the cut of the
        // phase, then merges into the one added before it.
        let mut in_set = vec![false; n];
        let mut score: Vec<Rational> = vec![Rational::zero(); n];
        let mut order = Vec::with_capacity(active.len());
        for _ in 0..active.len() {
            let mut pick = None;
            for &v in &active {
                if in_set[v] {
                    continue;
                }
                match pick {
                    None => pick = Some(v),
                    Some(p) => {
                        if score[v] > score[p] {
                            pick = Some(v);
                        }
                    }
                }
            }
            let v = pick.expect("active vertex available");
            in_set[v] = true;
            order.push(v);
            for &u in &active {
                if !in_set[u] {
                    let add = w[v][u].clone();
                    score[u] += add;
                }
            }
        }
        let t = *order.last().unwrap();
        let s = order[order.len() - 2];
        let cut_weight = score[t].clone();
        let mut side = groups[t].clone();
        side.sort_unstable();
        if best.as_ref().is_none_or(|(_, bw)| cut_weight < *bw) {
            best = Some((side, cut_weight));
        }
        // merge t into s
        for &u in &active {
            if u != s && u != t {
                let add = w[t][u].clone();
                w[s][u] += add.clone();
                w[u][s] += add;
            }
        }
        let t_members = std::mem::take(&mut groups[t]);
        groups[s].extend(t_members);
        active.retain(|&v| v != t);
    }
    best.expect("at least one phase ran")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaBounds {
    /// Smallest lambda the circlet inequality allows: 1 - 2/n.
    pub circlet: Rational,
    /// Smallest lambda the crown inequality allows: 1/2 + 2/(3n) + 1/(3(n-6)).
    pub crown: Rational,
}

pub fn lambda_bounds(inst: &Instance) -> Result<LambdaBounds> {
    inst.require_circlet()?;
    let n = inst.n() as i64;
    if n < 8 {
        return Err(Error::Domain(format!(
            "the crown bound needs n >= 8, got {n}"
        )));
    }
    Ok(LambdaBounds {
        circlet: rat(1) - ratq(2, n),
        crown: ratq(1, 2) + ratq(2, 3 * n) + ratq(1, 3 * (n - 6)),
    })
}

/// Value of the tight-triangular coefficients at the half/one point,
/// `(n/2)(n-3)`; with the TT right-hand side this reproduces the strength.
pub fn min_fx_at_half_one(inst: &Instance) -> Result<Rational> {
    let tt = tt_coeffs(inst)?;
    let profile = project_weights(inst, &half_one_point(inst)?)?;
    tt.evaluate(&profile)
}

/// Per-length costs of the integrality-gap family: 1 at length 1, 0 at
/// length d, and a prohibitive 4n^2 elsewhere. Defined for n a power of two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapInstance {
    pub n: usize,
    pub costs: Vec<Rational>,
}

pub fn gap_instance(inst: &Instance) -> Result<GapInstance> {
    inst.require_circlet()?;
    let n = inst.n();
    if !n.is_power_of_two() {
        return Err(Error::Domain(format!(
            "gap instances need n a power of two, got {n}"
        )));
    }
    let d = inst.d();
    let big = rat(4 * (n as i64) * (n as i64));
    let costs = (1..=d)
        .map(|i| {
            if i == 1 {
                rat(1)
            } else if i == d {
                rat(0)
            } else {
                big.clone()
            }
        })
        .collect();
    Ok(GapInstance { n, costs })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapRatio {
    pub tour_opt: Rational,
    pub lp_value: Rational,
    pub ratio: Rational,
}

/// Optimal tour cost (Held-Karp) against the half/one point's LP cost on the
/// gap instance: n - 2 versus n/2, approaching ratio 2 from below.
pub fn gap_ratio(inst: &Instance, caps: &Caps) -> Result<GapRatio> {
    let gap = gap_instance(inst)?;
    let tour_opt = min_tour_cost(inst, &gap.costs, caps)?;
    let profile = project_weights(inst, &half_one_point(inst)?)?;
    let mut lp_value = Rational::zero();
    for (c, t) in gap.costs.iter().zip(profile.values()) {
        lp_value += c * t;
    }
    let ratio = tour_opt.clone() / lp_value.clone();
    Ok(GapRatio {
        tour_opt,
        lp_value,
        ratio,
    })
}

/// A connected even-degree edge multiset on `[n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerianMultigraph {
    n: usize,
    edges: std::collections::BTreeMap<Edge, usize>,
}

impl EulerianMultigraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Edge, &usize)> {
        self.edges.iter()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n + 1];
        for (e, &m) in &self.edges {
            let (a, b) = e.endpoints();
            deg[a] += m;
            deg[b] += m;
        }
        deg.remove(0);
        deg
    }

    pub fn all_degrees_even(&self) -> bool {
        self.degrees().iter().all(|d| d % 2 == 0)
    }

    pub fn is_connected(&self) -> bool {
        let mut adj = vec![Vec::new(); self.n + 1];
        for e in self.edges.keys() {
            let (a, b) = e.endpoints();
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.n + 1];
        let mut stack = vec![1usize];
        seen[1] = true;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        (1..=self.n).all(|v| seen[v])
    }

    /// Total cost with multiplicity under per-length costs.
    pub fn cost(&self, costs: &[Rational]) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (e, &m) in &self.edges {
            let len = e.length(self.n);
            if len > costs.len() {
                return Err(Error::DimensionMismatch {
                    expected: self.n / 2,
                    got: costs.len(),
                });
            }
            acc += &costs[len - 1] * rat(m as i64);
        }
        Ok(acc)
    }
}

/// The cheap Eulerian multigraph on gap costs: every length-d chord (the one
/// at d doubled), alternating length-1 edges on each side, and the wrap edge
/// {d, d+1}. Costs n/2, connected, all degrees even, undercutting the optimal
/// tour cost n - 2 for n >= 8.
pub fn eulerian_counterexample(inst: &Instance) -> Result<EulerianMultigraph> {
    inst.require_circlet()?;
    let n = inst.n();
    let d = inst.d();
    let mut edges = std::collections::BTreeMap::new();
    for v in 1..d {
        edges.insert(Edge::new(v, v + d, n)?, 1);
    }
    edges.insert(Edge::new(d, n, n)?, 2);
    for i in 1..=(d / 2) {
        edges.insert(Edge::new(2 * i - 1, 2 * i, n)?, 1);
    }
    for i in 1..=((d - 2) / 2) {
        edges.insert(Edge::new(d + 2 * i, d + 2 * i + 1, n)?, 1);
    }
    edges.insert(Edge::new(d, d + 1, n)?, 1);
    let g = EulerianMultigraph { n, edges };
    debug_assert!(g.all_degrees_even() && g.is_connected());
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{length_profile, Tour};
    use crate::ineq::{
        check_circlet, circlet_strength, crown_strength, CircletCoefficients, TtCoefficients,
    };

    fn inst(n: usize) -> Instance {
        Instance::new(n).unwrap()
    }

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn half_one_examples() {
        let i8 = inst(8);
        let x = half_one_point(&i8).unwrap();
        let t = project_weights(&i8, &x).unwrap();
        assert_eq!(t.values(), &[rat(4), rat(0), rat(0), rat(4)]);
        for v in 1..=8 {
            assert_eq!(x.degree(v), rat(2));
        }
        let chk = check_circlet(&i8, &t).unwrap();
        assert!(!chk.satisfied);
        assert_eq!(chk.slack, rat(-2));
    }

    #[test]
    fn lambda_examples() {
        let i8 = inst(8);
        let half = lambda_point(&i8, &ratq(1, 2)).unwrap();
        assert!(half.box_feasible);
        assert_eq!(half.point, half_one_point(&i8).unwrap());

        let one = lambda_point(&i8, &rat(1)).unwrap();
        assert!(one.box_feasible);
        let canonical = Tour::new((1..=8).collect()).unwrap();
        assert_eq!(
            one.point,
            FractionalPoint::tour_indicator(&i8, &canonical).unwrap()
        );

        let boundary = lambda_point(&i8, &ratq(3, 4)).unwrap();
        let t = project_weights(&i8, &boundary.point).unwrap();
        let coeffs = CircletCoefficients::new(&i8).unwrap();
        assert_eq!(coeffs.evaluate(&t).unwrap(), rat(6));

        let low = lambda_point(&i8, &ratq(1, 4)).unwrap();
        assert!(!low.box_feasible);
        for v in 1..=8 {
            assert_eq!(low.point.degree(v), rat(2));
        }
    }

    #[test]
    fn subtour_feasibility_examples() {
        let i8 = inst(8);
        let x = half_one_point(&i8).unwrap();
        let chk = subtour_feasible(&i8, &x, &caps()).unwrap();
        assert!(chk.feasible);

        let low = lambda_point(&i8, &ratq(1, 4)).unwrap();
        let chk = subtour_feasible(&i8, &low.point, &caps()).unwrap();
        assert!(!chk.feasible);
        match chk.witness.unwrap() {
            Witness::Box { weight, .. } => assert_eq!(weight, ratq(3, 2)),
            w => panic!("expected box witness, got {w:?}"),
        }

        // Two disjoint 4-cycles: degrees are fine but the cut between them
        // carries no weight.
        let mut x = FractionalPoint::new(&i8);
        for cyc in [[1usize, 2, 3, 4], [5, 6, 7, 8]] {
            for i in 0..4 {
                x.set(Edge::new(cyc[i], cyc[(i + 1) % 4], 8).unwrap(), rat(1));
            }
        }
        let chk = subtour_feasible(&i8, &x, &caps()).unwrap();
        assert!(!chk.feasible);
        match chk.witness.unwrap() {
            Witness::Cut { side, weight } => {
                assert_eq!(weight, rat(0));
                assert!(side == vec![1, 2, 3, 4] || side == vec![5, 6, 7, 8]);
            }
            w => panic!("expected cut witness, got {w:?}"),
        }
    }

    #[test]
    fn lambda_boundary_is_exact() {
        // Feasible exactly on [1/2, 1]; the circlet check flips at 1 - 2/n.
        let i8 = inst(8);
        let coeffs = CircletCoefficients::new(&i8).unwrap();
        for k in 0..=18i64 {
            let lam = ratq(k, 16);
            let lp = lambda_point(&i8, &lam).unwrap();
            let feasible = subtour_feasible(&i8, &lp.point, &caps()).unwrap().feasible;
            assert_eq!(feasible, lam >= ratq(1, 2) && lam <= rat(1), "lambda={lam}");
            let value = coeffs
                .evaluate(&project_weights(&i8, &lp.point).unwrap())
                .unwrap();
            assert_eq!(value < rat(6), lam < ratq(3, 4), "lambda={lam}");
        }
    }

    #[test]
    fn lambda_bounds_examples() {
        let b8 = lambda_bounds(&inst(8)).unwrap();
        assert_eq!(b8.circlet, ratq(3, 4));
        assert_eq!(b8.crown, ratq(3, 4));
        let b12 = lambda_bounds(&inst(12)).unwrap();
        assert_eq!(b12.circlet, ratq(5, 6));
        assert_eq!(b12.crown, ratq(11, 18));
        assert!(b12.circlet > b12.crown);
        assert!(lambda_bounds(&inst(4)).is_err());
    }

    #[test]
    fn strength_identity() {
        for n in [8usize, 12, 16, 20, 24] {
            let i = inst(n);
            let tt = TtCoefficients::new(&i).unwrap();
            let min_fx = min_fx_at_half_one(&i).unwrap();
            assert_eq!(min_fx, rat((n as i64 / 2) * (n as i64 - 3)));
            assert_eq!(
                rat(tt.rhs()) / min_fx,
                circlet_strength(&i).unwrap(),
                "n={n}"
            );
        }
        assert_eq!(min_fx_at_half_one(&inst(8)).unwrap(), rat(20));
        assert_eq!(
            rat(TtCoefficients::new(&inst(8)).unwrap().rhs()) / rat(20),
            ratq(11, 10)
        );
    }

    #[test]
    fn gap_examples() {
        let g8 = gap_ratio(&inst(8), &caps()).unwrap();
        assert_eq!(g8.tour_opt, rat(6));
        assert_eq!(g8.lp_value, rat(4));
        assert_eq!(g8.ratio, ratq(3, 2));
        assert!(gap_instance(&inst(12)).is_err());
    }

    #[test]
    fn eulerian_examples() {
        for n in [4usize, 8, 12, 16] {
            let i = inst(n);
            let g = eulerian_counterexample(&i).unwrap();
            assert!(g.all_degrees_even(), "n={n}");
            assert!(g.is_connected(), "n={n}");
            let gap = if n.is_power_of_two() {
                gap_instance(&i).unwrap().costs
            } else {
                let d = i.d();
                (1..=d)
                    .map(|l| {
                        if l == 1 {
                            rat(1)
                        } else if l == d {
                            rat(0)
                        } else {
                            rat(4 * (n as i64) * (n as i64))
                        }
                    })
                    .collect()
            };
            assert_eq!(g.cost(&gap).unwrap(), rat(n as i64 / 2));
            if n >= 8 {
                assert!(g.cost(&gap).unwrap() < rat(n as i64 - 2));
            }
        }
    }

    #[test]
    fn crown_matches_circlet_only_at_8() {
        assert_eq!(
            crown_strength(&inst(8)).unwrap(),
            circlet_strength(&inst(8)).unwrap()
        );
    }

    #[test]
    fn tour_indicators_are_subtour_feasible() {
        let i8 = inst(8);
        let t = Tour::new(vec![1, 3, 5, 2, 8, 6, 4, 7]).unwrap();
        let x = FractionalPoint::tour_indicator(&i8, &t).unwrap();
        assert!(subtour_feasible(&i8, &x, &caps()).unwrap().feasible);
        let profile = length_profile(&i8, &t).unwrap();
        assert_eq!(profile.sum(), rat(8));
    }
}
