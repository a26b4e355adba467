//! Ground-truth engines: exhaustive Hamiltonian-cycle enumeration, the
//! Held-Karp exact minimum-cost dynamic program, edge-length-profile
//! enumeration, and the Buratti divisor condition with a brute-force
//! feasibility check for prescribed edge-length multisets.

use num::{BigInt, Integer, ToPrimitive};

use crate::base::{Instance, Tour};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::ineq::next_permutation;
use crate::Rational;

/// Iterator over every undirected Hamiltonian cycle on `1..=n`, each emitted
/// exactly once in canonical form, in lexicographic order of visit sequence.
#[derive(Debug)]
pub struct Tours {
    n: usize,
    tail: Vec<usize>,
    fresh: bool,
    done: bool,
}

impl Iterator for Tours {
    type Item = Tour;

    fn next(&mut self) -> Option<Tour> {
        loop {
            if self.done {
                return None;
            }
            if self.fresh {
                self.fresh = false;
            } else if !next_permutation(&mut self.tail) {
                self.done = true;
                return None;
            }
            // Canonical cycles fix vertex 1 first and orient the cycle so the
            // second vertex is smaller than the last, halving the scan.
            if self.tail[0] < self.tail[self.n - 2] {
                let mut order = Vec::with_capacity(self.n);
                order.push(1);
                order.extend_from_slice(&self.tail);
                return Some(Tour::new(order).expect("arrangement is a valid tour"));
            }
        }
    }
}

pub fn enumerate_tours(inst: &Instance, caps: &Caps) -> Result<Tours> {
    let n = inst.n();
    if n < 3 {
        return Err(Error::Domain("tours need at least 3 vertices".into()));
    }
    if n > caps.enumeration {
        return Err(Error::BudgetExceeded {
            what: "tour enumeration",
            n,
            cap: caps.enumeration,
            hint: "; raise CIRCLET_CAPS to override",
        });
    }
    Ok(Tours {
        n,
        tail: (2..=n).collect(),
        fresh: true,
        done: false,
    })
}

/// Calls `f` with the visit order of every canonical tour, reusing one
/// buffer. Returns the number of tours visited, `(n-1)!/2`.
pub fn visit_tours(inst: &Instance, caps: &Caps, mut f: impl FnMut(&[usize])) -> Result<u64> {
    let n = inst.n();
    if n < 3 {
        return Err(Error::Domain("tours need at least 3 vertices".into()));
    }
    if n > caps.enumeration {
        return Err(Error::BudgetExceeded {
            what: "tour enumeration",
            n,
            cap: caps.enumeration,
            hint: "; raise CIRCLET_CAPS to override",
        });
    }
    let mut tail: Vec<usize> = (2..=n).collect();
    let mut order = Vec::with_capacity(n);
    let mut count = 0u64;
    loop {
        if tail[0] < tail[n - 2] {
            order.clear();
            order.push(1);
            order.extend_from_slice(&tail);
            f(&order);
            count += 1;
        }
        if !next_permutation(&mut tail) {
            break;
        }
    }
    Ok(count)
}

/// Exact minimum tour cost for circulant per-length costs, by the Held-Karp
/// dynamic program over (visited subset, last vertex) states with vertex 1
/// fixed as the start. Costs are scaled to integers up front so the whole
/// table stays exact.
pub fn min_tour_cost(inst: &Instance, costs: &[Rational], caps: &Caps) -> Result<Rational> {
    let n = inst.n();
    if costs.len() != inst.d() {
        return Err(Error::DimensionMismatch {
            expected: inst.d(),
            got: costs.len(),
        });
    }
    if n < 3 {
        return Err(Error::Domain("tours need at least 3 vertices".into()));
    }
    if n > caps.dp {
        return Err(Error::BudgetExceeded {
            what: "Held-Karp",
            n,
            cap: caps.dp,
            hint: "; raise CIRCLET_CAPS to override",
        });
    }

    let mut denom = BigInt::from(1);
    for c in costs {
        denom = denom.lcm(c.denom());
    }
    let scaled: Vec<i64> = costs
        .iter()
        .map(|c| {
            (c * Rational::from_integer(denom.clone()))
                .to_integer()
                .to_i64()
                .ok_or_else(|| Error::Domain("costs too large for exact integer scaling".into()))
        })
        .collect::<Result<_>>()?;
    let max_abs = scaled.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0);
    if (max_abs as u128) * (n as u128) > (i64::MAX / 4) as u128 {
        return Err(Error::Domain(
            "costs too large for exact integer scaling".into(),
        ));
    }

    // cost between vertices u, v in 1..=n
    let edge_cost = |u: usize, v: usize| -> i64 {
        let diff = u.abs_diff(v);
        scaled[diff.min(n - diff) - 1]
    };

    let m = n - 1; // vertices 2..=n, indexed 0..m
    let full = 1usize << m;
    const INF: i64 = i64::MAX / 2;
    let mut dp = vec![INF; full * m];
    for v in 0..m {
        dp[(1usize << v) * m + v] = edge_cost(1, v + 2);
    }
    for mask in 1..full {
        for last in 0..m {
            if mask & (1 << last) == 0 {
                continue;
            }
            let cur = dp[mask * m + last];
            if cur == INF {
                continue;
            }
            let mut rest = !mask & (full - 1);
            while rest != 0 {
                let nxt = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let cand = cur + edge_cost(last + 2, nxt + 2);
                let slot = (mask | (1 << nxt)) * m + nxt;
                if cand < dp[slot] {
                    dp[slot] = cand;
                }
            }
        }
    }
    let mut best = INF;
    for last in 0..m {
        let cur = dp[(full - 1) * m + last];
        if cur < INF {
            best = best.min(cur + edge_cost(last + 2, 1));
        }
    }
    Ok(Rational::new(BigInt::from(best), denom))
}

/// The exact set of integer length profiles realized by Hamiltonian cycles,
/// deduplicated and in ascending lexicographic order.
pub fn el_points(inst: &Instance, caps: &Caps) -> Result<Vec<Vec<u64>>> {
    let d = inst.d();
    let n = inst.n();
    let mut set = std::collections::BTreeSet::new();
    visit_tours(inst, caps, |order| {
        let mut counts = vec![0u64; d];
        for i in 0..n {
            let (u, v) = (order[i], order[(i + 1) % n]);
            let diff = u.abs_diff(v);
            counts[diff.min(n - diff) - 1] += 1;
        }
        set.insert(counts);
    })?;
    Ok(set.into_iter().collect())
}

/// A multiset of edge lengths in `1..=floor(n/2)`, stored as per-length counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthMultiset {
    counts: Vec<usize>,
}

impl LengthMultiset {
    pub fn new(inst: &Instance, lengths: &[usize]) -> Result<Self> {
        let d = inst.d();
        let mut counts = vec![0usize; d];
        for &l in lengths {
            if l < 1 || l > d {
                return Err(Error::Domain(format!(
                    "edge length {l} out of range 1..={d}"
                )));
            }
            counts[l - 1] += 1;
        }
        Ok(LengthMultiset { counts })
    }

    pub fn from_counts(inst: &Instance, counts: Vec<usize>) -> Result<Self> {
        if counts.len() != inst.d() {
            return Err(Error::DimensionMismatch {
                expected: inst.d(),
                got: counts.len(),
            });
        }
        Ok(LengthMultiset { counts })
    }

    pub fn size(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BurattiResult {
    pub holds: bool,
    /// Smallest divisor q of n with more than n - q multiset entries
    /// divisible by q, when the condition fails.
    pub violated_q: Option<usize>,
}

/// The divisor condition for a Hamiltonian path with prescribed edge lengths:
/// for every q dividing n, at most n - q entries of L are multiples of q.
pub fn buratti_condition(inst: &Instance, l: &LengthMultiset) -> Result<BurattiResult> {
    let n = inst.n();
    if l.size() != n - 1 {
        return Err(Error::Domain(format!(
            "path multiset must have n-1={} entries, got {}",
            n - 1,
            l.size()
        )));
    }
    for q in 1..=n {
        if !n.is_multiple_of(q) {
            continue;
        }
        let divisible: usize = l
            .counts()
            .iter()
            .enumerate()
            .filter(|(idx, _)| (idx + 1) % q == 0)
            .map(|(_, c)| *c)
            .sum();
        if divisible > n - q {
            return Ok(BurattiResult {
                holds: false,
                violated_q: Some(q),
            });
        }
    }
    Ok(BurattiResult {
        holds: true,
        violated_q: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathKind {
    Path,
    Cycle,
}

/// Whether some Hamiltonian path or cycle on K_n uses exactly the edge-length
/// multiset L, by exhaustive backtracking with multiset pruning. By rotation
/// symmetry the search fixes vertex 1 as the starting endpoint.
pub fn edge_length_feasible(
    inst: &Instance,
    l: &LengthMultiset,
    kind: PathKind,
    caps: &Caps,
) -> Result<bool> {
    let n = inst.n();
    if n > caps.edge_length {
        return Err(Error::BudgetExceeded {
            what: "edge-length feasibility",
            n,
            cap: caps.edge_length,
            hint: "",
        });
    }
    let expected = match kind {
        PathKind::Path => n - 1,
        PathKind::Cycle => n,
    };
    if kind == PathKind::Cycle && n < 3 {
        return Err(Error::Domain("cycles need at least 3 vertices".into()));
    }
    if l.size() != expected {
        return Err(Error::Domain(format!(
            "multiset must have {expected} entries for this kind, got {}",
            l.size()
        )));
    }

    let mut counts = l.counts().to_vec();
    let mut used = vec![false; n + 1];
    used[1] = true;
    fn rec(
        n: usize,
        last: usize,
        placed: usize,
        counts: &mut [usize],
        used: &mut [bool],
        kind: PathKind,
    ) -> bool {
        if placed == n {
            return match kind {
                PathKind::Path => true,
                PathKind::Cycle => {
                    let diff = last.abs_diff(1);
                    counts[diff.min(n - diff) - 1] == 1
                }
            };
        }
        for v in 2..=n {
            if used[v] {
                continue;
            }
            let diff = last.abs_diff(v);
            let len = diff.min(n - diff);
            if counts[len - 1] == 0 {
                continue;
            }
            counts[len - 1] -= 1;
            used[v] = true;
            if rec(n, v, placed + 1, counts, used, kind) {
                return true;
            }
            used[v] = false;
            counts[len - 1] += 1;
        }
        false
    }
    Ok(rec(n, 1, 1, &mut counts, &mut used, kind))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ineq::{check_circlet, CircletCoefficients};

    fn inst(n: usize) -> Instance {
        Instance::new(n).unwrap()
    }

    fn caps() -> Caps {
        Caps::default()
    }

    fn rat(p: i64) -> Rational {
        Rational::from_integer(BigInt::from(p))
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_tours(&inst(4), &caps()).unwrap().count(), 3);
        assert_eq!(enumerate_tours(&inst(5), &caps()).unwrap().count(), 12);
        assert_eq!(enumerate_tours(&inst(8), &caps()).unwrap().count(), 2520);
    }

    #[test]
    fn enumeration_is_deterministic_and_canonical() {
        let first = enumerate_tours(&inst(6), &caps()).unwrap().next().unwrap();
        assert_eq!(first.order(), &[1, 2, 3, 4, 5, 6]);
        let a: Vec<Tour> = enumerate_tours(&inst(6), &caps()).unwrap().collect();
        let b: Vec<Tour> = enumerate_tours(&inst(6), &caps()).unwrap().collect();
        assert_eq!(a, b);
        // all distinct
        let set: std::collections::BTreeSet<_> = a.iter().collect();
        assert_eq!(set.len(), a.len());
    }

    #[test]
    fn enumeration_cap() {
        let e = enumerate_tours(&inst(13), &caps()).unwrap_err();
        assert!(matches!(e, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn held_karp_circlet_minima() {
        let i4 = inst(4);
        let costs: Vec<Rational> = CircletCoefficients::new(&i4)
            .unwrap()
            .values()
            .iter()
            .map(|&c| rat(c))
            .collect();
        assert_eq!(min_tour_cost(&i4, &costs, &caps()).unwrap(), rat(2));

        let i12 = inst(12);
        let costs: Vec<Rational> = CircletCoefficients::new(&i12)
            .unwrap()
            .values()
            .iter()
            .map(|&c| rat(c))
            .collect();
        assert_eq!(min_tour_cost(&i12, &costs, &caps()).unwrap(), rat(10));
    }

    #[test]
    fn held_karp_gap_instance() {
        let i8 = inst(8);
        let big = rat(4 * 64);
        let costs = vec![rat(1), big.clone(), big, rat(0)];
        assert_eq!(min_tour_cost(&i8, &costs, &caps()).unwrap(), rat(6));
    }

    #[test]
    fn held_karp_cap() {
        let i = inst(24);
        let costs = vec![rat(1); 12];
        assert!(matches!(
            min_tour_cost(&i, &costs, &caps()),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn held_karp_agrees_with_enumeration_on_random_costs() {
        use rand::Rng;
        use rand::SeedableRng;
        let i8 = inst(8);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let costs: Vec<Rational> = (0..4)
                .map(|_| {
                    Rational::new(
                        BigInt::from(rng.gen_range(0i64..20)),
                        BigInt::from(rng.gen_range(1i64..4)),
                    )
                })
                .collect();
            let hk = min_tour_cost(&i8, &costs, &caps()).unwrap();
            let brute = enumerate_tours(&i8, &caps())
                .unwrap()
                .map(|t| {
                    t.length_counts().iter().enumerate().fold(
                        Rational::new(BigInt::from(0), BigInt::from(1)),
                        |acc, (i, c)| acc + &costs[i] * rat(*c as i64),
                    )
                })
                .min()
                .unwrap();
            assert_eq!(hk, brute);
        }
    }

    #[test]
    fn el_points_examples() {
        assert_eq!(
            el_points(&inst(4), &caps()).unwrap(),
            vec![vec![2, 2], vec![4, 0]]
        );
        assert!(el_points(&inst(5), &caps()).unwrap().contains(&vec![5, 0]));
        let i8 = inst(8);
        for counts in el_points(&i8, &caps()).unwrap() {
            assert_eq!(counts.iter().sum::<u64>(), 8);
            let p = crate::base::LengthProfile::from_counts(&counts);
            assert!(check_circlet(&i8, &p).unwrap().satisfied);
        }
    }

    #[test]
    fn buratti_examples() {
        let i8 = inst(8);
        let seven_twos = LengthMultiset::new(&i8, &[2; 7]).unwrap();
        let r = buratti_condition(&i8, &seven_twos).unwrap();
        assert!(!r.holds);
        assert_eq!(r.violated_q, Some(2));

        let seven_ones = LengthMultiset::new(&i8, &[1; 7]).unwrap();
        assert!(buratti_condition(&i8, &seven_ones).unwrap().holds);

        let mixed = LengthMultiset::new(&i8, &[1, 1, 1, 1, 1, 1, 4]).unwrap();
        assert!(buratti_condition(&i8, &mixed).unwrap().holds);

        let short = LengthMultiset::new(&i8, &[1, 1]).unwrap();
        assert!(matches!(
            buratti_condition(&i8, &short),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn feasibility_examples() {
        let i8 = inst(8);
        let cycle_multiset = LengthMultiset::new(&i8, &[1, 1, 1, 1, 1, 1, 4, 4]).unwrap();
        assert!(edge_length_feasible(&i8, &cycle_multiset, PathKind::Cycle, &caps()).unwrap());

        let all_ones = LengthMultiset::new(&i8, &[1; 8]).unwrap();
        assert!(edge_length_feasible(&i8, &all_ones, PathKind::Cycle, &caps()).unwrap());

        let seven_twos = LengthMultiset::new(&i8, &[2; 7]).unwrap();
        assert!(!edge_length_feasible(&i8, &seven_twos, PathKind::Path, &caps()).unwrap());

        assert!(matches!(
            edge_length_feasible(&i8, &all_ones, PathKind::Path, &caps()),
            Err(Error::Domain(_))
        ));
        let i12 = inst(12);
        let l = LengthMultiset::new(&i12, &[1; 11]).unwrap();
        assert!(matches!(
            edge_length_feasible(&i12, &l, PathKind::Path, &caps()),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn circlet_min_matches_enumeration_for_small_n() {
        for n in [4usize, 8] {
            let i = inst(n);
            let coeffs = CircletCoefficients::new(&i).unwrap();
            let costs: Vec<Rational> = coeffs.values().iter().map(|&c| rat(c)).collect();
            let hk = min_tour_cost(&i, &costs, &caps()).unwrap();
            let mut brute = i64::MAX;
            visit_tours(&i, &caps(), |order| {
                let mut counts = vec![0u64; n / 2];
                for i in 0..n {
                    let (u, v) = (order[i], order[(i + 1) % n]);
                    let diff = u.abs_diff(v);
                    counts[diff.min(n - diff) - 1] += 1;
                }
                brute = brute.min(coeffs.evaluate_counts(&counts));
            })
            .unwrap();
            assert_eq!(hk, rat(brute));
            assert_eq!(hk, rat(n as i64 - 2));
        }
    }
}
