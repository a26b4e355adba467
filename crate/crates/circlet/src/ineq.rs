//! The circlet inequality and its machinery.
//!
//! For n divisible by 4 and d = n/2, the inequality reads
//!
//! ```text
//! sum_i c_i t_i >= n - 2,    c_i = i (i odd),  d - i (i even),
//! ```
//!
//! so c_1 = 1, c_d = 0, and every interior coefficient is at least 2. The
//! tight-triangular rewrite adds d - 2 to every coefficient and shifts the
//! right-hand side to n^2/2 - n - 2; its strength against the subtour LP is
//! (n^2 - 2n - 4) / (n^2 - 3n).

use num::{BigInt, Integer, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::base::{FractionalPoint, Instance, LengthProfile};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::Rational;

fn rat_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

fn dot(coeffs: &[i64], profile: &LengthProfile) -> Result<Rational> {
    if coeffs.len() != profile.dim() {
        return Err(Error::DimensionMismatch {
            expected: coeffs.len(),
            got: profile.dim(),
        });
    }
    let mut acc = Rational::zero();
    for (c, t) in coeffs.iter().zip(profile.values()) {
        acc += t * rat_int(*c);
    }
    Ok(acc)
}

/// The circlet coefficient vector, indexed by edge length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircletCoefficients {
    d: usize,
    c: Vec<i64>,
}

impl CircletCoefficients {
    pub fn new(inst: &Instance) -> Result<Self> {
        inst.require_circlet()?;
        let d = inst.d();
        let c = (1..=d)
            .map(|i| if i % 2 == 1 { i as i64 } else { (d - i) as i64 })
            .collect();
        Ok(CircletCoefficients { d, c })
    }

    pub fn values(&self) -> &[i64] {
        &self.c
    }

    /// Cost of an edge of the given length (1-based).
    pub fn cost_of_length(&self, length: usize) -> i64 {
        self.c[length - 1]
    }

    pub fn rhs(&self) -> i64 {
        2 * self.d as i64 - 2
    }

    pub fn evaluate(&self, profile: &LengthProfile) -> Result<Rational> {
        dot(&self.c, profile)
    }

    /// Integer evaluation against raw length counts.
    pub fn evaluate_counts(&self, counts: &[u64]) -> i64 {
        self.c.iter().zip(counts).map(|(c, t)| c * *t as i64).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircletCheck {
    pub satisfied: bool,
    pub slack: Rational,
}

/// Slack of the circlet inequality on a length profile; satisfied iff the
/// slack is nonnegative.
pub fn check_circlet(inst: &Instance, profile: &LengthProfile) -> Result<CircletCheck> {
    let coeffs = CircletCoefficients::new(inst)?;
    let slack = coeffs.evaluate(profile)? - rat_int(coeffs.rhs());
    Ok(CircletCheck {
        satisfied: !slack.is_negative(),
        slack,
    })
}

/// The bound `2n - t_1 - 2 t_d`: every profile with nonnegative entries
/// summing to n has circlet value at least this.
pub fn cheap_edge_lower_bound(inst: &Instance, profile: &LengthProfile) -> Result<Rational> {
    inst.require_circlet()?;
    if profile.dim() != inst.d() {
        return Err(Error::DimensionMismatch {
            expected: inst.d(),
            got: profile.dim(),
        });
    }
    let n = rat_int(inst.n() as i64);
    if profile.sum() != n {
        return Err(Error::Domain(format!(
            "profile must sum to n={}, got {}",
            inst.n(),
            profile.sum()
        )));
    }
    let t1 = profile.get(1).clone();
    let td = profile.get(inst.d()).clone();
    Ok(rat_int(2) * n - t1 - rat_int(2) * td)
}

/// The tight-triangular rewrite of the circlet inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TtCoefficients {
    d: usize,
    f: Vec<i64>,
}

impl TtCoefficients {
    pub fn new(inst: &Instance) -> Result<Self> {
        inst.require_circlet()?;
        let d = inst.d();
        let f = (1..=d)
            .map(|i| {
                let base = (d - 2) as i64;
                if i % 2 == 1 {
                    base + i as i64
                } else {
                    base + (d - i) as i64
                }
            })
            .collect();
        Ok(TtCoefficients { d, f })
    }

    pub fn values(&self) -> &[i64] {
        &self.f
    }

    pub fn cost_of_length(&self, length: usize) -> i64 {
        self.f[length - 1]
    }

    /// `n^2/2 - n - 2`.
    pub fn rhs(&self) -> i64 {
        let d = self.d as i64;
        2 * d * d - 2 * d - 2
    }

    pub fn evaluate(&self, profile: &LengthProfile) -> Result<Rational> {
        dot(&self.f, profile)
    }
}

pub fn tt_coeffs(inst: &Instance) -> Result<TtCoefficients> {
    TtCoefficients::new(inst)
}

/// Exhaustive check that the TT coefficients satisfy the triangle condition
/// on every vertex triple and admit a tight triple at every vertex.
pub fn tt_triangle_check(inst: &Instance) -> Result<bool> {
    let tt = TtCoefficients::new(inst)?;
    let n = inst.n();
    let f = |i: usize, j: usize| {
        tt.cost_of_length(crate::base::edge_length(inst, i, j).expect("distinct in-range"))
    };
    for j in 1..=n {
        let mut tight = false;
        for i in 1..=n {
            if i == j {
                continue;
            }
            for k in 1..=n {
                if k == j || k == i {
                    continue;
                }
                let lhs = f(i, j) + f(j, k);
                let rhs = f(i, k);
                if lhs < rhs {
                    return Ok(false);
                }
                if lhs == rhs {
                    tight = true;
                }
            }
        }
        if !tight {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(n^2 - 2n - 4) / (n^2 - 3n)`.
pub fn circlet_strength(inst: &Instance) -> Result<Rational> {
    inst.require_circlet()?;
    let n = inst.n() as i64;
    Ok(Rational::new(
        BigInt::from(n * n - 2 * n - 4),
        BigInt::from(n * n - 3 * n),
    ))
}

/// `(3n^2 - 12n - 8) / (3n^2 - 14n)`; needs n >= 8.
pub fn crown_strength(inst: &Instance) -> Result<Rational> {
    inst.require_circlet()?;
    let n = inst.n() as i64;
    if n < 8 {
        return Err(Error::Domain(format!(
            "crown strength needs n >= 8, got {n}"
        )));
    }
    Ok(Rational::new(
        BigInt::from(3 * n * n - 12 * n - 8),
        BigInt::from(3 * n * n - 14 * n),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeparationMode {
    Exhaustive,
    Heuristic,
}

/// Result of a labeling search. `labeling[p - 1]` is the vertex placed at
/// circulant position p; the inequality is applied to the relabelled point.
/// A positive violation certifies the point lies outside the tour polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationResult {
    pub labeling: Vec<usize>,
    pub value: Rational,
    pub violation: Rational,
    pub mode: SeparationMode,
}

struct ScaledPoint {
    /// Weight matrix scaled to integers; index by vertex - 1.
    w: Vec<Vec<i64>>,
    denom: BigInt,
    /// Circlet cost of the edge between two positions; index by position - 1.
    cost: Vec<Vec<i64>>,
    rhs: i64,
}

impl ScaledPoint {
    fn build(inst: &Instance, x: &FractionalPoint) -> Result<Self> {
        let coeffs = CircletCoefficients::new(inst)?;
        if x.n() != inst.n() {
            return Err(Error::SizeMismatch {
                what: "fractional point",
                got: x.n(),
                expected: inst.n(),
            });
        }
        let n = inst.n();
        let mut denom = BigInt::from(1);
        for (_, w) in x.iter() {
            denom = denom.lcm(w.denom());
        }
        let mut w = vec![vec![0i64; n]; n];
        let mut total_abs: i128 = 0;
        for (e, wt) in x.iter() {
            let scaled = (wt * Rational::from_integer(denom.clone())).to_integer();
            let v = scaled.to_i64().ok_or_else(|| {
                Error::Domain("weights too large for exact integer scaling".into())
            })?;
            let (a, b) = e.endpoints();
            w[a - 1][b - 1] = v;
            w[b - 1][a - 1] = v;
            total_abs += (v as i128).abs();
        }
        let max_cost = inst.d() as i128;
        if total_abs.saturating_mul(max_cost) > (i64::MAX / 4) as i128 {
            return Err(Error::Domain(
                "weights too large for exact integer scaling".into(),
            ));
        }
        let mut cost = vec![vec![0i64; n]; n];
        for p in 1..=n {
            for q in 1..=n {
                if p != q {
                    cost[p - 1][q - 1] =
                        coeffs.cost_of_length(crate::base::edge_length(inst, p, q)?);
                }
            }
        }
        Ok(ScaledPoint {
            w,
            denom,
            cost,
            rhs: coeffs.rhs(),
        })
    }

    /// Scaled circlet value of the point under a labeling.
    fn value(&self, labeling: &[usize]) -> i64 {
        let n = labeling.len();
        let mut acc = 0i64;
        for p in 0..n {
            let wp = &self.w[labeling[p] - 1];
            let cp = &self.cost[p];
            for q in (p + 1)..n {
                acc += cp[q] * wp[labeling[q] - 1];
            }
        }
        acc
    }

    fn result(&self, labeling: Vec<usize>, value: i64, mode: SeparationMode) -> SeparationResult {
        let value = Rational::new(BigInt::from(value), self.denom.clone());
        let violation = rat_int(self.rhs) - value.clone();
        SeparationResult {
            labeling,
            value,
            violation,
            mode,
        }
    }
}

/// Searches vertex labelings for one that minimizes the circlet value of the
/// relabelled point.
///
/// Exhaustive mode scans labelings modulo the dihedral symmetry group
/// (rotations and the reflection leave the value unchanged, so `(n-1)!/2`
/// canonical labelings suffice and the scan is lossless); ties are broken by
/// the lexicographically smallest labeling. Heuristic mode runs `budget`
/// seeded random restarts of best-improvement 2-swap local search and reports
/// the best labeling found; its violation is exact for that labeling but a
/// nonpositive violation is not a certificate of feasibility.
pub fn separate(
    inst: &Instance,
    x: &FractionalPoint,
    mode: SeparationMode,
    budget: usize,
    seed: u64,
    threads: usize,
    caps: &Caps,
) -> Result<SeparationResult> {
    let scaled = ScaledPoint::build(inst, x)?;
    let n = inst.n();
    match mode {
        SeparationMode::Exhaustive => {
            if n > caps.enumeration {
                return Err(Error::BudgetExceeded {
                    what: "exhaustive separation",
                    n,
                    cap: caps.enumeration,
                    hint: "; use heuristic mode",
                });
            }
            let (value, labeling) = exhaustive_min(n, threads.max(1), &scaled);
            Ok(scaled.result(labeling, value, SeparationMode::Exhaustive))
        }
        SeparationMode::Heuristic => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut best: Option<(i64, Vec<usize>)> = None;
            for _ in 0..budget.max(1) {
                let mut lab: Vec<usize> = (1..=n).collect();
                lab.shuffle(&mut rng);
                let mut cur = scaled.value(&lab);
                loop {
                    let mut improved = false;
                    let mut best_swap = (0, 0);
                    let mut best_val = cur;
                    for p in 0..n {
                        for q in (p + 1)..n {
                            lab.swap(p, q);
                            let v = scaled.value(&lab);
                            lab.swap(p, q);
                            if v < best_val {
                                best_val = v;
                                best_swap = (p, q);
                                improved = true;
                            }
                        }
                    }
                    if !improved {
                        break;
                    }
                    lab.swap(best_swap.0, best_swap.1);
                    cur = best_val;
                }
                if best.as_ref().is_none_or(|(v, _)| cur < *v) {
                    best = Some((cur, lab));
                }
            }
            let (value, labeling) = best.expect("budget >= 1");
            Ok(scaled.result(labeling, value, SeparationMode::Heuristic))
        }
    }
}

/// Minimum over canonical labelings `[1, tail...]` with `tail[0] < tail[last]`,
/// partitioned by the first tail element when more than one thread is allowed.
/// Blocks are merged in a fixed order so the result is schedule-independent.
fn exhaustive_min(n: usize, threads: usize, scaled: &ScaledPoint) -> (i64, Vec<usize>) {
    let blocks: Vec<usize> = (2..=n).collect();
    let run_block = |v: usize| -> Option<(i64, Vec<usize>)> {
        let mut tail: Vec<usize> = (2..=n).filter(|&x| x != v).collect();
        let mut lab = Vec::with_capacity(n);
        let mut best: Option<(i64, Vec<usize>)> = None;
        loop {
            if *tail.last().unwrap() > v {
                lab.clear();
                lab.push(1);
                lab.push(v);
                lab.extend_from_slice(&tail);
                let val = scaled.value(&lab);
                if best.as_ref().is_none_or(|(b, _)| val < *b) {
                    best = Some((val, lab.clone()));
                }
            }
            if !next_permutation(&mut tail) {
                break;
            }
        }
        best
    };

    let results: Vec<Option<(i64, Vec<usize>)>> = if threads <= 1 || n <= 3 {
        blocks.iter().map(|&v| run_block(v)).collect()
    } else {
        let mut out: Vec<Option<(i64, Vec<usize>)>> = vec![None; blocks.len()];
        let chunks: Vec<Vec<usize>> = (0..threads)
            .map(|t| (t..blocks.len()).step_by(threads).collect())
            .collect();
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for chunk in &chunks {
                let chunk = chunk.clone();
                let run = &run_block;
                let blocks = &blocks;
                handles.push(scope.spawn(move || {
                    chunk
                        .into_iter()
                        .map(|i| (i, run(blocks[i])))
                        .collect::<Vec<_>>()
                }));
            }
            for h in handles {
                for (i, r) in h.join().expect("worker panicked") {
                    out[i] = r;
                }
            }
        });
        out
    };

    let mut best: Option<(i64, Vec<usize>)> = None;
    for r in results.into_iter().flatten() {
        if best.as_ref().is_none_or(|(b, _)| r.0 < *b) {
            best = Some(r);
        }
    }
    best.expect("at least one canonical labeling")
}

/// In-place lexicographic successor; false once the slice is in final order.
pub(crate) fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}
