//! The tight-tour family and the facet certificate.
//!
//! For n divisible by 4 the circlet inequality admits n(n-3)/2 tours meeting
//! it with equality: d rotations of a tour with two length-d chords and n-2
//! length-1 edges, plus n rotations for each k in 3..=d of a tour that uses k
//! length-d edges, n-k-1 length-1 edges, and one further edge of cost k-1.
//! Stacking their incidence vectors and computing the exact rational rank
//! certifies facetness: rank n(n-3)/2 matches the dimension of the tour
//! polytope, which is |E| - |V|.

use num::{BigInt, One, Zero};

use crate::base::{Instance, Tour};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::ineq::CircletCoefficients;

/// The d tours with two length-d chords joined by length-1 paths: the chords
/// {1, d+1} and {d, n}, rotated d - 1 more times.
pub fn base_tours(inst: &Instance) -> Result<Vec<Tour>> {
    inst.require_circlet()?;
    let n = inst.n();
    let d = inst.d();
    let mut order: Vec<usize> = (1..=d).collect();
    order.extend((d + 1..=n).rev());
    let base = Tour::new(order)?;
    Ok((0..d).map(|m| base.rotate(m)).collect())
}

/// A tour with k length-d edges, n-k-1 length-1 edges, and one chord of cost
/// k-1 (length k-1 for even k, length d-k+1 for odd k). Runs along the top
/// row, zig-zags across the last k-1 columns, and returns along the bottom.
pub fn k_tour(inst: &Instance, k: usize) -> Result<Tour> {
    inst.require_circlet()?;
    let n = inst.n();
    let d = inst.d();
    if k < 3 || k > d {
        return Err(Error::Domain(format!("k must lie in 3..={d}, got {k}")));
    }
    let mut seq: Vec<usize> = (1..=(d - k + 2)).collect();
    let mut col = d - k + 2;
    let mut on_top = true;
    for step in 0..(k - 1) {
        seq.push(if on_top { col + d } else { col });
        on_top = !on_top;
        if step + 1 < k - 1 {
            col += 1;
            seq.push(if on_top { col } else { col + d });
        }
    }
    seq.push(n - k + 1);
    seq.extend(((d + 1)..=(n - k)).rev());
    Tour::new(seq)
}

/// All n(n-3)/2 tight tours: the base tours plus every rotation of each
/// k-tour. Fails loudly if any two coincide or any member is not tight.
pub fn full_family(inst: &Instance) -> Result<Vec<Tour>> {
    inst.require_circlet()?;
    let n = inst.n();
    let d = inst.d();
    let mut family = base_tours(inst)?;
    for k in 3..=d {
        let t = k_tour(inst, k)?;
        for m in 0..n {
            family.push(t.rotate(m));
        }
    }
    let expected = n * (n - 3) / 2;
    let distinct: std::collections::BTreeSet<&Tour> = family.iter().collect();
    if distinct.len() != family.len() || family.len() != expected {
        return Err(Error::Internal(format!(
            "tight family on n={n} has {} members ({} distinct), expected {expected}",
            family.len(),
            distinct.len()
        )));
    }
    let coeffs = CircletCoefficients::new(inst)?;
    for t in &family {
        if coeffs.evaluate_counts(&t.length_counts()) != coeffs.rhs() {
            return Err(Error::Internal(format!("family tour {t} is not tight")));
        }
    }
    Ok(family)
}

/// 0/1 incidence vector over the n(n-1)/2 edges of K_n in sorted (i, j) order.
pub fn incidence_vector(inst: &Instance, tour: &Tour) -> Result<Vec<u8>> {
    if tour.n() != inst.n() {
        return Err(Error::SizeMismatch {
            what: "tour",
            got: tour.n(),
            expected: inst.n(),
        });
    }
    let n = inst.n();
    // Edge (a, b), a < b, sits at offset(a) + b - a - 1.
    let offset = |a: usize| (a - 1) * n - a * (a - 1) / 2;
    let mut v = vec![0u8; n * (n - 1) / 2];
    for e in tour.edges() {
        let (a, b) = e.endpoints();
        v[offset(a) + b - a - 1] = 1;
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetCertificate {
    pub n: usize,
    pub family_size: usize,
    pub rank: usize,
    pub tight: bool,
    pub valid: bool,
}

impl std::fmt::Display for FacetCertificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "facet n={} family={} rank={} tight={} valid={}",
            self.n, self.family_size, self.rank, self.tight, self.valid
        )
    }
}

/// Builds the tight family, stacks its incidence vectors, and computes the
/// exact rank over the rationals. The certificate is valid iff family size
/// and rank both equal n(n-3)/2 and every member is tight.
pub fn certify_facet(inst: &Instance, caps: &Caps) -> Result<FacetCertificate> {
    inst.require_circlet()?;
    let n = inst.n();
    if n > caps.rank {
        return Err(Error::BudgetExceeded {
            what: "facet rank certificate",
            n,
            cap: caps.rank,
            hint: "; raise CIRCLET_CAPS to override",
        });
    }
    let family = full_family(inst)?;
    let coeffs = CircletCoefficients::new(inst)?;
    let tight = family
        .iter()
        .all(|t| coeffs.evaluate_counts(&t.length_counts()) == coeffs.rhs());
    let rows: Vec<Vec<BigInt>> = family
        .iter()
        .map(|t| incidence_vector(inst, t).map(|v| v.into_iter().map(BigInt::from).collect()))
        .collect::<Result<_>>()?;
    let rank = bareiss_rank(rows);
    let expected = n * (n - 3) / 2;
    Ok(FacetCertificate {
        n,
        family_size: family.len(),
        rank,
        tight,
        valid: tight && family.len() == expected && rank == expected,
    })
}

/// Exact integer rank by fraction-free (Bareiss) elimination with pivoting on
/// the first nonzero entry of each column. Every division is exact, so no
/// rounding enters; entries stay bounded by minors of the input.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = BigInt::one();
    let mut rank = 0usize;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let pivot_row = (rank..rows).find(|&r| !m[r][col].is_zero());
        let Some(pr) = pivot_row else { continue };
        m.swap(rank, pr);
        for r in (rank + 1)..rows {
            for c in (col + 1)..cols {
                let num = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                m[r][c] = num / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::length_profile;

    fn inst(n: usize) -> Instance {
        Instance::new(n).unwrap()
    }

    fn counts(inst: &Instance, t: &Tour) -> Vec<i64> {
        length_profile(inst, t).unwrap().integer_counts().unwrap()
    }

    #[test]
    fn base_tour_examples() {
        let i8 = inst(8);
        let tours = base_tours(&i8).unwrap();
        assert_eq!(tours.len(), 4);
        for t in &tours {
            assert_eq!(counts(&i8, t), vec![6, 0, 0, 2]);
        }

        let i4 = inst(4);
        let tours = base_tours(&i4).unwrap();
        assert_eq!(tours.len(), 2);
        for t in &tours {
            assert_eq!(counts(&i4, t), vec![2, 2]);
        }

        let i12 = inst(12);
        let coeffs = CircletCoefficients::new(&i12).unwrap();
        let tours = base_tours(&i12).unwrap();
        assert_eq!(tours.len(), 6);
        for t in &tours {
            assert_eq!(coeffs.evaluate_counts(&t.length_counts()), 10);
        }
    }

    #[test]
    fn k_tour_examples() {
        let i8 = inst(8);
        assert_eq!(counts(&i8, &k_tour(&i8, 4).unwrap()), vec![3, 0, 1, 4]);
        assert_eq!(counts(&i8, &k_tour(&i8, 3).unwrap()), vec![4, 1, 0, 3]);

        let i12 = inst(12);
        let t = k_tour(&i12, 5).unwrap();
        let c = counts(&i12, &t);
        assert_eq!(c[1], 1); // one edge of length 2, cost 4 = k - 1
        assert_eq!(c[5], 5); // five length-d edges
        assert_eq!(c[0], 6); // n - k - 1 length-1 edges

        assert!(k_tour(&i8, 2).is_err());
        assert!(k_tour(&i8, 5).is_err());
    }

    #[test]
    fn k_tours_are_tight_with_unique_extra_edge() {
        for n in [8usize, 12, 16] {
            let i = inst(n);
            let coeffs = CircletCoefficients::new(&i).unwrap();
            for k in 3..=i.d() {
                let t = k_tour(&i, k).unwrap();
                assert_eq!(coeffs.evaluate_counts(&t.length_counts()), coeffs.rhs());
                let c = counts(&i, &t);
                let extra_len = if k % 2 == 0 { k - 1 } else { i.d() - k + 1 };
                assert_eq!(c[extra_len - 1], 1, "n={n} k={k}");
                assert_eq!(c[i.d() - 1], k as i64);
                assert_eq!(c[0], (n - k - 1) as i64);
            }
        }
    }

    #[test]
    fn family_sizes() {
        assert_eq!(full_family(&inst(4)).unwrap().len(), 2);
        assert_eq!(full_family(&inst(8)).unwrap().len(), 20);
        assert_eq!(full_family(&inst(12)).unwrap().len(), 54);
    }

    #[test]
    fn chord_edges_are_unique_within_family() {
        // Each k-tour rotation owns an edge of cost k-1 that no other family
        // member uses, which is what makes the incidence rows independent.
        for n in [8usize, 12] {
            let i = inst(n);
            let family = full_family(&i).unwrap();
            let vectors: Vec<Vec<u8>> = family
                .iter()
                .map(|t| incidence_vector(&i, t).unwrap())
                .collect();
            for (ti, t) in family.iter().enumerate() {
                for e in t.edges() {
                    let len = e.length(n);
                    if len == 1 || len == i.d() {
                        continue;
                    }
                    // the chord: no other member may use it
                    let offset = |a: usize| (a - 1) * n - a * (a - 1) / 2;
                    let (a, b) = e.endpoints();
                    let idx = offset(a) + b - a - 1;
                    for (si, v) in vectors.iter().enumerate() {
                        if si != ti {
                            assert_eq!(v[idx], 0, "chord {e} reused");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bareiss_rank_basics() {
        let int = |v: i64| BigInt::from(v);
        assert_eq!(bareiss_rank(vec![]), 0);
        assert_eq!(
            bareiss_rank(vec![
                vec![int(1), int(0)],
                vec![int(0), int(1)],
                vec![int(1), int(1)],
            ]),
            2
        );
        assert_eq!(
            bareiss_rank(vec![
                vec![int(2), int(4), int(6)],
                vec![int(1), int(2), int(3)],
            ]),
            1
        );
        assert_eq!(
            bareiss_rank(vec![
                vec![int(0), int(2), int(1)],
                vec![int(1), int(1), int(0)],
                vec![int(1), int(3), int(1)],
            ]),
            2
        );
    }

    #[test]
    fn certificates_at_small_n() {
        let caps = Caps::default();
        let c4 = certify_facet(&inst(4), &caps).unwrap();
        assert_eq!((c4.family_size, c4.rank), (2, 2));
        assert!(c4.valid);

        let c8 = certify_facet(&inst(8), &caps).unwrap();
        assert_eq!((c8.family_size, c8.rank), (20, 20));
        assert!(c8.tight && c8.valid);
        assert_eq!(
            c8.to_string(),
            "facet n=8 family=20 rank=20 tight=true valid=true"
        );

        let c12 = certify_facet(&inst(12), &caps).unwrap();
        assert_eq!((c12.family_size, c12.rank), (54, 54));
        assert!(c12.valid);
    }

    #[test]
    fn certificate_cap() {
        assert!(matches!(
            certify_facet(&inst(20), &Caps::default()),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn rotation_closure_of_tight_value() {
        let i12 = inst(12);
        let coeffs = CircletCoefficients::new(&i12).unwrap();
        let t = k_tour(&i12, 4).unwrap();
        for m in 0..12 {
            assert_eq!(
                coeffs.evaluate_counts(&t.rotate(m).length_counts()),
                coeffs.rhs()
            );
        }
    }
}
