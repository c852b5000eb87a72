//! The star product of Young diagrams.
//!
//! `y * y'` sums, over every way of matching `l` rows of `y` with `l` rows of
//! `y'` (row positions are distinguished, so equal rows count separately), the
//! diagram obtained by merging each matched pair into one row and stacking the
//! unmatched rows underneath.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{invalid, Result};
use crate::partition::Partition;

/// Coefficients of a star product, keyed in increasing row order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StarExpansion {
    terms: BTreeMap<Partition, u64>,
}

impl StarExpansion {
    pub fn terms(&self) -> &BTreeMap<Partition, u64> {
        &self.terms
    }

    pub fn coefficient(&self, p: &Partition) -> u64 {
        self.terms.get(p).copied().unwrap_or(0)
    }

    /// Sum of all coefficients.
    pub fn mass(&self) -> u64 {
        self.terms.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, u64)> {
        self.terms.iter().map(|(p, &c)| (p, c))
    }
}

impl fmt::Display for StarExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (p, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*{p}")?;
        }
        Ok(())
    }
}

/// `P1 * P2`. Both partitions must be nonempty.
pub fn star(p1: &Partition, p2: &Partition) -> Result<StarExpansion> {
    if p1.is_empty() || p2.is_empty() {
        return Err(invalid("star product needs nonempty partitions"));
    }
    let mut acc: HashMap<Vec<u32>, u64> = HashMap::new();
    let mut used = vec![false; p2.len()];
    let mut rows = Vec::with_capacity(p1.len() + p2.len());
    match_rows(p1.parts(), p2.parts(), 0, &mut used, &mut rows, &mut acc);
    let terms = acc.into_iter().map(|(parts, c)| (Partition::from_positive(parts), c)).collect();
    Ok(StarExpansion { terms })
}

/// Walks the rows of `a` in order; each is either left alone or merged with
/// a not-yet-used row of `b`. Every partial matching is visited once.
fn match_rows(
    a: &[u32],
    b: &[u32],
    i: usize,
    used: &mut [bool],
    rows: &mut Vec<u32>,
    acc: &mut HashMap<Vec<u32>, u64>,
) {
    if i == a.len() {
        let mut diagram = rows.clone();
        diagram.extend(b.iter().zip(used.iter()).filter(|(_, &u)| !u).map(|(&m, _)| m));
        diagram.sort_unstable_by(|x, y| y.cmp(x));
        *acc.entry(diagram).or_insert(0) += 1;
        return;
    }
    rows.push(a[i]);
    match_rows(a, b, i + 1, used, rows, acc);
    rows.pop();
    for j in 0..b.len() {
        if used[j] {
            continue;
        }
        used[j] = true;
        rows.push(a[i] + b[j]);
        match_rows(a, b, i + 1, used, rows, acc);
        rows.pop();
        used[j] = false;
    }
}

/// `<P1 * P2, P>`; zero when `P` does not occur.
pub fn coefficient(p1: &Partition, p2: &Partition, p: &Partition) -> Result<u64> {
    check_weights(p1, p2, p)?;
    Ok(star(p1, p2)?.coefficient(p))
}

/// The coefficient of `N<P, ...>` when the constraints `P1`, `P2` at two
/// distinct points are merged:
/// `<P1 * P2, P> |Aut(P)| / (|Aut(P1)| |Aut(P2)|)`.
pub fn combination_coefficient(p1: &Partition, p2: &Partition, p: &Partition) -> Result<BigRational> {
    let c = coefficient(p1, p2, p)?;
    Ok(scale_by_aut(c, p1, p2, p))
}

pub(crate) fn scale_by_aut(c: u64, p1: &Partition, p2: &Partition, p: &Partition) -> BigRational {
    let numer = BigInt::from(c) * BigInt::from(p.aut_order());
    let denom = BigInt::from(p1.aut_order() * p2.aut_order());
    BigRational::new(numer, denom)
}

fn check_weights(p1: &Partition, p2: &Partition, p: &Partition) -> Result<()> {
    if p.weight() != p1.weight() + p2.weight() {
        return Err(invalid(format!("weight mismatch: |{p}| != |{p1}| + |{p2}|")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::enumerate_ordered;
    use num_traits::{One, Zero};

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    /// Direct enumeration of (l, S, S', sigma): subsets as bitmasks and sigma
    /// as an explicit permutation of S'.
    fn brute_force(p1: &Partition, p2: &Partition) -> BTreeMap<Partition, u64> {
        let (a, b) = (p1.parts(), p2.parts());
        let mut out = BTreeMap::new();
        for s_mask in 0u32..(1 << a.len()) {
            for t_mask in 0u32..(1 << b.len()) {
                if s_mask.count_ones() != t_mask.count_ones() {
                    continue;
                }
                let s: Vec<usize> = (0..a.len()).filter(|i| s_mask >> i & 1 == 1).collect();
                let t: Vec<usize> = (0..b.len()).filter(|i| t_mask >> i & 1 == 1).collect();
                for sigma in permutations(t.len()) {
                    let mut rows: Vec<u32> = s.iter().zip(&sigma).map(|(&i, &j)| a[i] + b[t[j]]).collect();
                    rows.extend((0..a.len()).filter(|i| !s.contains(i)).map(|i| a[i]));
                    rows.extend((0..b.len()).filter(|i| !t.contains(i)).map(|i| b[i]));
                    *out.entry(Partition::new(rows).unwrap()).or_insert(0) += 1;
                }
            }
        }
        out
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for perm in permutations(n - 1) {
            for pos in 0..=perm.len() {
                let mut next = perm.clone();
                next.insert(pos, n - 1);
                out.push(next);
            }
        }
        out
    }

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn worked_example() {
        let e = star(&p(&[3, 1, 1]), &p(&[2, 2])).unwrap();
        assert_eq!(e.terms().len(), 5);
        assert_eq!(e.coefficient(&p(&[3, 2, 2, 1, 1])), 1);
        assert_eq!(e.coefficient(&p(&[5, 2, 1, 1])), 2);
        assert_eq!(e.coefficient(&p(&[3, 3, 2, 1])), 4);
        assert_eq!(e.coefficient(&p(&[5, 3, 1])), 4);
        assert_eq!(e.coefficient(&p(&[3, 3, 3])), 2);
        assert_eq!(e.mass(), 13);
        assert_eq!(e.to_string(), "1*(3,2,2,1,1) + 4*(3,3,2,1) + 2*(3,3,3) + 2*(5,2,1,1) + 4*(5,3,1)");
    }

    #[test]
    fn single_rows() {
        for m in 1..6 {
            for n in 1..6 {
                let e = star(&Partition::row(m), &Partition::row(n)).unwrap();
                let mut expected = BTreeMap::new();
                expected.insert(p(&[m, n]), 1);
                expected.insert(Partition::row(m + n), 1);
                assert_eq!(e.terms(), &expected);
            }
        }
    }

    #[test]
    fn coefficients() {
        assert_eq!(coefficient(&p(&[3, 1, 1]), &p(&[2, 2]), &p(&[3, 3, 2, 1])).unwrap(), 4);
        assert_eq!(coefficient(&p(&[1]), &p(&[1]), &p(&[2])).unwrap(), 1);
        // (2,1)*(2,1): only sigma = swap on the full matching yields (3,3)
        assert_eq!(coefficient(&p(&[2, 1]), &p(&[2, 1]), &p(&[3, 3])).unwrap(), 1);
        assert_eq!(brute_force(&p(&[2, 1]), &p(&[2, 1]))[&p(&[3, 3])], 1);
        assert!(coefficient(&p(&[1]), &p(&[1]), &p(&[3])).is_err());
    }

    #[test]
    fn empty_inputs_rejected() {
        assert!(star(&Partition::empty(), &p(&[1])).is_err());
        assert!(star(&p(&[1]), &Partition::empty()).is_err());
    }

    #[test]
    fn combination_coefficients() {
        let two = BigRational::from_integer(2.into());
        assert_eq!(combination_coefficient(&p(&[1]), &p(&[1]), &p(&[1, 1])).unwrap(), two);
        assert_eq!(combination_coefficient(&p(&[1]), &p(&[1]), &p(&[2])).unwrap(), BigRational::one());
        assert!(combination_coefficient(&p(&[1]), &p(&[1]), &p(&[3])).unwrap_err().to_string().contains("weight"));
        assert!(combination_coefficient(&p(&[2]), &p(&[1]), &p(&[1, 1, 1])).unwrap().is_zero());
    }

    #[test]
    fn matches_brute_force_and_invariants() {
        for total in 2..=10 {
            for k in 1..total {
                for a in enumerate_ordered(k).unwrap() {
                    for b in enumerate_ordered(total - k).unwrap() {
                        let e = star(&a, &b).unwrap();
                        assert_eq!(e.terms(), &brute_force(&a, &b), "{a} * {b}");
                        assert_eq!(e, star(&b, &a).unwrap());
                        assert!(e.terms().keys().all(|q| q.weight() == total));
                        assert!(e.terms().values().all(|&c| c > 0));
                        let (la, lb) = (a.len() as u64, b.len() as u64);
                        let mass: u64 =
                            (0..=la.min(lb)).map(|l| binom(la, l) * binom(lb, l) * (1..=l).product::<u64>()).sum();
                        assert_eq!(e.mass(), mass);
                    }
                }
            }
        }
    }

    /// `(m) * (m_1..m_b)` is the partition with `m` appended plus, for each
    /// row `i`, the partition with `m` added to row `i`.
    #[test]
    fn single_row_times_partition() {
        for total in 2..=6 {
            for m in 1..total {
                for q in enumerate_ordered(total - m).unwrap() {
                    let mut expected: BTreeMap<Partition, u64> = BTreeMap::new();
                    let mut appended = q.parts().to_vec();
                    appended.push(m);
                    *expected.entry(Partition::new(appended).unwrap()).or_insert(0) += 1;
                    for i in 0..q.len() {
                        let mut merged = q.parts().to_vec();
                        merged[i] += m;
                        *expected.entry(Partition::new(merged).unwrap()).or_insert(0) += 1;
                    }
                    assert_eq!(star(&Partition::row(m), &q).unwrap().terms(), &expected);
                }
            }
        }
    }
}
