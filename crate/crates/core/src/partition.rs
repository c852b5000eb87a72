//! Partitions and Young diagrams.
//!
//! A [`Partition`] is stored with its parts sorted weakly decreasing, so the
//! rows of the corresponding Young diagram read top to bottom. The derived
//! ordering on partitions of the same weight is the row-by-row order used to
//! index the recursion matrices: `y' > y` iff at the first row where they
//! differ, `y'` has the longer row.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{invalid, Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Builds a partition from parts in any order. Zero parts are rejected.
    pub fn new(parts: impl Into<Vec<u32>>) -> Result<Self> {
        let mut parts = parts.into();
        if parts.contains(&0) {
            return Err(invalid(format!("partition parts must be positive: {parts:?}")));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    /// Caller guarantees every part is positive; parts are sorted here.
    pub(crate) fn from_positive(mut parts: Vec<u32>) -> Self {
        debug_assert!(parts.iter().all(|&p| p > 0));
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The single-row diagram `(m)`.
    pub fn row(m: u32) -> Self {
        assert!(m > 0, "row length must be positive");
        Partition { parts: vec![m] }
    }

    /// The vertical diagram `(1^k)`.
    pub fn ones(k: u32) -> Self {
        Partition { parts: vec![1; k as usize] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// True for `(1,...,1)`, including the empty partition.
    pub fn is_all_ones(&self) -> bool {
        self.parts.first().is_none_or(|&m| m == 1)
    }

    /// Splits off the top row: `(m1, m2, ..., mb)` -> `((m1), (m2, ..., mb))`.
    pub fn split_top_row(&self) -> Option<(Partition, Partition)> {
        let (&top, rest) = self.parts.split_first()?;
        Some((Partition::row(top), Partition { parts: rest.to_vec() }))
    }

    /// Transposed diagram: `n_j = #{i : m_i >= j}`.
    pub fn dual(&self) -> Partition {
        let width = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=width).map(|j| self.parts.iter().take_while(|&&m| m >= j).count() as u32).collect();
        Partition { parts }
    }

    /// `|Aut(P)|`: the product of `(multiplicity of v)!` over distinct values `v`.
    pub fn aut_order(&self) -> BigUint {
        self.value_multiplicities().map(|(_, count)| factorial(count)).product()
    }

    /// `sum_i (i - 1) m_i` over the sorted parts.
    pub fn delta(&self) -> u64 {
        self.parts.iter().enumerate().map(|(i, &m)| i as u64 * u64::from(m)).sum()
    }

    /// `|P|! / (m_1! ... m_b!)`.
    pub fn multinomial(&self) -> BigUint {
        let denom: BigUint = self.parts.iter().map(|&m| factorial(m)).product();
        factorial(self.weight()) / denom
    }

    /// Runs of equal parts as `(value, count)`, largest value first.
    pub fn value_multiplicities(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let mut i = 0;
        std::iter::from_fn(move || {
            let &v = self.parts.get(i)?;
            let run = self.parts[i..].iter().take_while(|&&m| m == v).count();
            i += run;
            Some((v, run as u32))
        })
    }
}

/// Row-by-row comparison of Young diagrams. For partitions of equal weight
/// this is the total order on `Y_k`; it agrees with `Ord for Partition`.
pub fn compare_rows(a: &Partition, b: &Partition) -> Ordering {
    a.parts.cmp(&b.parts)
}

/// All partitions of `k` in increasing row order: `(1^k)` first, `(k)` last.
pub fn enumerate_ordered(k: u32) -> Result<Vec<Partition>> {
    if k < 1 {
        return Err(invalid("enumerate_ordered needs k >= 1"));
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    descend(k, k, &mut current, &mut out);
    // generated largest-first
    out.reverse();
    Ok(out)
}

fn descend(remaining: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition { parts: current.clone() });
        return;
    }
    for part in (1..=max_part.min(remaining)).rev() {
        current.push(part);
        descend(remaining - part, part, current, out);
        current.pop();
    }
}

/// Number of partitions of `k`.
pub fn partition_count(k: u32) -> usize {
    let k = k as usize;
    let mut table = vec![0usize; k + 1];
    table[0] = 1;
    for part in 1..=k {
        for total in part..=k {
            table[total] += table[total - part];
        }
    }
    table[k]
}

pub fn factorial(n: u32) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * i)
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, m) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `"(3,1,1)"`; whitespace is ignored and parts may be unsorted.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix('(')
            .and_then(|rest| rest.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected a parenthesized partition, got {s:?}")))?;
        if inner.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = inner
            .split(',')
            .map(|tok| tok.parse::<u32>().map_err(|_| Error::Parse(format!("bad part {tok:?} in {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts).map_err(|e| Error::Parse(e.to_string()))
    }
}
