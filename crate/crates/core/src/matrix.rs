//! The top-row splitting matrices `A_k` and exact linear algebra over `Q`.
//!
//! Rows of `A_k` are labelled by every partition of `k` except the horizontal
//! one `(k)`, columns by every partition except the vertical one `(1^k)`, both
//! in increasing row order. The entry at `(y', y)` is `1` when `y = y'`, plus
//! the number of ways of removing the top row of `y'` and appending it to one
//! of its lower rows so that the re-sorted result is `y`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{internal, invalid, Result};
use crate::partition::{enumerate_ordered, Partition};

/// Dense matrix of exact rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(invalid("ragged matrix rows"));
        }
        let data = rows.iter().flatten().map(|&x| BigRational::from_integer(x.into())).collect();
        Ok(RationalMatrix { rows: rows.len(), cols: ncols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigRational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[BigRational]) -> Result<Vec<BigRational>> {
        if x.len() != self.cols {
            return Err(invalid(format!("vector length {} != {} columns", x.len(), self.cols)));
        }
        Ok((0..self.rows).map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum()).collect())
    }

    /// Exact determinant by fraction-free elimination.
    pub fn determinant(&self) -> Result<BigRational> {
        if self.rows != self.cols {
            return Err(invalid(format!("determinant of a {}x{} matrix", self.rows, self.cols)));
        }
        let (mut ints, scale) = self.integer_rows(None);
        let (det, _) = bareiss(&mut ints, self.rows);
        Ok(BigRational::new(det, scale))
    }

    /// Solves `self * x = b` exactly. A singular matrix is reported as an
    /// internal error: every matrix solved here is known to be invertible.
    pub fn solve(&self, b: &[BigRational]) -> Result<Vec<BigRational>> {
        let n = self.rows;
        if self.cols != n {
            return Err(invalid("solve needs a square matrix"));
        }
        if b.len() != n {
            return Err(invalid(format!("right-hand side has length {}, expected {n}", b.len())));
        }
        let (mut aug, _) = self.integer_rows(Some(b));
        let (det, _) = bareiss(&mut aug, n);
        if det.is_zero() {
            return Err(internal("singular matrix in exact solve"));
        }
        let mut x = vec![BigRational::zero(); n];
        for i in (0..n).rev() {
            let row = &aug[i];
            let mut acc = BigRational::from_integer(row[n].clone());
            for j in i + 1..n {
                acc -= &x[j] * BigRational::from_integer(row[j].clone());
            }
            x[i] = acc / BigRational::from_integer(row[i].clone());
        }
        Ok(x)
    }

    /// Rows scaled to integers (optionally with an appended column), together
    /// with the product of the row scale factors.
    fn integer_rows(&self, extra: Option<&[BigRational]>) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut total = BigInt::one();
        let rows = (0..self.rows)
            .map(|i| {
                let mut entries: Vec<&BigRational> = self.row(i).iter().collect();
                if let Some(b) = extra {
                    entries.push(&b[i]);
                }
                let lcm = entries.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
                total *= &lcm;
                entries.into_iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
            })
            .collect();
        (rows, total)
    }
}

/// In-place Bareiss elimination on the leading `n` columns. Returns the
/// determinant of the leading `n x n` block and the number of row swaps.
fn bareiss(m: &mut [Vec<BigInt>], n: usize) -> (BigInt, usize) {
    let width = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut swaps = 0;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return (BigInt::zero(), swaps);
        };
        if p != k {
            m.swap(p, k);
            swaps += 1;
        }
        let (upper, lower) = m.split_at_mut(k + 1);
        let pivot_row = &upper[k];
        for row in lower.iter_mut().take(n - k - 1) {
            let factor = row[k].clone();
            for j in k + 1..width {
                let v = &row[j] * &pivot_row[k] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = if n == 0 { BigInt::one() } else { m[n - 1][n - 1].clone() };
    (if swaps % 2 == 1 { -det } else { det }, swaps)
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(format_rational).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// `p/q` in lowest terms, or `p` when `q = 1`.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Row and column labels of `A_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedBasis {
    pub k: u32,
    /// Every partition of `k` except `(k)`.
    pub rows: Vec<Partition>,
    /// Every partition of `k` except `(1^k)`.
    pub cols: Vec<Partition>,
}

/// Sparse form of `A_k` over the full list `Y_k`; row `r` of `A_k` is the
/// diagram `ys[r]`, column `c` is `ys[c + 1]`.
#[derive(Debug)]
pub struct SplitSystem {
    k: u32,
    ys: Vec<Partition>,
    /// For each row diagram, the (target index in `ys`, count) of its top-row moves.
    moves: Vec<Vec<(usize, u32)>>,
}

impl SplitSystem {
    fn build(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(invalid(format!("A_k needs k >= 2, got {k}")));
        }
        let ys = enumerate_ordered(k)?;
        let index: HashMap<&Partition, usize> = ys.iter().enumerate().map(|(i, y)| (y, i)).collect();
        let moves = ys[..ys.len() - 1]
            .iter()
            .map(|y| {
                let mut counts: HashMap<usize, u32> = HashMap::new();
                for target in top_row_moves(y) {
                    *counts.entry(index[&target]).or_insert(0) += 1;
                }
                let mut row: Vec<_> = counts.into_iter().collect();
                row.sort_unstable();
                row
            })
            .collect();
        Ok(SplitSystem { k, ys, moves })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// All partitions of `k` in increasing order.
    pub fn diagrams(&self) -> &[Partition] {
        &self.ys
    }

    pub fn basis(&self) -> IndexedBasis {
        let t = self.ys.len();
        IndexedBasis { k: self.k, rows: self.ys[..t - 1].to_vec(), cols: self.ys[1..].to_vec() }
    }

    pub fn dense(&self) -> RationalMatrix {
        let n = self.ys.len() - 1;
        let mut a = RationalMatrix::zeros(n, n);
        for (r, row) in self.moves.iter().enumerate() {
            if r >= 1 {
                a.set(r, r - 1, BigRational::one());
            }
            for &(target, count) in row {
                let c = target - 1;
                let value = a.get(r, c) + BigRational::from_integer(count.into());
                a.set(r, c, value);
            }
        }
        a
    }

    /// Solves `v = (w1, 0, ..., 0) + A_k w` for `w` over the integers.
    ///
    /// Row `r >= 1` reads `v_r = w_r + sum_{t > r} a_{r,t} w_t`, so every `w_r`
    /// is an affine function of the last unknown `w_(k)`; row 0 then pins that
    /// unknown with a single exact division. Returns `None` if the division is
    /// not exact.
    pub fn solve_integral(&self, v: &[BigInt], w1: &BigInt) -> Result<Option<Vec<BigInt>>> {
        let t = self.ys.len();
        if v.len() != t - 1 {
            return Err(invalid(format!("split vector has length {}, expected {}", v.len(), t - 1)));
        }
        // w_i = alpha[i] + beta[i] * x, indices 1..t into ys
        let mut alpha = vec![BigInt::zero(); t];
        let mut beta = vec![BigInt::zero(); t];
        beta[t - 1] = BigInt::one();
        for r in (1..t - 1).rev() {
            let mut a = v[r].clone();
            let mut b = BigInt::zero();
            for &(target, count) in &self.moves[r] {
                a -= &alpha[target] * count;
                b -= &beta[target] * count;
            }
            alpha[r] = a;
            beta[r] = b;
        }
        let mut numer = &v[0] - w1;
        let mut denom = BigInt::zero();
        for &(target, count) in &self.moves[0] {
            numer -= &alpha[target] * count;
            denom += &beta[target] * count;
        }
        if denom.is_zero() {
            return Err(internal(format!("A_{} is singular", self.k)));
        }
        let (x, rem) = numer.div_rem(&denom);
        if !rem.is_zero() {
            return Ok(None);
        }
        Ok(Some((1..t).map(|i| &alpha[i] + &beta[i] * &x).collect()))
    }

    /// Forward map: `(w1, 0, ..., 0) + A_k w`.
    pub fn apply(&self, w: &[BigInt], w1: &BigInt) -> Vec<BigInt> {
        self.moves
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let mut acc = if r == 0 { w1.clone() } else { w[r - 1].clone() };
                for &(target, count) in row {
                    acc += &w[target - 1] * count;
                }
                acc
            })
            .collect()
    }
}

/// Every diagram obtained by moving the top row of `y` onto one of its lower
/// rows, listed once per choice of lower row.
pub fn top_row_moves(y: &Partition) -> Vec<Partition> {
    let parts = y.parts();
    let Some((&top, rest)) = parts.split_first() else {
        return Vec::new();
    };
    (0..rest.len())
        .map(|i| {
            let mut next = rest.to_vec();
            next[i] += top;
            Partition::from_positive(next)
        })
        .collect()
}

/// Shared per-process cache of split systems.
pub fn split_system(k: u32) -> Result<Arc<SplitSystem>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<SplitSystem>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache.read().expect("split cache poisoned").get(&k) {
        return Ok(Arc::clone(s));
    }
    let built = Arc::new(SplitSystem::build(k)?);
    let mut guard = cache.write().expect("split cache poisoned");
    Ok(Arc::clone(guard.entry(k).or_insert(built)))
}

pub fn build_a(k: u32) -> Result<(IndexedBasis, RationalMatrix)> {
    let system = split_system(k)?;
    Ok((system.basis(), system.dense()))
}

/// `w = A_k^{-1} (v - (w1, 0, ..., 0))`, over the rationals.
pub fn solve_recursion_step(k: u32, v: &[BigRational], w1: &BigRational) -> Result<Vec<BigRational>> {
    let (_, a) = build_a(k)?;
    if v.len() != a.rows() {
        return Err(invalid(format!("split vector has length {}, expected {}", v.len(), a.rows())));
    }
    let mut rhs = v.to_vec();
    rhs[0] -= w1;
    a.solve(&rhs)
}

/// `|det A_k|` should be `(k-1)!`; returned signed as computed.
pub fn determinant_of_a(k: u32) -> Result<BigRational> {
    build_a(k)?.1.determinant()
}
