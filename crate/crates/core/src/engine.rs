//! Tangency invariants by complexity-descending recursion.
//!
//! Internally everything is an ordered-branch count `Ĥ = prod |Aut(P_i)| * N`.
//! For a key whose most complex constraint is a partition of `k`, the values
//! `Ĥ<y, ->` for all `y` in `Y_k` are tied to simpler keys by
//! `v = (w_1, 0, ..., 0) + A_k w`, where `v_j` splits the top row of `y_j` off
//! into a constraint at a fresh point. One solve yields the whole vector `w`,
//! and all of it is memoized.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{internal, invalid, Error, Result};
use crate::gw::{vanishing_filter, CurveClass, Degree, GwBackend};
use crate::matrix::split_system;
use crate::partition::{enumerate_ordered, Partition};
use crate::star::{scale_by_aut, star};

/// A class together with one partition per distinct point, in canonical order:
/// weight descending, then row order descending. Empty partitions and zero
/// exceptional multiplicities are dropped.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvariantKey {
    class: CurveClass,
    constraints: Vec<Partition>,
}

impl InvariantKey {
    pub fn new(class: CurveClass, constraints: impl IntoIterator<Item = Partition>) -> Result<Self> {
        let bad_degree = match class.degree() {
            Degree::Plane(d) => d < 0,
            Degree::Bidegree(a, b) => a < 0 || b < 0,
        };
        if bad_degree || class.exceptional().iter().any(|&m| m < 0) {
            return Err(invalid(format!("negative degree or multiplicity in {class}")));
        }
        Ok(Self::canonical(class.canonical(), constraints.into_iter().collect()))
    }

    fn canonical(class: CurveClass, mut constraints: Vec<Partition>) -> Self {
        constraints.retain(|p| !p.is_empty());
        constraints.sort_unstable_by(|a, b| b.weight().cmp(&a.weight()).then_with(|| b.cmp(a)));
        InvariantKey { class, constraints }
    }

    /// `N<(3d-1)>`-style single-constraint key on CP2.
    pub fn plane(d: i64, constraints: impl IntoIterator<Item = Partition>) -> Result<Self> {
        Self::new(CurveClass::cp2(d, []), constraints)
    }

    pub fn class(&self) -> &CurveClass {
        &self.class
    }

    pub fn constraints(&self) -> &[Partition] {
        &self.constraints
    }

    pub fn total_weight(&self) -> i64 {
        self.constraints.iter().map(|p| i64::from(p.weight())).sum()
    }

    /// Index zero: the constraints cut down exactly `c1(A) - 1` dimensions.
    pub fn is_on_shell(&self) -> bool {
        self.total_weight() == self.class.chern() - 1
    }

    /// `prod |Aut(P_i)|`
    pub fn aut_factor(&self) -> BigInt {
        self.constraints.iter().map(|p| BigInt::from(p.aut_order())).product()
    }

    fn with_replaced(&self, index: usize, replacement: &[Partition]) -> Self {
        let mut constraints = Vec::with_capacity(self.constraints.len() + replacement.len());
        constraints.extend(self.constraints[..index].iter().cloned());
        constraints.extend(self.constraints[index + 1..].iter().cloned());
        constraints.extend(replacement.iter().cloned());
        Self::canonical(self.class.clone(), constraints)
    }

    /// `cp2|3|()|(8);(1)`
    pub fn key_text(&self) -> String {
        let constraints: Vec<String> = self.constraints.iter().map(Partition::to_string).collect();
        format!("{}|{}", self.class.key_text(), constraints.join(";"))
    }
}

impl fmt::Display for InvariantKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key_text())
    }
}

impl FromStr for InvariantKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (class_text, constraints_text) =
            s.rsplit_once('|').ok_or_else(|| Error::Parse(format!("bad invariant key {s:?}")))?;
        let class = CurveClass::parse_key_text(class_text)?;
        Self::new(class, parse_constraints(constraints_text)?)
    }
}

/// Semicolon-separated partitions: `"(1);(1);(3)"`. Blank input means no constraints.
pub fn parse_constraints(text: &str) -> Result<Vec<Partition>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(';').map(str::parse).collect()
}

/// `(level, count)`: the largest weight among constraints with a part `>= 2`
/// and how many constraints reach it; `(1, 0)` when every part is 1.
/// The derived lexicographic order is the termination order of the recursion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComplexityRank {
    pub level: u32,
    pub count: u32,
}

pub fn complexity(key: &InvariantKey) -> ComplexityRank {
    let level = key.constraints.iter().filter(|p| !p.is_all_ones()).map(Partition::weight).max();
    match level {
        None => ComplexityRank { level: 1, count: 0 },
        Some(level) => {
            let count = key.constraints.iter().filter(|p| !p.is_all_ones() && p.weight() == level).count() as u32;
            ComplexityRank { level, count }
        }
    }
}

/// Byte form of a key for the memo: space tag, degree, exceptional
/// multiplicities, then each constraint's parts followed by a 0 byte.
/// Integers below 255 take one byte, others `0xFF` and four LE bytes.
fn encode_key(key: &InvariantKey) -> Box<[u8]> {
    fn put(out: &mut Vec<u8>, n: i64) {
        let n = n as u32;
        if n < 0xFF {
            out.push(n as u8);
        } else {
            out.push(0xFF);
            out.extend_from_slice(&n.to_le_bytes());
        }
    }
    let mut out = Vec::with_capacity(8 + key.total_weight() as usize);
    match key.class.degree() {
        Degree::Plane(d) => {
            out.push(0);
            put(&mut out, d);
        }
        Degree::Bidegree(a, b) => {
            out.push(1);
            put(&mut out, a);
            put(&mut out, b);
        }
    }
    let mults = key.class.exceptional();
    put(&mut out, mults.len() as i64);
    for &m in mults {
        put(&mut out, m);
    }
    for p in &key.constraints {
        for &m in p.parts() {
            put(&mut out, i64::from(m));
        }
        out.push(0);
    }
    out.into_boxed_slice()
}

struct KeyReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl KeyReader<'_> {
    fn done(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn get(&mut self) -> u32 {
        let b = self.bytes[self.pos];
        self.pos += 1;
        if b < 0xFF {
            return u32::from(b);
        }
        let n = u32::from_le_bytes(self.bytes[self.pos..self.pos + 4].try_into().expect("four bytes"));
        self.pos += 4;
        n
    }
}

fn decode_key(bytes: &[u8]) -> InvariantKey {
    let mut r = KeyReader { bytes, pos: 0 };
    let degree = match r.get() {
        0 => Degree::Plane(i64::from(r.get())),
        _ => {
            let a = i64::from(r.get());
            Degree::Bidegree(a, i64::from(r.get()))
        }
    };
    let len = r.get();
    let mults: Vec<i64> = (0..len).map(|_| i64::from(r.get())).collect();
    let mut constraints = Vec::new();
    let mut parts = Vec::new();
    while !r.done() {
        match r.get() {
            0 => constraints.push(Partition::from_positive(std::mem::take(&mut parts))),
            m => parts.push(m),
        }
    }
    InvariantKey { class: CurveClass::new(degree, mults), constraints }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EngineStats {
    /// Linear systems solved.
    pub solves: u64,
    pub memo_hits: u64,
    pub base_cases: u64,
    /// Blowup invariants computed from scratch.
    pub gw_evaluations: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumIdentityReport {
    pub class: CurveClass,
    /// Invariant with `c1(A) - 1` generic points.
    pub points_count: BigInt,
    /// `sum_P P! N<P>`
    pub weighted_sum: BigInt,
}

impl SumIdentityReport {
    pub fn holds(&self) -> bool {
        self.points_count == self.weighted_sum
    }
}

#[derive(Debug)]
pub struct Engine {
    gw: Arc<GwBackend>,
    /// Keyed by [`encode_key`].
    memo: DashMap<Box<[u8]>, BigInt>,
    parallel: bool,
    solves: AtomicU64,
    memo_hits: AtomicU64,
    base_cases: AtomicU64,
}

impl Default for Engine {
    fn default() -> Self {
        Self::new()
    }
}

impl Engine {
    pub fn new() -> Self {
        Self::with_backend(Arc::new(GwBackend::new()))
    }

    pub fn with_backend(gw: Arc<GwBackend>) -> Self {
        Engine {
            gw,
            memo: DashMap::new(),
            parallel: true,
            solves: AtomicU64::new(0),
            memo_hits: AtomicU64::new(0),
            base_cases: AtomicU64::new(0),
        }
    }

    /// Evaluate the subproblems of a recursion step on the rayon pool (default on).
    pub fn set_parallel(&mut self, parallel: bool) {
        self.parallel = parallel;
    }

    pub fn gw(&self) -> &GwBackend {
        &self.gw
    }

    pub fn stats(&self) -> EngineStats {
        EngineStats {
            solves: self.solves.load(Ordering::Relaxed),
            memo_hits: self.memo_hits.load(Ordering::Relaxed),
            base_cases: self.base_cases.load(Ordering::Relaxed),
            gw_evaluations: self.gw.evaluations(),
        }
    }

    /// The ordered-branch invariant `Ĥ`. Off-shell keys give 0.
    pub fn compute_hat_n(&self, key: &InvariantKey) -> Result<BigInt> {
        if !key.is_on_shell() {
            return Ok(BigInt::zero());
        }
        self.hat(key)
    }

    fn hat(&self, key: &InvariantKey) -> Result<BigInt> {
        let packed = encode_key(key);
        if let Some(v) = self.memo.get(&packed) {
            self.memo_hits.fetch_add(1, Ordering::Relaxed);
            return Ok(v.clone());
        }
        let Some(target) = key.constraints.iter().position(|p| !p.is_all_ones()) else {
            let value = self.base_case(key)?;
            self.memo.insert(packed, value.clone());
            return Ok(value);
        };
        self.solve_step(key, target)?;
        self.memo
            .get(&packed)
            .map(|v| v.clone())
            .ok_or_else(|| internal(format!("recursion step did not produce {key}")))
    }

    /// `prod b_i! * GW(A - sum b_i E_i)` for constraints `(1^{b_i})`.
    fn base_case(&self, key: &InvariantKey) -> Result<BigInt> {
        self.base_cases.fetch_add(1, Ordering::Relaxed);
        let class = key.class.with_exceptional(key.constraints.iter().map(|p| p.len() as i64));
        let gw = self.gw.gw_blowup(&class)?;
        Ok(gw * key.aut_factor())
    }

    fn solve_step(&self, key: &InvariantKey, target: usize) -> Result<()> {
        let rank = complexity(key);
        let k = key.constraints[target].weight();
        let system = split_system(k)?;
        let ys = system.diagrams();
        let t = ys.len();

        let split_keys: Vec<InvariantKey> = ys[..t - 1]
            .iter()
            .map(|y| {
                let (top, rest) = y.split_top_row().expect("partitions of k >= 1 are nonempty");
                key.with_replaced(target, &[top, rest])
            })
            .collect();
        let ones_key = key.with_replaced(target, &[Partition::ones(k)]);
        for sub in split_keys.iter().chain(std::iter::once(&ones_key)) {
            if complexity(sub) >= rank {
                return Err(internal(format!(
                    "complexity did not descend: {key} {rank:?} -> {sub} {:?}",
                    complexity(sub)
                )));
            }
        }

        let v: Vec<BigInt> = if self.parallel && t > 3 {
            split_keys.par_iter().map(|sub| self.hat(sub)).collect::<Result<_>>()?
        } else {
            split_keys.iter().map(|sub| self.hat(sub)).collect::<Result<_>>()?
        };
        let w1 = self.hat(&ones_key)?;
        let w = system
            .solve_integral(&v, &w1)?
            .ok_or_else(|| internal(format!("non-integral solution of the A_{k} system at {key}")))?;
        self.solves.fetch_add(1, Ordering::Relaxed);
        for (y, value) in ys[1..].iter().zip(w) {
            self.memo.insert(encode_key(&key.with_replaced(target, std::slice::from_ref(y))), value);
        }
        Ok(())
    }

    /// The unordered count `N = Ĥ / prod |Aut(P_i)|`.
    pub fn compute_n(&self, key: &InvariantKey) -> Result<BigInt> {
        let hat = self.compute_hat_n(key)?;
        let (n, rem) = hat.div_rem(&key.aut_factor());
        if !rem.is_zero() {
            return Err(internal(format!("Ĥ = {hat} at {key} is not divisible by its automorphism factor")));
        }
        if let [p] = key.constraints() {
            if !n.is_zero() && key.is_on_shell() && vanishing_filter(key.class(), p) {
                return Err(internal(format!("{key} should vanish but evaluated to {n}")));
            }
        }
        Ok(n)
    }

    /// Merging the first two constraints into one point:
    /// `N<P1, P2, -> = sum_P <P1*P2, P> |Aut P| / (|Aut P1| |Aut P2|) N<P, ->`.
    pub fn combine_forward(&self, key: &InvariantKey) -> Result<Vec<(InvariantKey, BigRational)>> {
        let [p1, p2, ..] = key.constraints() else {
            return Err(invalid(format!("{key} has fewer than two constraints")));
        };
        let expansion = star(p1, p2)?;
        Ok(expansion
            .iter()
            .map(|(p, c)| {
                let mut constraints = vec![p.clone()];
                constraints.extend(key.constraints[2..].iter().cloned());
                let merged = InvariantKey::canonical(key.class.clone(), constraints);
                (merged, scale_by_aut(c, p1, p2, p))
            })
            .collect())
    }

    /// Both sides of [`Engine::combine_forward`], evaluated.
    pub fn forward_sides(&self, key: &InvariantKey) -> Result<(BigRational, BigRational)> {
        let lhs = BigRational::from_integer(self.compute_n(key)?);
        let mut rhs = BigRational::zero();
        for (merged, coeff) in self.combine_forward(key)? {
            rhs += coeff * BigRational::from_integer(self.compute_n(&merged)?);
        }
        Ok((lhs, rhs))
    }

    /// `N<p_1, ..., p_m> = sum_{P in Part_m} P! N<P>` with `m = c1(A) - 1`.
    pub fn verify_sum_identity(&self, class: &CurveClass) -> Result<SumIdentityReport> {
        let m = class.chern() - 1;
        if m < 1 {
            return Err(invalid(format!("{class} has c1 < 2")));
        }
        let points_count = self.gw.gw_blowup(&class.with_exceptional(std::iter::repeat_n(1, m as usize)))?;
        let mut weighted_sum = BigInt::zero();
        for (p, n) in self.full_table(class)? {
            weighted_sum += BigInt::from(p.multinomial()) * n;
        }
        Ok(SumIdentityReport { class: class.clone(), points_count, weighted_sum })
    }

    /// Every nonzero `N<P>` with `P` a partition of `c1(A) - 1`.
    pub fn full_table(&self, class: &CurveClass) -> Result<BTreeMap<Partition, BigInt>> {
        let m = class.chern() - 1;
        if m < 1 {
            return Err(invalid(format!("{class} has c1 < 2")));
        }
        let partitions = enumerate_ordered(m as u32)?;
        let values: Vec<(Partition, BigInt)> = partitions
            .into_par_iter()
            .map(|p| {
                let key = InvariantKey::new(class.clone(), [p.clone()])?;
                Ok((p, self.compute_n(&key)?))
            })
            .collect::<Result<_>>()?;
        Ok(values.into_iter().filter(|(_, n)| !n.is_zero()).collect())
    }

    /// `T_d = N<(3d - 1)>` on CP2.
    pub fn tangency_max(&self, d: u32) -> Result<BigInt> {
        if d < 1 {
            return Err(invalid("degree must be at least 1"));
        }
        self.compute_n(&InvariantKey::plane(i64::from(d), [Partition::row(3 * d - 1)])?)
    }

    /// Whether `Ĥ` of `key` is already known.
    pub fn is_memoized(&self, key: &InvariantKey) -> bool {
        self.memo.contains_key(&encode_key(key))
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Snapshot of the memoized `Ĥ` values, sorted by key.
    pub fn entries(&self) -> Vec<(InvariantKey, BigInt)> {
        let mut out: Vec<_> = self.memo.iter().map(|e| (decode_key(e.key()), e.value().clone())).collect();
        out.sort();
        out
    }

    /// Seeds the memo with a previously computed `Ĥ` value.
    pub fn insert(&self, key: InvariantKey, hat: BigInt) {
        self.memo.insert(encode_key(&key), hat);
    }
}
