//! Genus-zero Gromov–Witten invariants of blowups of the projective plane.
//!
//! For a class `dL - sum m_i E_i` on `Bl^r CP2` we write `N(d; m)` for the
//! invariant with `3d - 1 - sum m_i` point insertions. These are computed from
//! two instances of the WDVV associativity relation, each evaluated on the
//! boundary of `M_{0,4}` with the divisor axiom applied to every divisor
//! insertion:
//!
//! * with insertions `(L, L, pt, pt)` in class `beta` (needs at least three
//!   points), which reduces the degree;
//! * with insertions `(L, L, E_j, E_j)` in class `beta + E_j`, where the split
//!   `beta + E_j = beta + E_j` contributes `m_j d^2 N(beta)`. This isolates
//!   `N(beta)` even when `beta` has no point insertions, at the price of one
//!   invariant in the same degree with `m_j` lowered by one.
//!
//! A multiplicity-one exceptional slot is equivalent to a point insertion and a
//! zero slot is inert, so cache keys keep only multiplicities `>= 2`.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use dashmap::DashMap;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{internal, invalid, Error, Result};
use crate::partition::{factorial, Partition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Space {
    Cp2,
    P1xP1,
}

impl Space {
    pub fn tag(self) -> &'static str {
        match self {
            Space::Cp2 => "cp2",
            Space::P1xP1 => "p1xp1",
        }
    }
}

impl FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cp2" => Ok(Space::Cp2),
            "p1xp1" => Ok(Space::P1xP1),
            other => Err(Error::Parse(format!("unknown space {other:?} (expected cp2 or p1xp1)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Degree {
    /// `d[L]` on CP2.
    Plane(i64),
    /// `a[L_1] + b[L_2]` on CP1 x CP1.
    Bidegree(i64, i64),
}

/// A homology class on a (possibly blown-up) CP2 or CP1 x CP1:
/// the base degree minus `sum m_i [E_i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveClass {
    degree: Degree,
    /// Coefficients of `-[E_i]`, sorted descending.
    exceptional: Vec<i64>,
}

impl CurveClass {
    pub fn new(degree: Degree, exceptional: impl Into<Vec<i64>>) -> Self {
        let mut exceptional = exceptional.into();
        exceptional.sort_unstable_by(|a, b| b.cmp(a));
        CurveClass { degree, exceptional }
    }

    pub fn cp2(d: i64, exceptional: impl Into<Vec<i64>>) -> Self {
        Self::new(Degree::Plane(d), exceptional)
    }

    pub fn p1xp1(a: i64, b: i64, exceptional: impl Into<Vec<i64>>) -> Self {
        Self::new(Degree::Bidegree(a, b), exceptional)
    }

    pub fn space(&self) -> Space {
        match self.degree {
            Degree::Plane(_) => Space::Cp2,
            Degree::Bidegree(..) => Space::P1xP1,
        }
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }

    pub fn exceptional(&self) -> &[i64] {
        &self.exceptional
    }

    pub fn chern(&self) -> i64 {
        let base = match self.degree {
            Degree::Plane(d) => 3 * d,
            Degree::Bidegree(a, b) => 2 * a + 2 * b,
        };
        base - self.exceptional.iter().sum::<i64>()
    }

    pub fn self_intersection(&self) -> i64 {
        let base = match self.degree {
            Degree::Plane(d) => d * d,
            Degree::Bidegree(a, b) => 2 * a * b,
        };
        base - self.exceptional.iter().map(|m| m * m).sum::<i64>()
    }

    /// Double points of an immersed rational curve in this class,
    /// `(A.A - c1(A)) / 2 + 1`.
    pub fn double_points(&self) -> i64 {
        (self.self_intersection() - self.chern()) / 2 + 1
    }

    /// The same class with further exceptional slots appended.
    pub fn with_exceptional(&self, extra: impl IntoIterator<Item = i64>) -> Self {
        let mut exceptional = self.exceptional.clone();
        exceptional.extend(extra);
        Self::new(self.degree, exceptional)
    }

    /// Zero slots removed.
    pub fn canonical(&self) -> Self {
        let exceptional: Vec<i64> = self.exceptional.iter().copied().filter(|&m| m != 0).collect();
        CurveClass { degree: self.degree, exceptional }
    }

    /// Text form used in cache keys: `cp2|3|(2,1)` or `p1xp1|2,1|()`.
    pub fn key_text(&self) -> String {
        let degree = match self.degree {
            Degree::Plane(d) => format!("cp2|{d}"),
            Degree::Bidegree(a, b) => format!("p1xp1|{a},{b}"),
        };
        let mults: Vec<String> = self.exceptional.iter().map(i64::to_string).collect();
        format!("{degree}|({})", mults.join(","))
    }

    pub fn parse_key_text(text: &str) -> Result<Self> {
        let fields: Vec<&str> = text.split('|').collect();
        let [space, degree, mults] = fields[..] else {
            return Err(Error::Parse(format!("bad class text {text:?}")));
        };
        let degree = parse_degree(space.parse()?, degree)?;
        let inner = mults
            .strip_prefix('(')
            .and_then(|m| m.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("bad multiplicities in {text:?}")))?;
        let exceptional = if inner.is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|m| m.parse::<i64>().map_err(|_| Error::Parse(format!("bad multiplicity {m:?}"))))
                .collect::<Result<_>>()?
        };
        Ok(CurveClass::new(degree, exceptional))
    }
}

/// Parses `"3"` for CP2 or `"a,b"` for CP1 x CP1.
pub fn parse_degree(space: Space, text: &str) -> Result<Degree> {
    let nums = text
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad degree {text:?}"))))
        .collect::<Result<Vec<_>>>()?;
    match (space, &nums[..]) {
        (Space::Cp2, &[d]) => Ok(Degree::Plane(d)),
        (Space::P1xP1, &[a, b]) => Ok(Degree::Bidegree(a, b)),
        (Space::Cp2, _) => Err(Error::Parse(format!("cp2 degree must be one integer, got {text:?}"))),
        (Space::P1xP1, _) => Err(Error::Parse(format!("p1xp1 degree must be a,b, got {text:?}"))),
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key_text())
    }
}

/// `Bl^1(CP1 x CP1) = Bl^2 CP2` on homology: `L_1 -> L - E_1`, `L_2 -> L - E_2`,
/// `E -> L - E_1 - E_2`. A bidegree `(a, b)` class becomes
/// `(a+b)L - b E_1 - a E_2` and later exceptional slots shift by two.
pub fn translate_p1xp1(class: &CurveClass) -> CurveClass {
    match class.degree {
        Degree::Plane(_) => class.clone(),
        Degree::Bidegree(a, b) => {
            let mut exceptional = vec![b, a];
            exceptional.extend_from_slice(&class.exceptional);
            CurveClass::cp2(a + b, exceptional)
        }
    }
}

/// One quadratic Cremona move on the three largest multiplicities:
/// `(d; m1, m2, m3, ...) -> (2d - m1 - m2 - m3; d - m2 - m3, d - m1 - m3, d - m1 - m2, ...)`.
pub fn cremona_move(class: &CurveClass) -> CurveClass {
    let class = translate_p1xp1(class);
    let Degree::Plane(d) = class.degree else { unreachable!() };
    let mut m = class.exceptional.clone();
    while m.len() < 3 {
        m.push(0);
    }
    let (m1, m2, m3) = (m[0], m[1], m[2]);
    m[0] = d - m2 - m3;
    m[1] = d - m1 - m3;
    m[2] = d - m1 - m2;
    CurveClass::cp2(2 * d - m1 - m2 - m3, m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExceptionalStatus {
    Exceptional,
    NotExceptional,
    /// The reduction hit a negative multiplicity in positive degree or ran
    /// past the step bound.
    Undetermined,
}

pub const CREMONA_STEP_LIMIT: usize = 200;

/// Decides whether a class is that of an exceptional sphere by Cremona
/// reduction to a single `[E_i]`.
pub fn exceptional_status(class: &CurveClass) -> ExceptionalStatus {
    let mut class = translate_p1xp1(class);
    if class.self_intersection() != -1 || class.chern() != 1 {
        return ExceptionalStatus::NotExceptional;
    }
    for _ in 0..CREMONA_STEP_LIMIT {
        let Degree::Plane(d) = class.degree else { unreachable!() };
        let nonzero: Vec<i64> = class.exceptional.iter().copied().filter(|&m| m != 0).collect();
        if d == 0 {
            return if nonzero == [-1] { ExceptionalStatus::Exceptional } else { ExceptionalStatus::NotExceptional };
        }
        if d < 0 {
            return ExceptionalStatus::NotExceptional;
        }
        if nonzero.iter().any(|&m| m < 0) {
            return ExceptionalStatus::Undetermined;
        }
        let top3: i64 = class.exceptional.iter().take(3).sum();
        if top3 <= d {
            // reduced, positive degree
            return ExceptionalStatus::NotExceptional;
        }
        class = cremona_move(&class);
    }
    ExceptionalStatus::Undetermined
}

pub fn is_exceptional(class: &CurveClass) -> bool {
    exceptional_status(class) == ExceptionalStatus::Exceptional
}

/// True when a single-point invariant `N<P>` in `class` is forced to vanish:
/// either `delta(P) > delta(A)`, or `class` is a bidegree `(d, 0)` / `(0, d)`
/// class with `d > 1`, which has no somewhere injective representatives.
pub fn vanishing_filter(class: &CurveClass, p: &Partition) -> bool {
    if let Degree::Bidegree(a, b) = class.degree {
        if class.exceptional.iter().all(|&m| m == 0) && ((b == 0 && a > 1) || (a == 0 && b > 1)) {
            return true;
        }
    }
    p.delta() as i64 > class.double_points()
}

/// `(3d - 2)! / (d!)^3`, the normalized full-descendant point invariant.
pub fn descendant_comparison(d: u32) -> Result<BigRational> {
    if d < 1 {
        return Err(invalid("descendant comparison needs d >= 1"));
    }
    let numer = BigInt::from(factorial(3 * d - 2));
    let denom = BigInt::from(factorial(d).pow(3));
    Ok(BigRational::new(numer, denom))
}

/// Rational plane curves of degree `d` through `3d - 1` points, by
/// Kontsevich's recursion.
pub fn kontsevich_count(d: u32) -> Result<BigInt> {
    if d < 1 {
        return Err(invalid("kontsevich_count needs d >= 1"));
    }
    let d = d as usize;
    let mut n = vec![BigInt::zero(); d + 1];
    n[1] = BigInt::one();
    for total in 2..=d {
        let mut acc = BigInt::zero();
        for da in 1..total {
            let db = total - da;
            let (a, b) = (da as i64, db as i64);
            let top = 3 * total as i64 - 4;
            let bracket = b * binomial(top, 3 * a - 2) - a * binomial(top, 3 * a - 1);
            acc += &n[da] * &n[db] * (a * a * b) * bracket;
        }
        n[total] = acc;
    }
    Ok(n.swap_remove(d))
}

fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Canonical memo key: degree and the multiplicities `>= 2`, descending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GwKey {
    pub degree: u32,
    pub mults: Vec<u32>,
}

impl GwKey {
    /// Implied number of point insertions.
    pub fn points(&self) -> i64 {
        3 * i64::from(self.degree) - 1 - self.mults.iter().map(|&m| i64::from(m)).sum::<i64>()
    }

    /// `d=3;m=(2,2);n=4`
    pub fn key_text(&self) -> String {
        let mults: Vec<String> = self.mults.iter().map(u32::to_string).collect();
        format!("d={};m=({});n={}", self.degree, mults.join(","), self.points())
    }

    pub fn parse_key_text(text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad blowup key {text:?}"));
        let mut fields = text.split(';');
        let degree =
            fields.next().and_then(|f| f.strip_prefix("d=")).and_then(|d| d.parse::<u32>().ok()).ok_or_else(bad)?;
        let mults_text =
            fields.next().and_then(|f| f.strip_prefix("m=(")).and_then(|f| f.strip_suffix(')')).ok_or_else(bad)?;
        let mut mults: Vec<u32> = if mults_text.is_empty() {
            Vec::new()
        } else {
            mults_text.split(',').map(|m| m.parse().map_err(|_| bad())).collect::<Result<_>>()?
        };
        mults.sort_unstable_by(|a, b| b.cmp(a));
        if mults.iter().any(|&m| m < 2) {
            return Err(bad());
        }
        let key = GwKey { degree, mults };
        if let Some(n) = fields.next() {
            if n.strip_prefix("n=").and_then(|n| n.parse::<i64>().ok()) != Some(key.points()) {
                return Err(bad());
            }
        }
        Ok(key)
    }
}

/// Memoized blowup invariants. Safe to share between threads; concurrent
/// computations of the same key store the same value.
#[derive(Debug, Default)]
pub struct GwBackend {
    memo: DashMap<GwKey, BigInt>,
    evaluations: AtomicU64,
}

impl GwBackend {
    pub fn new() -> Self {
        Self::default()
    }

    /// `GW_{Bl^r CP2, dL - sum m_i E_i}` with no marked points. Classes on
    /// CP1 x CP1 are translated first; classes of nonzero index give zero.
    pub fn gw_blowup(&self, class: &CurveClass) -> Result<BigInt> {
        let class = translate_p1xp1(class);
        let Degree::Plane(d) = class.degree else { unreachable!() };
        if d < 0 || class.exceptional.iter().any(|&m| m < 0) {
            return Err(invalid(format!("negative degree or multiplicity in {class}")));
        }
        if class.chern() != 1 {
            return Ok(BigInt::zero());
        }
        self.points_invariant(d, &class.exceptional)
    }

    /// `N(d; m)`: the invariant of `dL - sum m_i E_i` with `3d - 1 - sum m_i`
    /// point insertions. Any input is accepted; classes without curves give 0.
    pub fn points_invariant(&self, d: i64, mults: &[i64]) -> Result<BigInt> {
        if d < 0 {
            return Ok(BigInt::zero());
        }
        if d == 0 {
            // only the exceptional curves themselves
            let mut nonzero = mults.iter().filter(|&&m| m != 0);
            let single = nonzero.next() == Some(&-1) && nonzero.next().is_none();
            return Ok(if single { BigInt::one() } else { BigInt::zero() });
        }
        if mults.iter().any(|&m| m < 0 || m > d) {
            return Ok(BigInt::zero());
        }
        if 3 * d - 1 - mults.iter().sum::<i64>() < 0 {
            return Ok(BigInt::zero());
        }
        let mut key_mults: Vec<u32> = mults.iter().filter(|&&m| m >= 2).map(|&m| m as u32).collect();
        key_mults.sort_unstable_by(|a, b| b.cmp(a));
        self.lookup(&GwKey { degree: d as u32, mults: key_mults })
    }

    pub fn lookup(&self, key: &GwKey) -> Result<BigInt> {
        if let Some(v) = self.memo.get(key) {
            return Ok(v.clone());
        }
        let value = self.compute(key)?;
        self.memo.insert(key.clone(), value.clone());
        Ok(value)
    }

    fn compute(&self, key: &GwKey) -> Result<BigInt> {
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        let d = i64::from(key.degree);
        if key.mults.first().is_some_and(|&m| i64::from(m) > d) || key.points() < 0 {
            return Ok(BigInt::zero());
        }
        if d == 1 && key.mults.is_empty() {
            return Ok(BigInt::one());
        }
        if key.points() >= 3 {
            self.point_relation(key)
        } else {
            self.exceptional_relation(key)
        }
    }

    /// WDVV with `(L, L, pt, pt)`:
    /// `N(beta) = sum N1 N2 (b1.b2) d1 [d2 C(s, n1 - 1) - d1 C(s, n1)]`, `s = n - 3`.
    fn point_relation(&self, key: &GwKey) -> Result<BigInt> {
        let d = i64::from(key.degree);
        let s = key.points() - 3;
        let groups = group_mults(&key.mults, None);
        let mut total = BigInt::zero();
        for d1 in 1..d {
            let d2 = d - d1;
            let mut err = None;
            for_each_split(&groups, d1, d2, &mut |split| {
                if err.is_some() {
                    return;
                }
                let bracket = d2 * binomial(s, split.n1 - 1) - d1 * binomial(s, split.n1);
                if bracket.is_zero() || split.pairing == 0 {
                    return;
                }
                match self.split_product(d1, d2, split) {
                    Ok(prod) if prod.is_zero() => {}
                    Ok(prod) => total += prod * split.pairing * d1 * bracket * &split.weight,
                    Err(e) => err = Some(e),
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
        Ok(total)
    }

    /// WDVV with `(L, L, E, E)` in class `gamma = beta + E`, `E` the slot of the
    /// largest multiplicity `a`:
    /// `[(a-1)^2 - d^2] N(gamma) + a d^2 N(beta)
    ///     + sum N1 N2 (b1.b2) d1^2 e2^2 C(s, n1)
    ///     = sum N1 N2 (b1.b2) d1 e1 d2 e2 C(s, n1)`,
    /// with `s = n(beta)` and `e_i` the `E`-coefficient of `beta_i`.
    fn exceptional_relation(&self, key: &GwKey) -> Result<BigInt> {
        let d = i64::from(key.degree);
        let a = i64::from(key.mults[0]);
        let s = key.points();
        let mut gamma: Vec<i64> = key.mults.iter().map(|&m| i64::from(m)).collect();
        gamma[0] -= 1;
        let n_gamma = self.points_invariant(d, &gamma)?;
        let gamma_u: Vec<u32> = gamma[1..].iter().map(|&m| m as u32).collect();
        let groups = group_mults(&gamma_u, Some(gamma[0] as u32));

        let mut rhs_minus_lhs = BigInt::zero();
        for d1 in 1..d {
            let d2 = d - d1;
            let mut err = None;
            for_each_split(&groups, d1, d2, &mut |split| {
                if err.is_some() || split.pairing == 0 {
                    return;
                }
                let binom = binomial(s, split.n1);
                if binom.is_zero() {
                    return;
                }
                let (e1, e2) = (split.special1, split.special2);
                let coeff = d1 * e1 * d2 * e2 - d1 * d1 * e2 * e2;
                if coeff == 0 {
                    return;
                }
                match self.split_product(d1, d2, split) {
                    Ok(prod) if prod.is_zero() => {}
                    Ok(prod) => rhs_minus_lhs += prod * split.pairing * coeff * binom * &split.weight,
                    Err(e) => err = Some(e),
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
        let numer = rhs_minus_lhs - n_gamma * ((a - 1) * (a - 1) - d * d);
        let denom = BigInt::from(a * d * d);
        let (q, r) = numer.div_rem(&denom);
        if !r.is_zero() {
            return Err(internal(format!("blowup relation for d={d}, m={:?} is not divisible by {denom}", key.mults)));
        }
        Ok(q)
    }

    fn split_product(&self, d1: i64, d2: i64, split: &Split) -> Result<BigInt> {
        let n1 = self.points_invariant(d1, &split.mults1)?;
        if n1.is_zero() {
            return Ok(n1);
        }
        Ok(n1 * self.points_invariant(d2, &split.mults2)?)
    }

    /// Number of nontrivial evaluations since construction.
    pub fn evaluations(&self) -> u64 {
        self.evaluations.load(Ordering::Relaxed)
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    /// Snapshot of the memo, sorted by key.
    pub fn entries(&self) -> Vec<(GwKey, BigInt)> {
        let mut out: Vec<_> = self.memo.iter().map(|e| (e.key().clone(), e.value().clone())).collect();
        out.sort();
        out
    }

    pub fn insert(&self, key: GwKey, value: BigInt) {
        self.memo.insert(key, value);
    }
}

#[derive(Debug)]
struct Group {
    value: u32,
    count: u32,
    special: bool,
}

fn group_mults(mults: &[u32], special: Option<u32>) -> Vec<Group> {
    let mut groups: Vec<Group> = Vec::new();
    if let Some(value) = special {
        groups.push(Group { value, count: 1, special: true });
    }
    let mut sorted = mults.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    for m in sorted.into_iter().filter(|&m| m > 0) {
        match groups.last_mut() {
            Some(g) if !g.special && g.value == m => g.count += 1,
            _ => groups.push(Group { value: m, count: 1, special: false }),
        }
    }
    groups
}

/// One way of writing `(d; m) = (d1; m1) + (d2; m2)` up to permuting equal
/// multiplicities; `weight` counts the slot assignments it stands for.
#[derive(Debug)]
struct Split {
    mults1: Vec<i64>,
    mults2: Vec<i64>,
    weight: BigInt,
    /// `beta1 . beta2`
    pairing: i64,
    n1: i64,
    special1: i64,
    special2: i64,
}

fn for_each_split(groups: &[Group], d1: i64, d2: i64, f: &mut dyn FnMut(&Split)) {
    let mut split = Split {
        mults1: Vec::new(),
        mults2: Vec::new(),
        weight: BigInt::one(),
        pairing: d1 * d2,
        n1: 0,
        special1: 0,
        special2: 0,
    };
    split_groups(groups, d1, d2, &mut split, f);
}

fn split_groups(groups: &[Group], d1: i64, d2: i64, split: &mut Split, f: &mut dyn FnMut(&Split)) {
    let Some((group, rest)) = groups.split_first() else {
        split.n1 = 3 * d1 - 1 - split.mults1.iter().sum::<i64>();
        f(split);
        return;
    };
    let v = i64::from(group.value);
    let lo = (v - d2).max(0);
    let hi = v.min(d1);
    if lo > hi {
        return;
    }
    let mut counts = Vec::new();
    distribute(group, rest, lo, hi, group.count, &mut counts, d1, d2, split, f);
}

/// Chooses how many slots of `group` give `t` to the first class, for each
/// `t` in `lo..=hi`.
#[allow(clippy::too_many_arguments)]
fn distribute(
    group: &Group,
    rest: &[Group],
    t: i64,
    hi: i64,
    remaining: u32,
    counts: &mut Vec<(i64, u32)>,
    d1: i64,
    d2: i64,
    split: &mut Split,
    f: &mut dyn FnMut(&Split),
) {
    let v = i64::from(group.value);
    if t == hi {
        counts.push((t, remaining));
        let (len1, len2) = (split.mults1.len(), split.mults2.len());
        let saved_weight = split.weight.clone();
        let saved_pairing = split.pairing;
        let mut ok = true;
        let mut multinom = BigInt::one();
        let mut used = 0u32;
        for &(t, c) in counts.iter() {
            for _ in 0..c {
                split.mults1.push(t);
                split.mults2.push(v - t);
            }
            split.pairing -= i64::from(c) * t * (v - t);
            used += c;
            multinom *=
                BigInt::from(factorial(used)) / (BigInt::from(factorial(used - c)) * BigInt::from(factorial(c)));
            if group.special && c == 1 {
                split.special1 = t;
                split.special2 = v - t;
            }
        }
        let sum1: i64 = split.mults1.iter().sum();
        let sum2: i64 = split.mults2.iter().sum();
        if sum1 > 3 * d1 - 1 || sum2 > 3 * d2 - 1 {
            ok = false;
        }
        if ok {
            split.weight *= multinom;
            split_groups(rest, d1, d2, split, f);
        }
        split.weight = saved_weight;
        split.pairing = saved_pairing;
        split.mults1.truncate(len1);
        split.mults2.truncate(len2);
        counts.pop();
        return;
    }
    for c in 0..=remaining {
        counts.push((t, c));
        distribute(group, rest, t + 1, hi, remaining - c, counts, d1, d2, split, f);
        counts.pop();
    }
}
