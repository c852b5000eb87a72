//! `verify`: regression against published values plus internal consistency checks.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use tangentcount::partition::enumerate_ordered;
use tangentcount::{determinant_of_a, kontsevich_count, star, CurveClass, Engine, InvariantKey, Partition};

use crate::output::Table;

const TANGENCY_MAX: [u64; 9] = [1, 1, 4, 26, 217, 2110, 22744, 264057, 3242395];

const POINT_COUNTS: [&str; 9] =
    ["1", "1", "12", "620", "87304", "26312976", "14616808192", "13525751027392", "19385778269260800"];

/// Every nonzero `N_d<P>` for `d <= 6`, as `(d, partition, value)`.
const SINGLE_POINT: [(i64, &str, u64); 51] = [
    (1, "(2)", 1),
    (2, "(5)", 1),
    (3, "(7,1)", 1),
    (3, "(8)", 4),
    (4, "(8,3)", 1),
    (4, "(9,1,1)", 1),
    (4, "(9,2)", 3),
    (4, "(10,1)", 14),
    (4, "(11)", 26),
    (5, "(8,6)", 1),
    (5, "(9,4,1)", 1),
    (5, "(9,5)", 3),
    (5, "(10,3,1)", 5),
    (5, "(10,4)", 9),
    (5, "(11,1,1,1)", 1),
    (5, "(11,2,1)", 12),
    (5, "(11,3)", 27),
    (5, "(12,1,1)", 34),
    (5, "(12,2)", 57),
    (5, "(13,1)", 182),
    (5, "(14)", 217),
    (6, "(8,8,1)", 1),
    (6, "(9,6,2)", 1),
    (6, "(9,7,1)", 4),
    (6, "(9,8)", 13),
    (6, "(10,4,3)", 1),
    (6, "(10,5,1,1)", 1),
    (6, "(10,5,2)", 2),
    (6, "(10,6,1)", 14),
    (6, "(10,7)", 22),
    (6, "(11,3,3)", 4),
    (6, "(11,4,1,1)", 5),
    (6, "(11,4,2)", 6),
    (6, "(11,5,1)", 34),
    (6, "(11,6)", 56),
    (6, "(12,3,1,1)", 15),
    (6, "(12,3,2)", 25),
    (6, "(12,4,1)", 84),
    (6, "(12,5)", 114),
    (6, "(13,1,1,1,1)", 1),
    (6, "(13,2,1,1)", 31),
    (6, "(13,2,2)", 32),
    (6, "(13,3,1)", 210),
    (6, "(13,4)", 230),
    (6, "(14,1,1,1)", 69),
    (6, "(14,2,1)", 418),
    (6, "(14,3)", 487),
    (6, "(15,1,1)", 771),
    (6, "(15,2)", 892),
    (6, "(16,1)", 2414),
    (6, "(17)", 2110),
];

pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn table(&self) -> Table {
        let mut table = Table::new(["check", "status", "detail"]);
        for c in &self.checks {
            table.push([c.name.to_string(), if c.passed { "PASS" } else { "FAIL" }.to_string(), c.detail.clone()]);
        }
        table
    }
}

type Outcome = Result<String, String>;
type NamedCheck<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

pub fn run(engine: &Engine, max_d: u32) -> Report {
    let max_d = max_d.max(1);
    let checks: Vec<NamedCheck<'_>> = vec![
        ("tangency-max", Box::new(|| tangency_max(engine, max_d.min(9)))),
        ("single-point-table", Box::new(|| single_point_table(engine, max_d.min(6)))),
        ("point-counts", Box::new(|| point_counts(max_d.min(9)))),
        ("sum-identity", Box::new(|| sum_identity(engine, max_d))),
        ("determinant-law", Box::new(|| determinant_law((3 * max_d - 1).clamp(2, 14)))),
        ("point-merge", Box::new(|| point_merge(engine, max_d))),
        ("star-oracle", Box::new(star_oracle)),
    ];
    let checks = checks
        .into_iter()
        .map(|(name, check)| {
            let (passed, detail) = match check() {
                Ok(detail) => (true, detail),
                Err(detail) => (false, detail),
            };
            CheckResult { name, passed, detail }
        })
        .collect();
    Report { checks }
}

fn fail(e: impl ToString) -> String {
    e.to_string()
}

fn tangency_max(engine: &Engine, max_d: u32) -> Outcome {
    for d in 1..=max_d {
        let t = engine.tangency_max(d).map_err(fail)?;
        if t != BigInt::from(TANGENCY_MAX[d as usize - 1]) {
            return Err(format!("T_{d} = {t}, expected {}", TANGENCY_MAX[d as usize - 1]));
        }
    }
    Ok(format!("T_d for d <= {max_d}"))
}

fn single_point_table(engine: &Engine, max_d: u32) -> Outcome {
    let mut expected: BTreeMap<(i64, Partition), BigInt> = BTreeMap::new();
    for (d, p, v) in SINGLE_POINT {
        expected.insert((d, p.parse().map_err(fail)?), BigInt::from(v));
    }
    let mut count = 0;
    for d in 1..=i64::from(max_d) {
        let table = engine.full_table(&CurveClass::cp2(d, [])).map_err(fail)?;
        let want: BTreeMap<&Partition, &BigInt> =
            expected.iter().filter(|((dd, _), _)| *dd == d).map(|((_, p), v)| (p, v)).collect();
        let got: BTreeMap<&Partition, &BigInt> = table.iter().collect();
        if got != want {
            return Err(format!("degree {d}: got {got:?}"));
        }
        count += want.len();
    }
    Ok(format!("{count} nonzero values, no others, for d <= {max_d}"))
}

fn point_counts(max_d: u32) -> Outcome {
    for d in 1..=max_d {
        let n = kontsevich_count(d).map_err(fail)?;
        if n.to_string() != POINT_COUNTS[d as usize - 1] {
            return Err(format!("N_{d} = {n}"));
        }
    }
    Ok(format!("N_d for d <= {max_d}"))
}

fn sum_identity(engine: &Engine, max_d: u32) -> Outcome {
    for d in 1..=i64::from(max_d) {
        let report = engine.verify_sum_identity(&CurveClass::cp2(d, [])).map_err(fail)?;
        if !report.holds() {
            return Err(format!("d = {d}: {} != {}", report.points_count, report.weighted_sum));
        }
    }
    Ok(format!("sum of P! N_d<P> equals N_d for d <= {max_d}"))
}

fn determinant_law(max_k: u32) -> Outcome {
    for k in 2..=max_k {
        let det = determinant_of_a(k).map_err(fail)?;
        let fact: BigInt = (1..k).map(BigInt::from).product();
        if det.abs() != BigRational::from_integer(fact) {
            return Err(format!("det A_{k} = {det}"));
        }
    }
    Ok(format!("|det A_k| = (k-1)! for k <= {max_k}"))
}

/// Two generic points pushed together: `N_d = N<(2), 1^{3d-3}> + 2 GW(d; 2, 1^{3d-3})`.
fn point_merge(engine: &Engine, max_d: u32) -> Outcome {
    for d in 2..=i64::from(max_d) {
        let mut cs = vec![Partition::row(2)];
        cs.extend((0..3 * d - 3).map(|_| Partition::row(1)));
        let tangency = engine.compute_n(&InvariantKey::plane(d, cs).map_err(fail)?).map_err(fail)?;
        let mut m = vec![2];
        m.extend(std::iter::repeat_n(1, 3 * d as usize - 3));
        let nodal = engine.gw().gw_blowup(&CurveClass::cp2(d, m)).map_err(fail)?;
        let total = kontsevich_count(d as u32).map_err(fail)?;
        if &tangency + BigInt::from(2) * &nodal != total {
            return Err(format!("d = {d}: {tangency} + 2*{nodal} != {total}"));
        }
    }
    Ok(format!("d <= {max_d}"))
}

/// Matches rows by brute force: subsets as bitmasks, bijections as permutations.
fn star_by_enumeration(a: &[u32], b: &[u32]) -> BTreeMap<Partition, u64> {
    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![Vec::new()];
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
    let mut out = BTreeMap::new();
    for s in 0u32..(1 << a.len()) {
        for t in 0u32..(1 << b.len()) {
            if s.count_ones() != t.count_ones() {
                continue;
            }
            let ss: Vec<usize> = (0..a.len()).filter(|i| s >> i & 1 == 1).collect();
            let ts: Vec<usize> = (0..b.len()).filter(|i| t >> i & 1 == 1).collect();
            for sigma in permutations(ts.len()) {
                let mut rows: Vec<u32> = ss.iter().zip(&sigma).map(|(&i, &j)| a[i] + b[ts[j]]).collect();
                rows.extend((0..a.len()).filter(|i| s >> i & 1 == 0).map(|i| a[i]));
                rows.extend((0..b.len()).filter(|i| t >> i & 1 == 0).map(|i| b[i]));
                *out.entry(Partition::new(rows).expect("positive rows")).or_insert(0) += 1;
            }
        }
    }
    out
}

fn star_oracle() -> Outcome {
    let mut pairs = 0;
    for total in 2..=10 {
        for k in 1..total {
            for a in enumerate_ordered(k).map_err(fail)? {
                for b in enumerate_ordered(total - k).map_err(fail)? {
                    let got = star(&a, &b).map_err(fail)?;
                    if got.terms() != &star_by_enumeration(a.parts(), b.parts()) {
                        return Err(format!("{a} * {b}"));
                    }
                    pairs += 1;
                }
            }
        }
    }
    let e = star(&"(3,1,1)".parse().map_err(fail)?, &"(2,2)".parse().map_err(fail)?).map_err(fail)?;
    if e.to_string() != "1*(3,2,2,1,1) + 4*(3,3,2,1) + 2*(3,3,3) + 2*(5,2,1,1) + 4*(5,3,1)" {
        return Err(format!("(3,1,1) * (2,2) = {e}"));
    }
    Ok(format!("{pairs} pairs up to total weight 10"))
}
