//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so that each criterion reports
//! on its own line with timings. Set `TANGENTCOUNT_SKIP_EXTENDED=1` to skip
//! the degree 8 and 9 tangency counts.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;

use tangentcount::partition::{enumerate_ordered, Partition};
use tangentcount::{
    build_a, determinant_of_a, is_exceptional, kontsevich_count, parse_constraints, star, CurveClass, Engine,
    GwBackend, InvariantKey, RationalMatrix,
};

const TABLE1_BUDGET: Duration = Duration::from_secs(5 * 60);
const TABLE1_EXTENDED_BUDGET: Duration = Duration::from_secs(60 * 60);
const KONTSEVICH_BUDGET: Duration = Duration::from_secs(1);
const DETERMINANT_BUDGET: Duration = Duration::from_secs(30);

const TANGENCY_MAX: [u64; 9] = [1, 1, 4, 26, 217, 2110, 22744, 264057, 3242395];
const POINT_COUNTS: [&str; 9] =
    ["1", "1", "12", "620", "87304", "26312976", "14616808192", "13525751027392", "19385778269260800"];
const DESCENDANT_COLUMN: [(i64, i64); 9] =
    [(1, 1), (3, 1), (70, 3), (525, 2), (18018, 5), (56056, 1), (6651216, 7), (68590665, 4), (2921454250, 9)];

/// Nonzero single-point invariants of plane curves, degrees 1 to 6.
const TABLE2: [(i64, &str, u64); 51] = [
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

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: tangentcount::Error) -> String {
    e.to_string()
}

fn p(s: &str) -> Partition {
    s.parse().expect("valid partition literal")
}

fn plane_key(d: i64, constraints: &str) -> InvariantKey {
    InvariantKey::plane(d, parse_constraints(constraints).expect("valid constraints")).expect("valid key")
}

fn table1() -> Check {
    let start = Instant::now();
    let engine = Engine::new();
    for d in 1..=7u32 {
        let t = engine.tangency_max(d).map_err(err)?;
        ensure(t == BigInt::from(TANGENCY_MAX[d as usize - 1]), || format!("T_{d} = {t}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= TABLE1_BUDGET, || format!("took {elapsed:?}, budget {TABLE1_BUDGET:?}"))?;
    for d in 1..=9u32 {
        let i = d as usize - 1;
        let n = kontsevich_count(d).map_err(err)?;
        ensure(n.to_string() == POINT_COUNTS[i], || format!("N_{d} = {n}"))?;
        let q = tangentcount::descendant_comparison(d).map_err(err)?;
        let (a, b) = DESCENDANT_COLUMN[i];
        ensure(q == BigRational::new(a.into(), b.into()), || format!("descendant column at d = {d}: {q}"))?;
    }
    Ok(format!("T_1..T_7 in {elapsed:.2?}; point and descendant columns for d <= 9"))
}

fn table1_extended() -> Check {
    let start = Instant::now();
    let engine = Engine::new();
    for d in 8..=9u32 {
        let t = engine.tangency_max(d).map_err(err)?;
        ensure(t == BigInt::from(TANGENCY_MAX[d as usize - 1]), || format!("T_{d} = {t}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= TABLE1_EXTENDED_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("T_8 = 264057, T_9 = 3242395 in {elapsed:.2?}"))
}

fn table2() -> Check {
    let engine = Engine::new();
    let mut listed: BTreeMap<i64, BTreeMap<Partition, BigInt>> = BTreeMap::new();
    for (d, part, value) in TABLE2 {
        listed.entry(d).or_default().insert(p(part), BigInt::from(value));
    }
    let mut extra_d6 = 0;
    for d in 1..=6 {
        let table = engine.full_table(&CurveClass::cp2(d, [])).map_err(err)?;
        let expected = &listed[&d];
        for (part, value) in expected {
            let got = table.get(part).cloned().unwrap_or_default();
            ensure(&got == value, || format!("N_{d}<{part}> = {got}, expected {value}"))?;
        }
        let unlisted: Vec<String> = table
            .iter()
            .filter(|(part, _)| !expected.contains_key(*part))
            .map(|(part, v)| format!("{part}={v}"))
            .collect();
        if d <= 5 {
            ensure(unlisted.is_empty(), || format!("unlisted nonzero values at d = {d}: {unlisted:?}"))?;
        } else {
            extra_d6 = unlisted.len();
        }
    }
    ensure(extra_d6 == 0, || format!("{extra_d6} unlisted nonzero values at d = 6"))?;
    Ok("51 listed values match; no other nonzero values for d <= 6".into())
}

fn kontsevich() -> Check {
    let start = Instant::now();
    let expected = ["12", "620", "87304", "26312976", "14616808192"];
    for (d, want) in (3..=7).zip(expected) {
        let n = kontsevich_count(d).map_err(err)?;
        ensure(n.to_string() == want, || format!("N_{d} = {n}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= KONTSEVICH_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("N_3..N_7 in {elapsed:.2?}"))
}

fn determinants() -> Check {
    let start = Instant::now();
    let mut signs = Vec::new();
    for k in 2..=14u32 {
        let det = determinant_of_a(k).map_err(err)?;
        let fact: i64 = (1..k as i64).product();
        ensure(det.abs() == BigRational::from_integer(fact.into()), || format!("det A_{k} = {det}"))?;
        signs.push(if det.is_negative() { '-' } else { '+' });
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= DETERMINANT_BUDGET, || format!("took {elapsed:?}"))?;

    let a4 = vec![vec![3, 0, 0, 0], vec![1, 0, 2, 0], vec![0, 1, 0, 1], vec![0, 0, 1, 1]];
    let a5 = vec![
        vec![4, 0, 0, 0, 0, 0],
        vec![1, 0, 3, 0, 0, 0],
        vec![0, 1, 0, 1, 1, 0],
        vec![0, 0, 1, 0, 2, 0],
        vec![0, 0, 0, 1, 0, 1],
        vec![0, 0, 0, 0, 1, 1],
    ];
    for (k, printed) in [(4, a4), (5, a5)] {
        let (_, a) = build_a(k).map_err(err)?;
        ensure(a == RationalMatrix::from_integers(&printed).map_err(err)?, || format!("A_{k} differs:\n{a}"))?;
    }
    let det4 = determinant_of_a(4).map_err(err)?;
    ensure(det4 == BigRational::from_integer((-6).into()), || format!("det A_4 = {det4}"))?;
    let signs: String = signs.into_iter().collect();
    Ok(format!("k = 2..14 in {elapsed:.2?} (signs {signs}); A_4, A_5 entrywise"))
}

/// Enumerates (l, S, S', sigma) literally: subsets as bitmasks and sigma as an
/// explicit permutation.
fn star_oracle(a: &[u32], b: &[u32]) -> BTreeMap<Partition, u64> {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for perm in perms(n - 1) {
            for pos in 0..=perm.len() {
                let mut next = perm.clone();
                next.insert(pos, n - 1);
                out.push(next);
            }
        }
        out
    }
    let mut out = BTreeMap::new();
    for s_mask in 0u32..(1 << a.len()) {
        for t_mask in 0u32..(1 << b.len()) {
            if s_mask.count_ones() != t_mask.count_ones() {
                continue;
            }
            let s: Vec<usize> = (0..a.len()).filter(|i| s_mask >> i & 1 == 1).collect();
            let t: Vec<usize> = (0..b.len()).filter(|i| t_mask >> i & 1 == 1).collect();
            for sigma in perms(t.len()) {
                let mut rows: Vec<u32> = s.iter().zip(&sigma).map(|(&i, &j)| a[i] + b[t[j]]).collect();
                rows.extend((0..a.len()).filter(|i| s_mask >> i & 1 == 0).map(|i| a[i]));
                rows.extend((0..b.len()).filter(|i| t_mask >> i & 1 == 0).map(|i| b[i]));
                *out.entry(Partition::new(rows).expect("positive rows")).or_insert(0) += 1;
            }
        }
    }
    out
}

fn star_product() -> Check {
    let e = star(&p("(3,1,1)"), &p("(2,2)")).map_err(err)?;
    let printed = [("(3,2,2,1,1)", 1), ("(5,2,1,1)", 2), ("(3,3,2,1)", 4), ("(5,3,1)", 4), ("(3,3,3)", 2)];
    ensure(e.terms().len() == printed.len(), || format!("{e}"))?;
    for (part, c) in printed {
        ensure(e.coefficient(&p(part)) == c, || format!("coefficient of {part} in {e}"))?;
    }
    let mut pairs = 0;
    for total in 2..=10 {
        for k in 1..total {
            for a in enumerate_ordered(k).map_err(err)? {
                for b in enumerate_ordered(total - k).map_err(err)? {
                    let got = star(&a, &b).map_err(err)?;
                    ensure(got.terms() == &star_oracle(a.parts(), b.parts()), || format!("{a} * {b}"))?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("worked example; {pairs} ordered pairs against the oracle"))
}

fn sum_identity() -> Check {
    let engine = Engine::new();
    let mut sides = Vec::new();
    for d in 1..=6 {
        let report = engine.verify_sum_identity(&CurveClass::cp2(d, [])).map_err(err)?;
        ensure(report.holds(), || format!("d = {d}: {} vs {}", report.points_count, report.weighted_sum))?;
        ensure(report.points_count.to_string() == POINT_COUNTS[d as usize - 1], || {
            format!("d = {d}: point count {}", report.points_count)
        })?;
        sides.push(report.points_count.to_string());
    }
    Ok(format!("d = 1..6: {}", sides.join(", ")))
}

fn blowup_anchors() -> Check {
    let gw = GwBackend::new();
    let v = gw.gw_blowup(&CurveClass::cp2(3, vec![1; 8])).map_err(err)?;
    ensure(v == BigInt::from(12), || format!("GW(3; 1^8) = {v}"))?;
    let v = gw.gw_blowup(&CurveClass::cp2(3, [2, 1, 1, 1, 1, 1, 1])).map_err(err)?;
    ensure(v == BigInt::from(1), || format!("GW(3; 2, 1^6) = {v}"))?;
    for d in 1..=6i64 {
        let mut m = vec![d - 1];
        m.extend(vec![1; 2 * d as usize]);
        let class = CurveClass::cp2(d, m);
        ensure(is_exceptional(&class), || format!("{class} not recognized as exceptional"))?;
        let v = gw.gw_blowup(&class).map_err(err)?;
        ensure(v == BigInt::from(1), || format!("GW({class}) = {v}"))?;
    }
    Ok("GW(3;1^8) = 12, GW(3;2,1^6) = 1, (d; d-1, 1^2d) = 1 for d <= 6".into())
}

fn degree_three_chain() -> Check {
    let engine = Engine::new();
    let cases = [
        ("(1);(1);(1);(1);(1);(3)", true, 9),
        ("(1);(1);(1);(1);(1);(1);(1,1)", true, 2),
        ("(8)", false, 4),
        ("(7,1)", false, 1),
    ];
    for (cs, hat, want) in cases {
        let key = plane_key(3, cs);
        let got = if hat { engine.compute_hat_n(&key) } else { engine.compute_n(&key) }.map_err(err)?;
        ensure(got == BigInt::from(want), || format!("{key}: {got}"))?;
    }
    Ok("9, 2, 4, 1".into())
}

fn vanishing() -> Check {
    let engine = Engine::new();
    let v = engine.compute_n(&plane_key(3, "(6,2)")).map_err(err)?;
    ensure(v.is_zero(), || format!("N_3<(6,2)> = {v}"))?;

    let class = CurveClass::p1xp1(2, 0, []);
    let mut checked = 0;
    for q in enumerate_ordered(3).map_err(err)? {
        // the partition itself at one point, and its rows spread over distinct points
        let spread = q.parts().iter().map(|&m| Partition::row(m));
        for key in [
            InvariantKey::new(class.clone(), [q.clone()]).map_err(err)?,
            InvariantKey::new(class.clone(), spread).map_err(err)?,
        ] {
            let v = engine.compute_n(&key).map_err(err)?;
            ensure(v.is_zero(), || format!("{key}: {v}"))?;
            checked += 1;
        }
    }
    let key = InvariantKey::new(class, parse_constraints("(1);(1);(1)").map_err(err)?).map_err(err)?;
    ensure(engine.compute_n(&key).map_err(err)?.is_zero(), || format!("{key} nonzero"))?;

    for d in 1..=4i64 {
        let class = CurveClass::p1xp1(d, 1, []);
        for total in [2 * d, 2 * d + 1, 2 * d + 2] {
            for q in enumerate_ordered(total as u32).map_err(err)? {
                let rows = q.parts().iter().map(|&m| Partition::row(m));
                let key = InvariantKey::new(class.clone(), rows).map_err(err)?;
                let v = engine.compute_n(&key).map_err(err)?;
                let want = BigInt::from(u8::from(total == 2 * d + 1));
                ensure(v == want, || format!("{key}: {v}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("N_3<(6,2)> = 0; {checked} bidegree (2,0) and (d,1) keys"))
}

fn properties() -> Check {
    // integrality and descent are enforced on every step; a clean run of the
    // degree 6 table exercises them
    let engine = Engine::new();
    engine.full_table(&CurveClass::cp2(6, [])).map_err(err)?;
    let solves = engine.stats().solves;
    ensure(solves > 0, || "no solves performed".into())?;

    let mut keys: Vec<InvariantKey> = enumerate_ordered(14)
        .map_err(err)?
        .into_iter()
        .map(|q| InvariantKey::plane(5, [q]).expect("valid key"))
        .collect();
    let reference: BTreeMap<InvariantKey, BigInt> =
        keys.iter().map(|k| Ok((k.clone(), engine.compute_n(k)?))).collect::<tangentcount::Result<_>>().map_err(err)?;
    let mut rng = rand::rngs::StdRng::seed_from_u64(2024);
    for round in 0..4 {
        keys.shuffle(&mut rng);
        let mut fresh = Engine::new();
        fresh.set_parallel(round % 2 == 1);
        for k in &keys {
            let v = fresh.compute_n(k).map_err(err)?;
            ensure(v == reference[k], || format!("round {round}: {k} gave {v}"))?;
        }
    }

    let mut partitions = 0;
    for n in 1..=12 {
        for q in enumerate_ordered(n).map_err(err)? {
            let squares: u64 = q.dual().parts().iter().map(|&x| u64::from(x) * u64::from(x)).sum();
            ensure(squares == u64::from(q.weight()) + 2 * q.delta(), || format!("dual identity fails at {q}"))?;
            partitions += 1;
        }
    }
    Ok(format!(
        "{solves} integral solves with strict descent; 4 shuffled replays; dual identity on {partitions} partitions"
    ))
}

fn main() -> ExitCode {
    let skip_extended = std::env::var("TANGENTCOUNT_SKIP_EXTENDED").is_ok_and(|v| v == "1");
    let mut criteria: Vec<Criterion> = vec![
        ("1  table 1 tangency counts, d <= 7", table1),
        ("2  table 2 single-point invariants", table2),
        ("3  Kontsevich point counts", kontsevich),
        ("4  determinant law and printed matrices", determinants),
        ("5  star product", star_product),
        ("6  sum identity", sum_identity),
        ("7  blowup anchors", blowup_anchors),
        ("8  worked degree 3 chain", degree_three_chain),
        ("9  vanishing", vanishing),
        ("10 property suites", properties),
    ];
    if !skip_extended {
        criteria.insert(1, ("1x table 1 tangency counts, d = 8, 9", table1_extended));
    }
    let mut failures = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{elapsed:.2?}]"),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {name}: {detail} [{elapsed:.2?}]");
            }
        }
    }
    if skip_extended {
        println!("SKIP  1x table 1 tangency counts, d = 8, 9 (TANGENTCOUNT_SKIP_EXTENDED=1)");
    }
    if failures == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria failed");
        ExitCode::FAILURE
    }
}
