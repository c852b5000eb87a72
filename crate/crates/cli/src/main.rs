mod cache;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use tangentcount::gw::parse_degree;
use tangentcount::{
    build_a, descendant_comparison, format_rational, kontsevich_count, parse_constraints, star, CurveClass, Engine,
    Error, InvariantKey, Partition, RationalMatrix, Space,
};

use crate::cache::CacheFile;
use crate::output::{Format, OutputRecord, Provenance, Table};

#[derive(Parser, Debug)]
#[command(name = "tangentcount", version, about = "Counts of rational curves with local tangency constraints")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "plain", global = true)]
    format: Format,

    /// Persistent memo file.
    #[arg(long, env = "TANGENTCOUNT_CACHE", global = true)]
    cache_file: Option<PathBuf>,

    /// Ignore the cache file entirely.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Print evaluation counters to stderr.
    #[arg(long, global = true)]
    stats: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute one invariant.
    Compute {
        #[arg(long, value_enum)]
        space: SpaceArg,
        /// `d` for cp2, `a,b` for p1xp1.
        #[arg(short = 'd', long = "degree")]
        degree: String,
        /// Semicolon-separated partitions, one per point, e.g. "(1);(1);(3)".
        #[arg(short = 'c', long = "constraints")]
        constraints: String,
        /// Exceptional multiplicities, comma separated.
        #[arg(short = 'm', long = "multiplicities", default_value = "")]
        multiplicities: String,
        /// Print the ordered-branch count instead of N.
        #[arg(long)]
        hat: bool,
    },
    /// Regenerate the plane-curve tables.
    Table {
        #[arg(long, value_enum, default_value = "tangency-max")]
        mode: TableMode,
        /// A single degree.
        #[arg(short = 'd', long = "degree", conflicts_with = "max_d")]
        degree: Option<u32>,
        /// Degrees 1 through this.
        #[arg(long)]
        max_d: Option<u32>,
    },
    /// Run the regression and consistency checks.
    Verify {
        #[arg(long, default_value_t = 5)]
        max_d: u32,
    },
    /// Expand the star product of two partitions.
    Star { p1: String, p2: String },
    /// Print the top-row splitting matrix A_k.
    Matrix {
        #[arg(short = 'k')]
        k: u32,
        #[arg(long)]
        det: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SpaceArg {
    Cp2,
    P1xp1,
}

impl From<SpaceArg> for Space {
    fn from(s: SpaceArg) -> Self {
        match s {
            SpaceArg::Cp2 => Space::Cp2,
            SpaceArg::P1xp1 => Space::P1xP1,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableMode {
    TangencyMax,
    Full,
}

enum Failure {
    Usage(String),
    Internal(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let engine = Engine::new();
    let cache = match (&cli.cache_file, cli.no_cache) {
        (Some(path), false) => Some(CacheFile::open(path, &engine).map_err(|e| Failure::Usage(e.to_string()))?),
        _ => None,
    };

    let result = dispatch(&cli, &engine);

    if let Some(cache) = cache {
        // partial progress is still worth keeping after a failed check
        if !matches!(result, Err(Failure::Internal(_))) {
            cache.save(&engine).map_err(|e| Failure::Usage(e.to_string()))?;
        }
        if cli.stats {
            eprintln!("cache: loaded={} path={}", cache.loaded(), cache.path().display());
        }
    }
    if cli.stats {
        let s = engine.stats();
        eprintln!(
            "stats: solves={} memo_hits={} base_cases={} gw_evaluations={}",
            s.solves, s.memo_hits, s.base_cases, s.gw_evaluations
        );
    }
    result
}

fn dispatch(cli: &Cli, engine: &Engine) -> Result<(), Failure> {
    match &cli.command {
        Command::Compute { space, degree, constraints, multiplicities, hat } => {
            compute(engine, cli.format, (*space).into(), degree, constraints, multiplicities, *hat)
        }
        Command::Table { mode: TableMode::TangencyMax, degree, max_d } => {
            let degrees = degree_range(*degree, *max_d, 7)?;
            print(cli.format, &tangency_table(engine, degrees)?);
            Ok(())
        }
        Command::Table { mode: TableMode::Full, degree, max_d } => {
            let degrees = degree_range(*degree, *max_d, 6)?;
            print(cli.format, &full_table(engine, degrees)?);
            Ok(())
        }
        Command::Verify { max_d } => {
            let report = verify::run(engine, *max_d);
            print(cli.format, &report.table());
            if report.all_passed() {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Star { p1, p2 } => {
            let (p1, p2): (Partition, Partition) = (p1.parse()?, p2.parse()?);
            let expansion = star(&p1, &p2)?;
            if cli.format == Format::Plain {
                println!("{expansion}");
            } else {
                let mut table = Table::new(["partition", "coefficient"]);
                for (p, c) in expansion.iter() {
                    table.push([p.to_string(), c.to_string()]);
                }
                print(cli.format, &table);
            }
            Ok(())
        }
        Command::Matrix { k, det } => {
            let (basis, a) = build_a(*k)?;
            let mut table =
                Table::new(std::iter::once("row".to_string()).chain(basis.cols.iter().map(ToString::to_string)));
            for (i, label) in basis.rows.iter().enumerate() {
                let mut row = vec![label.to_string()];
                row.extend(a.row(i).iter().map(format_rational));
                table.push(row);
            }
            let det = if *det { Some(format_rational(&a.determinant()?)) } else { None };
            print_matrix(cli.format, &table, &a, det.as_deref());
            Ok(())
        }
    }
}

fn degree_range(degree: Option<u32>, max_d: Option<u32>, default_max: u32) -> Result<Vec<u32>, Failure> {
    let degrees: Vec<u32> = match (degree, max_d) {
        (Some(d), _) => vec![d],
        (None, Some(max)) => (1..=max).collect(),
        (None, None) => (1..=default_max).collect(),
    };
    if degrees.is_empty() || degrees.contains(&0) {
        return Err(Failure::Usage("degrees must be at least 1".into()));
    }
    Ok(degrees)
}

fn compute(
    engine: &Engine,
    format: Format,
    space: Space,
    degree: &str,
    constraints: &str,
    multiplicities: &str,
    hat: bool,
) -> Result<(), Failure> {
    let degree = parse_degree(space, degree)?;
    let mults: Vec<i64> = if multiplicities.trim().is_empty() {
        Vec::new()
    } else {
        multiplicities
            .split(',')
            .map(|m| m.trim().parse().map_err(|_| Failure::Usage(format!("bad multiplicity {m:?}"))))
            .collect::<Result<_, _>>()?
    };
    let constraints = parse_constraints(constraints)?;
    if constraints.is_empty() {
        return Err(Failure::Usage("at least one constraint is required".into()));
    }
    let key = InvariantKey::new(CurveClass::new(degree, mults), constraints)?;
    if !key.is_on_shell() {
        eprintln!(
            "warning: constraints have total order {} but the class needs {}; the invariant is 0",
            key.total_weight(),
            key.class().chern() - 1
        );
    }
    let provenance = if engine.is_memoized(&key) { Provenance::Cached } else { Provenance::Computed };
    let value = if hat { engine.compute_hat_n(&key)? } else { engine.compute_n(&key)? };
    let record =
        OutputRecord { key: key.key_text(), invariant: if hat { "hat" } else { "N" }.into(), value, provenance };
    if format == Format::Plain {
        println!("{}", record.value);
    } else {
        print(format, &record.table());
    }
    Ok(())
}

fn tangency_table(engine: &Engine, degrees: Vec<u32>) -> Result<Table, Failure> {
    let mut table = Table::new(["d", "tangency", "points", "descendant"]);
    for d in degrees {
        let t = engine.tangency_max(d)?;
        let n: BigInt = kontsevich_count(d)?;
        let psi = descendant_comparison(d)?;
        table.push([d.to_string(), t.to_string(), n.to_string(), format_rational(&psi)]);
    }
    Ok(table)
}

fn full_table(engine: &Engine, degrees: Vec<u32>) -> Result<Table, Failure> {
    let mut table = Table::new(["d", "partition", "N"]);
    for d in degrees {
        for (p, n) in engine.full_table(&CurveClass::cp2(i64::from(d), []))? {
            table.push([d.to_string(), p.to_string(), n.to_string()]);
        }
    }
    Ok(table)
}

fn print(format: Format, table: &Table) {
    print!("{}", table.render(format));
}

fn print_matrix(format: Format, table: &Table, a: &RationalMatrix, det: Option<&str>) {
    match format {
        Format::Json => {
            let entries: Vec<Vec<String>> =
                (0..a.rows()).map(|i| a.row(i).iter().map(format_rational).collect()).collect();
            let mut value = serde_json::json!({
                "rows": table.rows().iter().map(|r| r[0].clone()).collect::<Vec<_>>(),
                "cols": table.headers()[1..].to_vec(),
                "entries": entries,
            });
            if let Some(det) = det {
                value["det"] = serde_json::Value::String(det.to_string());
            }
            println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
        }
        _ => {
            print(format, table);
            if let Some(det) = det {
                match format {
                    Format::Csv => println!("det,{det}"),
                    Format::Markdown => println!("\ndet = {det}"),
                    _ => println!("det = {det}"),
                }
            }
        }
    }
}
