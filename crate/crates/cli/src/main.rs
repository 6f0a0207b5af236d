//! `powersum` — command-line driver for the exact-arithmetic laboratory.
//!
//! Exit codes: 0 success, 1 assertion failure, 2 usage error, 3 budget
//! error.

mod grid;
mod manifest;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use manifest::ManifestBuilder;
use powersum_core::budget::Budget;
use powersum_core::congruence::{
    rho_plus, rho_sharp, rho_sharp_scan, rho_vector_plus, sifted_count, ModulusVector, RhoMethod,
};
use powersum_core::delta;
use powersum_core::error::Error as CoreError;
use powersum_core::factor::{self, FactorTable};
use powersum_core::mean::{self, DeltaAlgorithm};
use powersum_core::meanvalue::{e_sum_checkpointed, LiftedFunction, MultiArithmeticFunction};
use powersum_core::poly::MultiPoly;
use powersum_core::powersum::{
    admissible, check_cs_and_split, extend, growth_table, v_counts, ExtendMode, GrowthRow,
    PowerSystem,
};
use powersum_core::report::{CheckReport, Summary};
use powersum_core::system::{build_power_system_poly, verify_factored_form, FactoredSystem};
use powersum_core::verify::{run_suite, Suite};
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "powersum",
    version,
    about = "Exact computations: divisor concentration, polynomial congruence densities, power-sum representation counts"
)]
struct Cli {
    /// Compute budget preset.
    #[arg(long, global = true, default_value = "medium", value_parser = ["small", "medium", "large"])]
    budget: String,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output file for CSV / JSON-lines results.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Directory for smallest-prime-factor segment caches.
    #[arg(long, global = true, env = "POWERSUM_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Window,
    Grid,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctionArg {
    Delta,
    One,
    Tau,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Plus,
    Star,
}

#[derive(Subcommand)]
enum Command {
    /// Divisor concentration Δ(n), or Δ(n, u) when --u is given.
    Delta {
        n: u64,
        #[arg(long)]
        u: Option<f64>,
    },
    /// S(x) = Σ Δ(n) and the logarithmic mean 𝔖(x), with optional checkpoints.
    Means {
        #[arg(long)]
        x: Option<u64>,
        /// Checkpoint grid, e.g. 1e3:1e6:log.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, value_enum, default_value_t = AlgoArg::Window)]
        algo: AlgoArg,
    },
    /// Root counts: ϱ⁺ of one polynomial mod s, or the joint count of a
    /// family (repeat --r) with per-factor moduli.
    Rho {
        #[arg(long)]
        poly: Option<String>,
        #[arg(long = "r")]
        rs: Vec<String>,
        /// Modulus (single polynomial) or comma list (family).
        #[arg(long)]
        s: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Exact-divisibility count ϱ# over the kernel period K(s).
    Rhosharp {
        #[arg(long = "r", required = true)]
        rs: Vec<String>,
        #[arg(long)]
        s: String,
        /// Re-derive by the literal full-period scan and compare.
        #[arg(long)]
        check_scan: bool,
    },
    /// Weighted congruence-density sum E_R(v).
    Esum {
        #[arg(long = "r", required = true)]
        rs: Vec<String>,
        #[arg(long, value_enum, default_value_t = FunctionArg::Delta)]
        f: FunctionArg,
        /// Exponent matrix rows `g11,g12;g21,g22`; defaults to one row of ones.
        #[arg(long)]
        gamma: Option<String>,
        #[arg(long)]
        v: Option<u64>,
        #[arg(long)]
        grid: Option<String>,
    },
    /// Sifted box count with exact-divisibility conditions.
    Sift {
        /// Power-system shortcut: tail coefficients.
        #[arg(long)]
        c: Option<String>,
        /// Power-system shortcut: tail exponents.
        #[arg(long)]
        l: Option<String>,
        #[arg(long)]
        q: Option<String>,
        #[arg(long = "r")]
        rs: Vec<String>,
        /// Exponent matrix rows (with --q), as in esum.
        #[arg(long)]
        gamma: Option<String>,
        #[arg(long)]
        a: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: u64,
    },
    /// Exact V-moment record at one x.
    Vcount {
        #[arg(long)]
        c: String,
        #[arg(long)]
        l: String,
        #[arg(long)]
        x: u64,
    },
    /// Exact admissibility decision for an exponent tuple.
    Admissible {
        #[arg(long)]
        l: String,
    },
    /// Extend an exponent tuple (plus: s=1 doubling; star: tripling).
    Extend {
        #[arg(long)]
        l: String,
        #[arg(long, value_enum)]
        mode: ModeArg,
    },
    /// V-counts, 𝔖(x) and monitored growth ratios over a grid.
    Growth {
        #[arg(long)]
        c: String,
        #[arg(long)]
        l: String,
        #[arg(long)]
        grid: String,
    },
    /// Run the verification panels.
    Verify {
        #[arg(long, default_value = "all", value_parser = ["core", "congruence", "meanvalue", "powersums", "all"])]
        suite: String,
    },
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(match run(cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(err) => {
            eprintln!("error: {err:#}");
            exit_code_for(&err)
        }
    });
}

fn exit_code_for(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<CoreError>() {
        Some(CoreError::Budget { .. }) => 3,
        Some(CoreError::Precondition(_)) | Some(CoreError::Domain(_)) => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<bool> {
    let budget = Budget::preset(&cli.budget).expect("validated by clap");
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("thread pool")?;
    }
    let manifest = ManifestBuilder::start();
    let mut outputs: Vec<PathBuf> = Vec::new();
    let ok = dispatch(&cli, &budget, &mut outputs)?;
    manifest.finish(&budget, cli.threads, cli.cache_dir.as_deref(), &outputs)?;
    Ok(ok)
}

fn dispatch(cli: &Cli, budget: &Budget, outputs: &mut Vec<PathBuf>) -> Result<bool> {
    match &cli.command {
        Command::Delta { n, u } => cmd_delta(*n, *u, cli.cache_dir.as_deref(), budget),
        Command::Means { x, grid, algo } => {
            cmd_means(*x, grid.as_deref(), *algo, cli.out.as_deref(), budget, outputs)
        }
        Command::Rho { poly, rs, s, method } => {
            cmd_rho(poly.as_deref(), rs, s, *method, budget)
        }
        Command::Rhosharp { rs, s, check_scan } => cmd_rhosharp(rs, s, *check_scan, budget),
        Command::Esum { rs, f, gamma, v, grid } => cmd_esum(
            rs,
            *f,
            gamma.as_deref(),
            *v,
            grid.as_deref(),
            cli.out.as_deref(),
            budget,
            outputs,
        ),
        Command::Sift { c, l, q, rs, gamma, a, x, y, z } => cmd_sift(
            c.as_deref(),
            l.as_deref(),
            q.as_deref(),
            rs,
            gamma.as_deref(),
            a,
            x,
            y,
            *z,
            budget,
        ),
        Command::Vcount { c, l, x } => {
            cmd_vcount(c, l, *x, cli.out.as_deref(), budget, outputs)
        }
        Command::Admissible { l } => cmd_admissible(l),
        Command::Extend { l, mode } => cmd_extend(l, *mode),
        Command::Growth { c, l, grid } => {
            cmd_growth(c, l, grid, cli.out.as_deref(), budget, outputs)
        }
        Command::Verify { suite } => cmd_verify(suite, cli.out.as_deref(), budget, outputs),
    }
}

// ---------------------------------------------------------------------------
// argument helpers
// ---------------------------------------------------------------------------

fn parse_u64_list(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|p| p.trim().parse::<u64>().with_context(|| format!("bad integer {p:?}")))
        .collect()
}

fn parse_u32_list(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(|p| p.trim().parse::<u32>().with_context(|| format!("bad integer {p:?}")))
        .collect()
}

fn parse_polys(texts: &[String]) -> Result<Vec<MultiPoly>> {
    let parsed: Vec<MultiPoly> = texts
        .iter()
        .map(|t| MultiPoly::parse(t).map_err(anyhow::Error::from))
        .collect::<Result<_>>()?;
    let vars = parsed.iter().map(|p| p.num_vars()).max().unwrap_or(0).max(1);
    parsed
        .into_iter()
        .map(|p| p.with_vars(vars).map_err(anyhow::Error::from))
        .collect()
}

fn parse_gamma(text: Option<&str>, k: usize, r: usize) -> Result<Vec<Vec<u32>>> {
    match text {
        None => Ok(vec![vec![1; r]; k]),
        Some(t) => {
            let rows: Vec<Vec<u32>> = t
                .split(';')
                .map(parse_u32_list)
                .collect::<Result<_>>()?;
            if rows.len() != k || rows.iter().any(|row| row.len() != r) {
                bail!("gamma must be {k} rows of {r} entries");
            }
            Ok(rows)
        }
    }
}

fn write_lines(path: &Path, lines: &[String]) -> Result<()> {
    let mut file = std::fs::File::create(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    for line in lines {
        writeln!(file, "{line}")?;
    }
    Ok(())
}

/// Load (or build and persist) the sieve segment containing n.
fn cached_table(dir: &Path, n: u64, budget: &Budget) -> Result<FactorTable> {
    let seg = budget.segment_size;
    let lo = (n - 1) / seg * seg + 1;
    let hi = lo + seg - 1;
    let path = dir.join(FactorTable::cache_file_name(lo, hi));
    if path.exists() {
        match FactorTable::read_cache(&path) {
            Ok(table) => return Ok(table),
            Err(err) => eprintln!("ignoring invalid cache {}: {err}", path.display()),
        }
    }
    std::fs::create_dir_all(dir)?;
    let table = FactorTable::build(lo, hi, budget)?;
    table.write_cache(&path)?;
    Ok(table)
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

fn cmd_delta(n: u64, u: Option<f64>, cache_dir: Option<&Path>, budget: &Budget) -> Result<bool> {
    let divisors = match cache_dir {
        Some(dir) if n >= 1 => {
            let table = cached_table(dir, n, budget)?;
            let fac = table.factorize(n)?;
            let mut d = Vec::new();
            factor::divisors_into(&fac, &mut d);
            d
        }
        _ => factor::DivisorList::of(n).map_err(anyhow::Error::from)?.divisors,
    };
    let value = match u {
        Some(u) => delta::delta_at_from_divisors(&divisors, u),
        None => delta::delta_from_divisors(&divisors),
    };
    println!("{value}");
    Ok(true)
}

fn cmd_means(
    x: Option<u64>,
    grid_spec: Option<&str>,
    algo: AlgoArg,
    out: Option<&Path>,
    budget: &Budget,
    outputs: &mut Vec<PathBuf>,
) -> Result<bool> {
    let checkpoints = match (x, grid_spec) {
        (Some(x), None) => vec![x],
        (None, Some(spec)) => grid::parse_grid(spec)?,
        (Some(x), Some(spec)) => {
            let mut g = grid::parse_grid(spec)?;
            g.push(x);
            g
        }
        (None, None) => bail!("means needs --x or --grid"),
    };
    let algo = match algo {
        AlgoArg::Window => DeltaAlgorithm::WindowScan,
        AlgoArg::Grid => DeltaAlgorithm::GridMax,
    };
    let rows = mean::delta_mean_sums_checkpointed(&checkpoints, algo, budget)?;
    let mut lines = vec!["x,S,frakS".to_string()];
    for row in &rows {
        println!(
            "x = {:<12} S = {:<16} frakS = {:<22} frakS/(loglog x)^2.5 = {}",
            row.x,
            row.s,
            row.frak_s,
            row.normalized_by_loglog()
        );
        lines.push(format!("{},{},{}", row.x, row.s, row.frak_s));
    }
    if let Some(path) = out {
        write_lines(path, &lines)?;
        outputs.push(path.to_path_buf());
    }
    Ok(true)
}

fn cmd_rho(
    poly: Option<&str>,
    rs: &[String],
    s: &str,
    method: MethodArg,
    budget: &Budget,
) -> Result<bool> {
    if let Some(text) = poly {
        let t_poly = MultiPoly::parse(text).map_err(anyhow::Error::from)?;
        let modulus: u64 = s.parse().context("--s must be a single modulus with --poly")?;
        let method = match method {
            MethodArg::Auto => RhoMethod::Auto,
            MethodArg::Brute => RhoMethod::BruteForce,
        };
        let count = rho_plus(&t_poly, modulus, method, budget)?;
        println!(
            "rho+ = {} over modulus box {} ({:?}); density {}",
            count.value,
            count.modulus_box,
            count.method,
            count.value as f64 / (count.modulus_box as f64).powi(t_poly.num_vars().max(1) as i32)
        );
        Ok(true)
    } else if !rs.is_empty() {
        let polys = parse_polys(rs)?;
        let moduli = ModulusVector::new(parse_u64_list(s)?)?;
        let count = rho_vector_plus(&polys, &moduli, budget)?;
        println!(
            "rho+ = {} over box {}^{}",
            count.value,
            count.modulus_box,
            polys[0].num_vars()
        );
        Ok(true)
    } else {
        bail!("rho needs --poly or at least one --r");
    }
}

fn cmd_rhosharp(rs: &[String], s: &str, check_scan: bool, budget: &Budget) -> Result<bool> {
    let polys = parse_polys(rs)?;
    let moduli = ModulusVector::new(parse_u64_list(s)?)?;
    let t = polys[0].num_vars();
    let (count, k_period) = rho_sharp(&polys, &moduli, budget)?;
    let density = count.value as f64 / (k_period as f64).powi(t as i32);
    println!("rho# = {}  K = {k_period}  density = {density}", count.value);
    if check_scan {
        let scan = rho_sharp_scan(&polys, &moduli, budget)?;
        let agree = scan.value == count.value;
        println!(
            "full-period scan = {} ({})",
            scan.value,
            if agree { "agrees" } else { "MISMATCH" }
        );
        return Ok(agree);
    }
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn cmd_esum(
    rs: &[String],
    f: FunctionArg,
    gamma: Option<&str>,
    v: Option<u64>,
    grid_spec: Option<&str>,
    out: Option<&Path>,
    budget: &Budget,
    outputs: &mut Vec<PathBuf>,
) -> Result<bool> {
    let polys = parse_polys(rs)?;
    let t = polys[0].num_vars();
    let base = match f {
        FunctionArg::Delta => MultiArithmeticFunction::delta_function(),
        FunctionArg::One => MultiArithmeticFunction::one(1),
        FunctionArg::Tau => MultiArithmeticFunction::tau_function(),
    };
    let gamma = parse_gamma(gamma, base.arity(), polys.len())?;
    let fhat = LiftedFunction::lift(base, gamma)?;
    let cutoffs = match (v, grid_spec) {
        (Some(v), None) => vec![v],
        (None, Some(spec)) => grid::parse_grid(spec)?,
        (Some(_), Some(_)) => bail!("give either --v or --grid"),
        (None, None) => bail!("esum needs --v or --grid"),
    };
    let rows = e_sum_checkpointed(&polys, &fhat, &cutoffs, t, budget)?;
    let mut lines = vec!["v,E_R".to_string()];
    for (v, value) in &rows {
        println!("E({v}) = {value}");
        lines.push(format!("{v},{value}"));
    }
    if let Some(path) = out {
        write_lines(path, &lines)?;
        outputs.push(path.to_path_buf());
    }
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn cmd_sift(
    c: Option<&str>,
    l: Option<&str>,
    q: Option<&str>,
    rs: &[String],
    gamma: Option<&str>,
    a: &str,
    x: &str,
    y: &str,
    z: u64,
    budget: &Budget,
) -> Result<bool> {
    let sys: FactoredSystem = match (c, l, q) {
        (Some(c), Some(l), None) => {
            build_power_system_poly(&parse_u64_list(c)?, &parse_u32_list(l)?)?
        }
        (None, None, Some(q_text)) => {
            if rs.is_empty() {
                bail!("--q needs at least one --r factor");
            }
            let mut all = vec![q_text.to_string()];
            all.extend_from_slice(rs);
            let mut polys = parse_polys(&all)?;
            let q_poly = polys.remove(0);
            let gamma = parse_gamma(gamma, 1, polys.len())?;
            let sys = FactoredSystem::new(vec![q_poly], polys, gamma)?;
            verify_factored_form(&sys)?;
            sys
        }
        (None, None, None) if !rs.is_empty() => {
            let polys = parse_polys(rs)?;
            let mut product = polys[0].clone();
            for p in &polys[1..] {
                product = &product * p;
            }
            let gamma = vec![vec![1; polys.len()]];
            FactoredSystem::new(vec![product], polys, gamma)?
        }
        _ => bail!("sift needs either --c/--l, or --q with --r factors, or --r factors alone"),
    };
    let a = ModulusVector::new(parse_u64_list(a)?)?;
    let x = parse_u64_list(x)?;
    let y = parse_u64_list(y)?;
    let outcome = sifted_count(&sys, &a, &x, &y, z, budget)?;
    println!(
        "count = {}  reference = {}  ratio = {}  (sieved by {} primes)",
        outcome.count,
        outcome.reference,
        outcome
            .bound_ratio
            .map_or("n/a".to_string(), |r| r.to_string()),
        outcome.sieve_primes
    );
    Ok(true)
}

fn cmd_vcount(
    c: &str,
    l: &str,
    x: u64,
    out: Option<&Path>,
    budget: &Budget,
    outputs: &mut Vec<PathBuf>,
) -> Result<bool> {
    let sys = PowerSystem::new(parse_u64_list(c)?, parse_u32_list(l)?)?;
    let rec = v_counts(x, &sys, budget)?;
    check_cs_and_split(&rec)?;
    println!(
        "x = {}  V0 = {}  V1 = {}  V2 = {}  V2eq = {}  V2neq = {}",
        rec.x, rec.v0, rec.v1, rec.v2, rec.v2_eq, rec.v2_neq
    );
    if let Some(path) = out {
        write_lines(
            path,
            &[
                "x,V0,V1,V2,V2eq,V2neq".to_string(),
                format!("{},{},{},{},{},{}", rec.x, rec.v0, rec.v1, rec.v2, rec.v2_eq, rec.v2_neq),
            ],
        )?;
        outputs.push(path.to_path_buf());
    }
    Ok(true)
}

fn cmd_admissible(l: &str) -> Result<bool> {
    let l = parse_u32_list(l)?;
    let report = admissible(&l).map_err(anyhow::Error::from)?;
    if report.admissible {
        println!("admissible (s = {})", report.s);
        Ok(true)
    } else {
        for reason in &report.reasons {
            println!("not admissible: {reason}");
        }
        Ok(false)
    }
}

fn cmd_extend(l: &str, mode: ModeArg) -> Result<bool> {
    let l = parse_u32_list(l)?;
    let mode = match mode {
        ModeArg::Plus => ExtendMode::Plus,
        ModeArg::Star => ExtendMode::Star,
    };
    let extended = extend(&l, mode)?;
    println!(
        "{}",
        extended
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    Ok(true)
}

fn cmd_growth(
    c: &str,
    l: &str,
    grid_spec: &str,
    out: Option<&Path>,
    budget: &Budget,
    outputs: &mut Vec<PathBuf>,
) -> Result<bool> {
    let sys = PowerSystem::new(parse_u64_list(c)?, parse_u32_list(l)?)?;
    let grid = grid::parse_grid(grid_spec)?;
    let rows = growth_table(&sys, &grid, budget)?;
    let mut lines = vec![GrowthRow::CSV_HEADER.to_string()];
    println!("{}", GrowthRow::CSV_HEADER);
    for row in &rows {
        let csv = row.to_csv();
        println!("{csv}");
        lines.push(csv);
    }
    if let Some(path) = out {
        write_lines(path, &lines)?;
        outputs.push(path.to_path_buf());
    }
    Ok(true)
}

fn cmd_verify(
    suite: &str,
    out: Option<&Path>,
    budget: &Budget,
    outputs: &mut Vec<PathBuf>,
) -> Result<bool> {
    let suite = Suite::parse(suite).ok_or_else(|| anyhow!("unknown suite {suite:?}"))?;
    let reports = run_suite(suite, budget)?;
    print_report_table(&reports);
    if let Some(path) = out {
        let lines: Vec<String> = reports
            .iter()
            .map(|r| serde_json::to_string(r).expect("serializable"))
            .collect();
        write_lines(path, &lines)?;
        outputs.push(path.to_path_buf());
    }
    let summary = Summary::of(&reports);
    println!(
        "{} checks, {} failed",
        summary.total, summary.failed
    );
    Ok(summary.all_pass())
}

fn print_report_table(reports: &[CheckReport]) {
    let width = reports.iter().map(|r| r.check.len()).max().unwrap_or(8);
    for r in reports {
        println!(
            "{:<w$}  {}  {}",
            r.check,
            if r.pass { "pass" } else { "FAIL" },
            r.instance,
            w = width
        );
    }
}
