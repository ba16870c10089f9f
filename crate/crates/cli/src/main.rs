//! `sievebound` command-line driver.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or precondition error.

mod config;
mod output;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sievebound::combiner::{lower_combined, upper_combined};
use sievebound::constants::{compute_all, CVariant, Constants, DEFAULT_CUTOFF, REFERENCE};
use sievebound::empirical::{
    brute_force_sum_two_pos_squares, census_checkpoints, is_sum_two_pos_squares, log_checkpoints, FactorSieve,
    SiftedSets,
};
use sievebound::integrals::{integral_c, integral_i};
use sievebound::objective::Objective;
use sievebound::sieve_functions::{CacheStatus, SieveFunctionTable, DEFAULT_S_MAX, DEFAULT_STEP};
use sievebound::{SieveDimension, SieveTables};

use config::{ConfigError, OptimizeConfig};
use output::{fmt_opt, fmt_sig, print_json, write_csv, write_csv_file, write_json};
use report::Report;

/// Environment variable naming the sieve-table cache directory.
pub const CACHE_ENV: &str = "SIEVEBOUND_CACHE_DIR";
/// Cache directory used by `tabulate` when neither flag nor env var is set.
const DEFAULT_TABULATE_CACHE: &str = ".sievebound-cache";

#[derive(Debug, Parser)]
#[command(name = "sievebound", version, about = "Sieve-function tables, constants and bound searches")]
struct Cli {
    /// Directory holding sieve-table caches (falls back to $SIEVEBOUND_CACHE_DIR).
    #[arg(long, global = true, value_name = "DIR")]
    sieve_table_cache: Option<PathBuf>,

    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate F and f for one dimension and store them in the cache.
    Tabulate {
        /// Sieve dimension: 0.5 or 1.
        #[arg(long)]
        kappa: f64,
        #[arg(long, default_value_t = DEFAULT_S_MAX)]
        smax: f64,
        #[arg(long, default_value_t = DEFAULT_STEP)]
        step: f64,
    },
    /// Euler-product constants C, c1, c2, c3.
    Constants {
        #[arg(long, default_value_t = DEFAULT_CUTOFF)]
        cutoff: u64,
        /// Print JSON (the default output is a plain table).
        #[arg(long)]
        json: bool,
        #[arg(long, value_enum, default_value_t = VariantArg::PMinus1)]
        c_variant: VariantArg,
    },
    /// The integrals C(θ₁) and I(θ, θ₁, θ₂).
    Integral {
        #[command(subcommand)]
        which: IntegralCommand,
    },
    /// Vector-sieve combination F(σ₁, σ₂) or f(σ₁, σ₂).
    Combine {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        sigma1: f64,
        #[arg(long)]
        sigma2: f64,
        #[command(flatten)]
        tables: TableArgs,
    },
    /// Grid search for G or H driven by a config file.
    Optimize {
        #[arg(value_enum)]
        objective: ObjectiveArg,
        /// Config file (flat TOML, key = value); defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Exact identity checks on enumerated sifted sets.
    Verify {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        theta1: f64,
        #[arg(long)]
        theta2: f64,
        /// Weighted-chain θ; the chain is checked only when θ and λ are both given.
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Count primes p = m² + n² + 1 ≤ x with Ω(p+2) ≤ k at logarithmic checkpoints.
    Census {
        #[arg(long)]
        x: u64,
        #[arg(long, default_value_t = 11)]
        k: u32,
        /// Emit CSV rows instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Headline reproduction report (JSON + Markdown).
    Report {
        /// Run the G and H reproductions.
        #[arg(long = "paper-repro")]
        headline: bool,
        /// Scan θ₂ over (0, 0.05] instead of the narrowed [0.020, 0.024].
        #[arg(long)]
        full_scan: bool,
        /// Directory for report.json and report.md.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[command(flatten)]
        tables: TableArgs,
    },
}

#[derive(Debug, Subcommand)]
enum IntegralCommand {
    /// C(θ₁) for θ₁ ∈ (1/4, 1/2].
    #[command(name = "C")]
    C {
        #[arg(long)]
        theta1: f64,
    },
    /// I(θ, θ₁, θ₂).
    #[command(name = "I")]
    I {
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        theta1: f64,
        #[arg(long)]
        theta2: f64,
        #[command(flatten)]
        tables: TableArgs,
    },
}

#[derive(Debug, Clone, Copy, Args)]
struct TableArgs {
    #[arg(long, default_value_t = DEFAULT_S_MAX)]
    smax: f64,
    #[arg(long, default_value_t = DEFAULT_STEP)]
    step: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    #[value(name = "F")]
    Upper,
    #[value(name = "f")]
    Lower,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    #[value(name = "G")]
    G,
    #[value(name = "H")]
    H,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    #[value(name = "p-1")]
    PMinus1,
    #[value(name = "p-2")]
    PMinus2,
}

impl From<VariantArg> for CVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::PMinus1 => CVariant::PMinusOne,
            VariantArg::PMinus2 => CVariant::PMinusTwo,
        }
    }
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Ok,
    CheckFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(cli);
    eprintln!("runtime: {:.3} s", start.elapsed().as_secs_f64());
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", format!("{e:#}").replace('\n', " "));
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.downcast_ref::<ConfigError>().is_some() {
            return 2;
        }
        if let Some(err) = cause.downcast_ref::<sievebound::Error>() {
            let bad_input = err.is_precondition() || matches!(err, sievebound::Error::Infeasible(_));
            return if bad_input { 2 } else { 1 };
        }
    }
    1
}

fn cache_dir(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
}

fn load_tables(cache: Option<&Path>, args: TableArgs) -> Result<SieveTables> {
    let (tables, status) = SieveTables::load_or_tabulate(cache, args.smax, args.step)?;
    eprintln!("sieve tables: {status:?}");
    Ok(tables)
}

fn run(cli: Cli) -> Result<Outcome> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring thread pool")?;
    }
    let cache = cache_dir(cli.sieve_table_cache);
    let cache = cache.as_deref();
    match cli.command {
        Command::Tabulate { kappa, smax, step } => tabulate(cache, kappa, smax, step),
        Command::Constants { cutoff, json, c_variant } => constants(cutoff, json, c_variant.into()),
        Command::Integral { which } => integral(cache, which),
        Command::Combine { mode, sigma1, sigma2, tables } => combine(cache, mode, sigma1, sigma2, tables),
        Command::Optimize { objective, config } => optimize(cache, objective, config.as_deref()),
        Command::Verify { x, theta1, theta2, theta, lambda } => verify(x, theta1, theta2, theta, lambda),
        Command::Census { x, k, csv } => census(x, k, csv),
        Command::Report { headline, full_scan, out_dir, tables } => {
            report(cache, headline, full_scan, out_dir.as_deref(), tables)
        }
    }
}

#[derive(Serialize)]
struct TabulateSummary {
    kappa: f64,
    beta: u32,
    s_max: f64,
    step: f64,
    count: usize,
    cache: &'static str,
    path: PathBuf,
    max_handoff_mismatch: f64,
    upper_at_smax: f64,
    lower_at_smax: f64,
}

fn tabulate(cache: Option<&Path>, kappa: f64, smax: f64, step: f64) -> Result<Outcome> {
    let dimension = SieveDimension::from_kappa(kappa)?;
    let dir = cache.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(DEFAULT_TABULATE_CACHE));
    let (table, status) = SieveFunctionTable::load_or_tabulate(Some(&dir), dimension, smax, step)?;
    let last = table.len() - 1;
    let summary = TabulateSummary {
        kappa: dimension.kappa(),
        beta: dimension.beta(),
        s_max: table.s_max(),
        step: table.step(),
        count: table.len(),
        cache: match status {
            CacheStatus::Hit => "hit",
            CacheStatus::Written => "written",
            CacheStatus::Disabled => "disabled",
        },
        path: dir.join(SieveFunctionTable::cache_file_name(dimension, smax, step)),
        max_handoff_mismatch: table.handoff_checks().iter().map(|c| c.mismatch()).fold(0.0, f64::max),
        upper_at_smax: table.values(sievebound::Which::Upper)[last],
        lower_at_smax: table.values(sievebound::Which::Lower)[last],
    };
    print_json(&summary)?;
    Ok(Outcome::Ok)
}

fn constants(cutoff: u64, json: bool, variant: CVariant) -> Result<Outcome> {
    let report = compute_all(cutoff, variant)?;
    eprintln!("constants computed in {:.3} s", report.runtime_seconds);
    if json {
        print_json(&report)?;
    } else {
        let mut out = std::io::stdout().lock();
        writeln!(out, "cutoff {cutoff}")?;
        for v in &report.values {
            writeln!(out, "{:<3} {}  (tail {})", v.name.label(), fmt_sig(v.value), fmt_sig(v.tail_error))?;
        }
    }
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct IntegralOutput {
    value: f64,
    error: f64,
    evaluations: usize,
}

fn integral(cache: Option<&Path>, which: IntegralCommand) -> Result<Outcome> {
    let r = match which {
        IntegralCommand::C { theta1 } => integral_c(theta1)?,
        IntegralCommand::I { theta, theta1, theta2, tables } => {
            let tables = load_tables(cache, tables)?;
            integral_i(theta, theta1, theta2, &tables)?
        }
    };
    print_json(&IntegralOutput {
        value: r.value,
        error: r.abs_error_estimate,
        evaluations: r.evaluations,
    })?;
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct CombineOutput {
    value: Option<f64>,
    s1: Option<f64>,
    s2: Option<f64>,
    feasible: bool,
}

fn combine(cache: Option<&Path>, mode: Mode, sigma1: f64, sigma2: f64, args: TableArgs) -> Result<Outcome> {
    let tables = load_tables(cache, args)?;
    let result = match mode {
        Mode::Upper => upper_combined(sigma1, sigma2, &tables),
        Mode::Lower => lower_combined(sigma1, sigma2, &tables),
    };
    let out = match result {
        Ok(r) => CombineOutput {
            value: Some(r.value),
            s1: Some(r.s1),
            s2: Some(r.s2),
            feasible: r.feasible,
        },
        Err(sievebound::Error::Infeasible(msg)) => {
            eprintln!("infeasible: {msg}");
            CombineOutput {
                value: None,
                s1: None,
                s2: None,
                feasible: false,
            }
        }
        Err(e) => return Err(e.into()),
    };
    print_json(&out)?;
    Ok(Outcome::Ok)
}

fn objective_constants(cfg: &OptimizeConfig) -> Result<Constants> {
    match cfg.constants_cutoff {
        Some(cutoff) => Ok(compute_all(cutoff, cfg.variant())?.constants()),
        None if cfg.c_variant.is_some_and(|v| CVariant::from(v) != CVariant::PMinusOne) => {
            Ok(compute_all(DEFAULT_CUTOFF, cfg.variant())?.constants())
        }
        None => Ok(REFERENCE),
    }
}

fn emit<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    match path {
        Some(p) => write_json(p, value),
        None => print_json(value),
    }
}

fn optimize(cache: Option<&Path>, which: ObjectiveArg, config: Option<&Path>) -> Result<Outcome> {
    let cfg = match config {
        Some(p) => OptimizeConfig::load(p)?,
        None => OptimizeConfig::default(),
    };
    let g_spec = match which {
        ObjectiveArg::G => Some(cfg.g_spec()?),
        ObjectiveArg::H => None,
    };
    let tables = load_tables(cache, TableArgs { smax: cfg.smax(), step: cfg.step() })?;
    let objective = Objective::new(&tables, objective_constants(&cfg)?);
    let record = cfg.csv.is_some();
    match g_spec {
        Some(spec) => {
            let out = objective.search_g(&spec, record)?;
            if let Some(path) = &cfg.csv {
                let rows = out.rows.iter().map(|r| {
                    vec![fmt_sig(r.theta1), fmt_sig(r.theta2), fmt_opt(r.term_main), fmt_opt(r.term_switching), fmt_opt(r.value)]
                });
                write_csv_file(path, &["theta1", "theta2", "term_main", "term_switching", "G"], rows)?;
            }
            emit(cfg.output.as_deref(), &out.best)?;
        }
        None => {
            let out = objective.search_h(&cfg.h_spec(), record)?;
            if let Some(path) = &cfg.csv {
                let rows = out.rows.iter().map(|r| {
                    vec![
                        fmt_sig(r.params.lambda),
                        fmt_sig(r.params.theta),
                        fmt_sig(r.params.theta1),
                        fmt_sig(r.params.theta2),
                        fmt_sig(r.f_value),
                        fmt_sig(r.c_theta1),
                        fmt_sig(r.i_value),
                        fmt_sig(r.term_main),
                        fmt_sig(r.term_switching),
                        fmt_sig(r.term_weighted),
                        fmt_sig(r.h_value),
                        fmt_sig(r.omega_bound),
                    ]
                });
                let header = [
                    "lambda", "theta", "theta1", "theta2", "f", "C_theta1", "I", "term_main", "term_switching",
                    "term_weighted", "H", "omega_bound",
                ];
                write_csv_file(path, &header, rows)?;
            }
            #[derive(Serialize)]
            struct HOutput<'a> {
                incumbent: &'a sievebound::ObjectiveReport,
                history: &'a [f64],
            }
            emit(cfg.output.as_deref(), &HOutput { incumbent: &out.incumbent, history: &out.history })?;
        }
    }
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct VerifyReport {
    x: u64,
    theta1: f64,
    theta2: f64,
    buchstab: sievebound::empirical::BuchstabReport,
    sifting_at_sqrt_x: SiftingCheck,
    chain: Option<sievebound::empirical::ChainReport>,
    switching: Option<sievebound::empirical::SwitchingReport>,
    sum_of_squares: SquaresCheck,
    passes: bool,
}

#[derive(Serialize)]
struct SiftingCheck {
    sifted: u64,
    a0_count: u64,
    holds: bool,
}

#[derive(Serialize)]
struct SquaresCheck {
    limit: u64,
    mismatches: u64,
}

/// Brute-force sum-of-squares comparison is capped here.
const SQUARES_LIMIT: u64 = 100_000;

fn verify(x: u64, theta1: f64, theta2: f64, theta: Option<f64>, lambda: Option<f64>) -> Result<Outcome> {
    let sieve = FactorSieve::new(x.saturating_add(2))?;
    let sets = SiftedSets::build_with(&sieve, x, theta1, theta2)?;
    let buchstab = sets.buchstab_check();
    let sifted = sets.sifting_function((x as f64).sqrt());
    let sifting = SiftingCheck {
        sifted,
        a0_count: sets.a0.len() as u64,
        holds: sifted == sets.a0.len() as u64,
    };
    let chain = match (theta, lambda) {
        (Some(t), Some(l)) => Some(sets.weighted_chain_check(t, l)?),
        (None, None) => None,
        _ => return Err(ConfigError("--theta and --lambda must be given together".into()).into()),
    };
    let switching = if theta1 > 0.25 {
        Some(sets.switching_structure_check(&sieve)?)
    } else {
        None
    };
    let limit = x.min(SQUARES_LIMIT);
    let mismatches = (0..=limit)
        .filter(|&n| is_sum_two_pos_squares(n) != brute_force_sum_two_pos_squares(n))
        .count() as u64;
    let passes = buchstab.residual == 0
        && sifting.holds
        && chain.as_ref().is_none_or(|c| c.all_hold)
        && switching.as_ref().is_none_or(|s| s.passes)
        && mismatches == 0;
    print_json(&VerifyReport {
        x,
        theta1,
        theta2,
        buchstab,
        sifting_at_sqrt_x: sifting,
        chain,
        switching,
        sum_of_squares: SquaresCheck { limit, mismatches },
        passes,
    })?;
    Ok(if passes { Outcome::Ok } else { Outcome::CheckFailed })
}

fn census(x: u64, k: u32, csv: bool) -> Result<Outcome> {
    let reports = census_checkpoints(&log_checkpoints(x), k)?;
    if csv {
        let rows = reports
            .iter()
            .map(|r| vec![r.x.to_string(), r.count.to_string(), fmt_sig(r.normalized)]);
        write_csv(std::io::stdout().lock(), &["x", "count", "normalized"], rows)?;
    } else {
        print_json(&reports)?;
    }
    Ok(Outcome::Ok)
}

fn report(
    cache: Option<&Path>,
    headline: bool,
    full_scan: bool,
    out_dir: Option<&Path>,
    args: TableArgs,
) -> Result<Outcome> {
    let rows = if headline {
        let tables = load_tables(cache, args)?;
        let objective = Objective::new(&tables, REFERENCE);
        let settings = [
            ("smax", fmt_sig(args.smax)),
            ("step", fmt_sig(args.step)),
            ("constants", "stored (cutoff 1e8, p-1)".to_string()),
        ];
        report::headline_rows(&objective, &settings, full_scan)?
    } else {
        Vec::new()
    };
    let report = Report::new(rows);
    {
        let mut out = std::io::stdout().lock();
        for r in &report.rows {
            writeln!(
                out,
                "{} {}: {} (target {} ± {})",
                if r.pass { "PASS" } else { "FAIL" },
                r.name,
                r.value_text(),
                fmt_sig(r.target),
                fmt_sig(r.tolerance)
            )?;
        }
    }
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        write_json(&dir.join("report.json"), &report)?;
        std::fs::write(dir.join("report.md"), report.markdown())
            .with_context(|| format!("writing {}", dir.join("report.md").display()))?;
    }
    Ok(if report.all_pass { Outcome::Ok } else { Outcome::CheckFailed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
