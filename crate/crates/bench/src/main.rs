use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use boolmv_bench::config::parse_list;
use boolmv_bench::experiments::{run_correctness, run_lb_experiment, run_probe_sweep, LbOutput};
use boolmv_bench::formats::{write_hex_dump, write_matrix_binary, write_redundancy_file, Manifest};
use boolmv_bench::report;
use boolmv_bench::{BenchError, Mode, RSpec, SweepConfig};
use boolmv_core::structure::DEFAULT_EXACT_CAP;

const EXIT_INVARIANT: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(name = "boolmv", version, about = "Probe-counted Boolean matrix-vector experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare query answers against the naive product.
    Correctness(Common),
    /// Measure probes, structure size and failure rate per (n, w).
    Sweep(Common),
    /// Hard-instance trace encoding, replay and recovery experiments.
    Lb(LbArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Summary,
}

#[derive(Args)]
struct Common {
    /// Matrix dimensions, e.g. `8,16` or `4..9`.
    #[arg(long, default_value = "8")]
    n: String,
    /// Word sizes in bits.
    #[arg(long, default_value = "8")]
    w: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seed list or range; overrides --seed.
    #[arg(long)]
    seeds: Option<String>,
    /// exact, heuristic, or auto (exact up to --exact-cap).
    #[arg(long, default_value = "auto")]
    mode: Mode,
    /// Heuristic candidate budget.
    #[arg(long, default_value_t = 512)]
    budget: usize,
    #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
    exact_cap: usize,
    /// Queries per (n, w, seed).
    #[arg(long, default_value_t = 100)]
    queries: usize,
    #[arg(long, value_enum, default_value = "on")]
    fallback: OnOff,
    /// Output file; stdout when absent. The manifest goes to `<out>.manifest`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct LbArgs {
    #[command(flatten)]
    common: Common,
    /// Block budgets; defaults to r = n.
    #[arg(long)]
    r: Option<String>,
    /// Per-query probe budget; defaults to the largest observed.
    #[arg(long)]
    t: Option<usize>,
    /// Also recover Mv from vector-matrix-vector probe logs.
    #[arg(long)]
    umv: bool,
    /// Write each instance's matrix, structure, encoding and log here.
    #[arg(long)]
    dump: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> Result<SweepConfig, BenchError> {
        Ok(SweepConfig {
            n_values: parse_list(&self.n)?,
            w_values: parse_list(&self.w)?,
            seeds: match &self.seeds {
                Some(s) => parse_list(s)?,
                None => vec![self.seed],
            },
            mode: self.mode,
            queries_per_point: self.queries,
            fallback: matches!(self.fallback, OnOff::On),
            candidate_budget: self.budget,
            exact_cap: self.exact_cap,
            ..SweepConfig::default()
        })
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn manifest(command: &str, cfg: &SweepConfig) -> Manifest {
    let mut m = Manifest::new();
    m.set("command", command)
        .set("n", join(&cfg.n_values))
        .set("w", join(&cfg.w_values))
        .set("seed", join(&cfg.seeds))
        .set("mode", cfg.mode)
        .set("queries", cfg.queries_per_point)
        .set("fallback", if cfg.fallback { "on" } else { "off" })
        .set("budget", cfg.candidate_budget)
        .set("exact_cap", cfg.exact_cap);
    m
}

fn emit(common: &Common, body: &str, manifest: &Manifest) -> Result<(), BenchError> {
    match &common.out {
        Some(path) => {
            fs::write(path, body)?;
            let mut mpath = path.clone().into_os_string();
            mpath.push(".manifest");
            fs::write(mpath, manifest.to_string())?;
        }
        None => {
            io::stdout().write_all(body.as_bytes())?;
            eprint!("{manifest}");
        }
    }
    Ok(())
}

fn dump_lb(dir: &Path, out: &LbOutput) -> Result<(), BenchError> {
    fs::create_dir_all(dir)?;
    for (row, art) in out.rows.iter().zip(&out.artifacts) {
        let stem = format!("n{}_r{}_w{}_seed{}", row.n, row.r, row.w, row.seed);
        fs::write(dir.join(format!("{stem}.matrix.bin")), write_matrix_binary(&art.matrix))?;
        fs::write(dir.join(format!("{stem}.redundancy")), write_redundancy_file(&art.redundancy)?)?;
        fs::write(dir.join(format!("{stem}.encoding.hex")), write_hex_dump(&art.encoding))?;
        if let Some(log) = &art.umv_log {
            fs::write(dir.join(format!("{stem}.umv.hex")), write_hex_dump(log))?;
        }
    }
    Ok(())
}

/// Returns whether every row passed.
fn run(cli: Cli) -> Result<bool, BenchError> {
    match cli.command {
        Command::Correctness(common) => {
            let cfg = common.config()?;
            let rows = run_correctness(&cfg)?;
            let body = match common.format {
                Format::Csv => report::csv_string(&rows)?,
                Format::Summary => report::correctness_summary(&rows),
            };
            emit(&common, &body, &manifest("correctness", &cfg))?;
            Ok(rows.iter().all(|r| r.pass))
        }
        Command::Sweep(common) => {
            let cfg = common.config()?;
            let rows = run_probe_sweep(&cfg)?;
            let body = match common.format {
                Format::Csv => report::csv_string(&rows)?,
                Format::Summary => report::sweep_summary(&rows),
            };
            emit(&common, &body, &manifest("sweep", &cfg))?;
            Ok(rows.iter().all(|r| r.pass))
        }
        Command::Lb(args) => {
            let mut cfg = args.common.config()?;
            cfg.r_spec = match &args.r {
                Some(r) => RSpec::Explicit(parse_list(r)?),
                None => RSpec::EqualToN,
            };
            cfg.t_budget = args.t;
            cfg.umv = args.umv;
            let out = run_lb_experiment(&cfg)?;
            let body = match args.common.format {
                Format::Csv => report::csv_string(&out.rows)?,
                Format::Summary => report::lb_summary(&out.rows),
            };
            let mut m = manifest("lb", &cfg);
            m.set(
                "r",
                match &cfg.r_spec {
                    RSpec::EqualToN => "n".to_string(),
                    RSpec::Explicit(rs) => join(rs),
                },
            )
            .set("t_budget", out.t_budget)
            .set("umv", cfg.umv);
            emit(&args.common, &body, &m)?;
            if let Some(dir) = &args.dump {
                dump_lb(dir, &out)?;
            }
            Ok(out.rows.iter().all(|r| r.pass))
        }
    }
}

fn is_config_error(e: &BenchError) -> bool {
    use boolmv_core::Error as E;
    match e {
        BenchError::Config(_) | BenchError::Format(_) => true,
        BenchError::Core(c) => matches!(
            c,
            E::InvalidSpec(_) | E::ExactCapExceeded { .. } | E::InvalidArgument(_) | E::BudgetExceeded { .. }
        ),
        _ => false,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_INVARIANT),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if is_config_error(&e) { EXIT_CONFIG } else { EXIT_INVARIANT })
        }
    }
}
