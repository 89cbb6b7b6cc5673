use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use ratioci::bootstrap::{BootstrapConfig, Resampling, Side};
use ratioci::simulator::{default_subsample_m, run_grid, MethodName, MethodSpec, RegionMethod};
use ratioci::text::{fmt_sig, format_region};
use ratioci::{estimate_moments, ratio_estimate};
use ratioci_cli::config::{ConfigError, ExperimentConfig, Format};
use ratioci_cli::data::parse_pairs;
use ratioci_cli::report::{to_csv, to_json};
use ratioci_cli::selftest::{run_all, SelftestOptions};

const EXIT_SELFTEST: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_METHOD: u8 = 3;

/// Confidence regions for the ratio of two means.
#[derive(Parser)]
#[command(name = "ratioci", version)]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a region from a two-column data file.
    Region(RegionArgs),
    /// Run a coverage experiment described by a JSON config file.
    Simulate(SimulateArgs),
    /// Run the built-in consistency checks.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Fieller,
    Geometric,
    Hwang,
    #[value(name = "geometric-bootstrap", alias = "geometric_bootstrap")]
    GeometricBootstrap,
    #[value(name = "conservative-t", alias = "conservative_t")]
    ConservativeT,
    #[value(name = "r-gen-t", alias = "r_gen_t")]
    RGenT,
}

impl From<MethodArg> for MethodName {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Fieller => MethodName::Fieller,
            MethodArg::Geometric => MethodName::Geometric,
            MethodArg::Hwang => MethodName::Hwang,
            MethodArg::GeometricBootstrap => MethodName::GeometricBootstrap,
            MethodArg::ConservativeT => MethodName::ConservativeT,
            MethodArg::RGenT => MethodName::RGenT,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Symmetric,
    EqualTailed,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    BootstrapT,
    Hall,
    Percentile,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct RegionArgs {
    /// Data file with two numeric columns x, y.
    input: PathBuf,
    #[arg(long, value_enum, default_value = "fieller")]
    method: MethodArg,
    #[arg(long, default_value_t = 0.10)]
    alpha: f64,
    #[arg(long = "boot-b", default_value_t = 999)]
    boot_b: usize,
    #[arg(long = "boot-side", value_enum, default_value = "symmetric")]
    boot_side: SideArg,
    #[arg(long = "boot-rule", value_enum, default_value = "bootstrap-t")]
    boot_rule: RuleArg,
    /// Hall subsample size (default depends on n).
    #[arg(long = "subsample-m")]
    subsample_m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SimulateArgs {
    config: PathBuf,
    /// Overrides the config's output path; `-` writes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Overrides the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    instances: usize,
    #[arg(long = "perturb-tangent", hide = true, default_value_t = 0.0)]
    perturb_tangent: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(workers) = cli.workers {
        if workers == 0 {
            eprintln!("error: --workers must be positive");
            return ExitCode::from(EXIT_INPUT);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .expect("global pool is configured once");
    }
    let outcome = match cli.command {
        Command::Region(args) => region(args),
        Command::Simulate(args) => simulate(args),
        Command::Selftest(args) => selftest(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn region(args: RegionArgs) -> anyhow::Result<ExitCode> {
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        eprintln!("error: --alpha must lie in (0, 1), got {}", args.alpha);
        return Ok(ExitCode::from(EXIT_INPUT));
    }
    let text = fs::read_to_string(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let sample = match parse_pairs(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", args.input.display());
            return Ok(ExitCode::from(EXIT_INPUT));
        }
    };
    let name = MethodName::from(args.method);
    let method = if name.needs_bootstrap() {
        let side = match args.boot_side {
            SideArg::Symmetric => Side::Symmetric,
            SideArg::EqualTailed => Side::EqualTailed,
        };
        let rule = match args.boot_rule {
            RuleArg::BootstrapT => Resampling::BootstrapT,
            RuleArg::Hall => Resampling::Hall,
            RuleArg::Percentile => Resampling::Percentile,
        };
        let m = args.subsample_m.unwrap_or_else(|| default_subsample_m(sample.len()));
        let cfg = BootstrapConfig { b: args.boot_b, side, subsample_m: m, seed: args.seed };
        let mut spec = MethodSpec::bootstrap(name, rule, cfg);
        spec.subsample_m = Some(m);
        spec
    } else {
        MethodSpec::plain(name)
    };
    if let Err(e) = method.validate() {
        eprintln!("error: {e}");
        return Ok(ExitCode::from(EXIT_INPUT));
    }
    let region = match method.region(&sample, args.alpha, 0) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: method {method} failed: {e}");
            return Ok(ExitCode::from(EXIT_METHOD));
        }
    };
    let mut out = std::io::stdout().lock();
    writeln!(out, "method: {method}")?;
    writeln!(out, "region: {}", format_region(&region))?;
    if let Ok(rho) = estimate_moments(&sample).and_then(|m| ratio_estimate(&m)) {
        writeln!(out, "rho_hat: {}", fmt_sig(rho))?;
    }
    if region.is_one_sided_unbounded() {
        eprintln!("warning: region is unbounded on one side only");
    }
    Ok(ExitCode::SUCCESS)
}

fn simulate(args: SimulateArgs) -> anyhow::Result<ExitCode> {
    let text = fs::read_to_string(&args.config).with_context(|| format!("reading {}", args.config.display()))?;
    let mut cfg = match ExperimentConfig::from_json(&text) {
        Ok(c) => c,
        Err(e @ ConfigError::Syntax { .. }) => {
            eprintln!("error: {}: {e}", args.config.display());
            return Ok(ExitCode::from(EXIT_INPUT));
        }
        Err(e) => {
            eprint!("error: {}: {e}", args.config.display());
            return Ok(ExitCode::from(EXIT_INPUT));
        }
    };
    if let Some(seed) = args.seed {
        cfg.options.master_seed = seed;
    }
    let format = match args.format {
        Some(FormatArg::Csv) => Format::Csv,
        Some(FormatArg::Json) => Format::Json,
        None => cfg.format,
    };
    let report = match run_grid(&cfg.cells, &cfg.methods, &cfg.options) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: simulation failed: {e}");
            return Ok(ExitCode::from(EXIT_METHOD));
        }
    };
    let body = match format {
        Format::Csv => to_csv(&report),
        Format::Json => to_json(&report),
    };
    match args.out.or(cfg.output) {
        Some(path) if path.as_os_str() != "-" => {
            fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        }
        _ => std::io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn selftest(args: SelftestArgs) -> anyhow::Result<ExitCode> {
    let opts = SelftestOptions { seed: args.seed, instances: args.instances, perturbation: args.perturb_tangent };
    let mut all_passed = true;
    let mut out = std::io::stdout().lock();
    for suite in run_all(&opts) {
        if suite.passed {
            writeln!(out, "{}: pass ({})", suite.name, suite.detail)?;
        } else {
            all_passed = false;
            writeln!(out, "{}: FAIL ({})", suite.name, suite.detail)?;
            if let Some(ce) = &suite.counterexample {
                writeln!(out, "{}: counterexample {}", suite.name, serde_json::to_string(ce)?)?;
            }
        }
    }
    Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::from(EXIT_SELFTEST) })
}
