use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use harness_cli::{
    parse_mu_list, parse_points, run_selftest, run_sweep, run_verify, Level, Outcome, ReportDocument, Request,
    SelftestOptions, SweepSpec, REPORT_SCHEMA,
};
use serde_json::Value;

/// Exit code for command-line and configuration errors.
const USAGE_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "sl2c-verify", version, about = "Numerical verification of complex-field sum-integral identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify one identity or plane-integral check.
    Verify(RunArgs),
    /// Scan the common real part of the parameters entering the convergence condition.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
    },
    /// Run the built-in property suites.
    Selftest {
        #[arg(long, value_enum, default_value_t = LevelArg::Fast)]
        level: LevelArg,
        #[command(flatten)]
        out: OutputArgs,
        /// Scale σ_N in the T-integral comparison (sensitivity check).
        #[arg(long, hide = true, default_value_t = 1.0)]
        sigma_scale: f64,
    },
    /// Print the JSON Schema of the report document.
    ReportSchema,
}

#[derive(Copy, Clone, ValueEnum)]
enum LevelArg {
    Fast,
    Full,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    /// Worker threads for independent cases.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add wall-clock time to the report (makes it non-reproducible).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct RunArgs {
    /// barnes, dbw, g1, g2, g3, chain, star or fourier.
    kind_pos: Option<String>,
    #[arg(long)]
    kind: Option<String>,
    /// Chain length N of g1/g2/g3.
    #[arg(long)]
    n: Option<usize>,
    /// Sampler seed, or 1-based corpus index for plane checks.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of consecutive seeds.
    #[arg(long)]
    count: Option<u64>,
    /// Sample half-integer labels.
    #[arg(long)]
    half_integer: bool,
    /// Explicit points as comma-separated m:re:im triples, z list then w list.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "mu")]
    params: Option<String>,
    /// Shorthand for label-0 points with real μ.
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    /// JSON file with run settings; it takes precedence over the command line.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    delta_min: Option<f64>,
    /// Engine override key=value (also accepted as --engine.key=value).
    #[arg(long = "engine", value_name = "KEY=VALUE")]
    engine: Vec<String>,
    #[command(flatten)]
    out: OutputArgs,
}

impl RunArgs {
    fn request(&self, sweep: Option<SweepSpec>, warnings: &mut Vec<String>) -> Result<Request, String> {
        let kind = match (&self.kind_pos, &self.kind) {
            (Some(a), Some(b)) if a != b => return Err(format!("kind given twice: {a} and {b}")),
            (a, b) => a.clone().or_else(|| b.clone()),
        };
        let params = match (&self.params, &self.mu) {
            (Some(p), _) => Some(parse_points(p)?),
            (None, Some(m)) => Some(parse_mu_list(m)?),
            _ => None,
        };
        let mut engine = std::collections::BTreeMap::new();
        for kv in &self.engine {
            let (k, v) = kv.split_once('=').ok_or_else(|| format!("engine override {kv:?} is not key=value"))?;
            engine.insert(k.trim().to_string(), Value::String(v.trim().to_string()));
        }
        let cli = Request {
            kind,
            n: self.n,
            seed: self.seed,
            count: self.count,
            half_integer: self.half_integer.then_some(true),
            params,
            tol: self.tol,
            delta_min: self.delta_min,
            engine,
            sweep,
        };
        match &self.config {
            None => Ok(cli),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
                let file: Request = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
                Ok(cli.merge(file, warnings))
            }
        }
    }
}

/// Rewrite `--engine.key=value` into `--engine key=value`.
fn expand_engine_flags(args: impl Iterator<Item = String>) -> Vec<String> {
    let mut out = Vec::new();
    for a in args {
        match a.strip_prefix("--engine.") {
            Some(rest) => {
                out.push("--engine".to_string());
                out.push(rest.to_string());
            }
            None => out.push(a),
        }
    }
    out
}

fn emit(doc: &ReportDocument, out: &OutputArgs) -> Result<(), String> {
    let text = match out.format {
        Format::Json => doc.to_json(),
        Format::Csv => doc.to_csv().map_err(|e| e.to_string())?,
    };
    match &out.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn summarize(doc: &ReportDocument) {
    for r in &doc.records {
        if r.outcome != Outcome::Pass {
            let detail = r.detail.as_deref().unwrap_or("");
            let v: Vec<String> = r.violations.iter().map(|v| v.to_string()).collect();
            eprintln!("{:?}: {} {} {}", r.outcome, r.label, detail, v.join("; "));
        }
    }
    let s = &doc.summary;
    eprintln!(
        "{} records: {} pass, {} fail, {} invalid, {} non-convergent",
        s.total, s.passed, s.failed, s.invalid, s.nonconvergent
    );
    if doc.command == "selftest" {
        if let Some(first) = doc.records.iter().find(|r| r.outcome != Outcome::Pass) {
            eprintln!("selftest failed: {}", first.label);
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    let start = Instant::now();
    let mut warnings = Vec::new();
    let (mut doc, out) = match cli.command {
        Command::ReportSchema => {
            print!("{REPORT_SCHEMA}");
            return Ok(0);
        }
        Command::Verify(args) => {
            let cfg = args.request(None, &mut warnings)?.resolve()?;
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            (run_verify(&cfg, args.out.jobs)?, args.out)
        }
        Command::Sweep { run, from, to, steps } => {
            let cfg = run.request(Some(SweepSpec { from, to, steps }), &mut warnings)?.resolve()?;
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            (run_sweep(&cfg, run.out.jobs)?, run.out)
        }
        Command::Selftest { level, out, sigma_scale } => {
            let level = match level {
                LevelArg::Fast => Level::Fast,
                LevelArg::Full => Level::Full,
            };
            (run_selftest(SelftestOptions { level, sigma_scale }, out.jobs), out)
        }
    };
    if out.timings {
        doc.wall_clock_s = Some(start.elapsed().as_secs_f64());
    }
    emit(&doc, &out)?;
    summarize(&doc);
    Ok(doc.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse_from(expand_engine_flags(std::env::args())) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE_ERROR } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE_ERROR)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn engine_flags_are_expanded() {
        let args = ["x", "--engine.rel_tol=1e-3", "--tol", "1"].map(String::from);
        assert_eq!(expand_engine_flags(args.into_iter()), ["x", "--engine", "rel_tol=1e-3", "--tol", "1"]);
    }

    #[test]
    fn cli_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
