use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use han_nystrom::bench::{
    build_source, emit_csv, emit_svg_plot, merge_settings, parse_kv, reference_svd, run_on, to_csv,
    ExperimentConfig, Source, ORACLE_CAP_ENV,
};
use han_nystrom::Error;

/// Runs low-rank approximation experiments and writes one CSV row per
/// (method, repeat, sample size or iteration).
#[derive(Parser, Debug)]
#[command(name = "han-bench", version)]
struct Cli {
    /// flower, fem, airfoil, set3d, circulant or csv:<path>
    #[arg(long)]
    dataset: Option<String>,
    /// Number of row points (or the order of the circulant corner)
    #[arg(long)]
    m: Option<String>,
    /// Number of column points
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    dataset_seed: Option<String>,
    /// Circulant symbol: t, one, exp-it, abs-sin
    #[arg(long)]
    symbol: Option<String>,
    /// Set3D jitter as a fraction of the grid spacing
    #[arg(long)]
    jitter: Option<String>,
    /// Standardize CSV points (true or false)
    #[arg(long)]
    standardize: Option<String>,
    /// Kernel name, e.g. inv-diff, log-dist, gaussian:0.5
    #[arg(long)]
    kernel: Option<String>,
    /// nys-b, nys-p, nys-r, han-b, han-u, han-u-eff, han-a (repeatable)
    #[arg(long)]
    method: Vec<String>,
    /// Baseline sample sizes, comma separated
    #[arg(long)]
    samples: Option<String>,
    /// Refinement rounds for nys-r
    #[arg(long)]
    steps: Option<String>,
    /// HAN columns per iteration
    #[arg(long)]
    stepsize: Option<String>,
    #[arg(long)]
    tau: Option<String>,
    #[arg(long)]
    max_samples: Option<String>,
    #[arg(long)]
    max_rank: Option<String>,
    /// Consecutive estimates below tau needed to stop
    #[arg(long)]
    hits: Option<String>,
    #[arg(long)]
    repeats: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// CSV output path (stdout when absent)
    #[arg(long)]
    out: Option<String>,
    /// SVG output path
    #[arg(long)]
    plot: Option<String>,
    /// Largest m*n for dense reference errors and the SVD curve
    #[arg(long)]
    oracle_cap: Option<String>,
    /// Reference errors for all, final or none of the iterates
    #[arg(long)]
    errors: Option<String>,
    #[arg(long)]
    power_iters: Option<String>,
    /// Leave elapsed_ns empty so repeated runs give identical bytes
    #[arg(long)]
    no_timing: bool,
    /// Flat key = value file; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Cli {
    fn settings(&self) -> Vec<(String, String)> {
        let single = [
            ("dataset", &self.dataset),
            ("m", &self.m),
            ("n", &self.n),
            ("dataset-seed", &self.dataset_seed),
            ("symbol", &self.symbol),
            ("jitter", &self.jitter),
            ("standardize", &self.standardize),
            ("kernel", &self.kernel),
            ("samples", &self.samples),
            ("steps", &self.steps),
            ("stepsize", &self.stepsize),
            ("tau", &self.tau),
            ("max-samples", &self.max_samples),
            ("max-rank", &self.max_rank),
            ("hits", &self.hits),
            ("repeats", &self.repeats),
            ("seed", &self.seed),
            ("out", &self.out),
            ("plot", &self.plot),
            ("oracle-cap", &self.oracle_cap),
            ("errors", &self.errors),
            ("power-iters", &self.power_iters),
        ];
        let mut out: Vec<(String, String)> =
            single.into_iter().filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone()))).collect();
        out.extend(self.method.iter().map(|m| ("method".to_string(), m.clone())));
        if self.no_timing {
            out.push(("timing".into(), "false".into()));
        }
        out
    }
}

fn config(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let file = match &cli.config {
        Some(p) => parse_kv(&std::fs::read_to_string(p)?)?,
        None => Vec::new(),
    };
    let env = std::env::var(ORACLE_CAP_ENV).ok();
    ExperimentConfig::from_settings(&merge_settings(&file, env.as_deref(), &cli.settings())?)
}

fn run(cfg: &ExperimentConfig) -> Result<(), Error> {
    let src = build_source(cfg)?;
    let rows = match &src {
        Source::Real(s) => run_on(cfg, s)?,
        Source::Complex(s) => run_on(cfg, s)?,
    };
    match &cfg.out {
        Some(p) => emit_csv(&rows, p)?,
        None => std::io::stdout().write_all(to_csv(&rows)?.as_bytes())?,
    }
    if let Some(p) = &cfg.plot {
        let svd = reference_svd(&src, cfg.oracle_cap)?;
        if svd.is_none() {
            let (m, n) = src.shape();
            eprintln!("note: {m}x{n} exceeds the oracle cap {}; plotting without the svd curve", cfg.oracle_cap);
        }
        emit_svg_plot(&rows, svd.as_deref(), p)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let cfg = match config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match run(&cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}
