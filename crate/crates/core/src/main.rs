use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use slgrowth::runner::{run, ExperimentConfig, GeneratorMode, OutputFormat, SubcommandKind};

const AFTER_HELP: &str = "\
Outputs (CSV: comma separated, header row, LF line endings):
  expand        n,p,radius,size,saturated
  growth-curve  n,p,|A|,|AAA|,epsilon_hat,saturated,|A_k|...,eps_A_k...,group_order,degenerate,generation
  torus-scan    witness_kappa,torus_order,split_flag,intersection_k,ratio_k...,regular_count
  trace-lab     t_kappa,jvec,member_count   (jvec entries joined by '-')
  lemma-check   suite,n,p,trials,passes,failures
  energy        y,x_size,dilate_size,energy   (X is a seeded random subset of size --count)
  vital         kind,y,fiber_size,exponent,x_size,x_bound,y_size,min_fiber,max_fiber,
                min_exponent,max_exponent,proj_coord,y_prime,y_high,energy_sum,degenerate
                One 'fiber' row per vector y in Y with |X_y| and log|X_y|/log|X|, then one
                'summary' row: x_bound = p^(1-delta); proj_coord is the coordinate of Y with
                the most distinct values and y_prime their count; y_high counts fibers of at
                least half the maximal size; energy_sum = sum of E(X, y1 X) over that
                coordinate's values; degenerate when |X| <= 1. Undefined exponents print nan.

A is the word ball of radius --radius around the generators (all of SL_n(F_p) with
--generators full). A manifest with config, timing, status and sha256 digests of every
output is written next to the output as <out>.manifest.json.

Exit codes: 0 success, 1 other failure, 2 config error, 3 budget exceeded, 4 generation failed.";

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Command {
    Expand,
    GrowthCurve,
    TorusScan,
    TraceLab,
    LemmaCheck,
    Energy,
    Vital,
}

impl From<Command> for SubcommandKind {
    fn from(c: Command) -> Self {
        match c {
            Command::Expand => SubcommandKind::Expand,
            Command::GrowthCurve => SubcommandKind::GrowthCurve,
            Command::TorusScan => SubcommandKind::TorusScan,
            Command::TraceLab => SubcommandKind::TraceLab,
            Command::LemmaCheck => SubcommandKind::LemmaCheck,
            Command::Energy => SubcommandKind::Energy,
            Command::Vital => SubcommandKind::Vital,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Generators {
    Standard,
    Random,
    Full,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Growth experiments in SL_n(F_p).
#[derive(Debug, Parser)]
#[command(version, about, after_help = AFTER_HELP)]
struct Cli {
    command: Command,
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<u32>,
    /// Comma-separated primes for growth-curve.
    #[arg(long, value_delimiter = ',')]
    p_list: Option<Vec<u32>>,
    #[arg(long, value_enum)]
    generators: Option<Generators>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random generators, or |X| for energy.
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    radius: Option<u32>,
    #[arg(long)]
    pool_radius: Option<u32>,
    /// Comma-separated ball radii.
    #[arg(long = "k", value_delimiter = ',')]
    k_list: Option<Vec<u32>>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    budget_elems: Option<usize>,
    #[arg(long)]
    budget_secs: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    workers: Option<usize>,
    /// Samples per lemma-check suite.
    #[arg(long)]
    trials: Option<usize>,
    /// Resampling attempts for random generators.
    #[arg(long)]
    retries: Option<usize>,
    /// Witnesses examined by trace-lab.
    #[arg(long)]
    max_witnesses: Option<usize>,
    /// expand: also write the final ball to this file.
    #[arg(long)]
    dump: Option<PathBuf>,
}

impl Cli {
    fn apply(self, cfg: &mut ExperimentConfig) {
        macro_rules! set {
            ($($field:ident),*) => { $(if let Some(v) = self.$field { cfg.$field = v; })* };
        }
        set!(n, p, p_list, seed, count, radius, pool_radius, k_list, delta, budget_elems, trials, retries, max_witnesses);
        if let Some(g) = self.generators {
            cfg.generators = match g {
                Generators::Standard => GeneratorMode::Standard,
                Generators::Random => GeneratorMode::Random,
                Generators::Full => GeneratorMode::Full,
            };
        }
        if let Some(f) = self.format {
            cfg.format = match f {
                Format::Csv => OutputFormat::Csv,
                Format::Json => OutputFormat::Json,
            };
        }
        if self.budget_secs.is_some() {
            cfg.budget_secs = self.budget_secs;
        }
        if self.out.is_some() {
            cfg.out = self.out;
        }
        if self.workers.is_some() {
            cfg.workers = self.workers;
        }
        if self.dump.is_some() {
            cfg.dump = self.dump;
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let sub = SubcommandKind::from(cli.command);
    let mut cfg = match &cli.config {
        Some(path) => match ExperimentConfig::from_json_file(path) {
            Ok(cfg) => cfg,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
        None => ExperimentConfig::default(),
    };
    cli.apply(&mut cfg);
    let manifest = run(&cfg, sub);
    if let Some(err) = &manifest.status.error {
        eprintln!("error: {err}");
    }
    ExitCode::from(manifest.exit_code() as u8)
}
