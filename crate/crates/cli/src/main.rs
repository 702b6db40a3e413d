use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ence_cli::{
    cmd_classify, cmd_detect, cmd_gen, cmd_verify_theorem, CliResult, DetectMethod, Family, GenParams,
    Outcome, RunConfig,
};
use ence_core::{BipartiteDims, Seed, Side, Tolerances};

/// Eigenvalue-change detection of nonclassical correlation and analysis of
/// eigenvalue-preserving maps.
///
/// Exit status: 0 positive verdict, 1 negative verdict, 2 input or
/// precondition error.
#[derive(Parser, Debug)]
#[command(name = "ence", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Master seed for all sampling.
    #[arg(long, global = true, env = "ENCE_SEED", default_value_t = 0)]
    seed: u64,
    /// Number of trials for verify-theorem.
    #[arg(long, global = true, env = "ENCE_TRIALS", default_value_t = 100)]
    trials: usize,
    /// Write the report (or generated file) here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, env = "ENCE_TOL_HERM")]
    tol_herm: Option<f64>,
    #[arg(long, global = true, env = "ENCE_TOL_TRACE")]
    tol_trace: Option<f64>,
    #[arg(long, global = true, env = "ENCE_TOL_PSD")]
    tol_psd: Option<f64>,
    #[arg(long, global = true, env = "ENCE_TOL_SPECTRA")]
    tol_spectra: Option<f64>,
    #[arg(long, global = true, env = "ENCE_TOL_COMMUTATOR")]
    tol_commutator: Option<f64>,
    #[arg(long, global = true, env = "ENCE_TOL_CLASSIFY")]
    tol_classify: Option<f64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Pt,
    Chen,
    Pcc,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    A,
    B,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    Pcc,
    Onewcc,
    Bell,
    #[value(alias = "rho_p")]
    RhoP,
    Random,
    Transpose,
    Conjugation,
    TransposeConjugation,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a detector on a density-matrix file.
    Detect {
        file: PathBuf,
        /// Bipartite dimensions, e.g. 2x3 (defaults to the file's dims).
        #[arg(long)]
        dims: Option<BipartiteDims>,
        #[arg(long, value_enum, default_value_t = MethodArg::Pt)]
        method: MethodArg,
        /// Transposed side for pt; classical side for chen.
        #[arg(long, value_enum, default_value_t = SideArg::B)]
        side: SideArg,
        /// Largest subsystem dimension accepted by chen and pcc.
        #[arg(long, default_value_t = ence_core::detect::CHEN_MAX_SIDE_DIM)]
        max_side_dim: usize,
    },
    /// Classify a superoperator file as similarity, transpose-similarity, or not EP.
    Classify {
        file: PathBuf,
        /// Density matrices sampled for the EP and det/trace checks.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Check which spectrum (I⊗Λ)ρ reproduces on random bipartite states.
    VerifyTheorem {
        file: PathBuf,
        #[arg(long)]
        d_a: usize,
    },
    /// Write a state or map file.
    Gen {
        #[arg(value_enum)]
        family: FamilyArg,
        #[arg(long, default_value = "2x2")]
        dims: BipartiteDims,
        /// Comma-separated pcc weights, index i·d_b + j.
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        /// Mixing parameter for rho-p.
        #[arg(long)]
        p: Option<f64>,
        /// Rank for random states (default full).
        #[arg(long)]
        rank: Option<usize>,
        /// Side dimension of generated maps.
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Condition-number bound for the random S of generated maps.
        #[arg(long, default_value_t = 100.0)]
        max_cond: f64,
        /// Add a Ginibre perturbation of this Frobenius norm to a generated map.
        #[arg(long)]
        perturb: Option<f64>,
    },
}

fn config(g: &GlobalArgs) -> RunConfig {
    let mut tolerances = Tolerances::default();
    let overrides = [
        ("herm", g.tol_herm),
        ("trace", g.tol_trace),
        ("psd", g.tol_psd),
        ("spectra", g.tol_spectra),
        ("commutator", g.tol_commutator),
        ("classify", g.tol_classify),
    ];
    for (name, value) in overrides {
        if let Some(v) = value {
            tolerances.set(name, v);
        }
    }
    RunConfig {
        tolerances,
        seed: Seed(g.seed),
        trials: g.trials,
        output_path: g.out.clone(),
    }
}

fn side(s: SideArg) -> Side {
    match s {
        SideArg::A => Side::A,
        SideArg::B => Side::B,
    }
}

fn run(command: Command, cfg: &RunConfig) -> CliResult<Outcome> {
    match command {
        Command::Detect { file, dims, method, side: s, max_side_dim } => {
            let method = match method {
                MethodArg::Pt => DetectMethod::Pt,
                MethodArg::Chen => DetectMethod::Chen,
                MethodArg::Pcc => DetectMethod::Pcc,
            };
            cmd_detect(&file, dims, method, side(s), max_side_dim, cfg)
        }
        Command::Classify { file, samples } => cmd_classify(&file, samples, cfg),
        Command::VerifyTheorem { file, d_a } => cmd_verify_theorem(&file, d_a, cfg),
        Command::Gen { family, dims, weights, p, rank, d, max_cond, perturb } => {
            let family = match family {
                FamilyArg::Pcc => Family::Pcc,
                FamilyArg::Onewcc => Family::Onewcc,
                FamilyArg::Bell => Family::Bell,
                FamilyArg::RhoP => Family::RhoP,
                FamilyArg::Random => Family::Random,
                FamilyArg::Transpose => Family::Transpose,
                FamilyArg::Conjugation => Family::Conjugation,
                FamilyArg::TransposeConjugation => Family::TransposeConjugation,
            };
            let params = GenParams { dims, weights, p, rank, d, max_cond, perturb };
            cmd_gen(family, &params, cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let cfg = config(&cli.global);
    match run(cli.command, &cfg) {
        Ok(outcome) => {
            let text = outcome.text + "\n";
            match &cfg.output_path {
                Some(path) => {
                    if let Err(e) = fs::write(path, text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(outcome.status)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
