//! `locnilp`: classify, verify and cross-check irreducible maximal locally
//! nilpotent subgroups of `GL(q, F)`.

mod commands;
mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use locnilp::oracle::MaximalityMode;

#[derive(Parser, Debug)]
#[command(
    name = "locnilp",
    version,
    about = "Irreducible maximal locally nilpotent subgroups of GL(q, F)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output path; `-` writes to standard output.
    #[arg(long, global = true, default_value = "-")]
    pub output: String,
    /// Report format (default json; `conj` defaults to text).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: LOCNILP_THREADS, else all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Include wall-clock timings (makes output non-deterministic).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Normalizer,
}

impl From<Mode> for MaximalityMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Exhaustive => MaximalityMode::Exhaustive,
            Mode::Normalizer => MaximalityMode::Normalizer,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Target {
    /// Prime degree.
    #[arg(long)]
    pub q: usize,
    /// `gf:<p>`, `gf:<p>^<k>` or `q`.
    #[arg(long)]
    pub field: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GroupKind {
    #[value(name = "H")]
    H,
    #[value(name = "G")]
    G,
    #[value(name = "abelian")]
    Abelian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConjKind {
    /// `I·a` versus `I·b` for diagonal `a`, `b`.
    #[value(name = "Ia")]
    Ia,
    /// `H_a` versus `H_b`.
    #[value(name = "H")]
    H,
    /// The elements `d·b_1`, `d·b_2` of `G(α, ·)`.
    #[value(name = "db")]
    Db,
    /// `G(α, a)` versus `G(α, b)`.
    #[value(name = "G")]
    G,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List class representatives with certificates.
    Classify {
        #[command(flatten)]
        target: Target,
        /// Entries per infinite family.
        #[arg(long, default_value_t = 25)]
        limit: usize,
        /// Skip the per-representative checks.
        #[arg(long)]
        no_verify: bool,
        /// Skip the adjunction maximality test.
        #[arg(long)]
        no_maximality: bool,
        #[arg(long, value_enum)]
        maximality_mode: Option<Mode>,
    },
    /// Verify one group: irreducibility, nilpotency class, maximality.
    Verify {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum)]
        kind: GroupKind,
        /// `α` for H and G; the integer `m` for an abelian group over Q.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        /// Coefficients of `b` in powers of `I_α`, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        #[arg(long)]
        no_maximality: bool,
        #[arg(long, value_enum)]
        maximality_mode: Option<Mode>,
    },
    /// Decide conjugacy by the determinant criteria and echo a brute-force check.
    Conj {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum)]
        kind: ConjKind,
        /// First parameter: diagonal entries (Ia), `α_1` (H) or `b_1` (db, G).
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// Second parameter, same shape as `--a`.
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// `α` for db and G.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
    },
    /// Audit a classification against the brute-force oracles.
    Oracle {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 25)]
        limit: usize,
        /// Random instances per sampled family.
        #[arg(long, default_value_t = 400)]
        samples: usize,
        /// Skip the subgroup-lattice comparison.
        #[arg(long)]
        no_lattice: bool,
        #[arg(long, value_enum)]
        maximality_mode: Option<Mode>,
    },
    /// Run the seeded invariant suite.
    Props {
        /// Random instances per field for the arithmetic identities.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

/// Outcome of a command: the rendered report and whether it found a discrepancy.
pub struct Outcome {
    pub report: output::Report,
    pub discrepancy: bool,
}

fn threads(common: &Common) -> Result<Option<usize>, String> {
    if let Some(n) = common.threads {
        return Ok(Some(n));
    }
    match std::env::var("LOCNILP_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| format!("LOCNILP_THREADS must be a positive integer, got `{v}`")),
        Err(_) => Ok(None),
    }
}

fn run(cli: Cli) -> Result<Outcome, String> {
    if let Some(n) = threads(&cli.common)? {
        if n == 0 {
            return Err("thread count must be at least 1".into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    let start = Instant::now();
    let mut outcome = commands::dispatch(&cli.command, &cli.common).map_err(|e| e.to_string())?;
    if cli.common.timings {
        outcome
            .report
            .set_elapsed(start.elapsed().as_millis() as u64);
    }
    let default = match cli.command {
        Command::Conj { .. } => Format::Text,
        _ => Format::Json,
    };
    let text = outcome
        .report
        .render(cli.common.format.unwrap_or(default))
        .map_err(|e| e.to_string())?;
    output::write(&cli.common.output, &text)
        .map_err(|e| format!("cannot write {}: {e}", cli.common.output))?;
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(o) if o.discrepancy => {
            eprintln!("discrepancy: a criterion disagrees with brute force");
            ExitCode::from(2)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
