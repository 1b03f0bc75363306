mod commands;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use norton_core::{Error, FamilyKind};

use commands::Output;

#[derive(Parser, Debug)]
#[command(name = "norton", version, about = "Norton algebras of Cayley graph families, in exact arithmetic")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<String>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Evaluation budget for enumerations and counts.
    #[arg(long, env = "NORTON_BUDGET", default_value_t = 10_000_000, global = true)]
    budget: u128,
    /// Seed for every randomized procedure.
    #[arg(long, env = "NORTON_SEED", default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Hamming,
    Hypercube,
    HalvedCube,
    FoldedCube,
    FoldedHalfCube,
    Bilinear,
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    family: FamilyName,
    #[arg(long)]
    n: Option<usize>,
    /// Alphabet size (Hamming) or column count (bilinear).
    #[arg(long)]
    e: Option<u32>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    d: Option<usize>,
}

impl FamilyArgs {
    pub fn kind(&self) -> Result<FamilyKind, Error> {
        let need = |v: Option<usize>, name: &str| {
            v.ok_or_else(|| Error::InvalidParameter(format!("--{name} is required for this family")))
        };
        let n = || need(self.n, "n");
        let e = || need(self.e.map(|x| x as usize), "e");
        Ok(match self.family {
            FamilyName::Hamming => FamilyKind::Hamming { n: n()?, e: e()? as u32 },
            FamilyName::Hypercube => FamilyKind::Hypercube { n: n()? },
            FamilyName::HalvedCube => FamilyKind::HalvedCube { n: n()? },
            FamilyName::FoldedCube => FamilyKind::FoldedCube { n: n()? },
            FamilyName::FoldedHalfCube => FamilyKind::FoldedHalfCube { n: n()? },
            FamilyName::Bilinear => FamilyKind::Bilinear {
                q: need(self.q.map(|x| x as usize), "q")? as u32,
                d: need(self.d, "d")?,
                e: e()?,
            },
        })
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CountModeArg {
    Auto,
    Exact,
    Witness,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum IsoKind {
    /// V_1(folded Q_4) and V_2(Q_4)
    FoldedQ4,
    /// V_2(halved Q_4) and V_2(Q_3)
    HalvedQ4,
    /// V_i(halved Q_n) and V_i(Q_n), with --n and --i
    HalvedCube,
    /// V_1(folded halved Q_8) and V_2(halved Q_8)
    FoldedHalfQ8,
    /// V_2(H(2,3)) and two copies of V_1(H(1,3))
    PairingH23,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Adjacency spectrum against the closed-form eigenvalues.
    Spectrum {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Multiplication table of V_i.
    Table {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        i: usize,
        /// Recompute every entry by projection.
        #[arg(long)]
        verify_oracle: bool,
    },
    /// Associative spectrum of the Norton product on V_i.
    Nonassoc {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 1)]
        i: usize,
        #[arg(long, default_value_t = 6)]
        max_m: usize,
        #[arg(long, value_enum, default_value_t = CountModeArg::Auto)]
        mode: CountModeArg,
        /// Witness attempts per unresolved pair.
        #[arg(long, default_value_t = 10_000)]
        attempts: usize,
    },
    /// Classified idempotents of V_1(H(1,e)).
    Idempotents {
        #[arg(long)]
        e: u32,
    },
    /// Seeded checks of the constructed automorphism actions on V_i.
    Autocheck {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        i: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Closed-form products against the projection oracle on every basis pair.
    OracleVerify {
        #[command(flatten)]
        family: FamilyArgs,
        /// Restrict to one eigenspace.
        #[arg(long)]
        i: Option<usize>,
    },
    /// Checks a named isomorphism between two eigenspaces.
    Isocheck {
        #[arg(long, value_enum)]
        kind: IsoKind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        i: Option<usize>,
    },
}

pub struct Config {
    pub format: Format,
    pub budget: u128,
    pub seed: u64,
}

/// Process exit status: 0 verified, 1 failed check, 2 usage, 3 budget.
fn exit_code(err: &Error) -> (u8, &'static str) {
    match err {
        Error::BudgetExceeded { .. } => (3, "budget-exceeded"),
        Error::CheckFailed(_) | Error::NotAutomorphism(_) => (1, "check-failed"),
        _ => (2, "usage"),
    }
}

fn run(cli: &Cli) -> Result<Output, Error> {
    if cli.budget == 0 {
        return Err(Error::InvalidParameter("--budget must be positive".into()));
    }
    let cfg = Config { format: cli.format, budget: cli.budget, seed: cli.seed };
    match &cli.command {
        Command::Spectrum { family } => commands::spectrum(&cfg, &family.kind()?),
        Command::Table { family, i, verify_oracle } => commands::table(&cfg, &family.kind()?, *i, *verify_oracle),
        Command::Nonassoc { family, i, max_m, mode, attempts } => {
            commands::nonassoc(&cfg, &family.kind()?, *i, *max_m, *mode, *attempts)
        }
        Command::Idempotents { e } => commands::idempotents(&cfg, *e),
        Command::Autocheck { family, i, samples } => commands::autocheck(&cfg, &family.kind()?, *i, *samples),
        Command::OracleVerify { family, i } => commands::oracle_verify(&cfg, &family.kind()?, *i),
        Command::Isocheck { kind, n, i } => commands::isocheck(&cfg, *kind, *n, *i),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 || rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().is_err() {
            eprintln!("{}", serde_json::json!({ "error": { "code": "usage", "message": "invalid --threads" } }));
            return ExitCode::from(2);
        }
    }
    let out = match run(&cli) {
        Ok(out) => out,
        Err(err) => {
            let (code, name) = exit_code(&err);
            eprintln!("{}", serde_json::json!({ "error": { "code": name, "message": err.to_string() } }));
            return ExitCode::from(code);
        }
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, &out.text),
        None => std::io::stdout().lock().write_all(out.text.as_bytes()),
    };
    if let Err(err) = written {
        eprintln!("{}", serde_json::json!({ "error": { "code": "io", "message": err.to_string() } }));
        return ExitCode::from(2);
    }
    ExitCode::from(if out.passed { 0 } else { 1 })
}
