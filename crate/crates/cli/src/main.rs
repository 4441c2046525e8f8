//! `cmint`: validate CM fields, compute `T_1 . CM(K)` with its `b_1` check,
//! run the singular-moduli case and enumerate small fields.

mod commands;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "cmint", version, about = "Arithmetic intersections of CM cycles on Hilbert modular surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for per-prime and per-field work (default: all cores).
    #[arg(long, global = true, env = "CMINT_THREADS")]
    threads: Option<usize>,

    /// Diagnostics on stderr; repeat for more detail.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

/// `(D, Delta, w)` with `Delta = (u + v sqrt D)/2` and `w = w0 + w1 omega`.
#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Prime discriminant of the real quadratic subfield.
    #[arg(long = "D", allow_negative_numbers = true)]
    pub d: i64,
    /// Delta as `u,v`, meaning (u + v sqrt D)/2; u and v must have equal parity.
    #[arg(long, value_parser = parse_delta, allow_hyphen_values = true)]
    pub delta: (i64, i64),
    /// w as `w0,w1`, meaning w0 + w1 (D + sqrt D)/2.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub w: (i64, i64),
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the admissibility conditions for (D, Delta, w).
    Validate(FieldArgs),
    /// Compute T1.CM(K) as a formal sum of c_p log p.
    Intersect {
        #[command(flatten)]
        field: FieldArgs,
        /// Print the b1 comparison table, including the independent classifier.
        #[arg(long)]
        verify: bool,
    },
    /// The degenerate case: log |J(d1, d2)| against a numerical j-function.
    Gz {
        #[arg(long, allow_negative_numbers = true)]
        d1: i64,
        #[arg(long, allow_negative_numbers = true)]
        d2: i64,
        /// Decimal digits for the j-function oracle (at least 30).
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(30..))]
        precision: u32,
    },
    /// List admissible fields with Norm(Delta) up to a bound, with their intersections.
    Enumerate {
        /// Comma-separated list of D values; may be empty.
        #[arg(long = "D", value_delimiter = ',', num_args = 0..)]
        d: Vec<i64>,
        /// Largest Norm(Delta) to include (at least 5).
        #[arg(long, value_parser = clap::value_parser!(i64).range(5..))]
        bound: i64,
    },
}

fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected two integers `a,b`, got `{s}`"))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|e| format!("`{}`: {e}", t.trim()))
    };
    Ok((parse(a)?, parse(b)?))
}

fn parse_delta(s: &str) -> Result<(i64, i64), String> {
    let (u, v) = parse_pair(s)?;
    if (u - v).rem_euclid(2) != 0 {
        return Err(format!("u = {u} and v = {v} must have equal parity"));
    }
    Ok((u, v))
}

/// Result of a command: whether the computation succeeded on the merits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    DomainFailure,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    env_logger::Builder::new().filter_level(level).init();

    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("could not configure {n} threads: {e}");
        }
    }

    let result = match cli.command {
        Command::Validate(field) => commands::validate(&field, cli.format),
        Command::Intersect { field, verify } => commands::intersect(&field, verify, cli.format),
        Command::Gz { d1, d2, precision } => commands::gz(d1, d2, precision, cli.format),
        Command::Enumerate { d, bound } => Ok(commands::enumerate(&d, bound, cli.format)),
    };
    match result {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::DomainFailure) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
