//! The `jacobiform` command-line front end.

mod commands;
mod error;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "jacobiform", version, about = "Typed λ-calculus for multivariate functions and the chain rule")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the result to this file (atomically) instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Sexpr,
    BarredArrow,
    Latex,
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Type-check a term file and print its type.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "sexpr")]
        format: Format,
    },
    /// Print a term file in another notation.
    Emit {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "barred-arrow")]
        format: Format,
    },
    /// Instantiate arity variables and write out every tuple expansion.
    Expand {
        file: PathBuf,
        /// Assignments such as `m=2,n=3`; index parameters are 1-based.
        #[arg(long)]
        arity: String,
        #[arg(long, value_enum, default_value = "sexpr")]
        format: Format,
    },
    /// Encode the partial derivative ∂f^j/∂x^i of a function term.
    Deriv {
        #[arg(long = "f")]
        f: PathBuf,
        /// Output component, 1-based.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=16))]
        j: u64,
        /// Input component, 1-based.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=16))]
        i: u64,
        #[arg(long, value_enum, default_value = "sexpr")]
        format: Format,
    },
    /// Derive the multivariate chain rule and print the listing.
    Derive(DeriveArgs),
    /// Evaluate a term in a polynomial environment.
    Eval {
        file: PathBuf,
        #[arg(long)]
        env: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Transform tensor-density components through a chain of transition maps.
    Transform {
        #[arg(long)]
        field: PathBuf,
        #[arg(long = "map", required = true)]
        maps: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "forward")]
        direction: DirectionArg,
        /// Check J·J⁻¹ = I for every map at random rational points.
        #[arg(long)]
        check_kronecker: bool,
        #[arg(long, default_value_t = 5)]
        points: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check the two assumed equalities on random or given polynomial maps.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Forward,
    Inverse,
}

#[derive(Debug, Args)]
pub struct DeriveArgs {
    /// Fully symbolic arities and positions (the default when no arity is given).
    #[arg(long, conflicts_with_all = ["m", "n", "k", "i", "j"])]
    general: bool,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=16))]
    m: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=16))]
    n: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=16))]
    k: Option<u64>,
    /// Input position, 1-based.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=16))]
    i: Option<u64>,
    /// Output position, 1-based.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=16))]
    j: Option<u64>,
    /// Continue to the point-free ⊕/⊗ form.
    #[arg(long)]
    pointfree: bool,
    /// Append the annotation-only Jacobian lines.
    #[arg(long, requires = "pointfree")]
    tensor_annotation: bool,
    /// Print only the first summand of written-out sums under braces.
    #[arg(long)]
    elide: bool,
    #[arg(long, value_enum, default_value = "latex")]
    format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Environment binding `f` and `g`; random maps are drawn otherwise.
    #[arg(long, conflicts_with_all = ["m", "n", "k"])]
    env: Option<PathBuf>,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..=16))]
    m: u64,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..=16))]
    n: u64,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..=16))]
    k: u64,
    /// Degree bound of random maps.
    #[arg(long, default_value_t = 3)]
    degree: u32,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Overrides JACOBIFORM_SEED and the built-in default.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

/// A rendered result: the plain text and its JSON payload.
pub struct Outcome {
    pub text: String,
    pub json: serde_json::Value,
}

impl Outcome {
    pub fn text(text: String) -> Self {
        Outcome { json: json!(text), text }
    }
}

fn allow(format: Format, allowed: &[Format], command: &str) -> Result<(), CliError> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        let names: Vec<_> = allowed.iter().map(|f| f.to_possible_value().unwrap().get_name().to_string()).collect();
        Err(CliError::Usage(format!("{command} supports --format {}", names.join("|"))))
    }
}

fn format_of(cmd: &Command) -> Format {
    match cmd {
        Command::Check { format, .. }
        | Command::Emit { format, .. }
        | Command::Expand { format, .. }
        | Command::Deriv { format, .. }
        | Command::Eval { format, .. }
        | Command::Transform { format, .. } => *format,
        Command::Derive(a) => a.format,
        Command::Verify(a) => a.format,
    }
}

/// Reject format combinations before any file is read.
fn validate(cmd: &Command) -> Result<(), CliError> {
    use Format::*;
    let (name, allowed): (&str, &[Format]) = match cmd {
        Command::Check { .. } => ("check", &[Sexpr, Text, Json]),
        Command::Emit { .. } => ("emit", &[Sexpr, BarredArrow, Latex, Json]),
        Command::Expand { .. } => ("expand", &[Sexpr, BarredArrow, Latex, Json]),
        Command::Deriv { .. } => ("deriv", &[Sexpr, BarredArrow, Latex, Json]),
        Command::Derive(_) => ("derive", &[Latex, Text, Json]),
        Command::Eval { .. } => ("eval", &[Text, Json]),
        Command::Transform { .. } => ("transform", &[Text, Json]),
        Command::Verify(_) => ("verify", &[Text, Json]),
    };
    allow(format_of(cmd), allowed, name)
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    validate(&cli.command)?;
    match &cli.command {
        Command::Check { file, format } => commands::check(file, *format),
        Command::Emit { file, format } => commands::emit(file, *format),
        Command::Expand { file, arity, format } => commands::expand(file, arity, *format),
        Command::Deriv { f, j, i, format } => commands::deriv(f, *j as usize, *i as usize, *format),
        Command::Derive(a) => commands::derive(a),
        Command::Eval { file, env, .. } => commands::eval(file, env),
        Command::Transform { field, maps, direction, check_kronecker, points, seed, .. } => {
            commands::transform(field, maps, *direction, *check_kronecker, *points, *seed)
        }
        Command::Verify(a) => commands::verify(a),
    }
}

/// Write to a temporary file next to `path` and rename it into place.
fn write_atomically(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let json = format_of(&cli.command) == Format::Json;
    let result = run(&cli).and_then(|out| {
        let mut body = if json { json!({ "ok": true, "result": out.json }).to_string() } else { out.text };
        if !body.ends_with('\n') {
            body.push('\n');
        }
        match &cli.output {
            Some(path) => write_atomically(path, body.as_bytes())
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
            None => {
                print!("{body}");
                Ok(())
            }
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if json {
                eprintln!("{}", e.to_json());
            } else {
                eprintln!("error: {e}");
                if let CliError::Domain { path: Some(p), .. } = &e {
                    eprintln!("  at syntax-tree path {p}");
                }
            }
            ExitCode::from(e.exit_code())
        }
    }
}
