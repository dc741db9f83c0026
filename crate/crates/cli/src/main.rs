//! `padic-erg`: evaluate, inspect and decide measure preservation and
//! ergodicity of compatible maps of the p-adic integers.
//!
//! Exit status: 0 holds, 1 fails, 2 bad input or precondition, 3 arithmetic
//! failure (incompatibility, non-bijectivity, inexact division), 4 the
//! function does not have the shape the chosen method requires.

mod commands;
mod spec;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use padic_ergodic::Error;

use commands::CheckArgs;
use spec::Ctx;

#[derive(Debug, Parser)]
#[command(name = "padic-erg", version, about = "Ergodicity of compatible p-adic maps")]
struct Cli {
    /// Prime (default 3; JSON documents carry their own).
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Depth K: levels 0..=K, i.e. modulo p^(K+1) (default 4).
    #[arg(long, global = true)]
    depth: Option<u32>,
    /// Seed for random constructions.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Method {
    #[default]
    General,
    Coords,
    Vdp,
    Additive,
    Affine,
    Gform,
    Cyclic,
    #[value(name = "fixedS")]
    FixedS,
    Unifdiff,
    Oracle,
    Cross,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::General => "general",
            Method::Coords => "coords",
            Method::Vdp => "vdp",
            Method::Additive => "additive",
            Method::Affine => "affine",
            Method::Gform => "gform",
            Method::Cyclic => "cyclic",
            Method::FixedS => "fixedS",
            Method::Unifdiff => "unifdiff",
            Method::Oracle => "oracle",
            Method::Cross => "cross",
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print f(x) mod p^k.
    Eval {
        /// Function: expression, JSON, file path, or - for stdin.
        #[arg(name = "FN", allow_hyphen_values = true)]
        function: String,
        x: u64,
        /// Modulus exponent (default depth + 1).
        #[arg(long)]
        k: Option<u32>,
    },
    /// Van der Put coefficients as rows m,B,b.
    Vdp {
        #[arg(name = "FN", allow_hyphen_values = true)]
        function: String,
        /// Re-evaluate the series at every point and compare with f.
        #[arg(long)]
        verify: bool,
    },
    /// Decide measure preservation or ergodicity through the depth.
    Check {
        /// Function; optional for --method cross, which then draws a random corpus.
        #[arg(name = "FN", allow_hyphen_values = true)]
        function: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::General)]
        method: Method,
        /// Level S below which fixedS and unifdiff decide exhaustively.
        #[arg(long)]
        s: Option<u32>,
        /// Derivative expression for unifdiff, used modulo p.
        #[arg(long)]
        derivative: Option<String>,
        /// φ_0 for gform, as images "1,2,0" or cycles "(0 1 2)"; FN is then g.
        #[arg(long)]
        phi0: Option<String>,
        /// Size of the random corpus for cross when FN is absent.
        #[arg(long, default_value_t = 100)]
        count: u64,
    },
    /// Orbit of 0 and cycle structure of f mod p^k.
    Orbit {
        #[arg(name = "FN", allow_hyphen_values = true)]
        function: String,
        /// Modulus exponent (default depth + 1).
        #[arg(long)]
        k: Option<u32>,
    },
    /// Build a function that is ergodic through the depth and write it as JSON.
    Build {
        /// Transitive targets for the orbit products, separated by ';'; one
        /// target is used at every level. Default x ↦ x + 1.
        #[arg(long)]
        targets: Option<String>,
        /// Output file (default stdout).
        #[arg(long)]
        out: Option<String>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::FormMismatch { .. } | Error::DiffMismatch { .. } => 4,
        Error::NotCompatible(_)
        | Error::NotBijective { .. }
        | Error::InexactDivision { .. }
        | Error::NotInvertible { .. }
        | Error::Output(_) => 3,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    let ctx = Ctx { p: cli.p, depth: cli.depth };
    match cli.command {
        Command::Eval { function, x, k } => commands::eval(ctx, cli.format, &function, x, k),
        Command::Vdp { function, verify } => commands::vdp(ctx, cli.format, &function, verify),
        Command::Check { function, method, s, derivative, phi0, count } => {
            let args = CheckArgs { method, s, derivative, phi0, count, seed: cli.seed };
            commands::check(ctx, cli.format, function.as_deref(), &args)
        }
        Command::Orbit { function, k } => commands::orbit(ctx, cli.format, &function, k),
        Command::Build { targets, out } => commands::build(ctx, cli.seed, targets.as_deref(), out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
