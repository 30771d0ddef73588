//! `keypoly` command-line front end.

mod commands;
mod table;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "keypoly", version, about = "Valuations, approximate roots and separating ideals of curvettes")]
struct Cli {
    /// Truncation order of the curvette series (overrides the session file).
    #[arg(long, global = true, value_parser = clap::value_parser!(i64).range(2..))]
    trunc: Option<i64>,
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Print intermediate rewrites where a command has them.
    #[arg(long, global = true)]
    show_steps: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Value, leading coefficient and sign of a polynomial at a curvette.
    Value {
        /// Session file, optionally `FILE#section`.
        #[arg(long)]
        curvette: String,
        #[arg(long)]
        poly: String,
    },
    /// First elements of the semigroup generated by some rationals.
    Semigroup {
        /// Comma-separated generators, e.g. `6,10,14`.
        #[arg(long, value_delimiter = ',', required = true)]
        gens: Vec<String>,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Approximate roots through a level.
    Roots {
        #[arg(long)]
        curvette: String,
        #[arg(long)]
        level: String,
    },
    /// Approximate roots of a plane curvette.
    Roots2d {
        #[arg(long)]
        curvette: String,
        #[arg(long, default_value_t = 8)]
        max: usize,
    },
    /// Standard form of a polynomial at a level.
    StandardForm {
        #[arg(long)]
        curvette: String,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        level: String,
    },
    /// Separating value, generators and a sign-changing witness for two points.
    SepIdeal {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Sign conditions of the connected set around alpha.
    ConnectedSet {
        #[command(flatten)]
        pair: PairArgs,
        /// Polynomials in the original coordinates.
        #[arg(long, num_args = 1.., required = true)]
        poly: Vec<String>,
        #[arg(long, value_enum, default_value_t = VariantArg::C)]
        variant: VariantArg,
    },
    /// Blow up the common center of a pair until it is separated.
    Blowup {
        /// One symbolic session (a generic pair) or two sessions.
        #[arg(long, num_args = 1..=2, required = true)]
        pair: Vec<String>,
        #[arg(long, default_value_t = 12)]
        max_steps: usize,
        /// Print the chart table of the first curvette's roots instead of the
        /// resolution when one file is given, after it otherwise.
        #[arg(long)]
        chart_table: bool,
    },
    /// Replay a dual-graph event script.
    DualGraph {
        #[arg(long)]
        script: PathBuf,
        /// Also print the final graph in DOT format.
        #[arg(long)]
        dot: bool,
    },
    /// Recompute and check every value of the running example.
    Walkthrough,
}

#[derive(Args)]
struct PairArgs {
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    beta: String,
    /// Specialize `u` to these values in alpha and beta.
    #[arg(long, value_delimiter = ',')]
    exact_params: Option<Vec<String>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    #[value(name = "C")]
    C,
    #[value(name = "Cprime")]
    Cprime,
}

/// Failures of the front end itself, as opposed to the library's.
enum Failure {
    Math(keypoly::Error),
    Usage(String),
}

impl From<keypoly::Error> for Failure {
    fn from(e: keypoly::Error) -> Self {
        Failure::Math(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = commands::Ctx { trunc: cli.trunc, show_steps: cli.show_steps };
    let result = match cli.cmd {
        Command::Value { curvette, poly } => commands::value(&ctx, &curvette, &poly),
        Command::Semigroup { gens, count } => commands::semigroup(&gens, count),
        Command::Roots { curvette, level } => commands::roots(&ctx, &curvette, &level),
        Command::Roots2d { curvette, max } => commands::roots2d(&ctx, &curvette, max),
        Command::StandardForm { curvette, poly, level } => commands::standard_form(&ctx, &curvette, &poly, &level),
        Command::SepIdeal { pair } => commands::sep_ideal(&ctx, &pair.alpha, &pair.beta, pair.exact_params.as_deref()),
        Command::ConnectedSet { pair, poly, variant } => {
            let v = match variant {
                VariantArg::C => keypoly::separating::Variant::C,
                VariantArg::Cprime => keypoly::separating::Variant::CPrime,
            };
            commands::connected_set(&ctx, &pair.alpha, &pair.beta, pair.exact_params.as_deref(), &poly, v)
        }
        Command::Blowup { pair, max_steps, chart_table } => commands::blowup(&ctx, &pair, max_steps, chart_table),
        Command::DualGraph { script, dot } => commands::dual_graph(&script, dot),
        Command::Walkthrough => commands::walkthrough(&ctx),
    };
    match result {
        Ok(out) => {
            let body = if cli.json {
                serde_json::to_string_pretty(&out.json).expect("json values serialize") + "\n"
            } else {
                out.text
            };
            // a closed pipe (`| head`) is not an error of ours
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            match out.failure {
                None => ExitCode::SUCCESS,
                Some(e) => {
                    eprintln!("error[{}]: {e}", e.code());
                    ExitCode::from(1)
                }
            }
        }
        Err(f) => {
            let (code, msg, exit) = match &f {
                Failure::Math(e) => (e.code(), e.to_string(), 1),
                Failure::Usage(m) => ("usage", m.clone(), 2),
            };
            if cli.json {
                println!("{}", json!({ "error": { "code": code, "message": msg } }));
            }
            eprintln!("error[{code}]: {msg}");
            ExitCode::from(exit)
        }
    }
}
