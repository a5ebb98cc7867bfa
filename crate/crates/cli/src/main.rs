use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use shared_state::checker::SampleConfig;
use shared_state::presentations::Theory;
use shared_state_cli::commands::{
    cmd_axioms, cmd_denote, cmd_eq, cmd_nogo, cmd_par, cmd_refines, cmd_translate, load, parse_locs,
    CliError, EXIT_ERROR,
};

/// Decide equations of the shared-state theories and run their experiments.
#[derive(Parser)]
#[command(name = "sstate", version)]
struct Cli {
    /// Comma-separated locations, used when a file has no `locs` line (up to 4).
    #[arg(long, global = true, default_value = "x,y")]
    locs: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exit 0 if LHS = RHS is provable, 1 with a witness if not.
    Eq { file: PathBuf, lhs: String, rhs: String },
    /// Exit 0 if LHS ≤ RHS is provable, 1 with a witness if not.
    Refines { file: PathBuf, lhs: String, rhs: String },
    /// List the canonical generators of a term's denotation.
    Denote {
        file: PathBuf,
        name: String,
        #[arg(long)]
        json: bool,
    },
    /// Print a term's image under a built-in translation.
    Translate {
        file: PathBuf,
        name: String,
        #[arg(long)]
        from: Option<Theory>,
        #[arg(long)]
        to: Theory,
        /// Print in term-file syntax instead of mathematical notation.
        #[arg(long)]
        sexp: bool,
    },
    /// Validate a theory's axioms in its model under sampled environments.
    Axioms {
        #[arg(long)]
        theory: Theory,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Run a no-go experiment.
    Nogo {
        #[arg(long)]
        which: u8,
        /// Nesting depth of the read/write programs for experiment 2.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Interleave two transitions-theory terms.
    Par {
        file: PathBuf,
        first: String,
        second: String,
        #[arg(long)]
        json: bool,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let mut stderr = std::io::stderr();
    let mut stdout = std::io::stdout().lock();
    let locs = parse_locs(&cli.locs, &mut stderr)?;
    let sampling = |samples, seed| SampleConfig { samples, seed, ..SampleConfig::default() };
    let code = match cli.command {
        Command::Eq { file, lhs, rhs } => cmd_eq(&load(&file, &locs, &mut stderr)?, &lhs, &rhs, &mut stdout)?,
        Command::Refines { file, lhs, rhs } => {
            cmd_refines(&load(&file, &locs, &mut stderr)?, &lhs, &rhs, &mut stdout)?
        }
        Command::Denote { file, name, json } => {
            cmd_denote(&load(&file, &locs, &mut stderr)?, &name, json, &mut stdout)?
        }
        Command::Translate { file, name, from, to, sexp } => {
            cmd_translate(&load(&file, &locs, &mut stderr)?, &name, from, to, sexp, &mut stdout)?
        }
        Command::Axioms { theory, samples, seed } => {
            cmd_axioms(theory, &locs, &sampling(samples, seed), &mut stdout)?
        }
        Command::Nogo { which, depth, samples, seed } => {
            cmd_nogo(which, depth, &locs, &sampling(samples, seed), &mut stdout)?
        }
        Command::Par { file, first, second, json } => {
            cmd_par(&load(&file, &locs, &mut stderr)?, &first, &second, json, &mut stdout)?
        }
    };
    stdout.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
