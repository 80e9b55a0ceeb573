use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use monoqsp_cli::{
    cmd_angles, cmd_check_lemmas, cmd_verify_exact, cmd_verify_numeric, CliError, OutputFormat,
};

/// Exact QSP phase schedules for odd monomials.
#[derive(Debug, Parser)]
#[command(name = "monoqsp", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the phase schedule implementing xⁿ (n odd).
    Angles {
        #[arg(short = 'n', long)]
        degree: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
    },
    /// Exactly verify that the top-left entry equals xⁿ over a range of degrees.
    VerifyExact {
        #[arg(long)]
        min: usize,
        #[arg(long)]
        max: usize,
        /// Also check even degrees (expected to fail).
        #[arg(long)]
        include_even: bool,
    },
    /// Seeded floating-point sweep over x in [-1, 1].
    VerifyNumeric {
        #[arg(short = 'n', long)]
        degree: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Exhaustively check the group-theoretic identities for one degree.
    CheckLemmas {
        #[arg(short = 'n', long)]
        degree: usize,
    },
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let report = match cli.command {
        Command::Angles { degree, format } => {
            cmd_angles(degree, format, out)?;
            return Ok(0);
        }
        Command::VerifyExact {
            min,
            max,
            include_even,
        } => cmd_verify_exact(min, max, include_even, out)?,
        Command::VerifyNumeric {
            degree,
            samples,
            seed,
            tol,
        } => cmd_verify_numeric(degree, samples, seed, tol, out)?,
        Command::CheckLemmas { degree } => cmd_check_lemmas(degree, out)?,
    };
    Ok(report.verdict.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = match run(cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("monoqsp: {e}");
            e.exit_code()
        }
    };
    let _ = out.flush();
    ExitCode::from(code as u8)
}
