//! `theta-forge`: expand q-series, run identity suites and arithmetic checks.

mod commands;
mod report;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use theta_forge::arith::SquaresFormula;

use commands::{Target, VerifySuite};
use report::Format;

#[derive(Parser)]
#[command(name = "theta-forge", version, about = "Exact and high-precision verification of theta function identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a series two ways and compare coefficients.
    Expand {
        /// eta2:1..4, eta6:1..5, literature:<name>, theta-null:<j>[']@<t>, partition
        target: Target,
        /// Compare coefficients below q^order (partition: through q^order).
        #[arg(long, default_value_t = 100)]
        order: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Check a catalog of identities at seeded sample points.
    Verify {
        #[arg(value_enum)]
        suite: VerifySuite,
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        /// Target precision in bits.
        #[arg(long, default_value_t = 192, value_parser = clap::value_parser!(u32).range(64..=4096))]
        precision: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Compare divisor formulas for r_l(n) with brute-force counts.
    Squares {
        /// 2, 4, 8, or 13 for x² + 3y².
        #[arg(long)]
        l: SquaresFormula,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_n: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Ramanujan-type congruences modulo 7 and 49.
    Congruence {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_n: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("THETA_FORGE_THREADS") else {
        return Ok(());
    };
    let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| format!("THETA_FORGE_THREADS must be a positive integer, got `{v}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let (report, format) = match cli.command {
        Command::Expand { target, order, format } => (commands::expand(target, order), format),
        Command::Verify { suite, samples, precision, seed, format } => {
            (commands::verify(suite, samples as usize, precision, seed), format)
        }
        Command::Squares { l, max_n, format } => (commands::squares(l, max_n), format),
        Command::Congruence { max_n, format } => (commands::congruence(max_n), format),
    };
    let mut out = io::stdout().lock();
    if let Err(e) = report.write(format, &mut out).and_then(|_| out.flush()) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if !report.all_pass() {
        eprintln!("{} failed, {} errors", report.summary.fail, report.summary.error);
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
