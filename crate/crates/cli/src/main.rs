use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nct::{Invocation, Job, Overrides, RunFlags};

#[derive(Parser)]
#[command(name = "nct", version, about = "Curvature of noncommutative tori from a JSON job file")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Levi-Civita connection and all curvature components
    Curvature(Common),
    /// Identity residuals and algebra spot checks against 10·tol
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, hide = true)]
        inject_corruption: bool,
    },
    /// tau(R_{1212} e^{-h}) for a conformal metric
    GaussBonnet(Common),
    /// Independent reference computations
    Oracle {
        #[command(subcommand)]
        kind: Oracle,
    },
}

#[derive(Subcommand)]
enum Oracle {
    /// Classical curvature on a grid (theta = 0)
    Classical(Common),
    /// Clock-and-shift representation residuals
    MatrixRep(Common),
    /// Closed-form R_{1212} of a conformal metric
    ConformalClosedForm(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Error instead of projecting when a result leaves the working box
    #[arg(long)]
    strict_truncation: bool,
    /// Compute curvature components in parallel (same output)
    #[arg(long)]
    parallel: bool,
    #[arg(long)]
    tol: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (job, common, inject) = match cli.command {
        Command::Curvature(c) => (Job::Curvature, c, false),
        Command::Check { common, inject_corruption } => (Job::Check, common, inject_corruption),
        Command::GaussBonnet(c) => (Job::GaussBonnet, c, false),
        Command::Oracle { kind: Oracle::Classical(c) } => (Job::OracleClassical, c, false),
        Command::Oracle { kind: Oracle::MatrixRep(c) } => (Job::OracleMatrixRep, c, false),
        Command::Oracle { kind: Oracle::ConformalClosedForm(c) } => (Job::OracleClosedForm, c, false),
    };
    let inv = Invocation {
        job,
        config: common.config,
        output: common.output,
        overrides: Overrides { tol: common.tol, strict: common.strict_truncation },
        flags: RunFlags { parallel: common.parallel, inject_corruption: inject },
    };
    match nct::run(&inv) {
        Ok((summary, dir)) => {
            println!("{summary}");
            println!("wrote {}", dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("nct: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
