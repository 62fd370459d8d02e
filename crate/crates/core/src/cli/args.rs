use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::cli::commands::{
    exit_code, run_check, run_example, run_solve, run_verify, CheckFlags, Outcome, SolveFlags,
    VerifyFlags, DEFAULT_BC_TOL, DEFAULT_ODE_TOL, EXIT_OK, EXIT_USAGE,
};
use crate::error::Result;
use crate::par::Execution;

#[derive(Debug, Parser)]
#[command(name = "hilfer", version, about = "Hilfer fractional boundary value problems with nonlocal conditions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the existence certificate (exit 0 satisfied, 2 violated, 3 inadmissible)
    Check {
        problem: PathBuf,
        /// Try p in {4, 8, 16, 64} and report the best admissible one
        #[arg(long, conflicts_with = "paper_literal")]
        sweep_p: bool,
        /// Use the file's p and report how the q = p reading differs
        #[arg(long)]
        paper_literal: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Solve by Picard iteration (exit 4 if it does not converge)
    Solve {
        problem: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Recompute residuals for a solution table (exit 5 if above tolerance)
    Verify {
        problem: PathBuf,
        table: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value_t = DEFAULT_BC_TOL)]
        bc_tol: f64,
        #[arg(long, default_value_t = DEFAULT_ODE_TOL)]
        ode_tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Check and solve the bundled example problem
    Example {
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Base number of mesh intervals
    #[arg(long)]
    n: Option<usize>,
    /// Mesh grading exponent (default max(1, 2/gamma))
    #[arg(long)]
    grade: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    damping: Option<f64>,
    /// Run on one thread
    #[arg(long)]
    sequential: bool,
}

impl SolverArgs {
    fn flags(&self) -> SolveFlags {
        SolveFlags {
            n: self.n,
            grade: self.grade,
            tol: self.tol,
            max_iter: self.max_iter,
            damping: self.damping,
            exec: if self.sequential { Execution::Sequential } else { Execution::Parallel },
        }
    }
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the solution table here
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the report here instead of standard output
    #[arg(long)]
    report: Option<PathBuf>,
}

fn emit(outcome: &Outcome, out: &Output, stdout: &mut dyn Write) -> Result<()> {
    let mut doc = serde_json::to_string_pretty(&outcome.report).expect("serializing a JSON value cannot fail");
    doc.push('\n');
    match &out.report {
        Some(p) => std::fs::write(p, doc)?,
        None => stdout.write_all(doc.as_bytes())?,
    }
    if let (Some(p), Some(table)) = (&out.out, &outcome.table) {
        std::fs::write(p, table)?;
    }
    Ok(())
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> Result<i32> {
    let (outcome, out) = match &cli.command {
        Command::Check {
            problem,
            sweep_p,
            paper_literal,
            out,
        } => (
            run_check(
                problem,
                &CheckFlags {
                    sweep_p: *sweep_p,
                    paper_literal: *paper_literal,
                },
            )?,
            out,
        ),
        Command::Solve { problem, solver, out } => (run_solve(problem, &solver.flags())?, out),
        Command::Verify {
            problem,
            table,
            solver,
            bc_tol,
            ode_tol,
            out,
        } => {
            let flags = VerifyFlags {
                solve: solver.flags(),
                bc_tol: *bc_tol,
                ode_tol: *ode_tol,
            };
            (run_verify(problem, table, &flags)?, out)
        }
        Command::Example { solver, out } => (run_example(&solver.flags())?, out),
    };
    emit(&outcome, out, stdout)?;
    Ok(outcome.code)
}

/// Parse `args`, run the command and return the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
