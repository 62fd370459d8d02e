//! Command-line front end: problem files, solution tables, reports and the
//! `check` / `solve` / `verify` / `example` commands.

mod args;
mod commands;
pub mod problem_file;
pub mod report;
pub mod table;

pub use args::{main_with_args, Cli};
pub use commands::*;
pub use problem_file::{load_problem, load_problem_file, parse_problem, serialize_problem, ProblemFile, SolverBlock};
