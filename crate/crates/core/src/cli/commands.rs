use std::path::Path;
use std::sync::Arc;

use serde_json::{Map, Value};

use crate::cli::problem_file::{load_problem_file, parse_problem, SolverBlock};
use crate::cli::report;
use crate::cli::table::{read_table, weights_on_mesh, write_table};
use crate::error::{Error, Result};
use crate::existence::{certificate, literal_discrepancy, sweep_p, ClaimedValues, Verdict};
use crate::fraccalc::WeightedGrid;
use crate::par::Execution;
use crate::solver::{
    default_check_nodes, derive_params, problem_mesh, solve_picard, verify_bc, verify_ode, ProblemSpec,
    SolveConfig,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VIOLATED: i32 = 2;
pub const EXIT_INADMISSIBLE: i32 = 3;
pub const EXIT_NO_CONVERGENCE: i32 = 4;
pub const EXIT_VERIFY_FAILED: i32 = 5;

pub const DEFAULT_BC_TOL: f64 = 1e-5;
pub const DEFAULT_ODE_TOL: f64 = 5e-2;

/// The bundled example problem.
pub const EXAMPLE_PROBLEM: &str = include_str!("../../problems/section4.json");

/// Values stated alongside the bundled example, computed there with
/// `p = q = 1/2`.
pub const EXAMPLE_CLAIMS: ClaimedValues = ClaimedValues {
    rho_norm: 1.0 / 48.0,
    g: 0.03,
    l_star: 0.14,
};

/// Exit code for an error that aborted a command.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::SingularProblem { .. } | Error::InadmissibleExponent { .. } => EXIT_INADMISSIBLE,
        Error::NoConvergence(_) => EXIT_NO_CONVERGENCE,
        _ => EXIT_USAGE,
    }
}

/// Result of a command: exit code, report document and optional table.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
    pub table: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SolveFlags {
    pub n: Option<usize>,
    pub grade: Option<f64>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub damping: Option<f64>,
    pub exec: Execution,
}

impl SolveFlags {
    /// Command-line flags over the file's solver block over the defaults.
    pub fn config(&self, block: &SolverBlock) -> SolveConfig {
        let d = SolveConfig::default();
        SolveConfig {
            n_base: self.n.or(block.n_base).unwrap_or(d.n_base),
            grading: self.grade.or(block.grading),
            tol: self.tol.or(block.tol).unwrap_or(d.tol),
            max_iter: self.max_iter.or(block.max_iter).unwrap_or(d.max_iter),
            damping: self.damping.or(block.damping).unwrap_or(d.damping),
            exec: self.exec,
            ..d
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CheckFlags {
    pub sweep_p: bool,
    pub paper_literal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyFlags {
    pub solve: SolveFlags,
    pub bc_tol: f64,
    pub ode_tol: f64,
}

impl Default for VerifyFlags {
    fn default() -> Self {
        VerifyFlags {
            solve: SolveFlags::default(),
            bc_tol: DEFAULT_BC_TOL,
            ode_tol: DEFAULT_ODE_TOL,
        }
    }
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Satisfied => EXIT_OK,
        Verdict::Violated => EXIT_VIOLATED,
        Verdict::Inadmissible => EXIT_INADMISSIBLE,
    }
}

fn example_spec() -> ProblemSpec {
    parse_problem(EXAMPLE_PROBLEM)
        .expect("bundled example parses")
        .spec
}

pub fn run_check(path: &Path, flags: &CheckFlags) -> Result<Outcome> {
    check_problem(&load_problem_file(path)?.spec, flags)
}

pub fn check_problem(spec: &ProblemSpec, flags: &CheckFlags) -> Result<Outcome> {
    if flags.sweep_p && flags.paper_literal {
        return Err(Error::domain("--sweep-p and --paper-literal are exclusive"));
    }
    let params = derive_params(spec)?;
    let (chosen, sweep) = if flags.sweep_p {
        let (reports, best) = sweep_p(spec, &params)?;
        let entries: Vec<Value> = reports.iter().map(report::sweep_entry).collect();
        (reports[best.unwrap_or(0)].clone(), Some(entries))
    } else {
        (certificate(spec, &params)?, None)
    };
    let mut doc = report::existence(&params, &chosen);
    if let Some(entries) = sweep {
        doc.insert("sweep".into(), Value::Array(entries));
    }
    if flags.paper_literal {
        let claims = (*spec == example_spec()).then_some(EXAMPLE_CLAIMS);
        let d = literal_discrepancy(spec, &params, claims)?;
        doc.insert("literal".into(), report::literal(&d));
    }
    Ok(Outcome {
        code: verdict_code(chosen.verdict),
        report: Value::Object(doc),
        table: None,
    })
}

pub fn run_solve(path: &Path, flags: &SolveFlags) -> Result<Outcome> {
    let pf = load_problem_file(path)?;
    solve_problem(&pf.spec, &flags.config(&pf.solver))
}

pub fn solve_problem(spec: &ProblemSpec, config: &SolveConfig) -> Result<Outcome> {
    match solve_picard(spec, config) {
        Ok(r) => Ok(Outcome {
            code: EXIT_OK,
            report: report::solve(&r),
            table: Some(write_table(&r.solution)),
        }),
        Err(Error::NoConvergence(r)) => Ok(Outcome {
            code: EXIT_NO_CONVERGENCE,
            report: report::solve(&r),
            table: Some(write_table(&r.solution)),
        }),
        Err(e) => Err(e),
    }
}

pub fn run_verify(path: &Path, table: &Path, flags: &VerifyFlags) -> Result<Outcome> {
    let pf = load_problem_file(path)?;
    let text = std::fs::read_to_string(table)?;
    verify_table(&pf.spec, &flags.solve.config(&pf.solver), &text, flags.bc_tol, flags.ode_tol)
}

pub fn verify_table(
    spec: &ProblemSpec,
    config: &SolveConfig,
    table: &str,
    bc_tol: f64,
    ode_tol: f64,
) -> Result<Outcome> {
    let params = derive_params(spec)?;
    let mesh = problem_mesh(spec, config.n_base, config.grading_for(params.gamma))?;
    let w = weights_on_mesh(&read_table(table)?, &mesh)?;
    let grid = WeightedGrid::new(Arc::clone(&mesh), params.gamma, w)?;
    let bc = verify_bc(spec, &params, &grid)?;
    let ode = verify_ode(spec, &grid, &default_check_nodes(&mesh, config.ode_exclusion))?;
    let passed = bc <= bc_tol && ode <= ode_tol;
    Ok(Outcome {
        code: if passed { EXIT_OK } else { EXIT_VERIFY_FAILED },
        report: report::verify(bc, ode, bc_tol, ode_tol, passed),
        table: None,
    })
}

pub fn run_example(flags: &SolveFlags) -> Result<Outcome> {
    run_example_with(&example_spec(), flags)
}

/// Certificate (with the `p` sweep), solve and residual checks on `spec`.
/// The ODE tolerance grows linearly as the mesh is coarsened below 512.
pub fn run_example_with(spec: &ProblemSpec, flags: &SolveFlags) -> Result<Outcome> {
    let check = check_problem(
        spec,
        &CheckFlags {
            sweep_p: true,
            paper_literal: false,
        },
    )?;
    let config = flags.config(&SolverBlock::default());
    let solve = solve_problem(spec, &config)?;
    let scale = (512.0 / config.n_base as f64).max(1.0);
    let ode_tol = DEFAULT_ODE_TOL * scale;
    let bc_tol = DEFAULT_BC_TOL;
    let residual = |key: &str| solve.report[key].as_f64().unwrap_or(f64::NAN);
    let residuals_ok = residual("residual_bc") <= bc_tol && residual("residual_ode") <= ode_tol;
    let code = if check.code != EXIT_OK {
        check.code
    } else if solve.code != EXIT_OK {
        solve.code
    } else if !residuals_ok {
        EXIT_VERIFY_FAILED
    } else {
        EXIT_OK
    };
    let mut doc = Map::new();
    doc.insert("check".into(), check.report);
    doc.insert("solve".into(), solve.report);
    doc.insert("bc_tol".into(), report::num(bc_tol));
    doc.insert("ode_tol".into(), report::num(ode_tol));
    doc.insert("passed".into(), (code == EXIT_OK).into());
    Ok(Outcome {
        code,
        report: Value::Object(doc),
        table: solve.table,
    })
}
