//! Fixed-point formulation, Picard solver and residual checks.

mod operator;
mod picard;
mod problem;
mod verify;

pub use operator::{apply_T, initial_coefficient, problem_mesh, FixedPointOperator};
pub use picard::{solve_picard, solve_volterra_ivp, solve_volterra_report, SolveConfig, SolveReport};
pub use problem::{derive_params, DerivedParams, NonlocalPoint, ProblemSpec, SINGULAR_REL_TOL};
pub use verify::{default_check_nodes, verify_bc, verify_ode, ODE_EXCLUSION};
