use crate::error::{Error, Result};
use crate::fraccalc::WeightedGrid;
use crate::par::Execution;
use crate::solver::operator::{problem_mesh, FixedPointOperator, Seed};
use crate::solver::problem::raw_params;
use crate::solver::verify::{default_check_nodes, verify_bc, verify_ode_with, ODE_EXCLUSION};
use crate::solver::{derive_params, ProblemSpec};

/// Steps of strictly increasing differences that trigger a damping halving.
const DIVERGENCE_RUN: usize = 5;
const MAX_HALVINGS: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig {
    pub n_base: usize,
    /// Mesh grading exponent; `None` picks `max(1, 2/gamma)`.
    pub grading: Option<f64>,
    pub tol: f64,
    pub max_iter: usize,
    pub damping: f64,
    /// Leading fraction of the base index range skipped by the ODE residual.
    pub ode_exclusion: f64,
    pub exec: Execution,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            n_base: 512,
            grading: None,
            tol: 1e-8,
            max_iter: 100,
            damping: 1.0,
            ode_exclusion: ODE_EXCLUSION,
            exec: Execution::default(),
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::domain(format!("tol must be positive, got {}", self.tol)));
        }
        if self.n_base < 8 {
            return Err(Error::domain(format!("n_base must be at least 8, got {}", self.n_base)));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::domain(format!("damping must lie in (0, 1], got {}", self.damping)));
        }
        if let Some(r) = self.grading {
            if !(r >= 1.0 && r.is_finite()) {
                return Err(Error::domain(format!("grading must be >= 1, got {r}")));
            }
        }
        if !(0.0..1.0).contains(&self.ode_exclusion) {
            return Err(Error::domain("ode_exclusion must lie in [0, 1)"));
        }
        Ok(())
    }

    pub fn grading_for(&self, gamma: f64) -> f64 {
        self.grading.unwrap_or_else(|| (2.0 / gamma).max(1.0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub solution: WeightedGrid,
    /// `I^(1-gamma) z(a+)` from the nonlocal condition at the final iterate.
    pub init_coeff: f64,
    pub iterations: usize,
    /// Successive differences `||z_{k+1} - z_k||` in the weighted norm.
    pub history: Vec<f64>,
    pub residual_bc: f64,
    pub residual_ode: f64,
    pub converged: bool,
    /// `||T z - z||` at the returned iterate.
    pub fixed_point_residual: f64,
    /// Damping in effect at the end (after any automatic halvings).
    pub damping: f64,
}

struct Iteration {
    grid: WeightedGrid,
    history: Vec<f64>,
    converged: bool,
    damping: f64,
}

fn iterate(op: &FixedPointOperator, seed: Seed, config: &SolveConfig) -> Result<Iteration> {
    let mut grid = WeightedGrid::zeros(op.mesh().clone(), op.params().gamma)?;
    let mut history = Vec::new();
    let mut damping = config.damping;
    let mut halvings = 0;
    let mut run_start = 0;
    let mut converged = false;
    for _ in 0..config.max_iter {
        let (tz, _) = op.apply_seeded(&grid, seed)?;
        let next = if damping == 1.0 {
            tz
        } else {
            let w = grid
                .w()
                .iter()
                .zip(tz.w())
                .map(|(x, y)| (1.0 - damping) * x + damping * y)
                .collect();
            WeightedGrid::new(op.mesh().clone(), op.params().gamma, w)?
        };
        let diff = next.distance(&grid);
        history.push(diff);
        grid = next;
        if diff <= config.tol {
            converged = true;
            break;
        }
        if !diff.is_finite() {
            break;
        }
        let recent = &history[run_start..];
        if halvings < MAX_HALVINGS
            && recent.len() > DIVERGENCE_RUN
            && recent[recent.len() - DIVERGENCE_RUN - 1..].windows(2).all(|p| p[1] > p[0])
        {
            damping *= 0.5;
            halvings += 1;
            run_start = history.len();
        }
    }
    Ok(Iteration {
        grid,
        history,
        converged,
        damping,
    })
}

fn finish(
    spec: &ProblemSpec,
    op: &FixedPointOperator,
    seed: Seed,
    run: Iteration,
    config: &SolveConfig,
) -> Result<SolveReport> {
    let grid = run.grid;
    let (tz, init) = op.apply_seeded(&grid, seed)?;
    let checks = default_check_nodes(op.mesh(), config.ode_exclusion);
    let report = SolveReport {
        init_coeff: init,
        iterations: run.history.len(),
        fixed_point_residual: tz.distance(&grid),
        residual_bc: verify_bc(spec, op.params(), &grid).unwrap_or(f64::NAN),
        residual_ode: verify_ode_with(spec, &grid, &checks, config.exec).unwrap_or(f64::NAN),
        converged: run.converged,
        history: run.history,
        damping: run.damping,
        solution: grid,
    };
    if report.converged {
        Ok(report)
    } else {
        Err(Error::NoConvergence(Box::new(report)))
    }
}

/// Picard iteration `z_{k+1} = (1-d) z_k + d T z_k` from `z_0 = 0`.
pub fn solve_picard(spec: &ProblemSpec, config: &SolveConfig) -> Result<SolveReport> {
    config.validate()?;
    let params = derive_params(spec)?;
    let mesh = problem_mesh(spec, config.n_base, config.grading_for(params.gamma))?;
    let op = FixedPointOperator::new(spec, params, mesh, config.exec)?;
    let run = iterate(&op, Seed::Nonlocal, config)?;
    finish(spec, &op, Seed::Nonlocal, run, config)
}

/// Solve the Volterra form `z = z_a/Gamma(gamma) (t-a)^(gamma-1) + I^mu f(., z)`
/// with `z_a = I^(1-gamma) z(a+)` given; the boundary data of `spec` are ignored.
pub fn solve_volterra_ivp(spec: &ProblemSpec, z_a: f64, config: &SolveConfig) -> Result<WeightedGrid> {
    solve_volterra_report(spec, z_a, config).map(|r| r.solution)
}

/// [`solve_volterra_ivp`] with the full report. Boundary residuals refer to
/// the nonlocal condition of `spec` and are `NaN` when it is singular.
pub fn solve_volterra_report(spec: &ProblemSpec, z_a: f64, config: &SolveConfig) -> Result<SolveReport> {
    config.validate()?;
    if !z_a.is_finite() {
        return Err(Error::domain("initial value must be finite"));
    }
    let params = raw_params(spec)?;
    let mesh = problem_mesh(spec, config.n_base, config.grading_for(params.gamma))?;
    let op = FixedPointOperator::new(spec, params, mesh, config.exec)?;
    let seed = Seed::Fixed(z_a);
    let run = iterate(&op, seed, config)?;
    finish(spec, &op, seed, run, config)
}
