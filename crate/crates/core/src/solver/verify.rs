use crate::error::{Error, Result};
use crate::fraccalc::{hilfer_derivative_nodes, GradedMesh, WeightedGrid};
use crate::par::Execution;
use crate::solver::operator::{weighted_rhs, tail_integral};
use crate::solver::{DerivedParams, ProblemSpec};
use crate::specfun::gamma;

/// Default fraction of the base index range excluded from the ODE check.
pub const ODE_EXCLUSION: f64 = 0.125;

/// Residual of the nonlocal condition
/// `I^(1-gamma)[c z](a+) + I^(1-gamma)[d z](b-) - sum_k lambda_k z(tau_k)`,
/// with `I^(1-gamma) z(a+) = Gamma(gamma) w(a)` and the right endpoint
/// value from `I^(1-gamma) z(b-) = I^(1-gamma) z(a+) + I^(1-gamma+mu) f (b)`.
pub fn verify_bc(spec: &ProblemSpec, params: &DerivedParams, z: &WeightedGrid) -> Result<f64> {
    let mesh = z.mesh();
    if mesh.a() != spec.a || mesh.b() != spec.b {
        return Err(Error::MeshMismatch("grid does not span the problem interval".into()));
    }
    let left = gamma(params.gamma)? * z.w()[0];
    let rhs = weighted_rhs(spec, z, Execution::Sequential)?;
    let right = left + tail_integral(spec, z, &rhs)?;
    let mut sum = 0.0;
    for pt in &spec.nonlocal {
        let i = mesh
            .index_of(pt.tau)
            .ok_or_else(|| Error::MeshMismatch(format!("tau = {} is not a mesh node", pt.tau)))?;
        sum += pt.lambda * z.z_at(i);
    }
    Ok((spec.c * left + spec.d * right - sum).abs())
}

/// Interior nodes at or beyond skeleton index `exclusion * n_base`.
pub fn default_check_nodes(mesh: &GradedMesh, exclusion: f64) -> Vec<usize> {
    let j = (exclusion * mesh.n_base() as f64).ceil() as usize;
    let start = mesh.skeleton_node(j.max(1));
    (1..mesh.len() - 1).filter(|&i| mesh.nodes()[i] >= start).collect()
}

/// Weighted residual `max |D^{mu,nu} z - f(t, z)| (t-a)^(1-gamma)` over
/// `check_nodes`, which must be interior.
pub fn verify_ode(spec: &ProblemSpec, z: &WeightedGrid, check_nodes: &[usize]) -> Result<f64> {
    verify_ode_with(spec, z, check_nodes, Execution::default())
}

pub(crate) fn verify_ode_with(
    spec: &ProblemSpec,
    z: &WeightedGrid,
    check_nodes: &[usize],
    exec: Execution,
) -> Result<f64> {
    let mesh = z.mesh();
    let len = mesh.len();
    if let Some(&i) = check_nodes.iter().find(|&&i| i == 0 || i + 1 >= len) {
        return Err(Error::domain(format!("check node {i} is not interior")));
    }
    let d = hilfer_derivative_nodes(z, spec.order, exec)?;
    let (a, g) = (spec.a, z.gamma());
    let mut worst = 0.0f64;
    for &i in check_nodes {
        let t = mesh.nodes()[i];
        let r = (d[i] - spec.f.eval(t, z.z_at(i))?).abs() * (t - a).powf(1.0 - g);
        worst = worst.max(r);
    }
    Ok(worst)
}
