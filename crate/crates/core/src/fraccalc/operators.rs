use crate::error::{Error, Result};
use crate::fraccalc::product::{dot, row_weights, value_at_origin, Interp, ProductRule};
use crate::fraccalc::{FracOrder, GradedMesh, WeightedGrid};
use crate::par::Execution;
use crate::specfun::gamma;

/// Node data to integrate.
#[derive(Debug, Clone, Copy)]
pub enum Integrand<'a> {
    /// Plain samples of `phi`, interpolated linearly.
    Plain { mesh: &'a GradedMesh, values: &'a [f64] },
    /// `phi = (s-a)^(gamma-1) w(s)`; the weight is integrated exactly.
    Weighted(&'a WeightedGrid),
}

impl<'a> Integrand<'a> {
    fn mesh(&self) -> &'a GradedMesh {
        match self {
            Integrand::Plain { mesh, .. } => mesh,
            Integrand::Weighted(g) => g.mesh(),
        }
    }

    fn parts(&self) -> (Interp, &'a [f64]) {
        match self {
            Integrand::Plain { values, .. } => (Interp::Plain, values),
            Integrand::Weighted(g) => (Interp::Weighted { gamma: g.gamma() }, g.w()),
        }
    }
}

/// Closed form `I^mu (t-a)^(delta-1) = Gamma(delta)/Gamma(delta+mu) (t-a)^(delta+mu-1)`.
pub fn rl_integral_monomial(mu: f64, delta: f64, a: f64, t: f64) -> Result<f64> {
    if !(t > a) {
        return Err(Error::domain(format!("monomial integral needs t > a, got t = {t}, a = {a}")));
    }
    if !(mu >= 0.0 && delta > 0.0) {
        return Err(Error::domain(format!("need mu >= 0 and delta > 0, got mu = {mu}, delta = {delta}")));
    }
    Ok(gamma(delta)? / gamma(delta + mu)? * (t - a).powf(delta + mu - 1.0))
}

/// Product-trapezoid approximation of `I^mu phi` at the mesh node `t`.
pub fn rl_integral_quad(phi: Integrand<'_>, mu: f64, t: f64) -> Result<f64> {
    let mesh = phi.mesh();
    let n = mesh
        .index_of(t)
        .ok_or_else(|| Error::domain(format!("t = {t} is not a mesh node")))?;
    let (interp, data) = phi.parts();
    if n == 0 {
        return value_at_origin(mu, interp, data[0]);
    }
    let row = row_weights(mesh, mu, interp, n)?;
    Ok(dot(&row, data))
}

/// `I^mu phi` at every node.
pub fn rl_integral_nodes(phi: Integrand<'_>, mu: f64, exec: Execution) -> Result<Vec<f64>> {
    let (interp, data) = phi.parts();
    let rule = ProductRule::new(phi.mesh(), mu, interp, exec)?;
    Ok(rule.apply(data, exec))
}

/// Derivative of nodal data by three-point Lagrange stencils on the
/// non-uniform mesh: centered on nodes `2..=N-2`, one-sided on nodes 1 and
/// `N-1` (so node 0 never enters an interior stencil), and one-sided at the
/// two endpoints themselves.
pub fn derivative_on_nodes(nodes: &[f64], f: &[f64]) -> Result<Vec<f64>> {
    let len = nodes.len();
    if len < 5 || f.len() != len {
        return Err(Error::domain("derivative stencils need at least 5 nodes and matching data"));
    }
    let last = len - 1;
    Ok((0..len)
        .map(|i| {
            let base = match i {
                0 => 0,
                1 => 1,
                _ if i == last => last - 2,
                _ if i == last - 1 => last - 3,
                _ => i - 1,
            };
            lagrange3_derivative(&nodes[base..base + 3], &f[base..base + 3], nodes[i])
        })
        .collect())
}

fn lagrange3_derivative(x: &[f64], f: &[f64], p: f64) -> f64 {
    let (x0, x1, x2) = (x[0], x[1], x[2]);
    let l0 = (2.0 * p - x1 - x2) / ((x0 - x1) * (x0 - x2));
    let l1 = (2.0 * p - x0 - x2) / ((x1 - x0) * (x1 - x2));
    let l2 = (2.0 * p - x0 - x1) / ((x2 - x0) * (x2 - x1));
    l0 * f[0] + l1 * f[1] + l2 * f[2]
}

fn interior_index(mesh: &GradedMesh, t: f64) -> Result<usize> {
    match mesh.index_of(t) {
        Some(i) if i > 0 && i + 1 < mesh.len() => Ok(i),
        Some(_) => Err(Error::domain(format!("t = {t} is a boundary node; derivatives need interior nodes"))),
        None => Err(Error::domain(format!("t = {t} is not a mesh node"))),
    }
}

/// `D^mu g = d/dt I^(1-mu) g` at every node (endpoint values use one-sided stencils).
pub fn rl_derivative_nodes(g: &WeightedGrid, mu: f64, exec: Execution) -> Result<Vec<f64>> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::domain(format!("derivative order must lie in (0, 1), got {mu}")));
    }
    let inner = rl_integral_nodes(Integrand::Weighted(g), 1.0 - mu, exec)?;
    derivative_on_nodes(g.mesh().nodes(), &inner)
}

/// Riemann-Liouville derivative of order `mu` at the interior node `t`.
pub fn rl_derivative_num(g: &WeightedGrid, mu: f64, t: f64) -> Result<f64> {
    let i = interior_index(g.mesh(), t)?;
    Ok(rl_derivative_nodes(g, mu, Execution::default())?[i])
}

/// Hilfer derivative `I^(nu(1-mu)) d/dt I^((1-nu)(1-mu)) g` at every node.
pub fn hilfer_derivative_nodes(g: &WeightedGrid, order: FracOrder, exec: Execution) -> Result<Vec<f64>> {
    let mesh = g.mesh();
    let inner_order = order.inner_order();
    let inner = if inner_order > 0.0 {
        rl_integral_nodes(Integrand::Weighted(g), inner_order, exec)?
    } else {
        g.z_values()
    };
    let slope = derivative_on_nodes(mesh.nodes(), &inner)?;
    let outer_order = order.outer_order();
    if outer_order > 0.0 {
        rl_integral_nodes(Integrand::Plain { mesh, values: &slope }, outer_order, exec)
    } else {
        Ok(slope)
    }
}

/// Hilfer derivative of type `order` at the interior node `t`.
pub fn hilfer_derivative_num(g: &WeightedGrid, order: FracOrder, t: f64) -> Result<f64> {
    let i = interior_index(g.mesh(), t)?;
    Ok(hilfer_derivative_nodes(g, order, Execution::default())?[i])
}
