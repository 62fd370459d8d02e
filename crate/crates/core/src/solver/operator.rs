use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fraccalc::product::{dot, row_weights};
use crate::fraccalc::{GradedMesh, Interp, ProductRule, WeightedGrid};
use crate::par::Execution;
use crate::solver::{DerivedParams, ProblemSpec};
use crate::specfun::gamma;

/// The mesh a problem is solved on: graded at `a`, with every `tau_k` inserted.
pub fn problem_mesh(spec: &ProblemSpec, n_base: usize, grading: f64) -> Result<Arc<GradedMesh>> {
    Ok(Arc::new(GradedMesh::build(spec.a, spec.b, n_base, grading, &spec.taus())?))
}

/// How the first term of the integral equation is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Seed {
    /// From the nonlocal condition (the boundary value problem).
    Nonlocal,
    /// Frozen at a given `I^(1-gamma) z(a+)` (the initial value problem).
    Fixed(f64),
}

/// Precomputed integral operator `T` on a fixed mesh.
///
/// Right-hand side data are `v = (t-a)^(1-gamma) f(t, z(t))`, integrated
/// against the weight `(s-a)^(gamma-1)` (see [`Interp::Weighted`]).
#[derive(Debug, Clone)]
pub struct FixedPointOperator {
    spec: ProblemSpec,
    params: DerivedParams,
    mesh: Arc<GradedMesh>,
    rule: ProductRule,
    /// Weights of `I^(1-gamma+mu) f (b)`.
    row_b: Vec<f64>,
    tau_idx: Vec<usize>,
    gamma_of_gamma: f64,
    exec: Execution,
}

impl FixedPointOperator {
    pub fn new(
        spec: &ProblemSpec,
        params: DerivedParams,
        mesh: Arc<GradedMesh>,
        exec: Execution,
    ) -> Result<Self> {
        if mesh.a() != spec.a || mesh.b() != spec.b {
            return Err(Error::MeshMismatch(format!(
                "mesh spans [{}, {}], problem spans [{}, {}]",
                mesh.a(),
                mesh.b(),
                spec.a,
                spec.b
            )));
        }
        let g = params.gamma;
        let mu = spec.order.mu();
        let interp = Interp::Weighted { gamma: g };
        let tau_idx = spec
            .nonlocal
            .iter()
            .map(|pt| {
                mesh.index_of(pt.tau).ok_or_else(|| {
                    Error::MeshMismatch(format!("tau = {} is not a mesh node", pt.tau))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let rule = ProductRule::new(&mesh, mu, interp, exec)?;
        let row_b = row_weights(&mesh, 1.0 - g + mu, interp, mesh.len() - 1)?;
        Ok(FixedPointOperator {
            spec: spec.clone(),
            params,
            gamma_of_gamma: gamma(g)?,
            mesh,
            rule,
            row_b,
            tau_idx,
            exec,
        })
    }

    pub fn mesh(&self) -> &Arc<GradedMesh> {
        &self.mesh
    }

    pub fn params(&self) -> &DerivedParams {
        &self.params
    }

    fn check_grid(&self, z: &WeightedGrid) -> Result<()> {
        if z.mesh().nodes() != self.mesh.nodes() {
            return Err(Error::MeshMismatch("grid is not on the problem mesh".into()));
        }
        Ok(())
    }

    /// `v = (t-a)^(1-gamma) f(t, z(t))` at the nodes.
    pub fn rhs_samples(&self, z: &WeightedGrid) -> Result<Vec<f64>> {
        self.check_grid(z)?;
        weighted_rhs(&self.spec, z, self.exec)
    }

    /// `I^mu f` at the nodes `tau_k`, and `I^(1-gamma+mu) f (b)`.
    fn boundary_integrals(&self, rhs: &[f64]) -> (Vec<f64>, f64) {
        let at_tau = self.tau_idx.iter().map(|&i| self.rule.apply_at(rhs, i)).collect();
        (at_tau, dot(&self.row_b, rhs))
    }

    fn coefficient_from(&self, rhs: &[f64]) -> f64 {
        let (at_tau, j_b) = self.boundary_integrals(rhs);
        let sum: f64 = self
            .spec
            .nonlocal
            .iter()
            .zip(&at_tau)
            .map(|(pt, v)| pt.lambda * v)
            .sum();
        (sum - self.spec.d * j_b) / self.params.denom
    }

    /// `I^(1-gamma) z(a+)` implied by the nonlocal condition for the iterate `z`.
    pub fn initial_coefficient(&self, z: &WeightedGrid) -> Result<f64> {
        let rhs = self.rhs_samples(z)?;
        Ok(self.coefficient_from(&rhs))
    }

    pub(crate) fn apply_seeded(&self, z: &WeightedGrid, seed: Seed) -> Result<(WeightedGrid, f64)> {
        let rhs = self.rhs_samples(z)?;
        let init = match seed {
            Seed::Nonlocal => self.coefficient_from(&rhs),
            Seed::Fixed(v) => v,
        };
        let base = init / self.gamma_of_gamma;
        let nodes = self.mesh.nodes();
        let (a, g) = (self.spec.a, self.params.gamma);
        let rule = &self.rule;
        let rhs = &rhs;
        let w = self.exec.map_range(nodes.len(), |n| {
            if n == 0 {
                // (t-a)^(1-gamma) I^mu f -> 0 as t -> a
                base
            } else {
                base + (nodes[n] - a).powf(1.0 - g) * rule.apply_at(rhs, n)
            }
        });
        Ok((WeightedGrid::new(self.mesh.clone(), g, w)?, init))
    }

    /// `T z` together with the coefficient it used.
    pub fn apply(&self, z: &WeightedGrid) -> Result<(WeightedGrid, f64)> {
        self.apply_seeded(z, Seed::Nonlocal)
    }
}

/// `v = (t-a)^(1-gamma) f(t, z(t))` at the nodes. The limit at `a` is
/// approximated by the value at the midpoint of the first interval.
pub(crate) fn weighted_rhs(spec: &ProblemSpec, z: &WeightedGrid, exec: Execution) -> Result<Vec<f64>> {
    let mesh = z.mesh();
    let nodes = mesh.nodes();
    let (a, g) = (spec.a, z.gamma());
    let w = z.w();
    let f = &spec.f;
    exec.try_map_range(nodes.len(), |j| {
        if j == 0 {
            if g >= 1.0 {
                return f.eval(a, w[0]);
            }
            let h = 0.5 * (nodes[1] - a);
            let wm = 0.5 * (w[0] + w[1]);
            Ok(h.powf(1.0 - g) * f.eval(a + h, h.powf(g - 1.0) * wm)?)
        } else {
            let t = nodes[j];
            Ok((t - a).powf(1.0 - g) * f.eval(t, (t - a).powf(g - 1.0) * w[j])?)
        }
    })
}

/// `I^(1-gamma+mu) f(., z(.)) (b)`, the integral in the right-endpoint identity.
pub(crate) fn tail_integral(spec: &ProblemSpec, z: &WeightedGrid, rhs: &[f64]) -> Result<f64> {
    let mesh = z.mesh();
    let g = z.gamma();
    let row = row_weights(mesh, 1.0 - g + spec.order.mu(), Interp::Weighted { gamma: g }, mesh.len() - 1)?;
    Ok(dot(&row, rhs))
}

/// `I^(1-gamma) z(a+)` for the iterate `z`, from the nonlocal condition.
pub fn initial_coefficient(spec: &ProblemSpec, params: &DerivedParams, z: &WeightedGrid) -> Result<f64> {
    let mesh = z.mesh();
    let rhs = weighted_rhs(spec, z, Execution::Sequential)?;
    let interp = Interp::Weighted { gamma: z.gamma() };
    let mut sum = 0.0;
    for pt in &spec.nonlocal {
        let i = mesh
            .index_of(pt.tau)
            .ok_or_else(|| Error::MeshMismatch(format!("tau = {} is not a mesh node", pt.tau)))?;
        sum += pt.lambda * dot(&row_weights(mesh, spec.order.mu(), interp, i)?, &rhs);
    }
    Ok((sum - spec.d * tail_integral(spec, z, &rhs)?) / params.denom)
}

/// One application of the fixed-point operator, in weighted form.
#[allow(non_snake_case)]
pub fn apply_T(spec: &ProblemSpec, params: &DerivedParams, z: &WeightedGrid) -> Result<WeightedGrid> {
    Ok(FixedPointOperator::new(spec, *params, z.mesh().clone(), Execution::default())?
        .apply(z)?
        .0)
}
