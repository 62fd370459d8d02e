use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::fraccalc::FracOrder;
use crate::specfun::gamma;

/// Relative threshold below which `c + d - A` counts as zero.
pub const SINGULAR_REL_TOL: f64 = 1e-10;

/// One nonlocal term `lambda_k z(tau_k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlocalPoint {
    pub lambda: f64,
    pub tau: f64,
}

/// A Hilfer boundary value problem with a nonlocal condition:
///
/// ```text
/// D^{mu,nu} z = f(t, z)  on (a, b]
/// I^{1-gamma}[c z(a+) + d z(b-)] = sum_k lambda_k z(tau_k)
/// ```
///
/// `rho` and `p` describe the growth bound `|f(t,z)| <= rho(t) |z|` with
/// `rho` in `L^p`; they only feed the existence certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub order: FracOrder,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub nonlocal: Vec<NonlocalPoint>,
    pub f: Expr,
    pub rho: Expr,
    pub p: f64,
}

impl ProblemSpec {
    pub fn validate(&self) -> Result<()> {
        let (a, b) = (self.a, self.b);
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::domain(format!("interval needs a < b, got [{a}, {b}]")));
        }
        for (k, pt) in self.nonlocal.iter().enumerate() {
            if !(pt.tau > a && pt.tau <= b) {
                return Err(Error::domain(format!(
                    "nonlocal point {k}: tau = {} outside ({a}, {b}]",
                    pt.tau
                )));
            }
            if !pt.lambda.is_finite() {
                return Err(Error::domain(format!("nonlocal point {k}: lambda is not finite")));
            }
        }
        for (name, v) in [("c", self.c), ("d", self.d), ("p", self.p)] {
            if !v.is_finite() {
                return Err(Error::domain(format!("{name} is not finite")));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.order.gamma()
    }

    pub fn taus(&self) -> Vec<f64> {
        self.nonlocal.iter().map(|p| p.tau).collect()
    }
}

/// Constants derived from a problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    pub gamma: f64,
    /// `A = sum_k lambda_k (tau_k - a)^(gamma-1) / Gamma(gamma)`.
    pub a_const: f64,
    /// `c + d - A`.
    pub denom: f64,
}

/// Compute `gamma`, `A` and `c + d - A`, rejecting problems where the
/// nonlocal condition degenerates.
pub fn derive_params(spec: &ProblemSpec) -> Result<DerivedParams> {
    let params = raw_params(spec)?;
    let scale = spec.c.abs() + spec.d.abs() + params.a_const.abs();
    if params.denom.abs() <= SINGULAR_REL_TOL * scale || params.denom == 0.0 {
        return Err(Error::SingularProblem { denom: params.denom });
    }
    Ok(params)
}

/// [`derive_params`] without the singularity check.
pub(crate) fn raw_params(spec: &ProblemSpec) -> Result<DerivedParams> {
    spec.validate()?;
    let g = spec.gamma();
    let gg = gamma(g)?;
    let a_const: f64 = spec
        .nonlocal
        .iter()
        .map(|pt| pt.lambda * (pt.tau - spec.a).powf(g - 1.0) / gg)
        .sum();
    let denom = spec.c + spec.d - a_const;
    Ok(DerivedParams {
        gamma: g,
        a_const,
        denom,
    })
}
