//! Existence certificate: the Hoelder constants, `||rho||_{L^p}`, `G`, `L*`
//! and a verdict on whether the sufficient condition `G < 1, L* < 1` holds.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::fraccalc::product::adaptive_gauss;
use crate::solver::{DerivedParams, ProblemSpec, SINGULAR_REL_TOL};
use crate::specfun::gamma;

/// Exponents tried by [`sweep_p`].
pub const SWEEP_P: [f64; 4] = [4.0, 8.0, 16.0, 64.0];

const RHO_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Satisfied,
    Violated,
    Inadmissible,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Satisfied => "satisfied",
            Verdict::Violated => "violated",
            Verdict::Inadmissible => "inadmissible",
        }
    }
}

/// Certificate constants for one exponent `p`. Quantities that cannot be
/// evaluated for an inadmissible `p` are `NaN`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExistenceReport {
    pub p: f64,
    pub q: f64,
    pub lambda_const: f64,
    pub delta_const: f64,
    pub rho_norm: f64,
    pub g: f64,
    pub l_star: f64,
    /// The three addends of `G`, each already multiplied by `||rho||`.
    pub terms_g: [f64; 3],
    /// The three addends of `L*`, each already multiplied by `||rho||`.
    pub terms_l: [f64; 3],
    pub admissible: bool,
    pub verdict: Verdict,
    /// Failed admissibility conditions, in a fixed order.
    pub violations: Vec<String>,
    pub notes: Vec<String>,
}

/// Conjugate exponent `p / (p - 1)`.
pub fn conjugate(p: f64) -> f64 {
    p / (p - 1.0)
}

fn positive_arg(name: &str, value: f64) -> Result<f64> {
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InadmissibleExponent {
            condition: format!("{name} = {value} <= 0"),
        })
    }
}

/// `Lambda = Gamma(q(mu-1)+1) Gamma(q(gamma-1)+1) / Gamma(q(mu+gamma-2)+2)` and
/// `Delta = Gamma(q(mu-gamma)+1) Gamma(q(gamma-1)+1) / Gamma(q(mu-1)+2)`.
pub fn hoelder_constants(q: f64, mu: f64, gamma_: f64) -> Result<(f64, f64)> {
    let x1 = positive_arg("q(mu-1)+1", q * (mu - 1.0) + 1.0)?;
    let x2 = positive_arg("q(gamma-1)+1", q * (gamma_ - 1.0) + 1.0)?;
    let x3 = positive_arg("q(mu-gamma)+1", q * (mu - gamma_) + 1.0)?;
    let lambda = gamma(x1)? * gamma(x2)? / gamma(q * (mu + gamma_ - 2.0) + 2.0)?;
    let delta = gamma(x3)? * gamma(x2)? / gamma(q * (mu - 1.0) + 2.0)?;
    Ok((lambda, delta))
}

/// `(int_a^b |rho|^p)^(1/p)` by adaptive Gauss-Legendre quadrature.
pub fn rho_lp_norm(rho: &Expr, p: f64, a: f64, b: f64) -> Result<f64> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::domain(format!("L^p norm needs p > 0, got {p}")));
    }
    let mut integrand = |s: f64| Ok(rho.eval(s, 0.0)?.abs().powf(p));
    let integral = adaptive_gauss(&mut integrand, a, b, RHO_REL_TOL)?;
    Ok(integral.powf(1.0 / p))
}

/// Failed admissibility conditions for `(p, q)` and the problem.
pub fn admissibility(spec: &ProblemSpec, params: &DerivedParams, p: f64) -> Vec<String> {
    let q = conjugate(p);
    let (mu, g) = (spec.order.mu(), params.gamma);
    let checks = [
        ("p > 1", p > 1.0),
        ("p > 1/mu", p > 1.0 / mu),
        ("p > 1/gamma", p > 1.0 / g),
        ("q(mu-1)+1 > 0", q * (mu - 1.0) + 1.0 > 0.0),
        ("q(gamma-1)+1 > 0", q * (g - 1.0) + 1.0 > 0.0),
        ("q(mu-gamma)+1 > 0", q * (mu - g) + 1.0 > 0.0),
        (
            "|c+d-A| above the singularity threshold",
            params.denom.abs() > SINGULAR_REL_TOL * (spec.c.abs() + spec.d.abs() + params.a_const.abs()),
        ),
    ];
    checks
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(name, _)| name.to_string())
        .collect()
}

/// `G` and `L*` addends for a given `q` and `||rho||`.
pub(crate) fn certificate_terms(
    spec: &ProblemSpec,
    params: &DerivedParams,
    q: f64,
    rho_norm: f64,
) -> Result<([f64; 3], [f64; 3], f64, f64)> {
    let (mu, g) = (spec.order.mu(), params.gamma);
    let (a, b, d, denom) = (spec.a, spec.b, spec.d, params.denom);
    let m = spec.nonlocal.len() as f64;
    let inv_gg = 1.0 / gamma(g)?;
    let gamma_mu = gamma(mu)?;
    let gamma_mu1 = gamma(mu + 1.0)?;
    let gamma_tail = gamma(1.0 - g + mu)?;
    let span_mu = (b - a).powf(mu);
    let d_ratio = (d / denom).abs();

    let l_terms = {
        let sum: f64 = spec
            .nonlocal
            .iter()
            .map(|pt| pt.lambda * (pt.tau - a).powf(mu) / gamma_mu1)
            .sum();
        [
            m * inv_gg * (b - a).powf(g - 1.0) / denom * sum * rho_norm,
            inv_gg * d_ratio / gamma_tail * span_mu * rho_norm,
            span_mu / gamma_mu1 * rho_norm,
        ]
    };

    let (lambda, delta) = match hoelder_constants(q, mu, g) {
        Ok(v) => v,
        Err(Error::InadmissibleExponent { .. }) => (f64::NAN, f64::NAN),
        Err(e) => return Err(e),
    };
    let lam_q = lambda.powf(1.0 / q);
    let sum: f64 = spec
        .nonlocal
        .iter()
        .map(|pt| pt.lambda / gamma_mu * (pt.tau - a).powf(g + mu - 1.0))
        .sum();
    let g_terms = [
        inv_gg * lam_q / denom * sum * rho_norm,
        inv_gg * d_ratio * delta.powf(1.0 / q) / gamma_tail * span_mu * rho_norm,
        lam_q / gamma_mu * span_mu * rho_norm,
    ];
    Ok((g_terms, l_terms, lambda, delta))
}

/// The certificate at the exponent `spec.p`.
pub fn certificate(spec: &ProblemSpec, params: &DerivedParams) -> Result<ExistenceReport> {
    certificate_at(spec, params, spec.p)
}

/// The certificate at exponent `p` (with `q = p / (p - 1)`).
pub fn certificate_at(spec: &ProblemSpec, params: &DerivedParams, p: f64) -> Result<ExistenceReport> {
    let q = conjugate(p);
    let violations = admissibility(spec, params, p);
    let admissible = violations.is_empty();
    let rho_norm = if p > 0.0 && p.is_finite() {
        rho_lp_norm(&spec.rho, p, spec.a, spec.b)?
    } else {
        f64::NAN
    };
    let (terms_g, terms_l, lambda_const, delta_const) = certificate_terms(spec, params, q, rho_norm)?;
    let g: f64 = terms_g.iter().sum();
    let l_star: f64 = terms_l.iter().sum();
    let verdict = if !admissible {
        Verdict::Inadmissible
    } else if g < 1.0 && l_star < 1.0 {
        Verdict::Satisfied
    } else {
        Verdict::Violated
    };
    let literal = gamma(spec.order.mu() - params.gamma);
    let literal = match literal {
        Ok(v) => format!("{v}"),
        Err(e) => e.to_string(),
    };
    let notes = vec![format!(
        "L* uses Gamma(1-gamma+mu) = {} in place of Gamma(mu-gamma) = {}",
        gamma(1.0 - params.gamma + spec.order.mu())?,
        literal
    )];
    Ok(ExistenceReport {
        p,
        q,
        lambda_const,
        delta_const,
        rho_norm,
        g,
        l_star,
        terms_g,
        terms_l,
        admissible,
        verdict,
        violations,
        notes,
    })
}

/// Certificates over [`SWEEP_P`], and the index of the admissible one with
/// the smallest `max(G, L*)`.
pub fn sweep_p(spec: &ProblemSpec, params: &DerivedParams) -> Result<(Vec<ExistenceReport>, Option<usize>)> {
    let reports = SWEEP_P
        .iter()
        .map(|&p| certificate_at(spec, params, p))
        .collect::<Result<Vec<_>>>()?;
    let best = reports
        .iter()
        .enumerate()
        .filter(|(_, r)| r.admissible)
        .min_by(|(_, x), (_, y)| x.g.max(x.l_star).total_cmp(&y.g.max(y.l_star)))
        .map(|(i, _)| i);
    Ok((reports, best))
}

/// Values claimed for a problem by an external source, to compare against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClaimedValues {
    pub rho_norm: f64,
    pub g: f64,
    pub l_star: f64,
}

/// Recomputation of the certificate under the reading `q = p` (rather than
/// the conjugate exponent), with a comparison to claimed values.
#[derive(Debug, Clone, PartialEq)]
pub struct LiteralDiscrepancy {
    pub p: f64,
    pub q: f64,
    pub rho_norm: f64,
    pub g: f64,
    pub l_star: f64,
    pub claimed: Option<ClaimedValues>,
    pub messages: Vec<String>,
}

pub fn literal_discrepancy(
    spec: &ProblemSpec,
    params: &DerivedParams,
    claimed: Option<ClaimedValues>,
) -> Result<LiteralDiscrepancy> {
    let p = spec.p;
    let q = p;
    let rho_norm = if p > 0.0 {
        rho_lp_norm(&spec.rho, p, spec.a, spec.b)?
    } else {
        f64::NAN
    };
    let (tg, tl, _, _) = certificate_terms(spec, params, q, rho_norm)?;
    let (g, l_star) = (tg.iter().sum::<f64>(), tl.iter().sum::<f64>());
    let mut messages = vec![format!(
        "p = q = {p} gives 1/p + 1/q = {} instead of 1",
        1.0 / p + 1.0 / q
    )];
    let failed = admissibility(spec, params, p);
    if !failed.is_empty() {
        messages.push(format!("p = {p} fails: {}", failed.join(", ")));
    }
    if let Some(c) = claimed {
        messages.push(format!(
            "claimed ||rho|| = {} but the integral evaluates to {rho_norm}",
            c.rho_norm
        ));
        messages.push(format!(
            "claimed G = {}, L* = {}; with q = p these evaluate to G = {g}, L* = {l_star}, \
             and no admissible p reproduces the claim",
            c.g, c.l_star
        ));
    }
    Ok(LiteralDiscrepancy {
        p,
        q,
        rho_norm,
        g,
        l_star,
        claimed,
        messages,
    })
}
