//! JSON report documents. Key order is fixed; non-finite numbers become `null`.

use serde_json::{json, Map, Value};

use crate::existence::{ExistenceReport, LiteralDiscrepancy};
use crate::solver::{DerivedParams, SolveReport};

pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

pub fn existence(params: &DerivedParams, r: &ExistenceReport) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("gamma".into(), num(params.gamma));
    m.insert("A".into(), num(params.a_const));
    m.insert("denom".into(), num(params.denom));
    m.insert("p".into(), num(r.p));
    m.insert("q".into(), num(r.q));
    m.insert("lambda".into(), num(r.lambda_const));
    m.insert("delta".into(), num(r.delta_const));
    m.insert("rho_norm".into(), num(r.rho_norm));
    m.insert("G".into(), num(r.g));
    m.insert("L_star".into(), num(r.l_star));
    m.insert("terms".into(), json!({ "G": nums(&r.terms_g), "L_star": nums(&r.terms_l) }));
    m.insert("admissible".into(), r.admissible.into());
    m.insert("violations".into(), r.violations.clone().into());
    m.insert("verdict".into(), r.verdict.as_str().into());
    m.insert("notes".into(), r.notes.clone().into());
    m
}

pub fn sweep_entry(r: &ExistenceReport) -> Value {
    json!({ "p": num(r.p), "G": num(r.g), "L_star": num(r.l_star), "verdict": r.verdict.as_str() })
}

pub fn literal(d: &LiteralDiscrepancy) -> Value {
    let mut m = Map::new();
    m.insert("p".into(), num(d.p));
    m.insert("q".into(), num(d.q));
    m.insert("rho_norm".into(), num(d.rho_norm));
    m.insert("G".into(), num(d.g));
    m.insert("L_star".into(), num(d.l_star));
    m.insert(
        "claimed".into(),
        match d.claimed {
            Some(c) => json!({ "rho_norm": num(c.rho_norm), "G": num(c.g), "L_star": num(c.l_star) }),
            None => Value::Null,
        },
    );
    m.insert("messages".into(), d.messages.clone().into());
    Value::Object(m)
}

pub fn solve(r: &SolveReport) -> Value {
    let mut m = Map::new();
    m.insert("converged".into(), r.converged.into());
    m.insert("iterations".into(), r.iterations.into());
    m.insert("init_coeff".into(), num(r.init_coeff));
    m.insert("residual_bc".into(), num(r.residual_bc));
    m.insert("residual_ode".into(), num(r.residual_ode));
    m.insert("fixed_point_residual".into(), num(r.fixed_point_residual));
    m.insert("damping".into(), num(r.damping));
    m.insert("nodes".into(), r.solution.w().len().into());
    m.insert("history".into(), nums(&r.history));
    Value::Object(m)
}

pub fn verify(residual_bc: f64, residual_ode: f64, bc_tol: f64, ode_tol: f64, passed: bool) -> Value {
    json!({
        "residual_bc": num(residual_bc),
        "residual_ode": num(residual_ode),
        "bc_tol": num(bc_tol),
        "ode_tol": num(ode_tol),
        "passed": passed,
    })
}
