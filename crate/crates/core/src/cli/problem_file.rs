//! JSON problem files.
//!
//! Scalars may be JSON numbers or expression strings such as `"1/3"`, which
//! are evaluated exactly as the expression parser would. Example:
//!
//! ```json
//! {
//!   "mu": "1/3", "nu": "1/4", "a": 0, "b": 1, "c": "1/4", "d": "3/4",
//!   "nonlocal": [{ "lambda": "2/5", "tau": "2/3" }],
//!   "f": "t/16*sin(abs(z))",
//!   "rho": "t/16",
//!   "p": "1/2",
//!   "solver": { "n_base": 512, "tol": 1e-8 }
//! }
//! ```

use std::path::Path;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::expr::{parse, Expr, Var};
use crate::fraccalc::FracOrder;
use crate::solver::{NonlocalPoint, ProblemSpec};

const TOP_KEYS: [&str; 12] = [
    "mu", "nu", "a", "b", "c", "d", "nonlocal", "f", "rho", "p", "solver", "comment",
];
const SOLVER_KEYS: [&str; 5] = ["n_base", "grading", "tol", "max_iter", "damping"];

/// Optional solver settings stored with a problem.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SolverBlock {
    pub n_base: Option<usize>,
    pub grading: Option<f64>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub damping: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemFile {
    pub spec: ProblemSpec,
    pub solver: SolverBlock,
}

pub fn load_problem(path: &Path) -> Result<ProblemSpec> {
    Ok(load_problem_file(path)?.spec)
}

pub fn load_problem_file(path: &Path) -> Result<ProblemFile> {
    let text = std::fs::read_to_string(path)?;
    parse_problem(&text)
}

pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| Error::schema("$", format!("invalid JSON: {e}")))?;
    let obj = root
        .as_object()
        .ok_or_else(|| Error::schema("$", "expected an object"))?;
    reject_unknown(obj, &TOP_KEYS, "")?;

    let mu = scalar(obj, "mu", "mu")?;
    let nu = scalar(obj, "nu", "nu")?;
    let order = FracOrder::new(mu, nu).map_err(|e| Error::schema("mu", e.to_string()))?;
    let a = scalar(obj, "a", "a")?;
    let b = scalar(obj, "b", "b")?;
    if !(a < b) {
        return Err(Error::schema("b", format!("need a < b, got a = {a}, b = {b}")));
    }
    let c = scalar(obj, "c", "c")?;
    let d = scalar(obj, "d", "d")?;

    let nonlocal = match obj.get("nonlocal") {
        None | Some(Value::Null) => Vec::new(),
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(k, item)| {
                let path = format!("nonlocal[{k}]");
                let o = item
                    .as_object()
                    .ok_or_else(|| Error::schema(&path, "expected an object with lambda and tau"))?;
                reject_unknown(o, &["lambda", "tau"], &path)?;
                let lambda = scalar(o, "lambda", &format!("{path}.lambda"))?;
                let tau_path = format!("{path}.tau");
                let tau = scalar(o, "tau", &tau_path)?;
                if !(tau > a && tau <= b) {
                    return Err(Error::schema(tau_path, format!("tau = {tau} outside ({a}, {b}]")));
                }
                Ok(NonlocalPoint { lambda, tau })
            })
            .collect::<Result<_>>()?,
        Some(_) => return Err(Error::schema("nonlocal", "expected a list")),
    };

    let f = expression(obj, "f", true)?;
    let rho = expression(obj, "rho", false)?;
    let p = scalar(obj, "p", "p")?;

    let solver = match obj.get("solver") {
        None | Some(Value::Null) => SolverBlock::default(),
        Some(Value::Object(o)) => solver_block(o)?,
        Some(_) => return Err(Error::schema("solver", "expected an object")),
    };

    let spec = ProblemSpec {
        order,
        a,
        b,
        c,
        d,
        nonlocal,
        f,
        rho,
        p,
    };
    spec.validate().map_err(|e| Error::schema("$", e.to_string()))?;
    Ok(ProblemFile { spec, solver })
}

fn reject_unknown(obj: &Map<String, Value>, known: &[&str], prefix: &str) -> Result<()> {
    match obj.keys().find(|k| !known.contains(&k.as_str())) {
        Some(k) => {
            let path = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
            Err(Error::schema(path, "unknown key"))
        }
        None => Ok(()),
    }
}

/// A finite real from a number or a constant expression string.
fn scalar(obj: &Map<String, Value>, key: &str, path: &str) -> Result<f64> {
    let v = obj.get(key).ok_or_else(|| Error::schema(path, "missing"))?;
    let x = match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| Error::schema(path, "number out of range"))?,
        Value::String(s) => {
            let e = parse(s).map_err(|e| Error::field(path, e))?;
            if e.uses_var(Var::T) || e.uses_var(Var::Z) {
                return Err(Error::schema(path, "constant expected; t and z are not allowed"));
            }
            e.eval(0.0, 0.0).map_err(|e| Error::field(path, e))?
        }
        _ => return Err(Error::schema(path, "expected a number or an expression string")),
    };
    if !x.is_finite() {
        return Err(Error::schema(path, format!("value {x} is not finite")));
    }
    Ok(x)
}

fn expression(obj: &Map<String, Value>, key: &str, allow_z: bool) -> Result<Expr> {
    let e = match obj.get(key) {
        None => return Err(Error::schema(key, "missing")),
        Some(Value::String(s)) => parse(s).map_err(|e| Error::field(key, e))?,
        Some(Value::Number(n)) => Expr::number(
            n.as_f64()
                .ok_or_else(|| Error::schema(key, "number out of range"))?,
        ),
        Some(_) => return Err(Error::schema(key, "expected an expression string")),
    };
    if !allow_z && e.uses_var(Var::Z) {
        return Err(Error::schema(key, "may depend on t only"));
    }
    Ok(e)
}

fn solver_block(o: &Map<String, Value>) -> Result<SolverBlock> {
    reject_unknown(o, &SOLVER_KEYS, "solver")?;
    let count = |key: &str| -> Result<Option<usize>> {
        match o.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => v
                .as_u64()
                .map(|n| Some(n as usize))
                .ok_or_else(|| Error::schema(format!("solver.{key}"), "expected a non-negative integer")),
        }
    };
    let real = |key: &str| -> Result<Option<f64>> {
        match o.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(_) => scalar(o, key, &format!("solver.{key}")).map(Some),
        }
    };
    Ok(SolverBlock {
        n_base: count("n_base")?,
        grading: real("grading")?,
        tol: real("tol")?,
        max_iter: count("max_iter")?,
        damping: real("damping")?,
    })
}

fn number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// JSON text that [`parse_problem`] maps back to the same spec and block.
pub fn serialize_problem(spec: &ProblemSpec, solver: &SolverBlock) -> String {
    let mut o = Map::new();
    o.insert("mu".into(), number(spec.order.mu()));
    o.insert("nu".into(), number(spec.order.nu()));
    for (k, v) in [("a", spec.a), ("b", spec.b), ("c", spec.c), ("d", spec.d)] {
        o.insert(k.into(), number(v));
    }
    let nonlocal = spec
        .nonlocal
        .iter()
        .map(|pt| {
            let mut m = Map::new();
            m.insert("lambda".into(), number(pt.lambda));
            m.insert("tau".into(), number(pt.tau));
            Value::Object(m)
        })
        .collect();
    o.insert("nonlocal".into(), Value::Array(nonlocal));
    o.insert("f".into(), Value::String(spec.f.to_string()));
    o.insert("rho".into(), Value::String(spec.rho.to_string()));
    o.insert("p".into(), number(spec.p));
    let mut s = Map::new();
    if let Some(n) = solver.n_base {
        s.insert("n_base".into(), n.into());
    }
    if let Some(x) = solver.grading {
        s.insert("grading".into(), number(x));
    }
    if let Some(x) = solver.tol {
        s.insert("tol".into(), number(x));
    }
    if let Some(n) = solver.max_iter {
        s.insert("max_iter".into(), n.into());
    }
    if let Some(x) = solver.damping {
        s.insert("damping".into(), number(x));
    }
    if !s.is_empty() {
        o.insert("solver".into(), Value::Object(s));
    }
    serde_json::to_string_pretty(&Value::Object(o)).expect("serializing a JSON value cannot fail")
}
