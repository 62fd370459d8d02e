//! Acceptance criteria 1-6. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

mod common;

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{example, forced_example, manufactured, oracle, rel};
use hilfer_bvp::cli::{check_problem, CheckFlags, EXIT_INADMISSIBLE, EXIT_OK};
use hilfer_bvp::existence::{certificate, certificate_at, Verdict};
use hilfer_bvp::expr::parse;
use hilfer_bvp::fraccalc::{
    hilfer_derivative_nodes, rl_derivative_nodes, rl_integral_monomial, rl_integral_nodes, rl_integral_quad,
    FracOrder, GradedMesh, Integrand, WeightedGrid,
};
use hilfer_bvp::solver::{derive_params, solve_picard, solve_volterra_ivp, SolveConfig};
use hilfer_bvp::specfun::gamma;
use hilfer_bvp::Execution;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Check) -> (Check, Duration) {
    let start = Instant::now();
    let r = f();
    let took = start.elapsed();
    let r = match r {
        Ok(detail) if took > limit => Err(format!("{detail}; took {took:?}, limit {limit:?}")),
        other => other,
    };
    (r, took)
}

fn criterion_1() -> Check {
    let spec = example();
    let g = spec.order.gamma();
    ensure(g == 0.5, format!("gamma = {g:?}"))?;
    let params = derive_params(&spec).map_err(|e| e.to_string())?;
    ensure(params.gamma == 0.5, "derived gamma differs")?;
    Ok("gamma = 0.5 exactly".into())
}

/// `I^mu (t-a)^(delta-1)` on a uniform mesh of `n` intervals, evaluated at
/// `t = 1`, with `(s-a)^(delta-1)` split into a weight and a smooth factor.
fn monomial_quad(mu: f64, delta: f64, n: usize) -> f64 {
    let mesh = Arc::new(GradedMesh::uniform(0.0, 1.0, n).unwrap());
    let k = delta.ceil() - 1.0;
    let weight = delta - k;
    let grid = WeightedGrid::from_weighted_fn(mesh, weight, |s| s.powf(k)).unwrap();
    rl_integral_quad(Integrand::Weighted(&grid), mu, 1.0).unwrap()
}

fn criterion_2() -> Check {
    let mus = [0.1, 0.3, 0.5, 0.75, 1.0];
    let deltas = [0.4, 1.0, 1.6, 2.5];
    let mut worst = 0.0f64;
    for &mu in &mus {
        for &delta in &deltas {
            let exact = rl_integral_monomial(mu, delta, 0.0, 1.0).map_err(|e| e.to_string())?;
            let err = (monomial_quad(mu, delta, 256) - exact).abs();
            ensure(err <= 1e-4, format!("mu = {mu}, delta = {delta}: error {err:e}"))?;
            worst = worst.max(err);
        }
    }
    // smooth-after-weighting cases whose smooth factor is not linear
    let mut min_order = f64::INFINITY;
    for &mu in &mus {
        for &delta in &[2.5, 3.0, 3.3] {
            let v: Vec<f64> = [64, 128, 256, 512].iter().map(|&n| monomial_quad(mu, delta, n)).collect();
            for i in 0..2 {
                let order = ((v[i] - v[i + 1]) / (v[i + 1] - v[i + 2])).abs().log2();
                min_order = min_order.min(order);
            }
        }
    }
    ensure(min_order >= 1.8, format!("Richardson order {min_order:.3} < 1.8"))?;
    Ok(format!("20 pairs, max error {worst:.2e}; min Richardson order {min_order:.3}"))
}

fn criterion_3() -> Check {
    let spec = example();
    let params = derive_params(&spec).map_err(|e| e.to_string())?;
    let literal = certificate(&spec, &params).map_err(|e| e.to_string())?;
    ensure(spec.p == 0.5, "example p is not 1/2")?;
    ensure(literal.verdict == Verdict::Inadmissible, format!("p = 1/2 verdict {:?}", literal.verdict))?;
    ensure(literal.violations.iter().any(|v| v == "p > 1/mu"), "p > 1/mu not reported")?;

    let r = certificate_at(&spec, &params, 4.0).map_err(|e| e.to_string())?;
    ensure(r.verdict == Verdict::Satisfied && r.g < 1.0 && r.l_star < 1.0, "p = 4 not satisfied")?;
    for (name, got, want) in [
        ("G", r.g, oracle::G_P4),
        ("L*", r.l_star, oracle::L_STAR_P4),
        ("Lambda", r.lambda_const, oracle::LAMBDA_P4),
        ("Delta", r.delta_const, oracle::DELTA_P4),
    ] {
        ensure(rel(got, want) <= 1e-10, format!("{name} = {got}, oracle {want}"))?;
    }

    // the claimed 0.03 / 0.14 are far from every admissible p
    let mut closest = f64::INFINITY;
    for i in 0..400 {
        let p = 3.0 * 1.02f64.powi(i) + 1e-9;
        let c = certificate_at(&spec, &params, p).map_err(|e| e.to_string())?;
        if c.admissible {
            closest = closest.min((c.g - 0.03).abs().max((c.l_star - 0.14).abs()));
        }
    }
    ensure(closest > 0.01, format!("an admissible p comes within {closest} of the claim"))?;

    let out = check_problem(&spec, &CheckFlags { sweep_p: false, paper_literal: true }).map_err(|e| e.to_string())?;
    ensure(out.code == EXIT_INADMISSIBLE, format!("paper-literal exit {}", out.code))?;
    let messages = out.report["literal"]["messages"].to_string();
    ensure(messages.contains("p = q = 0.5"), "discrepancy does not name p = q = 1/2")?;
    let claimed = out.report["literal"]["claimed"]["rho_norm"].as_f64().unwrap_or(f64::NAN);
    let computed = out.report["literal"]["rho_norm"].as_f64().unwrap_or(f64::NAN);
    ensure(rel(claimed, 1.0 / 48.0) < 1e-15, "claimed 1/48 missing")?;
    ensure(rel(computed, 1.0 / 36.0) < 1e-9, format!("computed norm {computed}, expected 1/36"))?;
    let swept = check_problem(&spec, &CheckFlags { sweep_p: true, paper_literal: false }).map_err(|e| e.to_string())?;
    ensure(swept.code == EXIT_OK, "sweep verdict not satisfied")?;
    Ok(format!(
        "p = 1/2 inadmissible; p = 4: G = {:.10}, L* = {:.10}, Lambda = {:.10}, Delta = {:.10}; closest admissible to (0.03, 0.14): {closest:.3}",
        r.g, r.l_star, r.lambda_const, r.delta_const
    ))
}

fn criterion_4() -> Check {
    let spec = manufactured();
    let r = solve_picard(&spec, &SolveConfig::default()).map_err(|e| e.to_string())?;
    let mu = spec.order.mu();
    let g = spec.order.gamma();
    let scale = 1.0 / gamma(mu + 1.0).unwrap();
    let err = r
        .solution
        .mesh()
        .nodes()
        .iter()
        .zip(r.solution.w())
        .map(|(&t, &w)| (w - t.powf(1.0 - g) * t.powf(mu) * scale).abs())
        .fold(0.0, f64::max);
    ensure(r.converged, "not converged")?;
    ensure(err <= 1e-3, format!("weighted error {err:e}"))?;
    Ok(format!("weighted max error {err:.2e} in {} iterations", r.iterations))
}

fn criterion_5_on(spec: &hilfer_bvp::solver::ProblemSpec) -> Check {
    let config = SolveConfig::default();
    let r = solve_picard(spec, &config).map_err(|e| e.to_string())?;
    ensure(r.converged && r.iterations <= 50, format!("iterations {}", r.iterations))?;
    ensure(r.residual_bc <= 1e-6, format!("residual_bc {:e}", r.residual_bc))?;
    ensure(r.residual_ode <= 5e-2, format!("residual_ode {:e}", r.residual_ode))?;
    let ivp = solve_volterra_ivp(spec, r.init_coeff, &config).map_err(|e| e.to_string())?;
    let gap = ivp.distance(&r.solution);
    ensure(gap <= 1e-6, format!("IVP gap {gap:e}"))?;
    Ok(format!(
        "{} iterations, residual_bc {:.1e}, residual_ode {:.1e}, IVP gap {gap:.1e}, ||w|| {:.3e}",
        r.iterations,
        r.residual_bc,
        r.residual_ode,
        r.solution.weighted_norm()
    ))
}

fn criterion_5() -> Check {
    criterion_5_on(&example())
}

fn criterion_5_forced() -> Check {
    criterion_5_on(&forced_example())
}

fn criterion_6() -> Check {
    // Gamma recurrence and reflection
    for i in 0..200 {
        let x = 0.1 + 49.9 * (i as f64 / 199.0);
        let r = rel(gamma(x + 1.0).unwrap(), x * gamma(x).unwrap());
        ensure(r <= 1e-10, format!("recurrence at {x}: {r:e}"))?;
        let y = (i as f64 + 0.5) / 200.0;
        let lhs = gamma(y).unwrap() * gamma(1.0 - y).unwrap();
        let r = rel(lhs, std::f64::consts::PI / (std::f64::consts::PI * y).sin());
        ensure(r <= 1e-10, format!("reflection at {y}: {r:e}"))?;
    }

    // semigroup on a monomial under refinement
    let (mu, nu, delta) = (0.4, 0.35, 1.5);
    let exact = rl_integral_monomial(mu + nu, delta, 0.0, 1.0).unwrap();
    let mut errs = Vec::new();
    for n in [64usize, 128, 256] {
        let mesh = Arc::new(GradedMesh::uniform(0.0, 1.0, n).unwrap());
        let g = WeightedGrid::from_weighted_fn(mesh.clone(), 0.5, |s| s).unwrap();
        let inner = rl_integral_nodes(Integrand::Weighted(&g), nu, Execution::Sequential).unwrap();
        let outer = rl_integral_nodes(Integrand::Plain { mesh: &mesh, values: &inner }, mu, Execution::Sequential).unwrap();
        errs.push((outer[n] - exact).abs());
    }
    ensure(errs[2] < errs[1] && errs[1] < errs[0] && errs[2] < 1e-3, format!("semigroup errors {errs:?}"))?;

    // Hilfer endpoint reductions
    let mesh = Arc::new(GradedMesh::build(0.0, 1.0, 128, 2.0, &[]).unwrap());
    let g = WeightedGrid::from_weighted_fn(mesh.clone(), 0.6, |t| 1.0 + t * t).unwrap();
    let rl = rl_derivative_nodes(&g, 0.6, Execution::Sequential).unwrap();
    let h0 = hilfer_derivative_nodes(&g, FracOrder::new(0.6, 0.0).unwrap(), Execution::Sequential).unwrap();
    let d0 = rl.iter().zip(&h0).skip(1).take(mesh.len() - 2).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ensure(d0 <= 1e-10, format!("nu = 0 reduction gap {d0:e}"))?;
    let smooth = WeightedGrid::from_weighted_fn(mesh.clone(), 1.0, |t| (2.0 * t).sin()).unwrap();
    let h1 = hilfer_derivative_nodes(&smooth, FracOrder::new(0.6, 1.0).unwrap(), Execution::Sequential).unwrap();
    let slope = hilfer_bvp::fraccalc::derivative_on_nodes(mesh.nodes(), smooth.w()).unwrap();
    let caputo = rl_integral_nodes(Integrand::Plain { mesh: &mesh, values: &slope }, 0.4, Execution::Sequential).unwrap();
    let d1 = h1.iter().zip(&caputo).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ensure(d1 <= 1e-10, format!("nu = 1 reduction gap {d1:e}"))?;

    // certificate scaling in rho
    let spec = example();
    let params = derive_params(&spec).unwrap();
    let base = certificate_at(&spec, &params, 4.0).unwrap();
    for s in [0.5, 3.0, 1000.0] {
        let mut scaled = spec.clone();
        scaled.rho = parse(&format!("{s}*({})", spec.rho)).unwrap();
        let r = certificate_at(&scaled, &params, 4.0).unwrap();
        for (a, b) in [(r.rho_norm, base.rho_norm), (r.g, base.g), (r.l_star, base.l_star)] {
            ensure(rel(a, s * b) <= 1e-12, format!("scaling by {s}: {a} vs {}", s * b))?;
        }
    }

    // expression round trip
    let corpus = expr_corpus();
    ensure(corpus.len() >= 30, "corpus too small")?;
    for src in &corpus {
        let e = parse(src).map_err(|e| format!("{src}: {e}"))?;
        let again = parse(&e.to_string()).map_err(|e| format!("{src}: reparse {e}"))?;
        ensure(again == e, format!("round trip changed {src}"))?;
    }

    // CLI exit codes
    let matrix = exit_code_matrix()?;
    Ok(format!("all suites pass; CLI matrix {matrix}"))
}

pub fn expr_corpus() -> Vec<&'static str> {
    vec![
        "t", "z", "1", "0.5", "1e-3", "2.5E+2", "-t", "--z", "t+z", "t-z-1", "t*z/2", "t/2/3", "2^3^2",
        "-2^2", "(-2)^2", "t^-1", "sin(t)", "cos(z)", "abs(-z)", "exp(t*z)", "log(1+t)", "sqrt(t)",
        "(1/16)*t*sin(abs(z))", "t/16*sin(abs(z))", "1/3", "2/5*(2/3)^(-1/2)", "sin(cos(exp(t)))",
        "((t))", "t+z*2^t", "1+2*3-4/5^6", "-(t+z)", "exp(-t^2/2)/sqrt(2*3.14159)", "abs(t-0.5)*z^2",
    ]
}

fn exit_code_matrix() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let bin = env!("CARGO_BIN_EXE_hilfer");
    let example_path = dir.path().join("example.json");
    std::fs::write(&example_path, hilfer_bvp::cli::EXAMPLE_PROBLEM).unwrap();
    let violated = hilfer_bvp::cli::EXAMPLE_PROBLEM.replace("\"t/16\"", "\"1000*t/16\"");
    let violated_path = dir.path().join("violated.json");
    std::fs::write(&violated_path, violated).unwrap();
    let stubborn = hilfer_bvp::cli::EXAMPLE_PROBLEM.replace("\"t/16*sin(abs(z))\"", "\"2*z+1\"");
    let stubborn_path = dir.path().join("stubborn.json");
    std::fs::write(&stubborn_path, stubborn).unwrap();
    let table = dir.path().join("s.csv");
    let bad_table = dir.path().join("bad.csv");

    let run = |args: &[&str]| -> i32 {
        Command::new(bin)
            .args(args)
            .output()
            .map(|o| o.status.code().unwrap_or(-1))
            .unwrap_or(-1)
    };
    let p = |path: &std::path::Path| path.to_str().unwrap().to_string();
    let solve_code = run(&["solve", &p(&example_path), "--n", "64", "--out", &p(&table), "--report", &p(&dir.path().join("r.json"))]);
    // perturb w by +0.1
    let text = std::fs::read_to_string(&table).unwrap_or_default();
    let mut lines = text.lines();
    let mut out = String::from(lines.next().unwrap_or(""));
    out.push('\n');
    for l in lines {
        let c: Vec<&str> = l.split(',').collect();
        let w: f64 = c[2].parse().unwrap();
        out.push_str(&format!("{},{},{:?}\n", c[0], c[1], w + 0.1));
    }
    std::fs::write(&bad_table, out).unwrap();

    let cases: Vec<(Vec<String>, i32)> = vec![
        (vec!["check".into(), p(&example_path), "--sweep-p".into()], 0),
        (vec!["check".into(), p(&violated_path), "--sweep-p".into()], 2),
        (vec!["check".into(), p(&example_path), "--paper-literal".into()], 3),
        (vec!["check".into(), p(&dir.path().join("missing.json"))], 1),
        (vec!["bogus".into()], 1),
        (vec!["solve".into(), p(&stubborn_path), "--n".into(), "32".into(), "--max-iter".into(), "3".into()], 4),
        (vec!["verify".into(), p(&example_path), p(&table), "--n".into(), "64".into()], 0),
        (vec!["verify".into(), p(&example_path), p(&bad_table), "--n".into(), "64".into()], 5),
    ];
    ensure(solve_code == 0, format!("solve exit {solve_code}"))?;
    for (args, want) in &cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let got = run(&args);
        ensure(got == *want, format!("{args:?}: exit {got}, expected {want}"))?;
    }
    Ok(format!("{} cases", cases.len() + 1))
}

type Criterion = (&'static str, Duration, fn() -> Check);

#[test]
fn acceptance() {
    let criteria: Vec<Criterion> = vec![
        ("1 gamma derivation", Duration::from_millis(1), criterion_1),
        ("2 monomial identities", Duration::from_secs(10), criterion_2),
        ("3 existence certificate", Duration::from_secs(1), criterion_3),
        ("4 manufactured solve", Duration::from_secs(5), criterion_4),
        ("5 end-to-end example", Duration::from_secs(30), criterion_5),
        ("5 end-to-end, forced variant", Duration::from_secs(30), criterion_5_forced),
        ("6 property suites", Duration::from_secs(60), criterion_6),
    ];
    let mut failed = Vec::new();
    for (name, limit, f) in criteria {
        let (r, took) = timed(limit, f);
        match r {
            Ok(detail) => println!("criterion {name}: PASS ({took:.2?}) {detail}"),
            Err(why) => {
                println!("criterion {name}: FAIL ({took:.2?}) {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
