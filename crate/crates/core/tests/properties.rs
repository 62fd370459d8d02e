//! Property suites for the special functions and the expression language.

use std::f64::consts::PI;

use hilfer_bvp::expr::{parse, Expr};
use hilfer_bvp::specfun::{beta, gamma, ln_gamma};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn gamma_recurrence(x in 0.1f64..50.0) {
        let lhs = gamma(x + 1.0).unwrap();
        prop_assert!(rel(lhs, x * gamma(x).unwrap()) <= 1e-11);
    }

    #[test]
    fn gamma_reflection(x in 1e-6f64..(1.0 - 1e-6)) {
        let lhs = gamma(x).unwrap() * gamma(1.0 - x).unwrap();
        prop_assert!(rel(lhs, PI / (PI * x).sin()) <= 1e-10);
    }

    #[test]
    fn beta_symmetry(x in 1e-3f64..200.0, y in 1e-3f64..200.0) {
        prop_assert_eq!(beta(x, y).unwrap().to_bits(), beta(y, x).unwrap().to_bits());
    }

    #[test]
    fn ln_gamma_consistency(x in 0.5f64..30.0) {
        prop_assert!(rel(ln_gamma(x).unwrap().exp(), gamma(x).unwrap()) <= 1e-11);
    }

    #[test]
    fn gamma_negative_via_reflection(k in 0u32..20, frac in 0.01f64..0.99) {
        let x = -(k as f64) - frac;
        let direct = gamma(x).unwrap();
        let via = PI / ((PI * x).sin() * gamma(1.0 - x).unwrap());
        prop_assert!(rel(direct, via) <= 1e-12);
    }
}

fn leaf() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("t".to_string()),
        Just("z".to_string()),
        (0u32..1000).prop_map(|n| n.to_string()),
        (0.0f64..100.0).prop_map(|x| format!("{x}")),
        (1u32..9, -12i32..12).prop_map(|(m, e)| format!("{m}e{e}")),
    ]
}

fn source() -> impl Strategy<Value = String> {
    leaf().prop_recursive(6, 64, 2, |inner| {
        prop_oneof![
            (inner.clone(), prop::sample::select(vec!["+", "-", "*", "/", "^"]), inner.clone())
                .prop_map(|(a, op, b)| format!("{a}{op}{b}")),
            (inner.clone(), prop::sample::select(vec!["+", "-", "*", "/", "^"]), inner.clone())
                .prop_map(|(a, op, b)| format!("({a}) {op} ({b})")),
            (prop::sample::select(vec!["sin", "cos", "abs", "exp", "log", "sqrt"]), inner.clone())
                .prop_map(|(f, a)| format!("{f}({a})")),
            inner.prop_map(|a| format!("-{a}")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn print_then_parse_is_identity(src in source()) {
        let e = parse(&src).unwrap();
        let printed = e.to_string();
        let again: Expr = printed.parse().unwrap();
        prop_assert_eq!(&again, &e);
        prop_assert_eq!(again.to_string(), printed);
    }

    #[test]
    fn eval_is_pure(src in source(), t in -3.0f64..3.0, z in -3.0f64..3.0) {
        let e = parse(&src).unwrap();
        let a = e.eval(t, z).map(f64::to_bits).map_err(|e| e.to_string());
        let b = e.eval(t, z).map(f64::to_bits).map_err(|e| e.to_string());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn product_binds_tighter_than_sum(a in 0u32..100, b in 0u32..100, c in 0u32..100) {
        prop_assert_eq!(parse(&format!("{a}+{b}*{c}")).unwrap(), parse(&format!("{a}+({b}*{c})")).unwrap());
        prop_assert_eq!(parse(&format!("{a}-{b}/{c}")).unwrap(), parse(&format!("{a}-({b}/{c})")).unwrap());
        prop_assert_eq!(parse(&format!("{a}*{b}^{c}")).unwrap(), parse(&format!("{a}*({b}^{c})")).unwrap());
    }
}

const CORPUS: [&str; 32] = [
    "t", "z", "1", "0.5", "1e-3", "2.5E+2", "-t", "--z", "t+z", "t-z-1", "t*z/2", "t/2/3", "2^3^2", "-2^2",
    "(-2)^2", "t^-1", "sin(t)", "cos(z)", "abs(-z)", "exp(t*z)", "log(1+t)", "sqrt(t)", "(1/16)*t*sin(abs(z))",
    "t/16*sin(abs(z))", "1/3", "2/5*(2/3)^(-1/2)", "sin(cos(exp(t)))", "((t))", "t+z*2^t", "1+2*3-4/5^6",
    "-(t+z)", "exp(-t^2/2)/sqrt(2*3.14159)",
];

#[test]
fn corpus_round_trips() {
    for src in CORPUS {
        let e = parse(src).unwrap();
        assert_eq!(parse(&e.to_string()).unwrap(), e, "{src}");
        // values agree too
        for &(t, z) in &[(0.3, 0.7), (1.5, -2.0)] {
            let a = e.eval(t, z);
            let b = parse(&e.to_string()).unwrap().eval(t, z);
            assert_eq!(a.ok().map(f64::to_bits), b.ok().map(f64::to_bits), "{src}");
        }
    }
}

#[test]
fn expression_examples() {
    let f = parse("(1/16)*t*sin(abs(z))").unwrap();
    assert!((f.eval(1.0, PI / 2.0).unwrap() - 0.0625).abs() < 1e-16);
    assert_eq!(parse("t/16").unwrap().eval(1.0, 0.0).unwrap(), 0.0625);
    assert_eq!(parse("z").unwrap().eval(7.0, 0.0).unwrap(), 0.0);
    assert_eq!(parse("2^3^2").unwrap().eval(0.0, 0.0).unwrap(), 512.0);
    // unary minus binds to the base
    assert_eq!(parse("-2^2").unwrap().eval(0.0, 0.0).unwrap(), 4.0);
    match parse("sin(") {
        Err(hilfer_bvp::Error::Parse { offset, .. }) => assert_eq!(offset, 4),
        other => panic!("{other:?}"),
    }
}
