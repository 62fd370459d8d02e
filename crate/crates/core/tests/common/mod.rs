#![allow(dead_code, clippy::excessive_precision)]

use hilfer_bvp::cli::parse_problem;
use hilfer_bvp::cli::EXAMPLE_PROBLEM;
use hilfer_bvp::expr::parse;
use hilfer_bvp::solver::ProblemSpec;

/// High-precision reference values (50-digit arithmetic, closed forms).
pub mod oracle {
    pub const GAMMA_THIRD: f64 = 2.678_938_534_707_747_6;
    pub const BETA_HALF_THIRD: f64 = 4.206_546_315_976_362_8;
    pub const INV_GAMMA_3_2: f64 = std::f64::consts::FRAC_2_SQRT_PI;

    /// Bundled example: `A` and `c + d - A`.
    pub const A: f64 = 0.276_395_319_577_068_38;
    pub const DENOM: f64 = 0.723_604_680_422_931_6;

    /// Bundled example at p = 4, q = 4/3.
    pub const RHO_NORM_P4: f64 = 0.041_796_269_061_026_377;
    pub const LAMBDA_P4: f64 = 11.456_586_824_501_692;
    pub const DELTA_P4: f64 = 3.366_904_481_544_184_6;
    pub const G_P4: f64 = 0.183_392_891_176_365_99;
    pub const L_STAR_P4: f64 = 0.081_210_153_904_879_312;
    pub const TERMS_G_P4: [f64; 3] = [0.032_418_912_025_347_35, 0.053_818_744_498_364_34, 0.097_155_234_652_654_3];
    pub const TERMS_L_P4: [f64; 3] = [0.012_752_126_815_791_14, 0.021_652_620_560_133_18, 0.046_805_406_528_954_99];

    /// (p, G, L*) over the sweep.
    pub const SWEEP: [(f64, f64, f64); 4] = [
        (4.0, 0.183_392_891_176_365_99, 0.081_210_153_904_879_312),
        (8.0, 0.167_779_402_525_160_12, 0.092_272_549_620_530_092),
        (16.0, 0.176_306_959_037_739_33, 0.101_730_171_592_080_09),
        (64.0, 0.192_029_263_239_236_76, 0.113_769_556_059_426_86),
    ];

    /// The example's p = 1/2 read with q = 1/2 and ||rho|| = 1/36.
    pub const LITERAL_G: f64 = 0.077_997_293_661_258_1;
    pub const LITERAL_L_STAR: f64 = 0.053_972_224_295_310_7;
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// The bundled example problem.
pub fn example() -> ProblemSpec {
    parse_problem(EXAMPLE_PROBLEM).unwrap().spec
}

/// The example with `c = 1, d = 0`, no nonlocal term and `f = 1`:
/// solution `t^mu / Gamma(mu + 1)`.
pub fn manufactured() -> ProblemSpec {
    let mut s = example();
    s.c = 1.0;
    s.d = 0.0;
    s.nonlocal.clear();
    s.f = parse("1").unwrap();
    s
}

/// The example with a forcing term, so the solution is not identically zero.
pub fn forced_example() -> ProblemSpec {
    let mut s = example();
    s.f = parse("t/16*(1+sin(abs(z)))").unwrap();
    s
}
