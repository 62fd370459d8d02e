//! Product-integration weights for the Riemann-Liouville kernel.
//!
//! For a target node `t_n` the integral
//! `(1/Gamma(beta)) int_a^{t_n} (t_n - s)^(beta-1) phi(s) ds`
//! is replaced by `sum_j W[n][j] x_j`, where `x` are node data and the
//! kernel (plus, in weighted mode, the endpoint weight `(s-a)^(gamma-1)`)
//! is integrated exactly against piecewise-linear hat functions.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::fraccalc::GradedMesh;
use crate::par::Execution;
use crate::specfun::{beta_segment, gamma};

/// Representation of the integrand between nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interp {
    /// `phi` itself is linear between nodes. Data: `phi` at every node.
    Plain,
    /// `phi(s) = (s-a)^(gamma-1) w(s)` with `w` linear between nodes.
    /// Data: `w` at every node.
    Weighted { gamma: f64 },
    /// `phi` linear between nodes on `[t_1, b]`; on `[a, t_1]` it is modelled
    /// as `(s-a)^(gamma-1) c` from a single weighted sample `c`.
    /// Data: `c` in slot 0, `phi` at nodes `1..`.
    Composite { gamma: f64 },
}

impl Interp {
    /// Weighted and composite modes degenerate to plain when `gamma = 1`.
    fn normalized(self) -> Self {
        match self {
            Interp::Weighted { gamma } | Interp::Composite { gamma } if gamma >= 1.0 => Interp::Plain,
            other => other,
        }
    }

    fn weight_exponent(self) -> f64 {
        match self {
            Interp::Plain => 1.0,
            Interp::Weighted { gamma } | Interp::Composite { gamma } => gamma,
        }
    }
}

/// Value of the integral at the left endpoint, as a multiple of slot 0.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Origin {
    Zero,
    Scaled(f64),
    Divergent,
}

/// Dense lower-triangular product-integration matrix on a mesh.
#[derive(Debug, Clone)]
pub struct ProductRule {
    order: f64,
    interp: Interp,
    origin: Origin,
    /// rows[n] has n + 1 entries; rows[0] is unused.
    rows: Vec<Vec<f64>>,
}

impl ProductRule {
    pub fn new(mesh: &GradedMesh, order: f64, interp: Interp, exec: Execution) -> Result<Self> {
        let interp = validate(order, interp)?;
        let inv_gamma = 1.0 / gamma(order)?;
        let rows = exec.map_range(mesh.len(), |n| {
            if n == 0 {
                Vec::new()
            } else {
                row_unscaled(mesh.nodes(), order, interp, n)
                    .into_iter()
                    .map(|x| x * inv_gamma)
                    .collect()
            }
        });
        Ok(ProductRule {
            order,
            interp,
            origin: origin(order, interp)?,
            rows,
        })
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    pub fn interp(&self) -> Interp {
        self.interp
    }

    pub fn row(&self, n: usize) -> &[f64] {
        &self.rows[n]
    }

    /// The integral at node `n` from node data `x`.
    pub fn apply_at(&self, x: &[f64], n: usize) -> f64 {
        if n == 0 {
            return self.origin_value(x[0]);
        }
        dot(&self.rows[n], x)
    }

    /// The integral at every node.
    pub fn apply(&self, x: &[f64], exec: Execution) -> Vec<f64> {
        assert_eq!(x.len(), self.rows.len(), "node data length must match the mesh");
        exec.map_range(self.rows.len(), |n| self.apply_at(x, n))
    }

    fn origin_value(&self, x0: f64) -> f64 {
        self.origin.value(x0)
    }
}

impl Origin {
    fn value(self, x0: f64) -> f64 {
        match self {
            Origin::Zero => 0.0,
            Origin::Scaled(c) => c * x0,
            Origin::Divergent if x0 == 0.0 => 0.0,
            Origin::Divergent => f64::INFINITY.copysign(x0),
        }
    }
}

/// Weights for a single target node `n >= 1`, already divided by `Gamma(order)`.
pub fn row_weights(mesh: &GradedMesh, order: f64, interp: Interp, n: usize) -> Result<Vec<f64>> {
    let interp = validate(order, interp)?;
    if n == 0 || n >= mesh.len() {
        return Err(Error::domain(format!("row index {n} must be an interior or right node")));
    }
    let inv_gamma = 1.0 / gamma(order)?;
    Ok(row_unscaled(mesh.nodes(), order, interp, n)
        .into_iter()
        .map(|x| x * inv_gamma)
        .collect())
}

/// Limit of the integral at `t -> a` for slot-0 data `x0`.
pub fn value_at_origin(order: f64, interp: Interp, x0: f64) -> Result<f64> {
    let interp = validate(order, interp)?;
    Ok(origin(order, interp)?.value(x0))
}

#[inline]
pub fn dot(row: &[f64], x: &[f64]) -> f64 {
    row.iter().zip(x).map(|(w, v)| w * v).sum()
}

fn validate(order: f64, interp: Interp) -> Result<Interp> {
    if !(order > 0.0 && order.is_finite()) {
        return Err(Error::domain(format!("integral order must be positive, got {order}")));
    }
    let e = interp.weight_exponent();
    if !(e > 0.0 && e <= 1.0) {
        return Err(Error::domain(format!("weight parameter must lie in (0, 1], got {e}")));
    }
    Ok(interp.normalized())
}

fn origin(order: f64, interp: Interp) -> Result<Origin> {
    let e = interp.weight_exponent();
    let p = e + order - 1.0;
    Ok(if interp == Interp::Plain || p > 1e-14 {
        Origin::Zero
    } else if p.abs() <= 1e-14 {
        // I^beta (s-a)^(e-1) = Gamma(e)/Gamma(e+beta) (t-a)^(e+beta-1), here with e+beta = 1
        Origin::Scaled(gamma(e)?)
    } else {
        Origin::Divergent
    })
}

fn row_unscaled(nodes: &[f64], order: f64, interp: Interp, n: usize) -> Vec<f64> {
    let a = nodes[0];
    let t = nodes[n];
    let mut row = vec![0.0; n + 1];
    for j in 0..n {
        let (s0, s1) = (nodes[j], nodes[j + 1]);
        match interp {
            Interp::Plain => {
                let (left, right) = plain_hats(t - s1, s1 - s0, order);
                row[j] += left;
                row[j + 1] += right;
            }
            Interp::Weighted { gamma } => {
                let (left, right) = weighted_hats(a, t, s0, s1, order, gamma);
                row[j] += left;
                row[j + 1] += right;
            }
            Interp::Composite { gamma } if j == 0 => {
                row[0] += weighted_moment(a, t, s0, s1, order, gamma);
            }
            Interp::Composite { .. } => {
                let (left, right) = plain_hats(t - s1, s1 - s0, order);
                row[j] += left;
                row[j + 1] += right;
            }
        }
    }
    row
}

/// Hat-function moments of `(t-s)^(beta-1)` on an interval of length `h`
/// whose right end is `c = t - s1 >= 0` away from the target, in the
/// variable `u = t - s`: returns (weight of left node, weight of right node).
fn plain_hats(c: f64, h: f64, beta: f64) -> (f64, f64) {
    // P = int_0^h (c+v)^(beta-1) dv,  Q = int_0^h (c+v)^(beta-1) v dv
    let (p, q) = if c <= 0.0 {
        (h.powf(beta) / beta, h.powf(beta + 1.0) / (beta + 1.0))
    } else {
        let x = h / c;
        let l = x.ln_1p();
        let p = c.powf(beta) * (beta * l).exp_m1() / beta;
        let q = if x >= 0.25 { q_closed(c, h, beta) } else { q_series(c, h, beta) };
        (p, q)
    };
    // left node carries v/h (v = t_{j+1} - s), right node carries 1 - v/h
    (q / h, p - q / h)
}

fn q_closed(c: f64, h: f64, beta: f64) -> f64 {
    let l = (h / c).ln_1p();
    c.powf(beta + 1.0) * (((beta + 1.0) * l).exp_m1() / (beta + 1.0) - (beta * l).exp_m1() / beta)
}

fn q_series(c: f64, h: f64, beta: f64) -> f64 {
    // (1 + v/c)^(beta-1) expanded; for h/c < 1/4, 40 terms reach 1e-18
    let x = h / c;
    let alpha = beta - 1.0;
    let mut bk = 1.0;
    let mut xk = 1.0;
    let mut sum = 0.5;
    for k in 0..40 {
        let kf = k as f64;
        bk *= (alpha - kf) / (kf + 1.0);
        xk *= x;
        let term = bk * xk / (kf + 3.0);
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() || bk == 0.0 {
            break;
        }
    }
    c.powf(alpha) * h * h * sum
}

/// `int_{s0}^{s1} (t-s)^(beta-1) (s-a)^(e-1) ds` and the same with `(s-a)^e`.
fn exact_moments(a: f64, t: f64, s0: f64, s1: f64, beta: f64, e: f64) -> (f64, f64) {
    let len = t - a;
    let x0 = ((s0 - a) / len).clamp(0.0, 1.0);
    let x1 = ((s1 - a) / len).clamp(0.0, 1.0);
    let m0 = len.powf(beta + e - 1.0) * beta_segment(x0, x1, e, beta);
    let m1 = len.powf(beta + e) * beta_segment(x0, x1, e + 1.0, beta);
    (m0, m1)
}

fn is_separated(a: f64, t: f64, s0: f64, s1: f64, e: f64) -> bool {
    let h = s1 - s0;
    (t - s1) >= 2.0 * h && (e == 1.0 || (s0 - a) >= 2.0 * h)
}

fn weighted_hats(a: f64, t: f64, s0: f64, s1: f64, beta: f64, e: f64) -> (f64, f64) {
    let h = s1 - s0;
    if is_separated(a, t, s0, s1, e) {
        let (mid, half) = (0.5 * (s0 + s1), 0.5 * h);
        let (mut left, mut right) = (0.0, 0.0);
        for &(xi, wi) in gauss_legendre() {
            let s = mid + half * xi;
            let f = wi * half * (t - s).powf(beta - 1.0) * (s - a).powf(e - 1.0);
            left += f * (s1 - s);
            right += f * (s - s0);
        }
        (left / h, right / h)
    } else {
        let (m0, m1) = exact_moments(a, t, s0, s1, beta, e);
        (((s1 - a) * m0 - m1) / h, (m1 - (s0 - a) * m0) / h)
    }
}

fn weighted_moment(a: f64, t: f64, s0: f64, s1: f64, beta: f64, e: f64) -> f64 {
    exact_moments(a, t, s0, s1, beta, e).0
}

const GL_POINTS: usize = 12;

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_POINTS;
        let nf = n as f64;
        (0..n)
            .map(|i| {
                let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
                let mut dp = 0.0;
                for _ in 0..100 {
                    let (mut p0, mut p1) = (1.0, x);
                    for k in 2..=n {
                        let kf = k as f64;
                        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                        p0 = p1;
                        p1 = p2;
                    }
                    dp = nf * (x * p1 - p0) / (x * x - 1.0);
                    let dx = p1 / dp;
                    x -= dx;
                    if dx.abs() < 1e-16 {
                        break;
                    }
                }
                (x, 2.0 / ((1.0 - x * x) * dp * dp))
            })
            .collect()
    })
}

/// Composite Gauss-Legendre on `[lo, hi]` with interval halving until the
/// panel and its two halves agree to `rel_tol`.
pub fn adaptive_gauss(f: &mut dyn FnMut(f64) -> Result<f64>, lo: f64, hi: f64, rel_tol: f64) -> Result<f64> {
    fn panel(f: &mut dyn FnMut(f64) -> Result<f64>, lo: f64, hi: f64) -> Result<f64> {
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        let mut s = 0.0;
        for &(xi, wi) in gauss_legendre() {
            s += wi * f(mid + half * xi)?;
        }
        Ok(s * half)
    }
    let mut total = 0.0;
    let mut stack = vec![(lo, hi, panel(f, lo, hi)?, 0u32)];
    let mut scale = 0.0f64;
    while let Some((l, h, whole, depth)) = stack.pop() {
        let m = 0.5 * (l + h);
        let left = panel(f, l, m)?;
        let right = panel(f, m, h)?;
        let refined = left + right;
        scale = scale.max(refined.abs());
        if (refined - whole).abs() <= rel_tol * scale.max(f64::MIN_POSITIVE) || depth >= 40 {
            total += refined;
        } else {
            stack.push((l, m, left, depth + 1));
            stack.push((m, h, right, depth + 1));
        }
    }
    Ok(total)
}
