use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fraccalc::GradedMesh;

/// Hilfer order pair `(mu, nu)` with its derived type parameter `gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder {
    mu: f64,
    nu: f64,
    gamma: f64,
}

impl FracOrder {
    pub fn new(mu: f64, nu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu < 1.0) {
            return Err(Error::domain(format!("order mu must lie in (0, 1), got {mu}")));
        }
        if !(0.0..=1.0).contains(&nu) {
            return Err(Error::domain(format!("type nu must lie in [0, 1], got {nu}")));
        }
        // mu + nu - mu nu written as 1 - (1-mu)(1-nu): exact for the common
        // rational inputs (1/3, 1/4 -> 1/2) where the expanded form is not
        let gamma = if nu == 0.0 {
            mu
        } else if nu == 1.0 {
            1.0
        } else {
            1.0 - (1.0 - mu) * (1.0 - nu)
        };
        Ok(FracOrder { mu, nu, gamma })
    }

    #[inline]
    pub fn mu(&self) -> f64 {
        self.mu
    }

    #[inline]
    pub fn nu(&self) -> f64 {
        self.nu
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Order of the inner integral in the Hilfer composition, `(1-nu)(1-mu)`.
    pub fn inner_order(&self) -> f64 {
        (1.0 - self.nu) * (1.0 - self.mu)
    }

    /// Order of the outer integral in the Hilfer composition, `nu (1-mu)`.
    pub fn outer_order(&self) -> f64 {
        self.nu * (1.0 - self.mu)
    }
}

/// A function `z` on a mesh stored through its weighted form
/// `w(t) = (t - a)^(1 - gamma) z(t)`.
///
/// `w` is continuous on `[a, b]` even when `z` blows up at `a`; between
/// nodes it is interpolated linearly.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGrid {
    mesh: Arc<GradedMesh>,
    gamma: f64,
    w: Vec<f64>,
}

impl WeightedGrid {
    pub fn new(mesh: Arc<GradedMesh>, gamma: f64, w: Vec<f64>) -> Result<Self> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::domain(format!("weight parameter gamma must lie in (0, 1], got {gamma}")));
        }
        if w.len() != mesh.len() {
            return Err(Error::domain(format!(
                "grid has {} values for {} mesh nodes",
                w.len(),
                mesh.len()
            )));
        }
        Ok(WeightedGrid { mesh, gamma, w })
    }

    pub fn zeros(mesh: Arc<GradedMesh>, gamma: f64) -> Result<Self> {
        let n = mesh.len();
        Self::new(mesh, gamma, vec![0.0; n])
    }

    /// Sample a weighted function `w(t)` at the nodes.
    pub fn from_weighted_fn(
        mesh: Arc<GradedMesh>,
        gamma: f64,
        w: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let values = mesh.nodes().iter().map(|&t| w(t)).collect();
        Self::new(mesh, gamma, values)
    }

    /// Sample `z(t)` at the interior nodes; `w(a)` is taken from `w_at_a`
    /// since `z` itself may be singular there.
    pub fn from_fn(
        mesh: Arc<GradedMesh>,
        gamma: f64,
        w_at_a: f64,
        z: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let a = mesh.a();
        let values = mesh
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, &t)| if i == 0 { w_at_a } else { (t - a).powf(1.0 - gamma) * z(t) })
            .collect();
        Self::new(mesh, gamma, values)
    }

    #[inline]
    pub fn mesh(&self) -> &Arc<GradedMesh> {
        &self.mesh
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    #[inline]
    pub fn w(&self) -> &[f64] {
        &self.w
    }

    pub fn into_w(self) -> Vec<f64> {
        self.w
    }

    /// `z` at node `i`. At `t = a` with `gamma < 1` this is `±inf` (or 0
    /// when `w(a) = 0`).
    pub fn z_at(&self, i: usize) -> f64 {
        let dt = self.mesh.nodes()[i] - self.mesh.a();
        if i == 0 && self.gamma < 1.0 {
            return if self.w[0] == 0.0 {
                0.0
            } else {
                f64::INFINITY.copysign(self.w[0])
            };
        }
        dt.powf(self.gamma - 1.0) * self.w[i]
    }

    /// `z` at every node (see [`z_at`](Self::z_at)).
    pub fn z_values(&self) -> Vec<f64> {
        (0..self.w.len()).map(|i| self.z_at(i)).collect()
    }

    /// Piecewise-linear interpolant of `w` at `t` in `[a, b]`.
    pub fn interpolate_w(&self, t: f64) -> Result<f64> {
        let nodes = self.mesh.nodes();
        if !(t >= self.mesh.a() && t <= self.mesh.b()) {
            return Err(Error::domain(format!("t = {t} outside the mesh")));
        }
        let j = nodes.partition_point(|&x| x <= t).clamp(1, nodes.len() - 1);
        let (t0, t1) = (nodes[j - 1], nodes[j]);
        let s = (t - t0) / (t1 - t0);
        Ok(self.w[j - 1] * (1.0 - s) + self.w[j] * s)
    }

    /// Discrete `C_{1-gamma}` norm: the max of `|w|` over the nodes.
    pub fn weighted_norm(&self) -> f64 {
        self.w.iter().fold(0.0, |m, &x| m.max(x.abs()))
    }

    /// `||self - other||` in the discrete weighted norm.
    pub fn distance(&self, other: &WeightedGrid) -> f64 {
        self.w
            .iter()
            .zip(&other.w)
            .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }
}
