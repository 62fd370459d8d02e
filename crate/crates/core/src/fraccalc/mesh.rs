use crate::error::{Error, Result};

/// Relative tolerance (times `b - a`) under which two nodes are merged.
pub const MERGE_TOL: f64 = 1e-14;

/// Power-law graded mesh on `[a, b]`, clustered at `a`, with optional
/// extra nodes merged in.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedMesh {
    a: f64,
    b: f64,
    grading: f64,
    n_base: usize,
    nodes: Vec<f64>,
}

impl GradedMesh {
    /// Skeleton `a + (b - a) (j / n_base)^r` for `j = 0..=n_base`, plus
    /// `extra` nodes in `(a, b]`. Nodes closer than `1e-14 (b - a)` to an
    /// existing node are merged into it.
    pub fn build(a: f64, b: f64, n_base: usize, grading: f64, extra: &[f64]) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::domain(format!("mesh needs a < b, got a = {a}, b = {b}")));
        }
        if n_base < 2 {
            return Err(Error::domain(format!("mesh needs n_base >= 2, got {n_base}")));
        }
        if !(grading >= 1.0 && grading.is_finite()) {
            return Err(Error::domain(format!("grading exponent must be >= 1, got {grading}")));
        }
        let len = b - a;
        let mut nodes: Vec<f64> = (0..=n_base)
            .map(|j| a + len * (j as f64 / n_base as f64).powf(grading))
            .collect();
        // pin the endpoint exactly
        nodes[n_base] = b;

        let tol = MERGE_TOL * len;
        for &x in extra {
            if !(x > a && x <= b) {
                return Err(Error::domain(format!(
                    "extra node {x} lies outside ({a}, {b}]"
                )));
            }
            let idx = nodes.partition_point(|&t| t < x);
            let near_left = idx > 0 && x - nodes[idx - 1] <= tol;
            let near_right = idx < nodes.len() && nodes[idx] - x <= tol;
            if !(near_left || near_right) {
                nodes.insert(idx, x);
            }
        }
        Ok(GradedMesh {
            a,
            b,
            grading,
            n_base,
            nodes,
        })
    }

    /// Uniform mesh with `n` intervals.
    pub fn uniform(a: f64, b: f64, n: usize) -> Result<Self> {
        Self::build(a, b, n, 1.0, &[])
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    #[inline]
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn grading(&self) -> f64 {
        self.grading
    }

    pub fn n_base(&self) -> usize {
        self.n_base
    }

    #[inline]
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Index of the node equal to `t` within the merge tolerance.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let tol = MERGE_TOL * (self.b - self.a);
        let idx = self.nodes.partition_point(|&x| x < t);
        [idx.checked_sub(1), Some(idx)]
            .into_iter()
            .flatten()
            .filter(|&i| i < self.nodes.len())
            .find(|&i| (self.nodes[i] - t).abs() <= tol)
    }

    /// Skeleton node `j` of the graded map (not shifted by inserted nodes).
    pub fn skeleton_node(&self, j: usize) -> f64 {
        self.a + (self.b - self.a) * (j as f64 / self.n_base as f64).powf(self.grading)
    }
}
