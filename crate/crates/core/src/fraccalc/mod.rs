//! Meshes, weighted grids and numerical fractional operators.

mod grid;
mod mesh;
mod operators;
pub mod product;

pub use grid::{FracOrder, WeightedGrid};
pub use mesh::{GradedMesh, MERGE_TOL};
pub use operators::{
    derivative_on_nodes, hilfer_derivative_nodes, hilfer_derivative_num, rl_derivative_nodes,
    rl_derivative_num, rl_integral_monomial, rl_integral_nodes, rl_integral_quad, Integrand,
};
pub use product::{Interp, ProductRule};

/// Discrete `C_{1-gamma}` norm of a grid.
pub fn weighted_norm(g: &WeightedGrid) -> f64 {
    g.weighted_norm()
}
