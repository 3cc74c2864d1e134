//! Local Fourier analysis (LFA) for multigrid on regular tetrahedral grids.
//!
//! The crate predicts smoothing factors and two-grid convergence factors for
//! the 15-point P1 finite-element Laplacian on an oblique lattice generated by
//! a tetrahedron, covering pointwise (Jacobi, Gauss-Seidel), four-color and
//! line/plane smoothers, and validates the predictions with a structured
//! geometric multigrid solver.
//!
//! Pipeline: [`geometry`] turns a tetrahedron into a lattice basis,
//! [`stencil`] assembles the 15-point stencil, [`symbols`] evaluates Fourier
//! symbols on the invariant harmonic subspaces, [`analysis`] takes suprema
//! over the frequency domain, and [`solver`] measures actual W/V-cycle rates.

pub mod analysis;
pub mod cmat;
pub mod eig;
pub mod geometry;
pub mod report;
pub mod solver;
pub mod stencil;
pub mod symbols;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
