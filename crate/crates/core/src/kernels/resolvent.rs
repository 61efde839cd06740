//! Nyström discretization of the Airy kernel restricted to `[0, L]` and its
//! resolvent `R = (I − K)⁻¹K`.

use nalgebra::DMatrix;

use super::airy_kernel;
use crate::error::{Error, Result};
use crate::quadrature::QuadratureGrid;

/// Below this gap `1 − λ_max` the system is treated as singular.
const SPECTRAL_GAP_MIN: f64 = 1e-8;

/// Resolvent of the Airy kernel on a Gauss–Legendre grid over `[0, L]`.
#[derive(Debug, Clone)]
pub struct ResolventOperator {
    pub grid: QuadratureGrid,
    /// `K_Ai(u_i, u_j)`.
    pub kernel: DMatrix<f64>,
    /// `R(u_i, u_j)`.
    pub resolvent: DMatrix<f64>,
    /// `sup |(I − KW)R − K|` over node pairs.
    pub residual: f64,
    /// Largest eigenvalue of the symmetrized operator `W^{1/2} K W^{1/2}`.
    pub largest_eigenvalue: f64,
}

/// Solves `(I − K W) R = K` at the nodes of an `n`-point Gauss–Legendre rule on `[0, L]`.
pub fn nystrom_resolvent(l: f64, n: usize) -> Result<ResolventOperator> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::invalid("L", format!("must be positive and finite, got {l}")));
    }
    if n < 8 {
        return Err(Error::invalid("n", format!("need at least 8 nodes, got {n}")));
    }
    let grid = QuadratureGrid::gauss_legendre(0.0, l, n);
    let u = &grid.nodes;
    let w = &grid.weights;
    let kernel = DMatrix::from_fn(n, n, |i, j| airy_kernel(u[i], u[j]));

    let sym = DMatrix::from_fn(n, n, |i, j| w[i].sqrt() * kernel[(i, j)] * w[j].sqrt());
    let largest = sym.symmetric_eigenvalues().max();
    if 1.0 - largest < SPECTRAL_GAP_MIN {
        return Err(Error::IllConditioned { largest, condition: 1.0 / (1.0 - largest).abs().max(f64::MIN_POSITIVE) });
    }

    let system = DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 } - kernel[(i, j)] * w[j]);
    let resolvent = system
        .clone()
        .lu()
        .solve(&kernel)
        .ok_or(Error::IllConditioned { largest, condition: f64::INFINITY })?;
    let residual = (&system * &resolvent - &kernel).amax();
    Ok(ResolventOperator { grid, kernel, resolvent, residual, largest_eigenvalue: largest })
}

impl ResolventOperator {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Truncation length `L`.
    pub fn length(&self) -> f64 {
        self.grid.b
    }

    /// The same grid with `R ≡ 0`.
    pub fn zeroed(&self) -> Self {
        let n = self.len();
        ResolventOperator { resolvent: DMatrix::zeros(n, n), residual: 0.0, ..self.clone() }
    }

    /// `sup |R − Rᵀ|`.
    pub fn asymmetry(&self) -> f64 {
        (&self.resolvent - self.resolvent.transpose()).amax()
    }

    /// `R(x, y)` off the grid by Nyström interpolation:
    /// `R(x,y) = K(x,y) + Σ_i K(x,u_i) w_i R_i(y)`, `R_i(y) = K(u_i,y) + Σ_j R_ij w_j K(u_j,y)`.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let (u, w) = (&self.grid.nodes, &self.grid.weights);
        let ky: Vec<f64> = u.iter().map(|&uj| airy_kernel(uj, y)).collect();
        let mut total = airy_kernel(x, y);
        for i in 0..u.len() {
            let ri = ky[i] + (0..u.len()).map(|j| self.resolvent[(i, j)] * w[j] * ky[j]).sum::<f64>();
            total += airy_kernel(x, u[i]) * w[i] * ri;
        }
        total
    }
}
