//! Spectral sampling of determinantal point processes discretized on a quadrature grid.
//!
//! The kernel is restricted to a window and replaced by the Hermitian matrix
//! `M = W^{1/2} K W^{1/2}` on quadrature nodes. A sample selects each
//! eigenvector independently with probability equal to its eigenvalue and then
//! draws one node per selected eigenvector from the resulting projection
//! process, conditioning sequentially.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::configuration::{Configuration, Dim, Point};
use crate::error::{Error, Result};
use crate::kernels::KernelModel;
use crate::quadrature::{gauss_legendre_unit, QuadratureGrid};
use crate::rng;

/// Eigenvalues may exceed `[0, 1]` by this much before the discretization is rejected.
pub const EIGENVALUE_TOL: f64 = 1e-6;

/// Nodes per Gauss–Legendre panel on interval windows.
pub const PANEL_NODES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DppWindow {
    Interval { a: f64, b: f64 },
    Disk { radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DppSampleConfig {
    pub window: DppWindow,
    /// Number of quadrature nodes. On an interval a multiple of 8 gives equal
    /// 8-node panels, otherwise one Gauss–Legendre panel is used; on a disk the
    /// count is split into radial × angular nodes.
    pub n: usize,
    pub seed: u64,
}

impl DppSampleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 16 {
            return Err(Error::invalid("n", format!("grid needs at least 16 nodes, got {}", self.n)));
        }
        match self.window {
            DppWindow::Interval { a, b } if !(a.is_finite() && b.is_finite() && b > a) => {
                Err(Error::invalid("window", format!("need finite a < b, got [{a}, {b}]")))
            }
            DppWindow::Disk { radius } if !(radius > 0.0 && radius.is_finite()) => {
                Err(Error::invalid("radius", format!("must be positive, got {radius}")))
            }
            _ => Ok(()),
        }
    }

    fn grid(&self) -> (Vec<Point>, Vec<f64>) {
        match self.window {
            DppWindow::Interval { a, b } => {
                let g = if self.n.is_multiple_of(PANEL_NODES) {
                    QuadratureGrid::composite(a, b, self.n / PANEL_NODES, PANEL_NODES)
                } else {
                    QuadratureGrid::gauss_legendre(a, b, self.n)
                };
                (g.nodes.iter().map(|&x| Point::d1(x)).collect(), g.weights)
            }
            DppWindow::Disk { radius } => {
                let nr = ((self.n as f64 / 2.0).sqrt().ceil() as usize).max(2);
                let nt = self.n.div_ceil(nr).max(4);
                let (t, w) = gauss_legendre_unit(nr);
                let mut pts = Vec::with_capacity(nr * nt);
                let mut weights = Vec::with_capacity(nr * nt);
                for (ti, wi) in t.iter().zip(&w) {
                    let r = 0.5 * radius * (ti + 1.0);
                    let wr = 0.5 * radius * wi * r * 2.0 * PI / nt as f64;
                    for k in 0..nt {
                        let th = 2.0 * PI * (k as f64 + 0.5) / nt as f64;
                        pts.push(Point::d2(r * th.cos(), r * th.sin()));
                        weights.push(wr);
                    }
                }
                (pts, weights)
            }
        }
    }
}

/// A kernel discretized on a window, ready to sample from.
#[derive(Debug, Clone)]
pub struct DppSampler {
    dim: Dim,
    nodes: Vec<Point>,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
}

impl DppSampler {
    pub fn new(model: &KernelModel, cfg: &DppSampleConfig) -> Result<Self> {
        cfg.validate()?;
        if !model.is_hermitian() {
            return Err(Error::Domain(format!("{model} kernel is not Hermitian; spectral sampling needs a Hermitian kernel")));
        }
        match (model.dim(), cfg.window) {
            (Dim::One, DppWindow::Interval { .. }) | (Dim::Two, DppWindow::Disk { .. }) => {}
            _ => return Err(Error::invalid("window", format!("{model} needs {} window", if model.dim() == Dim::One { "an interval" } else { "a disk" }))),
        }
        let (nodes, weights) = cfg.grid();
        let kernel = |x: &Point, y: &Point| model.eval(x, y);
        Self::from_kernel(model.dim(), nodes, &weights, kernel)
    }

    /// Discretizes an arbitrary Hermitian kernel on the given nodes and weights.
    pub fn from_kernel(
        dim: Dim,
        nodes: Vec<Point>,
        weights: &[f64],
        kernel: impl Fn(&Point, &Point) -> Result<Complex64> + Sync,
    ) -> Result<Self> {
        let n = nodes.len();
        if weights.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: weights.len() });
        }
        let rows: Vec<Vec<Complex64>> = (0..n)
            .into_par_iter()
            .map(|i| (0..n).map(|j| kernel(&nodes[i], &nodes[j]).map(|k| k * (weights[i] * weights[j]).sqrt())).collect())
            .collect::<Vec<Vec<Result<Complex64>>>>()
            .into_iter()
            .map(|r| r.into_iter().collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        let eig = m.symmetric_eigen();
        let mut eigenvalues = Vec::with_capacity(n);
        for &l in eig.eigenvalues.iter() {
            if !(-EIGENVALUE_TOL..=1.0 + EIGENVALUE_TOL).contains(&l) {
                return Err(Error::Discretization { eigenvalue: l });
            }
            eigenvalues.push(l.clamp(0.0, 1.0));
        }
        Ok(DppSampler { dim, nodes, eigenvalues, eigenvectors: eig.eigenvectors })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    /// `Σ λ_i`, the expected number of points.
    pub fn expected_count(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    /// `Σ λ_i (1 − λ_i)`, the variance of the number of points.
    pub fn count_variance(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l * (1.0 - l)).sum()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Configuration {
        let n = self.nodes.len();
        let mut cols: Vec<Vec<Complex64>> = self
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|&(_, &l)| rng.random::<f64>() < l)
            .map(|(k, _)| self.eigenvectors.column(k).iter().copied().collect())
            .collect();
        let mut chosen = Vec::with_capacity(cols.len());
        while !cols.is_empty() {
            let probs: Vec<f64> = (0..n).map(|j| cols.iter().map(|c| c[j].norm_sqr()).sum()).collect();
            let total: f64 = probs.iter().sum();
            let mut u = rng.random::<f64>() * total;
            let mut j = n - 1;
            for (i, &p) in probs.iter().enumerate() {
                if u < p {
                    j = i;
                    break;
                }
                u -= p;
            }
            chosen.push(j);
            // Eliminate coordinate j from the span, dropping one dimension.
            let pivot = (0..cols.len())
                .max_by(|&a, &b| cols[a][j].norm_sqr().total_cmp(&cols[b][j].norm_sqr()))
                .expect("non-empty");
            let p = cols.swap_remove(pivot);
            for c in cols.iter_mut() {
                let f = c[j] / p[j];
                for (ci, pi) in c.iter_mut().zip(&p) {
                    *ci -= f * pi;
                }
                c[j] = Complex64::new(0.0, 0.0);
            }
            orthonormalize(&mut cols);
        }
        chosen.sort_unstable();
        let pts: Vec<Point> = chosen.iter().map(|&j| self.nodes[j]).collect();
        Configuration::from_points(self.dim, &pts).expect("nodes are finite and match the dimension")
    }

    /// `count` samples on independent streams of `seed`, in stream order.
    pub fn ensemble(&self, count: usize, seed: u64) -> Vec<Configuration> {
        (0..count).into_par_iter().map(|i| self.sample(&mut rng::stream(seed, i as u64))).collect()
    }
}

/// Modified Gram–Schmidt on column vectors.
fn orthonormalize(cols: &mut [Vec<Complex64>]) {
    for k in 0..cols.len() {
        let (done, rest) = cols.split_at_mut(k);
        let c = &mut rest[0];
        for q in done.iter() {
            let dot: Complex64 = q.iter().zip(c.iter()).map(|(a, b)| a.conj() * b).sum();
            for (ci, qi) in c.iter_mut().zip(q) {
                *ci -= dot * qi;
            }
        }
        let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for ci in c.iter_mut() {
            *ci /= norm;
        }
    }
}

/// One sample of `model` on the configured window.
pub fn dpp_sample(model: &KernelModel, cfg: &DppSampleConfig) -> Result<Configuration> {
    Ok(DppSampler::new(model, cfg)?.sample(&mut rng::from_seed(cfg.seed)))
}

/// Poisson process of the given intensity on `[a, b]`, sorted.
pub fn poisson_interval<R: Rng + ?Sized>(intensity: f64, a: f64, b: f64, rng: &mut R) -> Result<Configuration> {
    if !(intensity >= 0.0) || !(b > a) {
        return Err(Error::invalid("intensity", format!("need intensity ≥ 0 and a < b, got {intensity} on [{a}, {b}]")));
    }
    let mean = intensity * (b - a);
    let count = if mean > 0.0 { Poisson::new(mean).expect("positive mean").sample(rng) as usize } else { 0 };
    let mut xs: Vec<f64> = (0..count).map(|_| rng.random_range(a..b)).collect();
    xs.sort_by(f64::total_cmp);
    Configuration::from_1d(xs)
}
