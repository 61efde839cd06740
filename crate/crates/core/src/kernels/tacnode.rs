//! Tacnode kernel `K_tac(x,y) = L(x,y) + L(−x,−y)` with
//!
//! ```text
//! L(x,y) = K_Ai(x,y)
//!        + c ∫∫ Ai(y + c u) R(u,v) Ai(x + c v)
//!        − c ∫∫ Ai(−y + c u) Ai(u + v) Ai(x + c v)
//!        − c ∫∫∫ Ai(−y + c u) R(u,v) Ai(v + w) Ai(x + c w),     c = 2^{1/3},
//! ```
//!
//! all integrals over `(0, L)` on the resolvent's own grid.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::airy::airy_unchecked;
use super::airy_kernel;
use super::resolvent::ResolventOperator;
use crate::error::{Error, Result};

/// Largest supported `|x|`, `|y|`.
pub const TACNODE_RANGE: f64 = 50.0;

/// Which correction terms of `L` to include.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TacnodeTerms {
    pub resolvent: bool,
    pub airy_product: bool,
    pub triple: bool,
}

impl Default for TacnodeTerms {
    fn default() -> Self {
        TacnodeTerms { resolvent: true, airy_product: true, triple: true }
    }
}

impl TacnodeTerms {
    pub fn none() -> Self {
        TacnodeTerms { resolvent: false, airy_product: false, triple: false }
    }
}

/// Tacnode kernel bound to a resolvent, with the `x`-independent matrices precomputed.
#[derive(Debug, Clone)]
pub struct TacnodeKernel {
    resolvent: Arc<ResolventOperator>,
    terms: TacnodeTerms,
    /// `W R W`
    wrw: DMatrix<f64>,
    /// `W A W`, `A_ij = Ai(u_i + u_j)`
    waw: DMatrix<f64>,
    /// `W R W A W`
    wrwaw: DMatrix<f64>,
}

fn c() -> f64 {
    2f64.cbrt()
}

impl TacnodeKernel {
    pub fn new(resolvent: Arc<ResolventOperator>) -> Self {
        Self::with_terms(resolvent, TacnodeTerms::default())
    }

    pub fn with_terms(resolvent: Arc<ResolventOperator>, terms: TacnodeTerms) -> Self {
        let (u, w) = (&resolvent.grid.nodes, &resolvent.grid.weights);
        let n = u.len();
        let wrw = DMatrix::from_fn(n, n, |i, j| w[i] * resolvent.resolvent[(i, j)] * w[j]);
        let waw = DMatrix::from_fn(n, n, |i, j| w[i] * airy_unchecked(u[i] + u[j]).0 * w[j]);
        let a = DMatrix::from_fn(n, n, |i, j| airy_unchecked(u[i] + u[j]).0);
        let wrwaw = &wrw * &a * DMatrix::from_diagonal(&DVector::from_column_slice(w));
        TacnodeKernel { resolvent, terms, wrw, waw, wrwaw }
    }

    pub fn terms(&self) -> TacnodeTerms {
        self.terms
    }

    pub fn resolvent(&self) -> &ResolventOperator {
        &self.resolvent
    }

    /// `K_tac(x, y)`.
    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        for (name, t) in [("x", x), ("y", y)] {
            if !t.is_finite() || t.abs() > TACNODE_RANGE {
                return Err(Error::invalid(name, format!("must be finite with |{name}| ≤ {TACNODE_RANGE}, got {t}")));
            }
        }
        Ok(self.half(x, y) + self.half(-x, -y))
    }

    /// `L(x, y)`.
    pub fn half(&self, x: f64, y: f64) -> f64 {
        let u = &self.resolvent.grid.nodes;
        let c = c();
        let shifted = |s: f64| DVector::from_iterator(u.len(), u.iter().map(|&ui| airy_unchecked(s + c * ui).0));
        let b = shifted(x);
        let mut total = airy_kernel(x, y);
        if self.terms.resolvent {
            total += c * shifted(y).dot(&(&self.wrw * &b));
        }
        if self.terms.airy_product || self.terms.triple {
            let a_neg = shifted(-y);
            if self.terms.airy_product {
                total -= c * a_neg.dot(&(&self.waw * &b));
            }
            if self.terms.triple {
                total -= c * a_neg.dot(&(&self.wrwaw * &b));
            }
        }
        total
    }
}

/// `K_tac(x, y)` with all terms, on the grid of `resolvent`.
pub fn tacnode_kernel(x: f64, y: f64, resolvent: Arc<ResolventOperator>) -> Result<f64> {
    TacnodeKernel::new(resolvent).eval(x, y)
}
