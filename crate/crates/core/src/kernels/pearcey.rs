//! Pearcey integrals and their derivatives.
//!
//! `Q(y) = −(1/2π) ∫_ℝ e^{−s⁴/4 − isy} ds` and
//! `P(x) = (1/2πi) ∫_C e^{t⁴/4 + tx} dt`, where `C` consists of the rays from
//! `±∞e^{iπ/4}` to 0 and from 0 to `±∞e^{−iπ/4}`. Both are computed by
//! Gauss–Legendre quadrature, truncated where the integrand has decayed below
//! `e^{−42}`. Derivatives differentiate under the integral sign.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::QuadratureGrid;

/// Panel layout used for each half-line integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PearceyQuadrature {
    pub panels: usize,
    pub per_panel: usize,
}

impl Default for PearceyQuadrature {
    fn default() -> Self {
        PearceyQuadrature { panels: 8, per_panel: 20 }
    }
}

impl PearceyQuadrature {
    /// The same rule with twice as many panels.
    pub fn refined(self) -> Self {
        PearceyQuadrature { panels: 2 * self.panels, ..self }
    }

    fn validate(&self) -> Result<()> {
        if self.panels == 0 || self.per_panel == 0 {
            return Err(Error::invalid("quadrature", "panels and nodes per panel must be positive"));
        }
        Ok(())
    }
}

/// `P, P', P''` at `x` and `Q, Q', Q''` at `y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PearceyValues {
    pub p: [f64; 3],
    pub q: [f64; 3],
}

/// Largest supported `|x|`, `|y|`.
pub const PEARCEY_RANGE: f64 = 50.0;

const LOG_CUTOFF: f64 = 42.0;

fn check(name: &'static str, t: f64) -> Result<()> {
    if !t.is_finite() || t.abs() > PEARCEY_RANGE {
        return Err(Error::invalid(name, format!("must be finite with |{name}| ≤ {PEARCEY_RANGE}, got {t}")));
    }
    Ok(())
}

/// `(P, P', P'')(x)` and `(Q, Q', Q'')(y)` with the default quadrature.
pub fn pearcey_pq(x: f64, y: f64) -> Result<PearceyValues> {
    pearcey_pq_with(x, y, PearceyQuadrature::default())
}

pub fn pearcey_pq_with(x: f64, y: f64, quad: PearceyQuadrature) -> Result<PearceyValues> {
    check("x", x)?;
    check("y", y)?;
    quad.validate()?;
    let mut p = [0.0; 3];
    let mut q = [0.0; 3];
    for k in 0..3 {
        p[k] = pearcey_p_derivative(x, k as u32, quad);
        q[k] = pearcey_q_derivative(y, k as u32, quad);
    }
    Ok(PearceyValues { p, q })
}

/// `Q^{(k)}(y) = −(1/π) ∫_0^∞ e^{−s⁴/4} Re[(−is)^k e^{−isy}] ds`.
pub(crate) fn pearcey_q_derivative(y: f64, k: u32, quad: PearceyQuadrature) -> f64 {
    let upper = cutoff(0.0, k);
    let grid = QuadratureGrid::composite(0.0, upper, quad.panels, quad.per_panel);
    let mi = Complex64::new(0.0, -1.0);
    let v = grid.integrate(|s| ((mi * s).powu(k) * Complex64::from_polar(1.0, -s * y)).re * (-s.powi(4) / 4.0).exp());
    -v / PI
}

/// `P^{(k)}(x) = (1/2πi) ∫_C t^k e^{t⁴/4 + tx} dt`; on the rays `t⁴ = −r⁴`.
pub(crate) fn pearcey_p_derivative(x: f64, k: u32, quad: PearceyQuadrature) -> f64 {
    let upper = cutoff(x.abs() * FRAC_PI_4.cos(), k);
    let grid = QuadratureGrid::composite(0.0, upper, quad.panels, quad.per_panel);
    // Rays t = r·e^{iθ} with orientation: inward from ∞e^{iπ/4} and ∞e^{−3iπ/4},
    // outward to ∞e^{−iπ/4} and ∞e^{3iπ/4}.
    let rays = [
        (FRAC_PI_4, -1.0),
        (-3.0 * FRAC_PI_4, -1.0),
        (-FRAC_PI_4, 1.0),
        (3.0 * FRAC_PI_4, 1.0),
    ];
    let mut total = Complex64::new(0.0, 0.0);
    for (theta, orientation) in rays {
        let e = Complex64::from_polar(1.0, theta);
        let mut acc = Complex64::new(0.0, 0.0);
        for (&r, &w) in grid.nodes.iter().zip(&grid.weights) {
            let t = e * r;
            acc += w * t.powu(k) * (t.powu(4) / 4.0 + t * x).exp();
        }
        total += orientation * e * acc;
    }
    (total / Complex64::new(0.0, 2.0 * PI)).re
}

/// Radius beyond which `r^k e^{−r⁴/4 + r·growth}` is below `e^{−LOG_CUTOFF}`.
fn cutoff(growth: f64, k: u32) -> f64 {
    let mut r: f64 = 2.0;
    while r.powi(4) / 4.0 - r * growth - k as f64 * r.ln() < LOG_CUTOFF {
        r += 0.25;
    }
    r
}
