//! Correlation kernels of the determinantal point processes and the special
//! functions they are built from.

pub mod airy;
pub mod bessel;
pub mod pearcey;
pub mod resolvent;
pub mod tacnode;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::configuration::{Dim, Point};
use crate::error::{Error, Result};

pub use airy::airy;
pub use bessel::bessel_j;
pub use pearcey::{pearcey_pq, pearcey_pq_with, PearceyQuadrature, PearceyValues};
pub use resolvent::{nystrom_resolvent, ResolventOperator};
pub use tacnode::{tacnode_kernel, TacnodeKernel, TacnodeTerms};

/// Below this separation difference quotients are replaced by their expansion
/// about the diagonal.
pub const DIAGONAL_SWITCH: f64 = 1e-6;

/// Which kernel to evaluate, with its parameters.
#[derive(Debug, Clone)]
pub enum KernelModel {
    /// `sin(x−y) / (π(x−y))`
    Sine,
    /// `(Ai(x)Ai'(y) − Ai'(x)Ai(y)) / (x−y)`
    Airy,
    /// Hard-edge kernel on `[0, ∞)`.
    Bessel { alpha: f64 },
    /// `(1/π) e^{−|x|²/2 − |y|²/2 + x·ȳ}` on ℂ ≅ ℝ².
    Ginibre,
    /// `(P(x)Q''(y) − P'(x)Q'(y) + P''(x)Q(y)) / (x−y)`. With the contour
    /// orientation used for `P`, the diagonal is the negative of the one-point density.
    Pearcey { quadrature: PearceyQuadrature },
    Tacnode(Arc<TacnodeKernel>),
}

impl fmt::Display for KernelModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelModel::Sine => write!(f, "sine"),
            KernelModel::Airy => write!(f, "airy"),
            KernelModel::Bessel { alpha } => write!(f, "bessel(alpha={alpha})"),
            KernelModel::Ginibre => write!(f, "ginibre"),
            KernelModel::Pearcey { .. } => write!(f, "pearcey"),
            KernelModel::Tacnode(_) => write!(f, "tacnode"),
        }
    }
}

impl KernelModel {
    pub fn bessel(alpha: f64) -> Result<Self> {
        if !(alpha >= 1.0) || !alpha.is_finite() {
            return Err(Error::invalid("alpha", format!("must be a finite number ≥ 1, got {alpha}")));
        }
        Ok(KernelModel::Bessel { alpha })
    }

    pub fn pearcey() -> Self {
        KernelModel::Pearcey { quadrature: PearceyQuadrature::default() }
    }

    /// Tacnode kernel with a fresh resolvent on `[0, l]` with `n` nodes.
    pub fn tacnode(l: f64, n: usize) -> Result<Self> {
        Ok(KernelModel::Tacnode(Arc::new(TacnodeKernel::new(Arc::new(nystrom_resolvent(l, n)?)))))
    }

    pub fn dim(&self) -> Dim {
        match self {
            KernelModel::Ginibre => Dim::Two,
            _ => Dim::One,
        }
    }

    /// Whether `K(x,y) = conj(K(y,x))` holds identically.
    pub fn is_hermitian(&self) -> bool {
        matches!(self, KernelModel::Sine | KernelModel::Airy | KernelModel::Bessel { .. } | KernelModel::Ginibre)
    }

    /// `K(x, y)`; real-valued variants have zero imaginary part.
    pub fn eval(&self, x: &Point, y: &Point) -> Result<Complex64> {
        if x.dim() != self.dim() || y.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim().n(), got: x.dim().n().max(y.dim().n()) });
        }
        if let KernelModel::Ginibre = self {
            return ginibre(x, y);
        }
        self.eval_real(x.x(), y.x()).map(Complex64::from)
    }

    /// `K(x, y)` for the variants on (subsets of) ℝ.
    pub fn eval_real(&self, x: f64, y: f64) -> Result<f64> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::Domain(format!("non-finite argument ({x}, {y})")));
        }
        match self {
            KernelModel::Sine => Ok(symmetric(x, y, sine, |_| 1.0 / PI)),
            KernelModel::Airy => {
                check_airy(x)?;
                check_airy(y)?;
                Ok(airy_kernel(x, y))
            }
            KernelModel::Bessel { alpha } => {
                if x < 0.0 || y < 0.0 {
                    return Err(Error::Domain(format!("Bessel kernel is defined on [0, ∞), got ({x}, {y})")));
                }
                let a = *alpha;
                Ok(symmetric(x, y, |x, y| bessel_off_diagonal(a, x, y), |m| bessel_diagonal(a, m)))
            }
            KernelModel::Ginibre => Err(Error::DimensionMismatch { expected: 2, got: 1 }),
            KernelModel::Pearcey { quadrature } => pearcey_kernel(x, y, *quadrature),
            KernelModel::Tacnode(k) => k.eval(x, y),
        }
    }

    /// `K(x, x)`.
    pub fn diagonal(&self, x: &Point) -> Result<f64> {
        Ok(self.eval(x, x)?.re)
    }
}

/// `K(x, y)` for a kernel model.
pub fn kernel_eval(model: &KernelModel, x: &Point, y: &Point) -> Result<Complex64> {
    model.eval(x, y)
}

/// Symmetric difference-quotient kernels: the closed form away from the
/// diagonal, the diagonal value at the midpoint within [`DIAGONAL_SWITCH`]
/// (exact to first order since `K(m+h, m−h) = K(m,m) + O(h²)`).
fn symmetric(x: f64, y: f64, off: impl Fn(f64, f64) -> f64, diag: impl Fn(f64) -> f64) -> f64 {
    if (x - y).abs() < DIAGONAL_SWITCH {
        diag(0.5 * (x + y))
    } else {
        off(x, y)
    }
}

fn sine(x: f64, y: f64) -> f64 {
    (x - y).sin() / (PI * (x - y))
}

fn check_airy(x: f64) -> Result<()> {
    if x < airy::AIRY_RANGE.0 {
        return Err(Error::OutOfRange { function: "airy", x });
    }
    Ok(())
}

/// The Airy kernel for `x, y ≥ −200`; beyond `+20` the asymptotic Airy values are used.
pub(crate) fn airy_kernel(x: f64, y: f64) -> f64 {
    symmetric(
        x,
        y,
        |x, y| {
            let (ax, dx) = airy::airy_unchecked(x);
            let (ay, dy) = airy::airy_unchecked(y);
            (ax * dy - dx * ay) / (x - y)
        },
        |m| {
            let (a, d) = airy::airy_unchecked(m);
            d * d - m * a * a
        },
    )
}

fn bessel_off_diagonal(alpha: f64, x: f64, y: f64) -> f64 {
    let (sx, sy) = (x.sqrt(), y.sqrt());
    let (jx, dx) = bessel_pair(alpha, sx);
    let (jy, dy) = bessel_pair(alpha, sy);
    (jx * sy * dy - sx * dx * jy) / (2.0 * (x - y))
}

/// `(J_α(√x)² − J_{α+1}(√x) J_{α−1}(√x)) / 4`.
fn bessel_diagonal(alpha: f64, x: f64) -> f64 {
    let s = x.max(0.0).sqrt();
    let j = bessel::bessel_j_value(alpha, s);
    (j * j - bessel::bessel_j_value(alpha + 1.0, s) * bessel::bessel_j_value(alpha - 1.0, s)) / 4.0
}

fn bessel_pair(alpha: f64, s: f64) -> (f64, f64) {
    let j = bessel::bessel_j_value(alpha, s);
    let d = 0.5 * (bessel::bessel_j_value(alpha - 1.0, s) - bessel::bessel_j_value(alpha + 1.0, s));
    (j, d)
}

fn ginibre(x: &Point, y: &Point) -> Result<Complex64> {
    let (zx, zy) = (Complex64::new(x.x(), x.y()), Complex64::new(y.x(), y.y()));
    if !zx.is_finite() || !zy.is_finite() {
        return Err(Error::Domain("non-finite argument".into()));
    }
    let e = -0.5 * zx.norm_sqr() - 0.5 * zy.norm_sqr() + zx * zy.conj();
    Ok(e.exp() / PI)
}

fn pearcey_kernel(x: f64, y: f64, quad: PearceyQuadrature) -> Result<f64> {
    let v = pearcey_pq_with(x, y, quad)?;
    let ([p, dp, d2p], [q, dq, d2q]) = (v.p, v.q);
    if (x - y).abs() >= DIAGONAL_SWITCH {
        return Ok((p * d2q - dp * dq + d2p * q) / (x - y));
    }
    // N(x,y) = P(x)Q''(y) − P'(x)Q'(y) + P''(x)Q(y) vanishes at y = x (Q''' = yQ,
    // P''' = −xP), so K ≈ −[∂_y N + ∂_y² N·(y−x)/2] with derivatives at y = x.
    let v = pearcey_pq_with(x, x, quad)?;
    let ([p, dp, d2p], [q, dq, d2q]) = (v.p, v.q);
    let dn = x * p * q - dp * d2q + d2p * dq;
    let d2n = p * (q + x * dq) - dp * x * q + d2p * d2q;
    Ok(-(dn + 0.5 * d2n * (y - x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};

    fn p1(x: f64) -> Point {
        Point::d1(x)
    }

    #[test]
    fn sine_values() {
        let k = KernelModel::Sine;
        assert!((k.eval_real(0.7, 0.7).unwrap() - 1.0 / PI).abs() < 1e-10);
        assert!(k.eval_real(0.0, PI).unwrap().abs() < 1e-16);
        let near = k.eval_real(1.0, 1.0 + 1e-7).unwrap();
        assert!((near - 1.0 / PI).abs() < 1e-13);
    }

    #[test]
    fn ginibre_diagonal_is_one_over_pi() {
        let k = KernelModel::Ginibre;
        for (a, b) in [(0.0, 0.0), (1.3, -2.0), (-4.0, 0.5)] {
            let z = k.eval(&Point::d2(a, b), &Point::d2(a, b)).unwrap();
            assert!((z.re - 1.0 / PI).abs() < 1e-15 && z.im.abs() < 1e-15);
        }
    }

    #[test]
    fn airy_diagonal_limit_and_bulk_asymptotics() {
        let k = KernelModel::Airy;
        for x in [-10.0, -2.0, 0.0, 1.5, 4.0] {
            let h = 1e-4;
            let limit = k.eval_real(x - h / 2.0, x + h / 2.0).unwrap();
            let diag = k.eval_real(x, x).unwrap();
            assert!((limit - diag).abs() < 1e-6, "x={x}: {limit} vs {diag}");
        }
        let ratio = k.eval_real(-40.0, -40.0).unwrap() * PI / 40f64.sqrt();
        assert!((0.98..=1.02).contains(&ratio), "{ratio}");
    }

    #[test]
    fn bessel_diagonal_matches_limit() {
        let k = KernelModel::bessel(2.0).unwrap();
        for x in [0.5, 3.0, 20.0, 150.0] {
            let h = 1e-4;
            let limit = k.eval_real(x - h / 2.0, x + h / 2.0).unwrap();
            let diag = k.eval_real(x, x).unwrap();
            assert!((limit - diag).abs() < 1e-7, "x={x}: {limit} vs {diag}");
            assert!(diag > 0.0);
        }
        assert!(k.eval_real(-1.0, 1.0).is_err());
        assert!(KernelModel::bessel(0.5).is_err());
    }

    #[test]
    fn pearcey_near_diagonal_is_continuous() {
        let k = KernelModel::pearcey();
        for x in [-2.0, 0.0, 0.8, 3.0] {
            let inside = k.eval_real(x, x + 0.9e-6).unwrap();
            let outside = k.eval_real(x, x + 1.1e-6).unwrap();
            assert!((inside - outside).abs() < 1e-7, "x={x}: {inside} vs {outside}");
            let far = k.eval_real(x, x + 1e-3).unwrap();
            let expansion = {
                let d = k.eval_real(x, x).unwrap();
                let d2 = k.eval_real(x, x + 1e-7).unwrap();
                d + (d2 - d) / 1e-7 * 1e-3
            };
            assert!((far - expansion).abs() < 1e-5);
        }
    }

    #[test]
    fn pearcey_diagonal_magnitude_matches_growth() {
        // |K(x,x)| ~ (√3/2π)·|x|^{1/3} for large |x|.
        let k = KernelModel::pearcey();
        let v = k.eval_real(5.0, 5.0).unwrap();
        let approx = 3f64.sqrt() / (2.0 * PI) * 5f64.cbrt();
        assert!(v < 0.0 && (v.abs() / approx - 1.0).abs() < 0.05, "{v} vs {approx}");
    }

    #[test]
    fn hermitian_on_random_pairs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let models = [KernelModel::Sine, KernelModel::Airy, KernelModel::bessel(1.5).unwrap(), KernelModel::Ginibre];
        for k in &models {
            for _ in 0..1000 {
                let (x, y) = match k {
                    KernelModel::Ginibre => (
                        Point::d2(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)),
                        Point::d2(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)),
                    ),
                    KernelModel::Bessel { .. } => (p1(rng.random_range(0.0..50.0)), p1(rng.random_range(0.0..50.0))),
                    _ => (p1(rng.random_range(-15.0..5.0)), p1(rng.random_range(-15.0..5.0))),
                };
                let (a, b) = (k.eval(&x, &y).unwrap(), k.eval(&y, &x).unwrap());
                assert!((a - b.conj()).norm() < 1e-12 * a.norm().max(1.0), "{k}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn gram_matrices_are_positive_semidefinite() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let models = [KernelModel::Sine, KernelModel::Airy, KernelModel::bessel(3.0).unwrap(), KernelModel::Ginibre];
        for k in &models {
            let pts: Vec<Point> = (0..25)
                .map(|_| match k {
                    KernelModel::Ginibre => Point::d2(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
                    KernelModel::Bessel { .. } => p1(rng.random_range(0.0..40.0)),
                    _ => p1(rng.random_range(-8.0..3.0)),
                })
                .collect();
            let g = DMatrix::from_fn(25, 25, |i, j| k.eval(&pts[i], &pts[j]).unwrap());
            let min = g.symmetric_eigenvalues().min();
            assert!(min > -1e-8, "{k}: {min}");
        }
    }

    #[test]
    fn tacnode_through_the_model() {
        let k = KernelModel::tacnode(8.0, 24).unwrap();
        let a = k.eval_real(0.4, -0.9).unwrap();
        let b = k.eval_real(-0.4, 0.9).unwrap();
        assert!((a - b).abs() < 1e-13);
        assert!(!k.is_hermitian());
    }

    #[test]
    fn domain_errors() {
        assert!(KernelModel::Sine.eval(&Point::d2(0.0, 0.0), &p1(0.0)).is_err());
        assert!(KernelModel::Ginibre.eval_real(0.0, 0.0).is_err());
        assert!(KernelModel::Airy.eval_real(-300.0, 0.0).is_err());
        assert!(KernelModel::Sine.eval_real(f64::NAN, 0.0).is_err());
    }
}
