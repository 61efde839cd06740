//! Tridiagonal β-ensemble.
//!
//! The symmetric tridiagonal matrix with independent `N(0, 2)` diagonal and
//! `χ_{β(N−k)}` off-diagonal entries has eigenvalue density
//! `∝ |Δ(λ)|^β e^{−|λ|²/4}`. Rescaling gives exact samples of the log-gas in
//! either normalisation.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::configuration::{Dim, LabelMode, LabeledState};
use crate::error::{Error, Result};
use crate::rng;

/// Normalisation of the N-particle log-gas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnsembleScaling {
    /// `h_N^β e^{−β|x|²/(4N)}`: unit-order spacings in the bulk (density 1/π at
    /// the origin), support `[−2N, 2N]`.
    Bulk,
    /// `h_N^β e^{−β|x|²/4}`: support `[−2√N, 2√N]`, the normalisation under which
    /// `N^{1/6}(x − 2√N)` resolves the largest particles.
    Edge,
}

impl EnsembleScaling {
    pub fn semicircle_radius(self, n: usize) -> f64 {
        match self {
            EnsembleScaling::Bulk => 2.0 * n as f64,
            EnsembleScaling::Edge => 2.0 * (n as f64).sqrt(),
        }
    }

    /// Factor taking eigenvalues of the unscaled tridiagonal model to this normalisation.
    fn factor(self, n: usize, beta: f64) -> f64 {
        match self {
            EnsembleScaling::Bulk => (n as f64 / beta).sqrt(),
            EnsembleScaling::Edge => 1.0 / beta.sqrt(),
        }
    }
}

/// One exact sample of the N-particle β-ensemble, strictly increasing.
pub fn tridiag_beta_sample(n: usize, beta: f64, scaling: EnsembleScaling, seed: u64) -> Result<LabeledState> {
    tridiag_sample_with(n, beta, scaling, &mut rng::from_seed(seed))
}

pub fn tridiag_sample_with<R: Rng>(n: usize, beta: f64, scaling: EnsembleScaling, rng: &mut R) -> Result<LabeledState> {
    if n == 0 {
        return Err(Error::invalid("n", "must be positive"));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::invalid("beta", format!("must be positive, got {beta}")));
    }
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let z: f64 = rng.sample(StandardNormal);
        m[(i, i)] = 2f64.sqrt() * z;
    }
    for k in 1..n {
        let chi = ChiSquared::new(beta * (n - k) as f64).expect("positive degrees of freedom");
        let v = chi.sample(rng).sqrt();
        m[(k - 1, k)] = v;
        m[(k, k - 1)] = v;
    }
    let s = scaling.factor(n, beta);
    let mut eig: Vec<f64> = m.symmetric_eigenvalues().iter().map(|l| l * s).collect();
    eig.sort_by(f64::total_cmp);
    Ok(LabeledState::from_parts(Dim::One, eig, LabelMode::Increasing, None))
}

/// `count` independent samples on per-sample streams of `seed`.
pub fn tridiag_ensemble(n: usize, beta: f64, scaling: EnsembleScaling, count: usize, seed: u64) -> Result<Vec<LabeledState>> {
    use rayon::prelude::*;
    (0..count)
        .into_par_iter()
        .map(|i| tridiag_sample_with(n, beta, scaling, &mut rng::stream(seed, i as u64)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_particle_variance_matches_gibbs() {
        // N = 1 bulk normalisation: e^{−βx²/4}, variance 2/β.
        for beta in [1.0, 2.0, 4.0] {
            let v = tridiag_ensemble(1, beta, EnsembleScaling::Bulk, 20_000, 4).unwrap();
            let sq: Vec<f64> = v.iter().map(|s| s.coords()[0].powi(2)).collect();
            let m = sq.iter().sum::<f64>() / sq.len() as f64;
            let sd = (sq.iter().map(|x| (x - m).powi(2)).sum::<f64>() / sq.len() as f64).sqrt();
            assert!((m - 2.0 / beta).abs() < 3.0 * sd / (sq.len() as f64).sqrt(), "beta={beta} m={m}");
        }
    }

    #[test]
    fn largest_eigenvalue_sits_below_the_edge() {
        let n = 50;
        let v = tridiag_ensemble(n, 2.0, EnsembleScaling::Edge, 1000, 7).unwrap();
        let mean_max = v.iter().map(|s| *s.coords().last().unwrap()).sum::<f64>() / v.len() as f64;
        assert!(mean_max < 2.0 * (n as f64).sqrt());
        assert!(mean_max > 2.0 * (n as f64).sqrt() - 1.0);
    }

    #[test]
    fn output_is_strictly_increasing() {
        for seed in 0..20 {
            let s = tridiag_beta_sample(30, 1.0 + seed as f64 * 0.2, EnsembleScaling::Bulk, seed).unwrap();
            assert!(s.coords().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn second_moment_of_both_scalings() {
        // E Σλ² for the unscaled model is 2N + βN(N−1); bulk multiplies by N/β.
        let (n, beta) = (6usize, 2.0);
        let v = tridiag_ensemble(n, beta, EnsembleScaling::Bulk, 20_000, 1).unwrap();
        let sq: Vec<f64> = v.iter().map(|s| s.coords().iter().map(|x| x * x).sum()).collect();
        let m = sq.iter().sum::<f64>() / sq.len() as f64;
        let sd = (sq.iter().map(|x| (x - m).powi(2)).sum::<f64>() / sq.len() as f64).sqrt();
        let nf = n as f64;
        let exact = (2.0 * nf + beta * nf * (nf - 1.0)) * nf / beta;
        assert!((m - exact).abs() < 3.0 * sd / (sq.len() as f64).sqrt(), "{m} vs {exact}");
    }
}
