//! Metropolis sampling of the finite-N log-gas.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::configuration::LabeledState;
use crate::error::{Error, Result};
use crate::rng;

/// Chain length parameters. `steps`, `burn_in` and `thinning` count sweeps of
/// N single-coordinate proposals.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct McmcConfig {
    pub steps: usize,
    pub burn_in: usize,
    pub thinning: usize,
    /// Initial standard deviation of the Gaussian proposal; tuned during burn-in.
    pub proposal_scale: f64,
    pub seed: u64,
    /// Keep a log of the first `record_moves` post-burn-in proposals.
    #[serde(default)]
    pub record_moves: usize,
}

impl McmcConfig {
    pub fn validate(&self) -> Result<()> {
        if self.steps <= self.burn_in {
            return Err(Error::invalid("steps", "must exceed burn_in"));
        }
        if self.thinning == 0 {
            return Err(Error::invalid("thinning", "must be positive"));
        }
        if !(self.proposal_scale > 0.0) {
            return Err(Error::invalid("proposal_scale", "must be positive"));
        }
        Ok(())
    }
}

/// The log-gas density with the pair interaction scaled by `coupling`.
#[derive(Debug, Clone, Copy)]
pub struct GibbsTarget {
    pub n: usize,
    pub beta: f64,
    pub coupling: f64,
}

/// One logged Metropolis decision.
#[derive(Debug, Clone, Serialize)]
pub struct MoveRecord {
    pub particle: usize,
    pub before: Vec<f64>,
    pub proposal: f64,
    pub log_ratio: f64,
    pub uniform: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct McmcRun {
    pub states: Vec<LabeledState>,
    /// Acceptance rate after burn-in.
    pub acceptance_rate: f64,
    /// Proposal scale fixed at the end of burn-in.
    pub proposal_scale: f64,
    pub moves: Vec<MoveRecord>,
}

/// A single-coordinate random-walk Metropolis chain.
pub struct McmcChain {
    target: GibbsTarget,
    xs: Vec<f64>,
    scale: f64,
    rng: rng::Rng,
    proposed: u64,
    accepted: u64,
    record: usize,
    moves: Vec<MoveRecord>,
}

impl McmcChain {
    pub fn new(target: GibbsTarget, cfg: &McmcConfig) -> Self {
        let n = target.n;
        // Start from semicircle quantiles of the right width.
        let radius = (2.0 * n as f64 * target.coupling.sqrt()).max((2.0 * n as f64 / target.beta).sqrt());
        let xs = (0..n)
            .map(|i| {
                let u = (i as f64 + 0.5) / n as f64;
                radius * semicircle_quantile(u)
            })
            .collect();
        McmcChain {
            target,
            xs,
            scale: cfg.proposal_scale,
            rng: rng::from_seed(cfg.seed),
            proposed: 0,
            accepted: 0,
            record: 0,
            moves: Vec::new(),
        }
    }

    pub fn state(&self) -> &[f64] {
        &self.xs
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Change in log-density when particle `j` moves to `y`.
    fn log_ratio(&self, j: usize, y: f64) -> f64 {
        let t = &self.target;
        let x = self.xs[j];
        let mut pair = 0.0;
        if t.coupling != 0.0 {
            for (k, &xk) in self.xs.iter().enumerate() {
                if k != j {
                    pair += ((y - xk).abs() / (x - xk).abs()).ln();
                }
            }
        }
        t.coupling * t.beta * pair - t.beta / (4.0 * t.n as f64) * (y * y - x * x)
    }

    fn step(&mut self) {
        let n = self.target.n;
        let j = self.rng.random_range(0..n);
        let z: f64 = self.rng.sample(StandardNormal);
        let y = self.xs[j] + self.scale * z;
        let lr = self.log_ratio(j, y);
        let u: f64 = self.rng.random();
        // NaN (coincident points) compares false and is rejected.
        let accept = lr >= 0.0 || u < lr.exp();
        if self.record > 0 {
            self.record -= 1;
            self.moves.push(MoveRecord {
                particle: j,
                before: self.xs.clone(),
                proposal: y,
                log_ratio: lr,
                uniform: u,
                accepted: accept,
            });
        }
        self.proposed += 1;
        if accept {
            self.accepted += 1;
            self.xs[j] = y;
        }
    }

    pub fn sweeps(&mut self, count: usize) {
        for _ in 0..count * self.target.n {
            self.step();
        }
    }

    /// Burn-in with proposal tuning toward 25–40 % acceptance; counters reset afterwards.
    pub fn burn_in(&mut self, sweeps: usize) {
        const BLOCK: usize = 25;
        let mut done = 0;
        while done < sweeps {
            let len = BLOCK.min(sweeps - done);
            let (p0, a0) = (self.proposed, self.accepted);
            self.sweeps(len);
            let rate = (self.accepted - a0) as f64 / (self.proposed - p0).max(1) as f64;
            if rate < 0.25 {
                self.scale *= 0.8;
            } else if rate > 0.40 {
                self.scale *= 1.25;
            }
            done += len;
        }
        self.proposed = 0;
        self.accepted = 0;
    }

    pub fn acceptance_rate(&self) -> f64 {
        self.accepted as f64 / self.proposed.max(1) as f64
    }

    fn sorted_state(&self) -> LabeledState {
        let mut v = self.xs.clone();
        v.sort_by(f64::total_cmp);
        LabeledState::from_parts(crate::Dim::One, v, crate::LabelMode::Increasing, None)
    }
}

fn semicircle_quantile(u: f64) -> f64 {
    // Invert F(s) = 1/2 + (s√(1−s²) + asin s)/π on [−1, 1] by bisection.
    let f = |s: f64| 0.5 + (s * (1.0 - s * s).sqrt() + s.asin()) / std::f64::consts::PI;
    let (mut lo, mut hi) = (-1.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Samples the finite-N log-gas density `h_N(x)^β e^{−β|x|²/(4N)}`.
///
/// Emits `(steps − burn_in) / thinning` ordered states.
pub fn mcmc_gibbs(n: usize, beta: f64, cfg: &McmcConfig) -> Result<McmcRun> {
    if n == 0 {
        return Err(Error::invalid("n", "must be positive"));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::invalid("beta", format!("must be positive, got {beta}")));
    }
    cfg.validate()?;
    let mut chain = McmcChain::new(GibbsTarget { n, beta, coupling: 1.0 }, cfg);
    chain.burn_in(cfg.burn_in);
    chain.record = cfg.record_moves;
    let count = (cfg.steps - cfg.burn_in) / cfg.thinning;
    let mut states = Vec::with_capacity(count);
    for _ in 0..count {
        chain.sweeps(cfg.thinning);
        states.push(chain.sorted_state());
    }
    Ok(McmcRun {
        states,
        acceptance_rate: chain.acceptance_rate(),
        proposal_scale: chain.scale,
        moves: std::mem::take(&mut chain.moves),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::log_density;

    fn mean_var(v: &[f64]) -> (f64, f64) {
        let n = v.len() as f64;
        let m = v.iter().sum::<f64>() / n;
        (m, v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0))
    }

    #[test]
    fn single_particle_is_gaussian() {
        // N = 1: density e^{−βx²/4}, variance 2/β.
        for beta in [1.0, 2.0, 4.0] {
            let cfg = McmcConfig { steps: 200_500, burn_in: 500, thinning: 20, proposal_scale: 1.0, seed: 3, record_moves: 0 };
            let run = mcmc_gibbs(1, beta, &cfg).unwrap();
            let xs: Vec<f64> = run.states.iter().map(|s| s.coords()[0]).collect();
            let sq: Vec<f64> = xs.iter().map(|x| x * x).collect();
            let (m2, v2) = mean_var(&sq);
            let se = (v2 / sq.len() as f64).sqrt();
            assert!((m2 - 2.0 / beta).abs() < 3.0 * se, "beta={beta}: {m2} ± {se}");
            assert!(run.acceptance_rate > 0.2);
        }
    }

    #[test]
    fn two_particle_gap_matches_rejection_oracle() {
        // Oracle: draw (x1, x2) i.i.d. from N(0, 2N/β) = N(0, 2) and accept with
        // probability |x1 − x2|^β / M, which leaves exactly the density
        // |x1 − x2|^2 e^{−(x1² + x2²)/4}. The gap d = x1 − x2 ~ N(0, 4).
        // We bound |d|^2 by truncating at |d| ≤ 16 (mass beyond is < 1e−15).
        use rand_distr::{Distribution, Normal};
        let mut rng = rng::from_seed(99);
        let normal = Normal::new(0.0, 2f64.sqrt()).unwrap();
        let mut gaps = Vec::new();
        while gaps.len() < 1_000_000 {
            let (a, b) = (normal.sample(&mut rng), normal.sample(&mut rng));
            let d: f64 = a - b;
            if d.abs() <= 16.0 && rng.random::<f64>() < d * d / 256.0 {
                gaps.push(d * d);
            }
        }
        let (om, ov) = mean_var(&gaps);
        let ose = (ov / gaps.len() as f64).sqrt();

        let cfg = McmcConfig { steps: 400_200, burn_in: 200, thinning: 4, proposal_scale: 1.0, seed: 5, record_moves: 0 };
        let run = mcmc_gibbs(2, 2.0, &cfg).unwrap();
        let g: Vec<f64> = run.states.iter().map(|s| (s.coords()[1] - s.coords()[0]).powi(2)).collect();
        // Batch means for the autocorrelated chain.
        let batches: Vec<f64> = g.chunks(1000).map(|c| c.iter().sum::<f64>() / c.len() as f64).collect();
        let (bm, bv) = mean_var(&batches);
        let se = (bv / batches.len() as f64).sqrt();
        let z = (bm - om) / (se * se + ose * ose).sqrt();
        assert!(z.abs() < 3.0, "mcmc {bm} ± {se}, oracle {om} ± {ose}");
        // Analytic value of the same quantity: E[d^4]/E[d^2] with d ~ N(0, 4) is 3·16/4 = 12.
        assert!((om - 12.0).abs() < 3.0 * ose);
    }

    #[test]
    fn logged_decisions_use_density_ratio_only() {
        let cfg = McmcConfig { steps: 20, burn_in: 10, thinning: 1, proposal_scale: 0.7, seed: 8, record_moves: 500 };
        let run = mcmc_gibbs(5, 2.0, &cfg).unwrap();
        assert!(!run.moves.is_empty());
        for m in &run.moves {
            let mut after = m.before.clone();
            after[m.particle] = m.proposal;
            let direct = log_density(&after, 2.0, 1.0) - log_density(&m.before, 2.0, 1.0);
            assert!((direct - m.log_ratio).abs() < 1e-9 * direct.abs().max(1.0));
            assert_eq!(m.accepted, m.log_ratio >= 0.0 || m.uniform < m.log_ratio.exp());
        }
    }

    #[test]
    fn outputs_are_ordered_and_finite() {
        let cfg = McmcConfig { steps: 1100, burn_in: 100, thinning: 10, proposal_scale: 1.0, seed: 2, record_moves: 0 };
        let run = mcmc_gibbs(12, 1.0, &cfg).unwrap();
        assert_eq!(run.states.len(), 100);
        for s in &run.states {
            assert!(s.coords().windows(2).all(|w| w[0] < w[1]));
            assert!(crate::potentials::log_vandermonde(s.coords()).is_finite());
        }
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = McmcConfig { steps: 10, burn_in: 10, thinning: 1, proposal_scale: 1.0, seed: 0, record_moves: 0 };
        assert!(mcmc_gibbs(3, 2.0, &cfg).is_err());
        let cfg = McmcConfig { steps: 20, ..cfg };
        assert!(mcmc_gibbs(3, -1.0, &cfg).is_err());
        assert!(mcmc_gibbs(0, 1.0, &cfg).is_err());
    }
}
