//! Euler–Maruyama integration of the drift models with adaptive step halving.
//!
//! A proposed step is rejected and replaced by two half steps, each with fresh
//! Gaussian increments, when it would break the ordering of a 1D state, push a
//! Bessel coordinate out of `(0, ∞)`, or when `|drift|·h` exceeds half the
//! distance to the nearest neighbour (or boundary). After `max_halvings`
//! consecutive rejections, with no accepted substep in between, the run fails
//! with the offending time and state. Step sizes therefore follow the state:
//! near-collisions at small β may need substeps far below `dt · 2^{−max_halvings}`.

use std::fmt::Write as _;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::configuration::{fmt_f64, Dim, LabelMode, LabeledState, COLLISION_TOL};
use crate::drift::DriftModel;
use crate::error::{Error, Result};
use crate::potentials::GibbsModel;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    #[default]
    EulerMaruyama,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub dt: f64,
    /// Consecutive halvings allowed before a step is declared failed.
    pub max_halvings: u32,
    pub horizon: f64,
    pub scheme: Scheme,
    pub seed: u64,
    /// Record every `record_stride` base steps; the final state is always recorded.
    pub record_stride: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig { dt: 1e-3, max_halvings: 40, horizon: 1.0, scheme: Scheme::EulerMaruyama, seed: 0, record_stride: 100 }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::invalid("dt", format!("must be positive, got {}", self.dt)));
        }
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(Error::invalid("horizon", format!("must be positive, got {}", self.horizon)));
        }
        if self.record_stride == 0 {
            return Err(Error::invalid("record_stride", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathDiagnostics {
    /// Smallest distance between two particles (and, for Bessel, to the origin) over all accepted states.
    pub min_gap: f64,
    /// `substeps[d]` counts accepted steps of size `dt / 2^d`.
    pub substeps: Vec<u64>,
    pub rejections: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathRecord {
    pub times: Vec<f64>,
    pub states: Vec<LabeledState>,
    pub diagnostics: PathDiagnostics,
}

impl PathRecord {
    pub fn final_state(&self) -> &LabeledState {
        self.states.last().expect("a path record holds at least the initial state")
    }

    /// Columns `t, x_1, …, x_N` (2D: `t, x_1, y_1, …`).
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t");
        if let Some(first) = self.states.first() {
            for i in 1..=first.len() {
                match first.dim() {
                    Dim::One => write!(s, ",x_{i}"),
                    Dim::Two => write!(s, ",x_{i},y_{i}"),
                }
                .expect("writing to a String");
            }
        }
        s.push('\n');
        for (t, x) in self.times.iter().zip(&self.states) {
            s.push_str(&fmt_f64(*t));
            for v in x.coords() {
                s.push(',');
                s.push_str(&fmt_f64(*v));
            }
            s.push('\n');
        }
        s
    }
}

/// Absolute limit on halvings below the base step, whatever the streaks.
const MAX_DEPTH: u32 = 200;

struct Stepper<'a, R: Rng> {
    model: &'a DriftModel,
    window: Option<f64>,
    dim: Dim,
    max_halvings: u32,
    rng: &'a mut R,
    drift: Vec<f64>,
    proposal: Vec<f64>,
    /// Sorted environment coordinates in 1D (frozen-environment model).
    env: Vec<f64>,
    diag: PathDiagnostics,
}

impl<R: Rng> Stepper<'_, R> {
    /// Advances `x` over `[t, t + h]`. `depth` counts halvings below the base
    /// step; `streak` counts halvings since the last accepted substep, and it
    /// is the streak that `max_halvings` bounds.
    fn advance(&mut self, x: &mut Vec<f64>, t: f64, h: f64, depth: u32, streak: u32) -> Result<()> {
        let d = self.dim.n();
        self.model.drift_all_into(x, self.window, &mut self.drift)?;
        let sqrt_h = h.sqrt();
        for (p, (&xi, &b)) in self.proposal.iter_mut().zip(x.iter().zip(&self.drift)) {
            let z: f64 = self.rng.sample(StandardNormal);
            *p = xi + b * h + sqrt_h * z;
        }
        let reason = self.reject_reason(x, h, d);
        if let Some(reason) = reason {
            if streak >= self.max_halvings || depth >= MAX_DEPTH {
                return Err(Error::Integration { time: t, state: x.clone(), reason });
            }
            self.diag.rejections += 1;
            self.advance(x, t, h / 2.0, depth + 1, streak + 1)?;
            // The first half accepted at least one substep, so the streak restarts.
            return self.advance(x, t + h / 2.0, h / 2.0, depth + 1, 0);
        }
        std::mem::swap(x, &mut self.proposal);
        let depth = depth as usize;
        if self.diag.substeps.len() <= depth {
            self.diag.substeps.resize(depth + 1, 0);
        }
        self.diag.substeps[depth] += 1;
        let gap = self.nearest(x, d).into_iter().fold(f64::INFINITY, f64::min);
        self.diag.min_gap = self.diag.min_gap.min(gap);
        Ok(())
    }

    fn reject_reason(&self, x: &[f64], h: f64, d: usize) -> Option<String> {
        let n = x.len() / d;
        if !self.proposal.iter().all(|v| v.is_finite()) {
            return Some("non-finite proposal".into());
        }
        if d == 1 {
            if let Some(k) = self.proposal.windows(2).position(|w| !(w[1] - w[0] > COLLISION_TOL)) {
                return Some(format!("ordering violated between particles {k} and {}", k + 1));
            }
            for j in 0..n {
                // The proposal must stay between the same environment points.
                let before = self.env.partition_point(|&e| e < x[j]);
                let after = self.env.partition_point(|&e| e < self.proposal[j]);
                if before != after || self.env.get(after).is_some_and(|&e| e == self.proposal[j]) {
                    return Some(format!("particle {j} crossed an environment point"));
                }
            }
        } else if self.nearest(&self.proposal, d).iter().any(|&g| g < COLLISION_TOL) {
            return Some("collision".into());
        }
        if self.model.is_positive_half_line() {
            if let Some(j) = self.proposal.iter().position(|&v| !(v > 0.0)) {
                return Some(format!("particle {j} left (0, ∞)"));
            }
        }
        let nearest = self.nearest(x, d);
        for j in 0..n {
            let b = self.drift[j * d..(j + 1) * d].iter().map(|v| v * v).sum::<f64>().sqrt();
            if b * h > 0.5 * nearest[j] {
                return Some(format!("drift step of particle {j} exceeds half the distance to its nearest neighbour"));
            }
        }
        None
    }

    /// Distance from each particle to its nearest neighbour, environment point or boundary.
    fn nearest(&self, x: &[f64], d: usize) -> Vec<f64> {
        let n = x.len() / d;
        let mut out = vec![f64::INFINITY; n];
        if d == 1 {
            for j in 0..n {
                if j > 0 {
                    out[j] = out[j].min(x[j] - x[j - 1]);
                }
                if j + 1 < n {
                    out[j] = out[j].min(x[j + 1] - x[j]);
                }
                let k = self.env.partition_point(|&e| e < x[j]);
                if k > 0 {
                    out[j] = out[j].min(x[j] - self.env[k - 1]);
                }
                if k < self.env.len() {
                    out[j] = out[j].min(self.env[k] - x[j]);
                }
                if self.model.is_positive_half_line() {
                    out[j] = out[j].min(x[j]);
                }
            }
        } else {
            let env = match self.model {
                DriftModel::FrozenEnv(f) => f.env.flat(),
                _ => &[],
            };
            for j in 0..n {
                let p = &x[j * d..(j + 1) * d];
                for k in 0..n {
                    if k != j {
                        out[j] = out[j].min(crate::configuration::dist(p, &x[k * d..(k + 1) * d]));
                    }
                }
                for e in env.chunks_exact(d) {
                    out[j] = out[j].min(crate::configuration::dist(p, e));
                }
            }
        }
        out
    }
}

/// Integrates `model` from `x0` with the generator seeded by `cfg.seed`.
pub fn integrate(x0: &LabeledState, model: &DriftModel, cfg: &IntegratorConfig) -> Result<PathRecord> {
    integrate_with_rng(x0, model, cfg, &mut rng::from_seed(cfg.seed))
}

pub fn integrate_with_rng<R: Rng>(x0: &LabeledState, model: &DriftModel, cfg: &IntegratorConfig, rng: &mut R) -> Result<PathRecord> {
    cfg.validate()?;
    model.validate()?;
    let dim = model.dim();
    if x0.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim.n(), got: x0.dim().n() });
    }
    let mut x = x0.coords().to_vec();
    if dim == Dim::One {
        if let Some(k) = x.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::NotOrdered { index: k + 1 });
        }
    }
    let mode = if dim == Dim::One { LabelMode::Increasing } else { x0.mode() };
    let window = x0.window();
    let env = match (model, dim) {
        (DriftModel::FrozenEnv(f), Dim::One) => {
            let mut e = f.env.flat().to_vec();
            e.sort_by(f64::total_cmp);
            if x.iter().any(|v| e.binary_search_by(|p| p.total_cmp(v)).is_ok()) {
                return Err(Error::invalid("x0", "tagged particles coincide with environment points"));
            }
            e
        }
        _ => Vec::new(),
    };
    let n = x.len();
    let mut stepper = Stepper {
        model,
        window,
        dim,
        max_halvings: cfg.max_halvings,
        rng,
        drift: vec![0.0; n],
        proposal: vec![0.0; n],
        env,
        diag: PathDiagnostics { min_gap: f64::INFINITY, substeps: vec![0], rejections: 0 },
    };
    stepper.diag.min_gap = stepper.nearest(&x, dim.n()).into_iter().fold(f64::INFINITY, f64::min);

    let steps = (cfg.horizon / cfg.dt).ceil().max(1.0) as usize;
    let h = cfg.horizon / steps as f64;
    let mut times = vec![0.0];
    let mut states = vec![LabeledState::from_parts(dim, x.clone(), mode, window)];
    for k in 0..steps {
        let t = k as f64 * h;
        stepper.advance(&mut x, t, h, 0, 0)?;
        let done = k + 1 == steps;
        if (k + 1) % cfg.record_stride == 0 || done {
            times.push(if done { cfg.horizon } else { (k + 1) as f64 * h });
            states.push(LabeledState::from_parts(dim, x.clone(), mode, window));
        }
    }
    Ok(PathRecord { times, states, diagnostics: stepper.diag })
}

/// One path per initial state, path `i` driven by stream `i` of `cfg.seed`.
/// Results are in input order regardless of scheduling.
pub fn integrate_ensemble(x0: &[LabeledState], model: &DriftModel, cfg: &IntegratorConfig) -> Vec<Result<PathRecord>> {
    x0.par_iter()
        .enumerate()
        .map(|(i, x)| integrate_with_rng(x, model, cfg, &mut rng::stream(cfg.seed, i as u64)))
        .collect()
}

/// `y_j = N^{1/6}(x_j − 2√N)`.
pub fn edge_rescale(x: &LabeledState, n: usize) -> LabeledState {
    let (s, c) = edge_constants(n);
    let ys = x.coords().iter().map(|&v| s * (v - c)).collect();
    LabeledState::from_parts(x.dim(), ys, x.mode(), None)
}

/// Inverse of [`edge_rescale`].
pub fn edge_unscale(y: &LabeledState, n: usize) -> LabeledState {
    let (s, c) = edge_constants(n);
    let xs = y.coords().iter().map(|&v| v / s + c).collect();
    LabeledState::from_parts(y.dim(), xs, y.mode(), None)
}

fn edge_constants(n: usize) -> (f64, f64) {
    let n = n as f64;
    (n.powf(1.0 / 6.0), 2.0 * n.sqrt())
}

/// Comparison of one statistic between evolved states and the reference sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatComparison {
    pub name: String,
    pub evolved_mean: f64,
    pub evolved_stderr: f64,
    pub evolved_variance: f64,
    pub reference_mean: f64,
    pub reference_stderr: f64,
    pub reference_variance: f64,
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationarityReport {
    pub n: usize,
    pub beta: f64,
    pub horizon: f64,
    pub paths: usize,
    pub stats: Vec<StatComparison>,
}

impl StationarityReport {
    pub fn max_abs_z(&self) -> f64 {
        self.stats.iter().map(|s| s.z.abs()).fold(0.0, f64::max)
    }
}

/// `Σx_i²`, `max x_i` and mean consecutive gap.
fn tracked_stats(x: &[f64]) -> [f64; 3] {
    let n = x.len();
    let sq = x.iter().map(|v| v * v).sum();
    let max = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let gap = if n > 1 { (x[n - 1] - x[0]) / (n - 1) as f64 } else { 0.0 };
    [sq, max, gap]
}

fn mean_var(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = if v.len() > 1 { v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (m, var)
}

/// Runs the finite-N Dyson model with the Ornstein–Uhlenbeck term from each of
/// `initial` (drawn from the equilibrium density) to `cfg.horizon` and compares
/// the final-time statistics with the independent `reference` sample.
/// A horizon of exactly 0 skips integration and compares `initial` itself.
pub fn stationarity_run(
    n: usize,
    beta: f64,
    cfg: &IntegratorConfig,
    initial: &[LabeledState],
    reference: &[LabeledState],
) -> Result<StationarityReport> {
    if initial.is_empty() {
        return Err(Error::TooFew { what: "initial states", needed: 1, got: 0 });
    }
    if reference.is_empty() {
        return Err(Error::TooFew { what: "reference states", needed: 1, got: 0 });
    }
    let model = DriftModel::FiniteN { beta, n, model: GibbsModel::Ou };
    let finals: Vec<Vec<f64>> = if cfg.horizon == 0.0 {
        initial.iter().map(|x| x.coords().to_vec()).collect()
    } else {
        integrate_ensemble(initial, &model, cfg)
            .into_iter()
            .map(|r| r.map(|p| p.final_state().coords().to_vec()))
            .collect::<Result<_>>()?
    };
    let evolved: Vec<[f64; 3]> = finals.iter().map(|x| tracked_stats(x)).collect();
    let refs: Vec<[f64; 3]> = reference.iter().map(|x| tracked_stats(x.coords())).collect();
    let names = ["sum_sq", "max", "mean_gap"];
    let stats = (0..3)
        .map(|k| {
            let a: Vec<f64> = evolved.iter().map(|s| s[k]).collect();
            let b: Vec<f64> = refs.iter().map(|s| s[k]).collect();
            let ((ma, va), (mb, vb)) = (mean_var(&a), mean_var(&b));
            let (sa, sb) = ((va / a.len() as f64).sqrt(), (vb / b.len() as f64).sqrt());
            let se = (sa * sa + sb * sb).sqrt();
            let z = if se > 0.0 { (ma - mb) / se } else if ma == mb { 0.0 } else { f64::INFINITY };
            StatComparison {
                name: names[k].into(),
                evolved_mean: ma,
                evolved_stderr: sa,
                evolved_variance: va,
                reference_mean: mb,
                reference_stderr: sb,
                reference_variance: vb,
                z,
            }
        })
        .collect();
    Ok(StationarityReport { n, beta, horizon: cfg.horizon, paths: initial.len(), stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configuration::Configuration;
    use crate::potentials::{FreePotential, PairPotential};
    use crate::sampling::mcmc::{mcmc_gibbs, McmcConfig};

    fn cfg(horizon: f64, seed: u64) -> IntegratorConfig {
        IntegratorConfig { dt: 1e-2, horizon, seed, record_stride: 10, ..Default::default() }
    }

    #[test]
    fn single_free_particle_is_brownian() {
        let model = DriftModel::Bulk { beta: 2.0, r: 10.0 };
        let x0 = vec![LabeledState::increasing(vec![0.0]).unwrap(); 10_000];
        let c = IntegratorConfig { dt: 0.25, record_stride: 1, ..cfg(1.0, 7) };
        let paths: Vec<PathRecord> = integrate_ensemble(&x0, &model, &c).into_iter().map(Result::unwrap).collect();
        let ends: Vec<f64> = paths.iter().map(|p| p.final_state().coords()[0]).collect();
        let (m, v) = mean_var(&ends);
        // Var of the sample variance of N(0,1) draws ≈ 2/n.
        assert!((v - 1.0).abs() < 3.0 * (2.0 / 1e4f64).sqrt(), "variance {v}");
        assert!(m.abs() < 3.0 * (1.0 / 1e4f64).sqrt());
        // Increments over disjoint intervals are uncorrelated.
        let inc = |p: &PathRecord, a: usize, b: usize| p.states[b].coords()[0] - p.states[a].coords()[0];
        let (i1, i2): (Vec<f64>, Vec<f64>) = paths.iter().map(|p| (inc(p, 0, 2), inc(p, 2, 4))).unzip();
        let (m1, v1) = mean_var(&i1);
        let (m2, v2) = mean_var(&i2);
        let cov = i1.iter().zip(&i2).map(|(a, b)| (a - m1) * (b - m2)).sum::<f64>() / (i1.len() - 1) as f64;
        assert!((cov / (v1 * v2).sqrt()).abs() < 0.05);
    }

    #[test]
    fn two_particle_gap_stays_positive() {
        let model = DriftModel::FiniteN { beta: 2.0, n: 2, model: GibbsModel::Plain };
        let x0 = vec![LabeledState::increasing(vec![-0.5, 0.5]).unwrap(); 1000];
        let c = IntegratorConfig { dt: 1e-2, max_halvings: 40, ..cfg(1.0, 3) };
        for r in integrate_ensemble(&x0, &model, &c) {
            let p = r.unwrap();
            assert!(p.states.iter().all(|s| s.coords()[1] > s.coords()[0]));
            assert!(p.diagnostics.min_gap > 0.0);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let model = DriftModel::FiniteN { beta: 1.0, n: 5, model: GibbsModel::Ou };
        let x0 = LabeledState::increasing(vec![-2.0, -1.0, 0.0, 1.0, 2.0]).unwrap();
        let a = integrate(&x0, &model, &cfg(0.5, 11)).unwrap();
        let b = integrate(&x0, &model, &cfg(0.5, 11)).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a, b);
        let c = integrate(&x0, &model, &cfg(0.5, 12)).unwrap();
        assert_ne!(a.to_csv(), c.to_csv());
    }

    #[test]
    fn records_are_ordered_and_timed() {
        let model = DriftModel::FiniteN { beta: 1.0, n: 8, model: GibbsModel::Ou };
        let x0 = LabeledState::increasing((0..8).map(|k| k as f64 - 3.5).collect()).unwrap();
        let p = integrate(&x0, &model, &IntegratorConfig { dt: 0.013, ..cfg(0.5, 5) }).unwrap();
        assert!(p.times.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(*p.times.last().unwrap(), 0.5);
        assert!(p.states.iter().all(|s| s.coords().windows(2).all(|w| w[1] > w[0])));
        // Accepted substeps tile the base steps exactly.
        let covered: f64 = p.diagnostics.substeps.iter().enumerate().map(|(d, &c)| c as f64 / 2f64.powi(d as i32)).sum();
        assert_eq!(covered, (0.5f64 / 0.013).ceil());
        let csv = p.to_csv();
        assert!(csv.starts_with("t,x_1,x_2"));
    }

    #[test]
    fn bessel_stays_positive() {
        let model = DriftModel::Bessel { alpha: 1.0, r: 50.0 };
        let x0 = LabeledState::increasing(vec![0.05, 1.0, 2.0]).unwrap();
        // Near the wall the step control may run out of halvings; that must
        // surface as an error, never as a non-positive coordinate.
        let mut completed = 0;
        for seed in 0..50 {
            match integrate(&x0, &model, &cfg(0.5, seed)) {
                Ok(p) => {
                    completed += 1;
                    assert!(p.states.iter().all(|s| s.coords().iter().all(|&v| v > 0.0)));
                }
                Err(Error::Integration { state, .. }) => assert!(state.iter().all(|&v| v > 0.0)),
                Err(e) => panic!("unexpected error {e}"),
            }
        }
        assert!(completed >= 40, "{completed}");
    }

    #[test]
    fn exhausted_halvings_report_time_and_state() {
        // A drift that overshoots at every scale: soft-edge model with huge β near a neighbour.
        let model = DriftModel::Bulk { beta: 1e12, r: 10.0 };
        let x0 = LabeledState::increasing(vec![0.0, 1e-3]).unwrap();
        let c = IntegratorConfig { max_halvings: 3, ..cfg(0.1, 1) };
        match integrate(&x0, &model, &c) {
            Err(Error::Integration { time, state, .. }) => {
                assert_eq!(time, 0.0);
                assert_eq!(state, vec![0.0, 1e-3]);
            }
            other => panic!("expected an integration error, got {other:?}"),
        }
    }

    #[test]
    fn frozen_environment_is_not_crossed() {
        let env = Configuration::from_1d(vec![-1.0, 1.0]).unwrap();
        let model = DriftModel::FrozenEnv(crate::drift::FrozenEnv {
            env,
            phi: FreePotential::Zero,
            psi: PairPotential::log_gas(2.0).unwrap(),
        });
        let x0 = LabeledState::increasing(vec![0.0]).unwrap();
        for seed in 0..20 {
            let p = integrate(&x0, &model, &cfg(1.0, seed)).unwrap();
            assert!(p.states.iter().all(|s| s.coords()[0].abs() < 1.0));
        }
    }

    #[test]
    fn edge_rescale_examples() {
        let n = 25;
        let x = LabeledState::increasing(vec![10.0]).unwrap();
        assert_eq!(edge_rescale(&x, n).coords()[0], 0.0);
        let one = LabeledState::increasing(vec![3.0]).unwrap();
        assert_eq!(edge_rescale(&one, 1).coords()[0], 1.0);
        let mut r = rng::from_seed(1);
        for _ in 0..100 {
            let mut xs: Vec<f64> = (0..10).map(|_| r.random_range(-50.0..50.0)).collect();
            xs.sort_by(f64::total_cmp);
            let x = LabeledState::increasing(xs).unwrap();
            let y = edge_rescale(&x, 37);
            assert!(y.coords().windows(2).all(|w| w[1] > w[0]));
            let back = edge_unscale(&y, 37);
            for (a, b) in back.coords().iter().zip(x.coords()) {
                assert!((a - b).abs() < 1e-12 * b.abs().max(1.0));
            }
        }
    }

    #[test]
    fn stationarity_reports() {
        let mc = McmcConfig { steps: 4000, burn_in: 500, thinning: 20, proposal_scale: 1.0, seed: 1, record_moves: 0 };
        let init = mcmc_gibbs(2, 2.0, &mc).unwrap().states;
        let reference = mcmc_gibbs(2, 2.0, &McmcConfig { seed: 2, ..mc }).unwrap().states;
        let r = stationarity_run(2, 2.0, &cfg(0.5, 4), &init, &reference).unwrap();
        assert!(r.stats.iter().all(|s| s.z.is_finite()));
        let zero = stationarity_run(2, 2.0, &IntegratorConfig { horizon: 0.0, ..cfg(0.5, 4) }, &init, &init).unwrap();
        assert!(zero.max_abs_z() == 0.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let model = DriftModel::FiniteN { beta: 2.0, n: 2, model: GibbsModel::Plain };
        let x0 = LabeledState::tracked(Dim::One, vec![1.0, 0.0]).unwrap();
        assert!(matches!(integrate(&x0, &model, &cfg(1.0, 0)), Err(Error::NotOrdered { .. })));
        let ok = LabeledState::increasing(vec![0.0, 1.0]).unwrap();
        assert!(integrate(&ok, &model, &IntegratorConfig { dt: 0.0, ..cfg(1.0, 0) }).is_err());
        assert!(integrate(&ok, &model, &IntegratorConfig { horizon: -1.0, ..cfg(1.0, 0) }).is_err());
    }
}
