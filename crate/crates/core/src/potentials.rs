//! Free and pair potentials, the windowed Hamiltonian, and the finite-N log-gas.
//!
//! The log-gas density on ℝ^N is
//!
//! ```text
//! p(x) ∝ Π_{i<j} |x_i − x_j|^β · exp(−β |x|² / (4N))
//! ```
//!
//! and everything here works with its logarithm.

use std::fmt::Debug;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::configuration::{dist, Configuration, LabeledState, COLLISION_TOL};
use crate::error::{Error, Result};
use crate::rng;
use crate::sampling::mcmc::{GibbsTarget, McmcConfig, McmcChain};

/// A user-supplied smooth pair interaction Ψ(x, y).
pub trait PairFunction: Send + Sync + Debug {
    fn value(&self, x: &[f64], y: &[f64]) -> f64;
    /// ∇ₓΨ(x, y), written into `out`.
    fn grad_x(&self, x: &[f64], y: &[f64], out: &mut [f64]);
}

/// A user-supplied free potential Φ(x).
pub trait FreeFunction: Send + Sync + Debug {
    fn value(&self, x: &[f64]) -> f64;
    fn grad(&self, x: &[f64], out: &mut [f64]);
}

#[derive(Debug, Clone)]
pub enum PairPotential {
    Zero,
    /// Ψ(x, y) = −β log|x − y|.
    LogGas { beta: f64 },
    Custom(Arc<dyn PairFunction>),
}

#[derive(Debug, Clone)]
pub enum FreePotential {
    Zero,
    /// Φ(x) = c|x|².
    Quadratic { c: f64 },
    Custom(Arc<dyn FreeFunction>),
}

impl PairPotential {
    pub fn log_gas(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::invalid("beta", format!("must be positive, got {beta}")));
        }
        Ok(PairPotential::LogGas { beta })
    }

    pub fn value(&self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            PairPotential::Zero => 0.0,
            PairPotential::LogGas { beta } => -beta * dist(x, y).ln(),
            PairPotential::Custom(f) => f.value(x, y),
        }
    }

    /// Adds ∇ₓΨ(x, y) to `out`.
    pub fn add_grad_x(&self, x: &[f64], y: &[f64], out: &mut [f64]) {
        match self {
            PairPotential::Zero => {}
            PairPotential::LogGas { beta } => {
                let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
                for k in 0..x.len() {
                    out[k] -= beta * (x[k] - y[k]) / d2;
                }
            }
            PairPotential::Custom(f) => {
                let mut g = vec![0.0; x.len()];
                f.grad_x(x, y, &mut g);
                for (o, gk) in out.iter_mut().zip(g) {
                    *o += gk;
                }
            }
        }
    }
}

impl FreePotential {
    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            FreePotential::Zero => 0.0,
            FreePotential::Quadratic { c } => c * x.iter().map(|v| v * v).sum::<f64>(),
            FreePotential::Custom(f) => f.value(x),
        }
    }

    /// Adds ∇Φ(x) to `out`.
    pub fn add_grad(&self, x: &[f64], out: &mut [f64]) {
        match self {
            FreePotential::Zero => {}
            FreePotential::Quadratic { c } => {
                for (o, v) in out.iter_mut().zip(x) {
                    *o += 2.0 * c * v;
                }
            }
            FreePotential::Custom(f) => {
                let mut g = vec![0.0; x.len()];
                f.grad(x, &mut g);
                for (o, gk) in out.iter_mut().zip(g) {
                    *o += gk;
                }
            }
        }
    }
}

/// The increasing sequence of window radii `b_r`; `b_r = r` unless given explicitly.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WindowSchedule {
    radii: Option<Vec<u64>>,
}

impl WindowSchedule {
    pub fn identity() -> Self {
        WindowSchedule { radii: None }
    }

    /// `radii[r - 1]` is `b_r`.
    pub fn explicit(radii: Vec<u64>) -> Result<Self> {
        if radii.first().is_some_and(|&b| b == 0) || radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("window schedule", "must be strictly increasing positive integers"));
        }
        Ok(WindowSchedule { radii: Some(radii) })
    }

    pub fn radius(&self, r: usize) -> Result<f64> {
        match &self.radii {
            None => Ok(r as f64),
            Some(b) => b
                .get(r.wrapping_sub(1))
                .map(|&v| v as f64)
                .ok_or_else(|| Error::invalid("r", format!("schedule has {} entries, asked for {r}", b.len()))),
        }
    }
}

/// H_r(ξ): free energy of the points in `S_r = {|x| < b_r}` plus their pair energy.
/// May be `+∞` for colliding points under a log-gas interaction.
pub fn hamiltonian(
    xi: &Configuration,
    r: usize,
    phi: &FreePotential,
    psi: &PairPotential,
    schedule: &WindowSchedule,
) -> Result<f64> {
    let inner = xi.restrict(schedule.radius(r)?);
    let d = inner.dim().n();
    let pts: Vec<&[f64]> = inner.flat().chunks_exact(d).collect();
    let mut h: f64 = pts.iter().map(|p| phi.value(p)).sum();
    for j in 0..pts.len() {
        for k in j + 1..pts.len() {
            h += psi.value(pts[j], pts[k]);
        }
    }
    Ok(h)
}

/// Σ_{x∈η, y∈ξ_out} Ψ(x, y).
pub fn cross_interaction(eta: &Configuration, outside: &Configuration, psi: &PairPotential) -> Result<f64> {
    if eta.dim() != outside.dim() {
        return Err(Error::DimensionMismatch { expected: eta.dim().n(), got: outside.dim().n() });
    }
    let d = eta.dim().n();
    Ok(eta
        .flat()
        .chunks_exact(d)
        .flat_map(|x| outside.flat().chunks_exact(d).map(move |y| psi.value(x, y)))
        .sum())
}

fn check_len(x: &LabeledState, n: usize) -> Result<()> {
    if x.len() != n || x.dim().n() != 1 {
        return Err(Error::invalid("x", format!("expected {n} one-dimensional coordinates, got {}", x.len())));
    }
    if n == 0 {
        return Err(Error::invalid("n", "must be positive"));
    }
    Ok(())
}

/// log h_N(x) = Σ_{i<j} log|x_i − x_j|; `−∞` if two coordinates coincide.
pub fn log_vandermonde(xs: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            s += (xs[i] - xs[j]).abs().ln();
        }
    }
    s
}

/// Unnormalised log-density β·log h_N(x) − (β/4N)|x|² of the finite-N log-gas.
pub fn gibbs_log_density(x: &LabeledState, beta: f64, n: usize) -> Result<f64> {
    check_len(x, n)?;
    Ok(log_density(x.coords(), beta, 1.0))
}

/// `coupling` scales the pair interaction only (1 for the log-gas itself).
pub(crate) fn log_density(xs: &[f64], beta: f64, coupling: f64) -> f64 {
    let n = xs.len() as f64;
    let sq: f64 = xs.iter().map(|v| v * v).sum();
    let pair = if coupling == 0.0 { 0.0 } else { coupling * beta * log_vandermonde(xs) };
    pair - beta / (4.0 * n) * sq
}

/// Which finite-N Dyson model a drift refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
pub enum GibbsModel {
    /// dX_j = dB_j + (β/2) Σ_{k≠j} dt/(X_j − X_k)
    Plain,
    /// The same with the additional Ornstein–Uhlenbeck term −(β/4N) X_j dt.
    Ou,
}

/// Drift vector of the finite-N Dyson model.
pub fn gibbs_drift(x: &LabeledState, beta: f64, n: usize, model: GibbsModel) -> Result<Vec<f64>> {
    check_len(x, n)?;
    let mut out = vec![0.0; n];
    dyson_drift_into(x.coords(), beta, model, &mut out)?;
    Ok(out)
}

pub(crate) fn dyson_drift_into(xs: &[f64], beta: f64, model: GibbsModel, out: &mut [f64]) -> Result<()> {
    let n = xs.len();
    out.iter_mut().for_each(|o| *o = 0.0);
    for j in 0..n {
        for k in j + 1..n {
            let d = xs[j] - xs[k];
            if d.abs() < COLLISION_TOL {
                return Err(Error::Collision { i: j, j: k, distance: d.abs() });
            }
            let inv = 1.0 / d;
            out[j] += inv;
            out[k] -= inv;
        }
    }
    let ou = if model == GibbsModel::Ou { beta / (4.0 * n as f64) } else { 0.0 };
    for (o, &x) in out.iter_mut().zip(xs) {
        *o = 0.5 * beta * *o - ou * x;
    }
    Ok(())
}

/// Parameters of the finite-N quasi-Gibbs sandwich check.
#[derive(Debug, Clone, Serialize)]
pub struct SandwichConfig {
    pub n: usize,
    pub beta: f64,
    /// Window index; the window is `|x| < b_r` with `b_r = r`.
    pub r: usize,
    /// Number of particles conditioned to lie in the window.
    pub m: usize,
    /// Number of outside configurations to condition on.
    pub trials: usize,
    /// Uniform interior draws per outside configuration.
    pub draws: usize,
    /// Multiplier of the pair interaction (1 = the log-gas, 0 = independent particles).
    pub coupling: f64,
    pub seed: u64,
}

impl SandwichConfig {
    pub fn new(n: usize, beta: f64, r: usize, m: usize, trials: usize, seed: u64) -> Self {
        SandwichConfig { n, beta, r, m, trials, draws: 2048, coupling: 1.0, seed }
    }
}

/// Observed range of the conditional density relative to the Gibbs reference.
#[derive(Debug, Clone, Serialize)]
pub struct SandwichReport {
    pub config: SandwichConfig,
    pub configs_used: usize,
    pub ratio_min: f64,
    pub ratio_max: f64,
}

/// Log of the mean, under the normalised reference `e^{−H_r} dη` on the window,
/// of the cross factor `Π_{x∈η, y∈out} |x − y|^{coupling·β}`; estimated by
/// self-normalised uniform sampling. Returns `(log mean, per-draw log cross factors)`.
pub fn reference_log_mean_cross<R: Rng>(
    outside: &[f64],
    cfg: &SandwichConfig,
    rng: &mut R,
) -> (f64, Vec<(Vec<f64>, f64)>) {
    let radius = cfg.r as f64;
    let mut draws = Vec::with_capacity(cfg.draws);
    let mut log_w = Vec::with_capacity(cfg.draws);
    for _ in 0..cfg.draws {
        let eta: Vec<f64> = (0..cfg.m).map(|_| rng.random_range(-radius..radius)).collect();
        log_w.push(-interior_hamiltonian(&eta, cfg));
        let lc = log_cross(&eta, outside, cfg);
        draws.push((eta, lc));
    }
    let lmax = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (mut num, mut den) = (0.0, 0.0);
    let cmax = draws.iter().map(|d| d.1).fold(f64::NEG_INFINITY, f64::max);
    for (lw, (_, lc)) in log_w.iter().zip(&draws) {
        let w = (lw - lmax).exp();
        den += w;
        num += w * (lc - cmax).exp();
    }
    ((num / den).ln() + cmax, draws)
}

/// H_r of the interior points for the finite-N log-gas: Φ(x) = βx²/(4N), Ψ = −coupling·β log.
fn interior_hamiltonian(eta: &[f64], cfg: &SandwichConfig) -> f64 {
    let sq: f64 = eta.iter().map(|v| v * v).sum();
    let pair = if cfg.coupling == 0.0 { 0.0 } else { cfg.coupling * cfg.beta * log_vandermonde(eta) };
    cfg.beta / (4.0 * cfg.n as f64) * sq - pair
}

fn log_cross(eta: &[f64], outside: &[f64], cfg: &SandwichConfig) -> f64 {
    if cfg.coupling == 0.0 {
        return 0.0;
    }
    let mut s = 0.0;
    for x in eta {
        for y in outside {
            s += (x - y).abs().ln();
        }
    }
    cfg.coupling * cfg.beta * s
}

/// Numerical check of the quasi-Gibbs sandwich for the finite-N log-gas.
///
/// Outside configurations are drawn from the N-particle measure (Metropolis),
/// keeping states with exactly `m` points in the window. For each one the exact
/// conditional density of the interior points is compared with the normalised
/// reference `e^{−H_r}` on the window; the ratio of the two is the cross factor
/// divided by its reference mean. The report gives the smallest and largest
/// ratio seen over all interior draws and outside configurations.
pub fn quasi_gibbs_sandwich_check(cfg: &SandwichConfig) -> Result<SandwichReport> {
    if cfg.n == 0 || cfg.n > 12 {
        return Err(Error::invalid("n", "must be between 1 and 12"));
    }
    if cfg.m > cfg.n {
        return Err(Error::invalid("m", "must not exceed n"));
    }
    if !(cfg.beta > 0.0) {
        return Err(Error::invalid("beta", "must be positive"));
    }
    if cfg.r == 0 {
        return Err(Error::invalid("r", "must be positive"));
    }
    if cfg.trials == 0 || cfg.draws == 0 {
        return Err(Error::invalid("trials", "need at least one trial and one draw"));
    }
    if cfg.m == 0 {
        return Ok(SandwichReport { config: cfg.clone(), configs_used: cfg.trials, ratio_min: 1.0, ratio_max: 1.0 });
    }
    let radius = cfg.r as f64;
    let target = GibbsTarget { n: cfg.n, beta: cfg.beta, coupling: cfg.coupling };
    let mcmc = McmcConfig { steps: 0, burn_in: 500, thinning: 20, proposal_scale: 1.0, seed: cfg.seed, record_moves: 0 };
    let mut chain = McmcChain::new(target, &mcmc);
    chain.burn_in(mcmc.burn_in);

    let mut outsides = Vec::new();
    let budget = 400 * cfg.trials;
    for _ in 0..budget {
        chain.sweeps(mcmc.thinning);
        let xs = chain.state();
        if xs.iter().filter(|x| x.abs() < radius).count() == cfg.m {
            outsides.push(xs.iter().copied().filter(|x| x.abs() >= radius).collect::<Vec<_>>());
            if outsides.len() == cfg.trials {
                break;
            }
        }
    }
    if outsides.is_empty() {
        return Err(Error::DegenerateConditioning(format!(
            "no sampled state had exactly {} of {} points in |x| < {radius}",
            cfg.m, cfg.n
        )));
    }

    let mut rng = rng::stream(cfg.seed, 1);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for outside in &outsides {
        let (log_mean, draws) = reference_log_mean_cross(outside, cfg, &mut rng);
        for (_, lc) in draws {
            let ratio = (lc - log_mean).exp();
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
    }
    Ok(SandwichReport { config: cfg.clone(), configs_used: outsides.len(), ratio_min: lo, ratio_max: hi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configuration::Dim;
    use proptest::prelude::*;

    fn cfg1(xs: &[f64]) -> Configuration {
        Configuration::from_1d(xs.to_vec()).unwrap()
    }

    #[test]
    fn hamiltonian_examples() {
        let id = WindowSchedule::identity();
        let lg = |b| PairPotential::log_gas(b).unwrap();
        assert_eq!(hamiltonian(&Configuration::empty(Dim::One), 3, &FreePotential::Zero, &lg(1.0), &id).unwrap(), 0.0);
        let h = hamiltonian(&cfg1(&[0.0, 2.0]), 5, &FreePotential::Zero, &lg(1.7), &id).unwrap();
        assert!((h + 1.7 * 2f64.ln()).abs() < 1e-15);
        // Direct summation over the three pairs: −(ln1 + ln2 + ln1).
        let h = hamiltonian(&cfg1(&[0.0, 1.0, 2.0]), 5, &FreePotential::Zero, &lg(1.0), &id).unwrap();
        let oracle = -[(0.0f64, 1.0f64), (0.0, 2.0), (1.0, 2.0)].iter().map(|(a, b)| (b - a).ln()).sum::<f64>();
        assert!((h - oracle).abs() < 1e-15 && (h + 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn hamiltonian_only_sees_the_window() {
        let lg = PairPotential::log_gas(1.0).unwrap();
        let xi = cfg1(&[0.0, 2.0, 7.0]);
        let id = WindowSchedule::identity();
        let h3 = hamiltonian(&xi, 3, &FreePotential::Quadratic { c: 1.0 }, &lg, &id).unwrap();
        assert!((h3 - (4.0 - 2f64.ln())).abs() < 1e-14);
        let sched = WindowSchedule::explicit(vec![1, 10]).unwrap();
        let h1 = hamiltonian(&xi, 1, &FreePotential::Quadratic { c: 1.0 }, &lg, &sched).unwrap();
        assert_eq!(h1, 0.0);
        assert!(WindowSchedule::explicit(vec![2, 2]).is_err());
        assert!(sched.radius(3).is_err());
    }

    #[test]
    fn colliding_points_have_infinite_energy() {
        let lg = PairPotential::log_gas(2.0).unwrap();
        let h = hamiltonian(&cfg1(&[0.5, 0.5]), 1, &FreePotential::Zero, &lg, &WindowSchedule::identity()).unwrap();
        assert_eq!(h, f64::INFINITY);
        let mut prev = f64::NEG_INFINITY;
        for k in 1..30 {
            let g = 2f64.powi(-k);
            let h = hamiltonian(&cfg1(&[0.0, g]), 1, &FreePotential::Zero, &lg, &WindowSchedule::identity()).unwrap();
            assert!(h > prev);
            prev = h;
        }
    }

    #[test]
    fn gibbs_log_density_examples() {
        let x = LabeledState::increasing(vec![0.0, 1.0, 2.0]).unwrap();
        let v = gibbs_log_density(&x, 1.5, 3).unwrap();
        assert!((v - (1.5 * 2f64.ln() - 1.5 / 12.0 * 5.0)).abs() < 1e-15);
        let x = LabeledState::increasing(vec![-1.0, 1.0]).unwrap();
        let v = gibbs_log_density(&x, 2.0, 2).unwrap();
        assert!((v - (2.0 * 2f64.ln() - 0.5)).abs() < 1e-15);
        assert!(gibbs_log_density(&x, 2.0, 3).is_err());
        let coincident = LabeledState::tracked(Dim::One, vec![1.0, 1.0]).unwrap();
        assert_eq!(gibbs_log_density(&coincident, 2.0, 2).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn gibbs_drift_examples() {
        let x = LabeledState::increasing(vec![-1.0, 1.0]).unwrap();
        assert_eq!(gibbs_drift(&x, 2.0, 2, GibbsModel::Plain).unwrap(), vec![-0.5, 0.5]);
        assert_eq!(gibbs_drift(&x, 2.0, 2, GibbsModel::Ou).unwrap(), vec![-0.25, 0.25]);
        let close = LabeledState::tracked(Dim::One, vec![1.0, 1.0 + 1e-13]).unwrap();
        assert!(matches!(gibbs_drift(&close, 2.0, 2, GibbsModel::Plain), Err(Error::Collision { .. })));
    }

    #[test]
    fn cross_interaction_examples() {
        let lg = PairPotential::log_gas(1.0).unwrap();
        assert_eq!(cross_interaction(&Configuration::empty(Dim::One), &cfg1(&[2.0]), &lg).unwrap(), 0.0);
        let v = cross_interaction(&cfg1(&[0.0]), &cfg1(&[2.0]), &lg).unwrap();
        assert!((v + 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn sandwich_empty_interior_is_exactly_one() {
        let r = quasi_gibbs_sandwich_check(&SandwichConfig::new(4, 2.0, 1, 0, 5, 1)).unwrap();
        assert_eq!((r.ratio_min, r.ratio_max), (1.0, 1.0));
    }

    #[test]
    fn sandwich_small_system_is_finite_and_positive() {
        let mut cfg = SandwichConfig::new(4, 2.0, 1, 2, 20, 11);
        cfg.draws = 512;
        let r = quasi_gibbs_sandwich_check(&cfg).unwrap();
        assert!(r.configs_used > 0);
        assert!(r.ratio_min > 0.0 && r.ratio_max.is_finite());
        assert!(r.ratio_min <= 1.0 && r.ratio_max >= 1.0);
        assert!((r.ratio_max / r.ratio_min).is_finite());
    }

    #[test]
    fn sandwich_collapses_without_interaction() {
        let mut spread = Vec::new();
        for coupling in [1.0, 0.3, 0.0] {
            let mut cfg = SandwichConfig::new(4, 2.0, 1, 1, 20, 5);
            cfg.coupling = coupling;
            cfg.draws = 512;
            let r = quasi_gibbs_sandwich_check(&cfg).unwrap();
            spread.push(r.ratio_max / r.ratio_min);
        }
        assert!(spread[0] > spread[1] && spread[1] > spread[2]);
        assert_eq!(spread[2], 1.0);
    }

    #[test]
    fn sandwich_reference_mean_matches_grid_quadrature() {
        // Exact normalisation for m = 1 by dense Gauss–Legendre quadrature on (−r, r).
        let cfg = SandwichConfig { draws: 200_000, ..SandwichConfig::new(4, 2.0, 1, 1, 1, 3) };
        let outside = [-3.1, 1.4, 4.2];
        let (log_mean, _) = reference_log_mean_cross(&outside, &cfg, &mut rng::from_seed(9));
        let grid = crate::quadrature::QuadratureGrid::composite(-1.0, 1.0, 8, 16);
        let w = |x: f64| (-cfg.beta / 16.0 * x * x).exp();
        let g = |x: f64| outside.iter().map(|y| (x - y).abs()).product::<f64>().powf(cfg.beta);
        let exact = (grid.integrate(|x| w(x) * g(x)) / grid.integrate(w)).ln();
        assert!((log_mean - exact).abs() < 5e-3, "{log_mean} vs {exact}");
    }

    #[test]
    fn sandwich_rejects_bad_input() {
        assert!(quasi_gibbs_sandwich_check(&SandwichConfig::new(13, 2.0, 1, 1, 1, 1)).is_err());
        assert!(quasi_gibbs_sandwich_check(&SandwichConfig::new(4, 2.0, 1, 5, 1, 1)).is_err());
        // Four points never all fit in |x| < 1 at this spread.
        let mut cfg = SandwichConfig::new(4, 2.0, 1, 4, 1, 1);
        cfg.draws = 16;
        assert!(matches!(quasi_gibbs_sandwich_check(&cfg), Err(Error::DegenerateConditioning(_))));
    }

    proptest! {
        #[test]
        fn log_density_is_permutation_invariant(xs in prop::collection::vec(-20.0f64..20.0, 2..12), beta in 0.5f64..4.0) {
            let n = xs.len();
            let mut rev = xs.clone();
            rev.reverse();
            let a = gibbs_log_density(&LabeledState::tracked(Dim::One, xs).unwrap(), beta, n).unwrap();
            let b = gibbs_log_density(&LabeledState::tracked(Dim::One, rev).unwrap(), beta, n).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }

        #[test]
        fn hamiltonian_is_translation_invariant_inside_window(
            xs in prop::collection::vec(-3.0f64..3.0, 1..8), shift in -1.0f64..1.0
        ) {
            // All points and their shifts stay inside |x| < 5.
            let lg = PairPotential::log_gas(2.0).unwrap();
            let id = WindowSchedule::identity();
            let a = hamiltonian(&cfg1(&xs), 5, &FreePotential::Zero, &lg, &id).unwrap();
            let shifted: Vec<f64> = xs.iter().map(|x| x + shift).collect();
            let b = hamiltonian(&cfg1(&shifted), 5, &FreePotential::Zero, &lg, &id).unwrap();
            prop_assume!(a.is_finite());
            prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
        }

        #[test]
        fn vandermonde_positive_iff_simple(xs in prop::collection::vec(-3i32..3, 1..6)) {
            let xs: Vec<f64> = xs.into_iter().map(f64::from).collect();
            let simple = cfg1(&xs).is_simple();
            prop_assert_eq!(log_vandermonde(&xs).exp() > 0.0, simple);
        }

        #[test]
        fn cross_interaction_is_additive(
            eta in prop::collection::vec(-1.0f64..1.0, 0..5),
            a in prop::collection::vec(2.0f64..9.0, 0..5),
            b in prop::collection::vec(-9.0f64..-2.0, 0..5),
        ) {
            let lg = PairPotential::log_gas(1.3).unwrap();
            let (eta, ca, cb) = (cfg1(&eta), cfg1(&a), cfg1(&b));
            let whole = cross_interaction(&eta, &ca.union(&cb).unwrap(), &lg).unwrap();
            let parts = cross_interaction(&eta, &ca, &lg).unwrap() + cross_interaction(&eta, &cb, &lg).unwrap();
            prop_assert!((whole - parts).abs() < 1e-12);
        }
    }
}
