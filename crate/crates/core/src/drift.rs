//! Truncated drift evaluators.
//!
//! Each infinite-system drift sums pair interactions over the particles inside a
//! window `|x| < r`; the window is explicit so that truncation error is always
//! attributable. States carrying a window smaller than `r` are rejected.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;

use crate::configuration::{fmt_f64, Configuration, Dim, LabeledState, COLLISION_TOL};
use crate::error::{Error, Result};
use crate::potentials::{dyson_drift_into, FreePotential, GibbsModel, PairPotential};
use crate::quadrature;

/// Frozen environment: `m` tagged particles interacting with a static configuration.
#[derive(Debug, Clone)]
pub struct FrozenEnv {
    pub env: Configuration,
    pub phi: FreePotential,
    pub psi: PairPotential,
}

#[derive(Debug, Clone)]
pub enum DriftModel {
    /// `(β/2) Σ_{|x_k|<r} 1/(x_j − x_k)`
    Bulk { beta: f64, r: f64 },
    /// `(β/2) [Σ_{|x_k|<r} 1/(x_j − x_k) − 2√r/π]`
    SoftEdge { beta: f64, r: f64 },
    /// `α/(2x_j) + Σ_{x_k<r} 1/(x_j − x_k)` on `(0, ∞)`
    Bessel { alpha: f64, r: f64 },
    /// `−x_j + Σ_{|x_k|<r} (x_j − x_k)/|x_j − x_k|²` on ℝ²
    Ginibre { r: f64 },
    /// Finite-N Dyson model, no truncation.
    FiniteN { beta: f64, n: usize, model: GibbsModel },
    FrozenEnv(FrozenEnv),
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::invalid("beta", format!("must be positive and finite, got {beta}")));
    }
    Ok(())
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0) {
        return Err(Error::invalid("r", format!("truncation radius must be positive, got {r}")));
    }
    Ok(())
}

impl DriftModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            DriftModel::Bulk { beta, r } | DriftModel::SoftEdge { beta, r } => {
                check_beta(*beta)?;
                check_radius(*r)
            }
            DriftModel::Bessel { alpha, r } => {
                if !(*alpha >= 1.0) || !alpha.is_finite() {
                    return Err(Error::invalid("alpha", format!("must be a finite number ≥ 1, got {alpha}")));
                }
                check_radius(*r)
            }
            DriftModel::Ginibre { r } => check_radius(*r),
            DriftModel::FiniteN { beta, n, .. } => {
                check_beta(*beta)?;
                if *n == 0 {
                    return Err(Error::invalid("n", "must be positive"));
                }
                Ok(())
            }
            DriftModel::FrozenEnv(f) => {
                if !f.env.is_simple() {
                    return Err(Error::invalid("environment", "environment points must be distinct"));
                }
                Ok(())
            }
        }
    }

    pub fn dim(&self) -> Dim {
        match self {
            DriftModel::Ginibre { .. } => Dim::Two,
            DriftModel::FrozenEnv(f) => f.env.dim(),
            _ => Dim::One,
        }
    }

    pub fn radius(&self) -> Option<f64> {
        match self {
            DriftModel::Bulk { r, .. }
            | DriftModel::SoftEdge { r, .. }
            | DriftModel::Bessel { r, .. }
            | DriftModel::Ginibre { r } => Some(*r),
            _ => None,
        }
    }

    /// The same model truncated at `r`.
    pub fn with_radius(&self, r: f64) -> Result<Self> {
        check_radius(r)?;
        Ok(match self {
            DriftModel::Bulk { beta, .. } => DriftModel::Bulk { beta: *beta, r },
            DriftModel::SoftEdge { beta, .. } => DriftModel::SoftEdge { beta: *beta, r },
            DriftModel::Bessel { alpha, .. } => DriftModel::Bessel { alpha: *alpha, r },
            DriftModel::Ginibre { .. } => DriftModel::Ginibre { r },
            _ => return Err(Error::invalid("model", "finite-N and frozen-environment drifts are not truncated")),
        })
    }

    /// Coordinates must stay positive.
    pub fn is_positive_half_line(&self) -> bool {
        matches!(self, DriftModel::Bessel { .. })
    }

    fn check_state(&self, dim: Dim, coords: &[f64], window: Option<f64>) -> Result<()> {
        if dim != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim().n(), got: dim.n() });
        }
        if let (Some(r), Some(w)) = (self.radius(), window) {
            if r > w {
                return Err(Error::TruncationExceedsWindow { radius: r, window: w });
            }
        }
        match self {
            DriftModel::FiniteN { n, .. } if coords.len() != *n => {
                Err(Error::DimensionMismatch { expected: *n, got: coords.len() })
            }
            DriftModel::Bessel { .. } => match coords.iter().position(|&x| !(x > 0.0)) {
                Some(i) => Err(Error::Domain(format!("Bessel drift needs positive coordinates; x_{i} = {}", coords[i]))),
                None => Ok(()),
            },
            _ => Ok(()),
        }
    }

    /// Drift of particle `j` (a vector of length `dim`).
    pub fn drift(&self, j: usize, x: &LabeledState) -> Result<Vec<f64>> {
        self.validate()?;
        if j >= x.len() {
            return Err(Error::invalid("j", format!("index {j} out of range for {} particles", x.len())));
        }
        self.check_state(x.dim(), x.coords(), x.window())?;
        let d = self.dim().n();
        let mut out = vec![0.0; d];
        self.component_into(j, x.coords(), &mut out)?;
        Ok(out)
    }

    /// All drift components for flat coordinates, written to `out`.
    pub(crate) fn drift_all_into(&self, coords: &[f64], window: Option<f64>, out: &mut [f64]) -> Result<()> {
        self.check_state(self.dim(), coords, window)?;
        if let DriftModel::FiniteN { beta, model, .. } = self {
            return dyson_drift_into(coords, *beta, *model, out);
        }
        let d = self.dim().n();
        for j in 0..coords.len() / d {
            self.component_into(j, coords, &mut out[j * d..(j + 1) * d])?;
        }
        Ok(())
    }

    fn component_into(&self, j: usize, c: &[f64], out: &mut [f64]) -> Result<()> {
        out.iter_mut().for_each(|o| *o = 0.0);
        match self {
            DriftModel::Bulk { beta, r } => out[0] = 0.5 * beta * pair_sum(j, c, |x| x.abs() < *r)?,
            DriftModel::SoftEdge { beta, r } => {
                out[0] = 0.5 * beta * (pair_sum(j, c, |x| x.abs() < *r)? - soft_edge_compensator(*r)?)
            }
            DriftModel::Bessel { alpha, r } => out[0] = alpha / (2.0 * c[j]) + pair_sum(j, c, |x| x < *r)?,
            DriftModel::Ginibre { r } => {
                let (xj, yj) = (c[2 * j], c[2 * j + 1]);
                out[0] = -xj;
                out[1] = -yj;
                for k in 0..c.len() / 2 {
                    if k == j {
                        continue;
                    }
                    let (xk, yk) = (c[2 * k], c[2 * k + 1]);
                    if xk.hypot(yk) >= *r {
                        continue;
                    }
                    let (dx, dy) = (xj - xk, yj - yk);
                    let d2 = dx * dx + dy * dy;
                    if d2.sqrt() < COLLISION_TOL {
                        return Err(Error::Collision { i: j, j: k, distance: d2.sqrt() });
                    }
                    out[0] += dx / d2;
                    out[1] += dy / d2;
                }
            }
            DriftModel::FiniteN { beta, model, .. } => {
                let mut all = vec![0.0; c.len()];
                dyson_drift_into(c, *beta, *model, &mut all)?;
                out[0] = all[j];
            }
            DriftModel::FrozenEnv(f) => frozen_into(j, c, f, out)?,
        }
        Ok(())
    }
}

/// `Σ_{k≠j, keep(x_k)} 1/(x_j − x_k)` for 1D coordinates.
///
/// Terms of each sign are accumulated separately, walking outward from `j`,
/// so that mirror-symmetric neighbourhoods of ordered input cancel exactly.
fn pair_sum(j: usize, c: &[f64], keep: impl Fn(f64) -> bool) -> Result<f64> {
    let xj = c[j];
    let (mut pos, mut neg) = (0.0, 0.0);
    for k in (0..j).rev().chain(j + 1..c.len()) {
        let xk = c[k];
        if !keep(xk) {
            continue;
        }
        let d = xj - xk;
        if d.abs() < COLLISION_TOL {
            return Err(Error::Collision { i: j, j: k, distance: d.abs() });
        }
        if d > 0.0 {
            pos += 1.0 / d;
        } else {
            neg += 1.0 / d;
        }
    }
    Ok(pos + neg)
}

fn frozen_into(j: usize, c: &[f64], f: &FrozenEnv, out: &mut [f64]) -> Result<()> {
    let d = out.len();
    let yj = &c[j * d..(j + 1) * d];
    let mut g = vec![0.0; d];
    f.phi.add_grad(yj, &mut g);
    let others = c.chunks_exact(d).enumerate().filter(|&(k, _)| k != j);
    let env = f.env.flat().chunks_exact(d).enumerate().map(|(k, p)| (k + c.len() / d, p));
    for (k, p) in others.chain(env) {
        let dist = crate::configuration::dist(yj, p);
        if dist < COLLISION_TOL {
            return Err(Error::Collision { i: j, j: k, distance: dist });
        }
        f.psi.add_grad_x(yj, p, &mut g);
    }
    for (o, gk) in out.iter_mut().zip(g) {
        *o = -0.5 * gk;
    }
    Ok(())
}

/// `(β/2) Σ_{k≠j, |x_k|<r} 1/(x_j − x_k)`.
pub fn bulk_drift(j: usize, x: &LabeledState, r: f64, beta: f64) -> Result<f64> {
    Ok(DriftModel::Bulk { beta, r }.drift(j, x)?[0])
}

/// `∫_{−r}^{r} ρ̂(x)/(−x) dx = 2√r/π` for `ρ̂(x) = √(−x)𝟏(x<0)/π`.
pub fn soft_edge_compensator(r: f64) -> Result<f64> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::invalid("r", format!("must be finite and ≥ 0, got {r}")));
    }
    Ok(2.0 * r.sqrt() / PI)
}

/// The compensator by adaptive quadrature of `ρ̂(x)/(−x)` over `[−r, 0]`.
pub fn soft_edge_compensator_quadrature(r: f64) -> Result<f64> {
    soft_edge_compensator(r)?;
    let rho_hat = |x: f64| if x < 0.0 { (-x).sqrt() / PI } else { 0.0 };
    let v = quadrature::adaptive(|x| rho_hat(x) / (-x), -r, 0.0, 1e-13, 1e-14)?;
    Ok(v.value)
}

/// `(β/2) [Σ_{k≠j, |x_k|<r} 1/(x_j − x_k) − 2√r/π]`.
pub fn soft_edge_drift(j: usize, x: &LabeledState, r: f64, beta: f64) -> Result<f64> {
    Ok(DriftModel::SoftEdge { beta, r }.drift(j, x)?[0])
}

/// `α/(2x_j) + Σ_{k≠j, x_k<r} 1/(x_j − x_k)`.
pub fn bessel_drift(j: usize, x: &LabeledState, alpha: f64, r: f64) -> Result<f64> {
    Ok(DriftModel::Bessel { alpha, r }.drift(j, x)?[0])
}

/// `−x_j + Σ_{k≠j, |x_k|<r} (x_j − x_k)/|x_j − x_k|²`.
pub fn ginibre_drift(j: usize, x: &LabeledState, r: f64) -> Result<[f64; 2]> {
    let v = DriftModel::Ginibre { r }.drift(j, x)?;
    Ok([v[0], v[1]])
}

/// `−½∇Φ(y_j) − ½Σ_{k≠j}∇Ψ(y_j, y_k) − ½Σ_{x∈env}∇Ψ(y_j, x)`.
pub fn frozen_env_drift(
    j: usize,
    y: &LabeledState,
    env: &Configuration,
    phi: &FreePotential,
    psi: &PairPotential,
) -> Result<Vec<f64>> {
    DriftModel::FrozenEnv(FrozenEnv { env: env.clone(), phi: phi.clone(), psi: psi.clone() }).drift(j, y)
}

/// Drift of one particle at a sequence of truncation radii.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceDiag {
    pub radii: Vec<f64>,
    /// Drift vector at each radius.
    pub values: Vec<Vec<f64>>,
    /// `|d_{r_{i+1}} − d_{r_i}|`, one fewer than `radii`.
    pub diffs: Vec<f64>,
}

impl ConvergenceDiag {
    /// Columns `radius, value[_x, _y], diff`; the first row has an empty diff.
    pub fn to_csv(&self) -> String {
        let d = self.values.first().map_or(1, Vec::len);
        let mut s = String::from("radius,");
        s.push_str(if d == 1 { "value" } else { "value_x,value_y" });
        s.push_str(",diff\n");
        for (i, (r, v)) in self.radii.iter().zip(&self.values).enumerate() {
            let vals: Vec<String> = v.iter().map(|&x| fmt_f64(x)).collect();
            let diff = if i == 0 { String::new() } else { fmt_f64(self.diffs[i - 1]) };
            let _ = writeln!(s, "{},{},{}", fmt_f64(*r), vals.join(","), diff);
        }
        s
    }
}

/// Evaluates `model` truncated at each radius; no convergence judgment is made.
pub fn drift_convergence_diag(j: usize, x: &LabeledState, radii: &[f64], model: &DriftModel) -> Result<ConvergenceDiag> {
    let mut values = Vec::with_capacity(radii.len());
    for &r in radii {
        values.push(model.with_radius(r)?.drift(j, x)?);
    }
    let diffs = values
        .windows(2)
        .map(|w| w[0].iter().zip(&w[1]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
        .collect();
    Ok(ConvergenceDiag { radii: radii.to_vec(), values, diffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::gibbs_drift;
    use proptest::prelude::*;

    fn inc(xs: &[f64]) -> LabeledState {
        LabeledState::increasing(xs.to_vec()).unwrap()
    }

    #[test]
    fn bulk_examples() {
        assert_eq!(bulk_drift(1, &inc(&[-1.0, 0.0, 1.0]), 2.0, 3.0).unwrap(), 0.0);
        assert_eq!(bulk_drift(0, &inc(&[-1.0, 1.0]), 2.0, 2.0).unwrap(), -0.5);
        let lattice: Vec<f64> = (-100..=100).map(f64::from).collect();
        let x = inc(&lattice);
        assert_eq!(bulk_drift(100, &x, 50.0, 2.0).unwrap(), 0.0);
        assert_eq!(bulk_drift(100, &x, 100.5, 2.0).unwrap(), 0.0);
        // Off-centre particle at 7 against a brute-force partial sum.
        let brute: f64 = (-49..50).filter(|&k| k != 7).map(|k| 1.0 / (7.0 - k as f64)).sum();
        let got = bulk_drift(107, &x, 50.0, 2.0).unwrap();
        assert!((got - brute).abs() < 1e-14);
    }

    #[test]
    fn window_is_enforced() {
        let x = inc(&[-1.0, 1.0]).with_window(1.5);
        assert!(matches!(bulk_drift(0, &x, 2.0, 2.0), Err(Error::TruncationExceedsWindow { .. })));
        assert!(bulk_drift(0, &x, 1.5, 2.0).is_ok());
    }

    #[test]
    fn collisions_are_errors() {
        let x = LabeledState::tracked(Dim::One, vec![0.0, 1e-13, 1.0]).unwrap();
        assert!(matches!(bulk_drift(0, &x, 5.0, 2.0), Err(Error::Collision { .. })));
    }

    #[test]
    fn compensator_closed_form_and_quadrature() {
        assert!((soft_edge_compensator(4.0).unwrap() - 4.0 / PI).abs() < 1e-15);
        assert!((4.0 / PI - 1.27324).abs() < 1e-5);
        assert_eq!(soft_edge_compensator(0.0).unwrap(), 0.0);
        for r in [0.1, 1.0, 10.0, 100.0] {
            let (c, q) = (soft_edge_compensator(r).unwrap(), soft_edge_compensator_quadrature(r).unwrap());
            assert!((c - q).abs() < 1e-10, "r={r}: {c} vs {q}");
        }
        assert!(soft_edge_compensator(-1.0).is_err());
    }

    #[test]
    fn soft_edge_examples() {
        let lone = inc(&[0.5]);
        let v = soft_edge_drift(0, &lone, 9.0, 2.0).unwrap();
        assert!((v + 6.0 / PI).abs() < 1e-15);
        // Neighbours at −k², k = 1..9 inside r = 100.
        let mut xs: Vec<f64> = (1..=10).rev().map(|k| -((k * k) as f64)).collect();
        xs.push(0.0);
        let x = inc(&xs);
        let j = xs.len() - 1;
        let expected: f64 = (1..=9).map(|k| 1.0 / (k * k) as f64).sum::<f64>() - 20.0 / PI;
        assert!((soft_edge_drift(j, &x, 100.0, 2.0).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn bessel_examples() {
        assert_eq!(bessel_drift(0, &inc(&[1.0]), 1.0, 10.0).unwrap(), 0.5);
        assert_eq!(bessel_drift(0, &inc(&[1.0, 3.0]), 2.0, 10.0).unwrap(), 0.5);
        let mut prev = f64::NEG_INFINITY;
        for n in 1..40 {
            let v = bessel_drift(0, &inc(&[2f64.powi(-n), 1.0]), 1.0, 10.0).unwrap();
            assert!(v > prev);
            prev = v;
        }
        assert!(prev > 1e10);
        assert!(matches!(bessel_drift(0, &inc(&[0.0, 1.0]), 1.0, 10.0), Err(Error::Domain(_))));
    }

    #[test]
    fn ginibre_examples() {
        let single = LabeledState::tracked(Dim::Two, vec![0.0, 0.0]).unwrap();
        assert_eq!(ginibre_drift(0, &single, 1.0).unwrap(), [0.0, 0.0]);
        let pair = LabeledState::tracked(Dim::Two, vec![1.0, 0.0, -1.0, 0.0]).unwrap();
        assert_eq!(ginibre_drift(0, &pair, 2.0).unwrap(), [-0.5, 0.0]);
    }

    #[test]
    fn frozen_env_examples() {
        let psi = PairPotential::log_gas(2.0).unwrap();
        let y = inc(&[0.0]);
        let env = Configuration::from_1d(vec![2.0]).unwrap();
        let v = frozen_env_drift(0, &y, &env, &FreePotential::Zero, &psi).unwrap();
        assert!((v[0] + 0.5).abs() < 1e-15);
        let merged = inc(&[0.0, 2.0]);
        assert!((v[0] - bulk_drift(0, &merged, 10.0, 2.0).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn frozen_env_without_environment_is_plain_dyson() {
        let y = inc(&[-1.3, 0.2, 0.9, 2.5]);
        let psi = PairPotential::log_gas(1.7).unwrap();
        let empty = Configuration::empty(Dim::One);
        let g = gibbs_drift(&y, 1.7, 4, GibbsModel::Plain).unwrap();
        for j in 0..4 {
            let v = frozen_env_drift(j, &y, &empty, &FreePotential::Zero, &psi).unwrap();
            assert!((v[0] - g[j]).abs() < 1e-14 * g[j].abs().max(1.0));
        }
    }

    #[test]
    fn convergence_diag_on_lattice() {
        let lattice: Vec<f64> = (-100..=100).map(f64::from).collect();
        let x = inc(&lattice);
        let d = drift_convergence_diag(100, &x, &[10.0, 20.0, 40.0, 80.0], &DriftModel::Bulk { beta: 2.0, r: 1.0 }).unwrap();
        assert!(d.values.iter().all(|v| v[0] == 0.0));
        assert!(d.diffs.iter().all(|&v| v == 0.0));
        let csv = d.to_csv();
        assert!(csv.starts_with("radius,value,diff\n"));
        assert_eq!(csv.lines().count(), 5);
    }

    fn sorted_distinct(v: Vec<f64>) -> Option<Vec<f64>> {
        let mut v = v;
        v.sort_by(f64::total_cmp);
        v.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
        (v.len() >= 2).then_some(v)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn bulk_is_linear_in_beta(v in prop::collection::vec(-20.0..20.0f64, 2..30), beta in 0.1..8.0f64) {
            if let Some(xs) = sorted_distinct(v) {
                let x = inc(&xs);
                for j in 0..xs.len() {
                    let a = bulk_drift(j, &x, 15.0, beta).unwrap();
                    let b = bulk_drift(j, &x, 15.0, 1.0).unwrap();
                    prop_assert!((a - beta * b).abs() <= 1e-12 * a.abs().max(1.0));
                }
            }
        }

        #[test]
        fn bulk_is_antisymmetric_under_reflection(v in prop::collection::vec(-20.0..20.0f64, 2..30)) {
            if let Some(xs) = sorted_distinct(v) {
                let n = xs.len();
                let mirrored: Vec<f64> = xs.iter().rev().map(|x| -x).collect();
                let (a, b) = (inc(&xs), inc(&mirrored));
                for j in 0..n {
                    let d1 = bulk_drift(j, &a, 12.0, 2.0).unwrap();
                    let d2 = bulk_drift(n - 1 - j, &b, 12.0, 2.0).unwrap();
                    prop_assert!((d1 + d2).abs() <= 1e-12 * d1.abs().max(1.0));
                }
            }
        }

        #[test]
        fn soft_edge_isolates_the_compensator(v in prop::collection::vec(-30.0..5.0f64, 2..30), r in 0.5..40.0f64, beta in 0.5..4.0f64) {
            if let Some(xs) = sorted_distinct(v) {
                let x = inc(&xs);
                for j in 0..xs.len() {
                    let diff = soft_edge_drift(j, &x, r, beta).unwrap() - bulk_drift(j, &x, r, beta).unwrap();
                    prop_assert!((diff + beta / 2.0 * 2.0 * r.sqrt() / PI).abs() < 1e-9);
                }
            }
        }

        #[test]
        fn ginibre_is_rotation_equivariant(v in prop::collection::vec(-3.0..3.0f64, 4..24), theta in 0.0..std::f64::consts::TAU) {
            let v = if v.len() % 2 == 1 { v[..v.len() - 1].to_vec() } else { v };
            let x = LabeledState::tracked(Dim::Two, v.clone()).unwrap();
            prop_assume!(x.min_gap() > 1e-3);
            let (s, c) = theta.sin_cos();
            let rot: Vec<f64> = v.chunks(2).flat_map(|p| [c * p[0] - s * p[1], s * p[0] + c * p[1]]).collect();
            let xr = LabeledState::tracked(Dim::Two, rot).unwrap();
            for j in 0..x.len() {
                let d = ginibre_drift(j, &x, 100.0).unwrap();
                let dr = ginibre_drift(j, &xr, 100.0).unwrap();
                let expect = [c * d[0] - s * d[1], s * d[0] + c * d[1]];
                let scale = d[0].abs().max(d[1].abs()).max(1.0);
                prop_assert!((dr[0] - expect[0]).abs() < 1e-9 * scale && (dr[1] - expect[1]).abs() < 1e-9 * scale);
            }
        }

        #[test]
        fn ginibre_pair_terms_cancel(v in prop::collection::vec(-3.0..3.0f64, 4..24)) {
            let v = if v.len() % 2 == 1 { v[..v.len() - 1].to_vec() } else { v };
            let x = LabeledState::tracked(Dim::Two, v.clone()).unwrap();
            prop_assume!(x.min_gap() > 1e-3);
            let mut total = [0.0, 0.0];
            for j in 0..x.len() {
                let d = ginibre_drift(j, &x, 100.0).unwrap();
                total[0] += d[0];
                total[1] += d[1];
            }
            let sx: f64 = v.chunks(2).map(|p| p[0]).sum();
            let sy: f64 = v.chunks(2).map(|p| p[1]).sum();
            prop_assert!((total[0] + sx).abs() < 1e-6 && (total[1] + sy).abs() < 1e-6);
        }

        #[test]
        fn frozen_env_is_additive(a in prop::collection::vec(1.0..5.0f64, 1..6), b in prop::collection::vec(-5.0..-1.0f64, 1..6), y0 in -0.5..0.5f64) {
            let psi = PairPotential::log_gas(2.0).unwrap();
            let phi = FreePotential::Quadratic { c: 0.3 };
            let y = inc(&[y0]);
            let ea = Configuration::from_1d(a.clone()).unwrap();
            let eb = Configuration::from_1d(b.clone()).unwrap();
            prop_assume!(ea.is_simple() && eb.is_simple());
            let all = ea.union(&eb).unwrap();
            let zero = Configuration::empty(Dim::One);
            let base = frozen_env_drift(0, &y, &zero, &phi, &psi).unwrap()[0];
            let da = frozen_env_drift(0, &y, &ea, &phi, &psi).unwrap()[0] - base;
            let db = frozen_env_drift(0, &y, &eb, &phi, &psi).unwrap()[0] - base;
            let dab = frozen_env_drift(0, &y, &all, &phi, &psi).unwrap()[0] - base;
            prop_assert!((dab - da - db).abs() < 1e-12);
        }
    }
}
