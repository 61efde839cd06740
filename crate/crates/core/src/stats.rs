//! Correlation estimators, spacing and semicircle comparisons, and the
//! Gaussian-tail integrability audits.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use libm::{erf, erfc};

use crate::configuration::{fmt_f64, Configuration, Dim, LabeledState};
use crate::error::{Error, Result};
use crate::quadrature;

/// `Erf(t) = (2π)^{−1/2} ∫_t^∞ e^{−x²/2} dx`, the standard normal upper tail.
pub fn erf_tail(t: f64) -> f64 {
    0.5 * erfc(t / std::f64::consts::SQRT_2)
}

const AUDIT_ABS_TOL: f64 = 1e-13;
const AUDIT_REL_TOL: f64 = 1e-13;

/// `∫_a^b ρ`, split at 0 where model densities typically have a kink.
fn integrate_density(rho: &(dyn Fn(f64) -> f64 + Sync), a: f64, b: f64) -> Result<f64> {
    let mut total = 0.0;
    let cuts: Vec<f64> = if a < 0.0 && b > 0.0 { vec![a, 0.0, b] } else { vec![a, b] };
    for w in cuts.windows(2) {
        total += quadrature::adaptive(rho, w[0], w[1], AUDIT_ABS_TOL, AUDIT_REL_TOL)?.value;
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub t: f64,
    pub big_r: f64,
    /// `(r, Erf(r/((r+R)T)) · ∫_{|x|≤r+R} ρ¹)`
    pub values: Vec<(f64, f64)>,
    pub nondecreasing: bool,
    pub nonincreasing: bool,
}

impl AuditReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,value\n");
        for (r, v) in &self.values {
            let _ = writeln!(s, "{},{}", fmt_f64(*r), fmt_f64(*v));
        }
        s
    }
}

/// `Erf(r/((r+R)T)) · ∫_{|x|≤r+R} ρ¹(x) dx` at each grid radius. Reporting only.
pub fn audit_a2(rho: &(dyn Fn(f64) -> f64 + Sync), t: f64, big_r: f64, grid: &[f64]) -> Result<AuditReport> {
    if !(t > 0.0) {
        return Err(Error::invalid("T", format!("must be positive, got {t}")));
    }
    if !(big_r >= 0.0) {
        return Err(Error::invalid("R", format!("must be ≥ 0, got {big_r}")));
    }
    let mut values = Vec::with_capacity(grid.len());
    for &r in grid {
        if !(r > 0.0) {
            return Err(Error::invalid("r", format!("grid radii must be positive, got {r}")));
        }
        let mass = integrate_density(rho, -(r + big_r), r + big_r)?;
        values.push((r, erf_tail(r / ((r + big_r) * t)) * mass));
    }
    let nondecreasing = values.windows(2).all(|w| w[1].1 >= w[0].1);
    let nonincreasing = values.windows(2).all(|w| w[1].1 <= w[0].1);
    Ok(AuditReport { t, big_r, values, nondecreasing, nonincreasing })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct A5Report {
    pub r: f64,
    pub t: f64,
    pub c: f64,
    /// Integral over `[−L, L]` at the final cutoff `L`.
    pub value: f64,
    pub cutoff: f64,
    /// Change of the integral when the cutoff was last doubled.
    pub last_increment: f64,
    /// The integrand never fell below threshold, or increments stopped shrinking.
    pub divergent: bool,
}

/// Integrand threshold defining the truncation point.
pub const A5_INTEGRAND_CUTOFF: f64 = 1e-14;

/// `∫_ℝ Erf((|x|−r)/√(cT)) ρ¹(x) dx`, truncated where the integrand is below
/// 1e−14, with one further cutoff doubling as the tail bound.
pub fn audit_a5(rho: &(dyn Fn(f64) -> f64 + Sync), r: f64, t: f64, c: f64) -> Result<A5Report> {
    if !(r >= 0.0) || !(t > 0.0) || !(c > 0.0) {
        return Err(Error::invalid("parameters", format!("need r ≥ 0, T > 0, c > 0; got r={r}, T={t}, c={c}")));
    }
    let s = (c * t).sqrt();
    let f = |x: f64| erf_tail((x.abs() - r) / s) * rho(x);
    let small = |l: f64| f(l).abs() < A5_INTEGRAND_CUTOFF && f(-l).abs() < A5_INTEGRAND_CUTOFF;
    let mut cutoff = r.max(1.0) + s;
    let mut doublings = 0;
    while !small(cutoff) {
        cutoff *= 2.0;
        doublings += 1;
        if doublings > 40 {
            return Ok(A5Report { r, t, c, value: f64::INFINITY, cutoff, last_increment: f64::INFINITY, divergent: true });
        }
    }
    let band = |a: f64, b: f64| -> Result<f64> { Ok(integrate_density(&f, -b, -a)? + integrate_density(&f, a, b)?) };
    let value = integrate_density(&f, -cutoff, cutoff)?;
    let first = band(cutoff, 2.0 * cutoff)?;
    let second = band(2.0 * cutoff, 4.0 * cutoff)?;
    let divergent = !first.is_finite() || second.abs() > first.abs() && first.abs() > AUDIT_ABS_TOL;
    Ok(A5Report { r, t, c, value: value + first, cutoff: 2.0 * cutoff, last_increment: first.abs(), divergent })
}

/// Equal-width bins on `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bins {
    pub a: f64,
    pub b: f64,
    pub count: usize,
}

impl Bins {
    pub fn new(a: f64, b: f64, count: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b > a) || count == 0 {
            return Err(Error::invalid("bins", format!("need a < b and at least one bin, got [{a}, {b}] × {count}")));
        }
        Ok(Bins { a, b, count })
    }

    pub fn width(&self) -> f64 {
        (self.b - self.a) / self.count as f64
    }

    pub fn edge(&self, i: usize) -> f64 {
        self.a + self.width() * i as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.a + self.width() * (i as f64 + 0.5)
    }

    pub fn index(&self, x: f64) -> Option<usize> {
        if !(x >= self.a && x < self.b) {
            return None;
        }
        Some((((x - self.a) / self.width()) as usize).min(self.count - 1))
    }
}

/// Binned estimate of `ρ¹` (`values[i]`) or `ρ²` (`values[i·bins + j]`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationEstimate {
    pub order: usize,
    pub bins: Bins,
    pub values: Vec<f64>,
    /// Monte Carlo standard error; `None` where no sample hit the bin.
    pub stderr: Vec<Option<f64>>,
    pub samples: usize,
}

impl CorrelationEstimate {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[if self.order == 1 { i } else { i * self.bins.count + j }]
    }

    pub fn error(&self, i: usize, j: usize) -> Option<f64> {
        self.stderr[if self.order == 1 { i } else { i * self.bins.count + j }]
    }

    pub fn to_csv(&self) -> String {
        let na = |e: Option<f64>| e.map_or_else(|| "NA".to_string(), fmt_f64);
        let b = &self.bins;
        let mut s = String::new();
        if self.order == 1 {
            s.push_str("x_lo,x_hi,value,stderr\n");
            for i in 0..b.count {
                let _ = writeln!(s, "{},{},{},{}", fmt_f64(b.edge(i)), fmt_f64(b.edge(i + 1)), fmt_f64(self.values[i]), na(self.stderr[i]));
            }
        } else {
            s.push_str("x_lo,x_hi,y_lo,y_hi,value,stderr\n");
            for i in 0..b.count {
                for j in 0..b.count {
                    let k = i * b.count + j;
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{}",
                        fmt_f64(b.edge(i)),
                        fmt_f64(b.edge(i + 1)),
                        fmt_f64(b.edge(j)),
                        fmt_f64(b.edge(j + 1)),
                        fmt_f64(self.values[k]),
                        na(self.stderr[k])
                    );
                }
            }
        }
        s
    }
}

/// Minimum sample count for [`empirical_correlation`].
pub const MIN_CORRELATION_SAMPLES: usize = 100;

/// Per-bin sums of counts and squared counts; integer arithmetic keeps the
/// parallel reduction exact and independent of order.
fn add_counts(mut a: (Vec<u64>, Vec<u128>), b: (Vec<u64>, Vec<u128>)) -> (Vec<u64>, Vec<u128>) {
    for (x, y) in a.0.iter_mut().zip(b.0) {
        *x += y;
    }
    for (x, y) in a.1.iter_mut().zip(b.1) {
        *x += y;
    }
    a
}

/// Histogram estimator of the `k`-point correlation function of 1D samples.
///
/// `ρ¹` counts points per bin, `ρ²` counts ordered pairs of distinct points;
/// both are divided by bin measure and sample count. Standard errors come from
/// the across-sample variance of the per-sample counts.
pub fn empirical_correlation(samples: &[Configuration], k: usize, bins: Bins) -> Result<CorrelationEstimate> {
    if !(1..=2).contains(&k) {
        return Err(Error::invalid("k", format!("only k ∈ {{1, 2}} are supported, got {k}")));
    }
    if samples.len() < MIN_CORRELATION_SAMPLES {
        return Err(Error::TooFew { what: "samples", needed: MIN_CORRELATION_SAMPLES, got: samples.len() });
    }
    if let Some(s) = samples.iter().find(|s| s.dim() != Dim::One) {
        return Err(Error::DimensionMismatch { expected: 1, got: s.dim().n() });
    }
    let nb = bins.count;
    let cells = if k == 1 { nb } else { nb * nb };
    let zero = || (vec![0u64; cells], vec![0u128; cells]);
    let (sum, sumsq) = samples
        .par_iter()
        .map(|s| {
            let mut per = vec![0u64; nb];
            for &x in s.flat() {
                if let Some(i) = bins.index(x) {
                    per[i] += 1;
                }
            }
            let counts: Vec<u64> = if k == 1 {
                per
            } else {
                let mut c = vec![0u64; cells];
                for i in 0..nb {
                    for j in 0..nb {
                        c[i * nb + j] = if i == j { per[i] * per[i].saturating_sub(1) } else { per[i] * per[j] };
                    }
                }
                c
            };
            let sq = counts.iter().map(|&c| c as u128 * c as u128).collect();
            (counts, sq)
        })
        .reduce(zero, add_counts);
    let n = samples.len() as f64;
    let measure = bins.width().powi(k as i32);
    let mut values = Vec::with_capacity(cells);
    let mut stderr = Vec::with_capacity(cells);
    for (s, q) in sum.iter().zip(&sumsq) {
        let mean = *s as f64 / n;
        values.push(mean / measure);
        if *s == 0 {
            stderr.push(None);
        } else {
            let var = ((*q as f64) - n * mean * mean) / (n - 1.0);
            stderr.push(Some(var.max(0.0).sqrt() / n.sqrt() / measure));
        }
    }
    Ok(CorrelationEstimate { order: k, bins, values, stderr, samples: samples.len() })
}

/// Reference distribution for nearest-neighbour spacings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpacingReference {
    /// `p(s) = (32/π²) s² e^{−4s²/π}`
    WignerSurmise2,
    /// `p(s) = e^{−s}`
    Exponential,
}

impl SpacingReference {
    pub fn cdf(self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        match self {
            SpacingReference::WignerSurmise2 => {
                erf(2.0 * s / PI.sqrt()) - 4.0 * s / PI * (-4.0 * s * s / PI).exp()
            }
            SpacingReference::Exponential => -(-s).exp_m1(),
        }
    }

    pub fn density(self, s: f64) -> f64 {
        if s < 0.0 {
            return 0.0;
        }
        match self {
            SpacingReference::WignerSurmise2 => 32.0 / (PI * PI) * s * s * (-4.0 * s * s / PI).exp(),
            SpacingReference::Exponential => (-s).exp(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpacingReport {
    /// Unfolded spacings, normalised to mean 1, sorted.
    pub spacings: Vec<f64>,
    pub histogram: Bins,
    pub density: Vec<f64>,
    pub ks: f64,
    pub reference: SpacingReference,
}

impl SpacingReport {
    pub fn mean(&self) -> f64 {
        self.spacings.iter().sum::<f64>() / self.spacings.len() as f64
    }

    /// Columns `s_lo, s_hi, density, reference`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s_lo,s_hi,density,reference\n");
        let b = &self.histogram;
        for i in 0..b.count {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                fmt_f64(b.edge(i)),
                fmt_f64(b.edge(i + 1)),
                fmt_f64(self.density[i]),
                fmt_f64(self.reference.density(b.center(i)))
            );
        }
        out
    }
}

/// Minimum number of spacings for [`spacing_distribution`].
pub const MIN_SPACINGS: usize = 1000;

/// Nearest-neighbour spacings inside `window`, unfolded by the mean counting
/// function estimated from the pooled sample, normalised to
/// mean 1 and compared with `reference` by the Kolmogorov–Smirnov distance.
pub fn spacing_distribution(samples: &[LabeledState], window: (f64, f64), reference: SpacingReference) -> Result<SpacingReport> {
    let (lo, hi) = window;
    if !(hi > lo) {
        return Err(Error::invalid("window", format!("need lo < hi, got ({lo}, {hi})")));
    }
    if let Some(s) = samples.iter().find(|s| s.dim() != Dim::One) {
        return Err(Error::DimensionMismatch { expected: 1, got: s.dim().n() });
    }
    let unfold = CountingFunction::new(samples);
    let unfold = |x: f64| unfold.eval(x);
    let mut spacings = Vec::new();
    for s in samples {
        let mut xs = s.coords().to_vec();
        xs.sort_by(f64::total_cmp);
        let inside: Vec<f64> = xs.into_iter().filter(|&x| x >= lo && x <= hi).map(unfold).collect();
        spacings.extend(inside.windows(2).map(|w| w[1] - w[0]));
    }
    if spacings.len() < MIN_SPACINGS {
        return Err(Error::TooFew { what: "spacings", needed: MIN_SPACINGS, got: spacings.len() });
    }
    let mean = spacings.iter().sum::<f64>() / spacings.len() as f64;
    spacings.iter_mut().for_each(|s| *s /= mean);
    spacings.sort_by(f64::total_cmp);
    let ks = ks_distance(&spacings, |s| reference.cdf(s));
    let histogram = Bins::new(0.0, 4.0, 40)?;
    let mut density = vec![0.0; histogram.count];
    for &s in &spacings {
        if let Some(i) = histogram.index(s) {
            density[i] += 1.0;
        }
    }
    let norm = spacings.len() as f64 * histogram.width();
    density.iter_mut().for_each(|d| *d /= norm);
    Ok(SpacingReport { spacings, histogram, density, ks, reference })
}

/// Mean counting function `N̄(x) = E #{points ≤ x}` estimated from pooled samples.
///
/// Piecewise linear through knots at every `10·S`-th pooled order statistic
/// (about ten mean spacings apart), each knot valued by its mid-rank divided
/// by the sample count `S`. Interpolating avoids the `1/S` granularity of the
/// raw rank transform.
struct CountingFunction {
    knots: Vec<(f64, f64)>,
}

impl CountingFunction {
    fn new(samples: &[LabeledState]) -> Self {
        let mut pooled: Vec<f64> = samples.iter().flat_map(|s| s.coords().iter().copied()).collect();
        pooled.sort_by(f64::total_cmp);
        let m = samples.len().max(1) as f64;
        let stride = (10 * samples.len()).max(1);
        let mut knots: Vec<(f64, f64)> = Vec::new();
        if pooled.is_empty() {
            return CountingFunction { knots };
        }
        let last = pooled.len() - 1;
        for i in (0..=last).step_by(stride).chain(std::iter::once(last)) {
            let x = pooled[i];
            if knots.last().is_some_and(|k| k.0 >= x) {
                continue;
            }
            let below = pooled.partition_point(|&p| p < x);
            let upto = pooled.partition_point(|&p| p <= x);
            knots.push((x, 0.5 * (below + upto) as f64 / m));
        }
        CountingFunction { knots }
    }

    fn eval(&self, x: f64) -> f64 {
        let k = &self.knots;
        match k.len() {
            0 => 0.0,
            1 => k[0].1,
            n => {
                let i = k.partition_point(|p| p.0 <= x).clamp(1, n - 1);
                let ((x0, y0), (x1, y1)) = (k[i - 1], k[i]);
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        }
    }
}

/// `sup_x |F_n(x) − F(x)|` for sorted data.
pub fn ks_distance(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        // Treat ties as one jump.
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let f = cdf(sorted[i]);
        d = d.max(f - i as f64 / n).max((j + 1) as f64 / n - f);
        i = j + 1;
    }
    d
}

/// CDF of the semicircle law on `[−R, R]`.
pub fn semicircle_cdf(x: f64, radius: f64) -> f64 {
    if x <= -radius {
        return 0.0;
    }
    if x >= radius {
        return 1.0;
    }
    let u = x / radius;
    0.5 + (u * (1.0 - u * u).sqrt() + u.asin()) / PI
}

/// Minimum pooled point count for [`semicircle_compare`].
pub const MIN_SEMICIRCLE_POINTS: usize = 10_000;

/// KS distance between the pooled points and the semicircle of radius `2√N`.
pub fn semicircle_compare(samples: &[LabeledState], n: usize) -> Result<f64> {
    semicircle_ks(samples, 2.0 * (n as f64).sqrt())
}

/// KS distance between the pooled points and the semicircle of radius `radius`.
pub fn semicircle_ks(samples: &[LabeledState], radius: f64) -> Result<f64> {
    let mut pooled: Vec<f64> = samples.iter().flat_map(|s| s.coords().iter().copied()).collect();
    if pooled.len() < MIN_SEMICIRCLE_POINTS {
        return Err(Error::TooFew { what: "points", needed: MIN_SEMICIRCLE_POINTS, got: pooled.len() });
    }
    pooled.sort_by(f64::total_cmp);
    Ok(ks_distance(&pooled, |x| semicircle_cdf(x, radius)))
}
