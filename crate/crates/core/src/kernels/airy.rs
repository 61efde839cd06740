//! Airy function Ai and its derivative on the real line.
//!
//! * `|x| ≤ 2.5`: Maclaurin series.
//! * `x > 8.5`, `x < −8.5`: asymptotic expansions in `ζ = (2/3)|x|^{3/2}`,
//!   truncated at the smallest term.
//! * In between, the solution is transported along `y'' = x y` by Taylor steps:
//!   from `x = 0` toward negative `x` (oscillatory, stable in either direction)
//!   and backward from the asymptotic anchor at `8.5` for positive `x`
//!   (backward is the stable direction for the recessive solution).

use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{Error, Result};

/// Ai(0) = 3^{−2/3} / Γ(2/3)
pub const AI0: f64 = 0.355_028_053_887_817_24;
/// Ai'(0) = −3^{−1/3} / Γ(1/3)
pub const AIP0: f64 = -0.258_819_403_792_806_8;

const SERIES_LIMIT: f64 = 2.5;
const ASYMPTOTIC_LIMIT: f64 = 8.5;
const MAX_STEP: f64 = 0.75;

/// Supported argument range of [`airy`].
pub const AIRY_RANGE: (f64, f64) = (-200.0, 20.0);

/// `(Ai(x), Ai'(x))` for `x ∈ [−200, 20]`.
pub fn airy(x: f64) -> Result<(f64, f64)> {
    if !(AIRY_RANGE.0..=AIRY_RANGE.1).contains(&x) {
        return Err(Error::OutOfRange { function: "airy", x });
    }
    Ok(airy_unchecked(x))
}

/// As [`airy`], without the range check. Beyond `x = 20` the positive asymptotic
/// expansion is used as is (values below 1e−26); kernels integrating Ai over
/// half-lines need those tails.
pub(crate) fn airy_unchecked(x: f64) -> (f64, f64) {
    if x.abs() <= SERIES_LIMIT {
        maclaurin(x)
    } else if x > ASYMPTOTIC_LIMIT {
        asymptotic_positive(x)
    } else if x < -ASYMPTOTIC_LIMIT {
        asymptotic_negative(-x)
    } else if x > 0.0 {
        let (a, da) = asymptotic_positive(ASYMPTOTIC_LIMIT);
        transport(ASYMPTOTIC_LIMIT, a, da, x)
    } else {
        transport(0.0, AI0, AIP0, x)
    }
}

fn maclaurin(x: f64) -> (f64, f64) {
    if x.abs() < 1e-100 {
        return (AI0, AIP0);
    }
    let x3 = x * x * x;
    // f = Σ 1·4·…(3k−2) x^{3k}/(3k)!,  g = Σ 2·5·…(3k−1) x^{3k+1}/(3k+1)!
    let (mut f, mut df) = (1.0, 0.0);
    let (mut g, mut dg) = (x, 1.0);
    let (mut tf, mut tg) = (1.0, x);
    for k in 1..200 {
        let k3 = 3.0 * k as f64;
        tf *= x3 / (k3 * (k3 - 1.0));
        tg *= x3 / ((k3 + 1.0) * k3);
        f += tf;
        df += tf * k3 / x;
        g += tg;
        dg += tg * (k3 + 1.0) / x;
        if tf.abs() < 1e-18 * f.abs().max(1e-300) && tg.abs() < 1e-18 * g.abs().max(1e-300) {
            break;
        }
    }
    (AI0 * f + AIP0 * g, AI0 * df + AIP0 * dg)
}

/// Coefficients u_k, v_k of the Airy asymptotic expansions.
fn uv(k_max: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![1.0];
    let mut v = vec![1.0];
    for k in 1..=k_max {
        let kf = k as f64;
        let uk = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        u.push(uk);
        v.push(-(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * uk);
    }
    (u, v)
}

/// Sums `Σ sign(k)·c_k ζ^{−k}` over the indices yielded, stopping at the smallest term.
fn truncated_sum(c: &[f64], zeta: f64, idx: impl Iterator<Item = usize>, alternate: bool) -> f64 {
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    for (j, k) in idx.enumerate() {
        if k >= c.len() {
            break;
        }
        let term = c[k] * zeta.powi(-(k as i32));
        if term.abs() > last {
            break;
        }
        last = term.abs();
        let sign = if alternate && j % 2 == 1 { -1.0 } else { 1.0 };
        sum += sign * term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn asymptotic_positive(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let (u, v) = uv(60);
    // Σ (−1)^k u_k ζ^{−k}
    let su = truncated_sum(&u, zeta, 0..u.len(), true);
    let sv = truncated_sum(&v, zeta, 0..v.len(), true);
    let e = (-zeta).exp() / (2.0 * PI.sqrt());
    let q = x.powf(0.25);
    (e / q * su, -e * q * sv)
}

fn asymptotic_negative(x: f64) -> (f64, f64) {
    // x > 0 here; returns (Ai(−x), Ai'(−x)).
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let (u, v) = uv(80);
    let even = |c: &[f64]| truncated_sum(c, zeta, (0..).step_by(2), true);
    let odd = |c: &[f64]| truncated_sum(c, zeta, (1..).step_by(2), true);
    let (s, c) = (zeta - FRAC_PI_4).sin_cos();
    let q = x.powf(0.25);
    let ai = (c * even(&u) + s * odd(&u)) / (PI.sqrt() * q);
    let aip = q / PI.sqrt() * (s * even(&v) - c * odd(&v));
    (ai, aip)
}

/// Carries `(y, y')` of a solution of `y'' = t·y` from `t = from` to `t = to`.
pub(crate) fn transport(from: f64, mut y: f64, mut dy: f64, to: f64) -> (f64, f64) {
    let steps = ((to - from).abs() / MAX_STEP).ceil().max(1.0) as usize;
    let h = (to - from) / steps as f64;
    let mut t0 = from;
    for _ in 0..steps {
        let (ny, ndy) = taylor_step(t0, y, dy, h);
        y = ny;
        dy = ndy;
        t0 += h;
    }
    (y, dy)
}

fn taylor_step(t0: f64, y: f64, dy: f64, h: f64) -> (f64, f64) {
    // a_{n+2} = (t0 a_n + a_{n−1}) / ((n+2)(n+1))
    let (mut a_prev, mut a0, mut a1) = (0.0, y, dy);
    let mut val = a0 + a1 * h;
    let mut der = a1;
    let mut hp = h; // h^{n+1} for the coefficient a_{n+2}
    let scale = y.abs().max(dy.abs()).max(1e-300);
    for n in 0..200 {
        let nf = n as f64;
        let a2 = (t0 * a0 + a_prev) / ((nf + 2.0) * (nf + 1.0));
        der += (nf + 2.0) * a2 * hp;
        hp *= h;
        val += a2 * hp;
        a_prev = a0;
        a0 = a1;
        a1 = a2;
        // At t0 = 0 every third coefficient vanishes, so test three in a row.
        let tail = (a_prev.abs() + a0.abs() + a1.abs()) * hp.abs();
        if n > 4 && tail < 1e-19 * scale {
            break;
        }
    }
    (val, der)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// (x, Ai, Ai') from an independent 30-digit evaluation.
    const REFERENCE: [(f64, f64, f64); 17] = [
        (0.0, 0.355_028_053_887_817_24, -0.258_819_403_792_806_8),
        (1.0, 0.135_292_416_312_881_4, -0.159_147_441_296_793_2),
        (-1.0, 0.535_560_883_292_352_1, -0.010_160_567_116_645_209),
        (2.5, 0.015_725_923_380_470_49, -0.026_250_881_035_903_23),
        (-2.5, -0.112_325_067_692_966_09, 0.678_852_734_264_794_4),
        (4.0, 9.515_638_512_048_019e-4, -1.958_640_950_204_179e-3),
        (5.0, 1.083_444_281_360_744_2e-4, -2.474_138_908_684_624_8e-4),
        (7.0, 7.492_128_863_997_167e-7, -2.008_150_894_738_792e-6),
        (-5.0, 0.350_761_009_024_114_3, 0.327_192_818_554_443_14),
        (-7.0, 0.184_280_835_250_505_63, -0.771_008_168_410_126_5),
        (-10.0, 0.040_241_238_486_443_19, 0.996_265_044_132_790_1),
        (10.0, 1.104_753_255_289_868_6e-10, -3.520_633_676_738_923_6e-10),
        (-20.0, -0.176_406_127_077_984_7, 0.892_862_856_736_471_2),
        (-40.0, -0.045_933_923_437_957_25, -1.389_090_875_260_718_4),
        (15.0, 2.164_962_520_737_992_3e-18, -8.420_567_954_017_773e-18),
        (-100.0, 0.176_753_393_239_552_88, -0.242_297_031_660_583_8),
        (20.0, 1.691_672_868_670_540_3e-27, -7.586_391_625_748_360_5e-27),
    ];

    #[test]
    fn matches_reference_values() {
        for &(x, ai, aip) in &REFERENCE {
            let (a, d) = airy(x).unwrap();
            // Relative to the local amplitude on the oscillatory side.
            let amp = if x < 0.0 { (-x).powf(-0.25) / PI.sqrt() } else { ai.abs() };
            let damp = if x < 0.0 { (-x).powf(0.25) / PI.sqrt() } else { aip.abs() };
            let tol = if x < -40.0 { 1e-9 } else { 1e-10 };
            assert!((a - ai).abs() <= tol * amp, "Ai({x}) = {a}, expected {ai}");
            assert!((d - aip).abs() <= tol * damp, "Ai'({x}) = {d}, expected {aip}");
        }
    }

    #[test]
    fn origin_values_from_gamma() {
        use libm::tgamma as gamma;
        let ai0 = 3f64.powf(-2.0 / 3.0) / gamma(2.0 / 3.0);
        let aip0 = -(3f64.powf(-1.0 / 3.0)) / gamma(1.0 / 3.0);
        let (a, d) = airy(0.0).unwrap();
        assert!((a - ai0).abs() < 1e-15 && (a - 0.3550280538878172).abs() < 1e-15);
        assert!((d - aip0).abs() < 1e-15 && (d + 0.2588194037928068).abs() < 1e-15);
    }

    #[test]
    fn satisfies_the_airy_equation() {
        let h = 1e-3;
        let mut x = -10.0;
        while x <= 5.0 {
            let f = |t: f64| airy(t).unwrap().0;
            let d2 = (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) / (12.0 * h * h);
            assert!((d2 - x * f(x)).abs() < 1e-6, "x={x}: {}", d2 - x * f(x));
            // Derivative consistency: d/dx Ai = Ai'.
            let d1 = (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h);
            assert!((d1 - airy(x).unwrap().1).abs() < 1e-6);
            x += 0.137;
        }
    }

    #[test]
    fn regions_join_continuously() {
        // Each pair evaluates the same point by the methods on either side of a switch.
        let close = |a: (f64, f64), b: (f64, f64), scale: f64| {
            (a.0 - b.0).abs() < 1e-11 * scale && (a.1 - b.1).abs() < 1e-11 * scale
        };
        let (a, da) = asymptotic_positive(ASYMPTOTIC_LIMIT);
        assert!(close(maclaurin(SERIES_LIMIT), transport(ASYMPTOTIC_LIMIT, a, da, SERIES_LIMIT), 0.03));
        assert!(close(maclaurin(-SERIES_LIMIT), transport(0.0, AI0, AIP0, -SERIES_LIMIT), 1.0));
        assert!(close(asymptotic_negative(ASYMPTOTIC_LIMIT), transport(0.0, AI0, AIP0, -ASYMPTOTIC_LIMIT), 1.0));
    }

    #[test]
    fn decays_monotonically_on_the_positive_axis() {
        let mut prev = airy(1.0).unwrap().0;
        for k in 1..=380 {
            let a = airy(1.0 + 0.05 * k as f64).unwrap().0;
            assert!(a < prev && a > 0.0);
            prev = a;
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(airy(20.5).is_err());
        assert!(airy(-200.5).is_err());
        assert!(airy(f64::NAN).is_err());
        assert!(airy(-200.0).is_ok());
    }
}
