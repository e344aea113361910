//! Quadrature and summation primitives shared by the estimator and the
//! simulation oracles.
//!
//! Everything here is deterministic for fixed inputs. Sums over data use
//! pairwise reduction so that results do not depend on evaluation order
//! or degree of parallelism.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Composite Simpson rule with `n` subintervals (`n` even, `n >= 2`).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    debug_assert!(n >= 2 && n % 2 == 0, "simpson needs an even interval count");
    let h = (b - a) / n as f64;
    let mut terms = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let x = if m == n { b } else { a + m as f64 * h };
        let w = simpson_weight(m, n);
        terms.push(w * f(x));
    }
    pairwise_sum(&terms) * h / 3.0
}

/// Complex-valued composite Simpson rule.
pub fn simpson_complex<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, n: usize) -> Complex64 {
    debug_assert!(n >= 2 && n % 2 == 0);
    let h = (b - a) / n as f64;
    let mut terms = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let x = if m == n { b } else { a + m as f64 * h };
        terms.push(f(x) * simpson_weight(m, n));
    }
    pairwise_sum_complex(&terms) * (h / 3.0)
}

#[inline]
pub fn simpson_weight(m: usize, n: usize) -> f64 {
    if m == 0 || m == n {
        1.0
    } else if m % 2 == 1 {
        4.0
    } else {
        2.0
    }
}

/// Adaptive Simpson with Richardson acceptance, for smooth oracles.
///
/// Fails if the recursion depth limit is hit before the local tolerance is
/// met, which is how callers detect divergent integrands.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    adaptive_step(f, a, b, fa, fm, fb, whole, tol, 64)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if !delta.is_finite() {
        return Err(Error::Quadrature(format!(
            "non-finite integrand on [{a}, {b}]"
        )));
    }
    // Second disjunct: the residual has reached the rounding floor of the
    // local values, refining further only chases noise.
    let floor = 256.0 * f64::EPSILON * (left.abs() + right.abs());
    if delta.abs() <= 15.0 * tol || delta.abs() <= floor {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Quadrature(format!(
            "depth limit reached on [{a}, {b}] (residual {delta:.3e})"
        )));
    }
    let l = adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Ok(l + r)
}

/// Pairwise (tree) summation. Deterministic and far more accurate than a
/// running sum for the long data sums used by the estimator.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        n if n <= 32 => xs.iter().sum(),
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

pub fn pairwise_sum_complex(xs: &[Complex64]) -> Complex64 {
    match xs.len() {
        0 => Complex64::new(0.0, 0.0),
        n if n <= 32 => xs.iter().sum(),
        n => {
            let mid = n / 2;
            pairwise_sum_complex(&xs[..mid]) + pairwise_sum_complex(&xs[mid..])
        }
    }
}

/// Subinterval count for an integrand oscillating at `freq` radians over a
/// unit interval: at least `base`, at least 8 nodes per radian, rounded up
/// to a power of two so node tables can be reused.
pub fn oscillation_intervals(base: usize, freq: f64) -> usize {
    let need = (8.0 * freq.abs()).ceil();
    let need = if need.is_finite() {
        need as usize
    } else {
        usize::MAX / 4
    };
    need.max(base).max(2).next_power_of_two()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_exact_on_cubics() {
        let val = simpson(|x| x * x * x - 2.0 * x + 1.0, -1.0, 3.0, 2);
        // exact: [x^4/4 - x^2 + x] over [-1, 3]
        let exact = (81.0 / 4.0 - 9.0 + 3.0) - (0.25 - 1.0 - 1.0);
        assert!((val - exact).abs() < 1e-12, "got {val}, want {exact}");
    }

    #[test]
    fn adaptive_matches_known_integral() {
        let v = adaptive_simpson(&|x: f64| (-x * x).exp(), -8.0, 8.0, 1e-12).unwrap();
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn adaptive_rejects_non_finite() {
        let r = adaptive_simpson(&|x: f64| 1.0 / x, 0.0, 1.0, 1e-10);
        assert!(r.is_err());
    }

    #[test]
    fn pairwise_is_deterministic_and_close_to_naive() {
        let xs: Vec<f64> = (0..10_001)
            .map(|i| (i as f64 * 0.37).sin() * 1e-3)
            .collect();
        let a = pairwise_sum(&xs);
        let b = pairwise_sum(&xs);
        assert_eq!(a, b);
        let naive: f64 = xs.iter().sum();
        assert!((a - naive).abs() < 1e-9);
    }

    #[test]
    fn oscillation_intervals_scales_and_rounds() {
        assert_eq!(oscillation_intervals(256, 1.0), 256);
        assert_eq!(oscillation_intervals(256, 100.0), 1024);
        assert!(oscillation_intervals(64, 0.0) >= 64);
    }
}
