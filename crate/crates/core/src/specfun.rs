//! Complex special functions behind the noise characteristic function.
//!
//! The noise attached to a log-squared normalized increment has density
//! `k(x) = (1/sqrt(2 pi)) exp(x/2) exp(-exp(x)/2)` (the law of `log Z^2`
//! for standard normal `Z`), with characteristic function
//! `phi_k(t) = pi^{-1/2} 2^{it} Gamma(1/2 + it)`. The deconvolution kernel
//! divides by `phi_k`, whose magnitude decays like `sqrt(2) e^{-pi|t|/2}`,
//! so all reciprocals are taken in log space.

use num_complex::Complex64;

use crate::error::{Error, Result};

const LN_PI: f64 = 1.144_729_885_849_400_2;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// `B_{2k} / (2k (2k-1))` for the Stirling series, k = 1..=10.
const STIRLING_COEFFS: [f64; 10] = [
    8.333_333_333_333_333e-2,
    -2.777_777_777_777_778e-3,
    7.936_507_936_507_937e-4,
    -5.952_380_952_380_953e-4,
    8.417_508_417_508_418e-4,
    -1.917_526_917_526_917_5e-3,
    6.410_256_410_256_41e-3,
    -2.955_065_359_477_124e-2,
    1.796_443_723_688_305_7e-1,
    -1.392_432_216_905_901_1,
];

/// Radius beyond which the truncated Stirling series is at machine
/// precision; smaller arguments are shifted up by the recurrence
/// `log Gamma(z) = log Gamma(z+1) - log z`.
const STIRLING_RADIUS_SQ: f64 = 256.0;

/// Principal-branch log-Gamma on the right half plane.
pub fn log_gamma_complex(z: Complex64) -> Result<Complex64> {
    if !(z.re > 0.0) || !z.im.is_finite() {
        return Err(Error::Domain(format!(
            "log_gamma_complex needs re(z) > 0, got {z}"
        )));
    }
    let mut zz = z;
    let mut shift = Complex64::new(0.0, 0.0);
    // The argument stays in the right half plane, so each principal log in
    // the recurrence is branch-safe.
    while zz.norm_sqr() < STIRLING_RADIUS_SQ {
        shift += zz.ln();
        zz += 1.0;
    }
    Ok(stirling_log_gamma(zz) - shift)
}

fn stirling_log_gamma(z: Complex64) -> Complex64 {
    let ln_z = z.ln();
    let mut acc = (z - 0.5) * ln_z - z + LN_SQRT_2PI;
    let inv_sq = (z * z).inv();
    let mut pow = z.inv();
    for c in STIRLING_COEFFS {
        acc += pow * c;
        pow *= inv_sq;
    }
    acc
}

/// Density of the additive noise `log Z^2`, `Z` standard normal.
pub fn noise_density_k(x: f64) -> f64 {
    // Underflows cleanly to 0 in both tails.
    (0.5 * x - 0.5 * x.exp()).exp() / SQRT_2PI
}

/// Log of the noise characteristic function, `t >= 0`.
fn log_phi_k_nonneg(t: f64) -> Complex64 {
    debug_assert!(t >= 0.0);
    let lg = log_gamma_complex(Complex64::new(0.5, t))
        .expect("Gamma argument 1/2 + it always has positive real part");
    Complex64::new(-0.5 * LN_PI, t * std::f64::consts::LN_2) + lg
}

/// Log of `phi_k(t)`. Conjugate symmetry `phi_k(-t) = conj(phi_k(t))` is
/// exact in floating point because negative arguments are canonicalized.
pub fn log_phi_k(t: f64) -> Complex64 {
    if t == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let l = log_phi_k_nonneg(t.abs());
    if t < 0.0 {
        l.conj()
    } else {
        l
    }
}

/// Characteristic function of the noise density.
pub fn phi_k(t: f64) -> Complex64 {
    if t == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    log_phi_k(t).exp()
}

/// `1 / phi_k(t)`, evaluated as `exp(-log phi_k)` to dodge overflow until
/// far beyond any bandwidth this crate accepts.
pub fn inv_phi_k(t: f64) -> Complex64 {
    (-log_phi_k(t)).exp()
}

/// `|1 / phi_k(t)|`, again through log space.
pub fn inv_phi_k_magnitude(t: f64) -> f64 {
    (-log_phi_k(t).re).exp()
}

/// Leading-order magnitude of `phi_k`: `sqrt(2) exp(-pi |t| / 2)`.
pub fn phi_k_asymptotic_magnitude(t: f64) -> Result<f64> {
    if t == 0.0 {
        return Err(Error::Domain(
            "phi_k_asymptotic_magnitude is undefined at t = 0".into(),
        ));
    }
    Ok(std::f64::consts::SQRT_2 * (-0.5 * std::f64::consts::PI * t.abs()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn log_gamma_at_one_is_zero() {
        let v = log_gamma_complex(Complex64::new(1.0, 0.0)).unwrap();
        assert!(v.norm() < 1e-14, "log Gamma(1) = {v}");
    }

    #[test]
    fn log_gamma_at_half_is_log_sqrt_pi() {
        let v = log_gamma_complex(Complex64::new(0.5, 0.0)).unwrap();
        assert!((v.re - 0.5 * PI.ln()).abs() < 1e-14);
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn log_gamma_rejects_left_half_plane() {
        assert!(log_gamma_complex(Complex64::new(0.0, 1.0)).is_err());
        assert!(log_gamma_complex(Complex64::new(-1.0, 0.5)).is_err());
    }

    #[test]
    fn log_gamma_recurrence_residual_is_tiny() {
        // log Gamma(z + 1) - log Gamma(z) = log z across the test line.
        for i in 0..=200 {
            let t = i as f64;
            let z = Complex64::new(0.5, t);
            let a = log_gamma_complex(z + 1.0).unwrap();
            let b = log_gamma_complex(z).unwrap();
            let resid = (a - b - z.ln()).norm();
            assert!(resid < 1e-12, "recurrence residual {resid:.2e} at t = {t}");
        }
    }

    #[test]
    fn gamma_half_plus_i_magnitude() {
        // |Gamma(1/2 + it)|^2 = pi / cosh(pi t)
        let g = log_gamma_complex(Complex64::new(0.5, 1.0)).unwrap().exp();
        let expect = (PI / (PI.cosh())).sqrt();
        assert!((g.norm() - expect).abs() < 1e-13, "got {}", g.norm());
        assert!((g.norm() - 0.520_6).abs() < 1e-4);
    }

    #[test]
    fn noise_density_values() {
        // k(0) = e^{-1/2} / sqrt(2 pi)
        let want = (-0.5f64).exp() / SQRT_2PI;
        assert!((noise_density_k(0.0) - want).abs() < 1e-15);
        // k(-10): the double-exponential factor is 1 - O(1e-5)
        let approx = (-5.0f64).exp() / SQRT_2PI;
        assert!((noise_density_k(-10.0) - approx).abs() < 1e-7);
        assert_eq!(noise_density_k(1e4), 0.0);
        assert_eq!(noise_density_k(-1e4), 0.0);
    }

    #[test]
    fn phi_k_at_zero_is_one() {
        assert_eq!(phi_k(0.0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn phi_k_magnitude_via_sech_identity() {
        // |phi_k(t)| = 1 / sqrt(cosh(pi t))
        for &t in &[0.5, 1.0, 2.0, 5.0, 20.0] {
            let m = phi_k(t).norm();
            let want = 1.0 / (PI * t).cosh().sqrt();
            assert!(((m - want) / want).abs() < 1e-12, "t = {t}: {m} vs {want}");
        }
        assert!((phi_k(1.0).norm() - 0.293_71).abs() < 1e-5);
    }

    #[test]
    fn inv_phi_k_is_reciprocal() {
        for &t in &[0.3, 1.7, 9.0, 24.0] {
            let p = phi_k(t) * inv_phi_k(t);
            assert!((p - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            assert!((inv_phi_k_magnitude(t) - inv_phi_k(t).norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn asymptotic_magnitude_formula_and_symmetry() {
        let v = phi_k_asymptotic_magnitude(2.0).unwrap();
        assert!((v - std::f64::consts::SQRT_2 * (-PI).exp()).abs() < 1e-15);
        assert!((v - 0.061_12).abs() < 1e-5);
        assert_eq!(
            phi_k_asymptotic_magnitude(-7.3).unwrap(),
            phi_k_asymptotic_magnitude(7.3).unwrap()
        );
        assert!(phi_k_asymptotic_magnitude(0.0).is_err());
    }
}
