//! Closed-form limiting spectral quantities: the characteristic function
//! φ_m(t) = (1/m) e^{-t²/2m} L^{(1)}_{m-1}(t²/m), the density f_m (a Gaussian
//! times an even polynomial of degree 2m-2), the Wigner semi-ellipse, and the
//! m → ∞ convergence diagnostics.
//!
//! Polynomial coefficients are precomputed once per m in exact rationals (the
//! inner alternating sums cancel catastrophically in floating point for
//! m ≳ 20) and converted to f64 for evaluation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact;
use crate::moments;


/// Coefficients q_i of L^{(1)}_{m-1}(x) = Σ_i q_i x^i, from the explicit
/// representation L_n^{(α)}(x) = Σ_i C(n+α, n-i) (-x)^i / i!.
fn laguerre1_coeffs(m: usize) -> Vec<f64> {
    (0..m)
        .map(|i| {
            let c = BigRational::new(exact::binomial(m, m - 1 - i), exact::factorial(i));
            let v = c.to_f64().expect("Laguerre coefficient fits f64");
            if i % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .collect()
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn deriv(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| i as f64 * c)
        .collect()
}

/// Characteristic function of the limiting spectral measure,
/// φ_m(t) = (1/m) e^{-t²/2m} L^{(1)}_{m-1}(t²/m). φ_m(0) = 1; φ_1 is the
/// Gaussian characteristic function e^{-t²/2}.
pub fn phi(m: usize, t: f64) -> f64 {
    assert!(m >= 1, "phi needs m >= 1");
    let x = t * t / m as f64;
    let lag = horner(&laguerre1_coeffs(m), x);
    lag / m as f64 * (-0.5 * x).exp()
}

/// (φ_m, φ_m', φ_m'') with analytic derivatives of the Laguerre form.
pub fn phi_derivatives(m: usize, t: f64) -> (f64, f64, f64) {
    let mf = m as f64;
    let q = laguerre1_coeffs(m);
    let q1 = deriv(&q);
    let q2 = deriv(&q1);
    let x = t * t / mf;
    let xp = 2.0 * t / mf;
    let xpp = 2.0 / mf;
    let l = horner(&q, x);
    let lp = horner(&q1, x);
    let lpp = horner(&q2, x);
    let e = (-0.5 * x).exp() / mf;
    let f = e * l;
    let fp = e * (lp - 0.5 * l) * xp;
    let fpp = e * ((lpp - lp + 0.25 * l) * xp * xp + (lp - 0.5 * l) * xpp);
    (f, fp, fpp)
}

/// Residual of t φ'' + 3 φ' + t (4 - (t/m)²) φ = 0.
pub fn phi_ode_residual(m: usize, t: f64) -> f64 {
    let (f, fp, fpp) = phi_derivatives(m, t);
    let tm = t / m as f64;
    t * fpp + 3.0 * fp + t * (4.0 - tm * tm) * f
}

/// Power-series route to φ_m through the limiting moments:
/// Σ_{k<=k_max} (-t²)^k M_{2k;m} / (2k)!.
pub fn phi_series_truncated(m: usize, t: f64, k_max: usize) -> Result<f64> {
    let mut acc = 0.0;
    for k in 0..=k_max {
        let coeff = moments::limiting_moment(k, m)?
            / BigRational::from_integer(exact::factorial(2 * k));
        let term = coeff.to_f64().unwrap() * (-t * t).powi(k as i32);
        acc += term;
    }
    Ok(acc)
}

/// The limiting spectral density f_m: Gaussian prefactor times an even
/// polynomial in (m x²) with exactly precomputed coefficients.
pub struct DensityModel {
    m: usize,
    coeffs: Vec<f64>,
    coeffs_exact: Vec<BigRational>,
}

impl DensityModel {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::config("density needs m >= 1"));
        }
        let half = BigRational::new(BigInt::from(-1), BigInt::from(2));
        let mut coeffs_exact = Vec::with_capacity(m);
        for r in 0..m {
            // a_r = (1/(2r)!) Σ_s C(m, r+s+1) (2r+2s)!/((r+s)! s!) (-1/2)^s
            let mut inner = BigRational::zero();
            let mut pow = BigRational::one();
            for s in 0..=(m - r) {
                let c = exact::binomial(m, r + s + 1);
                if !c.is_zero() {
                    let term = BigRational::from_integer(c * exact::factorial(2 * r + 2 * s))
                        / BigRational::from_integer(exact::factorial(r + s) * exact::factorial(s));
                    inner += term * &pow;
                }
                pow *= &half;
            }
            coeffs_exact.push(inner / BigRational::from_integer(exact::factorial(2 * r)));
        }
        let coeffs = coeffs_exact
            .iter()
            .map(|c| c.to_f64().expect("density coefficient fits f64"))
            .collect();
        Ok(DensityModel {
            m,
            coeffs,
            coeffs_exact,
        })
    }

    pub fn period(&self) -> usize {
        self.m
    }

    /// f_m(x). Float Horner in y = m x²; for y large enough to overflow the
    /// polynomial evaluation, falls back to exact arithmetic with log
    /// extraction.
    pub fn eval(&self, x: f64) -> f64 {
        let mf = self.m as f64;
        let y = mf * x * x;
        if y > 1200.0 {
            return self.eval_exact(x);
        }
        let p = horner(&self.coeffs, y);
        p * (-0.5 * y).exp() / (2.0 * std::f64::consts::PI * mf).sqrt()
    }

    /// Exact-rational Horner evaluation (slow path / cross-check oracle).
    pub fn eval_exact(&self, x: f64) -> f64 {
        let xr = BigRational::from_float(x).expect("finite x");
        let y = &xr * &xr * BigRational::from_integer(BigInt::from(self.m));
        let mut p = BigRational::zero();
        for c in self.coeffs_exact.iter().rev() {
            p = p * &y + c;
        }
        if p.is_zero() {
            return 0.0;
        }
        let sign = if p.is_negative() { -1.0 } else { 1.0 };
        let ln_p = exact::ln_rational(&p.abs());
        let yf = self.m as f64 * x * x;
        let ln_norm = 0.5 * (2.0 * std::f64::consts::PI * self.m as f64).ln();
        sign * (ln_p - 0.5 * yf - ln_norm).exp()
    }
}

/// f_m(x) through a freshly built model; build a `DensityModel` once when
/// evaluating many points.
pub fn density(m: usize, x: f64) -> Result<f64> {
    Ok(DensityModel::new(m)?.eval(x))
}

/// Wigner semi-ellipse density under the √N eigenvalue normalization:
/// (1/π)√(1-(x/2)²) on |x| ≤ 2, else 0. This is the normalization that
/// integrates to 1.
pub fn wigner_density(x: f64) -> f64 {
    if x.abs() <= 2.0 {
        (1.0 - (x / 2.0) * (x / 2.0)).sqrt() / std::f64::consts::PI
    } else {
        0.0
    }
}

/// max |f_m(x) - f_Wig(x)| over the grid x ∈ [-3, 3] with the given step.
pub fn sup_distance_to_wigner(m: usize, step: f64) -> Result<f64> {
    if !(step > 0.0 && step <= 0.01) {
        return Err(Error::config("grid step must be in (0, 0.01]"));
    }
    let model = DensityModel::new(m)?;
    let steps = (6.0 / step).round() as usize;
    let mut sup: f64 = 0.0;
    for i in 0..=steps {
        let x = -3.0 + i as f64 * step;
        sup = sup.max((model.eval(x) - wigner_density(x)).abs());
    }
    Ok(sup)
}

/// Numerical check that the density is regained from φ_m by Fourier
/// inversion: evaluates (1/2π) ∫ e^{-itx} φ_m(t) dt by quadrature truncated
/// at |t| ≤ 40√m and returns the max deviation from `density(m, ·)` over an
/// x-grid on [-3, 3].
pub fn phi_numeric_transform_check(m: usize) -> Result<f64> {
    if m == 0 || m > 32 {
        return Err(Error::config("transform check supports 1 <= m <= 32"));
    }
    let model = DensityModel::new(m)?;
    let t_max = 40.0 * (m as f64).sqrt();
    let panels = ((t_max / 0.0025).round() as usize).next_multiple_of(2);
    let h = t_max / panels as f64;

    // Tabulate φ_m on the t-grid once; φ is even, so
    // f(x) = (1/π) ∫_0^∞ cos(tx) φ(t) dt.
    let q = laguerre1_coeffs(m);
    let mf = m as f64;
    let phi_tab: Vec<f64> = (0..=panels)
        .map(|i| {
            let t = i as f64 * h;
            let x = t * t / mf;
            horner(&q, x) / mf * (-0.5 * x).exp()
        })
        .collect();

    let mut max_dev: f64 = 0.0;
    let nx = 120usize;
    for j in 0..=nx {
        let x = -3.0 + 6.0 * j as f64 / nx as f64;
        // composite Simpson over the tabulated integrand
        let mut acc = phi_tab[0] + (t_max * x).cos() * phi_tab[panels];
        for (i, p) in phi_tab.iter().enumerate().take(panels).skip(1) {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * (i as f64 * h * x).cos() * p;
        }
        let fhat = acc * h / 3.0 / std::f64::consts::PI;
        max_dev = max_dev.max((fhat - model.eval(x)).abs());
    }
    Ok(max_dev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::simpson;

    #[test]
    fn phi_one_is_gaussian() {
        for t in [-3.0, -1.2, 0.0, 0.4, 1.0, 2.5] {
            assert!((phi(1, t) - (-0.5 * t * t).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn phi_normalized_at_zero() {
        for m in 1..=32usize {
            assert_eq!(phi(m, 0.0), 1.0);
        }
    }

    #[test]
    fn phi_satisfies_ode() {
        for m in [1usize, 2, 4, 8, 16, 32] {
            for t in [0.5, 1.0, 2.0] {
                let r = phi_ode_residual(m, t);
                assert!(r.abs() <= 1e-6, "m = {m}, t = {t}: residual {r:e}");
            }
        }
    }

    #[test]
    fn phi_matches_moment_series() {
        // Truncated at k = 20 the moment series reaches 1e-8 only for m >= 2
        // on |t| <= 3 (for m = 1 the tail of Σ (t²/2)^k/k! is ~1e-6 there;
        // φ_1 is pinned against the exact Gaussian elsewhere).
        for m in [2usize, 4, 8, 16] {
            for t in [-3.0, -1.5, 0.7, 2.0, 3.0] {
                let series = phi_series_truncated(m, t, 20).unwrap();
                assert!(
                    (phi(m, t) - series).abs() < 1e-8,
                    "m = {m}, t = {t}"
                );
            }
        }
    }

    #[test]
    fn density_one_is_standard_gaussian() {
        let model = DensityModel::new(1).unwrap();
        for x in [0.0f64, 0.3, 1.0, 2.2] {
            let gauss = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
            assert!((model.eval(x) - gauss).abs() < 1e-14);
        }
        assert!((model.eval(0.0) - 0.3989).abs() < 1e-4);
    }

    #[test]
    fn density_two_closed_form() {
        // f_2(x) = e^{-x²} (1 + 2x²) / (2√π)
        let model = DensityModel::new(2).unwrap();
        for x in [0.0f64, 0.5, 1.0, 2.0] {
            let expect =
                (-x * x).exp() * (1.0 + 2.0 * x * x) / (2.0 * std::f64::consts::PI.sqrt());
            assert!((model.eval(x) - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn density_normalization_and_variance() {
        for m in [1usize, 2, 4, 8, 16] {
            let model = DensityModel::new(m).unwrap();
            let mass = simpson(|x| model.eval(x), -8.0, 8.0, 16384);
            let var = simpson(|x| x * x * model.eval(x), -8.0, 8.0, 16384);
            assert!((mass - 1.0).abs() < 1e-8, "m = {m}: mass {mass}");
            assert!((var - 1.0).abs() < 1e-8, "m = {m}: var {var}");
        }
    }

    #[test]
    fn density_fourth_moment_m2() {
        let model = DensityModel::new(2).unwrap();
        let m4 = simpson(|x| x.powi(4) * model.eval(x), -8.0, 8.0, 16384);
        assert!((m4 - 2.25).abs() < 1e-8);
    }

    #[test]
    fn density_even_and_positive() {
        for m in [1usize, 3, 7, 20] {
            let model = DensityModel::new(m).unwrap();
            let mut x = -5.0;
            while x <= 5.0 {
                let v = model.eval(x);
                assert!(v >= 0.0, "m = {m}, x = {x}: {v}");
                assert_eq!(v, model.eval(-x));
                x += 0.01;
            }
        }
    }

    #[test]
    fn density_unbounded_support() {
        for m in [1usize, 2, 4, 8, 16, 32, 128] {
            let model = DensityModel::new(m).unwrap();
            assert!(model.eval(4.0) > 0.0, "m = {m}");
        }
    }

    #[test]
    fn float_path_matches_exact_path() {
        // The f64 Horner stays conditioned even for large m.
        for m in [8usize, 32, 128] {
            let model = DensityModel::new(m).unwrap();
            for x in [0.3, 1.1, 2.7] {
                let fast = model.eval(x);
                let exactv = model.eval_exact(x);
                assert!(
                    (fast - exactv).abs() <= 1e-9 * exactv.abs().max(1e-300),
                    "m = {m}, x = {x}: {fast} vs {exactv}"
                );
            }
        }
    }

    #[test]
    fn wigner_values_and_moments() {
        assert!((wigner_density(0.0) - 1.0 / std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(wigner_density(2.0), 0.0);
        assert_eq!(wigner_density(-2.0), 0.0);
        assert_eq!(wigner_density(3.0), 0.0);
        // moments: mass 1, variance 1, fourth moment 2 = C_2
        let mass = simpson(wigner_density, -2.0, 2.0, 4_000_000);
        let var = simpson(|x| x * x * wigner_density(x), -2.0, 2.0, 4_000_000);
        let m4 = simpson(|x| x.powi(4) * wigner_density(x), -2.0, 2.0, 4_000_000);
        assert!((mass - 1.0).abs() < 1e-8, "mass {mass}");
        assert!((var - 1.0).abs() < 1e-8, "var {var}");
        assert!((m4 - 2.0).abs() < 1e-8, "m4 {m4}");
    }

    #[test]
    fn gaussian_to_semicircle_distance() {
        // m = 1: the sup distance is attained at x = 0.
        let d = sup_distance_to_wigner(1, 0.01).unwrap();
        let at_zero = density(1, 0.0).unwrap() - wigner_density(0.0);
        assert!((d - at_zero).abs() < 1e-12);
        assert!((d - 0.0806).abs() < 5e-4, "distance {d}");
        assert!(sup_distance_to_wigner(1, 0.5).is_err());
    }

    #[test]
    fn sup_distance_decreasing_small() {
        let d4 = sup_distance_to_wigner(4, 0.01).unwrap();
        let d8 = sup_distance_to_wigner(8, 0.01).unwrap();
        let d16 = sup_distance_to_wigner(16, 0.01).unwrap();
        assert!(d4 > d8 && d8 > d16, "{d4} {d8} {d16}");
    }

    #[test]
    fn transform_check_small_m() {
        assert!(phi_numeric_transform_check(1).unwrap() <= 1e-6);
        assert!(phi_numeric_transform_check(2).unwrap() <= 1e-5);
        assert!(phi_numeric_transform_check(33).is_err());
    }
}
