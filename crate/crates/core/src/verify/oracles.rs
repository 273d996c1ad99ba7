//! Independent reference computations used to cross-check the spectral code.
//!
//! Nothing here touches the FFT: derivatives are finite differences on the
//! raw samples and integrals are adaptive Simpson or composite Gauss–Legendre
//! on analytic closures.

use std::f64::consts::PI;

use rand::Rng;

use crate::torus::ProfileFunction;

/// Adaptive Simpson quadrature with Richardson correction.
pub fn adaptive_simpson<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    // Split into panels first so that periodic integrands cannot fool the
    // initial error estimate.
    let panels = 16;
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let lo = a + i as f64 * h;
            let hi = lo + h;
            let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            let whole = h / 6.0 * (fa + 4.0 * fm + fb);
            rec(f, lo, hi, fa, fm, fb, whole, tol / panels as f64, 40)
        })
        .sum()
}

/// Nodes and weights of the `m`-point Gauss–Legendre rule on `[-1, 1]`.
fn gauss_legendre_nodes(m: usize) -> Vec<(f64, f64)> {
    (0..m)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for j in 2..=m {
                    let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Composite 10-point Gauss–Legendre rule on `panels` equal panels.
pub fn gauss_legendre_composite<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let rule = gauss_legendre_nodes(10);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let c = a + (p as f64 + 0.5) * h;
        total += rule.iter().map(|&(x, w)| w * f(c + 0.5 * h * x)).sum::<f64>() * 0.5 * h;
    }
    total
}

/// Eighth-order periodic central differences for `r_x` and `r_xx`.
fn fd_derivatives(values: &[f64]) -> (Vec<f64>, Vec<f64>) {
    const D1: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
    const D2: [f64; 5] = [-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0];
    let n = values.len();
    let h = 2.0 * PI / n as f64;
    let at = |j: isize| values[j.rem_euclid(n as isize) as usize];
    let mut d1 = vec![0.0; n];
    let mut d2 = vec![0.0; n];
    for j in 0..n as isize {
        let mut a = 0.0;
        let mut b = D2[0] * at(j);
        for s in 1..=4 {
            a += D1[s - 1] * (at(j + s as isize) - at(j - s as isize));
            b += D2[s] * (at(j + s as isize) + at(j - s as isize));
        }
        d1[j as usize] = a / h;
        d2[j as usize] = b / (h * h);
    }
    (d1, d2)
}

/// Principal curvatures `(κ1, κ2)` from finite-difference derivatives.
pub fn fd_curvatures(values: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let (rx, rxx) = fd_derivatives(values);
    let mut k1 = Vec::with_capacity(values.len());
    let mut k2 = Vec::with_capacity(values.len());
    for j in 0..values.len() {
        let q = (1.0 + rx[j] * rx[j]).sqrt();
        k1.push(1.0 / (values[j] * q));
        k2.push(-rxx[j] / (q * q * q));
    }
    (k1, k2)
}

/// `∫ r sqrt(1 + r_x²) dx` over one period by adaptive quadrature.
pub fn area_oracle(r: impl Fn(f64) -> f64, rx: impl Fn(f64) -> f64) -> f64 {
    adaptive_simpson(&|x: f64| r(x) * (1.0 + rx(x).powi(2)).sqrt(), -PI, PI, 1e-13)
}

/// Area-weighted average of `κ1 + κ2` by adaptive quadrature.
pub fn averaged_curvature_oracle(r: impl Fn(f64) -> f64, rx: impl Fn(f64) -> f64, rxx: impl Fn(f64) -> f64) -> f64 {
    let weight = |x: f64| r(x) * (1.0 + rx(x).powi(2)).sqrt();
    let curvature = |x: f64| {
        let q = (1.0 + rx(x).powi(2)).sqrt();
        1.0 / (r(x) * q) - rxx(x) / (q * q * q)
    };
    let num = adaptive_simpson(&|x: f64| curvature(x) * weight(x), -PI, PI, 1e-13);
    let den = adaptive_simpson(&weight, -PI, PI, 1e-13);
    num / den
}

/// Trigonometric polynomial of degree 6 with mean in `[1, 1.5]`, bounded below by 0.5.
pub fn random_smooth_profile(n: usize, rng: &mut impl Rng) -> ProfileFunction {
    let mean = rng.gen_range(1.0..1.5);
    let terms: Vec<(f64, f64, f64)> = (1..=6)
        .map(|k| {
            let k = k as f64;
            (k, rng.gen_range(-0.1..0.1) / k, rng.gen_range(-0.1..0.1) / k)
        })
        .collect();
    ProfileFunction::from_fn(n, |x| mean + terms.iter().map(|(k, a, b)| a * (k * x).cos() + b * (k * x).sin()).sum::<f64>())
        .expect("grid size validated by caller")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratures_agree_on_known_integrals() {
        let f = |x: f64| x.cos().exp();
        // 2π I0(1)
        let exact = 2.0 * PI * 1.266_065_877_752_008_4;
        assert!((adaptive_simpson(&f, -PI, PI, 1e-13) - exact).abs() < 1e-11);
        assert!((gauss_legendre_composite(&f, -PI, PI, 8) - exact).abs() < 1e-12);
        assert!((gauss_legendre_composite(&|x: f64| x.powi(19), 0.0, 1.0, 1) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn finite_differences_are_eighth_order() {
        let err = |n: usize| {
            let h = 2.0 * PI / n as f64;
            let v: Vec<f64> = (0..n).map(|j| (-PI + h * j as f64).sin()).collect();
            let (d1, _) = fd_derivatives(&v);
            (0..n).map(|j| (d1[j] - (-PI + h * j as f64).cos()).abs()).fold(0.0, f64::max)
        };
        let ratio = err(32) / err(64);
        assert!(ratio > 200.0 && ratio < 300.0, "{ratio}");
    }
}
