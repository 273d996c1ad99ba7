//! Periodic scalar fields on the torus `T = [-π, π)` sampled on a uniform grid.
//!
//! Samples live at `x_j = -π + 2πj/n`. Fourier coefficients follow the
//! convention `r̂(k) = (1/2π) ∫ r(x) e^{-ikx} dx`, realized by the trapezoid
//! rule, so a pure `cos(3x)` has `r̂(±3) = 1/2`. Coefficients are stored in
//! FFT order: index `m` holds wavenumber `m` for `m ≤ n/2` and `m - n` above.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::{AmcfError, Result};

/// Smallest supported grid.
pub const MIN_GRID: usize = 8;

/// Default grid size for flow computations.
pub const DEFAULT_GRID: usize = 256;

thread_local! {
    static PLANS: RefCell<HashMap<usize, (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>)>> =
        RefCell::new(HashMap::new());
}

fn plans(n: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
    PLANS.with(|cache| {
        cache
            .borrow_mut()
            .entry(n)
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
            })
            .clone()
    })
}

pub fn check_grid(n: usize) -> Result<()> {
    if n < MIN_GRID || n % 2 != 0 {
        return Err(AmcfError::InvalidGrid(n));
    }
    Ok(())
}

/// Grid abscissae `x_j = -π + 2πj/n`.
pub fn grid_points(n: usize) -> Vec<f64> {
    (0..n).map(|j| -PI + 2.0 * PI * j as f64 / n as f64).collect()
}

/// Signed wavenumber stored at FFT index `m`. The Nyquist index reports `+n/2`.
#[inline]
pub fn wavenumber(m: usize, n: usize) -> i64 {
    if m <= n / 2 {
        m as i64
    } else {
        m as i64 - n as i64
    }
}

#[inline]
fn index_of(k: i64, n: usize) -> Option<usize> {
    let half = (n / 2) as i64;
    if k.abs() > half {
        None
    } else if k >= 0 {
        Some(k as usize)
    } else {
        Some((n as i64 + k) as usize)
    }
}

/// Forward transform of grid samples into Fourier coefficients.
pub fn to_spectral(values: &[f64]) -> Result<Vec<Complex64>> {
    let n = values.len();
    check_grid(n)?;
    Ok(forward(values))
}

/// Inverse of [`to_spectral`]; the imaginary round-off is discarded.
pub fn to_physical(coeffs: &[Complex64]) -> Result<Vec<f64>> {
    let n = coeffs.len();
    check_grid(n)?;
    Ok(inverse(coeffs))
}

pub(crate) fn forward(values: &[f64]) -> Vec<Complex64> {
    let n = values.len();
    let (fwd, _) = plans(n);
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fwd.process(&mut buf);
    let scale = 1.0 / n as f64;
    // e^{-ik x_j} = (-1)^k e^{-2πijk/n} because x_0 = -π.
    for (m, c) in buf.iter_mut().enumerate() {
        let sign = if m % 2 == 0 { scale } else { -scale };
        *c *= sign;
    }
    symmetrize(&mut buf);
    buf
}

/// Enforces `c(-k) = conj(c(k))` bitwise so real-valued data round-trips exactly.
fn symmetrize(c: &mut [Complex64]) {
    let n = c.len();
    c[0].im = 0.0;
    c[n / 2].im = 0.0;
    for m in 1..n / 2 {
        let sym = 0.5 * (c[m] + c[n - m].conj());
        c[m] = sym;
        c[n - m] = sym.conj();
    }
}

pub(crate) fn inverse(coeffs: &[Complex64]) -> Vec<f64> {
    let n = coeffs.len();
    let (_, inv) = plans(n);
    let mut buf: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .map(|(m, &c)| if m % 2 == 0 { c } else { -c })
        .collect();
    inv.process(&mut buf);
    buf.into_iter().map(|c| c.re).collect()
}

/// Multiplies coefficients by `(ik)^order`, zeroing the Nyquist mode for odd orders.
pub(crate) fn differentiate_coeffs(coeffs: &mut [Complex64], order: u32) {
    let n = coeffs.len();
    for (m, c) in coeffs.iter_mut().enumerate() {
        if order % 2 == 1 && m == n / 2 {
            *c = Complex64::new(0.0, 0.0);
            continue;
        }
        let k = wavenumber(m, n) as f64;
        *c *= Complex64::new(0.0, k).powu(order);
    }
}

/// Zeroes every mode with `|k| > n/3` (the 2/3 rule).
pub(crate) fn dealias_coeffs(coeffs: &mut [Complex64]) {
    let n = coeffs.len();
    let cutoff = (n / 3) as i64;
    for (m, c) in coeffs.iter_mut().enumerate() {
        if wavenumber(m, n).abs() > cutoff {
            *c = Complex64::new(0.0, 0.0);
        }
    }
}

/// Trapezoid-rule integral over one period.
#[inline]
pub(crate) fn integrate_values(values: &[f64]) -> f64 {
    2.0 * PI * values.iter().sum::<f64>() / values.len() as f64
}

/// A real 2π-periodic function on the uniform grid, kept with its Fourier coefficients.
///
/// Instances are immutable: every constructor synchronizes samples and
/// coefficients, so both views can be read concurrently.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileFunction {
    values: Vec<f64>,
    coeffs: Vec<Complex64>,
}

impl ProfileFunction {
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        let coeffs = to_spectral(&values)?;
        Ok(Self { values, coeffs })
    }

    /// Builds from coefficients, enforcing conjugate symmetry `r̂(-k) = conj(r̂(k))`.
    pub fn from_coeffs(mut coeffs: Vec<Complex64>) -> Result<Self> {
        check_grid(coeffs.len())?;
        symmetrize(&mut coeffs);
        let values = inverse(&coeffs);
        Ok(Self { values, coeffs })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        check_grid(n)?;
        Self::from_values(grid_points(n).into_iter().map(f).collect())
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        check_grid(n)?;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        coeffs[0] = Complex64::new(c, 0.0);
        Ok(Self {
            values: vec![c; n],
            coeffs,
        })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Coefficient `r̂(k)`; zero outside the resolved band.
    pub fn coeff(&self, k: i64) -> Complex64 {
        index_of(k, self.n())
            .map(|m| self.coeffs[m])
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    /// Amplitude of the `k`-th real mode, i.e. `2|r̂(k)|` (`|r̂(0)|` for `k = 0`).
    pub fn mode_amplitude(&self, k: usize) -> f64 {
        let c = self.coeff(k as i64).norm();
        if k == 0 {
            c
        } else {
            2.0 * c
        }
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Spectral derivative of order 1 or 2.
    pub fn derivative(&self, order: u32) -> Result<Self> {
        if !(1..=2).contains(&order) {
            return Err(AmcfError::Domain(format!("derivative order {order} not in {{1, 2}}")));
        }
        let mut coeffs = self.coeffs.clone();
        differentiate_coeffs(&mut coeffs, order);
        let values = inverse(&coeffs);
        Ok(Self { values, coeffs })
    }

    /// `∫_T u dx = 2π r̂(0)`.
    pub fn integrate(&self) -> f64 {
        2.0 * PI * self.coeffs[0].re
    }

    /// `Q0 u = (1/2π) ∫ u`.
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// `P0 u = u - Q0 u`, performed on the single `k = 0` coefficient.
    pub fn project_zero_mean(&self) -> ZeroMeanFunction {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] = Complex64::new(0.0, 0.0);
        let values = inverse(&coeffs);
        ZeroMeanFunction(Self { values, coeffs })
    }

    /// Pointwise map of the samples (coefficients are recomputed).
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let values: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        let coeffs = forward(&values);
        Self { values, coeffs }
    }

    /// `self + alpha * other`, combined on the coefficients so both views stay exact.
    pub fn axpy(&self, alpha: f64, other: &Self) -> Result<Self> {
        if other.n() != self.n() {
            return Err(AmcfError::GridMismatch {
                expected: self.n(),
                got: other.n(),
            });
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + alpha * b)
            .collect();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + alpha * b)
            .collect();
        Ok(Self { values, coeffs })
    }

    pub fn scale(&self, alpha: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| alpha * v).collect(),
            coeffs: self.coeffs.iter().map(|c| alpha * c).collect(),
        }
    }

    /// Largest pointwise difference to another profile on the same grid.
    pub fn distance_sup(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Evaluates the trigonometric interpolant at an arbitrary point.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.n();
        let mut acc = self.coeffs[0].re;
        for m in 1..n / 2 {
            let k = m as f64;
            let e = Complex64::from_polar(1.0, k * x);
            acc += 2.0 * (self.coeffs[m] * e).re;
        }
        acc + self.coeffs[n / 2].re * ((n / 2) as f64 * x).cos()
    }

    /// The translate `x ↦ u(x - a)`.
    pub fn translate(&self, a: f64) -> Self {
        let n = self.n();
        let mut coeffs = self.coeffs.clone();
        for (m, c) in coeffs.iter_mut().enumerate() {
            if m == n / 2 {
                *c *= ((n / 2) as f64 * a).cos();
            } else {
                let k = wavenumber(m, n) as f64;
                *c *= Complex64::from_polar(1.0, -k * a);
            }
        }
        let values = inverse(&coeffs);
        Self { values, coeffs }
    }

    /// Copy with the modes `|k| > n/3` removed.
    pub fn dealiased(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        dealias_coeffs(&mut coeffs);
        let values = inverse(&coeffs);
        Self { values, coeffs }
    }

    /// `max_{i≠j} |u_i - u_j| / d_T(x_i, x_j)^σ` over grid pairs.
    ///
    /// Diagnostic lower bound for the Hölder seminorm; not a norm of the
    /// continuous function.
    pub fn holder_seminorm_estimate(&self, sigma: f64) -> Result<f64> {
        if !(sigma > 0.0 && sigma < 1.0) {
            return Err(AmcfError::Domain(format!("Hölder exponent {sigma} not in (0, 1)")));
        }
        let n = self.n();
        let h = 2.0 * PI / n as f64;
        let mut best = 0.0_f64;
        for i in 0..n {
            for j in i + 1..n {
                let gap = (j - i).min(n - (j - i)) as f64 * h;
                let q = (self.values[i] - self.values[j]).abs() / gap.powf(sigma);
                best = best.max(q);
            }
        }
        Ok(best)
    }
}

/// A periodic function whose `k = 0` coefficient is exactly zero (the range of `P0`).
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroMeanFunction(ProfileFunction);

impl ZeroMeanFunction {
    pub fn zero(n: usize) -> Result<Self> {
        Ok(Self(ProfileFunction::constant(n, 0.0)?))
    }

    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        Ok(ProfileFunction::from_values(values)?.project_zero_mean())
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Ok(ProfileFunction::from_fn(n, f)?.project_zero_mean())
    }

    /// Even function `Σ a_k cos(kx)`, `a_k = cos_coeffs[k-1]`.
    pub fn from_cosine_series(n: usize, cos_coeffs: &[f64]) -> Result<Self> {
        check_grid(n)?;
        if cos_coeffs.len() >= n / 2 {
            return Err(AmcfError::Domain(format!(
                "{} cosine modes do not fit on a grid of {n}",
                cos_coeffs.len()
            )));
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for (i, &a) in cos_coeffs.iter().enumerate() {
            let k = i + 1;
            coeffs[k] = Complex64::new(0.5 * a, 0.0);
            coeffs[n - k] = Complex64::new(0.5 * a, 0.0);
        }
        let values = inverse(&coeffs);
        Ok(Self(ProfileFunction { values, coeffs }))
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn values(&self) -> &[f64] {
        self.0.values()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        self.0.coeffs()
    }

    pub fn as_profile(&self) -> &ProfileFunction {
        &self.0
    }

    pub fn into_profile(self) -> ProfileFunction {
        self.0
    }

    /// Always exactly zero.
    pub fn mean(&self) -> f64 {
        self.0.coeffs[0].re
    }

    /// `(1/2π) ∫ u² = Σ |û(k)|²`.
    pub fn mean_square(&self) -> f64 {
        self.0.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `P0` restricted to its own range: the identity.
    pub fn project_zero_mean(&self) -> Self {
        self.clone()
    }

    pub fn scale(&self, alpha: f64) -> Self {
        Self(self.0.scale(alpha))
    }

    pub fn axpy(&self, alpha: f64, other: &Self) -> Result<Self> {
        Ok(Self(self.0.axpy(alpha, &other.0)?))
    }

    /// Coefficients `a_k` of `cos(kx)`, `1 ≤ k ≤ m`.
    pub fn cosine_coeffs(&self, m: usize) -> Vec<f64> {
        (1..=m).map(|k| 2.0 * self.0.coeff(k as i64).re).collect()
    }

    /// Coefficients `b_k` of `sin(kx)`, `1 ≤ k ≤ m`.
    pub fn sine_coeffs(&self, m: usize) -> Vec<f64> {
        (1..=m).map(|k| -2.0 * self.0.coeff(k as i64).im).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_values(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
    }

    /// Direct O(n²) DFT with the crate's convention.
    fn dft_oracle(values: &[f64]) -> Vec<Complex64> {
        let n = values.len();
        let xs = grid_points(n);
        (0..n)
            .map(|m| {
                let k = wavenumber(m, n) as f64;
                xs.iter()
                    .zip(values)
                    .map(|(&x, &v)| v * Complex64::from_polar(1.0, -k * x))
                    .sum::<Complex64>()
                    / n as f64
            })
            .collect()
    }

    #[test]
    fn pure_cosine_mode() {
        let u = ProfileFunction::from_fn(64, |x| (3.0 * x).cos()).unwrap();
        for k in -32..=32i64 {
            let c = u.coeff(k);
            if k.abs() == 3 {
                assert!((c.re - 0.5).abs() < 1e-13 && c.im.abs() < 1e-13);
            } else {
                assert!(c.norm() < 1e-13, "k={k} {c}");
            }
        }
    }

    #[test]
    fn zero_coefficients_give_zero_values() {
        let v = to_physical(&vec![Complex64::new(0.0, 0.0); 32]).unwrap();
        assert!(v.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn matches_direct_dft_and_round_trips() {
        let vals = random_values(32, 7);
        let c = to_spectral(&vals).unwrap();
        for (a, b) in c.iter().zip(dft_oracle(&vals)) {
            assert!((a - b).norm() < 1e-14);
        }
        let back = to_physical(&c).unwrap();
        let err = back.iter().zip(&vals).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err < 1e-12);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(matches!(to_spectral(&[0.0; 7]), Err(AmcfError::InvalidGrid(7))));
        assert!(matches!(to_spectral(&[0.0; 6]), Err(AmcfError::InvalidGrid(6))));
        assert!(ProfileFunction::from_fn(9, |x| x).is_err());
    }

    #[test]
    fn derivative_of_sine_and_constant() {
        let u = ProfileFunction::from_fn(64, f64::sin).unwrap();
        let du = u.derivative(1).unwrap();
        for (x, d) in grid_points(64).iter().zip(du.values()) {
            assert!((d - x.cos()).abs() < 1e-13);
        }
        let c = ProfileFunction::constant(64, 3.0).unwrap();
        assert!(c.derivative(2).unwrap().sup_norm() < 1e-15);
        assert!(u.derivative(3).is_err());
    }

    #[test]
    fn derivative_matches_eighth_order_differences() {
        let n = 512;
        let h = 2.0 * PI / n as f64;
        let u = ProfileFunction::from_fn(n, |x| x.cos().exp()).unwrap();
        let du = u.derivative(1).unwrap();
        let v = u.values();
        // 8th-order central stencil
        let w = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
        for j in 0..n {
            let mut fd = 0.0;
            for (i, wi) in w.iter().enumerate() {
                let s = i + 1;
                fd += wi * (v[(j + s) % n] - v[(j + n - s) % n]);
            }
            fd /= h;
            assert!((fd - du.values()[j]).abs() < 1e-8);
        }
    }

    #[test]
    fn integrals() {
        let c = ProfileFunction::constant(32, 1.7).unwrap();
        assert!((c.integrate() - 2.0 * PI * 1.7).abs() < 1e-13);
        for k in 1..10 {
            let u = ProfileFunction::from_fn(32, |x| (k as f64 * x).cos()).unwrap();
            assert!(u.integrate().abs() < 1e-13);
        }
    }

    #[test]
    fn integral_matches_adaptive_quadrature() {
        let f = |x: f64| (1.0 + 0.5 * x.cos()) * (1.0 + 0.25 * x.sin().powi(2)).sqrt();
        let u = ProfileFunction::from_fn(256, f).unwrap();
        let oracle = crate::verify::oracles::adaptive_simpson(&f, -PI, PI, 1e-13);
        assert!((u.integrate() - oracle).abs() < 1e-10);
    }

    #[test]
    fn zero_mean_projection_examples() {
        let five = ProfileFunction::constant(16, 5.0).unwrap();
        assert!(five.project_zero_mean().values().iter().all(|v| v.abs() < 1e-15));
        assert_eq!(five.mean(), 5.0);

        let c = ProfileFunction::from_fn(16, f64::cos).unwrap();
        let p = c.project_zero_mean();
        assert!(p.as_profile().distance_sup(&c) < 1e-15);
        assert!(c.mean().abs() < 1e-16);

        let u = ProfileFunction::from_fn(32, |x| 2.0 + (3.0 * x).cos()).unwrap();
        let p = u.project_zero_mean();
        for (x, v) in grid_points(32).iter().zip(p.values()) {
            assert!((v - (3.0 * x).cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_mean_projection_is_exactly_idempotent() {
        let u = ProfileFunction::from_values(random_values(64, 3)).unwrap();
        let p = u.project_zero_mean();
        assert_eq!(p.mean(), 0.0);
        let pp = p.as_profile().project_zero_mean();
        assert_eq!(pp, p);
        assert_eq!(p.project_zero_mean(), p);
        // P0 + Q0 = identity
        let rebuilt = p.as_profile().axpy(1.0, &ProfileFunction::constant(64, u.mean()).unwrap()).unwrap();
        assert!(rebuilt.distance_sup(&u) < 1e-14);
    }

    #[test]
    fn holder_estimate() {
        let c = ProfileFunction::constant(32, 2.0).unwrap();
        assert_eq!(c.holder_seminorm_estimate(0.5).unwrap(), 0.0);

        let n = 128;
        let u = ProfileFunction::from_fn(n, f64::cos).unwrap();
        let est = u.holder_seminorm_estimate(0.5).unwrap();
        // brute-force enumeration with the torus metric written out directly
        let xs = grid_points(n);
        let mut oracle = 0.0_f64;
        for a in &xs {
            for b in &xs {
                let d = (a - b).abs();
                let dt = d.min(2.0 * PI - d);
                if dt > 0.0 {
                    oracle = oracle.max((a.cos() - b.cos()).abs() / dt.sqrt());
                }
            }
        }
        assert!(est >= oracle - 1e-12);
        assert!((est - oracle).abs() < 1e-12);

        let scaled = u.scale(-3.0).holder_seminorm_estimate(0.5).unwrap();
        assert!((scaled - 3.0 * est).abs() < 1e-12);
        assert!(u.holder_seminorm_estimate(1.0).is_err());
    }

    #[test]
    fn eval_and_translate() {
        let u = ProfileFunction::from_fn(32, |x| 1.0 + 0.3 * (2.0 * x).sin() + 0.1 * x.cos()).unwrap();
        assert!((u.eval(0.37) - (1.0 + 0.3 * (0.74f64).sin() + 0.1 * 0.37f64.cos())).abs() < 1e-14);
        let t = u.translate(0.5);
        assert!((t.eval(1.2) - u.eval(0.7)).abs() < 1e-13);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn parseval(seed in 0u64..1000, which in 0usize..3) {
            let n = [32, 64, 256][which];
            let vals = random_values(n, seed);
            let u = ProfileFunction::from_values(vals.clone()).unwrap();
            let lhs = ProfileFunction::from_values(vals.iter().map(|v| v * v).collect()).unwrap().integrate() / (2.0 * PI);
            let rhs: f64 = u.coeffs().iter().map(|c| c.norm_sqr()).sum();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1e-300));
        }

        #[test]
        fn translation_by_one_grid_point(seed in 0u64..1000) {
            let n = 64;
            let vals = random_values(n, seed);
            let mut shifted = vals.clone();
            shifted.rotate_right(1);
            let u = ProfileFunction::from_values(vals).unwrap();
            let s = ProfileFunction::from_values(shifted).unwrap();
            for m in 0..n {
                if m == n / 2 { continue; }
                let k = wavenumber(m, n) as f64;
                let expect = u.coeffs()[m] * Complex64::from_polar(1.0, -k * 2.0 * PI / n as f64);
                prop_assert!((s.coeffs()[m] - expect).norm() < 1e-12);
            }
        }

        #[test]
        fn round_trip(seed in 0u64..1000) {
            let vals = random_values(128, seed);
            let back = to_physical(&to_spectral(&vals).unwrap()).unwrap();
            for (a, b) in back.iter().zip(&vals) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
