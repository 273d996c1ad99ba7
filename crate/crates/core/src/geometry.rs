//! Geometric functionals of a profile and the flow operator `G`.
//!
//! For a profile `r` with `q = sqrt(1 + r_x²)`:
//!
//! * `κ1 = 1/(r q)`, `κ2 = -r_xx/q³`, `H = κ1 + κ2`;
//! * `S(r) = ∫ r q` (area of one period, without the factor 2π);
//! * `F(r) = ∫ r²` (enclosed volume, without the factor π);
//! * `h(r) = (1/S) ∫ H r q`;
//! * `G(r) = q (h - H)`, the right-hand side of `r_t = G(r)`.
//!
//! `G` also splits as `-A(r) r + f(r)` with `A(r)` a nonlocal second-order
//! operator and `f` a lower-order remainder; the semi-implicit stepper
//! relies on that split.

use std::cell::Cell;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::torus::{self, ProfileFunction};
use crate::{AmcfError, Result};

thread_local! {
    static FLIP_SOURCE: Cell<bool> = const { Cell::new(false) };
}

/// Runs `f` with the sign of the source term `f(r)` flipped on this thread.
///
/// Mutation-testing hook for the verification suite: with the sign wrong the
/// semi-implicit scheme no longer conserves volume.
pub fn with_flipped_source<T>(f: impl FnOnce() -> T) -> T {
    struct Reset(bool);
    impl Drop for Reset {
        fn drop(&mut self) {
            FLIP_SOURCE.with(|c| c.set(self.0));
        }
    }
    let _reset = Reset(FLIP_SOURCE.with(|c| c.replace(true)));
    f()
}

fn source_sign() -> f64 {
    if FLIP_SOURCE.with(Cell::get) {
        -1.0
    } else {
        1.0
    }
}

/// Pointwise quantities shared by the functionals.
pub(crate) struct Frame {
    pub r: Vec<f64>,
    pub rx: Vec<f64>,
    pub rxx: Vec<f64>,
    pub q: Vec<f64>,
}

impl Frame {
    pub fn new(r: &ProfileFunction) -> Result<Self> {
        let min = r.min();
        if !(min > 0.0) {
            return Err(AmcfError::NonPositiveProfile { min });
        }
        Ok(Self::unchecked(r))
    }

    fn unchecked(r: &ProfileFunction) -> Self {
        let mut c1 = r.coeffs().to_vec();
        torus::differentiate_coeffs(&mut c1, 1);
        let mut c2 = r.coeffs().to_vec();
        torus::differentiate_coeffs(&mut c2, 2);
        let rx = torus::inverse(&c1);
        let rxx = torus::inverse(&c2);
        let q = rx.iter().map(|d| (1.0 + d * d).sqrt()).collect();
        Self {
            r: r.values().to_vec(),
            rx,
            rxx,
            q,
        }
    }

    pub fn mean_curvature(&self) -> Vec<f64> {
        self.r
            .iter()
            .zip(&self.q)
            .zip(&self.rxx)
            .map(|((r, q), rxx)| 1.0 / (r * q) - rxx / (q * q * q))
            .collect()
    }

    pub fn area(&self) -> f64 {
        let w: Vec<f64> = self.r.iter().zip(&self.q).map(|(r, q)| r * q).collect();
        torus::integrate_values(&w)
    }

    /// `(h, H, S)`
    pub fn averaged_curvature(&self) -> (f64, Vec<f64>, f64) {
        let h_loc = self.mean_curvature();
        let s = self.area();
        let weighted: Vec<f64> = h_loc
            .iter()
            .zip(&self.r)
            .zip(&self.q)
            .map(|((hh, r), q)| hh * r * q)
            .collect();
        (torus::integrate_values(&weighted) / s, h_loc, s)
    }
}

/// Azimuthal (`kappa1`) and axial (`kappa2`) principal curvatures on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvaturePair {
    pub kappa1: Vec<f64>,
    pub kappa2: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometrySummary {
    pub area: f64,
    pub volume: f64,
    pub h_avg: f64,
    pub g_norm: f64,
    pub min_r: f64,
}

pub fn principal_curvatures(r: &ProfileFunction) -> Result<CurvaturePair> {
    let fr = Frame::new(r)?;
    let kappa1 = fr.r.iter().zip(&fr.q).map(|(r, q)| 1.0 / (r * q)).collect();
    let kappa2 = fr.rxx.iter().zip(&fr.q).map(|(rxx, q)| -rxx / (q * q * q)).collect();
    Ok(CurvaturePair { kappa1, kappa2 })
}

/// `H = κ1 + κ2` on the grid.
pub fn mean_curvature(r: &ProfileFunction) -> Result<Vec<f64>> {
    Ok(Frame::new(r)?.mean_curvature())
}

pub fn surface_area(r: &ProfileFunction) -> Result<f64> {
    Ok(Frame::new(r)?.area())
}

/// `F(r) = ∫ r²`; defined for any profile.
pub fn enclosed_volume(r: &ProfileFunction) -> f64 {
    let sq: Vec<f64> = r.values().iter().map(|v| v * v).collect();
    torus::integrate_values(&sq)
}

/// `h(r)`, the area-weighted mean of `H`.
pub fn averaged_curvature(r: &ProfileFunction) -> Result<f64> {
    Ok(Frame::new(r)?.averaged_curvature().0)
}

/// The flow operator `G(r) = sqrt(1 + r_x²) (h(r) - H(r))`, dealiased.
pub fn amcf_rhs(r: &ProfileFunction) -> Result<ProfileFunction> {
    let fr = Frame::new(r)?;
    Ok(rhs_from_frame(&fr))
}

pub(crate) fn rhs_from_frame(fr: &Frame) -> ProfileFunction {
    let (h, h_loc, _) = fr.averaged_curvature();
    let g: Vec<f64> = fr.q.iter().zip(&h_loc).map(|(q, hh)| q * (h - hh)).collect();
    let mut c = torus::forward(&g);
    torus::dealias_coeffs(&mut c);
    ProfileFunction::from_coeffs(c).expect("grid already validated")
}

/// Area, volume, averaged curvature, `‖G‖∞` and `min r` in one pass.
pub fn summary(r: &ProfileFunction) -> Result<GeometrySummary> {
    let fr = Frame::new(r)?;
    let (h, _, area) = fr.averaged_curvature();
    let g = rhs_from_frame(&fr);
    Ok(GeometrySummary {
        area,
        volume: enclosed_volume(r),
        h_avg: h,
        g_norm: g.sup_norm(),
        min_r: r.min(),
    })
}

/// `A(r) ρ = (q/S) ∫ r ρ_xx / q² - ρ_xx / q²`, dealiased.
pub fn quasilinear_apply_a(r: &ProfileFunction, rho: &ProfileFunction) -> Result<ProfileFunction> {
    if rho.n() != r.n() {
        return Err(AmcfError::GridMismatch {
            expected: r.n(),
            got: rho.n(),
        });
    }
    let fr = Frame::new(r)?;
    let s = fr.area();
    Ok(apply_a_with(&fr, s, rho))
}

pub(crate) fn apply_a_with(fr: &Frame, area: f64, rho: &ProfileFunction) -> ProfileFunction {
    let mut c2 = rho.coeffs().to_vec();
    torus::differentiate_coeffs(&mut c2, 2);
    let rho_xx = torus::inverse(&c2);
    let scaled: Vec<f64> = rho_xx
        .iter()
        .zip(&fr.q)
        .map(|(d, q)| d / (q * q))
        .collect();
    let weighted: Vec<f64> = scaled.iter().zip(&fr.r).map(|(s, r)| s * r).collect();
    let nonlocal = torus::integrate_values(&weighted) / area;
    let out: Vec<f64> = fr
        .q
        .iter()
        .zip(&scaled)
        .map(|(q, s)| q * nonlocal - s)
        .collect();
    let mut c = torus::forward(&out);
    torus::dealias_coeffs(&mut c);
    ProfileFunction::from_coeffs(c).expect("grid already validated")
}

/// `f(r) = 2π q / S - 1/r`, dealiased.
pub fn quasilinear_f(r: &ProfileFunction) -> Result<ProfileFunction> {
    let fr = Frame::new(r)?;
    let s = fr.area();
    Ok(f_with(&fr, s))
}

pub(crate) fn f_with(fr: &Frame, area: f64) -> ProfileFunction {
    let sign = source_sign();
    let out: Vec<f64> = fr
        .q
        .iter()
        .zip(&fr.r)
        .map(|(q, r)| sign * (2.0 * PI * q / area - 1.0 / r))
        .collect();
    let mut c = torus::forward(&out);
    torus::dealias_coeffs(&mut c);
    ProfileFunction::from_coeffs(c).expect("grid already validated")
}

/// `∫ (h - H)² r q`, the rate at which the flow removes area.
pub fn area_dissipation(r: &ProfileFunction) -> Result<f64> {
    let fr = Frame::new(r)?;
    let (h, h_loc, _) = fr.averaged_curvature();
    let w: Vec<f64> = h_loc
        .iter()
        .zip(&fr.r)
        .zip(&fr.q)
        .map(|((hh, r), q)| (h - hh).powi(2) * r * q)
        .collect();
    Ok(torus::integrate_values(&w))
}

/// Directional derivative `DS(r)[v] = ∫ (q v + r r_x v_x / q)`.
pub fn area_rate(r: &ProfileFunction, velocity: &ProfileFunction) -> Result<f64> {
    let fr = Frame::new(r)?;
    let vx = velocity.derivative(1)?;
    let w: Vec<f64> = (0..r.n())
        .map(|j| fr.q[j] * velocity.values()[j] + fr.r[j] * fr.rx[j] * vx.values()[j] / fr.q[j])
        .collect();
    Ok(torus::integrate_values(&w))
}

/// Real Fourier basis `{1, cos x, sin x, cos 2x, sin 2x, ...}`: index 0 is
/// the constant, `2k-1` is `cos kx` and `2k` is `sin kx`.
pub fn real_basis_function(n: usize, index: usize) -> Result<ProfileFunction> {
    torus::check_grid(n)?;
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    if index == 0 {
        c[0] = Complex64::new(1.0, 0.0);
    } else {
        let k = index.div_ceil(2);
        if k >= n / 2 {
            return Err(AmcfError::Domain(format!("basis index {index} beyond grid {n}")));
        }
        let half = if index % 2 == 1 {
            Complex64::new(0.5, 0.0)
        } else {
            Complex64::new(0.0, -0.5)
        };
        c[k] = half;
        c[n - k] = half.conj();
    }
    ProfileFunction::from_coeffs(c)
}

/// Wavenumber of a real basis index.
pub fn real_basis_mode(index: usize) -> usize {
    index.div_ceil(2)
}

/// Coordinates of `g` on the first `size` real basis functions.
pub fn project_real_basis(g: &ProfileFunction, size: usize) -> Vec<f64> {
    (0..size)
        .map(|i| {
            if i == 0 {
                g.coeff(0).re
            } else {
                let c = g.coeff(real_basis_mode(i) as i64);
                if i % 2 == 1 {
                    2.0 * c.re
                } else {
                    -2.0 * c.im
                }
            }
        })
        .collect()
}

/// Central-difference step used for directional derivatives of `G`.
pub fn fd_step(r: &ProfileFunction) -> f64 {
    1e-6 * (1.0 + r.sup_norm())
}

/// Matrix of `DG(r)` on the real Fourier basis, by central differences of `G`.
pub fn linearization_matrix(r: &ProfileFunction, basis_size: usize) -> Result<DMatrix<f64>> {
    let n = r.n();
    if basis_size == 0 || 3 * basis_size > 2 * n {
        return Err(AmcfError::Domain(format!(
            "basis size {basis_size} exceeds the dealiased band 2n/3 of n = {n}"
        )));
    }
    Frame::new(r)?;
    let eps = fd_step(r);
    let scale = r.sup_norm();
    if eps <= 64.0 * f64::EPSILON * scale {
        return Err(AmcfError::StepUnderflow { step: eps, scale });
    }
    let mut m = DMatrix::zeros(basis_size, basis_size);
    for j in 0..basis_size {
        let e = real_basis_function(n, j)?;
        let plus = amcf_rhs(&r.axpy(eps, &e)?)?;
        let minus = amcf_rhs(&r.axpy(-eps, &e)?)?;
        let diff = plus.axpy(-1.0, &minus)?.scale(0.5 / eps);
        for (i, v) in project_real_basis(&diff, basis_size).into_iter().enumerate() {
            m[(i, j)] = v;
        }
    }
    Ok(m)
}
