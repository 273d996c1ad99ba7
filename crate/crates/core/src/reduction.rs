//! Volume-constrained reduction of the flow to zero-mean functions.
//!
//! Every profile splits as `r = P0 r + Q0 r`. On the equivolume set
//! `{F(r) = F(η)}` the mean is determined by the zero-mean part: because
//! `F(r̃ + c) = 2π (c² + ‖r̃‖²/2π)`, the lift is
//!
//! ```text
//! ψ(r̃, η) = r̃ + sqrt(η² - ‖r̃‖²_{L²}/2π)
//! ```
//!
//! on the admissible set `‖r̃‖²/2π < η²`. The reduced operator is
//! `𝒢(r̃, η) = P0 G(ψ(r̃, η))`.

use num_complex::Complex64;

use crate::geometry::{self, enclosed_volume};
use crate::torus::{ProfileFunction, ZeroMeanFunction};
use crate::{AmcfError, Result};

/// Reference cylinder for the lift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftContext {
    eta: f64,
}

impl LiftContext {
    pub fn new(eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(AmcfError::Domain(format!("reference radius eta = {eta} must be positive")));
        }
        Ok(Self { eta })
    }

    /// The cylinder enclosing the same volume as `r0`: `η = sqrt(F(r0)/2π)`.
    pub fn matching_volume(r0: &ProfileFunction) -> Result<Self> {
        Self::new(equivolume_radius(r0))
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn is_admissible(&self, r_tilde: &ZeroMeanFunction) -> bool {
        r_tilde.mean_square() < self.eta * self.eta
    }

    pub fn lift(&self, r_tilde: &ZeroMeanFunction) -> Result<ProfileFunction> {
        lift(r_tilde, self.eta)
    }

    pub fn reduced_rhs(&self, r_tilde: &ZeroMeanFunction) -> Result<ZeroMeanFunction> {
        reduced_rhs(r_tilde, self.eta)
    }
}

/// `sqrt(F(r)/2π)`.
pub fn equivolume_radius(r: &ProfileFunction) -> f64 {
    (enclosed_volume(r) / (2.0 * std::f64::consts::PI)).sqrt()
}

fn lift_constant(r_tilde: &ZeroMeanFunction, eta: f64) -> Result<f64> {
    if !(eta > 0.0) {
        return Err(AmcfError::Domain(format!("reference radius eta = {eta} must be positive")));
    }
    let mean_square = r_tilde.mean_square();
    let gap = eta * eta - mean_square;
    if !(gap > 0.0) {
        return Err(AmcfError::VolumeLift {
            eta_sq: eta * eta,
            mean_square,
        });
    }
    Ok(gap.sqrt())
}

/// `ψ(r̃, η)`: the unique profile with zero-mean part `r̃` and volume `F(η)`.
pub fn lift(r_tilde: &ZeroMeanFunction, eta: f64) -> Result<ProfileFunction> {
    let c = lift_constant(r_tilde, eta)?;
    let mut coeffs = r_tilde.coeffs().to_vec();
    coeffs[0] = Complex64::new(c, 0.0);
    let lifted = ProfileFunction::from_coeffs(coeffs)?;
    let min = lifted.min();
    if !(min > 0.0) {
        return Err(AmcfError::LiftPositivity { min });
    }
    Ok(lifted)
}

/// `D1ψ(0, η) h = h`.
pub fn lift_derivative_at_zero(h: &ZeroMeanFunction, eta: f64) -> Result<ZeroMeanFunction> {
    if !(eta > 0.0) {
        return Err(AmcfError::Domain(format!("reference radius eta = {eta} must be positive")));
    }
    Ok(h.clone())
}

/// `D1ψ(r̃, η) h = h - (⟨r̃, h⟩/2π) / c` with `c` the lift constant.
pub fn lift_derivative(r_tilde: &ZeroMeanFunction, h: &ZeroMeanFunction, eta: f64) -> Result<ProfileFunction> {
    let c = lift_constant(r_tilde, eta)?;
    let inner: f64 = r_tilde
        .coeffs()
        .iter()
        .zip(h.coeffs())
        .map(|(a, b)| (a * b.conj()).re)
        .sum();
    let mut coeffs = h.coeffs().to_vec();
    coeffs[0] = Complex64::new(-inner / c, 0.0);
    ProfileFunction::from_coeffs(coeffs)
}

/// `𝒢(r̃, η) = P0 G(ψ(r̃, η))`.
pub fn reduced_rhs(r_tilde: &ZeroMeanFunction, eta: f64) -> Result<ZeroMeanFunction> {
    let r = lift(r_tilde, eta)?;
    Ok(geometry::amcf_rhs(&r)?.project_zero_mean())
}
