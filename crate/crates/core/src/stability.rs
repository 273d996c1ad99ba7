//! Linear stability at equilibria.
//!
//! At a cylinder of radius `r⋆` the linearization is diagonal in the Fourier
//! basis with multiplier `r⋆⁻² - k²`, each `k ≥ 1` appearing twice (cosine
//! and sine) and `0` once from the constant mode. The reduced operator on
//! zero-mean functions drops the `0`. At other equilibria the spectrum is
//! computed from a finite-difference Jacobian.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geometry;
use crate::reduction::{self, equivolume_radius};
use crate::torus::{ProfileFunction, ZeroMeanFunction};
use crate::{AmcfError, Result};

/// Largest `‖G(r)‖∞` accepted as an equilibrium by [`numeric_spectrum`].
pub const EQUILIBRIUM_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OperatorTag {
    #[serde(rename = "full-DG")]
    FullDg,
    #[serde(rename = "reduced-even")]
    ReducedEven,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// `{1, cos kx, sin kx}`.
    Full,
    /// `{cos kx : k ≥ 1}` around the zero-mean part, at fixed volume.
    EvenZeroMean,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub operator_tag: OperatorTag,
    pub base_point: String,
    /// Sorted by descending real part; serialized as `[re, im]` pairs.
    pub eigenvalues: Vec<Complex64>,
    pub mode_labels: Option<Vec<usize>>,
}

impl SpectrumReport {
    pub fn leading(&self) -> Complex64 {
        self.eigenvalues[0]
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.re).collect()
    }
}

fn sort_descending(eigs: &mut [Complex64]) {
    eigs.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
}

fn labelled(mut pairs: Vec<(f64, usize)>, tag: OperatorTag, base_point: String) -> SpectrumReport {
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    SpectrumReport {
        operator_tag: tag,
        base_point,
        eigenvalues: pairs.iter().map(|&(v, _)| Complex64::new(v, 0.0)).collect(),
        mode_labels: Some(pairs.into_iter().map(|(_, k)| k).collect()),
    }
}

fn check_radius(r_star: f64, k_max: usize) -> Result<()> {
    if !(r_star > 0.0 && r_star.is_finite()) || k_max == 0 {
        return Err(AmcfError::Domain(format!("need r_star > 0 and k_max >= 1, got {r_star}, {k_max}")));
    }
    Ok(())
}

/// `r⋆⁻² - k²`.
pub fn cylinder_multiplier(r_star: f64, k: usize) -> f64 {
    1.0 / (r_star * r_star) - (k * k) as f64
}

/// Closed-form spectrum of `DG(r⋆)` truncated at `k_max`.
pub fn cylinder_spectrum(r_star: f64, k_max: usize) -> Result<SpectrumReport> {
    check_radius(r_star, k_max)?;
    let mut pairs = vec![(0.0, 0)];
    for k in 1..=k_max {
        let v = cylinder_multiplier(r_star, k);
        pairs.push((v, k));
        pairs.push((v, k));
    }
    Ok(labelled(pairs, OperatorTag::FullDg, format!("cylinder r_star={r_star}")))
}

/// Closed-form spectrum of the reduced operator at the cylinder of radius `η`,
/// one entry per mode `1 ≤ k ≤ k_max`.
pub fn reduced_cylinder_spectrum(eta: f64, k_max: usize) -> Result<SpectrumReport> {
    check_radius(eta, k_max)?;
    let pairs = (1..=k_max).map(|k| (cylinder_multiplier(eta, k), k)).collect();
    Ok(labelled(pairs, OperatorTag::ReducedEven, format!("cylinder eta={eta}")))
}

/// Jacobian of `r̃ ↦ 𝒢(r̃, η)` restricted to `span{cos kx : 1 ≤ k ≤ m}`, by
/// central differences.
pub fn reduced_even_jacobian(r_tilde: &ZeroMeanFunction, eta: f64, m: usize) -> Result<DMatrix<f64>> {
    let n = r_tilde.n();
    if m == 0 || 3 * m > 2 * n {
        return Err(AmcfError::Domain(format!("basis size {m} exceeds 2n/3 for n = {n}")));
    }
    let eps = geometry::fd_step(r_tilde.as_profile());
    let mut jac = DMatrix::zeros(m, m);
    let mut dir = vec![0.0; m];
    for j in 0..m {
        dir[j] = 1.0;
        let e = ZeroMeanFunction::from_cosine_series(n, &dir)?;
        dir[j] = 0.0;
        let plus = reduction::reduced_rhs(&r_tilde.axpy(eps, &e)?, eta)?;
        let minus = reduction::reduced_rhs(&r_tilde.axpy(-eps, &e)?, eta)?;
        let col = plus.axpy(-1.0, &minus)?.scale(0.5 / eps).cosine_coeffs(m);
        jac.set_column(j, &DVector::from_vec(col));
    }
    Ok(jac)
}

/// Eigenvalues of a square real matrix, sorted by descending real part.
pub fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<Complex64> {
    let mut eigs: Vec<Complex64> = m.complex_eigenvalues().iter().copied().collect();
    sort_descending(&mut eigs);
    eigs
}

/// Eigenvalue with largest real part, and for a real one its unit eigenvector
/// by shifted inverse iteration.
pub fn leading_eigenpair(m: &DMatrix<f64>) -> Result<(Complex64, Option<DVector<f64>>)> {
    let lead = sorted_eigenvalues(m)[0];
    if lead.im.abs() > 1e-10 * (1.0 + lead.re.abs()) {
        return Ok((lead, None));
    }
    let dim = m.nrows();
    let shift = lead.re + 1e-7 * (1.0 + lead.re.abs());
    let shifted = m - DMatrix::identity(dim, dim) * shift;
    let lu = shifted.lu();
    let mut v = DVector::from_element(dim, 1.0 / (dim as f64).sqrt());
    for _ in 0..50 {
        let w = lu
            .solve(&v)
            .ok_or_else(|| AmcfError::IllConditioned(f64::INFINITY))?;
        let norm = w.norm();
        let next = w / norm;
        let change = (&next - &v).norm().min((&next + &v).norm());
        v = next;
        if change < 1e-14 {
            break;
        }
    }
    Ok((lead, Some(v)))
}

/// Numeric spectrum at an equilibrium.
///
/// With [`Basis::Full`], `m` real basis functions `{1, cos x, sin x, ...}`;
/// with [`Basis::EvenZeroMean`], the cosines `cos x .. cos mx` around the
/// zero-mean part with the volume held at that of `r`.
pub fn numeric_spectrum(r: &ProfileFunction, basis: Basis, m: usize) -> Result<SpectrumReport> {
    let g = geometry::amcf_rhs(r)?.sup_norm();
    if g >= EQUILIBRIUM_TOL {
        return Err(AmcfError::Precondition(format!(
            "base point is not an equilibrium: ‖G(r)‖∞ = {g:e}"
        )));
    }
    let base_point = format!("profile n={} mean={} ‖G‖∞={g:e}", r.n(), r.mean());
    let (tag, mat) = match basis {
        Basis::Full => (OperatorTag::FullDg, geometry::linearization_matrix(r, m)?),
        Basis::EvenZeroMean => (
            OperatorTag::ReducedEven,
            reduced_even_jacobian(&r.project_zero_mean(), equivolume_radius(r), m)?,
        ),
    };
    Ok(SpectrumReport {
        operator_tag: tag,
        base_point,
        eigenvalues: sorted_eigenvalues(&mat),
        mode_labels: None,
    })
}

/// Numeric spectra of cylinders over a radius sweep, one thread per radius.
pub fn cylinder_sweep(radii: &[f64], n: usize, m: usize) -> Result<Vec<SpectrumReport>> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = radii
            .iter()
            .map(|&rs| {
                scope.spawn(move || {
                    let r = ProfileFunction::constant(n, rs)?;
                    numeric_spectrum(&r, Basis::Full, m)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("spectrum worker panicked"))
            .collect()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StabilityClass {
    Stable,
    Critical,
    Unstable,
}

impl fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Stable => "stable",
            Self::Critical => "critical",
            Self::Unstable => "unstable",
        };
        f.write_str(s)
    }
}

/// Slowest nonzero rate `r⋆⁻² - 1` at a cylinder.
pub fn decay_rate_prediction(r_star: f64) -> Result<f64> {
    check_radius(r_star, 1)?;
    Ok(cylinder_multiplier(r_star, 1))
}

pub fn classify(r_star: f64) -> Result<StabilityClass> {
    check_radius(r_star, 1)?;
    Ok(if r_star > 1.0 {
        StabilityClass::Stable
    } else if r_star < 1.0 {
        StabilityClass::Unstable
    } else {
        StabilityClass::Critical
    })
}
