//! Branches of even equilibria bifurcating from cylinders.
//!
//! With `λ = 1/r⋆` the reduced even problem is `Ḡ(r̃, λ) = P0 G(ψ(r̃, 1/λ)) = 0`
//! for `r̃ = Σ a_k cos(kx)`. The trivial solutions are `(0, λ)`; at `λ = ℓ` the
//! multiplier `λ² - ℓ²` of `cos(ℓx)` vanishes and a branch of unduloids with
//! period `2π/ℓ` emerges. Branches are followed by pinning `a_ℓ = s` and
//! solving for the remaining coefficients and `λ` with Newton's method.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::equilibria::{h_for, unduloid_profile, B_CAP};
use crate::reduction::{self, lift};
use crate::stability::{reduced_even_jacobian, sorted_eigenvalues};
use crate::torus::{ProfileFunction, ZeroMeanFunction};
use crate::{AmcfError, Result};

pub const NEWTON_TOL: f64 = 1e-10;
pub const MAX_NEWTON_ITERATIONS: usize = 25;
/// Sine content of `Ḡ` above this signals a broken evenness symmetry.
pub const EVENNESS_TOL: f64 = 1e-10;

/// Cosine truncation for branch `ℓ`.
pub fn default_modes(ell: u32) -> usize {
    32.max(8 * ell as usize)
}

/// Collocation grid for `m` cosine modes.
pub fn grid_for(m: usize) -> usize {
    4 * m
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvenReducedState {
    /// `a_k` for `1 ≤ k ≤ m`.
    pub cos_coeffs: Vec<f64>,
    pub lambda: f64,
}

impl EvenReducedState {
    pub fn trivial(m: usize, lambda: f64) -> Self {
        Self {
            cos_coeffs: vec![0.0; m],
            lambda,
        }
    }

    pub fn m(&self) -> usize {
        self.cos_coeffs.len()
    }

    pub fn eta(&self) -> f64 {
        1.0 / self.lambda
    }

    pub fn zero_mean_part(&self, n: usize) -> Result<ZeroMeanFunction> {
        ZeroMeanFunction::from_cosine_series(n, &self.cos_coeffs)
    }

    /// The profile `ψ(r̃, 1/λ)` sampled on `n` points.
    pub fn lifted(&self, n: usize) -> Result<ProfileFunction> {
        lift(&self.zero_mean_part(n)?, self.eta())
    }

    fn to_vector(&self) -> DVector<f64> {
        let mut v = DVector::zeros(self.m() + 1);
        v.rows_mut(0, self.m()).copy_from_slice(&self.cos_coeffs);
        v[self.m()] = self.lambda;
        v
    }

    fn from_vector(v: &DVector<f64>) -> Self {
        let m = v.len() - 1;
        Self {
            cos_coeffs: v.rows(0, m).iter().copied().collect(),
            lambda: v[m],
        }
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(AmcfError::Domain(format!("lambda = {lambda} must be positive")))
    }
}

/// Cosine coefficients of `Ḡ(r̃, λ)`, `1 ≤ k ≤ m`.
pub fn reduced_even_rhs(state: &EvenReducedState) -> Result<Vec<f64>> {
    check_lambda(state.lambda)?;
    let m = state.m();
    let n = grid_for(m);
    let g = reduction::reduced_rhs(&state.zero_mean_part(n)?, state.eta())?;
    let odd = g.sine_coeffs(n / 2 - 1).into_iter().fold(0.0, |a: f64, b| a.max(b.abs()));
    if odd > EVENNESS_TOL {
        return Err(AmcfError::Consistency(format!("reduced operator produced sine content {odd:e}")));
    }
    Ok(g.cosine_coeffs(m))
}

fn sup(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |a: f64, b| a.max(b.abs()))
}

/// Finite-difference Jacobian of `f` with step `1e-7 (1 + ‖x‖∞)`.
fn fd_jacobian(f: &dyn Fn(&DVector<f64>) -> Result<DVector<f64>>, x: &DVector<f64>, rows: usize) -> Result<DMatrix<f64>> {
    let h = 1e-7 * (1.0 + sup(x));
    let mut jac = DMatrix::zeros(rows, x.len());
    let mut xp = x.clone();
    for j in 0..x.len() {
        xp[j] = x[j] + h;
        let fp = f(&xp)?;
        xp[j] = x[j] - h;
        let fm = f(&xp)?;
        xp[j] = x[j];
        jac.set_column(j, &((fp - fm) / (2.0 * h)));
    }
    Ok(jac)
}

fn newton(f: &dyn Fn(&DVector<f64>) -> Result<DVector<f64>>, mut x: DVector<f64>) -> Result<(DVector<f64>, f64)> {
    let mut res = f(&x)?;
    let mut norm = sup(&res);
    for _ in 0..MAX_NEWTON_ITERATIONS {
        if norm < NEWTON_TOL {
            return Ok((x, norm));
        }
        let jac = fd_jacobian(f, &x, res.len())?;
        let dx = jac
            .lu()
            .solve(&res)
            .ok_or_else(|| AmcfError::IllConditioned(f64::INFINITY))?;
        x -= dx;
        res = f(&x)?;
        norm = sup(&res);
        if !norm.is_finite() {
            break;
        }
    }
    if norm < NEWTON_TOL {
        Ok((x, norm))
    } else {
        Err(AmcfError::NoConvergence {
            iterations: MAX_NEWTON_ITERATIONS,
            residual: norm,
        })
    }
}

/// Solves `Ḡ(r̃, λ) = 0` with `a_ℓ = s` pinned, starting from `guess`.
///
/// Returns the solution and its residual `max |Ḡ|`.
pub fn corrector(guess: &EvenReducedState, ell: u32, s: f64) -> Result<(EvenReducedState, f64)> {
    let m = guess.m();
    let l = ell as usize;
    if ell == 0 || m < 4 * l {
        return Err(AmcfError::Domain(format!("corrector needs m >= 4ℓ, got m = {m}, ℓ = {ell}")));
    }
    let system = |x: &DVector<f64>| -> Result<DVector<f64>> {
        let state = EvenReducedState::from_vector(x);
        let g = reduced_even_rhs(&state)?;
        let mut out = DVector::zeros(m + 1);
        out.rows_mut(0, m).copy_from_slice(&g);
        out[m] = x[l - 1] - s;
        Ok(out)
    };
    let mut x0 = guess.to_vector();
    x0[l - 1] = s;
    let (x, res) = newton(&system, x0)?;
    Ok((EvenReducedState::from_vector(&x), res))
}

/// Newton on `Ḡ(·, λ) = 0` at fixed `λ` from `guess`.
pub fn solve_fixed_lambda(guess: &[f64], lambda: f64) -> Result<(EvenReducedState, f64)> {
    check_lambda(lambda)?;
    let system = |x: &DVector<f64>| -> Result<DVector<f64>> {
        let state = EvenReducedState {
            cos_coeffs: x.iter().copied().collect(),
            lambda,
        };
        Ok(DVector::from_vec(reduced_even_rhs(&state)?))
    };
    let (x, res) = newton(&system, DVector::from_column_slice(guess))?;
    Ok((
        EvenReducedState {
            cos_coeffs: x.iter().copied().collect(),
            lambda,
        },
        res,
    ))
}

/// Random even guess with `|a_k| ≤ amp / k`.
pub fn random_guess(m: usize, amp: f64, rng: &mut impl Rng) -> Vec<f64> {
    (1..=m).map(|k| rng.gen_range(-amp..amp) / k as f64).collect()
}

/// Outcome of [`non_bifurcation_trials`] at one `λ`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrivialConvergence {
    pub lambda: f64,
    pub trials: usize,
    pub converged_trivial: usize,
    pub max_final_norm: f64,
}

/// Newton from `trials` seeded random guesses of size `amp` at fixed `λ`.
pub fn non_bifurcation_trials(lambda: f64, trials: usize, amp: f64, m: usize, seed: u64) -> Result<TrivialConvergence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = TrivialConvergence {
        lambda,
        trials,
        converged_trivial: 0,
        max_final_norm: 0.0,
    };
    for _ in 0..trials {
        let guess = random_guess(m, amp, &mut rng);
        match solve_fixed_lambda(&guess, lambda) {
            Ok((state, _)) => {
                let norm = state.cos_coeffs.iter().fold(0.0, |a: f64, b| a.max(b.abs()));
                out.max_final_norm = out.max_final_norm.max(norm);
                if norm < 1e-8 {
                    out.converged_trivial += 1;
                }
            }
            Err(_) => out.max_final_norm = f64::INFINITY,
        }
    }
    Ok(out)
}

/// Leading eigenvalue of `D1Ḡ(r̃, λ)` in the cosine basis.
pub fn leading_even_eigenvalue(state: &EvenReducedState) -> Result<Complex64> {
    let n = grid_for(state.m());
    let jac = reduced_even_jacobian(&state.zero_mean_part(n)?, state.eta(), state.m())?;
    Ok(sorted_eigenvalues(&jac)[0])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchPoint {
    pub s: f64,
    pub state: EvenReducedState,
    pub residual: f64,
    pub leading_eigenvalue: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub ell: u32,
    /// Ordered by `s`.
    pub points: Vec<BranchPoint>,
    pub pitchfork_fit: Option<(f64, f64)>,
    /// Why a direction stopped early, if it did.
    pub truncated: Option<String>,
}

impl Branch {
    pub fn point_at(&self, s: f64) -> Option<&BranchPoint> {
        self.points.iter().find(|p| (p.s - s).abs() < 1e-12)
    }
}

/// Follows one direction of the branch; stops at the first corrector failure.
fn trace_direction(ell: u32, m: usize, s_values: &[f64]) -> (Vec<BranchPoint>, Option<String>) {
    let l = ell as usize;
    let mut prev = EvenReducedState::trivial(m, ell as f64);
    let mut prev_s = 0.0;
    let mut before: Option<(f64, EvenReducedState)> = None;
    let mut out = Vec::new();
    for &s in s_values {
        let guess = match &before {
            // Secant predictor through the last two points.
            Some((s0, p0)) => {
                let t = (s - prev_s) / (prev_s - s0);
                EvenReducedState {
                    cos_coeffs: prev
                        .cos_coeffs
                        .iter()
                        .zip(&p0.cos_coeffs)
                        .map(|(a, b)| a + t * (a - b))
                        .collect(),
                    lambda: prev.lambda + t * (prev.lambda - p0.lambda),
                }
            }
            None => {
                let mut g = prev.clone();
                g.cos_coeffs[l - 1] = s;
                g
            }
        };
        let solved = corrector(&guess, ell, s).and_then(|(state, residual)| {
            let eig = leading_even_eigenvalue(&state)?;
            Ok(BranchPoint {
                s,
                state,
                residual,
                leading_eigenvalue: eig,
            })
        });
        match solved {
            Ok(p) => {
                before = Some((prev_s, prev.clone()));
                prev = p.state.clone();
                prev_s = s;
                out.push(p);
            }
            Err(e) => {
                return (out, Some(format!("stopped at s = {s}: {e}")));
            }
        }
    }
    (out, None)
}

/// Branch bifurcating at `λ = ℓ`, traced over `s ∈ [-s_max, s_max]` in
/// `steps` increments per direction, with `m` cosine modes.
pub fn trace_branch_with(ell: u32, s_max: f64, steps: usize, m: usize) -> Result<Branch> {
    if ell == 0 || steps == 0 || !(s_max > 0.0) {
        return Err(AmcfError::Domain(format!("need ℓ >= 1, steps >= 1, s_max > 0 (got {ell}, {steps}, {s_max})")));
    }
    let positive: Vec<f64> = (1..=steps).map(|i| s_max * i as f64 / steps as f64).collect();
    let negative: Vec<f64> = positive.iter().map(|s| -s).collect();
    let origin = EvenReducedState::trivial(m, ell as f64);
    let zero = BranchPoint {
        s: 0.0,
        residual: 0.0,
        leading_eigenvalue: leading_even_eigenvalue(&origin)?,
        state: origin,
    };
    // Targets without threads (wasm32) fall back to tracing sequentially.
    let ((mut neg, neg_err), (pos, pos_err)) = std::thread::scope(|scope| {
        let worker = std::thread::Builder::new().spawn_scoped(scope, || trace_direction(ell, m, &negative));
        let b = trace_direction(ell, m, &positive);
        let a = match worker {
            Ok(h) => h.join().expect("branch worker panicked"),
            Err(_) => trace_direction(ell, m, &negative),
        };
        (a, b)
    });
    neg.reverse();
    let mut points = neg;
    points.push(zero);
    points.extend(pos);
    let truncated = match (neg_err, pos_err) {
        (None, None) => None,
        (a, b) => Some([a, b].into_iter().flatten().collect::<Vec<_>>().join("; ")),
    };
    let mut branch = Branch {
        ell,
        points,
        pitchfork_fit: None,
        truncated,
    };
    branch.pitchfork_fit = fit_pitchfork(&branch).ok();
    Ok(branch)
}

pub fn trace_branch(ell: u32, s_max: f64, steps: usize) -> Result<Branch> {
    trace_branch_with(ell, s_max, steps, default_modes(ell))
}

/// Window of `|s|` used by [`fit_pitchfork`].
pub const FIT_WINDOW: f64 = 0.1;

/// Quartic least-squares fit of `λ(s)` over `|s| ≤ 0.1`.
///
/// Returns `(λ̇(0), λ̈(0))`: the linear coefficient, which measures the odd
/// part, and twice the quadratic one.
pub fn fit_pitchfork(branch: &Branch) -> Result<(f64, f64)> {
    let pts: Vec<(f64, f64)> = branch
        .points
        .iter()
        .filter(|p| p.s.abs() <= FIT_WINDOW + 1e-12)
        .map(|p| (p.s, p.state.lambda))
        .collect();
    if pts.len() < 7 {
        return Err(AmcfError::InsufficientData(format!(
            "pitchfork fit needs at least 7 points with |s| <= {FIT_WINDOW}, have {}",
            pts.len()
        )));
    }
    // Scale s to [-1, 1] for conditioning.
    let scale = pts.iter().fold(0.0, |a: f64, p| a.max(p.0.abs()));
    let design = DMatrix::from_fn(pts.len(), 5, |i, j| (pts[i].0 / scale).powi(j as i32));
    let rhs = DVector::from_iterator(pts.len(), pts.iter().map(|p| p.1));
    let coef = design
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| AmcfError::Consistency(e.to_string()))?;
    Ok((coef[1] / scale, 2.0 * coef[2] / (scale * scale)))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KenmotsuComparison {
    pub s: f64,
    pub b: f64,
    pub h: f64,
    pub lambda: f64,
    /// `‖ψ(r̃, 1/λ) - unduloid‖∞`.
    pub distance: f64,
    pub lambda_minus_h: f64,
}

/// Unduloid amplitude `max r - min r = 2|B|/H`.
fn kenmotsu_amplitude(b: f64, k: u32) -> Result<f64> {
    Ok(2.0 * b.abs() / h_for(b, k)?)
}

/// Matches a branch point to the Kenmotsu unduloid of the same amplitude
/// and period `2π/ℓ` and measures their distance on `n` points.
pub fn compare_with_kenmotsu(point: &BranchPoint, ell: u32, n: usize) -> Result<KenmotsuComparison> {
    let r = point.state.lifted(n)?;
    let half_period = PI / ell as f64;
    let amp = (r.eval(0.0) - r.eval(half_period)).abs();
    let (b, shift) = if amp == 0.0 {
        (0.0, 0.0)
    } else {
        let (mut lo, mut hi) = (0.0, B_CAP);
        if kenmotsu_amplitude(hi, ell)? < amp {
            return Err(AmcfError::Consistency(format!(
                "no unduloid with B in (0, {B_CAP}) has amplitude {amp}"
            )));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if kenmotsu_amplitude(mid, ell)? < amp {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        // The unduloid has its maximum at x = 0; the branch does when a_ℓ > 0.
        let shift = if r.eval(0.0) >= r.eval(half_period) { 0.0 } else { half_period };
        (0.5 * (lo + hi), shift)
    };
    let undul = unduloid_profile(b, ell, n)?.translate(shift);
    let h = h_for(b, ell)?;
    Ok(KenmotsuComparison {
        s: point.s,
        b,
        h,
        lambda: point.state.lambda,
        distance: r.distance_sup(&undul),
        lambda_minus_h: point.state.lambda - h,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SecondDerivativeReport {
    pub ell: u32,
    /// Coefficient of `cos(ℓx)` in `D²₁₂Ḡ(0, ℓ)[cos ℓx, 1]`.
    pub mixed: f64,
    /// Coefficient of `cos(2ℓx)` in `D²₁₁Ḡ(0, ℓ)[cos ℓx, cos ℓx]`.
    pub pure: f64,
    /// Largest other coefficient in the two results.
    pub off_mode: f64,
}

/// Central-difference second derivatives of `Ḡ` at `(0, ℓ)` along `cos(ℓx)`.
pub fn second_derivative_checks(ell: u32) -> Result<SecondDerivativeReport> {
    if ell == 0 {
        return Err(AmcfError::Domain("ℓ must be at least 1".into()));
    }
    let (eps, h) = (1e-3, 1e-4);
    let m = default_modes(ell);
    let l = ell as usize;
    let lam = ell as f64;
    let eval = |a: f64, lambda: f64| {
        let mut state = EvenReducedState::trivial(m, lambda);
        state.cos_coeffs[l - 1] = a;
        reduced_even_rhs(&state)
    };
    let (pp, pm, mp, mm) = (eval(eps, lam + h)?, eval(eps, lam - h)?, eval(-eps, lam + h)?, eval(-eps, lam - h)?);
    let mixed: Vec<f64> = (0..m).map(|i| (pp[i] - pm[i] - mp[i] + mm[i]) / (4.0 * eps * h)).collect();
    let (p, z, q) = (eval(eps, lam)?, eval(0.0, lam)?, eval(-eps, lam)?);
    let pure: Vec<f64> = (0..m).map(|i| (p[i] - 2.0 * z[i] + q[i]) / (eps * eps)).collect();
    let off_mode = mixed
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != l - 1)
        .chain(pure.iter().enumerate().filter(|(i, _)| *i != 2 * l - 1 && *i != 0))
        .fold(0.0, |a: f64, (_, v)| a.max(v.abs()));
    Ok(SecondDerivativeReport {
        ell,
        mixed: mixed[l - 1],
        pure: pure[2 * l - 1],
        off_mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_branch_is_exact() {
        for lambda in [0.7, 1.0, 1.3, 2.0, 2.5] {
            let g = reduced_even_rhs(&EvenReducedState::trivial(32, lambda)).unwrap();
            assert!(g.iter().all(|v| v.abs() < 1e-12), "{lambda}");
        }
    }

    #[test]
    fn linear_multipliers_at_zero() {
        let eps = 1e-7;
        for lambda in [0.7, 1.5, 2.5] {
            for k in 1..5 {
                let mut s = EvenReducedState::trivial(32, lambda);
                s.cos_coeffs[k - 1] = eps;
                let g = reduced_even_rhs(&s).unwrap();
                let expect = lambda * lambda - (k * k) as f64;
                assert!((g[k - 1] / eps - expect).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn corrector_at_origin_returns_trivial() {
        let (s, res) = corrector(&EvenReducedState::trivial(32, 1.0), 1, 0.0).unwrap();
        assert_eq!(s, EvenReducedState::trivial(32, 1.0));
        assert_eq!(res, 0.0);
        assert!(corrector(&EvenReducedState::trivial(8, 3.0), 3, 0.01).is_err());
    }

    #[test]
    fn subcritical_and_symmetric() {
        let guess = EvenReducedState::trivial(32, 1.0);
        let (p, res) = corrector(&guess, 1, 0.05).unwrap();
        assert!(res < NEWTON_TOL);
        assert!(p.lambda < 1.0);
        assert!(reduced_even_rhs(&p).unwrap().iter().all(|v| v.abs() < 1e-10));
        let (q, _) = corrector(&guess, 1, -0.05).unwrap();
        assert!((p.lambda - q.lambda).abs() < 1e-8);
        // translating by π flips the sign of odd modes
        for (k, (a, b)) in p.cos_coeffs.iter().zip(&q.cos_coeffs).enumerate() {
            let sign = if (k + 1) % 2 == 1 { -1.0 } else { 1.0 };
            assert!((a - sign * b).abs() < 1e-8);
        }
    }

    #[test]
    fn second_derivatives_at_bifurcation_point() {
        // Values computed independently by direct expansion of the operator.
        for ell in [1u32, 2] {
            let l = ell as f64;
            let rep = second_derivative_checks(ell).unwrap();
            assert!((rep.mixed - 2.0 * l).abs() < 1e-4, "{rep:?}");
            assert!((rep.pure + 1.5 * l.powi(3)).abs() < 1e-3 * l.powi(3), "{rep:?}");
            assert!(rep.off_mode < 1e-3 * l.powi(3), "{rep:?}");
        }
    }

    #[test]
    fn branch_structure() {
        let b = trace_branch(1, 0.1, 10).unwrap();
        assert!(b.truncated.is_none());
        assert_eq!(b.points.len(), 21);
        assert!(b.points.windows(2).all(|w| w[0].s < w[1].s));
        for p in &b.points {
            assert!(p.residual < NEWTON_TOL);
            if p.s != 0.0 {
                assert!(p.state.lambda < 1.0);
                assert!(p.leading_eigenvalue.re > 0.0);
            }
        }
        for i in 0..10 {
            let (a, c) = (&b.points[i], &b.points[20 - i]);
            assert!((a.state.lambda - c.state.lambda).abs() < 1e-8);
        }
        let pos: Vec<f64> = b.points[10..].iter().map(|p| p.state.lambda).collect();
        assert!(pos.windows(2).all(|w| w[1] < w[0]));
        let (dot, ddot) = b.pitchfork_fit.unwrap();
        assert!(dot.abs() < 1e-3);
        assert!((ddot + 1.5).abs() < 0.075, "{ddot}");
    }

    #[test]
    fn second_branch_has_half_period() {
        let b = trace_branch(2, 0.06, 3).unwrap();
        for p in &b.points {
            for (k, a) in p.state.cos_coeffs.iter().enumerate() {
                if (k + 1) % 2 == 1 {
                    assert!(a.abs() < 1e-12, "odd mode {} = {a}", k + 1);
                }
            }
        }
    }

    #[test]
    fn truncation_is_resolved() {
        let guess = EvenReducedState::trivial(32, 1.0);
        let (a, _) = corrector(&guess, 1, 0.1).unwrap();
        let (b, _) = corrector(&EvenReducedState::trivial(64, 1.0), 1, 0.1).unwrap();
        assert!((a.lambda - b.lambda).abs() < 1e-8);
    }

    #[test]
    fn kenmotsu_match() {
        let b = trace_branch(1, 0.05, 2).unwrap();
        let origin = compare_with_kenmotsu(b.point_at(0.0).unwrap(), 1, 128).unwrap();
        assert_eq!(origin.b, 0.0);
        assert!(origin.distance < 1e-14);
        for s in [0.05, -0.05] {
            let c = compare_with_kenmotsu(b.point_at(s).unwrap(), 1, 256).unwrap();
            assert!(c.distance < 1e-4, "{c:?}");
            assert!(c.b > 0.0);
        }
    }

    #[test]
    fn off_integer_guesses_return_to_trivial() {
        for lambda in [0.5, 1.5] {
            let t = non_bifurcation_trials(lambda, 3, 0.02, 32, 7).unwrap();
            assert_eq!(t.converged_trivial, 3, "{t:?}");
        }
    }

    #[test]
    fn eigenvalue_crossing_slope() {
        let m = 32;
        let d = 1e-4;
        let above = leading_even_eigenvalue(&EvenReducedState::trivial(m, 1.0 + d)).unwrap().re;
        let below = leading_even_eigenvalue(&EvenReducedState::trivial(m, 1.0 - d)).unwrap().re;
        assert!(above > 0.0 && below < 0.0);
        assert!(((above - below) / (2.0 * d) - 2.0).abs() < 1e-3);
    }

    #[test]
    fn fit_needs_points() {
        let b = Branch {
            ell: 1,
            points: vec![],
            pitchfork_fit: None,
            truncated: None,
        };
        assert!(matches!(fit_pitchfork(&b), Err(AmcfError::InsufficientData(_))));
    }
}
