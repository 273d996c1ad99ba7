//! Time integration of `r_t = G(r)`.
//!
//! Two steppers are provided: classical RK4 on the full operator, and a
//! linearly implicit Euler step that treats the second-order part `A(r)`
//! implicitly and the remainder `f(r)` explicitly:
//!
//! ```text
//! (I + dt A(r)) r⁺ = r + dt f(r)
//! ```
//!
//! [`evolve`] drives either scheme, records conservation diagnostics and
//! stops on convergence to an equilibrium or when the profile pinches.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::geometry::{self, Frame, GeometrySummary};
use crate::reduction::{self, equivolume_radius};
use crate::torus::ProfileFunction;
use crate::{AmcfError, Result};

/// RK4 is stable on `[-2.78, 0]` of the real axis; this leaves some margin.
pub const RK4_STABILITY_CONSTANT: f64 = 2.5;

/// Largest condition estimate accepted by the semi-implicit solve.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    ExplicitRk4,
    SemiImplicitEuler,
}

impl std::str::FromStr for Scheme {
    type Err = AmcfError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "explicit-rk4" | "rk4" => Ok(Self::ExplicitRk4),
            "semi-implicit-euler" | "semi-implicit" => Ok(Self::SemiImplicitEuler),
            other => Err(AmcfError::Usage(format!("unknown scheme '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepController {
    pub scheme: Scheme,
    pub dt: f64,
    pub t_end: f64,
    pub tol_equilibrium: f64,
    pub r_min_floor: f64,
    pub diag_every: usize,
    /// Re-project onto the initial volume after every step.
    pub reproject_volume: bool,
}

impl StepController {
    pub fn new(scheme: Scheme, dt: f64, t_end: f64) -> Self {
        Self {
            scheme,
            dt,
            t_end,
            tol_equilibrium: 1e-9,
            r_min_floor: 1e-6,
            diag_every: 1,
            reproject_volume: false,
        }
    }

    /// Default controller for a grid of `n` points: RK4 at its stability
    /// limit, or the semi-implicit scheme at `dt = 1e-3`.
    pub fn default_for(scheme: Scheme, n: usize, t_end: f64) -> Self {
        let dt = match scheme {
            Scheme::ExplicitRk4 => rk4_stable_dt(n),
            Scheme::SemiImplicitEuler => 1e-3,
        };
        Self::new(scheme, dt, t_end)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.dt > 0.0
            && self.dt.is_finite()
            && self.t_end > 0.0
            && self.t_end.is_finite()
            && self.r_min_floor > 0.0
            && self.tol_equilibrium > 0.0
            && self.diag_every > 0;
        if ok {
            Ok(())
        } else {
            Err(AmcfError::Domain(format!("invalid step controller {self:?}")))
        }
    }
}

/// `c / k_max²` with `k_max = n/3` the highest mode kept by dealiasing.
///
/// `G` damps mode `k` at rate at most `k² / (1 + r_x²) ≤ k²`, so this bound
/// holds for every profile on the grid.
pub fn rk4_stable_dt(n: usize) -> f64 {
    let kmax = (n / 3).max(1) as f64;
    RK4_STABILITY_CONSTANT / (kmax * kmax)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    ReachedTEnd,
    Converged,
    PositivityBreach,
    StepFailure(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticRecord {
    pub t: f64,
    pub min_r: f64,
    pub volume: f64,
    pub area: f64,
    pub h_avg: f64,
    pub g_inf: f64,
}

impl DiagnosticRecord {
    fn new(t: f64, s: GeometrySummary) -> Self {
        Self {
            t,
            min_r: s.min_r,
            volume: s.volume,
            area: s.area,
            h_avg: s.h_avg,
            g_inf: s.g_norm,
        }
    }
}

/// A solution `r(t)` sampled at the diagnostic schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowTrajectory {
    pub times: Vec<f64>,
    pub profiles: Vec<ProfileFunction>,
    pub diagnostics: Vec<DiagnosticRecord>,
    pub termination: Termination,
    pub steps: usize,
}

impl FlowTrajectory {
    pub fn final_profile(&self) -> &ProfileFunction {
        self.profiles.last().expect("trajectory always holds the initial state")
    }

    /// `max_t |F(r(t)) - F(r0)| / F(r0)` over the records.
    pub fn max_volume_drift(&self) -> f64 {
        let f0 = self.diagnostics[0].volume;
        self.diagnostics
            .iter()
            .map(|d| (d.volume - f0).abs() / f0)
            .fold(0.0, f64::max)
    }

    /// Largest area increase between consecutive records.
    pub fn max_area_increase(&self) -> f64 {
        self.diagnostics
            .windows(2)
            .map(|w| w[1].area - w[0].area)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `max_t ‖r(t) - reference‖∞` over the records.
    pub fn max_departure(&self, reference: &ProfileFunction) -> f64 {
        self.profiles
            .iter()
            .map(|p| p.distance_sup(reference))
            .fold(0.0, f64::max)
    }
}

fn check_floor(r: &ProfileFunction, floor: f64) -> Result<()> {
    let min = r.min();
    if min > floor {
        Ok(())
    } else {
        Err(AmcfError::PositivityBreach { min, floor })
    }
}

/// Classical four-stage Runge–Kutta step.
pub fn step_rk4(r: &ProfileFunction, dt: f64, r_min_floor: f64) -> Result<ProfileFunction> {
    let limit = rk4_stable_dt(r.n());
    if dt > limit {
        return Err(AmcfError::Precondition(format!(
            "dt = {dt:e} exceeds the RK4 stability bound {limit:e} for n = {}",
            r.n()
        )));
    }
    check_floor(r, r_min_floor)?;
    let k1 = geometry::amcf_rhs(r)?;
    let s2 = r.axpy(0.5 * dt, &k1)?;
    check_floor(&s2, r_min_floor)?;
    let k2 = geometry::amcf_rhs(&s2)?;
    let s3 = r.axpy(0.5 * dt, &k2)?;
    check_floor(&s3, r_min_floor)?;
    let k3 = geometry::amcf_rhs(&s3)?;
    let s4 = r.axpy(dt, &k3)?;
    check_floor(&s4, r_min_floor)?;
    let k4 = geometry::amcf_rhs(&s4)?;
    let incr = k1.axpy(2.0, &k2)?.axpy(2.0, &k3)?.axpy(1.0, &k4)?;
    let next = r.axpy(dt / 6.0, &incr)?;
    check_floor(&next, r_min_floor)?;
    Ok(next)
}

/// Dense matrix of `A(r)` acting on grid values, assembled column by column
/// from [`geometry::quasilinear_apply_a`] on the grid's unit vectors.
pub fn assemble_a(r: &ProfileFunction) -> Result<DMatrix<f64>> {
    let n = r.n();
    let fr = Frame::new(r)?;
    let area = fr.area();
    let mut a = DMatrix::zeros(n, n);
    let mut unit = vec![0.0; n];
    for j in 0..n {
        unit[j] = 1.0;
        let e = ProfileFunction::from_values(unit.clone())?;
        unit[j] = 0.0;
        let col = geometry::apply_a_with(&fr, area, &e);
        a.set_column(j, &DVector::from_column_slice(col.values()));
    }
    Ok(a)
}

/// Linearly implicit Euler step `(I + dt A(r)) r⁺ = r + dt f(r)`.
pub fn step_semi_implicit(r: &ProfileFunction, dt: f64, r_min_floor: f64) -> Result<ProfileFunction> {
    check_floor(r, r_min_floor)?;
    let n = r.n();
    let mut m = assemble_a(r)?;
    m *= dt;
    for i in 0..n {
        m[(i, i)] += 1.0;
    }
    let f = geometry::quasilinear_f(r)?;
    let rhs = DVector::from_iterator(n, r.values().iter().zip(f.values()).map(|(a, b)| a + dt * b));
    let lu = m.lu();
    let u = lu.u();
    let diag = u.diagonal();
    let (lo, hi) = diag
        .iter()
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), d| (lo.min(d.abs()), hi.max(d.abs())));
    let estimate = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if !(estimate <= MAX_CONDITION) {
        return Err(AmcfError::IllConditioned(estimate));
    }
    let sol = lu.solve(&rhs).ok_or(AmcfError::IllConditioned(f64::INFINITY))?;
    let next = ProfileFunction::from_values(sol.iter().copied().collect())?;
    check_floor(&next, r_min_floor)?;
    Ok(next)
}

fn step(r: &ProfileFunction, dt: f64, ctrl: &StepController) -> Result<ProfileFunction> {
    match ctrl.scheme {
        Scheme::ExplicitRk4 => step_rk4(r, dt, ctrl.r_min_floor),
        Scheme::SemiImplicitEuler => step_semi_implicit(r, dt, ctrl.r_min_floor),
    }
}

/// Integrates from `r0` until `t_end`, convergence, a positivity breach or a failed step.
pub fn evolve(r0: &ProfileFunction, ctrl: &StepController) -> Result<FlowTrajectory> {
    ctrl.validate()?;
    let min = r0.min();
    if !(min > 0.0) {
        return Err(AmcfError::NonPositiveProfile { min });
    }
    let eta = equivolume_radius(r0);

    let mut r = r0.clone();
    let mut t = 0.0;
    let mut steps = 0usize;
    let mut summary = geometry::summary(&r)?;
    let mut traj = FlowTrajectory {
        times: vec![0.0],
        profiles: vec![r.clone()],
        diagnostics: vec![DiagnosticRecord::new(0.0, summary)],
        termination: Termination::ReachedTEnd,
        steps: 0,
    };
    let finish_tol = 1e-12 * ctrl.t_end;

    let termination = loop {
        if summary.g_norm < ctrl.tol_equilibrium {
            break Termination::Converged;
        }
        let remaining = ctrl.t_end - t;
        if remaining <= finish_tol {
            break Termination::ReachedTEnd;
        }
        let dt = ctrl.dt.min(remaining);
        let next = match step(&r, dt, ctrl) {
            Ok(next) => next,
            Err(AmcfError::PositivityBreach { .. }) => break Termination::PositivityBreach,
            Err(e) => break Termination::StepFailure(e.to_string()),
        };
        r = if ctrl.reproject_volume {
            match reduction::lift(&next.project_zero_mean(), eta) {
                Ok(p) => p,
                Err(e) => break Termination::StepFailure(e.to_string()),
            }
        } else {
            next
        };
        t += dt;
        steps += 1;
        summary = match geometry::summary(&r) {
            Ok(s) => s,
            Err(e) => break Termination::StepFailure(e.to_string()),
        };
        if steps % ctrl.diag_every == 0 {
            traj.times.push(t);
            traj.profiles.push(r.clone());
            traj.diagnostics.push(DiagnosticRecord::new(t, summary));
        }
    };

    if *traj.times.last().expect("non-empty") < t {
        traj.times.push(t);
        traj.profiles.push(r);
        traj.diagnostics.push(DiagnosticRecord::new(t, summary));
    }
    traj.termination = termination;
    traj.steps = steps;
    Ok(traj)
}

/// Lower and upper amplitude of the window treated as linear by [`fit_exponential_rate`].
pub const LINEAR_WINDOW: (f64, f64) = (1e-8, 1e-3);

/// Least-squares slope of `log(2|r̂(k)|)` against time over the records whose
/// mode amplitude lies in [`LINEAR_WINDOW`].
pub fn fit_exponential_rate(traj: &FlowTrajectory, mode_k: usize) -> Result<f64> {
    let (lo, hi) = LINEAR_WINDOW;
    let pts: Vec<(f64, f64)> = traj
        .times
        .iter()
        .zip(&traj.profiles)
        .filter_map(|(&t, p)| {
            let a = p.mode_amplitude(mode_k);
            (a >= lo && a <= hi).then(|| (t, a.ln()))
        })
        .collect();
    if pts.len() < 10 {
        return Err(AmcfError::InsufficientData(format!(
            "{} records of mode {mode_k} inside the linear window, need 10",
            pts.len()
        )));
    }
    let nf = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxy: f64 = pts.iter().map(|(t, y)| (t - mt) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(t, _)| (t - mt).powi(2)).sum();
    if sxx == 0.0 {
        return Err(AmcfError::InsufficientData("all window records share one time".into()));
    }
    Ok(sxy / sxx)
}

/// `r_star + amp · cos(mode · x)`.
pub fn perturbed_cylinder(n: usize, r_star: f64, mode: usize, amp: f64) -> Result<ProfileFunction> {
    ProfileFunction::from_fn(n, |x| r_star + amp * (mode as f64 * x).cos())
}
