//! Equilibria of the flow: cylinders and periodic unduloids.
//!
//! A profile is stationary exactly when its mean curvature is constant.
//! Besides cylinders these are the undulary curves, given in arclength `s` by
//!
//! ```text
//! x(s) = ∫_{π/2H}^{s} (1 + B sin Ht) / sqrt(1 + B² + 2B sin Ht) dt
//! y(s) = sqrt(1 + B² + 2B sin Hs) / H
//! ```
//!
//! with `|B| < 1`. The curve is `2π/k`-periodic in `x` when
//! `πH/k = I(B) = ∫_{π/2}^{3π/2} (1 + B sin t)/sqrt(1 + B² + 2B sin t) dt`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::geometry;
use crate::quadrature;
use crate::torus::{self, ProfileFunction};
use crate::{AmcfError, Result};

/// Default bound on `|B|`; the integrand nearly degenerates as `|B| → 1`.
pub const B_CAP: f64 = 0.99;

const QUAD_TOL: f64 = 1e-13;

fn check_b(b: f64) -> Result<()> {
    if !(b.abs() < 1.0) {
        return Err(AmcfError::Domain(format!("unduloid parameter B = {b} must satisfy |B| < 1")));
    }
    Ok(())
}

/// `(1 + B sin u) / sqrt(1 + B² + 2B sin u)`, the speed of `x` in the phase `u = Hs`.
#[inline]
fn phase_speed(b: f64, u: f64) -> f64 {
    let s = u.sin();
    (1.0 + b * s) / (1.0 + b * b + 2.0 * b * s).sqrt()
}

/// `I(B)`, the half-period integral of the period constraint.
pub fn constraint_integral(b: f64) -> Result<f64> {
    check_b(b)?;
    quadrature::integrate(|t| phase_speed(b, t), PI / 2.0, 1.5 * PI, 1e-14)
}

/// Mean curvature `H = k I(B) / π` of the `2π/k`-periodic unduloid.
pub fn h_for(b: f64, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(AmcfError::Domain("period count k must be at least 1".into()));
    }
    Ok(k as f64 * constraint_integral(b)? / PI)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnduloidParams {
    pub h: f64,
    pub b: f64,
    pub k: u32,
}

impl UnduloidParams {
    /// Parameters satisfying the period constraint for `(B, k)`.
    pub fn new(b: f64, k: u32) -> Result<Self> {
        Ok(Self { h: h_for(b, k)?, b, k })
    }

    pub fn validate(&self) -> Result<()> {
        check_b(self.b)?;
        if self.k == 0 || !(self.h > 0.0) {
            return Err(AmcfError::Domain(format!("invalid unduloid parameters {self:?}")));
        }
        Ok(())
    }

    pub fn max_radius(&self) -> f64 {
        (1.0 + self.b.abs()) / self.h
    }

    pub fn min_radius(&self) -> f64 {
        (1.0 - self.b.abs()) / self.h
    }

    /// Radius at the phase `u = Hs`.
    fn radius_at_phase(&self, u: f64) -> f64 {
        (1.0 + self.b * self.b + 2.0 * self.b * u.sin()).sqrt() / self.h
    }
}

/// Point `(x(s), y(s))` of the undulary curve.
pub fn kenmotsu_point(s: f64, params: &UnduloidParams) -> Result<(f64, f64)> {
    params.validate()?;
    let h = params.h;
    let b = params.b;
    let x = quadrature::integrate(|t| phase_speed(b, h * t), PI / (2.0 * h), s, QUAD_TOL)?;
    Ok((x, params.radius_at_phase(h * s)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnduloidOptions {
    /// Largest accepted `|B|`.
    pub max_abs_b: f64,
    /// Dense arclength samples per period, as a multiple of the grid size.
    pub density: usize,
}

impl Default for UnduloidOptions {
    fn default() -> Self {
        Self {
            max_abs_b: B_CAP,
            density: 16,
        }
    }
}

/// Unduloid `(B, k)` sampled on the uniform grid of size `n`, even about `x = 0`.
pub fn unduloid_profile(b: f64, k: u32, n: usize) -> Result<ProfileFunction> {
    unduloid_profile_with(b, k, n, &UnduloidOptions::default())
}

pub fn unduloid_profile_with(b: f64, k: u32, n: usize, opts: &UnduloidOptions) -> Result<ProfileFunction> {
    torus::check_grid(n)?;
    check_b(b)?;
    if b.abs() > opts.max_abs_b {
        return Err(AmcfError::Domain(format!(
            "|B| = {} exceeds the cap {}",
            b.abs(),
            opts.max_abs_b
        )));
    }
    let params = UnduloidParams::new(b, k)?;
    if b == 0.0 {
        return ProfileFunction::constant(n, 1.0 / params.h);
    }
    let h = params.h;

    // One period of the phase u = Hs, centred on the maximum-radius point u = π/2 (x = 0).
    let samples = opts.density.max(2) * n;
    let u0 = -PI / 2.0;
    let du = 2.0 * PI / samples as f64;
    let us: Vec<f64> = (0..=samples).map(|i| u0 + du * i as f64).collect();
    let mut xs = Vec::with_capacity(samples + 1);
    // x(u) = (1/H) ∫_{π/2}^{u} speed; start from the left end of the period.
    let x_left = -quadrature::integrate(|t| phase_speed(b, t), u0, PI / 2.0, QUAD_TOL)? / h;
    xs.push(x_left);
    for w in us.windows(2) {
        let piece = quadrature::integrate(|t| phase_speed(b, t), w[0], w[1], QUAD_TOL)? / h;
        let last = *xs.last().expect("non-empty");
        xs.push(last + piece);
    }
    let extent = xs[samples] - xs[0];
    let period = 2.0 * PI / k as f64;
    if (extent - period).abs() > 1e-8 {
        return Err(AmcfError::Consistency(format!(
            "undulary period {extent} differs from 2π/k = {period}"
        )));
    }
    for w in xs.windows(2) {
        if !(w[1] > w[0]) {
            return Err(AmcfError::Consistency("x(s) is not strictly increasing".into()));
        }
    }

    let guess = MonotoneCubic::new(&xs, &us);
    let values = torus::grid_points(n)
        .into_iter()
        .map(|x| {
            let xr = x - period * (x / period).round();
            let u = invert_phase(b, h, xr, &xs, &us, guess.eval(xr))?;
            Ok(params.radius_at_phase(u))
        })
        .collect::<Result<Vec<f64>>>()?;
    ProfileFunction::from_values(values)
}

/// Newton polish of `x(u) = target` started from the interpolated guess.
fn invert_phase(b: f64, h: f64, target: f64, xs: &[f64], us: &[f64], guess: f64) -> Result<f64> {
    let idx = xs.partition_point(|&x| x <= target).clamp(1, xs.len() - 1) - 1;
    let (x_base, u_base) = (xs[idx], us[idx]);
    let mut u = guess.clamp(us[0], us[us.len() - 1]);
    for _ in 0..8 {
        let x = x_base + quadrature::integrate(|t| phase_speed(b, t), u_base, u, QUAD_TOL)? / h;
        let step = (x - target) * h / phase_speed(b, u);
        u -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    Ok(u)
}

/// Shape-preserving piecewise cubic Hermite interpolant (Fritsch–Carlson slopes).
struct MonotoneCubic<'a> {
    x: &'a [f64],
    y: &'a [f64],
    slopes: Vec<f64>,
}

impl<'a> MonotoneCubic<'a> {
    fn new(x: &'a [f64], y: &'a [f64]) -> Self {
        let n = x.len();
        let secant: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i])).collect();
        let mut slopes = vec![0.0; n];
        slopes[0] = secant[0];
        slopes[n - 1] = secant[n - 2];
        for i in 1..n - 1 {
            let (a, c) = (secant[i - 1], secant[i]);
            slopes[i] = if a * c <= 0.0 {
                0.0
            } else {
                let (h0, h1) = (x[i] - x[i - 1], x[i + 1] - x[i]);
                let (w1, w2) = (2.0 * h1 + h0, h1 + 2.0 * h0);
                (w1 + w2) / (w1 / a + w2 / c)
            };
        }
        Self { x, y, slopes }
    }

    fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        let i = self.x.partition_point(|&v| v <= t).clamp(1, n - 1) - 1;
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let (h00, h10) = ((1.0 + 2.0 * s) * (1.0 - s).powi(2), s * (1.0 - s).powi(2));
        let (h01, h11) = (s * s * (3.0 - 2.0 * s), s * s * (s - 1.0));
        h00 * self.y[i] + h10 * h * self.slopes[i] + h01 * self.y[i + 1] + h11 * h * self.slopes[i + 1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EquilibriumKind {
    Cylinder { radius: f64 },
    Unduloid { b: f64, k: u32 },
    NotEquilibrium { g_norm: f64 },
}

/// Location and value of an extremum of the trigonometric interpolant near grid index `j`.
fn refine_extremum(r: &ProfileFunction, j: usize, maximize: bool) -> (f64, f64) {
    let h = 2.0 * PI / r.n() as f64;
    let x0 = torus::grid_points(r.n())[j];
    let sign = if maximize { -1.0 } else { 1.0 };
    let f = |x: f64| sign * r.eval(x);
    let (mut a, mut b) = (x0 - h, x0 + h);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-12 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, r.eval(x))
}

/// Decides whether `r` is a cylinder, an unduloid or not stationary at tolerance `tol` on `‖G‖∞`.
pub fn classify_equilibrium(r: &ProfileFunction, tol: f64) -> Result<EquilibriumKind> {
    let g_norm = geometry::amcf_rhs(r)?.sup_norm();
    if !(g_norm < tol) {
        return Ok(EquilibriumKind::NotEquilibrium { g_norm });
    }
    // Same sup-distance test for both shapes.
    const MATCH_TOL: f64 = 1e-5;
    let mean = r.mean();
    if (r.max() - mean).max(mean - r.min()) < MATCH_TOL {
        return Ok(EquilibriumKind::Cylinder { radius: mean });
    }
    let n = r.n();
    let k = (1..n / 2)
        .max_by(|&a, &b| r.coeff(a as i64).norm().total_cmp(&r.coeff(b as i64).norm()))
        .expect("grid has at least one mode") as u32;
    let argmax = (0..n).max_by(|&a, &b| r.values()[a].total_cmp(&r.values()[b])).expect("non-empty");
    let argmin = (0..n).min_by(|&a, &b| r.values()[a].total_cmp(&r.values()[b])).expect("non-empty");
    let (x_max, r_max) = refine_extremum(r, argmax, true);
    let (_, r_min) = refine_extremum(r, argmin, false);
    let b = (r_max - r_min) / (r_max + r_min);
    if !(b < B_CAP) {
        return Ok(EquilibriumKind::NotEquilibrium { g_norm });
    }
    let regenerated = unduloid_profile(b, k, n)?.translate(x_max);
    if regenerated.distance_sup(r) < MATCH_TOL {
        Ok(EquilibriumKind::Unduloid { b, k })
    } else {
        Ok(EquilibriumKind::NotEquilibrium { g_norm })
    }
}

/// The `B`-values drawn for the family of `2π`-periodic undulary curves.
pub const FAMILY_B: [f64; 9] = [-0.99, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 0.99];

/// Unduloids for each `B` in `bs` at period count `k`.
pub fn undulary_family(bs: &[f64], k: u32, n: usize) -> Result<Vec<(f64, ProfileFunction)>> {
    bs.iter().map(|&b| Ok((b, unduloid_profile(b, k, n)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::oracles;

    #[test]
    fn constraint_integral_values() {
        assert!((constraint_integral(0.0).unwrap() - PI).abs() < 1e-12);
        let a = constraint_integral(0.4).unwrap();
        let b = constraint_integral(-0.4).unwrap();
        assert!((a - b).abs() < 1e-12);
        let oracle = oracles::gauss_legendre_composite(&|t: f64| phase_speed(0.5, t), PI / 2.0, 1.5 * PI, 64);
        assert!((constraint_integral(0.5).unwrap() - oracle).abs() < 1e-10);
        assert!(constraint_integral(1.0).is_err());
        assert!(constraint_integral(-1.2).is_err());
    }

    #[test]
    fn mean_curvature_parameter() {
        assert!((h_for(0.0, 1).unwrap() - 1.0).abs() < 1e-13);
        assert!((h_for(0.0, 3).unwrap() - 3.0).abs() < 1e-12);
        assert!((h_for(0.5, 1).unwrap() - constraint_integral(0.5).unwrap() / PI).abs() < 1e-15);
        assert!(h_for(0.5, 0).is_err());
    }

    #[test]
    fn kenmotsu_points() {
        let p = UnduloidParams { h: 2.0, b: 0.0, k: 2 };
        let (x, y) = kenmotsu_point(1.3, &p).unwrap();
        assert!((x - (1.3 - PI / 4.0)).abs() < 1e-13);
        assert!((y - 0.5).abs() < 1e-15);

        let p = UnduloidParams::new(0.3, 1).unwrap();
        let (x, y) = kenmotsu_point(PI / (2.0 * p.h), &p).unwrap();
        assert_eq!(x, 0.0);
        assert!((y - 1.3 / p.h).abs() < 1e-14);
        let (x, y) = kenmotsu_point(1.5 * PI / p.h, &p).unwrap();
        assert!((y - 0.7 / p.h).abs() < 1e-14);
        // half a period of arclength covers half a spatial period
        assert!((x - PI).abs() < 1e-10);

        let bad = UnduloidParams { h: 1.0, b: 1.0, k: 1 };
        assert!(kenmotsu_point(0.0, &bad).is_err());
    }

    #[test]
    fn x_is_monotone_in_arclength() {
        for b in [-0.99, -0.5, 0.5, 0.99] {
            let p = UnduloidParams::new(b, 1).unwrap();
            let mut prev = f64::NEG_INFINITY;
            for i in 0..200 {
                let s = PI / (2.0 * p.h) + i as f64 * 0.05;
                let (x, _) = kenmotsu_point(s, &p).unwrap();
                assert!(x > prev);
                prev = x;
            }
        }
    }

    #[test]
    fn cylinder_case() {
        for k in 1..4 {
            let r = unduloid_profile(0.0, k, 64).unwrap();
            assert!(r.values().iter().all(|v| *v == 1.0 / k as f64));
        }
    }

    #[test]
    fn unduloid_has_constant_mean_curvature() {
        let r = unduloid_profile(0.3, 1, 256).unwrap();
        let h = geometry::mean_curvature(&r).unwrap();
        let expect = h_for(0.3, 1).unwrap();
        for v in h {
            assert!((v - expect).abs() < 1e-6 * expect);
        }
    }

    #[test]
    fn unduloid_extremal_radii() {
        let p = UnduloidParams::new(0.2, 2).unwrap();
        let r = unduloid_profile(0.2, 2, 256).unwrap();
        assert!((r.max() - r.min() - 0.4 / p.h).abs() < 1e-7);
    }

    #[test]
    fn unduloids_are_discrete_equilibria() {
        for b in [0.1, 0.5, 0.9] {
            for k in [1, 2] {
                let r = unduloid_profile(b, k, 512).unwrap();
                assert!(geometry::amcf_rhs(&r).unwrap().sup_norm() < 1e-6, "B={b} k={k}");
            }
        }
    }

    #[test]
    fn unduloids_are_even() {
        let n = 128;
        for b in [-0.6, 0.35] {
            let r = unduloid_profile(b, 1, n).unwrap();
            let v = r.values();
            for j in 1..n {
                assert!((v[j] - v[n - j]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn continuity_at_zero_b() {
        for k in [1, 2, 3] {
            let r = unduloid_profile(1e-3, k, 64).unwrap();
            let cyl = 1.0 / k as f64;
            let d = r.values().iter().fold(0.0_f64, |m, v| m.max((v - cyl).abs()));
            assert!(d < 2e-3 * cyl);
        }
    }

    #[test]
    fn b_cap_is_enforced() {
        assert!(unduloid_profile(0.995, 1, 64).is_err());
        let opts = UnduloidOptions {
            max_abs_b: 0.999,
            density: 32,
        };
        assert!(unduloid_profile_with(0.995, 1, 64, &opts).is_ok());
    }

    #[test]
    fn classification() {
        let c = ProfileFunction::constant(64, 0.7).unwrap();
        assert_eq!(classify_equilibrium(&c, 1e-8).unwrap(), EquilibriumKind::Cylinder { radius: 0.7 });
        // what a flow stopped at ‖G‖∞ ~ 1e-9 leaves behind
        let near = ProfileFunction::from_fn(64, |x| 2.0 + 1e-9 * x.cos()).unwrap();
        assert!(matches!(
            classify_equilibrium(&near, 1e-6).unwrap(),
            EquilibriumKind::Cylinder { radius } if (radius - 2.0).abs() < 1e-12
        ));

        let u = unduloid_profile(0.4, 1, 256).unwrap();
        match classify_equilibrium(&u, 1e-6).unwrap() {
            EquilibriumKind::Unduloid { b, k } => {
                assert!((b - 0.4).abs() < 1e-6);
                assert_eq!(k, 1);
            }
            other => panic!("{other:?}"),
        }
        // translated copy is recognized too
        let shifted = unduloid_profile(0.25, 2, 256).unwrap().translate(0.3);
        assert!(matches!(
            classify_equilibrium(&shifted, 1e-6).unwrap(),
            EquilibriumKind::Unduloid { k: 2, .. }
        ));

        let r = ProfileFunction::from_fn(64, |x| 1.0 + 0.1 * x.cos()).unwrap();
        let g = geometry::amcf_rhs(&r).unwrap().sup_norm();
        assert_eq!(
            classify_equilibrium(&r, 1e-6).unwrap(),
            EquilibriumKind::NotEquilibrium { g_norm: g }
        );
    }
}
