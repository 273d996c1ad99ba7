//! Browser bindings for the interactive page in `www/`.
//!
//! Three things are exposed: a flow that can be stepped from a perturbed
//! cylinder, the unduloid generator, and branch curves `λ(s)` together with
//! the closed-form cylinder spectrum.

use wasm_bindgen::prelude::*;

use amcf::bifurcation;
use amcf::equilibria;
use amcf::evolution::{self, perturbed_cylinder};
use amcf::geometry;
use amcf::stability;
use amcf::torus::grid_points;
use amcf::ProfileFunction;

fn js_err(e: amcf::AmcfError) -> JsValue {
    JsValue::from_str(&e.to_string())
}

#[wasm_bindgen]
pub struct FlowDemo {
    r: ProfileFunction,
    t: f64,
    dt: f64,
    volume0: f64,
    stopped: Option<String>,
}

#[wasm_bindgen]
impl FlowDemo {
    /// `r_star + amp cos(mode x)` on `n` points, stepped semi-implicitly with `dt`.
    #[wasm_bindgen(constructor)]
    pub fn new(r_star: f64, mode: usize, amp: f64, n: usize, dt: f64) -> Result<FlowDemo, JsValue> {
        if !(r_star > 0.0 && amp.abs() < r_star && dt > 0.0) {
            return Err(JsValue::from_str("need r_star > 0, |amp| < r_star and dt > 0"));
        }
        let r = perturbed_cylinder(n, r_star, mode, amp).map_err(js_err)?;
        Ok(FlowDemo {
            volume0: geometry::enclosed_volume(&r),
            r,
            t: 0.0,
            dt,
            stopped: None,
        })
    }

    /// Takes up to `steps` steps; returns false once the flow has stopped.
    pub fn advance(&mut self, steps: usize) -> bool {
        if self.stopped.is_some() {
            return false;
        }
        for _ in 0..steps {
            match evolution::step_semi_implicit(&self.r, self.dt, 1e-6) {
                Ok(next) => {
                    self.r = next;
                    self.t += self.dt;
                }
                Err(e) => {
                    self.stopped = Some(e.to_string());
                    return false;
                }
            }
        }
        true
    }

    pub fn x(&self) -> Vec<f64> {
        grid_points(self.r.n())
    }

    pub fn profile(&self) -> Vec<f64> {
        self.r.values().to_vec()
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn volume(&self) -> f64 {
        geometry::enclosed_volume(&self.r)
    }

    pub fn volume_drift(&self) -> f64 {
        (self.volume() - self.volume0) / self.volume0
    }

    pub fn area(&self) -> f64 {
        geometry::surface_area(&self.r).unwrap_or(f64::NAN)
    }

    pub fn g_norm(&self) -> f64 {
        geometry::amcf_rhs(&self.r).map(|g| g.sup_norm()).unwrap_or(f64::NAN)
    }

    /// Amplitude `2|r̂(k)|` of mode `k`.
    pub fn mode_amplitude(&self, k: usize) -> f64 {
        self.r.mode_amplitude(k)
    }

    pub fn stop_reason(&self) -> Option<String> {
        self.stopped.clone()
    }
}

/// Unduloid samples on `n` points.
#[wasm_bindgen]
pub fn unduloid(b: f64, k: u32, n: usize) -> Result<Vec<f64>, JsValue> {
    equilibria::unduloid_profile(b, k, n)
        .map(ProfileFunction::into_values)
        .map_err(js_err)
}

/// Kenmotsu mean-curvature parameter `H = k I(B) / π`.
#[wasm_bindgen]
pub fn unduloid_h(b: f64, k: u32) -> Result<f64, JsValue> {
    equilibria::h_for(b, k).map_err(js_err)
}

/// `r⋆⁻² - k²` for `k = 1..=k_max`.
#[wasm_bindgen]
pub fn cylinder_multipliers(r_star: f64, k_max: usize) -> Vec<f64> {
    (1..=k_max).map(|k| stability::cylinder_multiplier(r_star, k)).collect()
}

/// Branch `ℓ` as interleaved pairs `[s0, λ0, s1, λ1, ...]`.
#[wasm_bindgen]
pub fn branch_curve(ell: u32, s_max: f64, steps: usize) -> Result<Vec<f64>, JsValue> {
    let b = bifurcation::trace_branch(ell, s_max, steps).map_err(js_err)?;
    Ok(b.points.iter().flat_map(|p| [p.s, p.state.lambda]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flow_relaxes_to_cylinder() {
        let mut f = FlowDemo::new(2.0, 1, 0.05, 32, 0.05).unwrap();
        let a0 = f.area();
        assert!(f.advance(400));
        assert!(f.area() < a0);
        assert!(f.mode_amplitude(1) < 1e-6);
        assert!(f.volume_drift().abs() < 1e-3);
        assert!((f.time() - 20.0).abs() < 1e-9);
        assert_eq!(f.x().len(), f.profile().len());
    }

    #[test]
    fn unstable_flow_stops_at_pinch() {
        let mut f = FlowDemo::new(0.5, 1, 0.05, 32, 0.01).unwrap();
        let mut guard = 0;
        while f.advance(100) && guard < 100 {
            guard += 1;
        }
        assert!(f.stop_reason().is_some());
    }

    #[test]
    fn bindings_forward_to_core() {
        assert_eq!(unduloid(0.3, 2, 64).unwrap().len(), 64);
        assert_eq!(cylinder_multipliers(2.0, 2), vec![-0.75, -3.75]);
        let c = branch_curve(1, 0.05, 5).unwrap();
        assert_eq!(c.len(), 2 * 11);
        assert_eq!(c[10], 0.0);
        assert_eq!(c[11], 1.0);
        assert!((unduloid_h(0.0, 2).unwrap() - 2.0).abs() < 1e-12);
    }
}
