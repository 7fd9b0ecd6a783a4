//! Density limits and the rigid-shift density predictor.

use crate::error::{Error, Result};
use crate::geometry::VirtualTube;

/// Magnitude of the fastest achievable density change, robots/(m²·s).
///
/// A square block of side `2 n r_a` (`n = ⌈√N⌉`) whose corner robots fly
/// outward diagonally at `v_max` changes density at `√2 N v_max / (4 n³ r_a³)`.
/// The true rate is negative (density falls); the magnitude is returned.
pub fn max_density_rate(robot_count: usize, v_max: f64, r_a: f64) -> Result<f64> {
    if robot_count == 0 || !(v_max > 0.0) || !(r_a > 0.0) {
        return Err(Error::domain(format!(
            "max_density_rate needs N >= 1, v_max > 0, r_a > 0 (got {robot_count}, {v_max}, {r_a})"
        )));
    }
    let n = (robot_count as f64).sqrt().ceil();
    Ok(std::f64::consts::SQRT_2 * robot_count as f64 * v_max / (4.0 * n.powi(3) * r_a.powi(3)))
}

/// Densest admissible packing, `1 / r_p²`.
pub fn max_density(r_p: f64) -> f64 {
    1.0 / (r_p * r_p)
}

/// Occupancy window `[l - w/2, l + w/2]` whose tube area equals `N / ρ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub start: f64,
    pub end: f64,
}

impl Window {
    pub fn length(&self) -> f64 {
        self.end - self.start
    }
}

/// Solves `∫_{l-w/2}^{l+w/2} 2λ = target` for `w` with safeguarded Newton
/// steps inside a shrinking bisection bracket.
pub fn window_for_area(tube: &VirtualTube, center: f64, target: f64) -> Window {
    let profile = tube.width_profile();
    let area = |w: f64| profile.area_between(center - 0.5 * w, center + 0.5 * w);
    let slope = |w: f64| profile.eval(center + 0.5 * w) + profile.eval(center - 0.5 * w);
    let mut lo = 0.0;
    let mut hi = target / (2.0 * profile.min_width());
    let mut w = (target / (2.0 * profile.eval(center))).clamp(lo, hi);
    for _ in 0..200 {
        let f = area(w) - target;
        if f.abs() <= 1e-14 * target {
            break;
        }
        if f > 0.0 {
            hi = w;
        } else {
            lo = w;
        }
        if hi - lo <= 1e-15 * hi.max(1.0) {
            break;
        }
        let newton = w - f / slope(w);
        w = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
    }
    Window {
        start: center - 0.5 * w,
        end: center + 0.5 * w,
    }
}

/// Density after the swarm centered at `l` with density `rho_now` is shifted
/// rigidly by `delta_l` along the center curve.
pub fn predicted_density(tube: &VirtualTube, robot_count: usize, rho_now: f64, l: f64, delta_l: f64) -> Result<f64> {
    if !(rho_now > 0.0) || !rho_now.is_finite() {
        return Err(Error::domain(format!("rho_now must be > 0, got {rho_now}")));
    }
    if robot_count == 0 {
        return Err(Error::domain("robot_count must be >= 1"));
    }
    Ok(predict(tube, robot_count as f64, rho_now, l, delta_l).0)
}

/// Predicted density and its derivative with respect to `rho_now`.
pub(crate) fn predict(tube: &VirtualTube, n: f64, rho_now: f64, l: f64, delta_l: f64) -> (f64, f64) {
    let target = n / rho_now;
    let win = window_for_area(tube, l, target);
    let profile = tube.width_profile();
    let shifted = profile.area_between(win.start + delta_l, win.end + delta_l);
    let rho_f = n / shifted;
    // dS/dw on the original window, dS'/dw on the shifted one
    let ds_dw = profile.eval(win.end) + profile.eval(win.start);
    let dsp_dw = profile.eval(win.end + delta_l) + profile.eval(win.start + delta_l);
    let dw_drho = -n / (rho_now * rho_now) / ds_dw;
    let drho_f = -n / (shifted * shifted) * dsp_dw * dw_drho;
    (rho_f, drho_f)
}
