//! Per-robot velocity commands and avoidance-radius growth.

use crate::error::{Error, Result};
use crate::geometry::{Vec2, VirtualTube};
use crate::planner::PlanProfile;
use crate::swarm::{RobotState, SwarmParams};

/// Pairwise distances are floored here before dividing.
const MIN_DISTANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct ControlCommand {
    /// Saturated command `v_c`.
    pub velocity: Vec2,
    /// `r_ac`, always `>= 0`.
    pub avoidance_radius_rate: f64,
    /// Pre-saturation components.
    pub forward: Vec2,
    pub interaction: Vec2,
    pub boundary: Vec2,
}

/// Rescales `v` into the band `[v_min, v_max]`, keeping its direction.
pub fn saturate(v: Vec2, v_min: f64, v_max: f64) -> Result<Vec2> {
    let n = v.norm();
    if n < 1e-12 {
        return Err(Error::DegenerateDirection(n));
    }
    Ok(if n < v_min {
        v * (v_min / n)
    } else if n > v_max {
        v * (v_max / n)
    } else {
        v
    })
}

/// Source of the forward speed magnitude.
#[derive(Clone, Copy, Debug)]
pub enum ForwardSource<'a> {
    /// `v_a*(l_i)` from a plan.
    Planned(&'a PlanProfile),
    /// A fixed speed, used by the baseline controller.
    Constant(f64),
}

impl ForwardSource<'_> {
    pub fn speed(&self, l: f64) -> f64 {
        match self {
            ForwardSource::Planned(p) => p.evaluate_clamped(l).0,
            ForwardSource::Constant(v) => *v,
        }
    }

    /// Planned density at `l`; `None` for the baseline.
    pub fn density(&self, l: f64) -> Option<f64> {
        match self {
            ForwardSource::Planned(p) => Some(p.evaluate_clamped(l).1),
            ForwardSource::Constant(_) => None,
        }
    }
}

/// `v_f = v_a*(l_i) t_c(p_i)`.
pub fn forward_velocity(robot: &RobotState, tube: &VirtualTube, source: &ForwardSource) -> Vec2 {
    let c = tube.project(&robot.position);
    c.tangent * source.speed(c.arc_length)
}

/// Repulsion from every neighbor closer than `(r_a,i + r_a,j)/2 + r_s`.
/// Entries with the robot's own id are skipped.
pub fn interaction_velocity(robot: &RobotState, neighbors: &[RobotState], params: &SwarmParams) -> Vec2 {
    let mut v = Vec2::zeros();
    for other in neighbors.iter().filter(|o| o.id != robot.id) {
        let diff = robot.position - other.position;
        let d = diff.norm().max(MIN_DISTANCE);
        let reach = 0.5 * (robot.avoidance_radius + other.avoidance_radius) + params.r_s;
        let gap = reach - d;
        if gap > 0.0 {
            v += diff * (params.k_m * gap / d);
        }
    }
    v
}

/// Push back toward the center curve once the lateral offset exceeds
/// `λ(l_i) - r_a,i` (floored at 0).
pub fn boundary_velocity(robot: &RobotState, tube: &VirtualTube, params: &SwarmParams) -> Vec2 {
    let c = tube.project(&robot.position);
    let threshold = (c.width - robot.avoidance_radius).max(0.0);
    let excess = c.lateral_offset.abs() - threshold;
    if excess <= 0.0 {
        return Vec2::zeros();
    }
    c.normal * (-c.side.sign() * params.k_xy * excess)
}

/// `r_ac = k_ra (ρ_r - ρ_a*)` when the swarm is denser than planned, else 0.
pub fn avoidance_radius_rate(rho_r: f64, rho_star: f64, k_ra: f64) -> f64 {
    if rho_r <= rho_star {
        0.0
    } else {
        k_ra * (rho_r - rho_star)
    }
}

/// Full command for one robot against a swarm snapshot.
///
/// `rho_r` is the current swarm density; with a planned source it drives the
/// avoidance-radius rate, otherwise the rate is 0. A zero pre-saturation sum
/// is replaced by `v_min t_c`.
pub fn velocity_command(
    robot: &RobotState,
    neighbors: &[RobotState],
    tube: &VirtualTube,
    source: &ForwardSource,
    params: &SwarmParams,
    rho_r: Option<f64>,
) -> ControlCommand {
    let c = tube.project(&robot.position);
    let forward = c.tangent * source.speed(c.arc_length);
    let interaction = interaction_velocity(robot, neighbors, params);
    let boundary = boundary_velocity(robot, tube, params);
    let velocity = saturate(forward + interaction + boundary, params.v_min, params.v_max)
        .unwrap_or(c.tangent * params.v_min);
    let avoidance_radius_rate = match (rho_r, source.density(c.arc_length)) {
        (Some(r), Some(star)) => avoidance_radius_rate(r, star, params.k_ra),
        _ => 0.0,
    };
    ControlCommand {
        velocity,
        avoidance_radius_rate,
        forward,
        interaction,
        boundary,
    }
}
