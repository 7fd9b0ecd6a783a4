//! Per-robot state and swarm-level quantities: occupied area, density,
//! average forward speed, front/last robots and pairwise distances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Vec2, VirtualTube};

const AREA_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct RobotState {
    pub id: usize,
    pub position: Vec2,
    pub velocity_command: Vec2,
    pub avoidance_radius: f64,
}

impl RobotState {
    pub fn new(id: usize, position: Vec2, avoidance_radius: f64) -> Self {
        Self {
            id,
            position,
            velocity_command: Vec2::zeros(),
            avoidance_radius,
        }
    }
}

/// Physical constants of the swarm and its controller gains.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwarmParams {
    pub robot_count: usize,
    pub v_min: f64,
    pub v_max: f64,
    /// Tangential acceleration limit, m/s².
    pub a_v: f64,
    /// Normal acceleration limit, m/s².
    pub a_n: f64,
    /// Physical radius.
    pub r_p: f64,
    /// Safety radius.
    pub r_s: f64,
    /// Nominal avoidance radius.
    pub r_a: f64,
    /// Desired density, robots/m².
    pub rho_d: f64,
    /// Density ceiling; `1 / r_p²` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_max: Option<f64>,
    /// Density-tracking gain for the avoidance radius.
    pub k_ra: f64,
    /// Inter-robot repulsion gain.
    pub k_m: f64,
    /// Boundary repulsion gain.
    pub k_xy: f64,
    /// Upper bound on a robot's avoidance radius as a multiple of `r_a`.
    #[serde(default = "default_r_a_max_factor")]
    pub r_a_max_factor: f64,
}

fn default_r_a_max_factor() -> f64 {
    2.0
}

impl SwarmParams {
    /// Parameter set used by the built-in scenarios.
    pub fn standard() -> Self {
        Self {
            robot_count: 20,
            v_min: 2.0,
            v_max: 5.0,
            a_v: 1.0,
            a_n: 1.0,
            r_p: 0.3,
            r_s: 0.4,
            r_a: 0.8,
            rho_d: 0.1989,
            rho_max: None,
            k_ra: 4.0,
            k_m: 10.0,
            k_xy: 0.4,
            r_a_max_factor: 2.0,
        }
    }

    pub fn rho_max(&self) -> f64 {
        self.rho_max.unwrap_or(1.0 / (self.r_p * self.r_p))
    }

    pub fn r_a_max(&self) -> f64 {
        self.r_a_max_factor * self.r_a
    }

    /// Checks the type invariants; errors name the offending field.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("v_min", self.v_min),
            ("v_max", self.v_max),
            ("a_v", self.a_v),
            ("a_n", self.a_n),
            ("r_p", self.r_p),
            ("r_s", self.r_s),
            ("r_a", self.r_a),
            ("rho_d", self.rho_d),
            ("k_ra", self.k_ra),
            ("k_m", self.k_m),
            ("k_xy", self.k_xy),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::config(name, format!("must be finite and > 0, got {v}")));
            }
        }
        if self.robot_count == 0 {
            return Err(Error::config("robot_count", "must be >= 1"));
        }
        if self.v_min > self.v_max {
            return Err(Error::config("v_min", format!("v_min {} exceeds v_max {}", self.v_min, self.v_max)));
        }
        if !(self.r_p <= self.r_s && self.r_s <= self.r_a) {
            return Err(Error::config("r_s", "radii must satisfy r_p <= r_s <= r_a"));
        }
        if !(self.r_a_max_factor >= 1.0) || !self.r_a_max_factor.is_finite() {
            return Err(Error::config("r_a_max_factor", "must be >= 1"));
        }
        let rho_max = self.rho_max();
        if !(rho_max > 0.0) || !rho_max.is_finite() {
            return Err(Error::config("rho_max", "must be finite and > 0"));
        }
        if self.rho_d > rho_max {
            return Err(Error::config("rho_d", format!("rho_d {} exceeds rho_max {rho_max}", self.rho_d)));
        }
        Ok(())
    }
}

/// Robot together with its projected arc length.
fn arc_lengths<'a>(states: &'a [RobotState], tube: &VirtualTube) -> impl Iterator<Item = (&'a RobotState, f64)> + 'a {
    let ls: Vec<f64> = states.iter().map(|r| tube.project(&r.position).arc_length).collect();
    states.iter().zip(ls)
}

fn pick<'a>(states: &'a [RobotState], tube: &VirtualTube, front: bool) -> Result<&'a RobotState> {
    let mut best: Option<(&RobotState, f64)> = None;
    for (r, l) in arc_lengths(states, tube) {
        best = match best {
            None => Some((r, l)),
            Some((b, bl)) => {
                let better = if front { l > bl } else { l < bl };
                if better || (l == bl && r.id < b.id) {
                    Some((r, l))
                } else {
                    Some((b, bl))
                }
            }
        };
    }
    best.map(|(r, _)| r).ok_or(Error::EmptySwarm)
}

/// Robot nearest to `γ(L)` along the center curve; ties go to the lowest id.
pub fn front_robot<'a>(states: &'a [RobotState], tube: &VirtualTube) -> Result<&'a RobotState> {
    pick(states, tube, true)
}

/// Robot farthest from `γ(L)`; ties go to the lowest id.
pub fn last_robot<'a>(states: &'a [RobotState], tube: &VirtualTube) -> Result<&'a RobotState> {
    pick(states, tube, false)
}

/// Minimum area a swarm of `n` robots can occupy (square packing at `2 r_p`).
pub fn packing_floor(n: usize, r_p: f64) -> f64 {
    n as f64 * (2.0 * r_p) * (2.0 * r_p)
}

/// Tube area spanned between the projections of `l_last` and `l_front`,
/// floored at the packing area of `n` robots.
pub fn window_area(tube: &VirtualTube, l_last: f64, l_front: f64, n: usize, r_p: f64) -> f64 {
    let (a, b) = if l_last <= l_front { (l_last, l_front) } else { (l_front, l_last) };
    let f = |l: f64| 2.0 * tube.width_clamped(l);
    let area = crate::quadrature::adaptive_simpson(&f, a, b, AREA_TOL);
    area.max(packing_floor(n, r_p))
}

/// Area occupied by the swarm: `∫ 2λ` over the arc-length window between
/// the last and the front robot.
pub fn swarm_area(states: &[RobotState], tube: &VirtualTube, r_p: f64) -> Result<f64> {
    if states.is_empty() {
        return Err(Error::EmptySwarm);
    }
    let (lo, hi) = arc_lengths(states, tube).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, l)| {
        (lo.min(l), hi.max(l))
    });
    Ok(window_area(tube, lo, hi, states.len(), r_p))
}

/// Real-time density `N / S`.
pub fn swarm_density(states: &[RobotState], tube: &VirtualTube, r_p: f64) -> Result<f64> {
    Ok(states.len() as f64 / swarm_area(states, tube, r_p)?)
}

/// Mean of the robots' forward speeds.
pub fn average_forward_speed(forward_speeds: &[f64]) -> Result<f64> {
    if forward_speeds.is_empty() {
        return Err(Error::EmptySwarm);
    }
    Ok(forward_speeds.iter().sum::<f64>() / forward_speeds.len() as f64)
}

/// Smallest distance between any two robots (sort-and-sweep on x).
pub fn min_pairwise_distance(positions: &[Vec2]) -> Result<f64> {
    if positions.len() < 2 {
        return Err(Error::TooFewRobots(positions.len()));
    }
    let mut sorted: Vec<&Vec2> = positions.iter().collect();
    sorted.sort_by(|a, b| a.x.total_cmp(&b.x));
    let mut best = f64::INFINITY;
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            if sorted[j].x - sorted[i].x >= best {
                break;
            }
            best = best.min((sorted[j] - sorted[i]).norm());
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{TubeBuilder, WidthProfile};
    use approx::assert_abs_diff_eq;

    fn robots_at(ls: &[f64]) -> Vec<RobotState> {
        ls.iter()
            .enumerate()
            .map(|(i, &l)| RobotState::new(i, Vec2::new(l, 0.0), 0.8))
            .collect()
    }

    fn narrowing() -> VirtualTube {
        let w = WidthProfile::new(vec![(0.0, 5.0), (40.0, 1.0)]).unwrap();
        TubeBuilder::new(Vec2::zeros(), 0.0).straight(40.0).build(w).unwrap()
    }

    #[test]
    fn front_and_last() {
        let tube = VirtualTube::straight(20.0, 2.0).unwrap();
        let r = robots_at(&[4.0, 10.0, 7.0]);
        assert_eq!(front_robot(&r, &tube).unwrap().id, 1);
        assert_eq!(last_robot(&r, &tube).unwrap().id, 0);
        let one = robots_at(&[3.0]);
        assert_eq!(front_robot(&one, &tube).unwrap().id, 0);
        assert_eq!(last_robot(&one, &tube).unwrap().id, 0);
        assert!(front_robot(&[], &tube).is_err());
    }

    #[test]
    fn ties_go_to_lowest_id() {
        let tube = VirtualTube::straight(20.0, 2.0).unwrap();
        let r = vec![
            RobotState::new(5, Vec2::new(6.0, 0.5), 0.8),
            RobotState::new(2, Vec2::new(6.0, -0.5), 0.8),
        ];
        assert_eq!(front_robot(&r, &tube).unwrap().id, 2);
        assert_eq!(last_robot(&r, &tube).unwrap().id, 2);
    }

    #[test]
    fn area_closed_forms() {
        let tube = VirtualTube::straight(20.0, 2.0).unwrap();
        let a = swarm_area(&robots_at(&[4.0, 7.0, 10.0]), &tube, 0.3).unwrap();
        assert_abs_diff_eq!(a, 24.0, epsilon = 1e-9);

        // λ(l) = 5 - 0.1 l over [0, 10]: 2 (50 - 5) = 90
        let a = swarm_area(&robots_at(&[0.0, 3.0, 10.0]), &narrowing(), 0.3).unwrap();
        assert_abs_diff_eq!(a, 90.0, epsilon = 1e-9);
    }

    #[test]
    fn degenerate_window_uses_packing_floor() {
        let tube = VirtualTube::straight(20.0, 2.0).unwrap();
        let one = robots_at(&[5.0]);
        assert_abs_diff_eq!(swarm_area(&one, &tube, 0.3).unwrap(), 0.36, epsilon = 1e-12);
        assert_abs_diff_eq!(swarm_density(&one, &tube, 0.3).unwrap(), 1.0 / 0.36, epsilon = 1e-9);
        let stacked = vec![
            RobotState::new(0, Vec2::new(5.0, 0.5), 0.8),
            RobotState::new(1, Vec2::new(5.0, -0.5), 0.8),
        ];
        assert_abs_diff_eq!(swarm_area(&stacked, &tube, 0.3).unwrap(), 0.72, epsilon = 1e-12);
    }

    #[test]
    fn density_division_and_width_scaling() {
        let r: Vec<RobotState> = (0..20).map(|i| RobotState::new(i, Vec2::new(i as f64 * 10.0 / 19.0, 0.0), 0.8)).collect();
        let rho = swarm_density(&r, &narrowing(), 0.3).unwrap();
        assert_abs_diff_eq!(rho, 20.0 / 90.0, epsilon = 1e-9);
        assert!((rho - 0.2222).abs() < 1e-4);

        let narrow = VirtualTube::straight(20.0, 1.0).unwrap();
        let wide = VirtualTube::straight(20.0, 2.0).unwrap();
        let r = robots_at(&[2.0, 9.0, 15.0]);
        let a = swarm_density(&r, &narrow, 0.3).unwrap();
        let b = swarm_density(&r, &wide, 0.3).unwrap();
        assert_abs_diff_eq!(a, 2.0 * b, epsilon = 1e-12);
    }

    #[test]
    fn average_speed() {
        assert_eq!(average_forward_speed(&[5.0; 7]).unwrap(), 5.0);
        assert_eq!(average_forward_speed(&[2.0, 4.0]).unwrap(), 3.0);
        assert_eq!(
            average_forward_speed(&[1.0, 2.0, 6.0]).unwrap(),
            average_forward_speed(&[6.0, 1.0, 2.0]).unwrap()
        );
        assert!(average_forward_speed(&[]).is_err());
    }

    #[test]
    fn pairwise_distance_basics() {
        let d = min_pairwise_distance(&[Vec2::new(0.0, 0.0), Vec2::new(3.0, 4.0)]).unwrap();
        assert_eq!(d, 5.0);
        let d = min_pairwise_distance(&[Vec2::new(1.0, 1.0), Vec2::new(1.0, 1.0), Vec2::new(9.0, 0.0)]).unwrap();
        assert_eq!(d, 0.0);
        assert!(min_pairwise_distance(&[Vec2::zeros()]).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(SwarmParams::standard().validate().is_ok());
        let mut p = SwarmParams::standard();
        p.v_min = 0.0;
        assert!(matches!(p.validate(), Err(Error::Config { ref path, .. }) if path == "v_min"));
        let mut p = SwarmParams::standard();
        p.r_s = 0.9;
        assert!(p.validate().is_err());
        let mut p = SwarmParams::standard();
        p.rho_max = Some(0.1);
        assert!(p.validate().is_err());
        assert!((SwarmParams::standard().rho_max() - 1.0 / 0.09).abs() < 1e-12);
    }
}
