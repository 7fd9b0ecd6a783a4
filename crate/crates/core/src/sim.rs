//! Fixed-step closed-loop simulation and its metrics.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::controller::{velocity_command, ForwardSource};
use crate::error::{Error, Result};
use crate::geometry::{Vec2, VirtualTube};
use crate::planner::PlanProfile;
use crate::swarm::{min_pairwise_distance, swarm_density, RobotState, SwarmParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    WithPlanning,
    WithoutPlanning,
}

impl Mode {
    /// Short name used in file names and on the command line.
    pub fn short(self) -> &'static str {
        match self {
            Mode::WithPlanning => "with",
            Mode::WithoutPlanning => "without",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "with" | "with_planning" => Ok(Mode::WithPlanning),
            "without" | "without_planning" => Ok(Mode::WithoutPlanning),
            other => Err(Error::config("mode", format!("expected `with` or `without`, got `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    #[serde(default = "default_dt")]
    pub dt: f64,
    /// Timeout in seconds; `10 L / v_min` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    /// Amplitude of the seeded perturbation of the initial formation, meters.
    #[serde(default = "default_jitter")]
    pub jitter: f64,
}

fn default_dt() -> f64 {
    0.01
}

fn default_jitter() -> f64 {
    0.02
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: default_dt(),
            t_max: None,
            seed: 0,
            jitter: default_jitter(),
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::config("sim.dt", "must be finite and > 0"));
        }
        if let Some(t) = self.t_max {
            if !(t > 0.0) {
                return Err(Error::config("sim.t_max", "must be > 0"));
            }
        }
        if !(self.jitter >= 0.0) || !self.jitter.is_finite() {
            return Err(Error::config("sim.jitter", "must be finite and >= 0"));
        }
        Ok(())
    }

    pub fn timeout(&self, tube: &VirtualTube, params: &SwarmParams) -> f64 {
        self.t_max.unwrap_or(10.0 * tube.total_length() / params.v_min)
    }
}

/// Grid of `⌈√N⌉` columns spaced `2 r_a` apart, centered on the center
/// curve, with rows stacked forward from `γ(0)`.
pub fn initial_formation(tube: &VirtualTube, params: &SwarmParams, seed: u64, jitter: f64) -> Vec<RobotState> {
    let n = params.robot_count;
    let cols = (n as f64).sqrt().ceil() as usize;
    let spacing = 2.0 * params.r_a;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let row = i / cols;
            let col = i % cols;
            let in_row = cols.min(n - row * cols);
            let mut l = row as f64 * spacing;
            let mut lat = (col as f64 - 0.5 * (in_row as f64 - 1.0)) * spacing;
            if jitter > 0.0 {
                l += rng.gen_range(0.0..jitter);
                lat += rng.gen_range(-jitter..jitter);
            }
            let (c, _, normal) = tube.frame(l);
            RobotState::new(i, c + normal * lat, params.r_a)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct WorldState {
    pub time: f64,
    pub robots: Vec<RobotState>,
    pub mode: Mode,
}

impl WorldState {
    /// Robots at their initial positions with commands set to the forward
    /// velocity, so the rate limits apply from the first step.
    pub fn new(robots: Vec<RobotState>, mode: Mode, tube: &VirtualTube, source: &ForwardSource) -> Result<Self> {
        if robots.is_empty() {
            return Err(Error::EmptySwarm);
        }
        let mut ids: Vec<usize> = robots.iter().map(|r| r.id).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::config("robots", "robot ids must be unique"));
        }
        let robots = robots
            .into_iter()
            .map(|mut r| {
                let c = tube.project(&r.position);
                r.velocity_command = c.tangent * source.speed(c.arc_length);
                r
            })
            .collect();
        Ok(Self { time: 0.0, robots, mode })
    }
}

/// Counts of commands altered by the acceleration limits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClampCounts {
    pub speed: usize,
    pub heading: usize,
}

/// Limits the change from `prev` to `cmd` to `a_v dt` in norm and
/// `(a_n / ‖v‖) dt` in heading.
pub fn limit_rate(prev: Vec2, cmd: Vec2, params: &SwarmParams, dt: f64, counts: &mut ClampCounts) -> Vec2 {
    let ps = prev.norm();
    if ps < 1e-12 {
        return cmd;
    }
    let cs = cmd.norm();
    let dv = params.a_v * dt;
    let mut s = cs;
    let mut clamped = false;
    if cs > ps + dv {
        s = ps + dv;
        counts.speed += 1;
        clamped = true;
    } else if cs < ps - dv {
        s = ps - dv;
        counts.speed += 1;
        clamped = true;
    }
    let delta = prev.perp(&cmd).atan2(prev.dot(&cmd));
    let max_turn = params.a_n / s * dt;
    let mut turn = delta;
    if delta.abs() > max_turn {
        turn = max_turn.copysign(delta);
        counts.heading += 1;
        clamped = true;
    }
    if !clamped {
        return cmd;
    }
    let (sin, cos) = turn.sin_cos();
    let u = prev / ps;
    Vec2::new(u.x * cos - u.y * sin, u.x * sin + u.y * cos) * s
}

/// Per-robot values captured at one instant.
#[derive(Clone, Debug, PartialEq)]
pub struct RobotSample {
    pub id: usize,
    pub position: Vec2,
    /// Command applied over the following step.
    pub velocity: Vec2,
    pub avoidance_radius: f64,
    pub avoidance_radius_rate: f64,
    pub arc_length: f64,
    /// Signed lateral offset divided by the local half-width.
    pub radial_offset: f64,
    /// Alongside the tube (not past either end) but outside its boundary.
    pub outside: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    pub time: f64,
    pub robots: Vec<RobotSample>,
    /// Measured density `ρ_r`.
    pub density: f64,
    /// Reference density at the swarm center.
    pub planned_density: f64,
    /// Measured average forward speed `v_a`.
    pub average_speed: f64,
    /// Reference speed at the swarm center.
    pub planned_speed: f64,
    pub center_arc_length: f64,
    pub min_distance: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct TraceReport {
    pub mode: Mode,
    pub dt: f64,
    pub steps: Vec<StepRecord>,
    pub completed: bool,
    /// Time at which the last robot reached `l = L`, or the timeout.
    pub passing_time: f64,
    pub clamps: ClampCounts,
    pub r_p: f64,
}

/// Headline metrics of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mode: Mode,
    pub completed: bool,
    pub passing_time: f64,
    /// `None` for a single robot.
    pub min_distance: Option<f64>,
    pub collision_count: usize,
    pub boundary_violations: usize,
    pub density_tracking_rmse: f64,
    pub speed_tracking_rmse: f64,
    /// Density-tracking rmse over four equal windows after the first expansion.
    pub density_rmse_windows: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_expansion_time: Option<f64>,
    pub max_avoidance_radius: f64,
    pub min_command_speed: f64,
    pub max_command_speed: f64,
    pub speed_clamp_events: usize,
    pub heading_clamp_events: usize,
    pub steps: usize,
    pub dt: f64,
}

/// Reference profile of a mode: the plan, or constant `v_f` and `ρ_d`.
fn reference(source: &ForwardSource, params: &SwarmParams, l: f64) -> (f64, f64) {
    (source.speed(l), source.density(l).unwrap_or(params.rho_d))
}

/// Commands for every robot against the same snapshot.
fn commands(
    world: &WorldState,
    tube: &VirtualTube,
    source: &ForwardSource,
    params: &SwarmParams,
) -> Result<Vec<crate::controller::ControlCommand>> {
    let rho_r = match world.mode {
        Mode::WithPlanning => Some(swarm_density(&world.robots, tube, params.r_p)?),
        Mode::WithoutPlanning => None,
    };
    Ok(world
        .robots
        .iter()
        .map(|r| velocity_command(r, &world.robots, tube, source, params, rho_r))
        .collect())
}

fn record(
    world: &WorldState,
    tube: &VirtualTube,
    source: &ForwardSource,
    params: &SwarmParams,
    applied: &[(Vec2, f64)],
) -> Result<StepRecord> {
    let mut robots = Vec::with_capacity(world.robots.len());
    let mut l_sum = 0.0;
    let mut v_sum = 0.0;
    for (r, &(v, rate)) in world.robots.iter().zip(applied) {
        let c = tube.project(&r.position);
        l_sum += c.arc_length;
        v_sum += v.dot(&c.tangent);
        robots.push(RobotSample {
            id: r.id,
            position: r.position,
            velocity: v,
            avoidance_radius: r.avoidance_radius,
            avoidance_radius_rate: rate,
            arc_length: c.arc_length,
            radial_offset: c.lateral_offset / c.width,
            outside: !c.out_of_tube && c.lateral_offset.abs() > c.width,
        });
    }
    let n = world.robots.len() as f64;
    let center = l_sum / n;
    let (v_ref, rho_ref) = reference(source, params, center);
    let positions: Vec<Vec2> = world.robots.iter().map(|r| r.position).collect();
    Ok(StepRecord {
        time: world.time,
        robots,
        density: swarm_density(&world.robots, tube, params.r_p)?,
        planned_density: rho_ref,
        average_speed: v_sum / n,
        planned_speed: v_ref,
        center_arc_length: center,
        min_distance: min_pairwise_distance(&positions).ok(),
    })
}

/// Applied command and radius rate of each robot for the next step.
fn applied_commands(
    world: &WorldState,
    tube: &VirtualTube,
    source: &ForwardSource,
    params: &SwarmParams,
    dt: f64,
    clamps: &mut ClampCounts,
) -> Result<Vec<(Vec2, f64)>> {
    let cmds = commands(world, tube, source, params)?;
    Ok(world
        .robots
        .iter()
        .zip(cmds)
        .map(|(r, c)| (limit_rate(r.velocity_command, c.velocity, params, dt, clamps), c.avoidance_radius_rate))
        .collect())
}

fn advance(world: &WorldState, applied: &[(Vec2, f64)], params: &SwarmParams, dt: f64) -> WorldState {
    let r_max = params.r_a_max();
    let robots = world
        .robots
        .iter()
        .zip(applied)
        .map(|(r, &(v, rate))| RobotState {
            id: r.id,
            position: r.position + v * dt,
            velocity_command: v,
            avoidance_radius: (r.avoidance_radius + rate * dt).min(r_max).max(r.avoidance_radius),
        })
        .collect();
    WorldState {
        time: world.time + dt,
        robots,
        mode: world.mode,
    }
}

/// One synchronous Euler step.
pub fn step(
    world: &WorldState,
    tube: &VirtualTube,
    source: &ForwardSource,
    params: &SwarmParams,
    dt: f64,
    clamps: &mut ClampCounts,
) -> Result<WorldState> {
    if !(dt > 0.0) {
        return Err(Error::domain(format!("dt must be > 0, got {dt}")));
    }
    let applied = applied_commands(world, tube, source, params, dt, clamps)?;
    Ok(advance(world, &applied, params, dt))
}

fn passed(world: &WorldState, tube: &VirtualTube) -> bool {
    let length = tube.total_length();
    world.robots.iter().all(|r| tube.project(&r.position).arc_length >= length)
}

/// Runs until the last robot's projection reaches `L` or the timeout.
pub fn run(
    robots: Vec<RobotState>,
    tube: &VirtualTube,
    source: &ForwardSource,
    params: &SwarmParams,
    mode: Mode,
    config: &SimConfig,
) -> Result<TraceReport> {
    config.validate()?;
    params.validate()?;
    let dt = config.dt;
    let t_max = config.timeout(tube, params);
    let mut world = WorldState::new(robots, mode, tube, source)?;
    let mut clamps = ClampCounts::default();
    let mut steps = Vec::new();
    let mut completed = false;
    loop {
        let applied = applied_commands(&world, tube, source, params, dt, &mut clamps)?;
        steps.push(record(&world, tube, source, params, &applied)?);
        if passed(&world, tube) {
            completed = true;
            break;
        }
        if world.time >= t_max {
            break;
        }
        world = advance(&world, &applied, params, dt);
    }
    Ok(TraceReport {
        mode,
        dt,
        passing_time: world.time,
        steps,
        completed,
        clamps,
        r_p: params.r_p,
    })
}

/// Simulates `mode` with the initial formation from `config`.
pub fn simulate(
    tube: &VirtualTube,
    params: &SwarmParams,
    mode: Mode,
    profile: Option<&PlanProfile>,
    config: &SimConfig,
) -> Result<TraceReport> {
    let source = match (mode, profile) {
        (Mode::WithPlanning, Some(p)) => ForwardSource::Planned(p),
        (Mode::WithPlanning, None) => {
            return Err(Error::config("plan", "with-planning mode needs a plan profile"));
        }
        (Mode::WithoutPlanning, _) => ForwardSource::Constant(baseline_speed(params)),
    };
    let robots = initial_formation(tube, params, config.seed, config.jitter);
    run(robots, tube, &source, params, mode, config)
}

/// Constant forward speed of the baseline controller.
pub fn baseline_speed(params: &SwarmParams) -> f64 {
    0.5 * (params.v_min + params.v_max)
}

fn rmse(errors: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = errors.fold((0.0, 0usize), |(s, n), e| (s + e * e, n + 1));
    if n == 0 {
        0.0
    } else {
        (sum / n as f64).sqrt()
    }
}

/// Density error of a step when the swarm is denser than planned.
fn density_error(s: &StepRecord) -> Option<f64> {
    (s.density > s.planned_density).then_some(s.density - s.planned_density)
}

/// Number of equal windows used for the post-expansion density rmse.
pub const DENSITY_WINDOWS: usize = 4;

pub fn metrics(trace: &TraceReport) -> Result<Summary> {
    let steps = &trace.steps;
    if steps.is_empty() {
        return Err(Error::domain("empty trace"));
    }
    let min_distance = steps
        .iter()
        .filter_map(|s| s.min_distance)
        .fold(None, |m: Option<f64>, d| Some(m.map_or(d, |m| m.min(d))));
    let collision_count = steps
        .iter()
        .filter(|s| s.min_distance.is_some_and(|d| d < 2.0 * trace.r_p))
        .count();
    let boundary_violations = steps.iter().flat_map(|s| &s.robots).filter(|r| r.outside).count();
    let density_tracking_rmse = rmse(steps.iter().filter_map(density_error));
    let speed_tracking_rmse = rmse(steps.iter().map(|s| s.average_speed - s.planned_speed));

    let first = steps
        .iter()
        .find(|s| s.robots.iter().any(|r| r.avoidance_radius_rate > 0.0))
        .map(|s| s.time);
    let mut windows = Vec::new();
    if let Some(t0) = first {
        let t1 = steps.last().unwrap().time;
        let width = (t1 - t0) / DENSITY_WINDOWS as f64;
        for w in 0..DENSITY_WINDOWS {
            let (a, b) = (t0 + w as f64 * width, t0 + (w + 1) as f64 * width);
            let last = w + 1 == DENSITY_WINDOWS;
            windows.push(rmse(
                steps
                    .iter()
                    .filter(|s| s.time >= a && (s.time < b || (last && s.time <= t1)))
                    .filter_map(density_error),
            ));
        }
    }
    let speeds = steps.iter().flat_map(|s| &s.robots).map(|r| r.velocity.norm());
    let (min_cmd, max_cmd) = speeds.fold((f64::INFINITY, 0.0_f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    Ok(Summary {
        mode: trace.mode,
        completed: trace.completed,
        passing_time: trace.passing_time,
        min_distance,
        collision_count,
        boundary_violations,
        density_tracking_rmse,
        speed_tracking_rmse,
        density_rmse_windows: windows,
        first_expansion_time: first,
        max_avoidance_radius: steps
            .iter()
            .flat_map(|s| &s.robots)
            .map(|r| r.avoidance_radius)
            .fold(0.0, f64::max),
        min_command_speed: min_cmd,
        max_command_speed: max_cmd,
        speed_clamp_events: trace.clamps.speed,
        heading_clamp_events: trace.clamps.heading,
        steps: steps.len(),
        dt: trace.dt,
    })
}

pub const TRACE_HEADER: &str = "time,robot_id,x,y,vx,vy,r_a,l_proj,rho_offset";

/// One row per (step, robot); floats use 17 significant digits.
pub fn write_trace_csv<W: Write>(trace: &TraceReport, out: &mut W) -> std::io::Result<()> {
    writeln!(out, "{TRACE_HEADER}")?;
    for s in &trace.steps {
        for r in &s.robots {
            writeln!(
                out,
                "{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                s.time,
                r.id,
                r.position.x,
                r.position.y,
                r.velocity.x,
                r.velocity.y,
                r.avoidance_radius,
                r.arc_length,
                r.radial_offset
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn single(params: &SwarmParams) -> Vec<RobotState> {
        vec![RobotState::new(0, Vec2::zeros(), params.r_a)]
    }

    #[test]
    fn single_robot_advances_and_passes() {
        let params = SwarmParams {
            robot_count: 1,
            ..SwarmParams::standard()
        };
        let tube = VirtualTube::straight(50.0, 5.0).unwrap();
        let plan = PlanProfile::constant(50.0, 5, 5.0, 0.2);
        let src = ForwardSource::Planned(&plan);
        let w = WorldState::new(single(&params), Mode::WithPlanning, &tube, &src).unwrap();
        let mut clamps = ClampCounts::default();
        let w1 = step(&w, &tube, &src, &params, 0.01, &mut clamps).unwrap();
        assert_abs_diff_eq!(tube.project(&w1.robots[0].position).arc_length, 0.05, epsilon = 1e-12);
        assert_eq!(w1.robots[0].position - w.robots[0].position, w1.robots[0].velocity_command * 0.01);

        let rep = run(single(&params), &tube, &src, &params, Mode::WithPlanning, &SimConfig::default()).unwrap();
        assert!(rep.completed);
        assert!((rep.passing_time - 10.0).abs() <= 0.01 + 1e-9, "{}", rep.passing_time);
        let m = metrics(&rep).unwrap();
        assert_eq!(m.min_distance, None);
        assert!(m.speed_tracking_rmse < 1e-12);
    }

    #[test]
    fn rate_limits() {
        let p = SwarmParams::standard();
        let mut c = ClampCounts::default();
        let prev = Vec2::new(3.0, 0.0);
        let same = limit_rate(prev, Vec2::new(3.005, 0.0), &p, 0.01, &mut c);
        assert_eq!(same, Vec2::new(3.005, 0.0));
        assert_eq!(c, ClampCounts::default());
        let faster = limit_rate(prev, Vec2::new(5.0, 0.0), &p, 0.01, &mut c);
        assert_abs_diff_eq!(faster, Vec2::new(3.01, 0.0), epsilon = 1e-12);
        let turned = limit_rate(prev, Vec2::new(0.0, 3.0), &p, 0.01, &mut c);
        let angle = turned.y.atan2(turned.x);
        assert_abs_diff_eq!(angle, 0.01 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(turned.norm(), 3.0, epsilon = 1e-12);
        assert_eq!(c, ClampCounts { speed: 1, heading: 1 });
    }

    #[test]
    fn formation_layout() {
        let p = SwarmParams::standard();
        let tube = VirtualTube::straight(50.0, 5.0).unwrap();
        let f = initial_formation(&tube, &p, 0, 0.0);
        assert_eq!(f.len(), 20);
        assert_abs_diff_eq!(f[0].position, Vec2::new(0.0, -3.2), epsilon = 1e-12);
        assert_abs_diff_eq!(f[19].position, Vec2::new(4.8, 3.2), epsilon = 1e-12);
        let d = min_pairwise_distance(&f.iter().map(|r| r.position).collect::<Vec<_>>()).unwrap();
        assert_abs_diff_eq!(d, 1.6, epsilon = 1e-12);
        assert_eq!(initial_formation(&tube, &p, 7, 0.02), initial_formation(&tube, &p, 7, 0.02));
    }

    #[test]
    fn zero_steps_leave_world_unchanged() {
        let p = SwarmParams::standard();
        let tube = VirtualTube::straight(50.0, 5.0).unwrap();
        let src = ForwardSource::Constant(3.5);
        let w = WorldState::new(initial_formation(&tube, &p, 0, 0.0), Mode::WithoutPlanning, &tube, &src).unwrap();
        let copy = w.clone();
        assert_eq!(w, copy);
        let mut c = ClampCounts::default();
        assert!(step(&w, &tube, &src, &p, 0.0, &mut c).is_err());
    }

    fn synthetic(density: &[f64], planned: f64, speed_err: &[f64], min_d: &[f64]) -> TraceReport {
        let steps = density
            .iter()
            .zip(speed_err)
            .zip(min_d)
            .enumerate()
            .map(|(i, ((&d, &e), &md))| StepRecord {
                time: i as f64 * 0.1,
                robots: vec![RobotSample {
                    id: 0,
                    position: Vec2::zeros(),
                    velocity: Vec2::new(3.0, 0.0),
                    avoidance_radius: 0.8,
                    avoidance_radius_rate: if i >= 1 { 1.0 } else { 0.0 },
                    arc_length: 0.0,
                    radial_offset: 0.0,
                    outside: false,
                }],
                density: d,
                planned_density: planned,
                average_speed: 3.0 + e,
                planned_speed: 3.0,
                center_arc_length: 0.0,
                min_distance: Some(md),
            })
            .collect();
        TraceReport {
            mode: Mode::WithPlanning,
            dt: 0.1,
            steps,
            completed: true,
            passing_time: 1.0,
            clamps: ClampCounts::default(),
            r_p: 0.3,
        }
    }

    #[test]
    fn metrics_match_brute_force() {
        let dens = [0.1, 0.3, 0.25, 0.15, 0.4];
        let errs = [0.0, 0.1, -0.2, 0.3, 0.0];
        let mind = [1.0, 0.5, 0.9, 0.7, 0.65];
        let m = metrics(&synthetic(&dens, 0.2, &errs, &mind)).unwrap();
        // active steps: 0.3, 0.25, 0.4 against 0.2
        let drmse = ((0.01 + 0.0025 + 0.04) / 3.0_f64).sqrt();
        assert_abs_diff_eq!(m.density_tracking_rmse, drmse, epsilon = 1e-12);
        let srmse = ((0.01 + 0.04 + 0.09) / 5.0_f64).sqrt();
        assert_abs_diff_eq!(m.speed_tracking_rmse, srmse, epsilon = 1e-12);
        assert_eq!(m.min_distance, Some(0.5));
        assert_eq!(m.collision_count, 1);
        assert_eq!(m.first_expansion_time, Some(0.1));
        assert_eq!(m.density_rmse_windows.len(), DENSITY_WINDOWS);
    }

    #[test]
    fn perfect_tracking_has_zero_rmse() {
        let m = metrics(&synthetic(&[0.2; 4], 0.2, &[0.0; 4], &[1.0; 4])).unwrap();
        assert_eq!(m.density_tracking_rmse, 0.0);
        assert_eq!(m.speed_tracking_rmse, 0.0);
        assert_eq!(m.collision_count, 0);
    }

    #[test]
    fn csv_header_and_rows() {
        let t = synthetic(&[0.2; 2], 0.2, &[0.0; 2], &[1.0; 2]);
        let mut buf = Vec::new();
        write_trace_csv(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], TRACE_HEADER);
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0.0000000000000000e0,0,"));
    }
}
