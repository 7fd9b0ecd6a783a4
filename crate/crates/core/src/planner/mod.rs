//! Speed and density planning along a virtual tube.
//!
//! The planned average forward speed `v_a*(l)` and density `ρ_a*(l)` are
//! piecewise cubics found by direct collocation: the unknowns are the
//! polynomial coefficients, the pointwise limits are enforced at collocation
//! points, and the problem is solved with an augmented Lagrangian method.
//! Collocation points are refined until the profile also passes the audit
//! grid, which is ten times denser.

mod constraints;
mod density;
mod profile;
pub mod solver;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use constraints::{ConstraintKind, ConstraintReport, ConstraintResidual};
pub use density::{max_density, max_density_rate, predicted_density, window_for_area, Window};
pub use profile::PlanProfile;

use crate::error::{Error, Result};
use crate::geometry::VirtualTube;
use crate::swarm::SwarmParams;
use constraints::{audit, curvature_cap, dense_offsets, point_violations, report_from, shift_rate};
use solver::{AlOptions, Evaluation, Multipliers, Problem, SparseRow};

/// Strict positivity of the planned density is enforced as `ρ_a >= RHO_FLOOR`.
pub const RHO_FLOOR: f64 = 1e-4;

const REFINE_ROUNDS: usize = 8;
const PROBE_COUNT: usize = 20;
const PROBE_STEP: f64 = 1e-3;
const PROBE_ROUNDS: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlannerConfig {
    /// Collocation points per segment, `M >= 10`.
    #[serde(default = "default_collocation")]
    pub collocation_count: usize,
    /// Number of cubic segments `K`.
    #[serde(default = "default_segments")]
    pub segment_count: usize,
    /// Look-ahead shift for the predictive density constraint; one collocation
    /// spacing `L / (K M)` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_l: Option<f64>,
    /// Density rate limit `a_ρ`; derived from the swarm parameters when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_rate_limit: Option<f64>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Outer augmented-Lagrangian iterations per solve.
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    /// `v_a(0)`; `v_min` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_speed: Option<f64>,
    /// `ρ_a(0)`; `ρ_d` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_density: Option<f64>,
    /// Seed of the perturbation probe.
    #[serde(default)]
    pub seed: u64,
}

fn default_collocation() -> usize {
    10
}
fn default_segments() -> usize {
    10
}
fn default_tolerance() -> f64 {
    1e-6
}
fn default_max_iterations() -> usize {
    60
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            collocation_count: default_collocation(),
            segment_count: default_segments(),
            delta_l: None,
            rho_rate_limit: None,
            tolerance: default_tolerance(),
            max_iterations: default_max_iterations(),
            boundary_speed: None,
            boundary_density: None,
            seed: 0,
        }
    }
}

impl PlannerConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, msg: &str| Err(Error::config(format!("planner.{field}"), msg));
        if self.collocation_count < 10 {
            return bad("collocation_count", "must be >= 10");
        }
        if self.segment_count < 1 {
            return bad("segment_count", "must be >= 1");
        }
        if let Some(d) = self.delta_l {
            if !(d > 0.0) || !d.is_finite() {
                return bad("delta_l", "must be > 0");
            }
        }
        if let Some(a) = self.rho_rate_limit {
            if !(a > 0.0) || !a.is_finite() {
                return bad("rho_rate_limit", "must be > 0");
            }
        }
        if !(self.tolerance > 0.0) {
            return bad("tolerance", "must be > 0");
        }
        if self.max_iterations < 1 {
            return bad("max_iterations", "must be >= 1");
        }
        for (field, v) in [("boundary_speed", self.boundary_speed), ("boundary_density", self.boundary_density)] {
            if let Some(v) = v {
                if !v.is_finite() {
                    return bad(field, "must be finite");
                }
            }
        }
        Ok(())
    }

    /// Fills every optional field from the swarm parameters and tube.
    pub fn limits(&self, tube: &VirtualTube, params: &SwarmParams) -> Result<Limits> {
        self.validate()?;
        params.validate()?;
        let length = tube.total_length();
        let a_rho = match self.rho_rate_limit {
            Some(a) => a,
            None => max_density_rate(params.robot_count, params.v_max, params.r_a_max())?,
        };
        Ok(Limits {
            robot_count: params.robot_count as f64,
            v_min: params.v_min,
            v_max: params.v_max,
            a_v: params.a_v,
            a_n: params.a_n,
            rho_floor: RHO_FLOOR,
            rho_max: params.rho_max(),
            rho_d: params.rho_d,
            a_rho,
            delta_l: self
                .delta_l
                .unwrap_or(length / (self.segment_count * self.collocation_count) as f64),
            boundary_speed: self.boundary_speed.unwrap_or(params.v_min),
            boundary_density: self.boundary_density.unwrap_or(params.rho_d),
        })
    }
}

/// Resolved numeric limits of one planning problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Limits {
    pub robot_count: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub a_v: f64,
    pub a_n: f64,
    pub rho_floor: f64,
    pub rho_max: f64,
    pub rho_d: f64,
    pub a_rho: f64,
    pub delta_l: f64,
    pub boundary_speed: f64,
    pub boundary_density: f64,
}

/// Result of [`plan`]: the profile plus its audit and solver diagnostics.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlanOutcome {
    pub profile: PlanProfile,
    pub report: ConstraintReport,
    pub limits: Limits,
    /// Discretized objective `∫ 1/v_a dl + ∫ (ρ_a - ρ_d)² dl`.
    pub objective: f64,
    pub converged: bool,
    /// No feasible improving direction was found by the final perturbation probe.
    pub local_min_certified: bool,
    pub refinement_rounds: usize,
    pub collocation_points: usize,
    pub diagnostics: Vec<String>,
}

/// `(v_a*(l), ρ_a*(l))`.
pub fn evaluate_plan(profile: &PlanProfile, l: f64) -> Result<(f64, f64)> {
    profile.evaluate(l)
}

/// `(dv_a*/dl, dρ_a*/dl)`.
pub fn plan_derivatives(profile: &PlanProfile, l: f64) -> Result<(f64, f64)> {
    profile.derivatives(l)
}

/// Audits `profile` on a grid ten times denser than the collocation grid.
pub fn validate_plan(
    profile: &PlanProfile,
    tube: &VirtualTube,
    params: &SwarmParams,
    config: &PlannerConfig,
) -> Result<ConstraintReport> {
    profile.validate_shape()?;
    let lim = config.limits(tube, params)?;
    Ok(report_from(&audit(profile, tube, &lim, config.collocation_count, 0.0), config.tolerance))
}

/// Trapezoid objective of `profile` on the audit grid.
pub fn plan_objective(profile: &PlanProfile, params: &SwarmParams, config: &PlannerConfig) -> f64 {
    let mut j = 0.0;
    for k in 0..profile.segment_count() {
        let h = profile.segment_breaks[k + 1] - profile.segment_breaks[k];
        let offs = dense_offsets(h, config.collocation_count, 10);
        let n = offs.len() - 1;
        for (i, &x) in offs.iter().enumerate() {
            let w = if i == 0 || i == n { 0.5 } else { 1.0 } * h / n as f64;
            let (v, _, rho, _) = profile.segment_values(k, x);
            j += w * (1.0 / v + (rho - params.rho_d).powi(2));
        }
    }
    j
}

/// Plans `v_a*` and `ρ_a*` over the tube.
pub fn plan(tube: &VirtualTube, params: &SwarmParams, config: &PlannerConfig) -> Result<PlanOutcome> {
    let lim = config.limits(tube, params)?;
    check_boundary(tube, &lim, config.tolerance)?;

    let k = config.segment_count;
    let m = config.collocation_count;
    let length = tube.total_length();
    let breaks: Vec<f64> = (0..=k).map(|i| length * i as f64 / k as f64).collect();
    let mut prob = CollocationProblem::new(tube, &lim, breaks, m);

    let mut x = prob.initial_guess();
    let opts = AlOptions {
        max_outer: config.max_iterations,
        ..AlOptions::default()
    };
    let mut warm: Option<Multipliers> = None;
    let mut diagnostics = Vec::new();
    let mut best: Option<(f64, Vec<f64>, ConstraintReport)> = None;
    let mut converged;
    let mut rounds = 0;
    let mut certified = false;
    let mut probe_rounds = 0;

    loop {
        rounds += 1;
        let rep = solver::solve(&prob, &x, warm.take(), &opts);
        x = rep.x.clone();
        converged = rep.converged;
        if !rep.converged {
            diagnostics.push(format!(
                "round {rounds}: solver stopped after {} outer iterations with violation {:e}",
                rep.outer_iterations, rep.max_violation
            ));
        }
        warm = Some(rep.multipliers);
        let profile = prob.profile(&x);
        let au = audit(&profile, tube, &lim, m, 0.1 * config.tolerance);
        let report = report_from(&au, config.tolerance);
        let objective = plan_objective(&profile, params, config);
        if report.feasible && best.as_ref().is_none_or(|b| objective < b.0) {
            best = Some((objective, x.clone(), report.clone()));
        }
        let added = prob.add_points(&au.flagged);
        if added > 0 && rounds < REFINE_ROUNDS {
            continue;
        }
        if !report.feasible || probe_rounds >= PROBE_ROUNDS {
            break;
        }
        probe_rounds += 1;
        match probe(&prob, &x, config.seed.wrapping_add(probe_rounds as u64)) {
            Some(better) => {
                diagnostics.push(format!("probe {probe_rounds}: improving feasible perturbation, re-solving"));
                x = better;
                if rounds >= REFINE_ROUNDS + PROBE_ROUNDS {
                    break;
                }
            }
            None => {
                certified = true;
                break;
            }
        }
    }

    let (objective, x_best, report) = match best {
        Some(b) => b,
        None => {
            let profile = prob.profile(&x);
            let report = report_from(&audit(&profile, tube, &lim, m, 0.0), config.tolerance);
            diagnostics.push(format!(
                "no feasible profile found; returning the last iterate (violated: {})",
                report.violated().join(", ")
            ));
            (plan_objective(&profile, params, config), x.clone(), report)
        }
    };
    Ok(PlanOutcome {
        profile: prob.profile(&x_best),
        report,
        limits: lim.clone(),
        objective,
        converged,
        local_min_certified: certified,
        refinement_rounds: rounds,
        collocation_points: prob.points.len(),
        diagnostics,
    })
}

/// Rejects boundary values that no profile can satisfy at `l = 0`.
fn check_boundary(tube: &VirtualTube, lim: &Limits, tol: f64) -> Result<()> {
    let (v, rho) = (lim.boundary_speed, lim.boundary_density);
    let mut bad = Vec::new();
    if !(rho > 0.0) {
        bad.push(format!("density_bounds: boundary density {rho} must be > 0"));
    } else {
        for (kind, g) in point_violations(tube, lim, 0.0, v, 0.0, rho, 0.0) {
            if g > tol {
                bad.push(format!("{}: residual {g:e} at l = 0", kind.name()));
            }
        }
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::Infeasible(bad))
    }
}

/// Random unit perturbations of the solution; returns the first feasible one
/// with a lower objective.
fn probe(prob: &CollocationProblem, x: &[f64], seed: u64) -> Option<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = prob.evaluate(x, false);
    let feas = base.max_violation().max(1e-9);
    for _ in 0..PROBE_COUNT {
        let mut d: Vec<f64> = (0..x.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        d.iter_mut().for_each(|v| *v *= PROBE_STEP / norm);
        let y: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + b).collect();
        let ev = prob.evaluate(&y, false);
        if ev.max_violation() <= feas && ev.objective < base.objective - 1e-12 * base.objective.abs() {
            return Some(y);
        }
    }
    None
}

struct Point {
    seg: usize,
    t: f64,
    l: f64,
    cap: Option<f64>,
}

struct CollocationProblem<'a> {
    tube: &'a VirtualTube,
    lim: &'a Limits,
    breaks: Vec<f64>,
    points: Vec<Point>,
    /// Trapezoid nodes and weights on `[0, 1]` for the objective.
    quad: Vec<(f64, f64)>,
    v_scale: f64,
    rho_scale: f64,
    /// Below this speed `1/v` continues as its second-order Taylor expansion.
    v_lo: f64,
}

const NV: usize = 8;

impl<'a> CollocationProblem<'a> {
    fn new(tube: &'a VirtualTube, lim: &'a Limits, breaks: Vec<f64>, m: usize) -> Self {
        let n = 10 * (m - 1);
        let quad = (0..=n)
            .map(|j| {
                let w = if j == 0 || j == n { 0.5 } else { 1.0 } / n as f64;
                (j as f64 / n as f64, w)
            })
            .collect();
        let mut p = Self {
            tube,
            lim,
            breaks,
            points: Vec::new(),
            quad,
            v_scale: lim.v_max,
            rho_scale: lim.rho_d.max(lim.boundary_density),
            v_lo: 0.5 * lim.v_min,
        };
        for seg in 0..p.breaks.len() - 1 {
            for j in 0..m {
                p.push_point(seg, j as f64 / (m - 1) as f64);
            }
        }
        p
    }

    fn push_point(&mut self, seg: usize, t: f64) {
        let h = self.breaks[seg + 1] - self.breaks[seg];
        let l = (self.breaks[seg] + t * h).min(self.tube.total_length());
        let cap = curvature_cap(self.tube, self.lim.a_n, l);
        self.points.push(Point {
            seg,
            t,
            l,
            cap: (cap < self.lim.v_max).then_some(cap),
        });
    }

    /// Adds the flagged audit points not already collocated.
    fn add_points(&mut self, flagged: &[(usize, f64)]) -> usize {
        let mut added = 0;
        for &(seg, t) in flagged {
            if !self.points.iter().any(|p| p.seg == seg && (p.t - t).abs() < 1e-12) {
                self.push_point(seg, t);
                added += 1;
            }
        }
        added
    }

    fn initial_guess(&self) -> Vec<f64> {
        let k = self.breaks.len() - 1;
        let mut x = vec![0.0; NV * k];
        for s in 0..k {
            x[NV * s] = self.lim.boundary_speed / self.v_scale;
            x[NV * s + 4] = self.lim.boundary_density / self.rho_scale;
        }
        x
    }

    fn profile(&self, x: &[f64]) -> PlanProfile {
        let k = self.breaks.len() - 1;
        let mut speed = Vec::with_capacity(k);
        let mut dens = Vec::with_capacity(k);
        for s in 0..k {
            let h = self.breaks[s + 1] - self.breaks[s];
            let conv = |off: usize, scale: f64| {
                let a = &x[NV * s + off..NV * s + off + 4];
                [scale * a[3] / h.powi(3), scale * a[2] / h.powi(2), scale * a[1] / h, scale * a[0]]
            };
            speed.push(conv(0, self.v_scale));
            dens.push(conv(4, self.rho_scale));
        }
        PlanProfile {
            segment_breaks: self.breaks.clone(),
            speed_coeffs: speed,
            density_coeffs: dens,
        }
    }

    /// `1/v` and its first two derivatives.
    fn inv_speed(&self, v: f64) -> (f64, f64, f64) {
        if v >= self.v_lo {
            (1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))
        } else {
            let (a, d1, d2) = (self.v_lo, -1.0 / (self.v_lo * self.v_lo), 2.0 / self.v_lo.powi(3));
            let e = v - a;
            (1.0 / a + d1 * e + 0.5 * d2 * e * e, d1 + d2 * e, d2)
        }
    }
}

fn powers(t: f64) -> [f64; 4] {
    [1.0, t, t * t, t * t * t]
}

fn dpowers(t: f64) -> [f64; 4] {
    [0.0, 1.0, 2.0 * t, 3.0 * t * t]
}

fn dot4(a: &[f64], p: &[f64; 4]) -> f64 {
    a[0] * p[0] + a[1] * p[1] + a[2] * p[2] + a[3] * p[3]
}

impl Problem for CollocationProblem<'_> {
    fn dim(&self) -> usize {
        NV * (self.breaks.len() - 1)
    }

    fn objective_hessian(&self, x: &[f64]) -> Option<Vec<f64>> {
        let n = x.len();
        let (vs, rs) = (self.v_scale, self.rho_scale);
        let mut hess = vec![0.0; n * n];
        for s in 0..self.breaks.len() - 1 {
            let h = self.breaks[s + 1] - self.breaks[s];
            let a = &x[NV * s..NV * s + 4];
            for &(t, w) in &self.quad {
                let p = powers(t);
                let (_, _, d2) = self.inv_speed(vs * dot4(a, &p));
                for i in 0..4 {
                    for j in 0..4 {
                        let pp = h * w * p[i] * p[j];
                        hess[(NV * s + i) * n + NV * s + j] += pp * d2 * vs * vs;
                        hess[(NV * s + 4 + i) * n + NV * s + 4 + j] += pp * 2.0 * rs * rs;
                    }
                }
            }
        }
        Some(hess)
    }

    fn evaluate(&self, x: &[f64], with_derivatives: bool) -> Evaluation {
        let lim = self.lim;
        let k = self.breaks.len() - 1;
        let (vs, rs) = (self.v_scale, self.rho_scale);
        let mut ev = Evaluation::default();
        if with_derivatives {
            ev.objective_grad = vec![0.0; x.len()];
        }

        for s in 0..k {
            let h = self.breaks[s + 1] - self.breaks[s];
            let a = &x[NV * s..NV * s + 4];
            let b = &x[NV * s + 4..NV * s + 8];
            for &(t, w) in &self.quad {
                let p = powers(t);
                let v = vs * dot4(a, &p);
                let rho = rs * dot4(b, &p);
                let (phi, dphi, _) = self.inv_speed(v);
                let dr = rho - lim.rho_d;
                ev.objective += h * w * (phi + dr * dr);
                if with_derivatives {
                    for (i, &pi) in p.iter().enumerate().take(4) {
                        ev.objective_grad[NV * s + i] += h * w * dphi * vs * pi;
                        ev.objective_grad[NV * s + 4 + i] += h * w * 2.0 * dr * rs * pi;
                    }
                }
            }
        }

        let push_eq = |ev: &mut Evaluation, val: f64, row: SparseRow| {
            ev.eq.push(val);
            if with_derivatives {
                ev.eq_jac.push(row);
            }
        };
        for s in 0..k.saturating_sub(1) {
            for off in [0, 4] {
                let left: f64 = x[NV * s + off..NV * s + off + 4].iter().sum();
                let right = x[NV * (s + 1) + off];
                let mut row: SparseRow = (0..4).map(|i| (NV * s + off + i, 1.0)).collect();
                row.push((NV * (s + 1) + off, -1.0));
                push_eq(&mut ev, left - right, row);
            }
        }
        push_eq(&mut ev, x[0] - lim.boundary_speed / vs, vec![(0, 1.0)]);
        push_eq(&mut ev, x[4] - lim.boundary_density / rs, vec![(4, 1.0)]);

        for pt in &self.points {
            let s = pt.seg;
            let h = self.breaks[s + 1] - self.breaks[s];
            let a = &x[NV * s..NV * s + 4];
            let b = &x[NV * s + 4..NV * s + 8];
            let p = powers(pt.t);
            let mut dp = dpowers(pt.t);
            dp.iter_mut().for_each(|d| *d /= h);
            let v = vs * dot4(a, &p);
            let dv = vs * dot4(a, &dp);
            let rho = rs * dot4(b, &p);
            let drho = rs * dot4(b, &dp);
            let (q, dq) = shift_rate(self.tube, lim, rho, pt.l);

            // each row: value and coefficients on (v, dv, rho, drho) basis gradients
            let mut rows: Vec<(f64, [f64; 4])> = vec![
                ((lim.v_min - v) / lim.v_max, [-1.0 / lim.v_max, 0.0, 0.0, 0.0]),
                ((v - lim.v_max) / lim.v_max, [1.0 / lim.v_max, 0.0, 0.0, 0.0]),
                ((v * dv - lim.a_v) / lim.a_v, [dv / lim.a_v, v / lim.a_v, 0.0, 0.0]),
                ((-v * dv - lim.a_v) / lim.a_v, [-dv / lim.a_v, -v / lim.a_v, 0.0, 0.0]),
                ((lim.rho_floor - rho) / rs, [0.0, 0.0, -1.0 / rs, 0.0]),
                ((rho - lim.rho_max) / rs, [0.0, 0.0, 1.0 / rs, 0.0]),
                ((v * drho - lim.a_rho) / lim.a_rho, [drho / lim.a_rho, 0.0, 0.0, v / lim.a_rho]),
                ((-v * drho - lim.a_rho) / lim.a_rho, [-drho / lim.a_rho, 0.0, 0.0, -v / lim.a_rho]),
                ((v * q - lim.a_rho) / lim.a_rho, [q / lim.a_rho, 0.0, v * dq / lim.a_rho, 0.0]),
                ((-v * q - lim.a_rho) / lim.a_rho, [-q / lim.a_rho, 0.0, -v * dq / lim.a_rho, 0.0]),
            ];
            if let Some(cap) = pt.cap {
                rows.push(((v - cap) / lim.v_max, [1.0 / lim.v_max, 0.0, 0.0, 0.0]));
            }
            for (val, c) in rows {
                ev.ineq.push(val);
                if with_derivatives {
                    let mut row = Vec::with_capacity(NV);
                    for i in 0..4 {
                        let gv = c[0] * vs * p[i] + c[1] * vs * dp[i];
                        let gr = c[2] * rs * p[i] + c[3] * rs * dp[i];
                        if gv != 0.0 {
                            row.push((NV * s + i, gv));
                        }
                        if gr != 0.0 {
                            row.push((NV * s + 4 + i, gr));
                        }
                    }
                    ev.ineq_jac.push(row);
                }
            }
        }
        ev
    }
}
