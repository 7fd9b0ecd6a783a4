//! Pointwise planning constraints and the dense-grid residual audit.

use serde::{Deserialize, Serialize};

use super::density::predict;
use super::profile::PlanProfile;
use super::Limits;
use crate::geometry::VirtualTube;

/// Constraint families checked along the tube.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    /// `v_min <= v_a <= v_max`
    SpeedBounds,
    /// `|dv_a/dl · v_a| <= a_v`
    SpeedRate,
    /// `v_a <= √(a_n r_t)`
    CurvatureSpeed,
    /// `ρ_floor <= ρ_a <= ρ_max`
    DensityBounds,
    /// `|dρ_a/dl · v_a| <= a_ρ`
    DensityRate,
    /// `|(ρ_f(l + Δl) - ρ_a(l)) / Δl · v_a| <= a_ρ`
    PredictiveDensityRate,
    /// Value continuity of both profiles at segment breaks.
    Continuity,
    /// `v_a(0)` and `ρ_a(0)` match the boundary conditions.
    BoundaryConditions,
    /// The profile spans exactly `[0, L]`.
    Coverage,
}

impl ConstraintKind {
    pub const ALL: [ConstraintKind; 9] = [
        ConstraintKind::SpeedBounds,
        ConstraintKind::SpeedRate,
        ConstraintKind::CurvatureSpeed,
        ConstraintKind::DensityBounds,
        ConstraintKind::DensityRate,
        ConstraintKind::PredictiveDensityRate,
        ConstraintKind::Continuity,
        ConstraintKind::BoundaryConditions,
        ConstraintKind::Coverage,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConstraintKind::SpeedBounds => "speed_bounds",
            ConstraintKind::SpeedRate => "speed_rate",
            ConstraintKind::CurvatureSpeed => "curvature_speed",
            ConstraintKind::DensityBounds => "density_bounds",
            ConstraintKind::DensityRate => "density_rate",
            ConstraintKind::PredictiveDensityRate => "predictive_density_rate",
            ConstraintKind::Continuity => "continuity",
            ConstraintKind::BoundaryConditions => "boundary_conditions",
            ConstraintKind::Coverage => "coverage",
        }
    }
}

/// Speed cap imposed by the center-curve curvature.
pub(crate) fn curvature_cap(tube: &VirtualTube, a_n: f64, l: f64) -> f64 {
    (a_n * tube.curvature_radius(l)).sqrt()
}

/// Rigid-shift density rate `(ρ_f - ρ) / Δl` and its derivative in `ρ`.
pub(crate) fn shift_rate(tube: &VirtualTube, lim: &Limits, rho: f64, l: f64) -> (f64, f64) {
    let floor = 1e-6;
    let (r, clamped) = if rho > floor { (rho, false) } else { (floor, true) };
    let (rho_f, d) = predict(tube, lim.robot_count, r, l, lim.delta_l);
    let q = (rho_f - r) / lim.delta_l;
    let dq = if clamped { 0.0 } else { (d - 1.0) / lim.delta_l };
    (q, dq)
}

/// Signed violation of each pointwise family at `l` (`<= 0` is satisfied).
pub(crate) fn point_violations(
    tube: &VirtualTube,
    lim: &Limits,
    l: f64,
    v: f64,
    dv: f64,
    rho: f64,
    drho: f64,
) -> [(ConstraintKind, f64); 6] {
    let (q, _) = shift_rate(tube, lim, rho, l);
    [
        (ConstraintKind::SpeedBounds, (lim.v_min - v).max(v - lim.v_max)),
        (ConstraintKind::SpeedRate, (dv * v).abs() - lim.a_v),
        (ConstraintKind::CurvatureSpeed, v - curvature_cap(tube, lim.a_n, l)),
        (ConstraintKind::DensityBounds, (lim.rho_floor - rho).max(rho - lim.rho_max)),
        (ConstraintKind::DensityRate, (drho * v).abs() - lim.a_rho),
        (ConstraintKind::PredictiveDensityRate, (q * v).abs() - lim.a_rho),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintResidual {
    pub name: String,
    /// Largest violation over the grid, clamped at 0 when satisfied.
    pub max_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_l: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub feasible: bool,
    pub tolerance: f64,
    pub grid_points: usize,
    pub constraints: Vec<ConstraintResidual>,
}

impl ConstraintReport {
    pub fn get(&self, kind: ConstraintKind) -> Option<&ConstraintResidual> {
        self.constraints.iter().find(|c| c.name == kind.name())
    }

    pub fn max_residual(&self) -> f64 {
        self.constraints.iter().map(|c| c.max_residual).fold(0.0, f64::max)
    }

    pub fn violated(&self) -> Vec<String> {
        self.constraints
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{} (residual {:e})", c.name, c.max_residual))
            .collect()
    }
}

/// Dense grid used by the audit: `density_factor * (M - 1) + 1` points per segment.
pub(crate) fn dense_offsets(h: f64, collocation: usize, density_factor: usize) -> Vec<f64> {
    let n = density_factor * (collocation.max(2) - 1);
    (0..=n).map(|j| h * j as f64 / n as f64).collect()
}

/// Worst residual per family, and the dense points where any family exceeds `flag_above`.
pub(crate) struct Audit {
    pub worst: Vec<(ConstraintKind, f64, Option<f64>)>,
    pub grid_points: usize,
    pub flagged: Vec<(usize, f64)>,
}

pub(crate) fn audit(
    profile: &PlanProfile,
    tube: &VirtualTube,
    lim: &Limits,
    collocation: usize,
    flag_above: f64,
) -> Audit {
    let mut worst: Vec<(ConstraintKind, f64, Option<f64>)> =
        ConstraintKind::ALL.iter().map(|&k| (k, 0.0, None)).collect();
    let mut bump = |kind: ConstraintKind, r: f64, l: Option<f64>| {
        let e = worst.iter_mut().find(|w| w.0 == kind).unwrap();
        if r > e.1 || (r.is_nan() && !e.1.is_nan()) {
            e.1 = r;
            e.2 = l;
        }
    };
    let mut flagged = Vec::new();
    let mut grid_points = 0;

    bump(ConstraintKind::Coverage, (profile.length() - tube.total_length()).abs(), None);

    let k = profile.segment_count();
    for seg in 0..k {
        let l0 = profile.segment_breaks[seg];
        let h = profile.segment_breaks[seg + 1] - l0;
        let offs = dense_offsets(h, collocation, 10);
        for (j, &x) in offs.iter().enumerate() {
            let l = (l0 + x).min(tube.total_length());
            let (v, dv, rho, drho) = profile.segment_values(seg, x);
            let mut flag = false;
            for (kind, g) in point_violations(tube, lim, l, v, dv, rho, drho) {
                let r = g.max(0.0);
                bump(kind, if g.is_nan() { f64::INFINITY } else { r }, Some(l));
                if r > flag_above || g.is_nan() {
                    flag = true;
                }
            }
            if flag {
                flagged.push((seg, j as f64 / (offs.len() - 1) as f64));
            }
            grid_points += 1;
        }
        if seg + 1 < k {
            let (v0, _, r0, _) = profile.segment_values(seg, h);
            let (v1, _, r1, _) = profile.segment_values(seg + 1, 0.0);
            bump(ConstraintKind::Continuity, (v0 - v1).abs().max((r0 - r1).abs()), Some(l0 + h));
        }
    }
    let (v, _, rho, _) = profile.segment_values(0, 0.0);
    bump(
        ConstraintKind::BoundaryConditions,
        (v - lim.boundary_speed).abs().max((rho - lim.boundary_density).abs()),
        Some(0.0),
    );
    Audit {
        worst,
        grid_points,
        flagged,
    }
}

pub(crate) fn report_from(audit: &Audit, tolerance: f64) -> ConstraintReport {
    let constraints: Vec<ConstraintResidual> = audit
        .worst
        .iter()
        .map(|&(kind, r, l)| ConstraintResidual {
            name: kind.name().to_string(),
            max_residual: r,
            worst_l: if r > 0.0 { l } else { None },
            pass: r <= tolerance,
        })
        .collect();
    ConstraintReport {
        feasible: constraints.iter().all(|c| c.pass),
        tolerance,
        grid_points: audit.grid_points,
        constraints,
    }
}
