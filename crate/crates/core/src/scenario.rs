//! Scenario files and the built-in scenario registry.

use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{SegmentDefinition, SegmentKind, TubeDefinition, VirtualTube};
use crate::io::write_atomic;
use crate::planner::PlannerConfig;
use crate::sim::{initial_formation, SimConfig};
use crate::swarm::{swarm_density, SwarmParams};

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 5] = ["caseA", "caseB", "caseC", "caseD", "straight"];

/// Every built-in tube is this long.
pub const TUBE_LENGTH: f64 = 50.0;
/// Half-width at the entrance.
pub const ENTRY_HALF_WIDTH: f64 = 5.0;
/// Half-width of the narrowest section.
pub const NARROW_HALF_WIDTH: f64 = 1.2;
/// Radius of the quarter turn in the curved cases.
pub const TURN_RADIUS: f64 = 25.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub tube: TubeDefinition,
    pub params: SwarmParams,
    #[serde(default)]
    pub planner: PlannerConfig,
    #[serde(default)]
    pub sim: SimConfig,
}

fn prefixed(prefix: &str, e: Error) -> Error {
    match e {
        Error::Config { path, message } if !path.starts_with(prefix) => Error::Config {
            path: format!("{prefix}.{path}"),
            message,
        },
        Error::InvalidTube(m) => Error::config(prefix, m),
        other => other,
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(Error::config("name", "must be non-empty and contain no path separators"));
        }
        self.params.validate().map_err(|e| prefixed("params", e))?;
        self.planner.validate().map_err(|e| prefixed("planner", e))?;
        self.sim.validate().map_err(|e| prefixed("sim", e))?;
        self.tube.build().map_err(|e| prefixed("tube", e))?;
        Ok(())
    }

    pub fn build_tube(&self) -> Result<VirtualTube> {
        self.tube.build().map_err(|e| prefixed("tube", e))
    }

    /// Density of the initial formation.
    pub fn initial_density(&self) -> Result<f64> {
        let tube = self.build_tube()?;
        let robots = initial_formation(&tube, &self.params, self.sim.seed, self.sim.jitter);
        swarm_density(&robots, &tube, self.params.r_p)
    }

    /// Planner config with the boundary density defaulting to the measured
    /// initial density.
    pub fn resolved_planner_config(&self) -> Result<PlannerConfig> {
        let mut cfg = self.planner.clone();
        if cfg.boundary_density.is_none() {
            cfg.boundary_density = Some(self.initial_density()?);
        }
        Ok(cfg)
    }

    /// Applies a seed to both the simulation and the planner probe.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.sim.seed = seed;
        self.planner.seed = seed;
        self
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::config(json_path(&e), e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Best-effort location of a serde error, `line:column`.
fn json_path(e: &serde_json::Error) -> String {
    format!("line {}, column {}", e.line(), e.column())
}

fn straight_tube(width: Vec<[f64; 2]>) -> TubeDefinition {
    TubeDefinition {
        start: [0.0, 0.0],
        heading: 0.0,
        segments: vec![SegmentDefinition {
            kind: SegmentKind::Straight,
            length: TUBE_LENGTH,
            curvature: None,
        }],
        width,
    }
}

/// 5 m straight, a left quarter turn of radius 25 m, then straight to 50 m.
fn curved_tube(width: Vec<[f64; 2]>) -> TubeDefinition {
    let arc = TURN_RADIUS * FRAC_PI_2;
    let lead = 5.0;
    TubeDefinition {
        start: [0.0, 0.0],
        heading: 0.0,
        segments: vec![
            SegmentDefinition {
                kind: SegmentKind::Straight,
                length: lead,
                curvature: None,
            },
            SegmentDefinition {
                kind: SegmentKind::Arc,
                length: arc,
                curvature: Some(1.0 / TURN_RADIUS),
            },
            SegmentDefinition {
                kind: SegmentKind::Straight,
                length: TUBE_LENGTH - lead - arc,
                curvature: None,
            },
        ],
        width,
    }
}

/// Entry width until `start`, linear taper to the narrow width at `end`.
fn taper(start: f64, end: f64) -> Vec<[f64; 2]> {
    vec![
        [0.0, ENTRY_HALF_WIDTH],
        [start, ENTRY_HALF_WIDTH],
        [end, NARROW_HALF_WIDTH],
        [TUBE_LENGTH, NARROW_HALF_WIDTH],
    ]
}

fn scenario(name: &str, description: &str, tube: TubeDefinition) -> ScenarioConfig {
    ScenarioConfig {
        name: name.to_string(),
        description: Some(description.to_string()),
        tube,
        params: SwarmParams::standard(),
        planner: PlannerConfig::default(),
        sim: SimConfig::default(),
    }
}

/// Built-in scenario by name.
pub fn builtin(name: &str) -> Result<ScenarioConfig> {
    Ok(match name {
        "caseA" => scenario(
            "caseA",
            "straight 50 m tube; half-width 5 m narrowing linearly to 1.2 m over [20, 40] m",
            straight_tube(taper(20.0, 40.0)),
        ),
        "caseB" => scenario(
            "caseB",
            "5 m straight, 90 degree left arc of radius 25 m, straight to 50 m; half-width 5 m narrowing to 1.2 m over [15, 35] m",
            curved_tube(taper(15.0, 35.0)),
        ),
        "caseC" => scenario(
            "caseC",
            "straight 50 m tube; half-width 5 m narrowing linearly to 1.2 m over [30, 35] m",
            straight_tube(taper(30.0, 35.0)),
        ),
        "caseD" => scenario(
            "caseD",
            "5 m straight, 90 degree left arc of radius 25 m, straight to 50 m; half-width 5 m narrowing to 1.2 m over [25, 30] m",
            curved_tube(taper(25.0, 30.0)),
        ),
        "straight" => {
            let mut s = scenario(
                "straight",
                "straight 50 m tube of constant half-width 5 m; plan boundary values at v_max and rho_d",
                straight_tube(vec![[0.0, ENTRY_HALF_WIDTH], [TUBE_LENGTH, ENTRY_HALF_WIDTH]]),
            );
            s.planner.boundary_speed = Some(s.params.v_max);
            s.planner.boundary_density = Some(s.params.rho_d);
            s
        }
        other => return Err(Error::UnknownScenario(other.to_string())),
    })
}

/// Resolves a built-in name or reads and validates a scenario file.
pub fn load_scenario(name_or_path: &str) -> Result<ScenarioConfig> {
    if BUILTIN_NAMES.contains(&name_or_path) {
        return builtin(name_or_path);
    }
    let path = Path::new(name_or_path);
    if !path.exists() {
        return Err(Error::UnknownScenario(name_or_path.to_string()));
    }
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: name_or_path.to_string(),
        source,
    })?;
    ScenarioConfig::from_json(&text).map_err(|e| match e {
        Error::Config { path: p, message } => Error::Config {
            path: format!("{name_or_path}: {p}"),
            message,
        },
        other => other,
    })
}

pub fn save_scenario(cfg: &ScenarioConfig, path: &Path) -> Result<()> {
    write_atomic(path, cfg.to_json()?.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_complete() {
        for name in BUILTIN_NAMES {
            let s = builtin(name).unwrap();
            s.validate().unwrap();
            let tube = s.build_tube().unwrap();
            assert!((tube.total_length() - TUBE_LENGTH).abs() < 1e-12);
            assert_eq!(tube.width_profile().min_width(), if name == "straight" { 5.0 } else { 1.2 });
        }
        assert!(matches!(builtin("caseE"), Err(Error::UnknownScenario(_))));
    }

    #[test]
    fn case_a_uses_standard_params() {
        let s = load_scenario("caseA").unwrap();
        let p = &s.params;
        assert_eq!(
            (p.robot_count, p.v_min, p.v_max, p.a_v, p.a_n, p.r_p, p.r_s, p.r_a, p.rho_d),
            (20, 2.0, 5.0, 1.0, 1.0, 0.3, 0.4, 0.8, 0.1989)
        );
        let tube = s.build_tube().unwrap();
        assert_eq!(tube.segments().len(), 1);
        assert_eq!(tube.width(10.0).unwrap(), 5.0);
        assert!((tube.width(30.0).unwrap() - 3.1).abs() < 1e-12);
    }

    #[test]
    fn curved_cases_turn_left_by_a_quarter() {
        let tube = builtin("caseD").unwrap().build_tube().unwrap();
        let (_, t, _) = tube.frame(TUBE_LENGTH);
        assert!((t - crate::geometry::Vec2::new(0.0, 1.0)).norm() < 1e-12);
        assert_eq!(tube.curvature_radius(20.0), 25.0);
    }

    #[test]
    fn rejects_bad_values_and_unknown_keys() {
        let mut s = builtin("caseA").unwrap();
        s.params.v_min = 0.0;
        let text = s.to_json().unwrap();
        match ScenarioConfig::from_json(&text) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "params.v_min"),
            other => panic!("{other:?}"),
        }
        let text = builtin("caseA").unwrap().to_json().unwrap().replacen("\"name\"", "\"nmae\"", 1);
        assert!(matches!(ScenarioConfig::from_json(&text), Err(Error::Config { .. })));
    }

    #[test]
    fn save_load_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        for name in BUILTIN_NAMES {
            let s = builtin(name).unwrap();
            let path = dir.path().join(format!("{name}.json"));
            save_scenario(&s, &path).unwrap();
            let back = load_scenario(path.to_str().unwrap()).unwrap();
            assert_eq!(back, s);
            let again = dir.path().join("again.json");
            save_scenario(&back, &again).unwrap();
            assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&again).unwrap());
        }
    }

    #[test]
    fn boundary_density_defaults_to_formation() {
        let s = builtin("caseC").unwrap();
        let cfg = s.resolved_planner_config().unwrap();
        let rho = cfg.boundary_density.unwrap();
        assert!(rho > 0.3 && rho < 0.5, "{rho}");
        let st = builtin("straight").unwrap().resolved_planner_config().unwrap();
        assert_eq!(st.boundary_density, Some(0.1989));
    }
}
