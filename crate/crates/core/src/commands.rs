//! The plan, simulate, compare and validate commands, writing their
//! artifacts into an output directory.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{write_atomic, write_atomic_with};
use crate::planner::{plan, validate_plan, ConstraintKind, ConstraintReport, Limits, PlanOutcome, PlanProfile};
use crate::scenario::ScenarioConfig;
use crate::sim::{metrics, simulate, write_trace_csv, Mode, Summary};

pub fn plan_path(out: &Path, name: &str) -> PathBuf {
    out.join(format!("{name}.plan.json"))
}

pub fn plan_report_path(out: &Path, name: &str) -> PathBuf {
    out.join(format!("{name}.plan.report.json"))
}

pub fn trace_path(out: &Path, name: &str, mode: Mode) -> PathBuf {
    out.join(format!("{name}.{}.trace.csv", mode.short()))
}

pub fn summary_path(out: &Path, name: &str, mode: Mode) -> PathBuf {
    out.join(format!("{name}.{}.summary.json", mode.short()))
}

pub fn compare_path(out: &Path, name: &str) -> PathBuf {
    out.join(format!("{name}.compare.json"))
}

/// Planner audit and diagnostics written next to the plan.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlanReport {
    pub scenario: String,
    pub feasible: bool,
    pub objective: f64,
    pub converged: bool,
    pub local_min_certified: bool,
    pub refinement_rounds: usize,
    pub collocation_points: usize,
    pub limits: Limits,
    pub constraints: ConstraintReport,
    pub diagnostics: Vec<String>,
}

/// Per-mode summary file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SummaryFile {
    pub scenario: String,
    pub seed: u64,
    #[serde(flatten)]
    pub summary: Summary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Headline {
    pub mode: Mode,
    pub passing_time: f64,
    pub min_distance: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompareSummary {
    pub scenario: String,
    pub seed: u64,
    pub headline: Vec<Headline>,
    pub with_planning: Summary,
    pub without_planning: Summary,
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

/// Plans the scenario and writes the profile and its audit.
///
/// Returns `Error::Infeasible` (after writing both files) when no profile
/// passing the audit was found.
pub fn cmd_plan(scenario: &ScenarioConfig, out: &Path) -> Result<PlanOutcome> {
    let tube = scenario.build_tube()?;
    let cfg = scenario.resolved_planner_config()?;
    let outcome = plan(&tube, &scenario.params, &cfg)?;
    write_atomic(&plan_path(out, &scenario.name), to_json(&outcome.profile)?.as_bytes())?;
    let report = PlanReport {
        scenario: scenario.name.clone(),
        feasible: outcome.report.feasible,
        objective: outcome.objective,
        converged: outcome.converged,
        local_min_certified: outcome.local_min_certified,
        refinement_rounds: outcome.refinement_rounds,
        collocation_points: outcome.collocation_points,
        limits: outcome.limits.clone(),
        constraints: outcome.report.clone(),
        diagnostics: outcome.diagnostics.clone(),
    };
    write_atomic(&plan_report_path(out, &scenario.name), to_json(&report)?.as_bytes())?;
    if !outcome.report.feasible {
        return Err(Error::Infeasible(outcome.report.violated()));
    }
    Ok(outcome)
}

pub fn read_plan(path: &Path) -> Result<PlanProfile> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    PlanProfile::from_json(&text)
}

fn check_plan_covers(profile: &PlanProfile, scenario: &ScenarioConfig) -> Result<()> {
    let length = scenario.build_tube()?.total_length();
    if (profile.length() - length).abs() > 1e-9 * length.max(1.0) {
        return Err(Error::config(
            "plan.segment_breaks",
            format!("plan covers [0, {}] but the tube has length {length}", profile.length()),
        ));
    }
    Ok(())
}

/// Runs one mode and returns its metrics without writing anything.
pub fn run_mode(scenario: &ScenarioConfig, mode: Mode, profile: Option<&PlanProfile>) -> Result<Summary> {
    let tube = scenario.build_tube()?;
    let trace = simulate(&tube, &scenario.params, mode, profile, &scenario.sim)?;
    metrics(&trace)
}

/// Simulates one mode, planning first when `mode` needs a plan and none is given.
pub fn cmd_simulate(scenario: &ScenarioConfig, mode: Mode, plan_file: Option<&Path>, out: &Path) -> Result<Summary> {
    let profile = match (mode, plan_file) {
        (Mode::WithPlanning, Some(p)) => Some(read_plan(p)?),
        (Mode::WithPlanning, None) => Some(cmd_plan(scenario, out)?.profile),
        (Mode::WithoutPlanning, _) => None,
    };
    if let Some(p) = &profile {
        check_plan_covers(p, scenario)?;
    }
    let tube = scenario.build_tube()?;
    let trace = simulate(&tube, &scenario.params, mode, profile.as_ref(), &scenario.sim)?;
    let summary = metrics(&trace)?;
    write_atomic_with(&trace_path(out, &scenario.name, mode), |w| write_trace_csv(&trace, w))?;
    let file = SummaryFile {
        scenario: scenario.name.clone(),
        seed: scenario.sim.seed,
        summary: summary.clone(),
    };
    write_atomic(&summary_path(out, &scenario.name, mode), to_json(&file)?.as_bytes())?;
    Ok(summary)
}

/// Plans, then runs both modes concurrently and writes a side-by-side summary.
pub fn cmd_compare(scenario: &ScenarioConfig, out: &Path) -> Result<CompareSummary> {
    let profile = cmd_plan(scenario, out)?.profile;
    let (with, without) = std::thread::scope(|s| {
        let a = s.spawn(|| run_mode(scenario, Mode::WithPlanning, Some(&profile)));
        let b = s.spawn(|| run_mode(scenario, Mode::WithoutPlanning, None));
        (a.join(), b.join())
    });
    let with = with.map_err(|_| Error::domain("with-planning run panicked"))??;
    let without = without.map_err(|_| Error::domain("without-planning run panicked"))??;
    let summary = CompareSummary {
        scenario: scenario.name.clone(),
        seed: scenario.sim.seed,
        headline: [&with, &without]
            .iter()
            .map(|s| Headline {
                mode: s.mode,
                passing_time: s.passing_time,
                min_distance: s.min_distance,
            })
            .collect(),
        with_planning: with,
        without_planning: without,
    };
    write_atomic(&compare_path(out, &scenario.name), to_json(&summary)?.as_bytes())?;
    Ok(summary)
}

/// Audits a saved plan against a scenario.
pub fn cmd_validate(plan_file: &Path, scenario: &ScenarioConfig) -> Result<ConstraintReport> {
    let profile = read_plan(plan_file)?;
    let tube = scenario.build_tube()?;
    let cfg = scenario.resolved_planner_config()?;
    let report = validate_plan(&profile, &tube, &scenario.params, &cfg)?;
    debug_assert!(report.get(ConstraintKind::Coverage).is_some());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::builtin;

    #[test]
    fn plan_writes_profile_and_report() {
        let dir = tempfile::tempdir().unwrap();
        let s = builtin("straight").unwrap();
        let outcome = cmd_plan(&s, dir.path()).unwrap();
        let back = read_plan(&plan_path(dir.path(), "straight")).unwrap();
        assert_eq!(back, outcome.profile);
        let report: PlanReport =
            serde_json::from_str(&std::fs::read_to_string(plan_report_path(dir.path(), "straight")).unwrap()).unwrap();
        assert!(report.feasible);
        assert_eq!(report.constraints, outcome.report);
    }

    #[test]
    fn simulate_rejects_plan_of_wrong_length() {
        let dir = tempfile::tempdir().unwrap();
        let short = PlanProfile::constant(40.0, 4, 3.0, 0.2);
        let path = dir.path().join("short.plan.json");
        std::fs::write(&path, short.to_json().unwrap()).unwrap();
        let s = builtin("straight").unwrap();
        match cmd_simulate(&s, Mode::WithPlanning, Some(&path), dir.path()) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "plan.segment_breaks"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn without_mode_ignores_plan_and_names_files() {
        let dir = tempfile::tempdir().unwrap();
        let mut s = builtin("straight").unwrap();
        s.sim.dt = 0.05;
        let summary = cmd_simulate(&s, Mode::WithoutPlanning, None, dir.path()).unwrap();
        assert!(summary.completed);
        assert!(trace_path(dir.path(), "straight", Mode::WithoutPlanning).exists());
        let file: SummaryFile =
            serde_json::from_str(&std::fs::read_to_string(summary_path(dir.path(), "straight", Mode::WithoutPlanning)).unwrap())
                .unwrap();
        assert_eq!(file.summary, summary);
        assert!(!plan_path(dir.path(), "straight").exists());
    }
}
