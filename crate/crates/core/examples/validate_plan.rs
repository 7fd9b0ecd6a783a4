//! Audits a hand-written plan and a solved plan against the same tube.

use tubeswarm::planner::PlanProfile;

fn main() -> tubeswarm::Result<()> {
    let s = tubeswarm::builtin("caseB")?;
    let tube = s.build_tube()?;
    let cfg = s.resolved_planner_config()?;

    let naive = PlanProfile::constant(tube.total_length(), cfg.segment_count, s.params.v_max, s.params.rho_d);
    let report = tubeswarm::validate_plan(&naive, &tube, &s.params, &cfg)?;
    println!("constant plan feasible: {}", report.feasible);
    for c in report.constraints.iter().filter(|c| !c.pass) {
        println!("  {:<24} residual {:.4} at l={:?}", c.name, c.max_residual, c.worst_l);
    }

    let solved = tubeswarm::plan(&tube, &s.params, &cfg)?.profile;
    let report = tubeswarm::validate_plan(&solved, &tube, &s.params, &cfg)?;
    println!("solved plan feasible: {} (worst residual {:.2e} over {} points)", report.feasible, report.max_residual(), report.grid_points);
    Ok(())
}
