//! Runs one closed-loop simulation and prints its summary.
//!
//! ```text
//! cargo run --release --example simulate -- caseA without
//! ```

use tubeswarm::{metrics, simulate, Mode};

fn main() -> tubeswarm::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "caseA".into());
    let mode = Mode::parse(&args.next().unwrap_or_else(|| "with".into()))?;
    let s = tubeswarm::load_scenario(&name)?;
    let tube = s.build_tube()?;
    let profile = match mode {
        Mode::WithPlanning => Some(tubeswarm::plan(&tube, &s.params, &s.resolved_planner_config()?)?.profile),
        Mode::WithoutPlanning => None,
    };
    let trace = simulate(&tube, &s.params, mode, profile.as_ref(), &s.sim)?;

    for step in trace.steps.iter().step_by(100) {
        println!(
            "t={:5.2}  center l={:5.1}  density {:.3} (ref {:.3})  speed {:.2} (ref {:.2})",
            step.time, step.center_arc_length, step.density, step.planned_density, step.average_speed, step.planned_speed
        );
    }
    println!("{}", serde_json::to_string_pretty(&metrics(&trace)?)?);
    Ok(())
}
