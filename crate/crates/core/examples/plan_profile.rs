//! Plans speed and density for a scenario and prints the profile.
//!
//! ```text
//! cargo run --release --example plan_profile -- caseD
//! ```

fn main() -> tubeswarm::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "caseC".into());
    let s = tubeswarm::load_scenario(&name)?;
    let tube = s.build_tube()?;
    let outcome = tubeswarm::plan(&tube, &s.params, &s.resolved_planner_config()?)?;

    println!(
        "{name}: feasible={} objective={:.4} converged={} certified={} collocation points={}",
        outcome.report.feasible,
        outcome.objective,
        outcome.converged,
        outcome.local_min_certified,
        outcome.collocation_points
    );
    for d in &outcome.diagnostics {
        println!("  note: {d}");
    }
    println!("{:>6} {:>8} {:>8} {:>8}", "l", "width", "v*", "rho*");
    let length = tube.total_length();
    for i in 0..=25 {
        let l = length * i as f64 / 25.0;
        let (v, rho) = outcome.profile.evaluate(l)?;
        println!("{l:6.1} {:8.2} {v:8.3} {rho:8.4}", tube.width(l)?);
    }
    let (arg, min) = (0..=5000)
        .map(|i| {
            let l = length * i as f64 / 5000.0;
            (l, outcome.profile.evaluate_clamped(l).1)
        })
        .fold((0.0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    println!("lowest planned density {min:.4} at l={arg:.2}");
    Ok(())
}
