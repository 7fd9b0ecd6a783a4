//! Plans a scenario, runs both controllers and writes the comparison files.

use tubeswarm::commands::cmd_compare;

fn main() -> tubeswarm::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "caseC".into());
    let out = std::env::temp_dir().join("tubeswarm-compare");
    let summary = cmd_compare(&tubeswarm::load_scenario(&name)?, &out)?;
    for h in &summary.headline {
        println!("{:<17} passing {:6.2} s   min distance {:.3} m", format!("{:?}", h.mode), h.passing_time, h.min_distance.unwrap_or(f64::NAN));
    }
    println!("files in {}", out.display());
    Ok(())
}
