//! Initial formation of a built-in scenario and the quantities derived from it.

use tubeswarm::sim::initial_formation;
use tubeswarm::swarm::{front_robot, last_robot, min_pairwise_distance, swarm_area, swarm_density};

fn main() -> tubeswarm::Result<()> {
    let scenario = tubeswarm::builtin("caseA")?;
    let tube = scenario.build_tube()?;
    let p = &scenario.params;
    let robots = initial_formation(&tube, p, scenario.sim.seed, scenario.sim.jitter);

    let front = front_robot(&robots, &tube)?;
    let last = last_robot(&robots, &tube)?;
    println!("{} robots, front #{} at l={:.3}, last #{} at l={:.3}",
        robots.len(),
        front.id,
        tube.project(&front.position).arc_length,
        last.id,
        tube.project(&last.position).arc_length,
    );
    println!("area   {:.3} m²", swarm_area(&robots, &tube, p.r_p)?);
    println!("density {:.4} robots/m² (desired {})", swarm_density(&robots, &tube, p.r_p)?, p.rho_d);
    let positions: Vec<_> = robots.iter().map(|r| r.position).collect();
    println!("closest pair {:.3} m", min_pairwise_distance(&positions)?);
    Ok(())
}
