//! Density rate limit and the density after a rigid shift through a taper.

use tubeswarm::planner::{max_density, max_density_rate, predicted_density};

fn main() -> tubeswarm::Result<()> {
    let s = tubeswarm::builtin("caseC")?;
    let p = &s.params;
    let tube = s.build_tube()?;

    println!("rho_max = {:.3}", max_density(p.r_p));
    for r_a in [p.r_a, p.r_a_max()] {
        println!("a_rho(N={}, v_max={}, r_a={r_a}) = {:.4}", p.robot_count, p.v_max, max_density_rate(p.robot_count, p.v_max, r_a)?);
    }

    println!("\nshift by 5 m starting at density {}", p.rho_d);
    for l in [20.0, 25.0, 28.0, 30.0, 32.0, 35.0, 40.0] {
        let rho = predicted_density(&tube, p.robot_count, p.rho_d, l, 5.0)?;
        println!("  l={l:4.1}  half-width {:.2}  ->  {rho:.4}", tube.width(l)?);
    }
    Ok(())
}
