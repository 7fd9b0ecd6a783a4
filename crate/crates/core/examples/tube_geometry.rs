//! Builds a tube from segments, then moves between world and tube coordinates.

use tubeswarm::{Side, TubeBuilder, Vec2, WidthProfile};

fn main() -> tubeswarm::Result<()> {
    let width = WidthProfile::new(vec![(0.0, 3.0), (20.0, 3.0), (30.0, 1.5), (40.0, 1.5)])?;
    let tube = TubeBuilder::new(Vec2::zeros(), 0.0)
        .straight(10.0)
        .arc(20.0, 1.0 / 20.0)
        .straight(10.0)
        .build(width)?;

    println!("length {:.3} m", tube.total_length());
    for l in [0.0, 10.0, 20.0, 30.0, 40.0] {
        let (c, t, _) = tube.frame(l);
        println!(
            "l={l:5.1}  center=({:7.3}, {:7.3})  tangent=({:6.3}, {:6.3})  half-width={:.2}  r_t={}",
            c.x,
            c.y,
            t.x,
            t.y,
            tube.width(l)?,
            tube.curvature_radius(l)
        );
    }

    let p = tube.tube_point(18.0, Side::Positive, 0.5)?;
    let c = tube.project(&p);
    println!(
        "point ({:.3}, {:.3}) -> l={:.6} side={:?} fraction={:.6}",
        p.x, p.y, c.arc_length, c.side, c.radial_fraction
    );
    let outside = Vec2::new(12.0, 8.0);
    let c = tube.project(&outside);
    println!("({}, {}) inside: {}  fraction {:.2}", outside.x, outside.y, tube.contains(&outside, 0.0), c.radial_fraction);
    println!("area over [0, 40]: {:.3} m²", tube.area_between(0.0, 40.0));
    Ok(())
}
