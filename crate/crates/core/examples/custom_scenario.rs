//! Defines an S-shaped tube from scratch, saves it, reloads it and simulates it.

use tubeswarm::commands::run_mode;
use tubeswarm::geometry::{SegmentDefinition, SegmentKind, TubeDefinition};
use tubeswarm::scenario::{load_scenario, save_scenario};
use tubeswarm::{Mode, PlannerConfig, ScenarioConfig, SimConfig, SwarmParams};

fn seg(kind: SegmentKind, length: f64, curvature: Option<f64>) -> SegmentDefinition {
    SegmentDefinition { kind, length, curvature }
}

fn main() -> tubeswarm::Result<()> {
    let mut params = SwarmParams::standard();
    params.robot_count = 12;
    let scenario = ScenarioConfig {
        name: "s_bend".into(),
        description: Some("two opposite 30 m arcs between short straights, pinched in the middle".into()),
        tube: TubeDefinition {
            start: [0.0, 0.0],
            heading: 0.0,
            segments: vec![
                seg(SegmentKind::Straight, 5.0, None),
                seg(SegmentKind::Arc, 20.0, Some(1.0 / 30.0)),
                seg(SegmentKind::Arc, 20.0, Some(-1.0 / 30.0)),
                seg(SegmentKind::Straight, 5.0, None),
            ],
            width: vec![[0.0, 4.0], [20.0, 4.0], [25.0, 1.5], [30.0, 4.0], [50.0, 4.0]],
        },
        params,
        planner: PlannerConfig::default(),
        sim: SimConfig { seed: 3, ..SimConfig::default() },
    };
    scenario.validate()?;

    let path = std::env::temp_dir().join("s_bend.json");
    save_scenario(&scenario, &path)?;
    let loaded = load_scenario(path.to_str().expect("utf-8 temp path"))?;
    assert_eq!(loaded, scenario);

    let tube = loaded.build_tube()?;
    let profile = tubeswarm::plan(&tube, &loaded.params, &loaded.resolved_planner_config()?)?.profile;
    for mode in [Mode::WithPlanning, Mode::WithoutPlanning] {
        let m = run_mode(&loaded, mode, Some(&profile))?;
        println!("{:?}: passing {:.2} s, min distance {:.3} m", mode, m.passing_time, m.min_distance.unwrap_or(f64::NAN));
    }
    Ok(())
}
