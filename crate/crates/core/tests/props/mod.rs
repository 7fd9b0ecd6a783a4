//! Randomized property checks shared by the property suite and the
//! acceptance report. Each check runs a fixed number of cases from a
//! deterministic generator and returns the first counterexample as text.

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use tubeswarm::controller::{avoidance_radius_rate, saturate, ForwardSource};
use tubeswarm::sim::{step, ClampCounts, WorldState};
use tubeswarm::swarm::min_pairwise_distance;
use tubeswarm::{Mode, PlanProfile, RobotState, Side, SwarmParams, TubeBuilder, Vec2, VirtualTube, WidthProfile};

pub const CASES: u32 = 1000;

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn finish(r: Result<(), proptest::test_runner::TestError<impl std::fmt::Debug>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

fn vec2() -> impl Strategy<Value = Vec2> {
    (-50.0..50.0f64, -50.0..50.0f64).prop_map(|(x, y)| Vec2::new(x, y))
}

/// `sat` is idempotent, keeps direction and lands in the band.
pub fn saturation(cases: u32) -> Result<(), String> {
    let strat = (vec2(), 0.1..5.0f64, 0.0..5.0f64);
    finish(runner(cases).run(&strat, |(v, v_min, extra)| {
        prop_assume!(v.norm() > 1e-9);
        let v_max = v_min + extra;
        let s = saturate(v, v_min, v_max).unwrap();
        let twice = saturate(s, v_min, v_max).unwrap();
        prop_assert!((twice - s).norm() <= 1e-12 * s.norm().max(1.0), "not idempotent: {s} vs {twice}");
        let cos = s.dot(&v) / (s.norm() * v.norm());
        prop_assert!(cos >= 1.0 - 1e-12, "direction changed, cos = {cos}");
        let n = s.norm();
        prop_assert!(n >= v_min * (1.0 - 1e-12) && n <= v_max * (1.0 + 1e-12), "norm {n} outside [{v_min}, {v_max}]");
        Ok(())
    }))
}

fn random_tube() -> impl Strategy<Value = VirtualTube> {
    let seg = (any::<bool>(), 2.0..15.0f64, 10.0..40.0f64, any::<bool>());
    (-1.0..1.0f64, prop::collection::vec(seg, 1..4), 0.5..3.0f64, 0.5..3.0f64).prop_map(|(heading, segs, w0, w1)| {
        let length: f64 = segs.iter().map(|s| s.1).sum();
        let mut b = TubeBuilder::new(Vec2::new(1.0, -2.0), heading);
        for (is_arc, len, radius, left) in segs {
            b = if is_arc {
                b.arc(len, if left { 1.0 } else { -1.0 } / radius)
            } else {
                b.straight(len)
            };
        }
        let width = WidthProfile::new(vec![(0.0, w0), (length, w1)]).unwrap();
        b.build(width).unwrap()
    })
}

/// `project(tube_point(l, side, ρ))` returns `(l, side, ρ)`.
pub fn projection_roundtrip(cases: u32) -> Result<(), String> {
    let strat = (random_tube(), 0.0..1.0f64, any::<bool>(), 0.0..0.95f64);
    finish(runner(cases).run(&strat, |(tube, u, positive, frac)| {
        let l = u * tube.total_length();
        let side = if positive { Side::Positive } else { Side::Negative };
        let p = tube.tube_point(l, side, frac).unwrap();
        let c = tube.project(&p);
        prop_assert!((c.arc_length - l).abs() <= 1e-9, "l {l} -> {}", c.arc_length);
        prop_assert!((c.radial_fraction - frac).abs() <= 1e-9, "fraction {frac} -> {}", c.radial_fraction);
        if frac > 1e-6 {
            prop_assert_eq!(c.side, side);
        }
        Ok(())
    }))
}

/// Radius rate is zero on the under-density branch and linear above it.
pub fn radius_rate_branches(cases: u32) -> Result<(), String> {
    let strat = (0.0..3.0f64, 0.0..3.0f64, 0.01..20.0f64);
    finish(runner(cases).run(&strat, |(rho_r, rho_star, k)| {
        let r = avoidance_radius_rate(rho_r, rho_star, k);
        prop_assert!(r >= 0.0);
        if rho_r <= rho_star {
            prop_assert_eq!(r, 0.0);
        } else {
            prop_assert!((r - k * (rho_r - rho_star)).abs() <= 1e-12 * k.max(1.0));
        }
        Ok(())
    }))
}

/// One synchronous step never shrinks an avoidance radius, never exceeds the
/// cap and never drops below `r_s`.
pub fn radius_monotone(cases: u32) -> Result<(), String> {
    let robot = (0.0..20.0f64, -2.5..2.5f64, 0.0..1.0f64);
    let strat = (prop::collection::vec(robot, 2..12), 0.01..1.0f64, 2.0..5.0f64);
    finish(runner(cases).run(&strat, |(robots, rho_star, speed)| {
        let params = SwarmParams::standard();
        let tube = VirtualTube::straight(30.0, 3.0).unwrap();
        let plan = PlanProfile::constant(30.0, 3, speed, rho_star);
        let source = ForwardSource::Planned(&plan);
        let states: Vec<RobotState> = robots
            .iter()
            .enumerate()
            .map(|(i, &(x, y, f))| RobotState::new(i, Vec2::new(x, y), params.r_a + f * (params.r_a_max() - params.r_a)))
            .collect();
        let world = WorldState::new(states, Mode::WithPlanning, &tube, &source).unwrap();
        let next = step(&world, &tube, &source, &params, 0.01, &mut ClampCounts::default()).unwrap();
        for (a, b) in world.robots.iter().zip(&next.robots) {
            prop_assert!(b.avoidance_radius >= a.avoidance_radius);
            prop_assert!(b.avoidance_radius <= params.r_a_max());
            prop_assert!(b.avoidance_radius >= params.r_s);
        }
        Ok(())
    }))
}

/// Sweep-based minimum distance equals the all-pairs minimum.
pub fn min_distance_oracle(cases: u32) -> Result<(), String> {
    let strat = prop::collection::vec(vec2(), 2..120);
    finish(runner(cases).run(&strat, |pts| {
        let mut brute = f64::INFINITY;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                brute = brute.min((pts[i] - pts[j]).norm());
            }
        }
        let fast = min_pairwise_distance(&pts).unwrap();
        prop_assert_eq!(fast, brute);
        Ok(())
    }))
}

pub type Check = (&'static str, fn(u32) -> Result<(), String>);

pub const ALL: [Check; 5] = [
    ("saturation idempotence and direction", saturation),
    ("projection roundtrip", projection_roundtrip),
    ("radius rate branches", radius_rate_branches),
    ("avoidance radius monotone", radius_monotone),
    ("min pairwise distance vs all pairs", min_distance_oracle),
];
