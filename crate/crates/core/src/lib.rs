//! Speed and density planning for speed-constrained robot swarms passing
//! through planar virtual tubes, with a closed-loop simulator.

// `!(x > 0.0)` style checks are used on purpose so NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod controller;
pub mod error;
pub mod geometry;
pub mod io;
pub mod planner;
mod quadrature;
pub mod scenario;
pub mod sim;
pub mod swarm;

pub use error::{Error, Result};
pub use geometry::{Side, TubeBuilder, TubeCoordinates, Vec2, VirtualTube, WidthProfile};
pub use planner::{plan, validate_plan, PlanOutcome, PlanProfile, PlannerConfig};
pub use swarm::{RobotState, SwarmParams};
pub use scenario::{builtin, load_scenario, ScenarioConfig};
pub use sim::{metrics, simulate, Mode, SimConfig, Summary};
