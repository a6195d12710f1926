//! Planning engine for navigation among movable obstacles.
//!
//! A disk robot must reach a goal region in a polygonal workspace where the
//! direct route is blocked by movable obstacles. The planner grows a tree over
//! world states (obstacle configuration + the robot's free-space component),
//! sampling which obstacle to relocate and where. Sampling can be biased
//! toward an advisor's recommendation; with the bias switched off the search
//! degenerates to a uniform random tree.
//!
//! Modules, bottom up:
//! - [`geometry`]: polygons, disk-inflated footprints, occupancy grids,
//!   connected-component labeling.
//! - [`world`]: scene description, world states, free-space queries.
//! - [`sampling`]: the biased node / obstacle / placement distributions.
//! - [`transit`]: placement validity, object carry paths, robot motion paths.
//! - [`advisor`]: obstacle recommendation sources (LLM endpoint, heuristics,
//!   scripted sequences).
//! - [`planner`]: the tree search itself, plan extraction, replay validation.
//! - [`baselines`]: uniform random tree, storage-room greedy search,
//!   advisor-only sequential planner.

pub mod advisor;
pub mod baselines;
pub mod geometry;
pub mod planner;
pub mod sampling;
pub mod transit;
pub mod world;
