//! Reference methods the guided search is evaluated against.
//!
//! - [`random_tree`] — the guided search with every bias switched off: a
//!   uniform random tree. It is literally the same loop at `p_rand = p_obs
//!   = 0` with no advisor, so the two produce identical runs seed for seed.
//! - [`namo_sa`] — a deterministic greedy simulated-annealing-style sweep:
//!   repeatedly absorb the cheapest reachable obstacle into external
//!   storage (carry it to the workspace edge, where it leaves the scene)
//!   until the goal opens up. Obstacles never come back, so its horizon is
//!   the number of absorptions.
//! - [`llm_only`] — no search at all: do whatever the advisor says, one
//!   obstacle per round, with a bounded number of advisor queries and a
//!   bounded number of placement attempts per recommendation.

use crate::advisor::{select_recommended, Advisor, Classification, NoAdvisor, PromptContext};
use crate::geometry::Pose2;
use crate::planner::{plan, PlanResult, PlanTree, StopMode};
use crate::sampling::{sample_configuration, SamplingParams};
use crate::transit::{
    bfs_distances, build_motion_path, carry_to_boundary, disengage_cells, try_relocation,
    ManipulationAction,
};
use crate::world::{World, WorldConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

/// Placement attempts the advisor-only method makes per recommendation.
pub const PLACEMENT_RETRIES: u32 = 50;

/// The unbiased random tree: the guided search with zero bias and no
/// advisor. Exists so benchmarks can name it as a method of its own.
pub fn random_tree(world: &World, seed: u64, max_iterations: u32, stop: StopMode) -> PlanResult {
    let params = SamplingParams::uniform(seed);
    plan(world, &mut NoAdvisor, &params, max_iterations, stop)
}

/// Deterministic greedy absorption. Each round scores every reachable
/// obstacle by an optimistic transit estimate — grid distance from the
/// robot to the obstacle plus obstacle to the goal, measured as if all
/// movable obstacles were traversable — and absorbs the cheapest one whose
/// carry to the workspace edge is actually feasible (ties to the lowest
/// id). Rounds repeat until the goal opens or nothing absorbable remains.
/// No randomness anywhere, so every run of a scene is identical.
pub fn namo_sa(world: &World) -> PlanResult {
    let started = Instant::now();
    let scene = world.scene();
    let mut config = WorldConfig::initial(scene);
    // Optimistic distance field substrate: boundary and immovable obstacles
    // only, every movable treated as passable. Constant across rounds.
    let all_lifted = (0..config.len()).fold(config.clone(), |c, i| {
        if scene.obstacles[i].movable {
            c.with_removed(i)
        } else {
            c
        }
    });
    let base = world.grid_of(&all_lifted);
    let passable: Vec<bool> = base.occupied_cells().iter().map(|&o| !o).collect();
    let width = base.width();
    let goal_dist = bfs_distances(width, &passable, world.goal_cells());

    let (grid, labeling) = world.free_space_of(&config);
    let start = scene.robot_start();
    let (ix, iy) = grid.cell_of(start).expect("validated at construction");
    let mut robot_cell = grid.index(ix, iy) as u32;
    let mut component = labeling.label_at(robot_cell as usize);
    let mut actions: Vec<ManipulationAction> = Vec::new();
    let mut rounds = 0u32;

    let success = loop {
        let (grid, labeling) = world.free_space_of(&config);
        if world.goal_reached_with(&labeling, component) {
            break true;
        }
        let manipulable = world.manipulable_set_with(&config, &grid, &labeling, component);
        if manipulable.is_empty() {
            break false;
        }
        rounds += 1;
        let robot_dist = bfs_distances(width, &passable, &[robot_cell]);
        let mut ranked: Vec<(u64, u32, usize)> = manipulable
            .ids()
            .iter()
            .filter_map(|&id| {
                let index = world.index_of(id).expect("manipulable ids exist");
                let cells = world.footprint_cells(index, config.pose(index));
                let near = |dist: &[u32]| {
                    cells
                        .iter()
                        .map(|&c| dist[c as usize])
                        .min()
                        .unwrap_or(u32::MAX)
                };
                let (r, g) = (near(&robot_dist), near(&goal_dist));
                if r == u32::MAX || g == u32::MAX {
                    return None;
                }
                Some((r as u64 + g as u64, id, index))
            })
            .collect();
        ranked.sort_unstable();
        let mut absorbed = false;
        for (_, id, index) in ranked {
            let lifted = world.grid_of(&config.with_removed(index));
            let from = config.pose(index);
            let Some(carry) = carry_to_boundary(world, &lifted, index, from) else {
                continue;
            };
            let last = *carry.poses.last().expect("carry has poses");
            actions.push(ManipulationAction {
                obstacle: id,
                from,
                to: storage_pose(world, index, last),
            });
            config = config.with_removed(index);
            let (next_grid, next_labeling) = world.free_space_of(&config);
            let next_component = world.lifted_component(&labeling, component, &next_labeling);
            // The robot lets go beside the vacated exit footprint; prefer
            // the cell inside its own (grown) component.
            let candidates =
                disengage_cells(world, &next_grid, &next_labeling, index, &carry, true);
            robot_cell = candidates
                .iter()
                .copied()
                .find(|&c| next_labeling.label_at(c as usize) == next_component)
                .or(candidates.first().copied())
                .unwrap_or(robot_cell);
            component = next_component;
            absorbed = true;
            break;
        }
        if !absorbed {
            break false;
        }
    };
    let motion = success
        .then(|| build_motion_path(world, &actions))
        .flatten();
    PlanResult {
        success,
        horizon: success.then(|| actions.len() as u32),
        plan: actions,
        iterations: rounds,
        tree_size: 0,
        advisor_queries: 0,
        format_errors: 0,
        content_errors: 0,
        motion,
        tree: PlanTree::default(),
        trace: Vec::new(),
        goal_node: None,
        wall_time: started.elapsed(),
    }
}

/// A storage pose for an obstacle whose carry ended at `last`: the same
/// heading, displaced past the nearest workspace edge far enough that the
/// position is unambiguously outside.
fn storage_pose(world: &World, index: usize, last: Pose2) -> Pose2 {
    let ws = world.scene().workspace;
    let clearance = world.scene().obstacles[index].polygon.circumradius()
        + world.scene().robot.radius
        + world.resolution();
    let (x, y) = (last.x, last.y);
    let sides = [
        (x - ws.xmin, (ws.xmin - clearance, y)),
        (ws.xmax - x, (ws.xmax + clearance, y)),
        (y - ws.ymin, (x, ws.ymin - clearance)),
        (ws.ymax - y, (x, ws.ymax + clearance)),
    ];
    let (_, (sx, sy)) = sides
        .into_iter()
        .min_by(|a, b| a.0.partial_cmp(&b.0).expect("finite distances"))
        .expect("four sides");
    Pose2::new(sx, sy, last.theta)
}

/// Advisor-only control: no tree, no bias parameters — each round queries
/// the advisor (with `k = 1`) for the one obstacle to move, then tries up
/// to [`PLACEMENT_RETRIES`] sampled placements of it, applying the first
/// whose placement, carry, and hand-off all validate. A round whose query
/// fails or whose placements all miss is simply lost. The run fails once
/// `query_budget` queries have been spent without reaching the goal.
pub fn llm_only(
    world: &World,
    advisor: &mut dyn Advisor,
    seed: u64,
    query_budget: u32,
) -> PlanResult {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = world.initial_state();
    let mut actions: Vec<ManipulationAction> = Vec::new();
    let mut queries = 0u32;
    let mut format_errors = 0u32;
    let mut content_errors = 0u32;
    let mut rounds = 0u32;
    let tolerance = world.tolerance();
    let workspace = world.scene().workspace;

    let success = loop {
        if world.goal_reached(&state) {
            break true;
        }
        if queries >= query_budget {
            break false;
        }
        rounds += 1;
        let ctx = PromptContext::from_state(world, &state, 1);
        let response = advisor.query(&ctx);
        queries += 1;
        match response.classification {
            Classification::Ok => {}
            Classification::FormatError => {
                format_errors += 1;
                continue;
            }
            Classification::ContentError => {
                content_errors += 1;
                continue;
            }
        }
        let Some(obstacle) = select_recommended(&response, &mut rng) else {
            continue;
        };
        let Ok(index) = world.index_of(obstacle) else {
            continue;
        };
        for _ in 0..PLACEMENT_RETRIES {
            let target = sample_configuration(workspace, &mut rng);
            if tolerance.poses_match(state.config.pose(index), target) {
                continue;
            }
            if let Some((next, _)) = try_relocation(world, &state, index, target, &mut rng) {
                actions.push(ManipulationAction {
                    obstacle,
                    from: state.config.pose(index),
                    to: target,
                });
                state = next;
                break;
            }
        }
    };
    let motion = success
        .then(|| build_motion_path(world, &actions))
        .flatten();
    PlanResult {
        success,
        horizon: success.then(|| actions.len() as u32),
        plan: actions,
        iterations: rounds,
        tree_size: 0,
        advisor_queries: queries,
        format_errors,
        content_errors,
        motion,
        tree: PlanTree::default(),
        trace: Vec::new(),
        goal_node: None,
        wall_time: started.elapsed(),
    }
}
