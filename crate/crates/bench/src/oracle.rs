//! Exhaustive minimum-horizon oracle for small scenes.
//!
//! The oracle answers "how many relocations does this scene really need?"
//! by breadth-first search over world states, using exactly the same
//! placement-validity, carry, and hand-off predicates as the planner — but
//! trying *every* manipulable obstacle against *every* pose of a coarse
//! placement set, and branching over every component the robot could end up
//! in after a move. Because the search is exhaustive over that action set,
//! the depth of the first goal state is the true minimum horizon relative
//! to the placement set, independent of any sampling.
//!
//! The state space is exponential in the movable count, so a hard guard
//! refuses scenes with more than [`ORACLE_MAX_MOVABLES`] movables or more
//! than [`ORACLE_MAX_PLACEMENTS`] placement poses.

use namo_core::geometry::Pose2;
use namo_core::transit::{adjacent_components, carry_feasible, placement_valid};
use namo_core::world::{SceneError, SceneSpec, World, WorldConfig};
use std::collections::{HashSet, VecDeque};
use thiserror::Error;

pub const ORACLE_MAX_MOVABLES: usize = 5;
pub const ORACLE_MAX_PLACEMENTS: usize = 12;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("scene has {movables} movable obstacles; the exhaustive oracle accepts at most {ORACLE_MAX_MOVABLES}")]
    TooManyMovables { movables: usize },
    #[error("placement set has {placements} poses; the exhaustive oracle accepts at most {ORACLE_MAX_PLACEMENTS}")]
    TooManyPlacements { placements: usize },
    #[error(transparent)]
    Scene(#[from] SceneError),
}

/// One BFS state: exact obstacle poses plus the robot's free-space
/// component. Poses come from a finite set, so bit-exact keys dedupe
/// without tolerance bookkeeping.
type StateKey = (Vec<(u64, u64, u64, bool)>, u32);

fn key_of(config: &WorldConfig, component: u32) -> StateKey {
    let poses = (0..config.len())
        .map(|i| {
            let p = config.pose(i);
            (
                p.x.to_bits(),
                p.y.to_bits(),
                p.theta.to_bits(),
                config.is_removed(i),
            )
        })
        .collect();
    (poses, component)
}

/// Breadth-first minimum relocation count to reach the goal, where each
/// action relocates one currently manipulable obstacle to one pose of
/// `placements`. Returns `Ok(Some(0))` for a scene that starts solved and
/// `Ok(None)` when no sequence of at most `depth_cap` relocations reaches
/// the goal.
pub fn brute_force_min_horizon(
    scene: &SceneSpec,
    placements: &[Pose2],
    depth_cap: u32,
) -> Result<Option<u32>, OracleError> {
    let movables = scene.obstacles.iter().filter(|o| o.movable).count();
    if movables > ORACLE_MAX_MOVABLES {
        return Err(OracleError::TooManyMovables { movables });
    }
    if placements.len() > ORACLE_MAX_PLACEMENTS {
        return Err(OracleError::TooManyPlacements {
            placements: placements.len(),
        });
    }
    let world = World::new(scene.clone())?;
    let root = world.initial_state();
    if world.goal_reached(&root) {
        return Ok(Some(0));
    }
    let tolerance = world.tolerance();
    let movable_indices: Vec<usize> = scene
        .obstacles
        .iter()
        .enumerate()
        .filter(|(_, o)| o.movable)
        .map(|(i, _)| i)
        .collect();

    let mut seen: HashSet<StateKey> = HashSet::new();
    let mut queue: VecDeque<(WorldConfig, u32, u32)> = VecDeque::new();
    seen.insert(key_of(&root.config, root.component));
    queue.push_back((root.config, root.component, 0));

    while let Some((config, component, depth)) = queue.pop_front() {
        if depth >= depth_cap {
            continue;
        }
        let (grid, labeling) = world.free_space_of(&config);
        let manipulable = world.manipulable_set_with(&config, &grid, &labeling, component);
        for &index in &movable_indices {
            if !manipulable.contains(world.id_of(index)) {
                continue;
            }
            let from = config.pose(index);
            let lifted = world.grid_of(&config.with_removed(index));
            for &target in placements {
                if tolerance.poses_match(from, target) {
                    continue;
                }
                if !placement_valid(&world, &lifted, index, target) {
                    continue;
                }
                if carry_feasible(&world, &lifted, index, from, target).is_none() {
                    continue;
                }
                let next = config.with_pose(index, target);
                let (next_grid, next_labeling) = world.free_space_of(&next);
                // The hand-off could leave the robot in any component beside
                // the new footprint; branch over all of them so the search
                // stays exhaustive.
                for c in adjacent_components(&world, &next_grid, &next_labeling, index, target) {
                    if world.goal_reached_with(&next_labeling, c) {
                        return Ok(Some(depth + 1));
                    }
                    let key = key_of(&next, c);
                    if seen.insert(key) {
                        queue.push_back((next.clone(), c, depth + 1));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Flood-fill lower bound: the size of the smallest *subset of movables
/// whose outright deletion* connects the robot to the goal. Deleting an
/// obstacle is at least as helpful as relocating it (a relocation
/// re-occupies space somewhere), so this never exceeds the true minimum
/// horizon. Subsets are enumerated smallest-first, so the first hit is the
/// bound; the movable count must respect the same guard as the oracle.
pub fn subset_deletion_lower_bound(scene: &SceneSpec) -> Result<u32, OracleError> {
    let movable_indices: Vec<usize> = scene
        .obstacles
        .iter()
        .enumerate()
        .filter(|(_, o)| o.movable)
        .map(|(i, _)| i)
        .collect();
    if movable_indices.len() > ORACLE_MAX_MOVABLES {
        return Err(OracleError::TooManyMovables {
            movables: movable_indices.len(),
        });
    }
    let world = World::new(scene.clone())?;
    let root = world.initial_state();
    let n = movable_indices.len() as u32;
    for size in 0..=n {
        for mask in 0u32..(1 << n) {
            if mask.count_ones() != size {
                continue;
            }
            let mut config = root.config.clone();
            for (bit, &index) in movable_indices.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    config = config.with_removed(index);
                }
            }
            let (grid, labeling) = world.free_space_of(&config);
            let (ix, iy) = grid
                .cell_of(scene.robot_start())
                .expect("start inside workspace");
            if world.goal_reached_with(&labeling, labeling.label(ix, iy)) {
                return Ok(size);
            }
        }
    }
    // Even deleting every movable leaves the goal sealed by immovables.
    Ok(n + 1)
}
