//! Deterministic benchmark scene generators.
//!
//! Three archetypes cover the evaluation suite. Each captures a structural
//! difficulty rather than fixed coordinates:
//!
//! - **pocket goal**: the goal sits east of a chain of walled gates, each
//!   sealed by exactly one movable plug; the remaining movables are clutter
//!   jittered around the west room. The minimum horizon equals the gate
//!   count — every plug seals its gate alone, and the gates open only in
//!   west-to-east order.
//! - **deep clutter**: the same gate chain with clutter on both sides of it,
//!   so the approach and the goal side are crowded.
//! - **blocked manipulable**: a key obstacle plugs the goal doorway at the
//!   end of a narrow channel and two blockers queue ahead of it, so the key
//!   has no valid relocation until both are moved; a single-file queue of
//!   movables jams the only storage portal, forcing any absorb-to-boundary
//!   strategy to clear all of them while an in-room planner needs just
//!   three moves.
//!
//! All scenes share one lattice convention: grid resolution 0.25, robot
//! radius 0.5, and every polygon edge and pose on the 0.25 grid. Cell
//! centers then sit 0.125 off every edge, so center-to-edge distances are
//! never exactly the inflation radius and occupancy never hinges on a
//! floating-point tie.

use namo_core::geometry::{Bounds, Polygon, Pose2};
use namo_core::world::{GoalSpec, ObstacleId, ObstacleSpec, RobotSpec, SceneSpec, World};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Which structural family to generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseName {
    PocketGoal,
    DeepClutter,
    BlockedManipulable,
}

impl CaseName {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseName::PocketGoal => "pocket_goal",
            CaseName::DeepClutter => "deep_clutter",
            CaseName::BlockedManipulable => "blocked_manipulable",
        }
    }
}

impl std::str::FromStr for CaseName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace('-', "_").as_str() {
            "pocket_goal" => Ok(CaseName::PocketGoal),
            "deep_clutter" => Ok(CaseName::DeepClutter),
            "blocked_manipulable" => Ok(CaseName::BlockedManipulable),
            other => Err(format!("unknown archetype `{other}`")),
        }
    }
}

/// A generation request: family, movable-obstacle count, intended minimum
/// horizon, and the seed that fixes all placement jitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CaseArchetype {
    pub name: CaseName,
    pub n: usize,
    pub h_min: u32,
    pub seed: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenerationError {
    #[error("movable count {n} is below the minimum horizon {h_min}")]
    NotEnoughObstacles { n: usize, h_min: u32 },
    #[error("movable count {n} exceeds this archetype's capacity {capacity}")]
    TooManyObstacles { n: usize, capacity: usize },
    #[error("{name} supports minimum horizons {supported}, got {h_min}")]
    UnsupportedHorizon {
        name: &'static str,
        supported: &'static str,
        h_min: u32,
    },
}

/// A generated scene plus the metadata the harness needs: the verified
/// minimum horizon, the obstacles an optimal plan must touch (in dependency
/// order), and a coarse set of relocation targets small enough for the
/// exhaustive oracle.
#[derive(Debug, Clone)]
pub struct GeneratedScene {
    pub scene: SceneSpec,
    pub h_min: u32,
    pub key_obstacles: Vec<ObstacleId>,
    pub oracle_placements: Vec<Pose2>,
    pub label: String,
}

const RESOLUTION: f64 = 0.25;
const ROBOT_RADIUS: f64 = 0.5;
/// Jitter offsets stay on the 0.25 lattice so the no-knife-edge convention
/// survives randomization.
const JITTER: [f64; 3] = [-0.25, 0.0, 0.25];

/// First gate's wall x; later gates step east by [`GATE_PITCH`].
const GATE_X0: f64 = 11.0;
const GATE_PITCH: f64 = 2.5;
const MAX_GATES: u32 = 3;

fn unit_square() -> Polygon {
    Polygon::rectangle(-0.5, -0.5, 0.5, 0.5).expect("static rectangle")
}

fn wall(id: ObstacleId, x0: f64, y0: f64, x1: f64, y1: f64) -> ObstacleSpec {
    ObstacleSpec {
        id,
        polygon: Polygon::rectangle(x0, y0, x1, y1).expect("static rectangle"),
        pose: Pose2::new(0.0, 0.0, 0.0),
        movable: false,
    }
}

fn movable_square(id: ObstacleId, x: f64, y: f64) -> ObstacleSpec {
    ObstacleSpec {
        id,
        polygon: unit_square(),
        pose: Pose2::new(x, y, 0.0),
        movable: true,
    }
}

/// Generates one scene per the archetype. Same archetype (seed included)
/// always yields a byte-identical scene document.
pub fn generate_scene(archetype: &CaseArchetype) -> Result<GeneratedScene, GenerationError> {
    let generated = match archetype.name {
        CaseName::PocketGoal => gated_scene(archetype, false)?,
        CaseName::DeepClutter => gated_scene(archetype, true)?,
        CaseName::BlockedManipulable => blocked_scene(archetype)?,
    };
    verify_structure(&generated);
    Ok(generated)
}

/// The pocket-goal / deep-clutter skeleton: a 20x20 room, a west-to-east
/// lane at mid height kept free of clutter, `h_min` gates across the lane
/// each sealed by a movable plug, and jittered movable clutter elsewhere.
fn gated_scene(archetype: &CaseArchetype, east_clutter: bool) -> Result<GeneratedScene, GenerationError> {
    let &CaseArchetype { n, h_min, seed, .. } = archetype;
    if (n as u64) < h_min as u64 {
        return Err(GenerationError::NotEnoughObstacles { n, h_min });
    }
    if h_min > MAX_GATES {
        return Err(GenerationError::UnsupportedHorizon {
            name: archetype.name.as_str(),
            supported: "0..=3",
            h_min,
        });
    }

    let mut slots = clutter_slots(h_min, east_clutter);
    let n_clutter = n - h_min as usize;
    if n_clutter > slots.len() {
        return Err(GenerationError::TooManyObstacles {
            n,
            capacity: slots.len() + h_min as usize,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    slots.shuffle(&mut rng);

    let mut obstacles = Vec::new();
    // Plugs first: ids 1..=h_min in west-to-east gate order. Each plug's
    // bottom/top polygon edges sit exactly one robot diameter inside the
    // gate's wall gap, which makes its footprint rows adjacent to the wall
    // footprints: the gate is sealed, yet the footprints never overlap, so
    // the plug stays graspable.
    for i in 0..h_min {
        let g = GATE_X0 + GATE_PITCH * i as f64;
        obstacles.push(movable_square(i + 1, g + 0.25, 10.0));
    }
    // Clutter: ids h_min+1..=n on jittered lattice slots.
    for (k, &(sx, sy)) in slots.iter().take(n_clutter).enumerate() {
        let dx = JITTER[rng.gen_range(0..JITTER.len())];
        let dy = JITTER[rng.gen_range(0..JITTER.len())];
        obstacles.push(movable_square(h_min + 1 + k as u32, sx + dx, sy + dy));
    }
    // Gate walls: immovable bars above and below each doorway.
    let mut next_id = n as u32 + 1;
    for i in 0..h_min {
        let g = GATE_X0 + GATE_PITCH * i as f64;
        obstacles.push(wall(next_id, g, 0.0, g + 0.5, 8.5));
        obstacles.push(wall(next_id + 1, g, 11.5, g + 0.5, 20.0));
        next_id += 2;
    }

    let scene = SceneSpec {
        workspace: Bounds::new(0.0, 0.0, 20.0, 20.0),
        robot: RobotSpec {
            x: 1.0,
            y: 1.0,
            radius: ROBOT_RADIUS,
        },
        goal: GoalSpec {
            polygon: Polygon::rectangle(18.0, 9.25, 19.5, 10.75).expect("static rectangle"),
        },
        obstacles,
        grid_resolution: Some(RESOLUTION),
    };
    Ok(GeneratedScene {
        scene,
        h_min,
        key_obstacles: (1..=h_min).collect(),
        oracle_placements: vec![
            Pose2::new(3.0, 10.0, 0.0),
            Pose2::new(5.5, 10.0, 0.0),
            Pose2::new(8.0, 10.0, 0.0),
        ],
        label: format!(
            "{}-n{}-h{}-s{}",
            archetype.name.as_str(),
            n,
            h_min,
            seed
        ),
    })
}

/// Clutter slot lattice. Slot pitch 2.5 with ±0.25 jitter keeps pieces at
/// center distance ≥ 2.0, so inflated footprints never overlap (pickups
/// stay valid) even when they touch. Slots keep |y - 10| ≥ 2.25 so the
/// mid-height lane the plugs travel stays clear, and the slot nearest the
/// robot start is dropped so the start cell is never swallowed.
fn clutter_slots(h_min: u32, east_clutter: bool) -> Vec<(f64, f64)> {
    let ys = [2.25, 4.75, 7.25, 12.75, 15.25, 17.75];
    let mut slots = Vec::new();
    for &x in &[1.75, 4.25, 6.75, 9.25] {
        for &y in &ys {
            if x == 1.75 && y == 2.25 {
                continue; // robot start corner
            }
            slots.push((x, y));
        }
    }
    if east_clutter {
        // Columns east of the last gate, clear of the gate wall and of the
        // goal region's columns.
        let last_gate = GATE_X0 + GATE_PITCH * h_min.saturating_sub(1) as f64;
        let mut x = last_gate + 2.5;
        while x <= 17.5 {
            for &y in &ys {
                slots.push((x, y));
            }
            x += 2.5;
        }
    }
    slots
}

/// The blocked-manipulable arena: a rimmed 20x20 room whose goal doorway
/// sits at the east end of a one-footprint-tall channel. The key plugs the
/// doorway and two blockers queue in the channel ahead of it, so exactly
/// three relocations open the goal. The room's only storage exit is a south
/// portal jammed by a single-file queue of further movables, so a strategy
/// restricted to absorbing obstacles out of the workspace must clear every
/// one of them, bottom-up, before the channel trio can leave.
fn blocked_scene(archetype: &CaseArchetype) -> Result<GeneratedScene, GenerationError> {
    let &CaseArchetype { n, h_min, seed, .. } = archetype;
    if h_min != 3 {
        return Err(GenerationError::UnsupportedHorizon {
            name: archetype.name.as_str(),
            supported: "exactly 3 (two blockers, then the key)",
            h_min,
        });
    }
    if n < 3 {
        return Err(GenerationError::NotEnoughObstacles { n, h_min });
    }
    let queue_len = n - 3;
    const QUEUE_CAP: usize = 8;
    if queue_len > QUEUE_CAP {
        return Err(GenerationError::TooManyObstacles {
            n,
            capacity: 3 + QUEUE_CAP,
        });
    }

    // The seed is accepted for interface uniformity but placements are
    // fully pinned: every coordinate here is load-bearing for the pin and
    // jam arguments, so there is nothing safe to jitter.
    let _ = ChaCha8Rng::seed_from_u64(seed);

    let mut obstacles = Vec::new();
    // Key (id 1) plugs the goal doorway at the east end of the channel.
    obstacles.push(movable_square(1, 18.0, 10.5));
    // Blockers (ids 2, 3) stand in series inside the channel, west of the
    // key. The channel's free interior is exactly one footprint tall, so
    // pieces inside it can only slide along it and never pass each other:
    // the key stays pinned until both blockers have left the channel.
    obstacles.push(movable_square(2, 12.0, 10.5));
    obstacles.push(movable_square(3, 14.5, 10.5));
    // Portal queue (ids 4..): stacked single-file over the south portal,
    // pairwise separated, the lowest already at the storage margin. The
    // portal's free span is 16 columns and every footprint is 8 columns
    // wide, so while any queue piece stands there the side lanes are 4
    // columns each and no other piece fits through — absorb-to-boundary
    // must clear the queue bottom-up before anything else can leave.
    for k in 0..queue_len {
        obstacles.push(movable_square(4 + k as u32, 5.5, 1.0 + 2.25 * k as f64));
    }
    let w0 = n as u32 + 1;
    // Rim walls leave a single south portal at x in (3, 8).
    obstacles.push(wall(w0, 0.0, 19.5, 20.0, 20.0)); // north rim
    obstacles.push(wall(w0 + 1, 0.0, 0.0, 0.5, 19.5)); // west rim
    obstacles.push(wall(w0 + 2, 19.5, 0.0, 20.0, 19.5)); // east rim
    obstacles.push(wall(w0 + 3, 0.0, 0.0, 3.0, 0.5)); // south rim, west of portal
    obstacles.push(wall(w0 + 4, 8.0, 0.0, 20.0, 0.5)); // south rim, east of portal
    // Channel slabs: a corridor at mid height whose interior is exactly the
    // key's footprint rows, opening into the room at its west mouth.
    obstacles.push(wall(w0 + 5, 10.0, 8.5, 18.25, 9.0));
    obstacles.push(wall(w0 + 6, 10.0, 12.0, 18.25, 12.5));
    // Pocket walls around the goal doorway; the pocket behind it is one
    // free column wide, too narrow for any movable, so the key cannot
    // retreat into it, and the channel is the only approach to the goal.
    obstacles.push(wall(w0 + 7, 17.75, 0.0, 18.25, 9.0));
    obstacles.push(wall(w0 + 8, 17.75, 12.0, 18.25, 19.5));

    let scene = SceneSpec {
        workspace: Bounds::new(0.0, 0.0, 20.0, 20.0),
        robot: RobotSpec {
            x: 2.0,
            y: 18.0,
            radius: ROBOT_RADIUS,
        },
        goal: GoalSpec {
            polygon: Polygon::rectangle(18.5, 9.5, 19.25, 11.5).expect("static rectangle"),
        },
        obstacles,
        grid_resolution: Some(RESOLUTION),
    };
    Ok(GeneratedScene {
        scene,
        h_min: 3,
        key_obstacles: vec![2, 3, 1],
        oracle_placements: vec![
            Pose2::new(3.0, 10.5, 0.0),
            Pose2::new(3.0, 6.0, 0.0),
            Pose2::new(3.0, 14.5, 0.0),
            Pose2::new(6.0, 14.5, 0.0),
        ],
        label: format!("{}-n{}-h3-s{}", archetype.name.as_str(), n, seed),
    })
}

/// Always-on structural self-checks: the scene validates, the start cell is
/// free, and the goal is unreachable exactly when the horizon is positive
/// but opens once every key obstacle is gone. A failure here is a generator
/// bug, never a caller error.
fn verify_structure(generated: &GeneratedScene) {
    let world = World::new(generated.scene.clone()).expect("generated scene must validate");
    let state = world.initial_state();
    if generated.h_min == 0 {
        assert!(
            world.goal_reached(&state),
            "zero-horizon scene must start solved: {}",
            generated.label
        );
        return;
    }
    assert!(
        !world.goal_reached(&state),
        "positive-horizon scene must start unsolved: {}",
        generated.label
    );
    let mut config = state.config.clone();
    for &id in &generated.key_obstacles {
        let index = world.index_of(id).expect("key obstacle exists");
        config = config.with_removed(index);
    }
    let (grid, labeling) = world.free_space_of(&config);
    let (ix, iy) = grid
        .cell_of(generated.scene.robot_start())
        .expect("start inside workspace");
    let component = labeling.label(ix, iy);
    assert!(
        world.goal_reached_with(&labeling, component),
        "removing the key obstacles must open the goal: {}",
        generated.label
    );
}
