//! The guided tree search over obstacle configurations.
//!
//! The search grows a tree whose nodes are world states — obstacle poses
//! plus the free-space component the robot occupies. Each iteration picks a
//! node (biased toward high scores by `p_rand`), picks an obstacle reachable
//! in that state (biased toward the advisor's recommendation by `p_obs`),
//! samples a placement, and admits the relocation if the placement, the
//! carry, and the hand-off all check out. A node's score counts how many
//! relocations on its root path moved the obstacle the advisor named, so
//! score-biased node selection keeps extending the advisor's line while the
//! uniform remainder mass keeps every other line alive — with both biases
//! strictly below one, any reachable state keeps nonzero sampling
//! probability, so the search finds a solution with probability approaching
//! one as iterations grow.
//!
//! Every random decision flows through one seeded stream in a fixed draw
//! order, making whole runs — including their iteration traces — exactly
//! reproducible from the seed. The advisor is queried at most once per node;
//! its cached reply is re-used (and re-drawn from, when it names several
//! candidates) on every expansion of that node.

use crate::advisor::{select_recommended, Advisor, Classification, PromptContext};
use crate::sampling::{
    child_score, sample_configuration, sample_node, sample_obstacle, NodeScore, SamplingParams,
    TopScoreSet,
};
use crate::transit::{
    adjacent_components, build_motion_path, try_relocation, ManipulationAction, MotionPath,
};
use crate::world::{ObstacleId, SceneSpec, World, WorldState};
use crate::{advisor::AdvisorResponse, geometry::Pose2};
use serde::{Deserialize, Serialize};
use std::time::{Duration, Instant};

/// When the search stops.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopMode {
    /// Return the first plan that reaches the goal.
    FirstFeasible,
    /// Spend the whole iteration budget, then return a plan of minimum
    /// length (earliest-found on ties).
    Exhaust,
}

/// One search-tree node.
#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub state: WorldState,
    /// Root has no parent; every other node's parent precedes it.
    pub parent: Option<usize>,
    /// The relocation that produced this node from its parent.
    pub action: Option<ManipulationAction>,
    pub depth: u32,
    /// Recommended relocations on the root path.
    pub score: NodeScore,
    /// True iff `action` moved the obstacle the advisor recommended.
    pub from_recommendation: bool,
    /// The advisor's reply for this node, filled on first expansion.
    pub advisor: Option<AdvisorResponse>,
}

/// The grown search tree. Parents always precede children, so the structure
/// is acyclic by construction.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PlanTree {
    pub nodes: Vec<Node>,
}

impl PlanTree {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node ids from the root to `id` inclusive.
    pub fn root_path(&self, id: usize) -> Vec<usize> {
        let mut path = vec![id];
        let mut node = id;
        while let Some(parent) = self.nodes[node].parent {
            path.push(parent);
            node = parent;
        }
        path.reverse();
        path
    }

    /// The actions along the root path to `id`, in execution order.
    pub fn actions_to(&self, id: usize) -> Vec<ManipulationAction> {
        self.root_path(id)
            .into_iter()
            .filter_map(|n| self.nodes[n].action)
            .collect()
    }
}

/// Why an iteration added no node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RejectKind {
    /// The selected node's state offers nothing to grasp.
    NoManipulable,
    /// The sampled placement matched the obstacle's current pose.
    DegenerateTarget,
    /// Placement, carry, or hand-off failed.
    Infeasible,
}

/// What one iteration decided — enough to compare two runs move for move.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub iteration: u32,
    /// The node selected for expansion.
    pub node: usize,
    pub obstacle: Option<ObstacleId>,
    pub target: Option<Pose2>,
    pub outcome: TraceOutcome,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraceOutcome {
    Added { node: usize, goal: bool },
    Rejected(RejectKind),
}

/// Everything a run produced.
#[derive(Debug, Clone)]
pub struct PlanResult {
    pub success: bool,
    /// The relocation sequence of the returned plan (empty when the start
    /// already satisfies the goal, or on failure).
    pub plan: Vec<ManipulationAction>,
    /// Plan length; `None` on failure.
    pub horizon: Option<u32>,
    /// Iterations actually executed.
    pub iterations: u32,
    pub tree_size: usize,
    pub advisor_queries: u32,
    pub format_errors: u32,
    pub content_errors: u32,
    /// The robot's motion track for the returned plan.
    pub motion: Option<MotionPath>,
    pub tree: PlanTree,
    pub trace: Vec<TraceRecord>,
    /// Tree index of the goal node the plan ends at.
    pub goal_node: Option<usize>,
    pub wall_time: Duration,
}

impl PlanResult {
    /// Equality up to wall time — two runs of the same seed and inputs must
    /// be equivalent even though their clocks differ.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.success == other.success
            && self.plan == other.plan
            && self.horizon == other.horizon
            && self.iterations == other.iterations
            && self.tree_size == other.tree_size
            && self.advisor_queries == other.advisor_queries
            && self.format_errors == other.format_errors
            && self.content_errors == other.content_errors
            && self.motion == other.motion
            && self.tree == other.tree
            && self.trace == other.trace
            && self.goal_node == other.goal_node
    }

    /// Serializable run report.
    pub fn report(&self, scene: &SceneSpec, method: &str) -> PlanReport {
        PlanReport {
            scene: scene.clone(),
            method: method.to_string(),
            steps: self.plan.clone(),
            horizon: self.horizon,
            success: self.success,
            motion: self
                .motion
                .as_ref()
                .map(|m| m.points().iter().map(|p| [p.x, p.y]).collect())
                .unwrap_or_default(),
            stats: ReportStats {
                iterations: self.iterations,
                tree_size: self.tree_size,
                advisor_queries: self.advisor_queries,
                format_errors: self.format_errors,
                content_errors: self.content_errors,
                time_s: self.wall_time.as_secs_f64(),
            },
        }
    }
}

/// The on-disk result format written by the command-line tools.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanReport {
    pub scene: SceneSpec,
    pub method: String,
    pub steps: Vec<ManipulationAction>,
    pub horizon: Option<u32>,
    pub success: bool,
    pub motion: Vec<[f64; 2]>,
    pub stats: ReportStats,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportStats {
    pub iterations: u32,
    pub tree_size: usize,
    pub advisor_queries: u32,
    pub format_errors: u32,
    pub content_errors: u32,
    pub time_s: f64,
}

/// Runs the guided search against `world` for at most `max_iterations`
/// expansions. See the module docs for the loop; the advisor may be the
/// no-op advisor, in which case obstacle selection stays uniform throughout.
pub fn plan(
    world: &World,
    advisor: &mut dyn Advisor,
    params: &SamplingParams,
    max_iterations: u32,
    stop: StopMode,
) -> PlanResult {
    params.validate().expect("sampling parameters validated");
    let started = Instant::now();
    let mut rng = params.rng();
    let root = world.initial_state();
    let root_is_goal = world.goal_reached(&root);
    let mut tree = PlanTree {
        nodes: vec![Node {
            state: root,
            parent: None,
            action: None,
            depth: 0,
            score: 0,
            from_recommendation: false,
            advisor: None,
        }],
    };
    let mut top = TopScoreSet::root();
    let mut trace = Vec::new();
    let mut goals: Vec<usize> = Vec::new();
    let mut counters = Counters::default();
    let mut iterations = 0;

    if !root_is_goal {
        for m in 1..=max_iterations {
            iterations = m;
            let node_id = sample_node(tree.len(), &top, params.p_rand, &mut rng)
                .expect("tree holds at least the root");
            let outcome = expand(
                world,
                &mut tree,
                node_id,
                advisor,
                params,
                &mut rng,
                &mut counters,
            );
            let mut reached_goal = false;
            let record = match outcome {
                Expansion::Added {
                    node,
                    obstacle,
                    target,
                } => {
                    top.observe(node, tree.nodes[node].score);
                    let goal = world.goal_reached(&tree.nodes[node].state);
                    if goal {
                        goals.push(node);
                        reached_goal = true;
                    }
                    TraceRecord {
                        iteration: m,
                        node: node_id,
                        obstacle: Some(obstacle),
                        target: Some(target),
                        outcome: TraceOutcome::Added { node, goal },
                    }
                }
                Expansion::Rejected {
                    kind,
                    obstacle,
                    target,
                } => TraceRecord {
                    iteration: m,
                    node: node_id,
                    obstacle,
                    target,
                    outcome: TraceOutcome::Rejected(kind),
                },
            };
            trace.push(record);
            if reached_goal && stop == StopMode::FirstFeasible {
                break;
            }
        }
    }

    // Pick the returned plan: the first goal node under first-feasible, the
    // shallowest (earliest on ties) under exhaust. Goal ids arrive in
    // insertion order, so a stable min by depth realizes both.
    let goal_node = if root_is_goal {
        Some(0)
    } else {
        goals
            .iter()
            .copied()
            .min_by_key(|&id| (tree.nodes[id].depth, id))
    };
    let plan_actions = goal_node
        .map(|id| tree.actions_to(id))
        .unwrap_or_default();
    let motion = goal_node.and_then(|_| build_motion_path(world, &plan_actions));
    PlanResult {
        success: goal_node.is_some(),
        horizon: goal_node.map(|id| tree.nodes[id].depth),
        plan: plan_actions,
        iterations,
        tree_size: tree.len(),
        advisor_queries: counters.queries,
        format_errors: counters.format_errors,
        content_errors: counters.content_errors,
        motion,
        tree,
        trace,
        goal_node,
        wall_time: started.elapsed(),
    }
}

#[derive(Default)]
struct Counters {
    queries: u32,
    format_errors: u32,
    content_errors: u32,
}

enum Expansion {
    Added {
        node: usize,
        obstacle: ObstacleId,
        target: Pose2,
    },
    Rejected {
        kind: RejectKind,
        obstacle: Option<ObstacleId>,
        target: Option<Pose2>,
    },
}

/// One expansion attempt of `node_id`, in the fixed draw order: advisor
/// re-selection (cached reply), obstacle, placement, then feasibility.
fn expand(
    world: &World,
    tree: &mut PlanTree,
    node_id: usize,
    advisor: &mut dyn Advisor,
    params: &SamplingParams,
    rng: &mut rand_chacha::ChaCha8Rng,
    counters: &mut Counters,
) -> Expansion {
    let state = tree.nodes[node_id].state.clone();
    let (grid, labeling) = world.free_space_of(&state.config);
    let manipulable =
        world.manipulable_set_with(&state.config, &grid, &labeling, state.component);
    if manipulable.is_empty() {
        return Expansion::Rejected {
            kind: RejectKind::NoManipulable,
            obstacle: None,
            target: None,
        };
    }
    if advisor.wants_queries() && tree.nodes[node_id].advisor.is_none() {
        let ctx = PromptContext::from_state(world, &state, params.k);
        let response = advisor.query(&ctx);
        counters.queries += 1;
        match response.classification {
            Classification::Ok => {}
            Classification::FormatError => counters.format_errors += 1,
            Classification::ContentError => counters.content_errors += 1,
        }
        tree.nodes[node_id].advisor = Some(response);
    }
    let recommendation = tree.nodes[node_id]
        .advisor
        .as_ref()
        .and_then(|r| select_recommended(r, rng));
    let obstacle = sample_obstacle(&manipulable, recommendation, params.p_obs, rng)
        .expect("manipulable set checked nonempty");
    let index = world.index_of(obstacle).expect("sampled from scene ids");
    let target = sample_configuration(world.scene().workspace, rng);
    if world.tolerance().poses_match(state.config.pose(index), target) {
        return Expansion::Rejected {
            kind: RejectKind::DegenerateTarget,
            obstacle: Some(obstacle),
            target: Some(target),
        };
    }
    let Some((next_state, _carry)) = try_relocation(world, &state, index, target, rng) else {
        return Expansion::Rejected {
            kind: RejectKind::Infeasible,
            obstacle: Some(obstacle),
            target: Some(target),
        };
    };
    let moved_recommended = recommendation == Some(obstacle);
    let parent = &tree.nodes[node_id];
    let node = Node {
        score: child_score(parent.score, moved_recommended),
        depth: parent.depth + 1,
        state: next_state,
        parent: Some(node_id),
        action: Some(ManipulationAction {
            obstacle,
            from: state.config.pose(index),
            to: target,
        }),
        from_recommendation: moved_recommended,
        advisor: None,
    };
    tree.nodes.push(node);
    Expansion::Added {
        node: tree.len() - 1,
        obstacle,
        target,
    }
}

/// Validates a finished plan against a fresh world: no degenerate stays, a
/// consistent pose chain, feasible placements and carries, reachable grasps,
/// and a final walk that ends inside the goal region. Storage actions (a
/// target outside the workspace) must connect to the workspace edge instead
/// of a placement.
pub fn replay_validate(world: &World, actions: &[ManipulationAction]) -> bool {
    let ws = world.scene().workspace;
    let tol = world.tolerance();
    if actions
        .iter()
        .any(|a| !a.is_removal(ws) && tol.poses_match(a.from, a.to))
    {
        return false;
    }
    build_motion_path(world, actions).is_some()
}

/// Re-checks one tree edge deterministically: the placement and carry must
/// be feasible from the parent state and the child's component must be one
/// of the placement's adjacent components (for the relocation family; the
/// planner never emits storage actions).
pub fn edge_valid(world: &World, parent: &WorldState, child: &WorldState) -> bool {
    let Some(index) = (0..parent.config.len()).find(|&i| {
        parent.config.is_removed(i) != child.config.is_removed(i)
            || parent.config.pose(i) != child.config.pose(i)
    }) else {
        return false;
    };
    let to = child.config.pose(index);
    let lifted = world.grid_of(&parent.config.with_removed(index));
    if !crate::transit::placement_valid(world, &lifted, index, to) {
        return false;
    }
    if crate::transit::carry_feasible(world, &lifted, index, parent.config.pose(index), to)
        .is_none()
    {
        return false;
    }
    let (grid, labeling) = world.free_space_of(&child.config);
    adjacent_components(world, &grid, &labeling, index, to).contains(&child.component)
}
