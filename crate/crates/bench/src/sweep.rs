//! Parallel benchmark sweeps: every (scene, method, seed) combination runs
//! once, results come back in a deterministic order regardless of thread
//! count, and every emitted plan is re-validated by replay before it may be
//! reported successful.

use namo_core::advisor::{Advisor, LlmAdvisor, NearestGoalAdvisor, NoAdvisor, ScriptedAdvisor};
use namo_core::baselines::{llm_only, namo_sa, random_tree};
use namo_core::planner::{plan, replay_validate, PlanResult, StopMode};
use namo_core::sampling::SamplingParams;
use namo_core::world::{ObstacleId, SceneSpec, World};
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};

/// The fixed result-table schema, in column order.
pub const CSV_COLUMNS: [&str; 11] = [
    "scene",
    "method",
    "seed",
    "success",
    "time_s",
    "tree_size",
    "horizon",
    "iterations",
    "advisor_queries",
    "format_errors",
    "content_errors",
];

/// One row of the result table.
#[derive(Debug, Clone, Serialize)]
pub struct RunMetrics {
    pub scene: String,
    pub method: String,
    pub seed: u64,
    pub success: bool,
    pub time_s: f64,
    pub tree_size: usize,
    pub horizon: Option<u32>,
    pub iterations: u32,
    pub advisor_queries: u32,
    pub format_errors: u32,
    pub content_errors: u32,
}

/// A row plus the full planner output behind it. `result` is `None` when
/// the worker panicked; `note` explains failures that were forced by the
/// harness (panics, plans that failed replay validation).
#[derive(Debug)]
pub struct RunRecord {
    pub metrics: RunMetrics,
    pub result: Option<PlanResult>,
    pub note: Option<String>,
}

/// How to build the recommendation source for one run. Advisors are
/// stateful, so every run constructs a fresh one.
#[derive(Debug, Clone)]
pub enum AdvisorSpec {
    /// No queries; obstacle selection stays uniform.
    None,
    /// Deterministic heuristic: the manipulable obstacle nearest the goal.
    NearestGoal,
    /// Fixed response cycle, given as obstacle-id lists.
    Scripted(Vec<Vec<ObstacleId>>),
    /// Live chat-completion endpoint (bearer token from the environment).
    Llm { endpoint: String, model: String },
}

impl AdvisorSpec {
    pub fn build(&self) -> Box<dyn Advisor> {
        match self {
            AdvisorSpec::None => Box::new(NoAdvisor),
            AdvisorSpec::NearestGoal => Box::new(NearestGoalAdvisor),
            AdvisorSpec::Scripted(responses) => Box::new(ScriptedAdvisor::new(responses.clone())),
            AdvisorSpec::Llm { endpoint, model } => Box::new(LlmAdvisor::new(endpoint, model)),
        }
    }

    /// True when runs with this advisor call a paid external endpoint.
    pub fn is_external(&self) -> bool {
        matches!(self, AdvisorSpec::Llm { .. })
    }
}

/// One benchmark method: the guided tree search, its unbiased twin, the
/// greedy absorption baseline, or the advisor-only sequential baseline.
#[derive(Debug, Clone)]
pub enum MethodSpec {
    NamoLlm {
        p_rand: f64,
        p_obs: f64,
        k: usize,
        advisor: AdvisorSpec,
    },
    RandomTree,
    NamoSa,
    LlmOnly {
        advisor: AdvisorSpec,
        query_budget: u32,
    },
}

impl MethodSpec {
    pub fn label(&self) -> &'static str {
        match self {
            MethodSpec::NamoLlm { .. } => "namo-llm",
            MethodSpec::RandomTree => "random-tree",
            MethodSpec::NamoSa => "namo-sa",
            MethodSpec::LlmOnly { .. } => "llm-only",
        }
    }

    pub fn advisor(&self) -> Option<&AdvisorSpec> {
        match self {
            MethodSpec::NamoLlm { advisor, .. } | MethodSpec::LlmOnly { advisor, .. } => {
                Some(advisor)
            }
            _ => None,
        }
    }
}

/// A named scene in a sweep; the name becomes the `scene` column.
#[derive(Debug, Clone)]
pub struct SweepScene {
    pub name: String,
    pub scene: SceneSpec,
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub scenes: Vec<SweepScene>,
    pub methods: Vec<MethodSpec>,
    pub seeds: Vec<u64>,
    pub max_iterations: u32,
    pub stop: StopMode,
}

impl SweepSpec {
    pub fn total_runs(&self) -> usize {
        self.scenes.len() * self.methods.len() * self.seeds.len()
    }
}

/// Runs the full cross product. The output always holds exactly
/// `spec.total_runs()` records, ordered by (scene, method, seed) in input
/// order; worker panics become failure rows instead of killing the sweep,
/// and a returned plan that fails replay validation is downgraded to a
/// failure row with a note.
pub fn run_sweep(spec: &SweepSpec) -> Vec<RunRecord> {
    let worlds: Vec<World> = spec
        .scenes
        .iter()
        .map(|s| World::new(s.scene.clone()).expect("sweep scenes must validate"))
        .collect();
    let jobs: Vec<(usize, usize, u64)> = spec
        .scenes
        .iter()
        .enumerate()
        .flat_map(|(si, _)| {
            spec.methods.iter().enumerate().flat_map(move |(mi, _)| {
                spec.seeds.iter().map(move |&seed| (si, mi, seed))
            })
        })
        .collect();
    jobs.par_iter()
        .map(|&(si, mi, seed)| {
            let scene_name = spec.scenes[si].name.clone();
            let method = &spec.methods[mi];
            let world = &worlds[si];
            match catch_unwind(AssertUnwindSafe(|| {
                run_single(world, method, seed, spec.max_iterations, spec.stop)
            })) {
                Ok(mut record) => {
                    record.metrics.scene = scene_name;
                    record
                }
                Err(panic) => RunRecord {
                    metrics: failure_metrics(scene_name, method.label(), seed),
                    result: None,
                    note: Some(format!("worker panicked: {}", panic_text(&panic))),
                },
            }
        })
        .collect()
}

fn panic_text(panic: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = panic.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = panic.downcast_ref::<String>() {
        s.clone()
    } else {
        "non-string panic payload".to_string()
    }
}

fn failure_metrics(scene: String, method: &str, seed: u64) -> RunMetrics {
    RunMetrics {
        scene,
        method: method.to_string(),
        seed,
        success: false,
        time_s: 0.0,
        tree_size: 0,
        horizon: None,
        iterations: 0,
        advisor_queries: 0,
        format_errors: 0,
        content_errors: 0,
    }
}

/// Runs one (method, seed) combination against a prepared world. The
/// returned record's `scene` column is left empty for the caller to fill.
/// Success downgrades to failure (with a note) when the plan does not
/// survive replay validation or its motion track misses the goal.
pub fn run_single(
    world: &World,
    method: &MethodSpec,
    seed: u64,
    max_iterations: u32,
    stop: StopMode,
) -> RunRecord {
    let result = match method {
        MethodSpec::NamoLlm {
            p_rand,
            p_obs,
            k,
            advisor,
        } => {
            let params = SamplingParams::new(*p_rand, *p_obs, *k, seed)
                .expect("sweep parameters validated upstream");
            let mut advisor = advisor.build();
            plan(world, advisor.as_mut(), &params, max_iterations, stop)
        }
        MethodSpec::RandomTree => random_tree(world, seed, max_iterations, stop),
        MethodSpec::NamoSa => namo_sa(world),
        MethodSpec::LlmOnly {
            advisor,
            query_budget,
        } => {
            let mut advisor = advisor.build();
            llm_only(world, advisor.as_mut(), seed, *query_budget)
        }
    };

    // Success must survive independent replay: re-execute the plan action by
    // action and require the motion track to end inside the goal.
    let mut note = None;
    let mut success = result.success;
    if success {
        let replay_ok = replay_validate(world, &result.plan);
        let ends_in_goal = result
            .motion
            .as_ref()
            .and_then(|m| m.points().last().copied())
            .is_some_and(|p| world.scene().goal.polygon.contains(p));
        if !(replay_ok && ends_in_goal) {
            success = false;
            note = Some(format!(
                "plan failed validation (replay {replay_ok}, goal end {ends_in_goal})"
            ));
        }
    }

    RunRecord {
        metrics: RunMetrics {
            scene: String::new(), // filled by the caller
            method: method.label().to_string(),
            seed,
            success,
            time_s: result.wall_time.as_secs_f64(),
            tree_size: result.tree_size,
            horizon: if success { result.horizon } else { None },
            iterations: result.iterations,
            advisor_queries: result.advisor_queries,
            format_errors: result.format_errors,
            content_errors: result.content_errors,
        },
        result: Some(result),
        note,
    }
}

/// Writes the result table with the fixed [`CSV_COLUMNS`] schema. A missing
/// horizon serializes as an empty field.
pub fn write_csv<W: Write>(records: &[RunRecord], out: W) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CSV_COLUMNS)?;
    for r in records {
        let m = &r.metrics;
        writer.write_record(&[
            m.scene.clone(),
            m.method.clone(),
            m.seed.to_string(),
            m.success.to_string(),
            format!("{:.6}", m.time_s),
            m.tree_size.to_string(),
            m.horizon.map(|h| h.to_string()).unwrap_or_default(),
            m.iterations.to_string(),
            m.advisor_queries.to_string(),
            m.format_errors.to_string(),
            m.content_errors.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

/// Per-method aggregate over a sweep's records.
#[derive(Debug, Clone, Serialize)]
pub struct MethodSummary {
    pub method: String,
    pub runs: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub mean_time_s: f64,
    pub mean_iterations: f64,
    /// Mean plan length over successful runs; `None` when nothing succeeded.
    pub mean_horizon: Option<f64>,
}

/// Groups records by method (first-appearance order) and reduces them to
/// success rates and means.
pub fn summarize(records: &[RunRecord]) -> Vec<MethodSummary> {
    let mut order: Vec<&str> = Vec::new();
    for r in records {
        if !order.contains(&r.metrics.method.as_str()) {
            order.push(&r.metrics.method);
        }
    }
    order
        .into_iter()
        .map(|name| {
            let rows: Vec<&RunMetrics> = records
                .iter()
                .map(|r| &r.metrics)
                .filter(|m| m.method == name)
                .collect();
            let runs = rows.len();
            let successes = rows.iter().filter(|m| m.success).count();
            let horizons: Vec<f64> = rows
                .iter()
                .filter_map(|m| m.horizon.map(f64::from))
                .collect();
            MethodSummary {
                method: name.to_string(),
                runs,
                successes,
                success_rate: successes as f64 / runs.max(1) as f64,
                mean_time_s: rows.iter().map(|m| m.time_s).sum::<f64>() / runs.max(1) as f64,
                mean_iterations: rows.iter().map(|m| f64::from(m.iterations)).sum::<f64>()
                    / runs.max(1) as f64,
                mean_horizon: if horizons.is_empty() {
                    None
                } else {
                    Some(horizons.iter().sum::<f64>() / horizons.len() as f64)
                },
            }
        })
        .collect()
}
