//! Command-line front end: plan a single scene, sweep a benchmark matrix,
//! query the brute-force horizon oracle, render scenes or run reports to
//! SVG, and generate benchmark scenes.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use namo_bench::oracle::{brute_force_min_horizon, subset_deletion_lower_bound};
use namo_bench::render::{render_report, render_scene, RenderOptions};
use namo_bench::scenes::{generate_scene, CaseArchetype, CaseName};
use namo_bench::sweep::{
    run_single, run_sweep, summarize, write_csv, AdvisorSpec, MethodSpec, SweepScene, SweepSpec,
};
use namo_core::geometry::Pose2;
use namo_core::planner::{PlanReport, StopMode};
use namo_core::world::{ObstacleId, SceneSpec, World};
use serde::Deserialize;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "namo",
    about = "Tree-search planning among movable obstacles: run, benchmark, verify, render",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one planner on one scene (exit code 2 when no plan is found).
    Plan(PlanArgs),
    /// Run a scenes x methods x seeds benchmark matrix in parallel.
    Sweep(SweepArgs),
    /// Brute-force the exact minimum horizon of a small scene.
    Oracle(OracleArgs),
    /// Render a scene or a saved run report to SVG.
    Render(RenderArgs),
    /// Generate a benchmark scene from an archetype.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodName {
    /// Advisor-guided tree search.
    NamoLlm,
    /// The same search with uniform sampling and no advisor.
    RandomTree,
    /// Deterministic greedy absorb-to-boundary baseline.
    NamoSa,
    /// Advisor-only sequential baseline (no tree).
    LlmOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AdvisorName {
    /// Live chat-completion endpoint (token from the environment).
    Llm,
    /// Scripted responses from --advisor-script.
    Mock,
    /// Deterministic nearest-to-goal heuristic.
    Oracle,
    /// No recommendations at all.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StopName {
    /// Stop at the first feasible plan.
    First,
    /// Spend the whole budget, return the shortest plan found.
    Exhaust,
}

#[derive(Args)]
struct PlanArgs {
    /// Scene JSON file.
    #[arg(long)]
    scene: Option<PathBuf>,
    /// TOML file providing defaults for any of the other flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    method: Option<MethodName>,
    /// Probability of expanding from the top-score set instead of anywhere.
    #[arg(long)]
    p_rand: Option<f64>,
    /// Probability of moving the recommended obstacle instead of any.
    #[arg(long)]
    p_obs: Option<f64>,
    /// Recommendation candidates requested per advisor query.
    #[arg(short = 'K', long = "k")]
    k: Option<usize>,
    /// Iteration budget.
    #[arg(long)]
    max_iters: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    advisor: Option<AdvisorName>,
    /// Scripted advisor responses: ids comma-separated, responses
    /// semicolon-separated, e.g. "3,1;2".
    #[arg(long)]
    advisor_script: Option<String>,
    #[arg(long)]
    llm_endpoint: Option<String>,
    #[arg(long)]
    llm_model: Option<String>,
    #[arg(long, value_enum)]
    stop: Option<StopName>,
    /// Advisor-only baseline: queries allowed before giving up.
    #[arg(long)]
    query_budget: Option<u32>,
    /// Write the run report as JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Render the run report as SVG here.
    #[arg(long)]
    svg: Option<PathBuf>,
}

/// TOML mirror of the plan flags; command-line values win over these.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanConfig {
    scene: Option<PathBuf>,
    method: Option<String>,
    p_rand: Option<f64>,
    p_obs: Option<f64>,
    k: Option<usize>,
    max_iters: Option<u32>,
    seed: Option<u64>,
    advisor: Option<String>,
    advisor_script: Option<String>,
    llm_endpoint: Option<String>,
    llm_model: Option<String>,
    stop: Option<String>,
    query_budget: Option<u32>,
}

#[derive(Args)]
struct SweepArgs {
    /// Scene JSON file; repeat for several scenes.
    #[arg(long, required = true)]
    scene: Vec<PathBuf>,
    /// Comma-separated method list.
    #[arg(long, default_value = "namo-llm,random-tree,namo-sa")]
    methods: String,
    /// Seed set: half-open range "0..25" or comma list "1,2,7".
    #[arg(long, default_value = "0..25")]
    seeds: String,
    #[arg(long, default_value_t = 30_000)]
    max_iters: u32,
    #[arg(long, value_enum, default_value_t = StopName::First)]
    stop: StopName,
    #[arg(long, default_value_t = 0.8)]
    p_rand: f64,
    #[arg(long, default_value_t = 0.8)]
    p_obs: f64,
    #[arg(short = 'K', long = "k", default_value_t = 3)]
    k: usize,
    /// Advisor for the guided methods.
    #[arg(long, value_enum, default_value_t = AdvisorName::Oracle)]
    advisor: AdvisorName,
    #[arg(long)]
    advisor_script: Option<String>,
    #[arg(long)]
    llm_endpoint: Option<String>,
    #[arg(long)]
    llm_model: Option<String>,
    /// Confirm that a sweep may call a paid external endpoint.
    #[arg(long, default_value_t = false)]
    allow_llm: bool,
    #[arg(long, default_value_t = 10)]
    query_budget: u32,
    /// Write the per-run result table as CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Scene JSON file.
    #[arg(long)]
    scene: PathBuf,
    /// Candidate placements: poses semicolon-separated, each "x,y,theta",
    /// e.g. "3,10,0;5.5,10,0".
    #[arg(long)]
    placements: String,
    /// Horizons beyond this are reported as unsolvable-within-cap.
    #[arg(long, default_value_t = 6)]
    depth_cap: u32,
}

#[derive(Args)]
struct RenderArgs {
    /// Run report JSON (from plan --out).
    #[arg(long, conflicts_with = "scene")]
    report: Option<PathBuf>,
    /// Scene JSON, for a render without any run overlay.
    #[arg(long)]
    scene: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    /// Skip the robot motion track.
    #[arg(long, default_value_t = false)]
    no_motion: bool,
    /// Skip the numbered relocation arrows.
    #[arg(long, default_value_t = false)]
    no_arrows: bool,
    /// Pixels per world unit.
    #[arg(long, default_value_t = 30.0)]
    scale: f64,
}

#[derive(Args)]
struct GenArgs {
    /// Scene family: pocket_goal, deep_clutter, or blocked_manipulable.
    #[arg(long)]
    archetype: String,
    /// Movable obstacle count.
    #[arg(long)]
    n: usize,
    /// Required minimum plan length.
    #[arg(long)]
    h_min: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the scene JSON here.
    #[arg(long)]
    out: PathBuf,
    /// Also render the scene as SVG here.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Confirm the stated minimum horizon with the brute-force oracle
    /// (only scenes small enough for its guards).
    #[arg(long, default_value_t = false)]
    verify: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Plan(args) => cmd_plan(args),
        Command::Sweep(args) => cmd_sweep(args).map(|()| true),
        Command::Oracle(args) => cmd_oracle(args).map(|()| true),
        Command::Render(args) => cmd_render(args).map(|()| true),
        Command::Gen(args) => cmd_gen(args).map(|()| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn load_scene(path: &Path) -> Result<SceneSpec> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading scene file {}", path.display()))?;
    SceneSpec::from_json(&text).with_context(|| format!("parsing scene {}", path.display()))
}

fn parse_script(script: &str) -> Result<Vec<Vec<ObstacleId>>> {
    let mut responses = Vec::new();
    for part in script.split(';') {
        let ids = part
            .split(',')
            .map(|t| t.trim())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<ObstacleId>()
                    .map_err(|_| anyhow!("bad obstacle id `{t}` in advisor script"))
            })
            .collect::<Result<Vec<_>>>()?;
        responses.push(ids);
    }
    if responses.is_empty() || responses.iter().all(|r| r.is_empty()) {
        bail!("advisor script `{script}` holds no obstacle ids");
    }
    Ok(responses)
}

fn parse_poses(text: &str) -> Result<Vec<Pose2>> {
    text.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let parts: Vec<&str> = p.split(',').map(|t| t.trim()).collect();
            if parts.len() != 3 {
                bail!("pose `{p}` must be x,y,theta");
            }
            let nums: Vec<f64> = parts
                .iter()
                .map(|t| t.parse::<f64>().map_err(|_| anyhow!("bad number `{t}`")))
                .collect::<Result<Vec<_>>>()?;
            Ok(Pose2::new(nums[0], nums[1], nums[2]))
        })
        .collect()
}

fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    let text = text.trim();
    if let Some((a, b)) = text.split_once("..") {
        let start: u64 = a.trim().parse().context("seed range start")?;
        let end: u64 = b.trim().parse().context("seed range end")?;
        if end <= start {
            bail!("empty seed range `{text}`");
        }
        return Ok((start..end).collect());
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| anyhow!("bad seed `{t}`"))
        })
        .collect()
}

/// Resolves an advisor choice into a buildable spec, validating that every
/// piece of configuration it needs is present.
fn advisor_spec(
    advisor: AdvisorName,
    script: Option<&str>,
    endpoint: Option<&str>,
    model: Option<&str>,
) -> Result<AdvisorSpec> {
    Ok(match advisor {
        AdvisorName::None => AdvisorSpec::None,
        AdvisorName::Oracle => AdvisorSpec::NearestGoal,
        AdvisorName::Mock => {
            let script = script.ok_or_else(|| anyhow!("--advisor mock needs --advisor-script"))?;
            AdvisorSpec::Scripted(parse_script(script)?)
        }
        AdvisorName::Llm => {
            let endpoint =
                endpoint.ok_or_else(|| anyhow!("--advisor llm needs --llm-endpoint"))?;
            let model = model.ok_or_else(|| anyhow!("--advisor llm needs --llm-model"))?;
            AdvisorSpec::Llm {
                endpoint: endpoint.to_string(),
                model: model.to_string(),
            }
        }
    })
}

fn method_spec(
    method: MethodName,
    p_rand: f64,
    p_obs: f64,
    k: usize,
    advisor: AdvisorSpec,
    query_budget: u32,
) -> MethodSpec {
    match method {
        MethodName::NamoLlm => MethodSpec::NamoLlm {
            p_rand,
            p_obs,
            k,
            advisor,
        },
        MethodName::RandomTree => MethodSpec::RandomTree,
        MethodName::NamoSa => MethodSpec::NamoSa,
        MethodName::LlmOnly => MethodSpec::LlmOnly {
            advisor,
            query_budget,
        },
    }
}

fn cmd_plan(args: PlanArgs) -> Result<bool> {
    let config: PlanConfig = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?
        }
        None => PlanConfig::default(),
    };
    // Command line wins over config file, config over defaults.
    let scene_path = args
        .scene
        .or(config.scene)
        .ok_or_else(|| anyhow!("--scene is required (flag or config file)"))?;
    let method = match (args.method, config.method) {
        (Some(m), _) => m,
        (None, Some(name)) => {
            MethodName::from_str(&name, true).map_err(|e| anyhow!("config method: {e}"))?
        }
        (None, None) => MethodName::NamoLlm,
    };
    let advisor_name = match (args.advisor, config.advisor) {
        (Some(a), _) => a,
        (None, Some(name)) => {
            AdvisorName::from_str(&name, true).map_err(|e| anyhow!("config advisor: {e}"))?
        }
        (None, None) => AdvisorName::Oracle,
    };
    let stop = match (args.stop, config.stop) {
        (Some(s), _) => s,
        (None, Some(name)) => {
            StopName::from_str(&name, true).map_err(|e| anyhow!("config stop: {e}"))?
        }
        (None, None) => StopName::First,
    };
    let p_rand = args.p_rand.or(config.p_rand).unwrap_or(0.8);
    let p_obs = args.p_obs.or(config.p_obs).unwrap_or(0.8);
    let k = args.k.or(config.k).unwrap_or(3);
    let max_iters = args.max_iters.or(config.max_iters).unwrap_or(30_000);
    let seed = args.seed.or(config.seed).unwrap_or(0);
    let query_budget = args.query_budget.or(config.query_budget).unwrap_or(10);
    let script = args.advisor_script.or(config.advisor_script);
    let endpoint = args.llm_endpoint.or(config.llm_endpoint);
    let model = args.llm_model.or(config.llm_model);

    let scene = load_scene(&scene_path)?;
    let world = World::new(scene.clone()).map_err(|e| anyhow!("invalid scene: {e}"))?;
    let advisor = advisor_spec(
        advisor_name,
        script.as_deref(),
        endpoint.as_deref(),
        model.as_deref(),
    )?;
    let method = method_spec(method, p_rand, p_obs, k, advisor, query_budget);
    let stop = match stop {
        StopName::First => StopMode::FirstFeasible,
        StopName::Exhaust => StopMode::Exhaust,
    };

    let record = run_single(&world, &method, seed, max_iters, stop);
    let metrics = &record.metrics;
    let horizon = metrics
        .horizon
        .map(|h| h.to_string())
        .unwrap_or_else(|| "-".to_string());
    println!(
        "{} seed {}: {} horizon {} iterations {} tree {} queries {} time {:.3}s",
        method.label(),
        seed,
        if metrics.success { "SOLVED" } else { "failed" },
        horizon,
        metrics.iterations,
        metrics.tree_size,
        metrics.advisor_queries,
        metrics.time_s,
    );
    if let Some(note) = &record.note {
        println!("note: {note}");
    }

    let result = record
        .result
        .ok_or_else(|| anyhow!("planner panicked; no report produced"))?;
    let report = result.report(&scene, method.label());
    if let Some(out) = &args.out {
        fs::write(out, serde_json::to_string_pretty(&report)?)
            .with_context(|| format!("writing report {}", out.display()))?;
        println!("report written to {}", out.display());
    }
    if let Some(svg_path) = &args.svg {
        let svg = render_report(&report, &RenderOptions::default());
        fs::write(svg_path, svg)
            .with_context(|| format!("writing svg {}", svg_path.display()))?;
        println!("svg written to {}", svg_path.display());
    }
    Ok(metrics.success)
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let methods: Vec<MethodName> = args
        .methods
        .split(',')
        .map(|m| {
            MethodName::from_str(m.trim(), true).map_err(|e| anyhow!("method `{m}`: {e}"))
        })
        .collect::<Result<Vec<_>>>()?;
    let advisor = advisor_spec(
        args.advisor,
        args.advisor_script.as_deref(),
        args.llm_endpoint.as_deref(),
        args.llm_model.as_deref(),
    )?;
    if advisor.is_external() && !args.allow_llm {
        bail!("sweeps with --advisor llm call a paid endpoint once per query; pass --allow-llm to confirm");
    }
    let methods: Vec<MethodSpec> = methods
        .into_iter()
        .map(|m| {
            method_spec(
                m,
                args.p_rand,
                args.p_obs,
                args.k,
                advisor.clone(),
                args.query_budget,
            )
        })
        .collect();
    let mut scenes = Vec::new();
    for path in &args.scene {
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("scene")
            .to_string();
        scenes.push(SweepScene {
            name,
            scene: load_scene(path)?,
        });
    }
    let spec = SweepSpec {
        scenes,
        methods,
        seeds: parse_seeds(&args.seeds)?,
        max_iterations: args.max_iters,
        stop: match args.stop {
            StopName::First => StopMode::FirstFeasible,
            StopName::Exhaust => StopMode::Exhaust,
        },
    };
    eprintln!("running {} combinations...", spec.total_runs());
    let records = run_sweep(&spec);
    if let Some(out) = &args.out {
        let file = fs::File::create(out)
            .with_context(|| format!("creating csv {}", out.display()))?;
        write_csv(&records, file)?;
        eprintln!("results written to {}", out.display());
    }
    for s in summarize(&records) {
        let horizon = s
            .mean_horizon
            .map(|h| format!("{h:.2}"))
            .unwrap_or_else(|| "-".to_string());
        println!(
            "{:<12} runs {:<4} success {:>5.1}% mean-horizon {:<6} mean-iters {:<8.1} mean-time {:.3}s",
            s.method,
            s.runs,
            100.0 * s.success_rate,
            horizon,
            s.mean_iterations,
            s.mean_time_s,
        );
    }
    let invalid: Vec<String> = records
        .iter()
        .filter(|r| r.note.is_some())
        .map(|r| {
            format!(
                "{} {} seed {}: {}",
                r.metrics.scene,
                r.metrics.method,
                r.metrics.seed,
                r.note.as_deref().unwrap_or_default()
            )
        })
        .collect();
    for line in &invalid {
        eprintln!("warning: {line}");
    }
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> Result<()> {
    let scene = load_scene(&args.scene)?;
    let placements = parse_poses(&args.placements)?;
    let bound = subset_deletion_lower_bound(&scene)
        .map_err(|e| anyhow!("lower bound failed: {e}"))?;
    println!("deletion lower bound: {bound}");
    match brute_force_min_horizon(&scene, &placements, args.depth_cap)
        .map_err(|e| anyhow!("oracle failed: {e}"))?
    {
        Some(h) => println!("minimum horizon: {h}"),
        None => println!(
            "no plan within depth {} over the given placements",
            args.depth_cap
        ),
    }
    Ok(())
}

fn cmd_render(args: RenderArgs) -> Result<()> {
    let options = RenderOptions {
        draw_motion: !args.no_motion,
        draw_arrows: !args.no_arrows,
        scale: args.scale,
    };
    let svg = match (&args.report, &args.scene) {
        (Some(report_path), _) => {
            let text = fs::read_to_string(report_path)
                .with_context(|| format!("reading report {}", report_path.display()))?;
            let report: PlanReport = serde_json::from_str(&text)
                .with_context(|| format!("parsing report {}", report_path.display()))?;
            render_report(&report, &options)
        }
        (None, Some(scene_path)) => render_scene(&load_scene(scene_path)?, &options),
        (None, None) => bail!("render needs --report or --scene"),
    };
    fs::write(&args.out, svg).with_context(|| format!("writing {}", args.out.display()))?;
    println!("svg written to {}", args.out.display());
    Ok(())
}

fn cmd_gen(args: GenArgs) -> Result<()> {
    let name: CaseName = args
        .archetype
        .parse()
        .map_err(|e: String| anyhow!("{e} (expected pocket_goal, deep_clutter, or blocked_manipulable)"))?;
    let generated = generate_scene(&CaseArchetype {
        name,
        n: args.n,
        h_min: args.h_min,
        seed: args.seed,
    })
    .map_err(|e| anyhow!("generation failed: {e}"))?;
    fs::write(&args.out, generated.scene.to_json())
        .with_context(|| format!("writing scene {}", args.out.display()))?;
    println!("scene written to {}", args.out.display());
    println!("label: {}", generated.label);
    println!("minimum horizon: {}", generated.h_min);
    let key_list = generated
        .key_obstacles
        .iter()
        .map(|id| id.to_string())
        .collect::<Vec<_>>()
        .join(",");
    println!("key obstacles: {key_list}");
    let parks = generated
        .oracle_placements
        .iter()
        .map(|p| format!("{},{},{}", p.x, p.y, p.theta))
        .collect::<Vec<_>>()
        .join(";");
    println!("park placements: {parks}");
    if args.verify {
        match brute_force_min_horizon(
            &generated.scene,
            &generated.oracle_placements,
            generated.h_min.max(1),
        ) {
            Ok(Some(h)) if h == generated.h_min => {
                println!("oracle confirms minimum horizon {h}");
            }
            Ok(found) => bail!(
                "oracle disagrees: generator claims {}, search found {:?}",
                generated.h_min,
                found
            ),
            Err(e) => bail!("scene too large for oracle verification: {e}"),
        }
    }
    if let Some(svg_path) = &args.svg {
        let svg = render_scene(&generated.scene, &RenderOptions::default());
        fs::write(svg_path, svg)
            .with_context(|| format!("writing svg {}", svg_path.display()))?;
        println!("svg written to {}", svg_path.display());
    }
    Ok(())
}
