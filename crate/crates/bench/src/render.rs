//! Deterministic SVG rendering of scenes and run reports. The same input
//! always produces byte-identical output, so rendered files can be diffed
//! and golden-tested.

use namo_core::geometry::{Point, Pose2};
use namo_core::planner::PlanReport;
use namo_core::world::SceneSpec;
use std::fmt::Write;

/// Fill for movable obstacles.
const COLOR_MOVABLE: &str = "#d9534f";
/// Fill for immovable obstacles (walls, fixed furniture).
const COLOR_STATIC: &str = "#888888";
/// Fill for the goal region.
const COLOR_GOAL: &str = "#5cb85c";
/// Fill for the robot start disk.
const COLOR_ROBOT: &str = "#337ab7";
/// Stroke for the executed motion track.
const COLOR_MOTION: &str = "#1b1b7a";
/// Stroke for relocation arrows.
const COLOR_ARROW: &str = "#e08e0b";

/// What the drawing includes beyond the scene itself.
#[derive(Debug, Clone)]
pub struct RenderOptions {
    /// Draw the robot motion track as a polyline.
    pub draw_motion: bool,
    /// Draw one arrow per relocation, from the obstacle's old position to
    /// its new one, numbered in execution order.
    pub draw_arrows: bool,
    /// Pixels per world unit.
    pub scale: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            draw_motion: true,
            draw_arrows: true,
            scale: 30.0,
        }
    }
}

/// Renders a scene with no run overlay.
pub fn render_scene(scene: &SceneSpec, options: &RenderOptions) -> String {
    document(scene, None, options)
}

/// Renders the scene a report was produced on, overlaying the relocation
/// arrows and the motion track the report carries.
pub fn render_report(report: &PlanReport, options: &RenderOptions) -> String {
    document(&report.scene, Some(report), options)
}

fn document(scene: &SceneSpec, report: Option<&PlanReport>, options: &RenderOptions) -> String {
    let ws = scene.workspace;
    let w = ws.xmax - ws.xmin;
    let h = ws.ymax - ws.ymin;
    let sx = |x: f64| x - ws.xmin;
    let sy = |y: f64| ws.ymax - y;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {} {}" width="{}" height="{}">"#,
        fmt(w),
        fmt(h),
        fmt(w * options.scale),
        fmt(h * options.scale),
    );
    let _ = writeln!(
        out,
        r#"<defs><marker id="arrowhead" markerWidth="6" markerHeight="6" refX="5" refY="3" orient="auto"><path d="M0,0 L6,3 L0,6 z" fill="{COLOR_ARROW}"/></marker></defs>"#
    );
    let _ = writeln!(
        out,
        r##"<rect x="0" y="0" width="{}" height="{}" fill="#ffffff" stroke="#333333" stroke-width="0.05"/>"##,
        fmt(w),
        fmt(h),
    );

    // Goal region under everything else.
    polygon_element(
        &mut out,
        scene.goal.polygon.vertices(),
        Pose2::new(0.0, 0.0, 0.0),
        COLOR_GOAL,
        "goal",
        &sx,
        &sy,
    );

    // Obstacles at their initial poses.
    for obstacle in &scene.obstacles {
        let color = if obstacle.movable {
            COLOR_MOVABLE
        } else {
            COLOR_STATIC
        };
        let class = if obstacle.movable {
            "obstacle-movable"
        } else {
            "obstacle-static"
        };
        polygon_element(
            &mut out,
            obstacle.polygon.vertices(),
            obstacle.pose,
            color,
            class,
            &sx,
            &sy,
        );
    }

    // Robot start disk.
    let _ = writeln!(
        out,
        r#"<circle class="robot" cx="{}" cy="{}" r="{}" fill="{COLOR_ROBOT}" fill-opacity="0.9"/>"#,
        fmt(sx(scene.robot.x)),
        fmt(sy(scene.robot.y)),
        fmt(scene.robot.radius),
    );

    if let Some(report) = report {
        if options.draw_motion && report.motion.len() > 1 {
            let mut points = String::new();
            for p in &report.motion {
                let _ = write!(points, "{},{} ", fmt(sx(p[0])), fmt(sy(p[1])));
            }
            let _ = writeln!(
                out,
                r#"<polyline class="motion" points="{}" fill="none" stroke="{COLOR_MOTION}" stroke-width="0.12" stroke-opacity="0.8"/>"#,
                points.trim_end(),
            );
        }
        if options.draw_arrows {
            for (i, step) in report.steps.iter().enumerate() {
                let _ = writeln!(
                    out,
                    r#"<line class="plan-arrow" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{COLOR_ARROW}" stroke-width="0.15" marker-end="url(#arrowhead)"/>"#,
                    fmt(sx(step.from.x)),
                    fmt(sy(step.from.y)),
                    fmt(sx(step.to.x)),
                    fmt(sy(step.to.y)),
                );
                let _ = writeln!(
                    out,
                    r#"<text class="plan-step" x="{}" y="{}" font-size="0.6" fill="{COLOR_ARROW}">{}</text>"#,
                    fmt(sx((step.from.x + step.to.x) / 2.0)),
                    fmt(sy((step.from.y + step.to.y) / 2.0)),
                    i + 1,
                );
            }
        }
    }

    out.push_str("</svg>\n");
    out
}

fn polygon_element(
    out: &mut String,
    vertices: &[Point],
    pose: Pose2,
    fill: &str,
    class: &str,
    sx: &dyn Fn(f64) -> f64,
    sy: &dyn Fn(f64) -> f64,
) {
    let (s, c) = pose.theta.sin_cos();
    let mut points = String::new();
    for v in vertices {
        let x = pose.x + c * v.x - s * v.y;
        let y = pose.y + s * v.x + c * v.y;
        let _ = write!(points, "{},{} ", fmt(sx(x)), fmt(sy(y)));
    }
    let _ = writeln!(
        out,
        r##"<polygon class="{class}" points="{}" fill="{fill}" fill-opacity="0.85" stroke="#222222" stroke-width="0.04"/>"##,
        points.trim_end(),
    );
}

/// Fixed-precision float formatting so output is byte-stable.
fn fmt(v: f64) -> String {
    // Normalize negative zero so -0.000 never appears.
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.3}")
}
