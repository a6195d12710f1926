//! Planar geometry at grid scale.
//!
//! Everything downstream reasons about free space through one pipeline:
//! obstacle polygons are inflated by the robot radius (so the robot becomes a
//! point), the workspace is rasterized into an occupancy grid by cell-center
//! sampling, and free cells are grouped into 4-connected components. All
//! reachability and containment questions are answered at that resolution.

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use thiserror::Error;

/// Upper bound on grid cells; rasterization refuses anything larger.
pub const MAX_GRID_CELLS: usize = 1 << 24;

/// Denominator for the default grid resolution: `robot_radius / 4`.
pub const RESOLUTION_DIVISOR: f64 = 4.0;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon must wind counter-clockwise (signed area {0})")]
    NotCounterClockwise(f64),
    #[error("polygon is self-intersecting or has a degenerate edge")]
    NotSimple,
    #[error("inflation radius must be non-negative, got {0}")]
    NegativeRadius(f64),
    #[error("grid resolution must be positive and finite, got {0}")]
    BadResolution(f64),
    #[error("workspace bounds are empty or inverted")]
    EmptyBounds,
    #[error("{0}x{1} cells exceeds the grid cell budget")]
    GridTooLarge(usize, usize),
}

/// A point in workspace coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// A planar pose: position plus heading, with the heading normalized to
/// `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose2 {
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub theta: f64,
}

impl Pose2 {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Pose2 {
            x,
            y,
            theta: normalize_angle(theta),
        }
    }

    pub fn position(&self) -> Point {
        Point::new(self.x, self.y)
    }

    /// Normalizes `theta` in place; deserialized poses call this once up
    /// front so the `[0, 2π)` invariant holds no matter the source.
    pub fn normalized(&self) -> Self {
        Pose2::new(self.x, self.y, self.theta)
    }
}

/// Maps any finite angle into `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    // rem_euclid can return TAU itself for tiny negative inputs.
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Absolute angular difference folded into `[0, π]`.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (normalize_angle(a) - normalize_angle(b)).abs();
    d.min(TAU - d)
}

/// An axis-aligned rectangle, used for the workspace boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub xmin: f64,
    pub ymin: f64,
    pub xmax: f64,
    pub ymax: f64,
}

impl Bounds {
    pub fn new(xmin: f64, ymin: f64, xmax: f64, ymax: f64) -> Self {
        Bounds {
            xmin,
            ymin,
            xmax,
            ymax,
        }
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.xmin && p.x <= self.xmax && p.y >= self.ymin && p.y <= self.ymax
    }

    pub fn is_valid(&self) -> bool {
        self.xmax > self.xmin
            && self.ymax > self.ymin
            && self.width().is_finite()
            && self.height().is_finite()
    }
}

/// A simple polygon with counter-clockwise winding.
///
/// Construction validates the invariants once; every other operation may then
/// assume them. Serialized form is a bare vertex list `[[x, y], ...]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        if vertices.len() < 3 {
            return Err(GeometryError::TooFewVertices(vertices.len()));
        }
        let poly = Polygon { vertices };
        let area = poly.signed_area();
        if !(area > 0.0) {
            return Err(GeometryError::NotCounterClockwise(area));
        }
        if !poly.is_simple() {
            return Err(GeometryError::NotSimple);
        }
        Ok(poly)
    }

    /// Axis-aligned rectangle helper; corners may be given in any order.
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self, GeometryError> {
        let (xmin, xmax) = (x0.min(x1), x0.max(x1));
        let (ymin, ymax) = (y0.min(y1), y0.max(y1));
        Polygon::new(vec![
            Point::new(xmin, ymin),
            Point::new(xmax, ymin),
            Point::new(xmax, ymax),
            Point::new(xmin, ymax),
        ])
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn signed_area(&self) -> f64 {
        let v = &self.vertices;
        let n = v.len();
        let mut acc = 0.0;
        for i in 0..n {
            let j = (i + 1) % n;
            acc += v[i].x * v[j].y - v[j].x * v[i].y;
        }
        acc / 2.0
    }

    pub fn centroid(&self) -> Point {
        let v = &self.vertices;
        let n = v.len();
        let area = self.signed_area();
        let (mut cx, mut cy) = (0.0, 0.0);
        for i in 0..n {
            let j = (i + 1) % n;
            let cross = v[i].x * v[j].y - v[j].x * v[i].y;
            cx += (v[i].x + v[j].x) * cross;
            cy += (v[i].y + v[j].y) * cross;
        }
        Point::new(cx / (6.0 * area), cy / (6.0 * area))
    }

    /// Even-odd ray-casting test.
    pub fn contains(&self, p: Point) -> bool {
        let v = &self.vertices;
        let n = v.len();
        let mut inside = false;
        let mut j = n - 1;
        for i in 0..n {
            if (v[i].y > p.y) != (v[j].y > p.y) {
                let t = (p.y - v[i].y) / (v[j].y - v[i].y);
                if p.x < v[i].x + t * (v[j].x - v[i].x) {
                    inside = !inside;
                }
            }
            j = i;
        }
        inside
    }

    /// Euclidean distance from `p` to the polygon as a filled region: zero
    /// inside, otherwise distance to the nearest edge.
    pub fn distance_to(&self, p: Point) -> f64 {
        if self.contains(p) {
            return 0.0;
        }
        let v = &self.vertices;
        let n = v.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            let j = (i + 1) % n;
            best = best.min(segment_distance(v[i], v[j], p));
        }
        best
    }

    /// The polygon rotated by `pose.theta` about the origin of its local
    /// frame, then translated to `pose` position.
    pub fn transformed(&self, pose: Pose2) -> Polygon {
        let (s, c) = pose.theta.sin_cos();
        let vertices = self
            .vertices
            .iter()
            .map(|v| Point::new(pose.x + c * v.x - s * v.y, pose.y + s * v.x + c * v.y))
            .collect();
        // Rotation + translation preserve winding and simplicity.
        Polygon { vertices }
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            lo.x = lo.x.min(v.x);
            lo.y = lo.y.min(v.y);
            hi.x = hi.x.max(v.x);
            hi.y = hi.y.max(v.y);
        }
        (lo, hi)
    }

    /// Largest vertex distance from the local-frame origin; bounds the
    /// footprint under any rotation.
    pub fn circumradius(&self) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.x.hypot(v.y))
            .fold(0.0, f64::max)
    }

    fn is_simple(&self) -> bool {
        let v = &self.vertices;
        let n = v.len();
        for i in 0..n {
            let a1 = v[i];
            let a2 = v[(i + 1) % n];
            if a1 == a2 {
                return false; // degenerate edge
            }
            for j in (i + 1)..n {
                // Skip adjacent edges (they share an endpoint by design).
                if j == i || (j + 1) % n == i || (i + 1) % n == j {
                    continue;
                }
                let b1 = v[j];
                let b2 = v[(j + 1) % n];
                if segments_intersect(a1, a2, b1, b2) {
                    return false;
                }
            }
        }
        true
    }
}

impl TryFrom<Vec<[f64; 2]>> for Polygon {
    type Error = GeometryError;

    fn try_from(raw: Vec<[f64; 2]>) -> Result<Self, GeometryError> {
        Polygon::new(raw.into_iter().map(|[x, y]| Point::new(x, y)).collect())
    }
}

impl From<Polygon> for Vec<[f64; 2]> {
    fn from(p: Polygon) -> Self {
        p.vertices.into_iter().map(|v| [v.x, v.y]).collect()
    }
}

fn segment_distance(a: Point, b: Point, p: Point) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    p.distance(Point::new(a.x + t * dx, a.y + t * dy))
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn segments_intersect(a1: Point, a2: Point, b1: Point, b2: Point) -> bool {
    let d1 = orient(b1, b2, a1);
    let d2 = orient(b1, b2, a2);
    let d3 = orient(a1, a2, b1);
    let d4 = orient(a1, a2, b2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |d: f64, p: Point, q: Point, r: Point| {
        d == 0.0
            && r.x >= p.x.min(q.x)
            && r.x <= p.x.max(q.x)
            && r.y >= p.y.min(q.y)
            && r.y <= p.y.max(q.y)
    };
    on(d1, b1, b2, a1) || on(d2, b1, b2, a2) || on(d3, a1, a2, b1) || on(d4, a1, a2, b2)
}

/// A posed obstacle polygon grown by the robot radius (Minkowski sum with a
/// closed disk), so robot-vs-obstacle collision reduces to point membership.
///
/// Membership uses the sublevel-set identity `poly ⊕ disk(r) = {p :
/// dist(p, poly) ≤ r}`, which is exact for any simple polygon.
#[derive(Debug, Clone)]
pub struct InflatedRegion {
    polygon: Polygon,
    radius: f64,
    bbox_lo: Point,
    bbox_hi: Point,
}

impl InflatedRegion {
    pub fn contains(&self, p: Point) -> bool {
        if p.x < self.bbox_lo.x || p.x > self.bbox_hi.x || p.y < self.bbox_lo.y || p.y > self.bbox_hi.y
        {
            return false;
        }
        self.polygon.distance_to(p) <= self.radius
    }

    /// The posed (pre-inflation) polygon.
    pub fn polygon(&self) -> &Polygon {
        &self.polygon
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        (self.bbox_lo, self.bbox_hi)
    }
}

/// Places `shape` at `pose` and grows it by `radius`.
pub fn inflate(shape: &Polygon, pose: Pose2, radius: f64) -> Result<InflatedRegion, GeometryError> {
    if !(radius >= 0.0) {
        return Err(GeometryError::NegativeRadius(radius));
    }
    let polygon = shape.transformed(pose);
    let (lo, hi) = polygon.bounding_box();
    Ok(InflatedRegion {
        polygon,
        radius,
        bbox_lo: Point::new(lo.x - radius, lo.y - radius),
        bbox_hi: Point::new(hi.x + radius, hi.y + radius),
    })
}

/// A boolean occupancy raster over the workspace. Cell `(ix, iy)` covers the
/// square `origin + [ix, ix+1) x [iy, iy+1) * resolution`; a cell is occupied
/// iff its center lies inside some inflated footprint or outside the
/// workspace rectangle.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyGrid {
    origin: Point,
    resolution: f64,
    width: usize,
    height: usize,
    occupied: Vec<bool>,
}

impl OccupancyGrid {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    #[inline]
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.width + ix
    }

    #[inline]
    pub fn is_occupied(&self, ix: usize, iy: usize) -> bool {
        self.occupied[self.index(ix, iy)]
    }

    pub fn occupied_cells(&self) -> &[bool] {
        &self.occupied
    }

    pub fn cell_center(&self, ix: usize, iy: usize) -> Point {
        Point::new(
            self.origin.x + (ix as f64 + 0.5) * self.resolution,
            self.origin.y + (iy as f64 + 0.5) * self.resolution,
        )
    }

    /// The cell containing `p`, if `p` is within the gridded area.
    pub fn cell_of(&self, p: Point) -> Option<(usize, usize)> {
        let fx = (p.x - self.origin.x) / self.resolution;
        let fy = (p.y - self.origin.y) / self.resolution;
        if fx < 0.0 || fy < 0.0 {
            return None;
        }
        let (ix, iy) = (fx.floor() as usize, fy.floor() as usize);
        if ix >= self.width || iy >= self.height {
            return None;
        }
        Some((ix, iy))
    }

    pub fn free_count(&self) -> usize {
        self.occupied.iter().filter(|&&o| !o).count()
    }

    /// Marks every cell whose center lies inside `region` as occupied.
    /// Returns the marked cell indices (row-major).
    pub fn stamp(&mut self, region: &InflatedRegion) -> Vec<u32> {
        let mut cells = Vec::new();
        let (lo, hi) = region.bounding_box();
        let x0 = (((lo.x - self.origin.x) / self.resolution).floor()).max(0.0) as usize;
        let y0 = (((lo.y - self.origin.y) / self.resolution).floor()).max(0.0) as usize;
        let x1 = ((((hi.x - self.origin.x) / self.resolution).ceil()) as usize).min(self.width);
        let y1 = ((((hi.y - self.origin.y) / self.resolution).ceil()) as usize).min(self.height);
        for iy in y0..y1 {
            for ix in x0..x1 {
                if region.contains(self.cell_center(ix, iy)) {
                    let idx = self.index(ix, iy);
                    self.occupied[idx] = true;
                    cells.push(idx as u32);
                }
            }
        }
        cells
    }

    /// Occupies the listed cells (a previously computed footprint).
    pub fn stamp_cells(&mut self, cells: &[u32]) {
        for &c in cells {
            self.occupied[c as usize] = true;
        }
    }

    /// Row-major indices of the cells whose centers lie inside `region`,
    /// without mutating the grid.
    pub fn cells_covered(&self, region: &InflatedRegion) -> Vec<u32> {
        let mut cells = Vec::new();
        let (lo, hi) = region.bounding_box();
        let x0 = (((lo.x - self.origin.x) / self.resolution).floor()).max(0.0) as usize;
        let y0 = (((lo.y - self.origin.y) / self.resolution).floor()).max(0.0) as usize;
        let x1 = ((((hi.x - self.origin.x) / self.resolution).ceil()) as usize).min(self.width);
        let y1 = ((((hi.y - self.origin.y) / self.resolution).ceil()) as usize).min(self.height);
        for iy in y0..y1 {
            for ix in x0..x1 {
                if region.contains(self.cell_center(ix, iy)) {
                    cells.push(self.index(ix, iy) as u32);
                }
            }
        }
        cells
    }
}

/// Grid sized to `workspace` at `resolution`, with cells outside the
/// workspace pre-occupied and nothing else stamped.
pub fn empty_grid(workspace: Bounds, resolution: f64) -> Result<OccupancyGrid, GeometryError> {
    if !(resolution > 0.0) || !resolution.is_finite() {
        return Err(GeometryError::BadResolution(resolution));
    }
    if !workspace.is_valid() {
        return Err(GeometryError::EmptyBounds);
    }
    let width = cell_count(workspace.width(), resolution);
    let height = cell_count(workspace.height(), resolution);
    if width == 0 || height == 0 {
        return Err(GeometryError::EmptyBounds);
    }
    if width.saturating_mul(height) > MAX_GRID_CELLS {
        return Err(GeometryError::GridTooLarge(width, height));
    }
    let origin = Point::new(workspace.xmin, workspace.ymin);
    let mut grid = OccupancyGrid {
        origin,
        resolution,
        width,
        height,
        occupied: vec![false; width * height],
    };
    // Cells whose center falls past the workspace edge (possible when the
    // extent is not a multiple of the resolution) count as occupied.
    for iy in 0..height {
        for ix in 0..width {
            if !workspace.contains(grid.cell_center(ix, iy)) {
                let idx = grid.index(ix, iy);
                grid.occupied[idx] = true;
            }
        }
    }
    Ok(grid)
}

/// Number of cells covering `extent`, tolerant of near-exact multiples.
fn cell_count(extent: f64, resolution: f64) -> usize {
    let exact = extent / resolution;
    let rounded = exact.round();
    if (exact - rounded).abs() < 1e-9 * exact.max(1.0) {
        rounded as usize
    } else {
        exact.ceil() as usize
    }
}

/// Rasterizes the free space left by `regions` inside `workspace`.
pub fn rasterize_free_space(
    workspace: Bounds,
    regions: &[InflatedRegion],
    resolution: f64,
) -> Result<OccupancyGrid, GeometryError> {
    let mut grid = empty_grid(workspace, resolution)?;
    for region in regions {
        grid.stamp(region);
    }
    Ok(grid)
}

/// Sentinel label for occupied cells.
pub const OCCUPIED: u32 = u32::MAX;

/// 4-connected components of the free cells of a grid.
///
/// Labels are dense in `[0, count)` and assigned in row-major discovery
/// order, so identical grids always label identically.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentLabeling {
    width: usize,
    height: usize,
    labels: Vec<u32>,
    sizes: Vec<u32>,
    /// First (row-major) cell index of each component.
    representatives: Vec<u32>,
}

impl ComponentLabeling {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn label(&self, ix: usize, iy: usize) -> u32 {
        self.labels[iy * self.width + ix]
    }

    #[inline]
    pub fn label_at(&self, idx: usize) -> u32 {
        self.labels[idx]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn component_size(&self, label: u32) -> usize {
        self.sizes[label as usize] as usize
    }

    /// Row-major cell index of the first-discovered cell of `label`.
    pub fn representative(&self, label: u32) -> usize {
        self.representatives[label as usize] as usize
    }
}

/// Labels the free cells of `grid` into 4-connected components.
pub fn label_components(grid: &OccupancyGrid) -> ComponentLabeling {
    let (w, h) = (grid.width(), grid.height());
    let occupied = grid.occupied_cells();
    let mut labels = vec![OCCUPIED; w * h];
    let mut sizes = Vec::new();
    let mut representatives = Vec::new();
    let mut stack = Vec::new();
    for start in 0..w * h {
        if occupied[start] || labels[start] != OCCUPIED {
            continue;
        }
        let label = sizes.len() as u32;
        sizes.push(0u32);
        representatives.push(start as u32);
        stack.push(start);
        labels[start] = label;
        while let Some(idx) = stack.pop() {
            sizes[label as usize] += 1;
            let (ix, iy) = (idx % w, idx / w);
            let mut visit = |n: usize| {
                if !occupied[n] && labels[n] == OCCUPIED {
                    labels[n] = label;
                    stack.push(n);
                }
            };
            if ix > 0 {
                visit(idx - 1);
            }
            if ix + 1 < w {
                visit(idx + 1);
            }
            if iy > 0 {
                visit(idx - w);
            }
            if iy + 1 < h {
                visit(idx + w);
            }
        }
    }
    ComponentLabeling {
        width: w,
        height: h,
        labels,
        sizes,
        representatives,
    }
}

/// True iff every cell whose center lies inside `region` either carries
/// `component`'s label or belongs to `exclusion` (cells that the move under
/// evaluation would free). Cells outside the grid fail the test.
pub fn region_within_component(
    grid: &OccupancyGrid,
    labeling: &ComponentLabeling,
    region: &InflatedRegion,
    component: u32,
    exclusion: Option<&[bool]>,
) -> bool {
    let (lo, hi) = region.bounding_box();
    // Any part of the region hanging past the gridded area fails outright.
    if lo.x < grid.origin().x
        || lo.y < grid.origin().y
        || hi.x > grid.origin().x + grid.width() as f64 * grid.resolution()
        || hi.y > grid.origin().y + grid.height() as f64 * grid.resolution()
    {
        return false;
    }
    let x0 = ((lo.x - grid.origin().x) / grid.resolution()).floor().max(0.0) as usize;
    let y0 = ((lo.y - grid.origin().y) / grid.resolution()).floor().max(0.0) as usize;
    let x1 = (((hi.x - grid.origin().x) / grid.resolution()).ceil() as usize).min(grid.width());
    let y1 = (((hi.y - grid.origin().y) / grid.resolution()).ceil() as usize).min(grid.height());
    for iy in y0..y1 {
        for ix in x0..x1 {
            if !region.contains(grid.cell_center(ix, iy)) {
                continue;
            }
            let idx = grid.index(ix, iy);
            if labeling.label_at(idx) != component && !exclusion.is_some_and(|e| e[idx]) {
                return false;
            }
        }
    }
    true
}
