//! Furniture feasibility and greedy wall placement.
//!
//! An item is feasible at a center when its box sits inside its room, keeps
//! the clearance `δ` from every obstacle, and (for wall-adjacent kinds) has its
//! headboard edge flush with one of the room's walls. Infeasible items walk
//! toward the room's walls in steps of `λ`, then slide along the wall.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    box_distance, box_inside_polygon, point_to_segment_distance, AlignedBox, Axis, Point2, EPS,
};
use crate::model::{
    occupancy_from_plan, Facing, FloorPlan, FurnitureId, FurnitureInstance, ObstacleSource,
    OccupancySet, RoomRegion, Wall, WallId, WallRun,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RefineError {
    #[error("could not place {item} after {} candidate positions", trace.steps.len())]
    PlacementFailed {
        item: FurnitureId,
        trace: Box<PlacementTrace>,
    },
    #[error("{point} lies on the nearest wall; no direction to move in")]
    ZeroDirection { point: Point2 },
    #[error("no walls to move toward")]
    NoWalls,
    #[error("invalid refiner configuration: {0}")]
    InvalidConfig(String),
    #[error("{item} has no footprint; resolve the catalog first")]
    Unresolved { item: FurnitureId },
    #[error("{item} belongs to room {room:?}, which does not exist")]
    UnknownRoom { item: FurnitureId, room: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RefinerConfig {
    /// Minimum walking clearance, feet.
    pub clearance_delta: f64,
    /// Greedy step length, feet.
    pub step_lambda: f64,
    pub flush_tolerance: f64,
    pub max_iterations: usize,
    pub rotation_allowed: bool,
}

impl Default for RefinerConfig {
    fn default() -> Self {
        Self {
            clearance_delta: 1.0,
            step_lambda: 0.5,
            flush_tolerance: 0.05,
            max_iterations: 10_000,
            rotation_allowed: true,
        }
    }
}

impl RefinerConfig {
    pub fn validate(&self) -> Result<(), RefineError> {
        let bad = |m: &str| Err(RefineError::InvalidConfig(m.to_string()));
        if !(self.clearance_delta >= 0.0 && self.clearance_delta.is_finite()) {
            return bad("clearance_delta must be a finite number >= 0");
        }
        if !(self.step_lambda > 0.0 && self.step_lambda.is_finite()) {
            return bad("step_lambda must be a finite number > 0");
        }
        if !(self.flush_tolerance >= 0.0 && self.flush_tolerance.is_finite()) {
            return bad("flush_tolerance must be a finite number >= 0");
        }
        if self.max_iterations < 1 {
            return bad("max_iterations must be at least 1");
        }
        Ok(())
    }
}

/// Per-condition outcome of the feasibility test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verdict {
    /// Inside the room.
    pub a: bool,
    /// Clearance from every obstacle.
    pub b: bool,
    /// Headboard flush with a wall; always true for freestanding items.
    pub c: bool,
    pub overall: bool,
    /// Smallest distance to a non-exempt obstacle, if any.
    pub clearance: Option<f64>,
}

/// The headboard edge of a box: its axis, the coordinate of its line, the
/// tangential extent and the outward sign along the normal axis.
struct Headboard {
    axis: Axis,
    line: f64,
    lo: f64,
    hi: f64,
    outward: f64,
}

fn headboard(b: &AlignedBox, facing: Facing) -> Headboard {
    match facing {
        Facing::North => Headboard {
            axis: Axis::Horizontal,
            line: b.max.y,
            lo: b.min.x,
            hi: b.max.x,
            outward: 1.0,
        },
        Facing::South => Headboard {
            axis: Axis::Horizontal,
            line: b.min.y,
            lo: b.min.x,
            hi: b.max.x,
            outward: -1.0,
        },
        Facing::East => Headboard {
            axis: Axis::Vertical,
            line: b.max.x,
            lo: b.min.y,
            hi: b.max.y,
            outward: 1.0,
        },
        Facing::West => Headboard {
            axis: Axis::Vertical,
            line: b.min.x,
            lo: b.min.y,
            hi: b.max.y,
            outward: -1.0,
        },
    }
}

/// (line coordinate, tangential lo, tangential hi) of an axis-aligned run.
fn run_frame(run: &WallRun) -> Option<(Axis, f64, f64, f64)> {
    let s = run.run.normalized();
    match s.axis()? {
        Axis::Horizontal => Some((Axis::Horizontal, s.start.y, s.start.x, s.end.x)),
        Axis::Vertical => Some((Axis::Vertical, s.start.x, s.start.y, s.end.y)),
    }
}

/// Walls of `room` that the headboard of `b` rests against.
fn flush_walls(b: &AlignedBox, facing: Facing, room: &RoomRegion, tol: f64) -> Vec<WallId> {
    let hb = headboard(b, facing);
    let mut out = Vec::new();
    for run in &room.bounding_walls {
        let Some((axis, line, lo, hi)) = run_frame(run) else {
            continue;
        };
        if axis != hb.axis {
            continue;
        }
        let gap = hb.outward * (line - hb.line);
        let overlap = hi.min(hb.hi) - lo.max(hb.lo);
        if gap >= -EPS && gap <= tol + EPS && overlap > EPS && !out.contains(&run.wall) {
            out.push(run.wall);
        }
    }
    out
}

/// Box pulled back by `tol` on its headboard side.
fn relaxed(b: &AlignedBox, facing: Facing, tol: f64) -> AlignedBox {
    let mut r = *b;
    match facing {
        Facing::North => r.max.y = (r.max.y - tol).max(r.min.y + EPS),
        Facing::South => r.min.y = (r.min.y + tol).min(r.max.y - EPS),
        Facing::East => r.max.x = (r.max.x - tol).max(r.min.x + EPS),
        Facing::West => r.min.x = (r.min.x + tol).min(r.max.x - EPS),
    }
    r
}

/// Feasibility of `item` (with its current facing) centered at `p`.
///
/// The item's own entry in `occ`, if any, is ignored. Items without a resolved
/// footprint are never feasible.
pub fn is_feasible(
    item: &FurnitureInstance,
    p: Point2,
    room: &RoomRegion,
    occ: &OccupancySet,
    cfg: &RefinerConfig,
) -> Verdict {
    let Some(b) = item.box_at(p, item.facing) else {
        return Verdict {
            a: false,
            b: false,
            c: false,
            overall: false,
            clearance: None,
        };
    };
    let adjacent = item.wall_adjacent();
    let (a, flush) = if adjacent {
        let a = box_inside_polygon(
            &relaxed(&b, item.facing, cfg.flush_tolerance),
            &room.boundary,
        );
        (a, flush_walls(&b, item.facing, room, cfg.flush_tolerance))
    } else {
        (box_inside_polygon(&b, &room.boundary), Vec::new())
    };
    let c = !adjacent || !flush.is_empty();
    let clearance = occ
        .iter()
        .filter(|o| o.source != ObstacleSource::Furniture(item.id))
        .filter(|o| !matches!(o.source, ObstacleSource::Wall(w) if flush.contains(&w)))
        .map(|o| box_distance(&b, &o.bounds))
        .min_by(f64::total_cmp);
    let b_ok = clearance.is_none_or(|d| d >= cfg.clearance_delta - EPS);
    Verdict {
        a,
        b: b_ok,
        c,
        overall: a && b_ok && c,
        clearance,
    }
}

/// Unit vector from `p` toward the closest point of the nearest wall, and
/// that wall. Equidistant walls resolve to the lowest id.
pub fn nearest_wall_direction(
    p: Point2,
    walls: &[Wall],
) -> Result<((f64, f64), WallId), RefineError> {
    let (wall, d) = walls
        .iter()
        .map(|w| (w, point_to_segment_distance(p, &w.centerline)))
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.id.cmp(&b.0.id)))
        .ok_or(RefineError::NoWalls)?;
    if d <= EPS {
        return Err(RefineError::ZeroDirection { point: p });
    }
    let q = wall.centerline.closest_point(p);
    Ok((((q.x - p.x) / d, (q.y - p.y) / d), wall.id))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    /// The input position.
    Initial,
    /// Same center, headboard turned toward the target wall.
    Rotate,
    /// A λ step toward the wall (the last one clamped to contact).
    Approach,
    /// Pulled back to contact from a box that already crossed the wall line.
    Snap,
    /// A λ offset along the wall from the contact position.
    Slide,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceStep {
    pub center: Point2,
    pub facing: Facing,
    pub phase: Phase,
    pub wall: Option<WallId>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Placed,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlacementTrace {
    pub item: FurnitureId,
    pub steps: Vec<TraceStep>,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Placement {
    pub center: Point2,
    pub facing: Facing,
    pub trace: PlacementTrace,
}

struct Search<'a> {
    item: FurnitureInstance,
    room: &'a RoomRegion,
    occ: &'a OccupancySet,
    cfg: &'a RefinerConfig,
    steps: Vec<TraceStep>,
}

impl Search<'_> {
    /// Evaluates one candidate. `None` once the step budget is spent.
    fn eval(
        &mut self,
        center: Point2,
        facing: Facing,
        phase: Phase,
        wall: Option<WallId>,
    ) -> Option<bool> {
        if self.steps.len() > self.cfg.max_iterations {
            return None;
        }
        self.item.facing = facing;
        let verdict = is_feasible(&self.item, center, self.room, self.occ, self.cfg);
        self.steps.push(TraceStep {
            center,
            facing,
            phase,
            wall,
            verdict,
        });
        Some(verdict.overall)
    }

    /// Runs the whole search; returns the feasible step, if any.
    fn run(&mut self) -> Option<(Point2, Facing)> {
        let p0 = self.item.initial_center;
        let facing0 = self.item.facing;
        if self.eval(p0, facing0, Phase::Initial, None)? {
            return Some((p0, facing0));
        }
        let mut runs: Vec<(f64, &WallRun)> = self
            .room
            .bounding_walls
            .iter()
            .map(|r| (point_to_segment_distance(p0, &r.run), r))
            .collect();
        runs.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (d, run) in runs {
            if d <= EPS {
                continue;
            }
            if let Some(hit) = self.try_run(p0, facing0, d, run) {
                return hit;
            }
        }
        None
    }

    /// Approach then slide along one wall run. `Some(None)` means the budget
    /// ran out, `None` means this run gave nothing.
    #[allow(clippy::option_option)]
    fn try_run(
        &mut self,
        p0: Point2,
        facing0: Facing,
        d: f64,
        run: &WallRun,
    ) -> Option<Option<(Point2, Facing)>> {
        let (axis, line, lo, hi) = run_frame(run)?;
        let wall = Some(run.wall);
        // normal coordinate of the center, its sign toward the wall
        let (pn, pt) = match axis {
            Axis::Horizontal => (p0.y, p0.x),
            Axis::Vertical => (p0.x, p0.y),
        };
        let sign = if line > pn { 1.0 } else { -1.0 };
        let toward = match (axis, sign > 0.0) {
            (Axis::Horizontal, true) => Facing::North,
            (Axis::Horizontal, false) => Facing::South,
            (Axis::Vertical, true) => Facing::East,
            (Axis::Vertical, false) => Facing::West,
        };
        let adjacent = self.item.wall_adjacent();
        let facing = if !adjacent {
            facing0
        } else if self.cfg.rotation_allowed {
            toward
        } else if facing0 == toward {
            facing0
        } else {
            return None;
        };
        let make = |n: f64, t: f64| match axis {
            Axis::Horizontal => Point2::new(t, n),
            Axis::Vertical => Point2::new(n, t),
        };
        if facing != facing0 {
            match self.eval(p0, facing, Phase::Rotate, wall) {
                None => return Some(None),
                Some(true) => return Some(Some((p0, facing))),
                Some(false) => {}
            }
        }
        let b = self.item.box_at(p0, facing)?;
        let (half_n, half_t) = match axis {
            Axis::Horizontal => (b.height() / 2.0, b.width() / 2.0),
            Axis::Vertical => (b.width() / 2.0, b.height() / 2.0),
        };
        let standoff = if adjacent {
            0.0
        } else {
            self.cfg.clearance_delta
        };
        let q = run.run.closest_point(p0);
        let (vx, vy) = ((q.x - p0.x) / d, (q.y - p0.y) / d);
        let (vn, vt) = match axis {
            Axis::Horizontal => (vy, vx),
            Axis::Vertical => (vx, vy),
        };
        if vn.abs() < EPS {
            return None;
        }
        let (mut n, mut t) = (pn, pt);
        let mut gap = sign * (line - n) - half_n - standoff;
        if gap < -EPS {
            n -= sign * -gap;
            match self.eval(make(n, t), facing, Phase::Snap, wall) {
                None => return Some(None),
                Some(true) => return Some(Some((make(n, t), facing))),
                Some(false) => {}
            }
        } else {
            let lambda = self.cfg.step_lambda;
            while gap > EPS {
                let progress = lambda * vn.abs();
                if progress >= gap - EPS {
                    let s = gap / vn.abs();
                    n = line - sign * (half_n + standoff);
                    t += vt * s;
                    gap = 0.0;
                } else {
                    n += vn * lambda;
                    t += vt * lambda;
                    gap -= progress;
                }
                match self.eval(make(n, t), facing, Phase::Approach, wall) {
                    None => return Some(None),
                    Some(true) => return Some(Some((make(n, t), facing))),
                    Some(false) => {}
                }
            }
        }
        // slide along the wall while the headboard still meets the run
        let (min_t, max_t) = (lo - half_t, hi + half_t);
        let lambda = self.cfg.step_lambda;
        let mut open = [true, true];
        let mut k = 1.0;
        while open[0] || open[1] {
            for (i, dir) in [1.0, -1.0].into_iter().enumerate() {
                if !open[i] {
                    continue;
                }
                let s = t + dir * k * lambda;
                let beyond = if dir > 0.0 {
                    s >= max_t - EPS
                } else {
                    s <= min_t + EPS
                };
                if beyond {
                    open[i] = false;
                    continue;
                }
                if s <= min_t + EPS || s >= max_t - EPS {
                    continue;
                }
                match self.eval(make(n, s), facing, Phase::Slide, wall) {
                    None => return Some(None),
                    Some(true) => return Some(Some((make(n, s), facing))),
                    Some(false) => {}
                }
            }
            k += 1.0;
        }
        None
    }
}

/// Greedy search for a feasible center near the item's initial one. On
/// success the placed box is added to `occ`; on failure `occ` is untouched.
pub fn greedy_wall_placement(
    item: &FurnitureInstance,
    room: &RoomRegion,
    occ: &mut OccupancySet,
    cfg: &RefinerConfig,
) -> Result<Placement, RefineError> {
    cfg.validate()?;
    if item.footprint.is_none() {
        return Err(RefineError::Unresolved { item: item.id });
    }
    let mut search = Search {
        item: item.clone(),
        room,
        occ,
        cfg,
        steps: Vec::new(),
    };
    let found = search.run();
    let steps = search.steps;
    match found {
        Some((center, facing)) => {
            let mut placed = item.clone();
            placed.facing = facing;
            let b = placed
                .box_at(center, facing)
                .expect("footprint checked above");
            occ.push(b, ObstacleSource::Furniture(item.id));
            Ok(Placement {
                center,
                facing,
                trace: PlacementTrace {
                    item: item.id,
                    steps,
                    outcome: Outcome::Placed,
                },
            })
        }
        None => {
            log::info!("{} ({}) could not be placed", item.id, item.name);
            Err(RefineError::PlacementFailed {
                item: item.id,
                trace: Box::new(PlacementTrace {
                    item: item.id,
                    steps,
                    outcome: Outcome::Failed,
                }),
            })
        }
    }
}

/// Facings the oracle and the greedy search may choose for `item`.
pub fn candidate_facings(item: &FurnitureInstance, cfg: &RefinerConfig) -> Vec<Facing> {
    if item.wall_adjacent() && cfg.rotation_allowed {
        Facing::ALL.to_vec()
    } else {
        vec![item.facing]
    }
}

/// Every grid center in the room's bounding box (spacing `resolution`,
/// anchored at its lower-left corner) and facing where `item` is feasible.
pub fn brute_force_feasible_set(
    item: &FurnitureInstance,
    room: &RoomRegion,
    occ: &OccupancySet,
    cfg: &RefinerConfig,
    resolution: f64,
) -> Vec<(Point2, Facing)> {
    assert!(resolution > 0.0, "resolution must be positive");
    let bounds = room.boundary.bounds();
    let nx = ((bounds.width() / resolution) + EPS).floor() as usize;
    let ny = ((bounds.height() / resolution) + EPS).floor() as usize;
    let mut probe = item.clone();
    let mut out = Vec::new();
    for facing in candidate_facings(item, cfg) {
        probe.facing = facing;
        for j in 0..=ny {
            for i in 0..=nx {
                let p = Point2::new(
                    bounds.min.x + i as f64 * resolution,
                    bounds.min.y + j as f64 * resolution,
                );
                if is_feasible(&probe, p, room, occ, cfg).overall {
                    out.push((p, facing));
                }
            }
        }
    }
    out
}

/// Output of [`refine_plan`].
#[derive(Debug, Clone, PartialEq)]
pub struct Refinement {
    pub plan: FloorPlan,
    /// One trace per item, in processing order.
    pub traces: Vec<PlacementTrace>,
    pub failed: Vec<FurnitureId>,
    pub occupancy: OccupancySet,
}

/// Places every item in turn: rooms by ascending name, items in input order
/// within a room. Each success becomes an obstacle for the items after it.
pub fn refine_plan(plan: &FloorPlan, cfg: &RefinerConfig) -> Result<Refinement, RefineError> {
    cfg.validate()?;
    let mut order: Vec<usize> = (0..plan.furniture.len()).collect();
    for &i in &order {
        let item = &plan.furniture[i];
        if item.footprint.is_none() {
            return Err(RefineError::Unresolved { item: item.id });
        }
        if plan.room(&item.room_name).is_none() {
            return Err(RefineError::UnknownRoom {
                item: item.id,
                room: item.room_name.clone(),
            });
        }
    }
    order.sort_by(|&a, &b| {
        plan.furniture[a]
            .room_name
            .cmp(&plan.furniture[b].room_name)
            .then(a.cmp(&b))
    });

    let mut out = plan.clone();
    for item in &mut out.furniture {
        item.refined_center = None;
    }
    let mut occ = occupancy_from_plan(&out, None, 0.0);
    let mut traces = Vec::with_capacity(order.len());
    let mut failed = Vec::new();
    for i in order {
        let item = &plan.furniture[i];
        let room = plan.room(&item.room_name).expect("checked above");
        let mut start = item.clone();
        start.refined_center = None;
        match greedy_wall_placement(&start, room, &mut occ, cfg) {
            Ok(placement) => {
                out.furniture[i].refined_center = Some(placement.center);
                out.furniture[i].facing = placement.facing;
                traces.push(placement.trace);
            }
            Err(RefineError::PlacementFailed { item, trace }) => {
                failed.push(item);
                traces.push(*trace);
            }
            Err(other) => return Err(other),
        }
    }
    Ok(Refinement {
        plan: out,
        traces,
        failed,
        occupancy: occ,
    })
}

/// Re-check of a refined plan against its final occupancy.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    /// Placed items that are not feasible among all other obstacles.
    pub violations: Vec<(FurnitureId, Verdict)>,
    /// Unplaced items for which the grid oracle still finds feasible centers.
    pub missed: Vec<(FurnitureId, usize)>,
}

impl VerifyReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_refinement(plan: &FloorPlan, cfg: &RefinerConfig, resolution: f64) -> VerifyReport {
    let mut report = VerifyReport::default();
    for item in &plan.furniture {
        let Some(room) = plan.room(&item.room_name) else {
            continue;
        };
        let occ = occupancy_from_plan(plan, Some(item.id), 0.0);
        match item.refined_center {
            Some(p) => {
                let v = is_feasible(item, p, room, &occ, cfg);
                if !v.overall {
                    report.violations.push((item.id, v));
                }
            }
            None => {
                let n = brute_force_feasible_set(item, room, &occ, cfg, resolution).len();
                if n > 0 {
                    log::info!(
                        "{} missed by the greedy search; oracle found {n} centers",
                        item.id
                    );
                    report.missed.push((item.id, n));
                }
            }
        }
    }
    report
}
