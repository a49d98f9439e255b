//! Rule-based plan checks: room contents, openings and circulation.
//!
//! Checks only read the plan and report findings; they never move anything.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{segments_collinear_overlap, AlignedBox, Axis, Point2, Segment2, EPS};
use crate::model::{FloorPlan, Opening, OpeningKind, RoomSide};
use crate::refine::RefinerConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Info => "info",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Code {
    MissingFurniture,
    RoomTooSmall,
    OrphanOpening,
    OpeningOverlap,
    WindowOnInteriorWall,
    WindowDoorClearance,
    DoorSwingBlocked,
    PathBlocked,
    PathNarrow,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::MissingFurniture => "MISSING_FURNITURE",
            Code::RoomTooSmall => "ROOM_TOO_SMALL",
            Code::OrphanOpening => "ORPHAN_OPENING",
            Code::OpeningOverlap => "OPENING_OVERLAP",
            Code::WindowOnInteriorWall => "WINDOW_ON_INTERIOR_WALL",
            Code::WindowDoorClearance => "WINDOW_DOOR_CLEARANCE",
            Code::DoorSwingBlocked => "DOOR_SWING_BLOCKED",
            Code::PathBlocked => "PATH_BLOCKED",
            Code::PathNarrow => "PATH_NARROW",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub severity: Severity,
    pub code: Code,
    /// Room name, opening id, or a `A/B` room pair.
    pub subject: String,
    pub message: String,
    pub suggested_action: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Summary {
    pub errors: usize,
    pub warnings: usize,
    pub info: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct CheckReport {
    pub findings: Vec<Finding>,
    pub summary: Summary,
}

impl CheckReport {
    pub fn from_findings(mut findings: Vec<Finding>) -> Self {
        findings.sort_by(|a, b| {
            (a.code.as_str(), &a.subject, &a.message).cmp(&(
                b.code.as_str(),
                &b.subject,
                &b.message,
            ))
        });
        let count = |s| findings.iter().filter(|f| f.severity == s).count();
        let summary = Summary {
            errors: count(Severity::Error),
            warnings: count(Severity::Warning),
            info: count(Severity::Info),
        };
        Self { findings, summary }
    }

    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }

    /// 0 clean, 2 warnings only, 3 any error.
    pub fn exit_code(&self) -> i32 {
        if self.summary.errors > 0 {
            3
        } else if self.summary.warnings > 0 {
            2
        } else {
            0
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for f in &self.findings {
            out.push_str(&format!(
                "{:<7} {} [{}] {}\n        -> {}\n",
                f.severity, f.code, f.subject, f.message, f.suggested_action
            ));
        }
        out.push_str(&format!(
            "{} error(s), {} warning(s), {} info\n",
            self.summary.errors, self.summary.warnings, self.summary.info
        ));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RequirementsError {
    #[error("requirements JSON: {0}")]
    Json(String),
    #[error("requirements file has no requirements_version")]
    MissingVersion,
    #[error("unsupported requirements_version {0}")]
    UnsupportedVersion(u64),
    #[error("room kind {0}: minimum area must be positive")]
    NonPositiveArea(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoomRule {
    pub required: Vec<String>,
    pub min_area: f64,
}

/// Room-kind label to required furniture kinds and minimum area (sq ft).
#[derive(Debug, Clone, PartialEq)]
pub struct RoomRequirements {
    pub rules: BTreeMap<String, RoomRule>,
}

const DEFAULT_REQUIREMENTS: &str = include_str!("../data/default_requirements.json");

impl RoomRequirements {
    pub const VERSION: u64 = 1;

    pub fn from_json(text: &str) -> Result<Self, RequirementsError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| RequirementsError::Json(e.to_string()))?;
        let obj = value
            .as_object()
            .ok_or_else(|| RequirementsError::Json("top level must be an object".into()))?;
        let version = obj
            .get("requirements_version")
            .and_then(|v| v.as_u64())
            .ok_or(RequirementsError::MissingVersion)?;
        if version != Self::VERSION {
            return Err(RequirementsError::UnsupportedVersion(version));
        }
        let mut rules = BTreeMap::new();
        for (kind, raw) in obj
            .iter()
            .filter(|(k, _)| k.as_str() != "requirements_version")
        {
            let rule: RoomRule = serde_json::from_value(raw.clone())
                .map_err(|e| RequirementsError::Json(format!("{kind}: {e}")))?;
            if !(rule.min_area.is_finite() && rule.min_area > 0.0) {
                return Err(RequirementsError::NonPositiveArea(kind.clone()));
            }
            rules.insert(kind.clone(), rule);
        }
        Ok(Self { rules })
    }
}

impl Default for RoomRequirements {
    fn default() -> Self {
        Self::from_json(DEFAULT_REQUIREMENTS).expect("bundled requirements are valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CheckConfig {
    /// Raster cell size for circulation, feet.
    pub grid_cell: f64,
    /// Narrowest acceptable passage, feet.
    pub clearance_delta: f64,
    /// Minimum window-to-door gap on a shared wall, feet.
    pub window_door_gap: f64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            grid_cell: 0.5,
            clearance_delta: 1.0,
            window_door_gap: 2.0,
        }
    }
}

impl CheckConfig {
    pub fn from_refiner(cfg: &RefinerConfig, grid_cell: f64) -> Self {
        Self {
            grid_cell,
            clearance_delta: cfg.clearance_delta,
            ..Self::default()
        }
    }
}

fn finding(
    severity: Severity,
    code: Code,
    subject: impl Into<String>,
    message: String,
    action: &str,
) -> Finding {
    Finding {
        severity,
        code,
        subject: subject.into(),
        message,
        suggested_action: action.to_string(),
    }
}

const REDESIGN: &str = "redesign the room or merge it with an adjacent zone";

pub fn check_room_contents(plan: &FloorPlan, req: &RoomRequirements) -> Vec<Finding> {
    let mut out = Vec::new();
    for room in &plan.rooms {
        let Some(rule) = req.rules.get(&room.name) else {
            continue;
        };
        for kind in &rule.required {
            let present = plan
                .furniture
                .iter()
                .any(|f| f.room_name == room.name && f.name == *kind);
            if !present {
                out.push(finding(
                    Severity::Error,
                    Code::MissingFurniture,
                    &room.name,
                    format!("{} has no {kind}", room.name),
                    REDESIGN,
                ));
            }
        }
        if room.area() < rule.min_area - EPS {
            out.push(finding(
                Severity::Error,
                Code::RoomTooSmall,
                &room.name,
                format!(
                    "{} covers {:.2} sq ft, below the {:.2} sq ft minimum",
                    room.name,
                    room.area(),
                    rule.min_area
                ),
                REDESIGN,
            ));
        }
    }
    out
}

fn axis_interval(s: &Segment2) -> (f64, f64) {
    let n = s.normalized();
    match n.axis() {
        Some(Axis::Vertical) => (n.start.y, n.end.y),
        _ => (n.start.x, n.end.x),
    }
}

/// Swing square of a door: side equal to its span, on the side it opens into.
/// `None` for orphans.
pub fn door_swing(plan: &FloorPlan, door: &Opening) -> Option<AlignedBox> {
    let (neg, pos) = door.connects.as_ref()?;
    let area = |side: &RoomSide| match side {
        RoomSide::Room(name) => plan.room(name).map_or(0.0, |r| r.area()),
        RoomSide::Exterior => -1.0,
    };
    let sign = if area(pos) > area(neg) + EPS {
        1.0
    } else {
        -1.0
    };
    let sign = if matches!(neg, RoomSide::Exterior) {
        1.0
    } else {
        sign
    };
    let s = door.span.normalized();
    let len = s.length();
    let (a, b) = match s.axis()? {
        Axis::Horizontal => (
            Point2::new(s.start.x, s.start.y),
            Point2::new(s.end.x, s.start.y + sign * len),
        ),
        Axis::Vertical => (
            Point2::new(s.start.x, s.start.y),
            Point2::new(s.start.x + sign * len, s.end.y),
        ),
    };
    AlignedBox::new(
        Point2::new(a.x.min(b.x), a.y.min(b.y)),
        Point2::new(a.x.max(b.x), a.y.max(b.y)),
    )
    .ok()
}

/// True when the axis-aligned segment passes through the open interior of `b`.
fn crosses_interior(s: &Segment2, b: &AlignedBox) -> bool {
    let n = s.normalized();
    match n.axis() {
        Some(Axis::Vertical) => {
            b.min.x + EPS < n.start.x
                && n.start.x < b.max.x - EPS
                && n.end.y.min(b.max.y) - n.start.y.max(b.min.y) > EPS
        }
        Some(Axis::Horizontal) => {
            b.min.y + EPS < n.start.y
                && n.start.y < b.max.y - EPS
                && n.end.x.min(b.max.x) - n.start.x.max(b.min.x) > EPS
        }
        None => false,
    }
}

fn pair_subject(a: &Opening, b: &Opening) -> String {
    let (x, y) = if a.id <= b.id { (a, b) } else { (b, a) };
    format!("{}+{}", x.id, y.id)
}

pub fn check_openings(plan: &FloorPlan, cfg: &CheckConfig) -> Vec<Finding> {
    let mut out = Vec::new();
    let hosted: Vec<&Opening> = plan
        .openings
        .iter()
        .filter(|o| o.host_wall.is_some())
        .collect();
    for o in plan.openings.iter().filter(|o| o.host_wall.is_none()) {
        out.push(finding(
            Severity::Error,
            Code::OrphanOpening,
            o.id.to_string(),
            format!("{} at {} does not lie on any wall", o.id, o.span),
            "move the opening onto a wall segment",
        ));
    }
    for (i, a) in hosted.iter().enumerate() {
        for b in &hosted[i + 1..] {
            if segments_collinear_overlap(&a.span, &b.span).is_some() {
                out.push(finding(
                    Severity::Error,
                    Code::OpeningOverlap,
                    pair_subject(a, b),
                    format!("{} and {} overlap along the wall", a.id, b.id),
                    "shift one of the openings along its wall",
                ));
                continue;
            }
            let (door, window) = match (a.kind(), b.kind()) {
                (OpeningKind::Door, OpeningKind::Window) => (a, b),
                (OpeningKind::Window, OpeningKind::Door) => (b, a),
                _ => continue,
            };
            if door.host_wall != window.host_wall {
                continue;
            }
            let (d0, d1) = axis_interval(&door.span);
            let (w0, w1) = axis_interval(&window.span);
            let gap = (w0 - d1).max(d0 - w1);
            if gap < cfg.window_door_gap - EPS {
                out.push(finding(
                    Severity::Error,
                    Code::WindowDoorClearance,
                    pair_subject(a, b),
                    format!(
                        "{} is {:.2} ft from the edge of {}; at least {:.2} ft required",
                        window.id,
                        gap.max(0.0),
                        door.id,
                        cfg.window_door_gap
                    ),
                    "move the window away from the door",
                ));
            }
        }
    }
    for w in hosted.iter().filter(|o| o.kind() == OpeningKind::Window) {
        let exterior = w
            .connects
            .as_ref()
            .is_some_and(|(p, q)| *p == RoomSide::Exterior || *q == RoomSide::Exterior);
        if !exterior {
            out.push(finding(
                Severity::Error,
                Code::WindowOnInteriorWall,
                w.id.to_string(),
                format!("{} sits on an interior wall", w.id),
                "place windows on exterior walls only",
            ));
        }
    }
    for d in hosted.iter().filter(|o| o.kind() == OpeningKind::Door) {
        let Some(swing) = door_swing(plan, d) else {
            continue;
        };
        let mut blockers: Vec<String> = plan
            .furniture
            .iter()
            .filter(|f| f.current_box().is_some_and(|b| b.overlaps_interior(&swing)))
            .map(|f| format!("{} ({})", f.id, f.name))
            .collect();
        blockers.extend(
            plan.walls
                .iter()
                .filter(|w| Some(w.id) != d.host_wall && crosses_interior(&w.centerline, &swing))
                .map(|w| w.id.to_string()),
        );
        if !blockers.is_empty() {
            out.push(finding(
                Severity::Error,
                Code::DoorSwingBlocked,
                d.id.to_string(),
                format!("swing of {} is obstructed by {}", d.id, blockers.join(", ")),
                "clear the door swing area or move the door",
            ));
        }
    }
    out
}

/// Column and row of a raster cell.
pub type Cell = (usize, usize);

/// Raster of the plan used for circulation analysis.
///
/// A cell is free when no furniture box overlaps its interior. Walls, minus
/// the spans of hosted doors, block moves between 4-neighbours whose
/// centre-to-centre segment touches them. Passages are resolved to the cell
/// size, so widths are accurate to within one cell.
pub struct CirculationGrid {
    pub origin: Point2,
    pub cell: f64,
    pub nx: usize,
    pub ny: usize,
    pub free: Vec<bool>,
    /// Move (i,j) -> (i+1,j) crosses a barrier.
    pub block_right: Vec<bool>,
    /// Move (i,j) -> (i,j+1) crosses a barrier.
    pub block_up: Vec<bool>,
}

/// Wall pieces left after cutting out hosted door spans.
pub fn barrier_segments(plan: &FloorPlan) -> Vec<Segment2> {
    let mut out = Vec::new();
    for w in &plan.walls {
        let s = w.centerline.normalized();
        let (lo, hi) = axis_interval(&s);
        let mut cuts: Vec<(f64, f64)> = plan
            .doors()
            .filter(|d| d.host_wall == Some(w.id))
            .map(|d| axis_interval(&d.span))
            .collect();
        cuts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut pos = lo;
        let mut pieces = Vec::new();
        for (c0, c1) in cuts {
            if c0 > pos + EPS {
                pieces.push((pos, c0));
            }
            pos = pos.max(c1);
        }
        if hi > pos + EPS {
            pieces.push((pos, hi));
        }
        for (a, b) in pieces {
            let seg = match s.axis() {
                Some(Axis::Vertical) => Segment2 {
                    start: Point2::new(s.start.x, a),
                    end: Point2::new(s.start.x, b),
                },
                _ => Segment2 {
                    start: Point2::new(a, s.start.y),
                    end: Point2::new(b, s.start.y),
                },
            };
            out.push(seg);
        }
    }
    out
}

impl CirculationGrid {
    pub fn build(plan: &FloorPlan, cell: f64) -> Option<Self> {
        let extent = plan.extent?;
        let nx = ((extent.width() / cell) - EPS).ceil().max(1.0) as usize;
        let ny = ((extent.height() / cell) - EPS).ceil().max(1.0) as usize;
        let origin = extent.min;
        let boxes: Vec<AlignedBox> = plan
            .furniture
            .iter()
            .filter_map(|f| f.current_box())
            .collect();
        let mut free = vec![true; nx * ny];
        for j in 0..ny {
            for i in 0..nx {
                let sq = AlignedBox {
                    min: Point2::new(origin.x + i as f64 * cell, origin.y + j as f64 * cell),
                    max: Point2::new(
                        origin.x + (i + 1) as f64 * cell,
                        origin.y + (j + 1) as f64 * cell,
                    ),
                };
                free[j * nx + i] = !boxes.iter().any(|b| b.overlaps_interior(&sq));
            }
        }
        let barriers: Vec<AlignedBox> = barrier_segments(plan).iter().map(|s| s.bounds()).collect();
        let mut grid = Self {
            origin,
            cell,
            nx,
            ny,
            free,
            block_right: vec![false; nx * ny],
            block_up: vec![false; nx * ny],
        };
        for j in 0..ny {
            for i in 0..nx {
                let c = grid.center(i, j);
                if i + 1 < nx {
                    let m = AlignedBox {
                        min: c,
                        max: Point2::new(c.x + cell, c.y),
                    };
                    grid.block_right[j * nx + i] = barriers.iter().any(|b| b.intersects(&m));
                }
                if j + 1 < ny {
                    let m = AlignedBox {
                        min: c,
                        max: Point2::new(c.x, c.y + cell),
                    };
                    grid.block_up[j * nx + i] = barriers.iter().any(|b| b.intersects(&m));
                }
            }
        }
        Some(grid)
    }

    pub fn center(&self, i: usize, j: usize) -> Point2 {
        Point2::new(
            self.origin.x + (i as f64 + 0.5) * self.cell,
            self.origin.y + (j as f64 + 0.5) * self.cell,
        )
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Open 4-neighbour moves from cell (i, j).
    fn moves(&self, i: usize, j: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let mut v = Vec::with_capacity(4);
        if i + 1 < self.nx && !self.block_right[self.idx(i, j)] {
            v.push((i + 1, j));
        }
        if i > 0 && !self.block_right[self.idx(i - 1, j)] {
            v.push((i - 1, j));
        }
        if j + 1 < self.ny && !self.block_up[self.idx(i, j)] {
            v.push((i, j + 1));
        }
        if j > 0 && !self.block_up[self.idx(i, j - 1)] {
            v.push((i, j - 1));
        }
        v.into_iter()
    }

    /// Component label per free cell (`usize::MAX` for blocked cells).
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.nx * self.ny];
        let mut next = 0;
        for start in 0..self.nx * self.ny {
            if !self.free[start] || label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            let mut queue = VecDeque::from([(start % self.nx, start / self.nx)]);
            while let Some((i, j)) = queue.pop_front() {
                for (a, b) in self.moves(i, j) {
                    let k = self.idx(a, b);
                    if self.free[k] && label[k] == usize::MAX {
                        label[k] = next;
                        queue.push_back((a, b));
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// Side cells of a door span: the nearest cell on each side of its wall at
    /// the span midpoint. A side outside the raster is `None`.
    pub fn door_cells(&self, span: &Segment2) -> (Option<Cell>, Option<Cell>) {
        let m = span.midpoint();
        let (line, t, n_cells, t_origin, n_origin, vertical) = match span.axis() {
            Some(Axis::Vertical) => (m.x, m.y, self.nx, self.origin.y, self.origin.x, true),
            _ => (m.y, m.x, self.ny, self.origin.x, self.origin.y, false),
        };
        let t_cells = if vertical { self.ny } else { self.nx };
        let ti = ((t - t_origin) / self.cell).floor();
        if ti < 0.0 || ti >= t_cells as f64 {
            return (None, None);
        }
        let ti = ti as usize;
        let centre = |k: usize| n_origin + (k as f64 + 0.5) * self.cell;
        let below = (0..n_cells).rev().find(|&k| centre(k) < line - EPS);
        let above = (0..n_cells).find(|&k| centre(k) > line + EPS);
        let cell = |k: Option<usize>| k.map(|k| if vertical { (k, ti) } else { (ti, k) });
        (cell(below), cell(above))
    }

    /// Cells (lower-left corners) of every k×k block that is entirely free and
    /// crossed by no barrier, with blocks joined when they shift by one cell.
    pub fn wide_components(&self, k: usize) -> Vec<usize> {
        let k = k.max(1);
        let (nx, ny) = (self.nx, self.ny);
        let mut label = vec![usize::MAX; nx * ny];
        if k > nx || k > ny {
            return label;
        }
        let (bx, by) = (nx - k + 1, ny - k + 1);
        let valid_block = |i: usize, j: usize| -> bool {
            for b in j..j + k {
                for a in i..i + k {
                    if !self.free[self.idx(a, b)] {
                        return false;
                    }
                    if a + 1 < i + k && self.block_right[self.idx(a, b)] {
                        return false;
                    }
                    if b + 1 < j + k && self.block_up[self.idx(a, b)] {
                        return false;
                    }
                }
            }
            true
        };
        let mut valid = vec![false; nx * ny];
        for j in 0..by {
            for i in 0..bx {
                valid[self.idx(i, j)] = valid_block(i, j);
            }
        }
        let mut next = 0;
        for j in 0..by {
            for i in 0..bx {
                let s = self.idx(i, j);
                if !valid[s] || label[s] != usize::MAX {
                    continue;
                }
                label[s] = next;
                let mut queue = VecDeque::from([(i, j)]);
                while let Some((a, b)) = queue.pop_front() {
                    for (c, d) in self.moves(a, b) {
                        if c >= bx || d >= by {
                            continue;
                        }
                        let t = self.idx(c, d);
                        if valid[t] && label[t] == usize::MAX {
                            label[t] = next;
                            queue.push_back((c, d));
                        }
                    }
                }
                next += 1;
            }
        }
        label
    }

    /// Wide-component labels of all blocks containing cell (i, j).
    fn blocks_containing(&self, wide: &[usize], k: usize, (i, j): (usize, usize)) -> Vec<usize> {
        let mut out = Vec::new();
        for b in j.saturating_sub(k - 1)..=j {
            for a in i.saturating_sub(k - 1)..=i {
                let l = wide[self.idx(a, b)];
                if l != usize::MAX && !out.contains(&l) {
                    out.push(l);
                }
            }
        }
        out
    }
}

fn side_name(s: &RoomSide) -> String {
    match s {
        RoomSide::Room(n) => n.clone(),
        RoomSide::Exterior => "Exterior".to_string(),
    }
}

fn room_pair(a: &str, b: &str) -> String {
    if a <= b {
        format!("{a}/{b}")
    } else {
        format!("{b}/{a}")
    }
}

/// Cell count of the narrowest passage the given clearance asks for.
pub fn brush_cells(clearance: f64, cell: f64) -> usize {
    ((clearance / cell) - 1e-9).ceil().max(1.0) as usize
}

pub fn check_connectivity(plan: &FloorPlan, cfg: &CheckConfig) -> Vec<Finding> {
    let Some(grid) = CirculationGrid::build(plan, cfg.grid_cell) else {
        return Vec::new();
    };
    let comp = grid.components();
    let k = brush_cells(cfg.clearance_delta, cfg.grid_cell);
    let wide = grid.wide_components(k);
    let label = |c: (usize, usize)| comp[grid.idx(c.0, c.1)];
    let is_free = |c: (usize, usize)| grid.free[grid.idx(c.0, c.1)];
    let wide_linked = |a: (usize, usize), b: (usize, usize)| {
        let la = grid.blocks_containing(&wide, k, a);
        let lb = grid.blocks_containing(&wide, k, b);
        la.iter().any(|l| lb.contains(l))
    };
    let mut out = Vec::new();
    // (room, door id, door cell on that room's side, room on the far side)
    let mut door_ends: Vec<(String, String, (usize, usize), String)> = Vec::new();

    for d in plan.doors().filter(|d| d.host_wall.is_some()) {
        let Some((neg, pos)) = d.connects.as_ref() else {
            continue;
        };
        let (cn, cp) = grid.door_cells(&d.span);
        let (nn, np) = (side_name(neg), side_name(pos));
        let subject = room_pair(&nn, &np);
        let present: Vec<(usize, usize)> = [cn, cp].into_iter().flatten().collect();
        let blocked = present.iter().any(|&c| !is_free(c))
            || (present.len() == 2 && label(present[0]) != label(present[1]));
        if blocked {
            out.push(finding(
                Severity::Error,
                Code::PathBlocked,
                subject,
                format!("{} between {nn} and {np} cannot be passed", d.id),
                "move the furniture that blocks the doorway",
            ));
            continue;
        }
        if present.len() == 2 && !wide_linked(present[0], present[1]) {
            out.push(finding(
                Severity::Warning,
                Code::PathNarrow,
                subject,
                format!(
                    "passage through {} is narrower than {:.2} ft",
                    d.id, cfg.clearance_delta
                ),
                "widen the passage around the door",
            ));
        }
        if let (RoomSide::Room(_), Some(c)) = (neg, cn) {
            door_ends.push((nn.clone(), d.id.to_string(), c, np.clone()));
        }
        if let (RoomSide::Room(_), Some(c)) = (pos, cp) {
            door_ends.push((np.clone(), d.id.to_string(), c, nn.clone()));
        }
    }

    for (i, (room, d1, c1, far1)) in door_ends.iter().enumerate() {
        for (room2, d2, c2, far2) in &door_ends[i + 1..] {
            if room != room2 || far1 == far2 {
                continue;
            }
            let subject = room_pair(far1, far2);
            if label(*c1) != label(*c2) {
                out.push(finding(
                    Severity::Error,
                    Code::PathBlocked,
                    subject,
                    format!("no free path inside {room} from {d1} ({far1}) to {d2} ({far2})"),
                    "rearrange furniture to reopen circulation",
                ));
            } else if !wide_linked(*c1, *c2) {
                out.push(finding(
                    Severity::Warning,
                    Code::PathNarrow,
                    subject,
                    format!(
                        "path inside {room} from {d1} ({far1}) to {d2} ({far2}) is narrower than {:.2} ft",
                        cfg.clearance_delta
                    ),
                    "widen the walkway between the doors",
                ));
            }
        }
    }
    out
}

pub fn run_all_checks(plan: &FloorPlan, req: &RoomRequirements, cfg: &CheckConfig) -> CheckReport {
    let mut findings = check_room_contents(plan, req);
    findings.extend(check_openings(plan, cfg));
    findings.extend(check_connectivity(plan, cfg));
    CheckReport::from_findings(findings)
}
