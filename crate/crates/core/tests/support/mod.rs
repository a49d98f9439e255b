//! Fixtures, random scenes and independent oracles shared by integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, VecDeque};
use std::fs;
use std::path::PathBuf;

use floorplan_core::geometry::{AlignedBox, Point2};
use floorplan_core::model::{
    occupancy_from_plan, Facing, FloorPlan, FurnitureCatalog, FurnitureId, OccupancySet, RoomRegion,
};
use floorplan_core::pipeline::prepare;
use rand::Rng;
use serde_json::json;

/// Tolerance used by the oracles.
const TOL: f64 = 1e-6;

pub const KINDS: [&str; 7] = [
    "Sofa",
    "TVUnit",
    "OfficeDesk",
    "Bed",
    "Wardrobe",
    "DiningTable",
    "Bench",
];
pub const FACINGS: [Facing; 4] = [Facing::North, Facing::East, Facing::South, Facing::West];

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn read_fixture(rel: &str) -> String {
    let path = fixtures_dir().join(rel);
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// `(stem, text)` for every `.json` plan in a fixture directory, sorted.
pub fn fixture_set(dir: &str) -> Vec<(String, String)> {
    let mut paths: Vec<PathBuf> = fs::read_dir(fixtures_dir().join(dir))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let stem = p.file_stem().unwrap().to_string_lossy().to_string();
            (stem, fs::read_to_string(&p).unwrap())
        })
        .collect()
}

pub fn expectations<T: serde::de::DeserializeOwned>(rel: &str) -> BTreeMap<String, T> {
    serde_json::from_str(&read_fixture(rel)).unwrap()
}

pub fn load_plan(text: &str) -> FloorPlan {
    prepare(text, &FurnitureCatalog::default()).unwrap().plan
}

fn facing_str(f: Facing) -> &'static str {
    match f {
        Facing::North => "north",
        Facing::East => "east",
        Facing::South => "south",
        Facing::West => "west",
    }
}

#[derive(Debug, Clone)]
pub struct ItemSpec {
    pub kind: String,
    pub center: (f64, f64),
    pub facing: Facing,
}

/// A rectangular room at the origin, optionally with its top-right corner cut
/// away, a door on the bottom wall and some furniture.
#[derive(Debug, Clone)]
pub struct Scene {
    pub width: f64,
    pub height: f64,
    /// `(w, h)` removed from the top-right corner.
    pub notch: Option<(f64, f64)>,
    /// x-range of a door on the bottom wall.
    pub door: Option<(f64, f64)>,
    pub items: Vec<ItemSpec>,
}

fn snap(v: f64, step: f64) -> f64 {
    (v / step).round() * step
}

impl Scene {
    /// Counter-clockwise outline.
    pub fn outline(&self) -> Vec<(f64, f64)> {
        let (w, h) = (self.width, self.height);
        match self.notch {
            None => vec![(0.0, 0.0), (w, 0.0), (w, h), (0.0, h)],
            Some((nw, nh)) => vec![
                (0.0, 0.0),
                (w, 0.0),
                (w, h - nh),
                (w - nw, h - nh),
                (w - nw, h),
                (0.0, h),
            ],
        }
    }

    pub fn walls(&self) -> Vec<((f64, f64), (f64, f64))> {
        let o = self.outline();
        (0..o.len()).map(|i| (o[i], o[(i + 1) % o.len()])).collect()
    }

    /// Room walls plus the two that close off the notch as its own face.
    pub fn site_walls(&self) -> Vec<((f64, f64), (f64, f64))> {
        let mut walls = self.walls();
        if let Some((nw, nh)) = self.notch {
            let (w, h) = (self.width, self.height);
            walls.push(((w, h - nh), (w, h)));
            walls.push(((w, h), (w - nw, h)));
        }
        walls
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let inside_rect = x > 0.0 && x < self.width && y > 0.0 && y < self.height;
        let in_notch = self
            .notch
            .is_some_and(|(nw, nh)| x >= self.width - nw && y >= self.height - nh);
        inside_rect && !in_notch
    }

    pub fn plan_json(&self) -> String {
        let walls: Vec<_> = self
            .site_walls()
            .into_iter()
            .map(|(a, b)| json!({"start": [a.0, a.1, 0], "end": [b.0, b.1, 0]}))
            .collect();
        let doors: Vec<_> = self
            .door
            .iter()
            .map(|&(x0, x1)| json!({"start": [x0, 0, 0], "end": [x1, 0, 0]}))
            .collect();
        let items: Vec<_> = self
            .items
            .iter()
            .map(|it| {
                json!({"name": it.kind, "position": [it.center.0, it.center.1, 0], "facing": facing_str(it.facing)})
            })
            .collect();
        let furniture = if items.is_empty() {
            json!({})
        } else {
            json!({ "Den": items })
        };
        json!({"walls": walls, "doors": doors, "windows": [], "Furniture": furniture}).to_string()
    }

    pub fn plan(&self) -> FloorPlan {
        load_plan(&self.plan_json())
    }

    pub fn random_point<R: Rng>(&self, rng: &mut R, step: f64) -> (f64, f64) {
        loop {
            let x = snap(rng.gen_range(0.0..self.width), step);
            let y = snap(rng.gen_range(0.0..self.height), step);
            if self.contains(x, y) {
                return (x, y);
            }
        }
    }

    pub fn random_item<R: Rng>(&self, rng: &mut R) -> ItemSpec {
        ItemSpec {
            kind: KINDS[rng.gen_range(0..KINDS.len())].to_string(),
            center: self.random_point(rng, 0.25),
            facing: FACINGS[rng.gen_range(0..4)],
        }
    }

    /// Room up to `max_side` ft a side with `n_items` random items.
    pub fn random<R: Rng>(rng: &mut R, max_side: f64, n_items: usize) -> Self {
        let width = snap(rng.gen_range(6.0..=max_side), 0.5);
        let height = snap(rng.gen_range(6.0..=max_side), 0.5);
        let notch = rng.gen_bool(0.3).then(|| {
            (
                snap(rng.gen_range(2.0..=width / 2.0), 0.5),
                snap(rng.gen_range(2.0..=height / 2.0), 0.5),
            )
        });
        let door = rng.gen_bool(0.5).then(|| {
            let x0 = snap(rng.gen_range(0.5..=width - 3.5), 0.5);
            (x0, x0 + 3.0)
        });
        let mut scene = Self {
            width,
            height,
            notch,
            door,
            items: Vec::new(),
        };
        for _ in 0..n_items {
            let it = scene.random_item(rng);
            scene.items.push(it);
        }
        scene
    }
}

/// Plan of `scene` where every item except `target` counts as already placed,
/// with the occupancy the target sees.
pub struct Fixed {
    pub plan: FloorPlan,
    pub target: usize,
    pub occupancy: OccupancySet,
}

impl Fixed {
    pub fn new(scene: &Scene, target: usize) -> Self {
        let mut plan = scene.plan();
        for (i, f) in plan.furniture.iter_mut().enumerate() {
            if i != target {
                f.refined_center = Some(f.initial_center);
            }
        }
        let occupancy = occupancy_from_plan(&plan, Some(FurnitureId(target)), 0.0);
        Self {
            plan,
            target,
            occupancy,
        }
    }

    pub fn room(&self) -> &RoomRegion {
        self.plan.room("Den").unwrap()
    }

    pub fn obstacle_boxes(&self) -> Vec<AlignedBox> {
        self.plan
            .furniture
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != self.target)
            .map(|(_, f)| {
                let fp = f.footprint.unwrap();
                footprint_box(f.initial_center, fp.width, fp.depth, f.facing)
            })
            .collect()
    }
}

pub fn footprint_box(c: Point2, width: f64, depth: f64, facing: Facing) -> AlignedBox {
    let (w, d) = match facing {
        Facing::East | Facing::West => (depth, width),
        _ => (width, depth),
    };
    AlignedBox {
        min: Point2::new(c.x - w / 2.0, c.y - d / 2.0),
        max: Point2::new(c.x + w / 2.0, c.y + d / 2.0),
    }
}

fn rect_gap(a: &AlignedBox, b: &AlignedBox) -> f64 {
    let dx = (a.min.x - b.max.x).max(b.min.x - a.max.x).max(0.0);
    let dy = (a.min.y - b.max.y).max(b.min.y - a.max.y).max(0.0);
    dx.hypot(dy)
}

fn seg_box(a: (f64, f64), b: (f64, f64)) -> AlignedBox {
    AlignedBox {
        min: Point2::new(a.0.min(b.0), a.1.min(b.1)),
        max: Point2::new(a.0.max(b.0), a.1.max(b.1)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleVerdict {
    pub a: bool,
    pub b: bool,
    pub c: bool,
}

/// Brute-force feasibility written directly from the three conditions:
/// strict containment (headboard side allowed `tol` of slack for
/// wall-adjacent items), clearance `delta` from every obstacle other than the wall the
/// headboard rests on, and headboard within `tol` of a parallel wall.
#[allow(clippy::too_many_arguments)]
pub fn oracle_feasible(
    scene: &Scene,
    obstacles: &[AlignedBox],
    width: f64,
    depth: f64,
    wall_adjacent: bool,
    center: Point2,
    facing: Facing,
    delta: f64,
    tol: f64,
) -> OracleVerdict {
    let bx = footprint_box(center, width, depth, facing);

    let mut shrunk = bx;
    if wall_adjacent {
        match facing {
            Facing::North => shrunk.max.y -= tol,
            Facing::South => shrunk.min.y += tol,
            Facing::East => shrunk.max.x -= tol,
            Facing::West => shrunk.min.x += tol,
        }
    }
    let in_rect = shrunk.min.x > TOL
        && shrunk.min.y > TOL
        && shrunk.max.x < scene.width - TOL
        && shrunk.max.y < scene.height - TOL;
    let hits_notch = scene.notch.is_some_and(|(nw, nh)| {
        shrunk.max.x > scene.width - nw - TOL && shrunk.max.y > scene.height - nh - TOL
    });
    let a = in_rect && !hits_notch;

    let walls = scene.walls();
    let mut touching = vec![false; walls.len()];
    if wall_adjacent {
        for (i, &(p, q)) in walls.iter().enumerate() {
            let horizontal = p.1 == q.1;
            let (edge, outward, along_lo, along_hi) = match facing {
                Facing::North => (bx.max.y, 1.0, bx.min.x, bx.max.x),
                Facing::South => (bx.min.y, -1.0, bx.min.x, bx.max.x),
                Facing::East => (bx.max.x, 1.0, bx.min.y, bx.max.y),
                Facing::West => (bx.min.x, -1.0, bx.min.y, bx.max.y),
            };
            let facing_horizontal = matches!(facing, Facing::North | Facing::South);
            if horizontal != facing_horizontal {
                continue;
            }
            let (line, lo, hi) = if horizontal {
                (p.1, p.0.min(q.0), p.0.max(q.0))
            } else {
                (p.0, p.1.min(q.1), p.1.max(q.1))
            };
            let gap = outward * (line - edge);
            let overlap = hi.min(along_hi) - lo.max(along_lo);
            touching[i] = gap >= -TOL && gap <= tol + TOL && overlap > TOL;
        }
    }
    let c = !wall_adjacent || touching.iter().any(|&t| t);

    let mut dists: Vec<f64> = Vec::new();
    for (i, &(p, q)) in scene.site_walls().iter().enumerate() {
        if !touching.get(i).copied().unwrap_or(false) {
            dists.push(rect_gap(&bx, &seg_box(p, q)));
        }
    }
    if let Some((x0, x1)) = scene.door {
        dists.push(rect_gap(&bx, &seg_box((x0, 0.0), (x1, 0.0))));
    }
    for o in obstacles {
        dists.push(rect_gap(&bx, o));
    }
    let b = dists.iter().all(|&d| d >= delta - TOL);
    OracleVerdict { a, b, c }
}

/// Verdict of the circulation oracle on a plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flow {
    Connected,
    Narrow,
    Blocked,
}

/// Flood fill over square cells of side `g` covering the site, with walls
/// (less their door gaps) cutting the shared edge between neighbours. Doors
/// pass when the cells on both sides of every door can reach each other;
/// passages are wide when the same holds on the morphological opening of
/// the free cells by a square of side `delta`.
pub fn flood_fill_verdict(plan: &FloorPlan, g: f64, delta: f64) -> Flow {
    let ext = plan.extent.unwrap();
    let nx = (ext.width() / g).round() as usize;
    let ny = (ext.height() / g).round() as usize;
    let (ox, oy) = (ext.min.x, ext.min.y);
    let boxes: Vec<AlignedBox> = plan
        .furniture
        .iter()
        .filter_map(|f| f.current_box())
        .collect();
    let free: Vec<Vec<bool>> = (0..nx)
        .map(|i| {
            (0..ny)
                .map(|j| {
                    let (x0, y0) = (ox + i as f64 * g, oy + j as f64 * g);
                    !boxes.iter().any(|b| {
                        b.min.x < x0 + g - TOL
                            && b.max.x > x0 + TOL
                            && b.min.y < y0 + g - TOL
                            && b.max.y > y0 + TOL
                    })
                })
                .collect()
        })
        .collect();

    // wall pieces as (vertical?, line, lo, hi) with door spans removed
    let mut pieces: Vec<(bool, f64, f64, f64)> = Vec::new();
    for w in &plan.walls {
        let (s, e) = (w.centerline.start, w.centerline.end);
        let vertical = (s.x - e.x).abs() < TOL;
        let (line, lo, hi) = if vertical {
            (s.x, s.y.min(e.y), s.y.max(e.y))
        } else {
            (s.y, s.x.min(e.x), s.x.max(e.x))
        };
        let mut intervals = vec![(lo, hi)];
        for d in plan.doors() {
            let (a, b) = (d.span.start, d.span.end);
            let d_vertical = (a.x - b.x).abs() < TOL;
            let d_line = if d_vertical { a.x } else { a.y };
            if d_vertical != vertical || (d_line - line).abs() > TOL {
                continue;
            }
            let (dl, dh) = if vertical {
                (a.y.min(b.y), a.y.max(b.y))
            } else {
                (a.x.min(b.x), a.x.max(b.x))
            };
            intervals = intervals
                .into_iter()
                .flat_map(|(l, h)| {
                    let mut v = Vec::new();
                    if dl > l {
                        v.push((l, dl.min(h)));
                    }
                    if dh < h {
                        v.push((dh.max(l), h));
                    }
                    v.into_iter().filter(|(l, h)| h - l > TOL)
                })
                .collect();
        }
        pieces.extend(intervals.into_iter().map(|(l, h)| (vertical, line, l, h)));
    }
    // does a wall piece cover part of the given cell edge?
    let cut = |vertical: bool, line: f64, lo: f64, hi: f64| {
        pieces.iter().any(|&(v, l, a, b)| {
            v == vertical && (l - line).abs() < TOL && b.min(hi) - a.max(lo) > TOL
        })
    };
    let open_right = |i: usize, j: usize| {
        !cut(
            true,
            ox + (i + 1) as f64 * g,
            oy + j as f64 * g,
            oy + (j + 1) as f64 * g,
        )
    };
    let open_up = |i: usize, j: usize| {
        !cut(
            false,
            oy + (j + 1) as f64 * g,
            ox + i as f64 * g,
            ox + (i + 1) as f64 * g,
        )
    };

    let label_of = |mask: &Vec<Vec<bool>>| -> Vec<Vec<Option<usize>>> {
        let mut label = vec![vec![None; ny]; nx];
        let mut next = 0;
        for si in 0..nx {
            for sj in 0..ny {
                if !mask[si][sj] || label[si][sj].is_some() {
                    continue;
                }
                label[si][sj] = Some(next);
                let mut q = VecDeque::from([(si, sj)]);
                while let Some((i, j)) = q.pop_front() {
                    let mut nb = Vec::new();
                    if i + 1 < nx && open_right(i, j) {
                        nb.push((i + 1, j));
                    }
                    if i > 0 && open_right(i - 1, j) {
                        nb.push((i - 1, j));
                    }
                    if j + 1 < ny && open_up(i, j) {
                        nb.push((i, j + 1));
                    }
                    if j > 0 && open_up(i, j - 1) {
                        nb.push((i, j - 1));
                    }
                    for (a, b) in nb {
                        if mask[a][b] && label[a][b].is_none() {
                            label[a][b] = Some(next);
                            q.push_back((a, b));
                        }
                    }
                }
                next += 1;
            }
        }
        label
    };

    // cells on each side of every hosted door, at the span midpoint
    let mut door_cells: Vec<Vec<(usize, usize)>> = Vec::new();
    for d in plan.doors().filter(|d| d.host_wall.is_some()) {
        let m = d.span.midpoint();
        let vertical = (d.span.start.x - d.span.end.x).abs() < TOL;
        let mut cells = Vec::new();
        if vertical {
            let j = ((m.y - oy) / g).floor() as usize;
            let i = ((m.x - ox) / g).round() as usize;
            if i > 0 {
                cells.push((i - 1, j));
            }
            if i < nx {
                cells.push((i, j));
            }
        } else {
            let i = ((m.x - ox) / g).floor() as usize;
            let j = ((m.y - oy) / g).round() as usize;
            if j > 0 {
                cells.push((i, j - 1));
            }
            if j < ny {
                cells.push((i, j));
            }
        }
        door_cells.push(cells);
    }
    let all_cells: Vec<(usize, usize)> = door_cells.iter().flatten().copied().collect();

    if all_cells.iter().any(|&(i, j)| !free[i][j]) {
        return Flow::Blocked;
    }
    let label = label_of(&free);
    let one_component = |label: &Vec<Vec<Option<usize>>>| {
        let first = all_cells.first().map(|&(i, j)| label[i][j]);
        all_cells
            .iter()
            .all(|&(i, j)| label[i][j].is_some() && Some(label[i][j]) == first)
    };
    if !one_component(&label) {
        return Flow::Blocked;
    }

    // opening: union of k×k squares of free cells with no wall inside
    let k = ((delta / g) - 1e-9).ceil().max(1.0) as usize;
    let mut opened = vec![vec![false; ny]; nx];
    for i0 in 0..nx.saturating_sub(k - 1) {
        for j0 in 0..ny.saturating_sub(k - 1) {
            let fits = (i0..i0 + k).all(|i| {
                (j0..j0 + k).all(|j| {
                    free[i][j]
                        && (i + 1 == i0 + k || open_right(i, j))
                        && (j + 1 == j0 + k || open_up(i, j))
                })
            });
            if fits {
                for row in opened.iter_mut().skip(i0).take(k) {
                    for cell in row.iter_mut().skip(j0).take(k) {
                        *cell = true;
                    }
                }
            }
        }
    }
    if one_component(&label_of(&opened)) {
        Flow::Connected
    } else {
        Flow::Narrow
    }
}

/// Verdict the plan checks report: blocked beats narrow.
pub fn checker_verdict(codes: &[&str]) -> Flow {
    if codes.contains(&"PATH_BLOCKED") {
        Flow::Blocked
    } else if codes.contains(&"PATH_NARROW") {
        Flow::Narrow
    } else {
        Flow::Connected
    }
}

#[allow(clippy::too_many_arguments)]
/// Candidate centre for an item of the given box size, biased toward the
/// boundaries of the three conditions.
pub fn probe_center<R: Rng>(
    rng: &mut R,
    scene: &Scene,
    obstacles: &[AlignedBox],
    w: f64,
    d: f64,
    facing: Facing,
    delta: f64,
    tol: f64,
) -> Point2 {
    let (bw, bd) = match facing {
        Facing::East | Facing::West => (d, w),
        _ => (w, d),
    };
    let roll = rng.gen_range(0..10);
    if roll < 4 {
        let x = snap(rng.gen_range(-1.0..scene.width + 1.0), 0.05);
        let y = snap(rng.gen_range(-1.0..scene.height + 1.0), 0.05);
        return Point2::new(x, y);
    }
    if roll < 7 || obstacles.is_empty() {
        let gaps = [
            0.0,
            tol / 2.0,
            tol,
            tol + 0.02,
            -0.02,
            0.3,
            delta - 0.01,
            delta,
            delta + 0.01,
        ];
        let gap = gaps[rng.gen_range(0..gaps.len())];
        let north_south = matches!(facing, Facing::North | Facing::South);
        let walls: Vec<_> = scene
            .walls()
            .into_iter()
            .filter(|(p, q)| rng.gen_bool(0.2) || (p.1 == q.1) == north_south)
            .collect();
        let walls = if walls.is_empty() {
            scene.walls()
        } else {
            walls
        };
        let (p, q) = walls[rng.gen_range(0..walls.len())];
        let horizontal = p.1 == q.1;
        let (lo, hi) = if horizontal {
            (p.0.min(q.0), p.0.max(q.0))
        } else {
            (p.1.min(q.1), p.1.max(q.1))
        };
        let half = if horizontal { bw / 2.0 } else { bd / 2.0 };
        let (inner_lo, inner_hi) = (lo + half + delta - 0.25, hi - half - delta + 0.25);
        let along = if inner_lo < inner_hi && rng.gen_bool(0.7) {
            snap(rng.gen_range(inner_lo..=inner_hi), 0.05)
        } else {
            snap(rng.gen_range(lo - 1.0..hi + 1.0), 0.05)
        };
        let toward = match facing {
            Facing::North | Facing::East => 1.0,
            Facing::South | Facing::West => -1.0,
        };
        let sign = if rng.gen_bool(0.8) { toward } else { -toward };
        return if horizontal {
            Point2::new(along, p.1 - sign * (gap + bd / 2.0))
        } else {
            Point2::new(p.0 - sign * (gap + bw / 2.0), along)
        };
    }
    let o = obstacles[rng.gen_range(0..obstacles.len())];
    let gaps = [delta - 0.01, delta, delta + 0.01, 0.0, 0.5];
    let gap = gaps[rng.gen_range(0..gaps.len())];
    let c = o.center();
    match rng.gen_range(0..4) {
        0 => Point2::new(o.max.x + gap + bw / 2.0, c.y),
        1 => Point2::new(o.min.x - gap - bw / 2.0, c.y),
        2 => Point2::new(c.x, o.max.y + gap + bd / 2.0),
        _ => Point2::new(c.x, o.min.y - gap - bd / 2.0),
    }
}
