//! Room derivation from the wall arrangement.
//!
//! All wall coordinates form a grid over the site extent. Grid cells that are
//! not separated by a wall are merged with union-find; every merged component
//! is one face (room). Face outlines are traced from the cell edges that border
//! other faces, so stub walls inside a room never show up in its polygon.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::geometry::{segments_collinear_overlap, Axis, Point2, Polygon2, Segment2, EPS};
use crate::model::{FloorPlan, FurnitureId, OpeningId, RoomRegion, RoomSide, WallId, WallRun};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopologyError {
    #[error("exterior walls do not close the site; gap along {gap}")]
    OpenEnvelope { gap: Segment2 },
    #[error("furniture groups {first} and {second} both claim the same room")]
    AmbiguousRoomAssignment { first: String, second: String },
    #[error("{item} ({name} in {group}) lies on a wall or outside every room")]
    FurnitureOutsideAllRooms {
        item: FurnitureId,
        name: String,
        group: String,
    },
    #[error("room face {index} has holes or pinch points, which are not supported")]
    NonSimpleFace { index: usize },
}

/// Faces found by [`extract_rooms`] plus walls that bound none of them.
#[derive(Debug, Clone, PartialEq)]
pub struct Subdivision {
    pub rooms: Vec<RoomRegion>,
    /// Walls kept as obstacles but absent from every room boundary.
    pub dangling_walls: Vec<WallId>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.0[a] != a {
            self.0[a] = self.0[self.0[a]];
            a = self.0[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn unique_sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= EPS);
    v
}

struct Grid {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// `v_cover[i][j]`: vertical edge at xs[i] spanning ys[j]..ys[j+1] lies on a wall.
    v_cover: Vec<Vec<bool>>,
    /// `h_cover[j][i]`: horizontal edge at ys[j] spanning xs[i]..xs[i+1] lies on a wall.
    h_cover: Vec<Vec<bool>>,
}

impl Grid {
    fn build(plan: &FloorPlan) -> Option<Grid> {
        let extent = plan.extent?;
        let mut xs = vec![extent.min.x, extent.max.x];
        let mut ys = vec![extent.min.y, extent.max.y];
        for w in &plan.walls {
            xs.extend([w.centerline.start.x, w.centerline.end.x]);
            ys.extend([w.centerline.start.y, w.centerline.end.y]);
        }
        let xs = unique_sorted(xs);
        let ys = unique_sorted(ys);
        if xs.len() < 2 || ys.len() < 2 {
            return None;
        }
        let (nx, ny) = (xs.len() - 1, ys.len() - 1);
        let mut v_cover = vec![vec![false; ny]; xs.len()];
        let mut h_cover = vec![vec![false; nx]; ys.len()];
        for w in &plan.walls {
            let s = w.centerline.normalized();
            match s.axis() {
                Some(Axis::Vertical) => {
                    let Some(i) = xs.iter().position(|&x| (x - s.start.x).abs() <= EPS) else {
                        continue;
                    };
                    for j in 0..ny {
                        if s.start.y <= ys[j] + EPS && s.end.y >= ys[j + 1] - EPS {
                            v_cover[i][j] = true;
                        }
                    }
                }
                Some(Axis::Horizontal) => {
                    let Some(j) = ys.iter().position(|&y| (y - s.start.y).abs() <= EPS) else {
                        continue;
                    };
                    for i in 0..nx {
                        if s.start.x <= xs[i] + EPS && s.end.x >= xs[i + 1] - EPS {
                            h_cover[j][i] = true;
                        }
                    }
                }
                None => {}
            }
        }
        Some(Grid {
            xs,
            ys,
            v_cover,
            h_cover,
        })
    }

    fn nx(&self) -> usize {
        self.xs.len() - 1
    }

    fn ny(&self) -> usize {
        self.ys.len() - 1
    }

    fn cell(&self, i: usize, j: usize) -> usize {
        j * self.nx() + i
    }

    fn envelope_gap(&self) -> Option<Segment2> {
        let (nx, ny) = (self.nx(), self.ny());
        let seg = |a: Point2, b: Point2| Segment2 { start: a, end: b };
        for i in 0..nx {
            for j in [0, ny] {
                if !self.h_cover[j][i] {
                    return Some(seg(
                        Point2::new(self.xs[i], self.ys[j]),
                        Point2::new(self.xs[i + 1], self.ys[j]),
                    ));
                }
            }
        }
        for j in 0..ny {
            for i in [0, nx] {
                if !self.v_cover[i][j] {
                    return Some(seg(
                        Point2::new(self.xs[i], self.ys[j]),
                        Point2::new(self.xs[i], self.ys[j + 1]),
                    ));
                }
            }
        }
        None
    }
}

/// Splits the site extent into faces bounded by wall centerlines. Faces come
/// back unnamed, ordered by their lowest then leftmost grid cell.
pub fn extract_rooms(plan: &FloorPlan) -> Result<Subdivision, TopologyError> {
    let degenerate_gap = || TopologyError::OpenEnvelope {
        gap: Segment2 {
            start: Point2::default(),
            end: Point2::default(),
        },
    };
    let grid = Grid::build(plan).ok_or_else(degenerate_gap)?;
    if let Some(gap) = grid.envelope_gap() {
        return Err(TopologyError::OpenEnvelope { gap });
    }
    let (nx, ny) = (grid.nx(), grid.ny());
    let mut uf = UnionFind::new(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            if i + 1 < nx && !grid.v_cover[i + 1][j] {
                uf.union(grid.cell(i, j), grid.cell(i + 1, j));
            }
            if j + 1 < ny && !grid.h_cover[j + 1][i] {
                uf.union(grid.cell(i, j), grid.cell(i, j + 1));
            }
        }
    }

    // component root -> face index, in row-major order of first cell
    let mut face_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut face_of_cell = vec![0usize; nx * ny];
    for (c, face) in face_of_cell.iter_mut().enumerate() {
        let root = uf.find(c);
        let next = face_of_root.len();
        *face = *face_of_root.entry(root).or_insert(next);
    }
    let face_count = face_of_root.len();

    let mut rooms = Vec::with_capacity(face_count);
    for face in 0..face_count {
        let boundary = trace_face(&grid, &face_of_cell, face)?;
        let bounding_walls = wall_runs(plan, &boundary);
        rooms.push(RoomRegion {
            name: String::new(),
            boundary,
            bounding_walls,
        });
    }

    let dangling_walls = plan
        .walls
        .iter()
        .map(|w| w.id)
        .filter(|id| {
            !rooms
                .iter()
                .any(|r| r.bounding_walls.iter().any(|run| run.wall == *id))
        })
        .collect::<Vec<_>>();
    for id in &dangling_walls {
        log::warn!("{id} does not bound any room");
    }
    Ok(Subdivision {
        rooms,
        dangling_walls,
    })
}

/// Collects the face's outline as counterclockwise directed cell edges, chains
/// them and drops collinear vertices.
fn trace_face(grid: &Grid, face_of_cell: &[usize], face: usize) -> Result<Polygon2, TopologyError> {
    let (nx, ny) = (grid.nx(), grid.ny());
    let in_face = |i: isize, j: isize| -> bool {
        i >= 0
            && j >= 0
            && (i as usize) < nx
            && (j as usize) < ny
            && face_of_cell[grid.cell(i as usize, j as usize)] == face
    };
    // directed edges between lattice vertices (i, j)
    let mut next: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
    let mut edge_count = 0;
    for j in 0..ny {
        for i in 0..nx {
            if !in_face(i as isize, j as isize) {
                continue;
            }
            let (ii, jj) = (i as isize, j as isize);
            let mut add = |a: (usize, usize), b: (usize, usize)| {
                next.entry(a).or_default().push(b);
                edge_count += 1;
            };
            if !in_face(ii, jj - 1) {
                add((i, j), (i + 1, j));
            }
            if !in_face(ii + 1, jj) {
                add((i + 1, j), (i + 1, j + 1));
            }
            if !in_face(ii, jj + 1) {
                add((i + 1, j + 1), (i, j + 1));
            }
            if !in_face(ii - 1, jj) {
                add((i, j + 1), (i, j));
            }
        }
    }
    if next.values().any(|v| v.len() != 1) {
        return Err(TopologyError::NonSimpleFace { index: face });
    }
    let start = *next.keys().min().expect("a face has at least one cell");
    let mut loop_vertices = vec![start];
    let mut cur = next[&start][0];
    while cur != start {
        loop_vertices.push(cur);
        cur = next[&cur][0];
    }
    if loop_vertices.len() != edge_count {
        return Err(TopologyError::NonSimpleFace { index: face });
    }

    let n = loop_vertices.len();
    let corners: Vec<Point2> = (0..n)
        .filter(|&k| {
            let prev = loop_vertices[(k + n - 1) % n];
            let here = loop_vertices[k];
            let nxt = loop_vertices[(k + 1) % n];
            let straight_x = prev.0 == here.0 && here.0 == nxt.0;
            let straight_y = prev.1 == here.1 && here.1 == nxt.1;
            !(straight_x || straight_y)
        })
        .map(|k| {
            let (i, j) = loop_vertices[k];
            Point2::new(grid.xs[i], grid.ys[j])
        })
        .collect();
    Polygon2::new(corners).map_err(|_| TopologyError::NonSimpleFace { index: face })
}

fn wall_runs(plan: &FloorPlan, boundary: &Polygon2) -> Vec<WallRun> {
    let mut runs = Vec::new();
    for wall in &plan.walls {
        for edge in boundary.edges() {
            if let Some(run) = segments_collinear_overlap(&wall.centerline, &edge) {
                runs.push(WallRun { wall: wall.id, run });
            }
        }
    }
    runs.sort_by(|a, b| {
        a.wall.cmp(&b.wall).then(
            (a.run.start.x, a.run.start.y)
                .partial_cmp(&(b.run.start.x, b.run.start.y))
                .expect("finite"),
        )
    });
    runs
}

/// Index of the room whose interior strictly contains `p`.
pub fn locate(rooms: &[RoomRegion], p: Point2) -> Option<usize> {
    rooms.iter().position(|r| r.boundary.contains_strict(p))
}

/// Names faces after the furniture groups that land in them. Each group goes
/// to the face holding most of its items' initial centers (ties go to the
/// face of the earliest-listed item); leftover faces become `room_1`, ...
pub fn name_rooms(
    rooms: &[RoomRegion],
    plan: &FloorPlan,
) -> Result<Vec<RoomRegion>, TopologyError> {
    let mut named: Vec<RoomRegion> = rooms.to_vec();
    let mut claimed: Vec<Option<String>> = vec![None; rooms.len()];
    for (group, items) in plan.furniture_groups() {
        let mut votes: Vec<(usize, usize, usize)> = Vec::new(); // (face, count, first position)
        for (pos, item) in items.iter().enumerate() {
            let face = locate(rooms, item.initial_center).ok_or_else(|| {
                TopologyError::FurnitureOutsideAllRooms {
                    item: item.id,
                    name: item.name.clone(),
                    group: group.clone(),
                }
            })?;
            match votes.iter_mut().find(|v| v.0 == face) {
                Some(v) => v.1 += 1,
                None => votes.push((face, 1, pos)),
            }
        }
        let Some(&(face, _, _)) = votes
            .iter()
            .max_by(|a, b| a.1.cmp(&b.1).then(b.2.cmp(&a.2)))
        else {
            continue;
        };
        if let Some(first) = &claimed[face] {
            return Err(TopologyError::AmbiguousRoomAssignment {
                first: first.clone(),
                second: group,
            });
        }
        named[face].name = group.clone();
        claimed[face] = Some(group);
    }
    let mut counter = 0;
    for face in 0..named.len() {
        if claimed[face].is_some() {
            continue;
        }
        let name = loop {
            counter += 1;
            let candidate = format!("room_{counter}");
            if !claimed.iter().flatten().any(|c| *c == candidate) {
                break candidate;
            }
        };
        named[face].name = name;
    }
    Ok(named)
}

/// Result of [`host_openings`]: the annotated plan and the spans no wall hosts.
#[derive(Debug, Clone, PartialEq)]
pub struct Hosting {
    pub plan: FloorPlan,
    pub orphans: Vec<OpeningId>,
}

/// Resolves every opening to the lowest-id wall that collinearly contains it
/// and records the two sides it joins. Orphans are reported, not rejected.
pub fn host_openings(plan: &FloorPlan) -> Hosting {
    let mut out = plan.clone();
    let mut orphans = Vec::new();
    for opening in &mut out.openings {
        let span = opening.span;
        let host = plan.walls.iter().find(|w| {
            segments_collinear_overlap(&w.centerline, &span)
                .is_some_and(|o| o.length() >= span.length() - EPS)
        });
        match host {
            Some(w) => {
                opening.host_wall = Some(w.id);
                opening.connects = Some(sides_of(plan, &span));
            }
            None => {
                opening.host_wall = None;
                opening.connects = None;
                orphans.push(opening.id);
            }
        }
    }
    Hosting { plan: out, orphans }
}

const SIDE_PROBE: f64 = 0.01;

fn sides_of(plan: &FloorPlan, span: &Segment2) -> (RoomSide, RoomSide) {
    let mid = span.midpoint();
    let (nx, ny) = match span.axis() {
        Some(Axis::Horizontal) => (0.0, 1.0),
        _ => (1.0, 0.0),
    };
    let side = |sign: f64| {
        let p = mid.offset(sign * SIDE_PROBE * nx, sign * SIDE_PROBE * ny);
        match locate(&plan.rooms, p) {
            Some(i) => RoomSide::Room(plan.rooms[i].name.clone()),
            None => RoomSide::Exterior,
        }
    };
    (side(-1.0), side(1.0))
}

/// Full topology pass: faces, names and opening hosts.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    pub plan: FloorPlan,
    pub dangling_walls: Vec<WallId>,
    pub orphans: Vec<OpeningId>,
}

pub fn analyze(plan: &FloorPlan) -> Result<Topology, TopologyError> {
    let sub = extract_rooms(plan)?;
    let rooms = name_rooms(&sub.rooms, plan)?;
    let mut with_rooms = plan.clone();
    with_rooms.rooms = rooms;
    let hosting = host_openings(&with_rooms);
    Ok(Topology {
        plan: hosting.plan,
        dangling_walls: sub.dangling_walls,
        orphans: hosting.orphans,
    })
}

/// True when the segment lies on the boundary of the site extent.
pub fn on_exterior(plan: &FloorPlan, s: &Segment2) -> bool {
    let Some(e) = plan.extent else {
        return false;
    };
    match s.axis() {
        Some(Axis::Horizontal) => {
            (s.start.y - e.min.y).abs() <= EPS || (s.start.y - e.max.y).abs() <= EPS
        }
        Some(Axis::Vertical) => {
            (s.start.x - e.min.x).abs() <= EPS || (s.start.x - e.max.x).abs() <= EPS
        }
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::parse_plan;
    use crate::model::{OpeningKind, Wall};

    pub(crate) const FIG4_WALLS: &str = r#"
        {"start": [0,0,0], "end": [30,0,0]},
        {"start": [30,0,0], "end": [30,40,0]},
        {"start": [30,40,0], "end": [0,40,0]},
        {"start": [0,40,0], "end": [0,0,0]},
        {"start": [0,20,0], "end": [30,20,0]},
        {"start": [15,20,0], "end": [15,40,0]},
        {"start": [15,30,0], "end": [30,30,0]},
        {"start": [5,20,0], "end": [5,40,0]}"#;

    fn plan_with(walls: &str, doors: &str, windows: &str, furniture: &str) -> FloorPlan {
        parse_plan(&format!(
            r#"{{"walls": [{walls}], "doors": [{doors}], "windows": [{windows}], "Furniture": {{{furniture}}}}}"#
        ))
        .unwrap()
    }

    /// Independent face count: rasterize at 0.5 ft, flood-fill cells whose
    /// shared edge midpoint is not on a wall.
    fn raster_faces(plan: &FloorPlan) -> Vec<f64> {
        let e = plan.extent.unwrap();
        let g = 0.5;
        let nx = ((e.max.x - e.min.x) / g).round() as usize;
        let ny = ((e.max.y - e.min.y) / g).round() as usize;
        let on_wall = |p: Point2| {
            plan.walls
                .iter()
                .any(|w| crate::geometry::point_to_segment_distance(p, &w.centerline) < 1e-9)
        };
        let mut label = vec![usize::MAX; nx * ny];
        let mut areas = Vec::new();
        for start in 0..nx * ny {
            if label[start] != usize::MAX {
                continue;
            }
            let id = areas.len();
            let mut stack = vec![start];
            label[start] = id;
            let mut count = 0;
            while let Some(c) = stack.pop() {
                count += 1;
                let (i, j) = (c % nx, c / nx);
                let x0 = e.min.x + i as f64 * g;
                let y0 = e.min.y + j as f64 * g;
                let mut nbrs = Vec::new();
                if i + 1 < nx && !on_wall(Point2::new(x0 + g, y0 + g / 2.)) {
                    nbrs.push(c + 1);
                }
                if i > 0 && !on_wall(Point2::new(x0, y0 + g / 2.)) {
                    nbrs.push(c - 1);
                }
                if j + 1 < ny && !on_wall(Point2::new(x0 + g / 2., y0 + g)) {
                    nbrs.push(c + nx);
                }
                if j > 0 && !on_wall(Point2::new(x0 + g / 2., y0)) {
                    nbrs.push(c - nx);
                }
                for n in nbrs {
                    if label[n] == usize::MAX {
                        label[n] = id;
                        stack.push(n);
                    }
                }
            }
            areas.push(count as f64 * g * g);
        }
        areas
    }

    #[test]
    fn case_study_walls_give_five_faces() {
        let plan = plan_with(FIG4_WALLS, "", "", "");
        let sub = extract_rooms(&plan).unwrap();
        let mut areas: Vec<f64> = sub.rooms.iter().map(|r| r.area()).collect();
        let mut oracle = raster_faces(&plan);
        areas.sort_by(f64::total_cmp);
        oracle.sort_by(f64::total_cmp);
        assert_eq!(areas, oracle);
        assert_eq!(areas, vec![100.0, 150.0, 150.0, 200.0, 600.0]);
        assert!((areas.iter().sum::<f64>() - 1200.0).abs() < 1e-6);
        assert!(sub.dangling_walls.is_empty());
        // living hall below y=20 comes first
        assert_eq!(sub.rooms[0].area(), 600.0);
    }

    #[test]
    fn undivided_envelope_is_one_face() {
        let plan = plan_with(
            r#"{"start": [0,0,0], "end": [30,0,0]}, {"start": [30,0,0], "end": [30,40,0]},
               {"start": [30,40,0], "end": [0,40,0]}, {"start": [0,40,0], "end": [0,0,0]}"#,
            "",
            "",
            "",
        );
        let sub = extract_rooms(&plan).unwrap();
        assert_eq!(sub.rooms.len(), 1);
        assert_eq!(sub.rooms[0].area(), 1200.0);
        assert_eq!(sub.rooms[0].bounding_walls.len(), 4);
    }

    #[test]
    fn missing_exterior_wall_is_open() {
        let plan = plan_with(
            r#"{"start": [0,0,0], "end": [30,0,0]}, {"start": [30,0,0], "end": [30,40,0]},
               {"start": [30,40,0], "end": [0,40,0]}"#,
            "",
            "",
            "",
        );
        assert!(matches!(
            extract_rooms(&plan),
            Err(TopologyError::OpenEnvelope { .. })
        ));
    }

    #[test]
    fn stub_wall_is_dangling_and_not_a_boundary() {
        let plan = plan_with(
            r#"{"start": [0,0,0], "end": [20,0,0]}, {"start": [20,0,0], "end": [20,20,0]},
               {"start": [20,20,0], "end": [0,20,0]}, {"start": [0,20,0], "end": [0,0,0]},
               {"start": [10,5,0], "end": [10,15,0]}"#,
            "",
            "",
            "",
        );
        let sub = extract_rooms(&plan).unwrap();
        assert_eq!(sub.rooms.len(), 1);
        assert_eq!(sub.rooms[0].boundary.vertices().len(), 4);
        assert_eq!(sub.dangling_walls, vec![WallId(4)]);
    }

    #[test]
    fn l_shaped_room_polygon() {
        // wall from (10,10) to (20,10) and (10,10)-(10,20) carve a corner room
        let plan = plan_with(
            r#"{"start": [0,0,0], "end": [20,0,0]}, {"start": [20,0,0], "end": [20,20,0]},
               {"start": [20,20,0], "end": [0,20,0]}, {"start": [0,20,0], "end": [0,0,0]},
               {"start": [10,10,0], "end": [20,10,0]}, {"start": [10,10,0], "end": [10,20,0]}"#,
            "",
            "",
            "",
        );
        let sub = extract_rooms(&plan).unwrap();
        assert_eq!(sub.rooms.len(), 2);
        assert_eq!(sub.rooms[0].area(), 300.0);
        assert_eq!(sub.rooms[0].boundary.vertices().len(), 6);
        assert_eq!(sub.rooms[1].area(), 100.0);
    }

    #[test]
    fn removing_interior_walls_never_adds_faces() {
        let base = plan_with(FIG4_WALLS, "", "", "");
        let full = extract_rooms(&base).unwrap().rooms.len();
        for drop in 4..8 {
            let mut plan = base.clone();
            plan.walls.remove(drop);
            for (i, w) in plan.walls.iter_mut().enumerate() {
                w.id = WallId(i);
            }
            let fewer = extract_rooms(&plan).unwrap().rooms.len();
            assert!(fewer <= full, "dropping wall {drop}: {fewer} > {full}");
            let sum: f64 = extract_rooms(&plan)
                .unwrap()
                .rooms
                .iter()
                .map(|r| r.area())
                .sum();
            assert!((sum - 1200.0).abs() < 1e-6);
        }
    }

    #[test]
    fn names_follow_furniture_majority() {
        let plan = plan_with(
            FIG4_WALLS,
            "",
            "",
            r#""Bedroom": [{"name": "Bed", "position": [20,35,0]}, {"name": "Wardrobe", "position": [27,38,0]}],
               "LivingHall": [{"name": "Sofa", "position": [10,5,0]}]"#,
        );
        let sub = extract_rooms(&plan).unwrap();
        let rooms = name_rooms(&sub.rooms, &plan).unwrap();
        let bedroom = rooms.iter().find(|r| r.name == "Bedroom").unwrap();
        assert!(bedroom.boundary.contains_strict(Point2::new(20., 35.)));
        assert_eq!(bedroom.boundary.bounds().min, Point2::new(15., 30.));
        assert_eq!(rooms[0].name, "LivingHall");
        let synthetic: Vec<&str> = rooms
            .iter()
            .filter(|r| r.name.starts_with("room_"))
            .map(|r| r.name.as_str())
            .collect();
        assert_eq!(synthetic, vec!["room_1", "room_2", "room_3"]);
    }

    #[test]
    fn majority_and_tie_break() {
        let plan = plan_with(
            FIG4_WALLS,
            "",
            "",
            r#""Kitchen": [{"name": "Bench", "position": [20,25,0]}, {"name": "DiningTable", "position": [10,5,0]},
                           {"name": "Bench", "position": [10,6,0]}],
               "Bedroom": [{"name": "Bed", "position": [20,35,0]}, {"name": "Wardrobe", "position": [10,30,0]}]"#,
        );
        let sub = extract_rooms(&plan).unwrap();
        let rooms = name_rooms(&sub.rooms, &plan).unwrap();
        // two of three kitchen items are in the living-hall face
        assert_eq!(rooms[0].name, "Kitchen");
        // one-one tie goes to the first-listed item's face
        let bedroom = rooms.iter().find(|r| r.name == "Bedroom").unwrap();
        assert!(bedroom.boundary.contains_strict(Point2::new(20., 35.)));
    }

    #[test]
    fn competing_groups_are_ambiguous() {
        let plan = plan_with(
            FIG4_WALLS,
            "",
            "",
            r#""Kitchen": [{"name": "Bench", "position": [20,25,0]}],
               "Pantry": [{"name": "Bench", "position": [22,25,0]}]"#,
        );
        let sub = extract_rooms(&plan).unwrap();
        assert!(matches!(
            name_rooms(&sub.rooms, &plan),
            Err(TopologyError::AmbiguousRoomAssignment { .. })
        ));
    }

    #[test]
    fn item_on_wall_is_outside() {
        let plan = plan_with(
            FIG4_WALLS,
            "",
            "",
            r#""Kitchen": [{"name": "Bench", "position": [15,25,0]}]"#,
        );
        let sub = extract_rooms(&plan).unwrap();
        assert!(matches!(
            name_rooms(&sub.rooms, &plan),
            Err(TopologyError::FurnitureOutsideAllRooms { .. })
        ));
    }

    #[test]
    fn empty_furniture_names_everything_synthetically() {
        let plan = plan_with(FIG4_WALLS, "", "", "");
        let sub = extract_rooms(&plan).unwrap();
        let rooms = name_rooms(&sub.rooms, &plan).unwrap();
        let names: Vec<&str> = rooms.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(
            names,
            vec!["room_1", "room_2", "room_3", "room_4", "room_5"]
        );
    }

    #[test]
    fn openings_are_hosted_with_sides() {
        let plan = plan_with(
            FIG4_WALLS,
            r#"{"start": [12,20,0], "end": [15,20,0]}, {"start": [3,3,0], "end": [6,3,0]}"#,
            r#"{"start": [0,5,0], "end": [0,8,0]}"#,
            r#""LivingHall": [{"name": "Sofa", "position": [10,5,0]}],
               "OfficeRoom": [{"name": "OfficeDesk", "position": [10,30,0]}]"#,
        );
        let topo = analyze(&plan).unwrap();
        let door = &topo.plan.openings[0];
        assert_eq!(door.host_wall, Some(WallId(4)));
        assert_eq!(
            door.connects,
            Some((
                RoomSide::Room("LivingHall".into()),
                RoomSide::Room("OfficeRoom".into())
            ))
        );
        let orphan = &topo.plan.openings[1];
        assert_eq!(orphan.host_wall, None);
        assert_eq!(
            topo.orphans,
            vec![OpeningId {
                kind: OpeningKind::Door,
                index: 1
            }]
        );
        let window = &topo.plan.openings[2];
        assert_eq!(window.host_wall, Some(WallId(3)));
        assert_eq!(
            window.connects,
            Some((RoomSide::Exterior, RoomSide::Room("LivingHall".into())))
        );
        // idempotent
        assert_eq!(host_openings(&topo.plan).plan, topo.plan);
    }

    #[test]
    fn exterior_detection() {
        let plan = plan_with(FIG4_WALLS, "", "", "");
        let w: &Wall = &plan.walls[0];
        assert!(on_exterior(&plan, &w.centerline));
        assert!(!on_exterior(&plan, &plan.walls[5].centerline));
    }
}
