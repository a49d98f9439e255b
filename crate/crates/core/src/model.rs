//! Floor-plan domain model: walls, openings, furniture, rooms and the
//! occupancy set consulted by clearance tests.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{AlignedBox, Point2, Polygon2, Segment2};

/// Default wall height in feet used by the BIM exporter.
pub const DEFAULT_WALL_HEIGHT: f64 = 10.0;

const DEFAULT_CATALOG: &str = include_str!("../data/default_catalog.json");

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("unknown furniture kind `{0}`")]
    UnknownFurnitureKind(String),
    #[error("catalog entry `{kind}` has non-positive dimensions")]
    InvalidEntry { kind: String },
    #[error("catalog is missing `catalog_version`")]
    MissingVersion,
    #[error("unsupported catalog_version {0}")]
    UnsupportedVersion(u64),
    #[error("catalog is not valid JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WallId(pub usize);

impl fmt::Display for WallId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "wall#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Wall {
    pub id: WallId,
    pub centerline: Segment2,
    pub height: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpeningKind {
    Door,
    Window,
}

impl fmt::Display for OpeningKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OpeningKind::Door => "door",
            OpeningKind::Window => "window",
        })
    }
}

/// Index of an opening within its kind's array (`doors[i]` / `windows[i]`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OpeningId {
    pub kind: OpeningKind,
    pub index: usize,
}

impl fmt::Display for OpeningId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.kind, self.index)
    }
}

/// One side of an opening: a named room or the outside of the building.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RoomSide {
    Room(String),
    Exterior,
}

impl fmt::Display for RoomSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RoomSide::Room(name) => f.write_str(name),
            RoomSide::Exterior => f.write_str("exterior"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Opening {
    pub id: OpeningId,
    pub span: Segment2,
    /// Resolved by topology; `None` until hosted or when orphaned.
    pub host_wall: Option<WallId>,
    /// The two sides the opening joins, once hosted.
    pub connects: Option<(RoomSide, RoomSide)>,
    /// Unmodeled keys from the input (height, sill, ...), passed through on emit.
    pub metadata: serde_json::Map<String, serde_json::Value>,
}

impl Opening {
    pub fn kind(&self) -> OpeningKind {
        self.id.kind
    }
}

/// Which footprint side carries the headboard. `North` is the max-y edge of an
/// unrotated footprint; `East`/`West` swap width and depth.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Facing {
    #[default]
    North,
    East,
    South,
    West,
}

impl Facing {
    pub const ALL: [Facing; 4] = [Facing::North, Facing::East, Facing::South, Facing::West];

    pub fn is_rotated(self) -> bool {
        matches!(self, Facing::East | Facing::West)
    }

    /// Outward unit normal of the headboard edge.
    pub fn normal(self) -> (f64, f64) {
        match self {
            Facing::North => (0.0, 1.0),
            Facing::East => (1.0, 0.0),
            Facing::South => (0.0, -1.0),
            Facing::West => (-1.0, 0.0),
        }
    }

    /// Rotation from the unrotated footprint, counterclockwise degrees.
    pub fn degrees(self) -> u32 {
        match self {
            Facing::North => 0,
            Facing::West => 90,
            Facing::South => 180,
            Facing::East => 270,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Facing::North => "north",
            Facing::East => "east",
            Facing::South => "south",
            Facing::West => "west",
        }
    }

    pub fn parse(s: &str) -> Option<Facing> {
        Facing::ALL.into_iter().find(|f| f.as_str() == s)
    }
}

impl fmt::Display for Facing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Footprint {
    pub width: f64,
    pub depth: f64,
    pub wall_adjacent: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FurnitureId(pub usize);

impl fmt::Display for FurnitureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "item#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FurnitureInstance {
    pub id: FurnitureId,
    /// Furniture-kind label, also the catalog key.
    pub name: String,
    pub room_name: String,
    pub initial_center: Point2,
    pub facing: Facing,
    /// Filled in by [`resolve_catalog`].
    pub footprint: Option<Footprint>,
    pub refined_center: Option<Point2>,
}

impl FurnitureInstance {
    pub fn new(id: usize, name: &str, room_name: &str, center: Point2) -> Self {
        Self {
            id: FurnitureId(id),
            name: name.to_string(),
            room_name: room_name.to_string(),
            initial_center: center,
            facing: Facing::North,
            footprint: None,
            refined_center: None,
        }
    }

    pub fn with_footprint(mut self, width: f64, depth: f64, wall_adjacent: bool) -> Self {
        self.footprint = Some(Footprint {
            width,
            depth,
            wall_adjacent,
        });
        self
    }

    /// Refined center when present, otherwise the initial one.
    pub fn current_center(&self) -> Point2 {
        self.refined_center.unwrap_or(self.initial_center)
    }

    pub fn wall_adjacent(&self) -> bool {
        self.footprint.is_some_and(|f| f.wall_adjacent)
    }

    /// Box occupied when centered at `center` with the given facing.
    /// `None` until the catalog has been resolved.
    pub fn box_at(&self, center: Point2, facing: Facing) -> Option<AlignedBox> {
        let fp = self.footprint?;
        let (w, d) = if facing.is_rotated() {
            (fp.depth, fp.width)
        } else {
            (fp.width, fp.depth)
        };
        AlignedBox::from_center(center, w, d).ok()
    }

    pub fn current_box(&self) -> Option<AlignedBox> {
        self.box_at(self.current_center(), self.facing)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub width: f64,
    pub depth: f64,
    pub wall_adjacent: bool,
}

/// Furniture-kind label to footprint. Loaded from a flat JSON object whose
/// only non-record key is `catalog_version`.
#[derive(Debug, Clone, PartialEq)]
pub struct FurnitureCatalog {
    pub version: u64,
    pub entries: BTreeMap<String, CatalogEntry>,
}

impl FurnitureCatalog {
    pub const VERSION: u64 = 1;

    pub fn from_json(text: &str) -> Result<Self, CatalogError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CatalogError::Json(e.to_string()))?;
        let obj = value
            .as_object()
            .ok_or_else(|| CatalogError::Json("top level must be an object".into()))?;
        let version = obj
            .get("catalog_version")
            .and_then(|v| v.as_u64())
            .ok_or(CatalogError::MissingVersion)?;
        if version != Self::VERSION {
            return Err(CatalogError::UnsupportedVersion(version));
        }
        let mut entries = BTreeMap::new();
        for (kind, record) in obj.iter().filter(|(k, _)| k.as_str() != "catalog_version") {
            let entry: CatalogEntry = serde_json::from_value(record.clone())
                .map_err(|e| CatalogError::Json(format!("{kind}: {e}")))?;
            if !(entry.width > 0.0 && entry.depth > 0.0) {
                return Err(CatalogError::InvalidEntry { kind: kind.clone() });
            }
            entries.insert(kind.clone(), entry);
        }
        Ok(Self { version, entries })
    }

    pub fn to_json(&self) -> String {
        let mut obj = serde_json::Map::new();
        obj.insert("catalog_version".into(), self.version.into());
        for (k, v) in &self.entries {
            obj.insert(k.clone(), serde_json::to_value(v).expect("plain struct"));
        }
        serde_json::to_string_pretty(&serde_json::Value::Object(obj)).expect("plain map")
    }

    pub fn get(&self, kind: &str) -> Option<&CatalogEntry> {
        self.entries.get(kind)
    }
}

impl Default for FurnitureCatalog {
    fn default() -> Self {
        Self::from_json(DEFAULT_CATALOG).expect("bundled catalog is valid")
    }
}

/// The part of a wall that lies on a room's boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallRun {
    pub wall: WallId,
    pub run: Segment2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoomRegion {
    pub name: String,
    pub boundary: Polygon2,
    pub bounding_walls: Vec<WallRun>,
}

impl RoomRegion {
    pub fn area(&self) -> f64 {
        self.boundary.area()
    }

    pub fn wall_ids(&self) -> Vec<WallId> {
        let mut ids: Vec<WallId> = self.bounding_walls.iter().map(|r| r.wall).collect();
        ids.dedup();
        ids
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FloorPlan {
    /// Site rectangle; `None` for a plan with no walls.
    pub extent: Option<AlignedBox>,
    pub walls: Vec<Wall>,
    pub openings: Vec<Opening>,
    pub furniture: Vec<FurnitureInstance>,
    /// Derived by room topology; empty until then.
    pub rooms: Vec<RoomRegion>,
}

impl FloorPlan {
    pub fn wall(&self, id: WallId) -> Option<&Wall> {
        self.walls.iter().find(|w| w.id == id)
    }

    pub fn room(&self, name: &str) -> Option<&RoomRegion> {
        self.rooms.iter().find(|r| r.name == name)
    }

    pub fn doors(&self) -> impl Iterator<Item = &Opening> {
        self.openings
            .iter()
            .filter(|o| o.kind() == OpeningKind::Door)
    }

    pub fn windows(&self) -> impl Iterator<Item = &Opening> {
        self.openings
            .iter()
            .filter(|o| o.kind() == OpeningKind::Window)
    }

    /// Room-name groups in order of first appearance.
    pub fn furniture_groups(&self) -> Vec<(String, Vec<&FurnitureInstance>)> {
        let mut groups: Vec<(String, Vec<&FurnitureInstance>)> = Vec::new();
        for item in &self.furniture {
            match groups.iter_mut().find(|(name, _)| *name == item.room_name) {
                Some((_, items)) => items.push(item),
                None => groups.push((item.room_name.clone(), vec![item])),
            }
        }
        groups
    }
}

/// Binds every furniture item to its catalog footprint. Fails without touching
/// the plan if any kind is unknown.
pub fn resolve_catalog(
    plan: &FloorPlan,
    catalog: &FurnitureCatalog,
) -> Result<FloorPlan, CatalogError> {
    let mut resolved = plan.clone();
    for item in &mut resolved.furniture {
        let entry = catalog
            .get(&item.name)
            .ok_or_else(|| CatalogError::UnknownFurnitureKind(item.name.clone()))?;
        item.footprint = Some(Footprint {
            width: entry.width,
            depth: entry.depth,
            wall_adjacent: entry.wall_adjacent,
        });
    }
    Ok(resolved)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ObstacleSource {
    Wall(WallId),
    Opening(OpeningId),
    Furniture(FurnitureId),
}

impl fmt::Display for ObstacleSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObstacleSource::Wall(id) => id.fmt(f),
            ObstacleSource::Opening(id) => id.fmt(f),
            ObstacleSource::Furniture(id) => id.fmt(f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Obstacle {
    pub bounds: AlignedBox,
    pub source: ObstacleSource,
}

/// Growing set of obstacle boxes. Only [`OccupancySet::push`] mutates it.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OccupancySet {
    obstacles: Vec<Obstacle>,
}

impl OccupancySet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, bounds: AlignedBox, source: ObstacleSource) {
        self.obstacles.push(Obstacle { bounds, source });
    }

    pub fn len(&self) -> usize {
        self.obstacles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.obstacles.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Obstacle> {
        self.obstacles.iter()
    }

    pub fn contains_source(&self, source: ObstacleSource) -> bool {
        self.obstacles.iter().any(|o| o.source == source)
    }
}

/// Obstacle set for placing `exclude`: every wall (inflated by
/// `wall_half_thickness`), every opening, and every item that already has a
/// refined center.
pub fn occupancy_from_plan(
    plan: &FloorPlan,
    exclude: Option<FurnitureId>,
    wall_half_thickness: f64,
) -> OccupancySet {
    let mut occ = OccupancySet::new();
    for wall in &plan.walls {
        occ.push(
            wall.centerline.bounds().inflate(wall_half_thickness),
            ObstacleSource::Wall(wall.id),
        );
    }
    for opening in &plan.openings {
        occ.push(opening.span.bounds(), ObstacleSource::Opening(opening.id));
    }
    for item in &plan.furniture {
        if Some(item.id) == exclude || item.refined_center.is_none() {
            continue;
        }
        if let Some(b) = item.current_box() {
            occ.push(b, ObstacleSource::Furniture(item.id));
        }
    }
    occ
}
