//! Plan file codec.
//!
//! Plan files are JSON objects with four top-level keys: `walls`, `doors`,
//! `windows` and `Furniture` (the lowercase `furniture` is accepted on input).
//! Linear elements carry `start`/`end` coordinates as `[x, y, 0]`; furniture is
//! grouped by room name with `{name, position}` entries where `position` is the
//! item center. The emitter produces one canonical text form, so
//! `emit(parse(emit(p)))` is byte-identical to `emit(p)`.

use std::fmt::Write as _;

use serde_json::{Map, Value};
use thiserror::Error;

use crate::geometry::{AlignedBox, GeometryError, Point2, Segment2, EPS};
use crate::model::{
    Facing, FloorPlan, FurnitureId, FurnitureInstance, Opening, OpeningId, OpeningKind, Wall,
    WallId, DEFAULT_WALL_HEIGHT,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CodecError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("schema error at `{path}`: {reason}")]
    Schema { path: String, reason: String },
    #[error("geometry error at `{path}`: {source}")]
    Geometry {
        path: String,
        #[source]
        source: GeometryError,
    },
    #[error("non-zero elevation {z} at `{path}` (single-storey plans only)")]
    NonZeroElevation { path: String, z: f64 },
    #[error("`{path}` lies outside the site extent {extent}")]
    OutsideExtent { path: String, extent: AlignedBox },
    #[error("no JSON object found in response")]
    NoJsonObjectFound,
}

impl CodecError {
    /// JSON-path-like location of the problem, when there is one.
    pub fn path(&self) -> Option<&str> {
        match self {
            CodecError::Schema { path, .. }
            | CodecError::Geometry { path, .. }
            | CodecError::NonZeroElevation { path, .. }
            | CodecError::OutsideExtent { path, .. } => Some(path),
            CodecError::Json(_) | CodecError::NoJsonObjectFound => None,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    /// Site rectangle; inferred from the wall bounding box when absent.
    pub extent: Option<AlignedBox>,
}

pub fn parse_plan(text: &str) -> Result<FloorPlan, CodecError> {
    parse_plan_with(text, &ParseOptions::default())
}

pub fn parse_plan_with(text: &str, opts: &ParseOptions) -> Result<FloorPlan, CodecError> {
    if text.trim().is_empty() {
        return Err(CodecError::Json("empty input".into()));
    }
    let root: Value = serde_json::from_str(text).map_err(|e| CodecError::Json(e.to_string()))?;
    let obj = root
        .as_object()
        .ok_or_else(|| schema("$", "top level must be an object"))?;

    let walls = array_at(obj, "walls")?
        .iter()
        .enumerate()
        .map(|(i, v)| parse_wall(i, v))
        .collect::<Result<Vec<_>, _>>()?;

    let mut openings = Vec::new();
    for (key, kind) in [
        ("doors", OpeningKind::Door),
        ("windows", OpeningKind::Window),
    ] {
        for (i, v) in array_at(obj, key)?.iter().enumerate() {
            openings.push(parse_opening(key, kind, i, v)?);
        }
    }

    let furniture_key = match (obj.contains_key("Furniture"), obj.contains_key("furniture")) {
        (true, false) => "Furniture",
        (false, true) => "furniture",
        (true, true) => {
            return Err(schema("$", "both `Furniture` and `furniture` are present"));
        }
        (false, false) => return Err(schema("$", "missing key `Furniture`")),
    };
    let groups = obj[furniture_key]
        .as_object()
        .ok_or_else(|| schema(furniture_key, "must be an object keyed by room name"))?;
    let mut furniture = Vec::new();
    for (room, items) in groups {
        let path = format!("{furniture_key}.{room}");
        let items = items
            .as_array()
            .ok_or_else(|| schema(&path, "must be an array of items"))?;
        for (i, item) in items.iter().enumerate() {
            let id = furniture.len();
            furniture.push(parse_item(&format!("{path}[{i}]"), id, room, item)?);
        }
    }

    for key in obj.keys() {
        if !matches!(
            key.as_str(),
            "walls" | "doors" | "windows" | "Furniture" | "furniture"
        ) {
            log::warn!("ignoring unknown top-level key `{key}`");
        }
    }

    let extent = opts.extent.or_else(|| {
        walls
            .iter()
            .map(|w| w.centerline.bounds())
            .reduce(|a, b| a.union(&b))
    });
    let plan = FloorPlan {
        extent,
        walls,
        openings,
        furniture,
        rooms: Vec::new(),
    };
    check_extent(&plan, furniture_key)?;
    Ok(plan)
}

fn check_extent(plan: &FloorPlan, furniture_key: &str) -> Result<(), CodecError> {
    let has_geometry =
        !plan.walls.is_empty() || !plan.openings.is_empty() || !plan.furniture.is_empty();
    let Some(extent) = plan.extent else {
        if has_geometry {
            return Err(schema("walls", "no walls to infer the site extent from"));
        }
        return Ok(());
    };
    let outside = |path: String| CodecError::OutsideExtent { path, extent };
    for (i, w) in plan.walls.iter().enumerate() {
        if !extent.contains_point(w.centerline.start) || !extent.contains_point(w.centerline.end) {
            return Err(outside(format!("walls[{i}]")));
        }
    }
    for o in &plan.openings {
        if !extent.contains_point(o.span.start) || !extent.contains_point(o.span.end) {
            return Err(outside(format!("{}s[{}]", o.id.kind, o.id.index)));
        }
    }
    for (room, items) in plan.furniture_groups() {
        for (i, item) in items.iter().enumerate() {
            if !extent.contains_point(item.initial_center) {
                return Err(outside(format!("{furniture_key}.{room}[{i}].position")));
            }
        }
    }
    Ok(())
}

fn schema(path: &str, reason: &str) -> CodecError {
    CodecError::Schema {
        path: path.to_string(),
        reason: reason.to_string(),
    }
}

fn array_at<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Vec<Value>, CodecError> {
    obj.get(key)
        .ok_or_else(|| schema("$", &format!("missing key `{key}`")))?
        .as_array()
        .ok_or_else(|| schema(key, "must be an array"))
}

fn parse_coord(path: &str, v: Option<&Value>) -> Result<Point2, CodecError> {
    let v = v.ok_or_else(|| schema(path, "missing coordinate"))?;
    let arr = v
        .as_array()
        .ok_or_else(|| schema(path, "coordinate must be an array [x, y, 0]"))?;
    if arr.len() != 3 {
        return Err(schema(
            path,
            &format!("coordinate must have 3 components, found {}", arr.len()),
        ));
    }
    let mut xyz = [0.0; 3];
    for (i, c) in arr.iter().enumerate() {
        xyz[i] = c
            .as_f64()
            .filter(|f| f.is_finite())
            .ok_or_else(|| schema(&format!("{path}[{i}]"), "component must be a finite number"))?;
    }
    if xyz[2].abs() > EPS {
        return Err(CodecError::NonZeroElevation {
            path: format!("{path}[2]"),
            z: xyz[2],
        });
    }
    Ok(Point2::new(xyz[0], xyz[1]))
}

fn parse_span<'a>(
    path: &str,
    v: &'a Value,
) -> Result<(Segment2, &'a Map<String, Value>), CodecError> {
    let obj = v
        .as_object()
        .ok_or_else(|| schema(path, "must be an object with `start` and `end`"))?;
    let start = parse_coord(&format!("{path}.start"), obj.get("start"))?;
    let end = parse_coord(&format!("{path}.end"), obj.get("end"))?;
    let seg = Segment2::axis_aligned(start, end).map_err(|source| CodecError::Geometry {
        path: path.to_string(),
        source,
    })?;
    Ok((seg, obj))
}

fn parse_wall(i: usize, v: &Value) -> Result<Wall, CodecError> {
    let path = format!("walls[{i}]");
    let (centerline, obj) = parse_span(&path, v)?;
    let height = match obj.get("height") {
        None => DEFAULT_WALL_HEIGHT,
        Some(h) => h
            .as_f64()
            .filter(|h| *h > 0.0)
            .ok_or_else(|| schema(&format!("{path}.height"), "must be a positive number"))?,
    };
    Ok(Wall {
        id: WallId(i),
        centerline,
        height,
    })
}

fn parse_opening(key: &str, kind: OpeningKind, i: usize, v: &Value) -> Result<Opening, CodecError> {
    let (span, obj) = parse_span(&format!("{key}[{i}]"), v)?;
    let metadata = obj
        .iter()
        .filter(|(k, _)| !matches!(k.as_str(), "start" | "end"))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    Ok(Opening {
        id: OpeningId { kind, index: i },
        span,
        host_wall: None,
        connects: None,
        metadata,
    })
}

fn parse_item(
    path: &str,
    id: usize,
    room: &str,
    v: &Value,
) -> Result<FurnitureInstance, CodecError> {
    let obj = v
        .as_object()
        .ok_or_else(|| schema(path, "item must be an object with `name` and `position`"))?;
    let name = obj
        .get("name")
        .and_then(Value::as_str)
        .filter(|s| !s.trim().is_empty())
        .ok_or_else(|| schema(&format!("{path}.name"), "must be a non-empty string"))?;
    let center = parse_coord(&format!("{path}.position"), obj.get("position"))?;
    let facing = match obj.get("facing") {
        None => Facing::North,
        Some(f) => f.as_str().and_then(Facing::parse).ok_or_else(|| {
            schema(
                &format!("{path}.facing"),
                "must be one of north, east, south, west",
            )
        })?,
    };
    let mut item = FurnitureInstance::new(id, name, room, center);
    item.id = FurnitureId(id);
    item.facing = facing;
    Ok(item)
}

/// Extracts the first balanced top-level JSON object from a raw model reply,
/// dropping prose and code fences around it.
pub fn sanitize_llm_response(raw: &str) -> Result<String, CodecError> {
    let bytes = raw.as_bytes();
    let mut first_balanced = None;
    for (start, _) in raw.match_indices('{') {
        let Some(end) = balanced_end(bytes, start) else {
            continue;
        };
        let candidate = &raw[start..=end];
        if serde_json::from_str::<Map<String, Value>>(candidate).is_ok() {
            return Ok(candidate.to_string());
        }
        first_balanced.get_or_insert(candidate);
    }
    match first_balanced {
        Some(c) => Ok(c.to_string()),
        None => Err(CodecError::NoJsonObjectFound),
    }
}

/// Index of the brace closing the object that opens at `start`, honoring
/// string literals and escapes.
fn balanced_end(bytes: &[u8], start: usize) -> Option<usize> {
    let mut depth = 0usize;
    let mut in_string = false;
    let mut escaped = false;
    for (i, &b) in bytes.iter().enumerate().skip(start) {
        if in_string {
            match b {
                _ if escaped => escaped = false,
                b'\\' => escaped = true,
                b'"' => in_string = false,
                _ => {}
            }
            continue;
        }
        match b {
            b'"' => in_string = true,
            b'{' => depth += 1,
            b'}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// Minimal decimal form with at most four fractional digits.
pub fn format_number(v: f64) -> String {
    let rounded = (v * 1e4).round() / 1e4;
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    if rounded.fract() == 0.0 && rounded.abs() < 1e15 {
        format!("{}", rounded as i64)
    } else {
        let s = format!("{rounded:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn coord(p: Point2) -> String {
    format!("[{},{},0]", format_number(p.x), format_number(p.y))
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

/// Canonical plan text. Furniture positions use the refined center when one
/// exists; non-default facings and wall heights are written as extra keys.
pub fn emit_plan(plan: &FloorPlan) -> String {
    let mut out = String::from("{\n");

    let walls: Vec<String> = plan
        .walls
        .iter()
        .map(|w| {
            let mut line = format!(
                "{{\"start\": {}, \"end\": {}",
                coord(w.centerline.start),
                coord(w.centerline.end)
            );
            if (w.height - DEFAULT_WALL_HEIGHT).abs() > EPS {
                let _ = write!(line, ", \"height\": {}", format_number(w.height));
            }
            line.push('}');
            line
        })
        .collect();
    write_array(&mut out, "walls", &walls, 1);
    out.push_str(",\n");

    for (key, kind) in [
        ("doors", OpeningKind::Door),
        ("windows", OpeningKind::Window),
    ] {
        let spans: Vec<String> = plan
            .openings
            .iter()
            .filter(|o| o.kind() == kind)
            .map(|o| {
                let mut line = format!(
                    "{{\"start\": {}, \"end\": {}",
                    coord(o.span.start),
                    coord(o.span.end)
                );
                for (k, v) in &o.metadata {
                    let _ = write!(line, ", {}: {}", json_str(k), v);
                }
                line.push('}');
                line
            })
            .collect();
        write_array(&mut out, key, &spans, 1);
        out.push_str(",\n");
    }

    let groups = plan.furniture_groups();
    if groups.is_empty() {
        out.push_str("  \"Furniture\": {}\n");
    } else {
        out.push_str("  \"Furniture\": {\n");
        for (gi, (room, items)) in groups.iter().enumerate() {
            let lines: Vec<String> = items
                .iter()
                .map(|item| {
                    let mut line = format!(
                        "{{\"name\": {}, \"position\": {}",
                        json_str(&item.name),
                        coord(item.current_center())
                    );
                    if item.facing != Facing::North {
                        let _ = write!(line, ", \"facing\": \"{}\"", item.facing);
                    }
                    line.push('}');
                    line
                })
                .collect();
            write_array(&mut out, room, &lines, 2);
            out.push_str(if gi + 1 < groups.len() { ",\n" } else { "\n" });
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

fn write_array(out: &mut String, key: &str, lines: &[String], indent: usize) {
    let pad = "  ".repeat(indent);
    if lines.is_empty() {
        let _ = write!(out, "{pad}{}: []", json_str(key));
        return;
    }
    let _ = writeln!(out, "{pad}{}: [", json_str(key));
    for (i, line) in lines.iter().enumerate() {
        let sep = if i + 1 < lines.len() { "," } else { "" };
        let _ = writeln!(out, "{pad}  {line}{sep}");
    }
    let _ = write!(out, "{pad}]");
}
