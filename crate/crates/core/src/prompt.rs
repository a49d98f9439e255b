//! Prompt templates and the optional model round-trip.

use std::path::PathBuf;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::format_number as num;

#[derive(Debug, Error)]
pub enum PromptError {
    #[error("brief needs a positive width and length and at least one room")]
    EmptyBrief,
    #[error("brief JSON: {0}")]
    Json(String),
}

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("transport error: {0}")]
    TransportError(String),
    #[error("the model returned an empty response")]
    EmptyResponse,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BriefRoom {
    pub name: String,
    /// Trailing qualifier such as "with an attached toilet".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FurnitureAssignment {
    pub room: String,
    pub items: Vec<String>,
}

/// What the layout prompt asks for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Brief {
    /// Feet along x.
    pub width: f64,
    /// Feet along y.
    pub length: f64,
    pub rooms: Vec<BriefRoom>,
    #[serde(default)]
    pub furniture: Vec<FurnitureAssignment>,
    /// Append the per-key rules section.
    #[serde(default)]
    pub directives: bool,
}

impl Brief {
    pub fn from_json(text: &str) -> Result<Self, PromptError> {
        serde_json::from_str(text).map_err(|e| PromptError::Json(e.to_string()))
    }

    /// The four-room, 30×40 ft brief of the bundled case study.
    pub fn case_study() -> Self {
        let room = |name: &str, note: Option<&str>| BriefRoom {
            name: name.into(),
            note: note.map(str::to_string),
        };
        let assign = |room: &str, items: &[&str]| FurnitureAssignment {
            room: room.into(),
            items: items.iter().map(|s| s.to_string()).collect(),
        };
        Self {
            width: 30.0,
            length: 40.0,
            rooms: vec![
                room("LivingHall", None),
                room("Kitchen", None),
                room("OfficeRoom", None),
                room("Bedroom", Some("with an attached toilet")),
            ],
            furniture: vec![
                assign("LivingHall", &["Sofa", "TVUnit"]),
                assign("OfficeRoom", &["Sofa", "OfficeDesk"]),
                assign("Bedroom", &["Bed", "Wardrobe"]),
                assign("Kitchen", &["DiningTable", "Bench"]),
            ],
            directives: false,
        }
    }
}

fn english_list(items: &[String]) -> String {
    match items {
        [] => String::new(),
        [one] => one.clone(),
        [a, b] => format!("{a} and {b}"),
        [rest @ .., last] => format!("{}, and {last}", rest.join(", ")),
    }
}

/// Layout-generation prompt for `brief`.
pub fn build_layout_prompt(brief: &Brief) -> Result<String, PromptError> {
    let positive = |v: f64| v.is_finite() && v > 0.0;
    if !positive(brief.width) || !positive(brief.length) || brief.rooms.is_empty() {
        return Err(PromptError::EmptyBrief);
    }
    let (w, l) = (num(brief.width), num(brief.length));
    let rooms: Vec<String> = brief
        .rooms
        .iter()
        .map(|r| match &r.note {
            Some(n) => format!("{} {}", r.name, n),
            None => r.name.clone(),
        })
        .collect();
    let noun = if rooms.len() == 1 { "room" } else { "rooms" };
    let furniture: String = brief
        .furniture
        .iter()
        .map(|a| format!("- {}: {}\n", a.room, a.items.join(", ")))
        .collect();

    let mut out = format!(
        "Generate a JSON object representing a floor plan for a single-story building \
with overall dimensions of {w} feet in width (x-axis: 0 to {w}) and {l} feet in \
length (y-axis: 0 to {l}). The output must be a JSON object with four top-level \
keys: \"walls\", \"doors\", \"windows\", and \"Furniture\".

walls: Provide an array of objects where each object represents a wall segment \
with \"start\" and \"end\" coordinates in the format [x, y, 0]. The exterior walls \
must form a {w}x{l} ft rectangle. Include interior walls to define the following \
{noun}: {}. \
The AI should decide the placement and dimensions of these {noun}.

doors: List each door with \"start\" and \"end\" coordinates. Place doors on wall \
segments with no overlap. Ensure logical connectivity between rooms and include \
at least one exterior entry door.

windows: Provide an array of \"start\" and \"end\" coordinates. Place only on \
exterior walls, avoiding any overlap with doors.

Furniture: For each room, include furniture as objects with \"name\" and \
\"position\" fields. Position is [x, y, 0], representing the center.
{furniture}
Assume standard furniture dimensions and ensure no overlaps with walls, \
doors, or other furniture. All components must lie within the defined \
room boundaries.
",
        english_list(&rooms)
    );
    if brief.directives {
        let entry = brief
            .rooms
            .first()
            .map(|r| r.name.as_str())
            .unwrap_or_default();
        out.push_str(&format!(
            "
Rules:
- walls: Return an array walls[] where each item has keys start [x,y,0] and end [x,y,0]. \
Exterior walls form a {w}x{l} ft rectangle; interior walls subdivide the space into the {} {noun} named above.
- doors: Return an array doors[] with the start/end format above. Place at least one exterior door to the {entry} \
and interior doors that connect all rooms; no door may overlap a window.
- windows: Return an array windows[] on exterior walls only, in the same start/end format; \
each window must be at least 2 ft from any door edge.
- Furniture: Return an object whose keys are room names. Each value is an array of items with \
name and position [x,y,0]. All furniture must respect a clearance >= 1 ft from walls, doors, windows, \
and other furniture.
",
            brief.rooms.len()
        ));
    }
    out.push_str(
        "
Note: Avoid unnecessary text or metadata. Output should be a clean JSON \
object only.
",
    );
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementClass {
    Walls,
    Doors,
    Windows,
    Furniture,
}

impl ElementClass {
    pub const ALL: [ElementClass; 4] = [
        ElementClass::Walls,
        ElementClass::Doors,
        ElementClass::Windows,
        ElementClass::Furniture,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ElementClass::Walls => "walls",
            ElementClass::Doors => "doors",
            ElementClass::Windows => "windows",
            ElementClass::Furniture => "furniture",
        }
    }
}

const WALLS_SCRIPT_PROMPT: &str = "You are a Revit Python expert. Given the variable `data` that stores a JSON object with a top-level key \"walls\", where each element has \"start\" and \"end\" coordinates in the format [x, y, 0], generate a Python script that creates all the walls in Autodesk Revit.

Requirements:
- Import the necessary Revit API classes (e.g., Autodesk.Revit.DB).
- Begin a Transaction.
- For each wall segment:
  - Create a Line using Line.CreateBound(XYZ(x1, y1, 0), XYZ(x2, y2, 0)).
  - Use Wall.Create(doc, line, wallType.Id, level.Id, 10, 0, False, False) to place a 10-ft-high basic wall.
- Use the first available wall type (wallType) and the first level (level) in the document.
- Commit the Transaction.
- Do NOT generate doors, windows, or furniture.
- Output only executable Python code. Do not include any explanations, comments, or markdown.
";

fn opening_script_prompt(key: &str, singular: &str, category: &str, skip: &str) -> String {
    format!(
        "You are a Revit Python expert. Given the variable `data` that stores a JSON object with a top-level key \"{key}\", where each element has \"start\" and \"end\" coordinates in the format [x, y, 0], generate a Python script that places all the {key} in Autodesk Revit. The walls already exist in the document.

Requirements:
- Import the necessary Revit API classes (e.g., Autodesk.Revit.DB).
- Begin a Transaction.
- For each {singular}:
  - Compute the midpoint XYZ((x1 + x2) / 2, (y1 + y2) / 2, 0) of its start and end coordinates.
  - Find the existing wall whose location curve contains that midpoint and use it as the host.
  - Use doc.Create.NewFamilyInstance(midpoint, symbol, hostWall, level, StructuralType.NonStructural) to place it.
  - Set its width to the distance between start and end when the family exposes a writable Width parameter.
- Use the first available {category} family symbol (symbol), activating it if needed, and the first level (level) in the document.
- Commit the Transaction.
- Do NOT generate walls, {skip}, or furniture.
- Output only executable Python code. Do not include any explanations, comments, or markdown.
"
    )
}

const FURNITURE_SCRIPT_PROMPT: &str = "You are a Revit Python expert. Given the variable `data` that stores a JSON object with a top-level key \"Furniture\", whose keys are room names and whose values are arrays of items with \"name\" and \"position\" fields, where \"position\" is the center point in the format [x, y, 0], generate a Python script that places every furniture item in Autodesk Revit.

Requirements:
- Import the necessary Revit API classes (e.g., Autodesk.Revit.DB).
- Begin a Transaction.
- For each furniture item:
  - Look up the furniture family symbol whose family name equals the item's \"name\", activating it if needed.
  - Use doc.Create.NewFamilyInstance(XYZ(x, y, 0), symbol, level, StructuralType.NonStructural) to place it at its center point.
  - If the item has a \"facing\" of \"west\", \"south\" or \"east\", rotate it about the vertical axis through its center by 90, 180 or 270 degrees.
- Use the first level (level) in the document.
- Commit the Transaction.
- Do NOT generate walls, doors, or windows.
- Output only executable Python code. Do not include any explanations, comments, or markdown.
";

/// Second-stage prompt that asks a model for a BIM script for one element class.
pub fn build_script_prompt(class: ElementClass) -> String {
    match class {
        ElementClass::Walls => WALLS_SCRIPT_PROMPT.to_string(),
        ElementClass::Doors => opening_script_prompt("doors", "door", "door", "windows"),
        ElementClass::Windows => opening_script_prompt("windows", "window", "window", "doors"),
        ElementClass::Furniture => FURNITURE_SCRIPT_PROMPT.to_string(),
    }
}

/// Chat-completion service settings. Normally read from the environment.
#[derive(Debug, Clone, PartialEq)]
pub struct EndpointConfig {
    pub url: String,
    pub model: String,
    pub api_key: Option<String>,
    pub timeout: Duration,
    /// Extra attempts after the first one.
    pub retries: u32,
}

pub const ENV_URL: &str = "FLOORPLAN_ENDPOINT_URL";
pub const ENV_MODEL: &str = "FLOORPLAN_MODEL";
pub const ENV_API_KEY: &str = "FLOORPLAN_API_KEY";
pub const ENV_TIMEOUT: &str = "FLOORPLAN_TIMEOUT_SECS";
pub const ENV_RETRIES: &str = "FLOORPLAN_RETRIES";

impl EndpointConfig {
    /// Builds the config from a variable lookup (normally `std::env::var`).
    pub fn from_lookup(get: impl Fn(&str) -> Option<String>) -> Result<Self, FetchError> {
        let url = get(ENV_URL)
            .filter(|s| !s.is_empty())
            .ok_or_else(|| FetchError::TransportError(format!("{ENV_URL} is not set")))?;
        let parse = |key: &str, default: u64| -> Result<u64, FetchError> {
            match get(key) {
                None => Ok(default),
                Some(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| FetchError::TransportError(format!("{key} must be an integer"))),
            }
        };
        Ok(Self {
            url,
            model: get(ENV_MODEL).unwrap_or_else(|| "gpt-4o".to_string()),
            api_key: get(ENV_API_KEY).filter(|s| !s.is_empty()),
            timeout: Duration::from_secs(parse(ENV_TIMEOUT, 120)?),
            retries: parse(ENV_RETRIES, 2)? as u32,
        })
    }

    pub fn from_env() -> Result<Self, FetchError> {
        Self::from_lookup(|k| std::env::var(k).ok())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Transport {
    /// Saved response read verbatim; never touches the network.
    File(PathBuf),
    Endpoint(EndpointConfig),
}

/// Sends `prompt` through `transport` and returns the raw model text.
pub fn fetch_layout(prompt: &str, transport: &Transport) -> Result<String, FetchError> {
    let text = match transport {
        Transport::File(path) => std::fs::read_to_string(path)
            .map_err(|e| FetchError::TransportError(format!("{}: {e}", path.display())))?,
        Transport::Endpoint(cfg) => fetch_endpoint(prompt, cfg)?,
    };
    if text.trim().is_empty() {
        return Err(FetchError::EmptyResponse);
    }
    Ok(text)
}

fn fetch_endpoint(prompt: &str, cfg: &EndpointConfig) -> Result<String, FetchError> {
    let client = reqwest::blocking::Client::builder()
        .timeout(cfg.timeout)
        .build()
        .map_err(|e| FetchError::TransportError(e.to_string()))?;
    let body = serde_json::json!({
        "model": cfg.model,
        "messages": [{"role": "user", "content": prompt}],
        "temperature": 0,
    });
    let mut last = String::new();
    for attempt in 0..=cfg.retries {
        if attempt > 0 {
            log::warn!("retrying request ({attempt}/{}) after: {last}", cfg.retries);
        }
        let mut req = client
            .post(&cfg.url)
            .header(reqwest::header::CONTENT_TYPE, "application/json")
            .body(body.to_string());
        if let Some(key) = &cfg.api_key {
            req = req.bearer_auth(key);
        }
        let resp = match req.send() {
            Ok(r) => r,
            Err(e) => {
                last = e.to_string();
                continue;
            }
        };
        let status = resp.status();
        let text = resp
            .text()
            .map_err(|e| FetchError::TransportError(e.to_string()))?;
        if status.is_server_error() {
            last = format!("HTTP {status}");
            continue;
        }
        if !status.is_success() {
            return Err(FetchError::TransportError(format!("HTTP {status}: {text}")));
        }
        if text.trim().is_empty() {
            return Err(FetchError::EmptyResponse);
        }
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| FetchError::TransportError(format!("response is not JSON: {e}")))?;
        let content = value
            .pointer("/choices/0/message/content")
            .and_then(|c| c.as_str())
            .unwrap_or_default();
        if content.trim().is_empty() {
            return Err(FetchError::EmptyResponse);
        }
        return Ok(content.to_string());
    }
    Err(FetchError::TransportError(last))
}
