//! SVG drawings and BIM automation scripts.

use std::fmt::Write;

use thiserror::Error;

use crate::codec::format_number as num;
use crate::geometry::{AlignedBox, Point2};
use crate::model::{FloorPlan, OpeningKind};
use crate::refine::PlacementTrace;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExportError {
    #[error("{element} cannot be expressed in the script: {reason}")]
    UnsupportedElement { element: String, reason: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgStyle {
    /// Pixels per foot.
    pub scale: f64,
    pub wall_color: String,
    pub wall_width: f64,
    pub door_color: String,
    pub window_color: String,
    pub opening_width: f64,
    pub furniture_fill: String,
    pub furniture_stroke: String,
    pub label_size: f64,
    pub room_labels: bool,
    pub trace_color: String,
    pub trace_radius: f64,
}

impl Default for SvgStyle {
    fn default() -> Self {
        Self {
            scale: 10.0,
            wall_color: "#333333".into(),
            wall_width: 3.0,
            door_color: "#1f77b4".into(),
            window_color: "#17becf".into(),
            opening_width: 5.0,
            furniture_fill: "#d9c2e9".into(),
            furniture_stroke: "#7b3294".into(),
            label_size: 9.0,
            room_labels: true,
            trace_color: "#e6550d".into(),
            trace_radius: 1.5,
        }
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

struct Canvas {
    extent: AlignedBox,
    scale: f64,
}

impl Canvas {
    fn x(&self, x: f64) -> String {
        num((x - self.extent.min.x) * self.scale)
    }

    fn y(&self, y: f64) -> String {
        num((self.extent.max.y - y) * self.scale)
    }

    fn line(&self, a: Point2, b: Point2) -> String {
        format!(
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            self.x(a.x),
            self.y(a.y),
            self.x(b.x),
            self.y(b.y)
        )
    }
}

/// Top-down drawing of the plan, y axis pointing up. Furniture is drawn at its
/// refined position when there is one. `traces` adds one dot per evaluated
/// candidate center.
pub fn render_svg(plan: &FloorPlan, style: &SvgStyle, traces: &[PlacementTrace]) -> String {
    let extent = plan.extent.unwrap_or_default();
    let canvas = Canvas {
        extent,
        scale: style.scale,
    };
    let w = num(extent.width() * style.scale);
    let h = num(extent.height() * style.scale);
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );

    if style.room_labels && !plan.rooms.is_empty() {
        let _ = writeln!(
            s,
            r##"  <g class="rooms" fill="#999999" font-family="sans-serif" font-size="{}" text-anchor="middle">"##,
            num(style.label_size * 1.5)
        );
        for room in &plan.rooms {
            let c = room.boundary.bounds().center();
            let _ = writeln!(
                s,
                r#"    <text x="{}" y="{}">{}</text>"#,
                canvas.x(c.x),
                canvas.y(c.y),
                escape(&room.name)
            );
        }
        s.push_str("  </g>\n");
    }

    let _ = writeln!(
        s,
        r#"  <g class="walls" stroke="{}" stroke-width="{}" stroke-linecap="square">"#,
        style.wall_color,
        num(style.wall_width)
    );
    for wall in &plan.walls {
        let _ = writeln!(
            s,
            "    {}",
            canvas.line(wall.centerline.start, wall.centerline.end)
        );
    }
    s.push_str("  </g>\n");

    for (kind, class, color) in [
        (OpeningKind::Door, "doors", &style.door_color),
        (OpeningKind::Window, "windows", &style.window_color),
    ] {
        let spans: Vec<_> = plan.openings.iter().filter(|o| o.kind() == kind).collect();
        if spans.is_empty() {
            continue;
        }
        let _ = writeln!(
            s,
            r#"  <g class="{class}" stroke="{color}" stroke-width="{}">"#,
            num(style.opening_width)
        );
        for o in spans {
            let _ = writeln!(s, "    {}", canvas.line(o.span.start, o.span.end));
        }
        s.push_str("  </g>\n");
    }

    let boxes: Vec<_> = plan
        .furniture
        .iter()
        .filter_map(|f| f.current_box().map(|b| (f, b)))
        .collect();
    if !boxes.is_empty() {
        let _ = writeln!(
            s,
            r#"  <g class="furniture" fill="{}" stroke="{}" stroke-width="1" font-family="sans-serif" font-size="{}" text-anchor="middle">"#,
            style.furniture_fill,
            style.furniture_stroke,
            num(style.label_size)
        );
        for (f, b) in boxes {
            let c = b.center();
            let _ = writeln!(
                s,
                r#"    <rect x="{}" y="{}" width="{}" height="{}"/>"#,
                canvas.x(b.min.x),
                canvas.y(b.max.y),
                num(b.width() * style.scale),
                num(b.height() * style.scale)
            );
            let _ = writeln!(
                s,
                r##"    <text x="{}" y="{}" stroke="none" fill="#000000">{}</text>"##,
                canvas.x(c.x),
                canvas.y(c.y),
                escape(&f.name)
            );
        }
        s.push_str("  </g>\n");
    }

    if traces.iter().any(|t| !t.steps.is_empty()) {
        let _ = writeln!(s, r#"  <g class="traces" fill="{}">"#, style.trace_color);
        for t in traces {
            for step in &t.steps {
                let _ = writeln!(
                    s,
                    r#"    <circle cx="{}" cy="{}" r="{}"/>"#,
                    canvas.x(step.center.x),
                    canvas.y(step.center.y),
                    num(style.trace_radius)
                );
            }
        }
        s.push_str("  </g>\n");
    }
    s.push_str("</svg>\n");
    s
}

/// Script documents for the external BIM host, one per element class.
#[derive(Debug, Clone, PartialEq)]
pub struct BimScripts {
    pub walls: String,
    pub openings: String,
    pub furniture: String,
}

const SCRIPT_HEAD: &str = "import clr\nclr.AddReference('RevitAPI')\n";
const DOC_LINE: &str = "doc = __revit__.ActiveUIDocument.Document\n";
const LEVEL_LINE: &str = "level = FilteredElementCollector(doc).OfClass(Level).FirstElement()\n";

fn xyz(p: Point2) -> String {
    format!("XYZ({}, {}, 0)", num(p.x), num(p.y))
}

fn transaction(name: &str, body: &str) -> String {
    format!("t = Transaction(doc, '{name}')\nt.Start()\n{body}t.Commit()\n")
}

/// One bounded line and one wall creation call per wall, inside a single
/// transaction, using the first wall type and level of the document.
pub fn export_walls_script(plan: &FloorPlan) -> Result<String, ExportError> {
    let mut body = String::new();
    for wall in &plan.walls {
        if !(wall.height.is_finite() && wall.height > 0.0) {
            return Err(ExportError::UnsupportedElement {
                element: wall.id.to_string(),
                reason: "wall height must be positive".into(),
            });
        }
        let _ = writeln!(
            body,
            "line = Line.CreateBound({}, {})",
            xyz(wall.centerline.start),
            xyz(wall.centerline.end)
        );
        let _ = writeln!(
            body,
            "Wall.Create(doc, line, wallType.Id, level.Id, {}, 0, False, False)",
            num(wall.height)
        );
    }
    Ok(format!(
        "{SCRIPT_HEAD}from Autodesk.Revit.DB import FilteredElementCollector, Level, Line, Transaction, Wall, WallType, XYZ\n\n\
         {DOC_LINE}wallType = FilteredElementCollector(doc).OfClass(WallType).FirstElement()\n{LEVEL_LINE}\n{}",
        transaction("Create walls", &body)
    ))
}

/// Doors and windows as hosted family instances at their span midpoints.
/// Orphan openings have no host wall and are rejected.
pub fn export_openings_script(plan: &FloorPlan) -> Result<String, ExportError> {
    let mut body = String::new();
    for o in &plan.openings {
        if o.host_wall.is_none() {
            return Err(ExportError::UnsupportedElement {
                element: o.id.to_string(),
                reason: "opening is not on any wall".into(),
            });
        }
        let symbol = match o.kind() {
            OpeningKind::Door => "doorSymbol",
            OpeningKind::Window => "windowSymbol",
        };
        let m = o.span.midpoint();
        let _ = writeln!(
            body,
            "place({symbol}, {}, {}, {})",
            num(m.x),
            num(m.y),
            num(o.span.length())
        );
    }
    Ok(format!(
        "{SCRIPT_HEAD}from Autodesk.Revit.DB import BuiltInCategory, FamilySymbol, FilteredElementCollector, Level, Transaction, Wall, XYZ\n\
         from Autodesk.Revit.DB.Structure import StructuralType\n\n\
         {DOC_LINE}{LEVEL_LINE}\
         walls = list(FilteredElementCollector(doc).OfClass(Wall))\n\n\
         def first_symbol(category):\n\
         \x20   return FilteredElementCollector(doc).OfCategory(category).OfClass(FamilySymbol).FirstElement()\n\n\
         def host_at(x, y):\n\
         \x20   p = XYZ(x, y, 0)\n\
         \x20   for w in walls:\n\
         \x20       if w.Location.Curve.Distance(p) < 1e-6:\n\
         \x20           return w\n\
         \x20   return None\n\n\
         def place(symbol, x, y, width):\n\
         \x20   inst = doc.Create.NewFamilyInstance(XYZ(x, y, 0), symbol, host_at(x, y), level, StructuralType.NonStructural)\n\
         \x20   param = inst.LookupParameter('Width')\n\
         \x20   if param is not None and not param.IsReadOnly:\n\
         \x20       param.Set(width)\n\
         \x20   return inst\n\n\
         doorSymbol = first_symbol(BuiltInCategory.OST_Doors)\n\
         windowSymbol = first_symbol(BuiltInCategory.OST_Windows)\n\n{}",
        transaction(
            "Place openings",
            &format!("if not doorSymbol.IsActive:\n    doorSymbol.Activate()\nif not windowSymbol.IsActive:\n    windowSymbol.Activate()\n{body}")
        )
    ))
}

fn py_str(s: &str) -> String {
    let mut out = String::from("'");
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\'' => out.push_str("\\'"),
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('\'');
    out
}

/// Furniture family instances at their refined centers, looked up by kind
/// label and turned to their facing.
pub fn export_furniture_script(plan: &FloorPlan) -> Result<String, ExportError> {
    let mut body = String::new();
    for f in &plan.furniture {
        let c = f.current_center();
        let _ = writeln!(
            body,
            "place({}, {}, {}, {})",
            py_str(&f.name),
            num(c.x),
            num(c.y),
            f.facing.degrees()
        );
    }
    Ok(format!(
        "{SCRIPT_HEAD}import math\n\
         from Autodesk.Revit.DB import BuiltInCategory, ElementTransformUtils, FamilySymbol, FilteredElementCollector, Level, Line, Transaction, XYZ\n\
         from Autodesk.Revit.DB.Structure import StructuralType\n\n\
         {DOC_LINE}{LEVEL_LINE}\
         symbols = {{}}\n\
         for s in FilteredElementCollector(doc).OfCategory(BuiltInCategory.OST_Furniture).OfClass(FamilySymbol):\n\
         \x20   symbols.setdefault(s.Family.Name, s)\n\n\
         def place(kind, x, y, degrees):\n\
         \x20   symbol = symbols[kind]\n\
         \x20   if not symbol.IsActive:\n\
         \x20       symbol.Activate()\n\
         \x20   inst = doc.Create.NewFamilyInstance(XYZ(x, y, 0), symbol, level, StructuralType.NonStructural)\n\
         \x20   if degrees:\n\
         \x20       axis = Line.CreateBound(XYZ(x, y, 0), XYZ(x, y, 1))\n\
         \x20       ElementTransformUtils.RotateElement(doc, inst.Id, axis, math.radians(degrees))\n\
         \x20   return inst\n\n{}",
        transaction("Place furniture", &body)
    ))
}

pub fn export_bim_script(plan: &FloorPlan) -> Result<BimScripts, ExportError> {
    Ok(BimScripts {
        walls: export_walls_script(plan)?,
        openings: export_openings_script(plan)?,
        furniture: export_furniture_script(plan)?,
    })
}
