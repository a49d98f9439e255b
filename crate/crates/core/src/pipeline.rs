//! Stage-tagged end-to-end flow from a plan (or a raw model reply) to checked,
//! rendered and exported artifacts.

use std::fmt;

use crate::checks::{run_all_checks, CheckConfig, CheckReport, RoomRequirements};
use crate::codec::{parse_plan, sanitize_llm_response};
use crate::export::{export_bim_script, render_svg, BimScripts, SvgStyle};
use crate::model::{resolve_catalog, FloorPlan, FurnitureCatalog, OpeningId, WallId};
use crate::refine::{refine_plan, Refinement, RefinerConfig};
use crate::topology::analyze;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Prompt,
    Fetch,
    Sanitize,
    Parse,
    Topology,
    Catalog,
    Refine,
    Check,
    Render,
    Export,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Prompt => "prompt",
            Stage::Fetch => "fetch",
            Stage::Sanitize => "sanitize",
            Stage::Parse => "parse",
            Stage::Topology => "topology",
            Stage::Catalog => "catalog",
            Stage::Refine => "refine",
            Stage::Check => "check",
            Stage::Render => "render",
            Stage::Export => "export",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageError {
    pub stage: Stage,
    pub message: String,
    /// JSON path of the offending element, for parse errors.
    pub path: Option<String>,
}

impl StageError {
    pub fn new(stage: Stage, err: impl fmt::Display) -> Self {
        Self {
            stage,
            message: err.to_string(),
            path: None,
        }
    }
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.stage, self.message)
    }
}

impl std::error::Error for StageError {}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Settings {
    pub catalog: FurnitureCatalog,
    pub requirements: RoomRequirements,
    pub refiner: RefinerConfig,
    pub checks: CheckConfig,
    pub style: SvgStyle,
}

/// A parsed plan with rooms named, openings hosted and footprints resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct Prepared {
    pub plan: FloorPlan,
    pub dangling_walls: Vec<WallId>,
    pub orphans: Vec<OpeningId>,
}

pub fn prepare(text: &str, catalog: &FurnitureCatalog) -> Result<Prepared, StageError> {
    let plan = parse_plan(text).map_err(|e| StageError {
        stage: Stage::Parse,
        path: e.path().map(str::to_string),
        message: e.to_string(),
    })?;
    let topo = analyze(&plan).map_err(|e| StageError::new(Stage::Topology, e))?;
    let plan =
        resolve_catalog(&topo.plan, catalog).map_err(|e| StageError::new(Stage::Catalog, e))?;
    Ok(Prepared {
        plan,
        dangling_walls: topo.dangling_walls,
        orphans: topo.orphans,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Artifacts {
    pub prepared: Prepared,
    pub refinement: Refinement,
    pub report: CheckReport,
    pub svg: String,
    pub scripts: BimScripts,
}

impl Artifacts {
    /// 2 for placement failures or warnings, 3 for check errors, else 0.
    pub fn exit_code(&self) -> i32 {
        let check = self.report.exit_code();
        if check == 0 && !self.refinement.failed.is_empty() {
            2
        } else {
            check
        }
    }
}

/// Plan text through topology, refinement, checks, rendering and export.
pub fn run_plan(text: &str, settings: &Settings) -> Result<Artifacts, StageError> {
    let prepared = prepare(text, &settings.catalog)?;
    let refinement = refine_plan(&prepared.plan, &settings.refiner)
        .map_err(|e| StageError::new(Stage::Refine, e))?;
    let report = run_all_checks(&refinement.plan, &settings.requirements, &settings.checks);
    let svg = render_svg(&refinement.plan, &settings.style, &[]);
    let scripts =
        export_bim_script(&refinement.plan).map_err(|e| StageError::new(Stage::Export, e))?;
    Ok(Artifacts {
        prepared,
        refinement,
        report,
        svg,
        scripts,
    })
}

/// Same as [`run_plan`] for a raw model reply that may wrap the JSON in prose.
pub fn run_response(raw: &str, settings: &Settings) -> Result<(String, Artifacts), StageError> {
    let json = sanitize_llm_response(raw).map_err(|e| StageError::new(Stage::Sanitize, e))?;
    let artifacts = run_plan(&json, settings)?;
    Ok((json, artifacts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_errors_carry_stage_and_path() {
        let err = prepare(
            r#"{"walls": [{"start": [0,0,0], "end": [0,0,0]}], "doors": [], "windows": [], "Furniture": {}}"#,
            &FurnitureCatalog::default(),
        )
        .unwrap_err();
        assert_eq!(err.stage, Stage::Parse);
        assert_eq!(err.path.as_deref(), Some("walls[0]"));
    }

    #[test]
    fn open_envelope_halts_at_topology() {
        let err = prepare(
            r#"{"walls": [{"start": [0,0,0], "end": [10,0,0]}], "doors": [], "windows": [], "Furniture": {}}"#,
            &FurnitureCatalog::default(),
        )
        .unwrap_err();
        assert_eq!(err.stage, Stage::Topology);
    }

    #[test]
    fn unknown_kind_halts_at_catalog() {
        let err = prepare(
            r#"{"walls": [{"start": [0,0,0], "end": [10,0,0]}, {"start": [10,0,0], "end": [10,10,0]},
                {"start": [10,10,0], "end": [0,10,0]}, {"start": [0,10,0], "end": [0,0,0]}],
                "doors": [], "windows": [], "Furniture": {"Den": [{"name": "Piano", "position": [5,5,0]}]}}"#,
            &FurnitureCatalog::default(),
        )
        .unwrap_err();
        assert_eq!(err.stage, Stage::Catalog);
    }

    #[test]
    fn prose_without_json_halts_at_sanitize() {
        let err = run_response("I cannot help with that.", &Settings::default()).unwrap_err();
        assert_eq!(err.stage, Stage::Sanitize);
    }
}
