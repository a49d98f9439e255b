//! `floorplan` command line.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Deserialize;

use floorplan_core::checks::{run_all_checks, CheckConfig, RoomRequirements};
use floorplan_core::codec::{emit_plan, sanitize_llm_response};
use floorplan_core::export::{export_bim_script, render_svg, SvgStyle};
use floorplan_core::model::FurnitureCatalog;
use floorplan_core::pipeline::{prepare, Prepared, Settings, Stage, StageError};
use floorplan_core::prompt::{
    build_layout_prompt, build_script_prompt, fetch_layout, Brief, ElementClass, EndpointConfig,
    Transport,
};
use floorplan_core::refine::{refine_plan, verify_refinement, Refinement, RefinerConfig};

#[derive(Parser, Debug)]
#[command(
    name = "floorplan",
    version,
    about = "Floor plan generation, refinement and checking"
)]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalOpts {
    /// JSON config file.
    #[arg(long, global = true, env = "FLOORPLAN_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, env = "FLOORPLAN_FORMAT")]
    format: Option<Format>,
    /// Clearance between items, feet.
    #[arg(long, global = true, env = "FLOORPLAN_DELTA")]
    delta: Option<f64>,
    /// Step length, feet.
    #[arg(long, global = true, env = "FLOORPLAN_LAMBDA")]
    lambda: Option<f64>,
    #[arg(long = "max-iters", global = true, env = "FLOORPLAN_MAX_ITERS")]
    max_iters: Option<usize>,
    #[arg(long = "flush-tol", global = true, env = "FLOORPLAN_FLUSH_TOL")]
    flush_tol: Option<f64>,
    /// Keep every item in its original facing.
    #[arg(long = "no-rotation", global = true)]
    no_rotation: bool,
    /// Circulation raster cell, feet.
    #[arg(long, global = true, env = "FLOORPLAN_GRID")]
    grid: Option<f64>,
    #[arg(long, global = true, env = "FLOORPLAN_CATALOG")]
    catalog: Option<PathBuf>,
    #[arg(long, global = true, env = "FLOORPLAN_REQUIREMENTS")]
    requirements: Option<PathBuf>,
    /// Worker threads for directory inputs.
    #[arg(long, global = true, env = "FLOORPLAN_JOBS")]
    jobs: Option<usize>,
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum TransportKind {
    File,
    Endpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScriptClass {
    Walls,
    Doors,
    Windows,
    Furniture,
}

impl From<ScriptClass> for ElementClass {
    fn from(c: ScriptClass) -> Self {
        match c {
            ScriptClass::Walls => ElementClass::Walls,
            ScriptClass::Doors => ElementClass::Doors,
            ScriptClass::Windows => ElementClass::Windows,
            ScriptClass::Furniture => ElementClass::Furniture,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse plans and report topology problems.
    Validate {
        /// Plan file or directory of plans.
        input: PathBuf,
    },
    /// Move furniture into feasible wall-aligned positions.
    Refine {
        input: PathBuf,
        /// Output file (or directory for a directory input).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write placement traces as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Re-check every placement and grid-search unplaced items.
        #[arg(long)]
        verify: bool,
    },
    /// Run the design checks.
    Check {
        /// Plan file or directory of plans.
        input: PathBuf,
        /// Refine before checking.
        #[arg(long)]
        refine: bool,
    },
    /// Draw a plan as SVG.
    Render {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        scale: Option<f64>,
        /// Refine first and overlay the placement traces.
        #[arg(long)]
        trace: bool,
    },
    /// Write BIM scripts for walls, openings and furniture.
    Export {
        input: PathBuf,
        #[arg(short, long = "out-dir")]
        out_dir: PathBuf,
        /// Refine before exporting.
        #[arg(long)]
        refine: bool,
    },
    /// Print the layout prompt for a brief, or a script prompt.
    Prompt {
        brief: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long = "script-class", value_enum)]
        script_class: Option<ScriptClass>,
        /// Append the design rules section.
        #[arg(long)]
        directives: bool,
    },
    /// Brief to prompt, reply, refined plan, report, drawing and scripts.
    Pipeline {
        brief: PathBuf,
        #[arg(long = "out-dir")]
        out_dir: PathBuf,
        #[arg(long, value_enum, env = "FLOORPLAN_TRANSPORT")]
        transport: Option<TransportKind>,
        /// Saved model reply, for the file transport.
        #[arg(long)]
        response: Option<PathBuf>,
        #[arg(long)]
        directives: bool,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ConfigFile {
    refiner: Option<RefinerConfig>,
    grid: Option<f64>,
    window_door_gap: Option<f64>,
    catalog: Option<PathBuf>,
    requirements: Option<PathBuf>,
    format: Option<Format>,
    jobs: Option<usize>,
    transport: Option<TransportKind>,
    scale: Option<f64>,
}

struct Resolved {
    settings: Settings,
    format: Format,
    jobs: Option<usize>,
    transport: Option<TransportKind>,
}

fn resolve(opts: &GlobalOpts) -> Result<Resolved> {
    let (file, base) = match &opts.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            let cfg: ConfigFile = serde_json::from_str(&text)
                .with_context(|| format!("parsing config {}", path.display()))?;
            (
                cfg,
                path.parent().map(Path::to_path_buf).unwrap_or_default(),
            )
        }
        None => (ConfigFile::default(), PathBuf::new()),
    };
    let mut refiner = file.refiner.unwrap_or_default();
    if let Some(v) = opts.delta {
        refiner.clearance_delta = v;
    }
    if let Some(v) = opts.lambda {
        refiner.step_lambda = v;
    }
    if let Some(v) = opts.max_iters {
        refiner.max_iterations = v;
    }
    if let Some(v) = opts.flush_tol {
        refiner.flush_tolerance = v;
    }
    if opts.no_rotation {
        refiner.rotation_allowed = false;
    }
    refiner.validate().map_err(|e| anyhow::anyhow!("{e}"))?;

    let grid = opts
        .grid
        .or(file.grid)
        .unwrap_or(CheckConfig::default().grid_cell);
    if !(grid.is_finite() && grid > 0.0) {
        bail!("grid cell must be positive");
    }
    let mut checks = CheckConfig::from_refiner(&refiner, grid);
    if let Some(g) = file.window_door_gap {
        checks.window_door_gap = g;
    }

    let catalog_path = opts
        .catalog
        .clone()
        .or_else(|| file.catalog.map(|p| base.join(p)));
    let catalog = match catalog_path {
        Some(p) => {
            let text = fs::read_to_string(&p)
                .with_context(|| format!("reading catalog {}", p.display()))?;
            FurnitureCatalog::from_json(&text)
                .map_err(|e| anyhow::anyhow!("catalog {}: {e}", p.display()))?
        }
        None => FurnitureCatalog::default(),
    };
    let req_path = opts
        .requirements
        .clone()
        .or_else(|| file.requirements.map(|p| base.join(p)));
    let requirements = match req_path {
        Some(p) => {
            let text = fs::read_to_string(&p)
                .with_context(|| format!("reading requirements {}", p.display()))?;
            RoomRequirements::from_json(&text)
                .map_err(|e| anyhow::anyhow!("requirements {}: {e}", p.display()))?
        }
        None => RoomRequirements::default(),
    };
    let mut style = SvgStyle::default();
    if let Some(s) = file.scale {
        style.scale = s;
    }
    Ok(Resolved {
        settings: Settings {
            catalog,
            requirements,
            refiner,
            checks,
            style,
        },
        format: opts.format.or(file.format).unwrap_or(Format::Text),
        jobs: opts.jobs.or(file.jobs),
        transport: file.transport,
    })
}

/// Result of one command on one input: what to print and the exit code.
struct Outcome {
    stdout: String,
    code: i32,
}

fn stage_failure(ctx: &Resolved, source: &Path, err: &StageError) -> Outcome {
    let stdout = match ctx.format {
        Format::Text => {
            let mut s = format!("{}: error [{}] ", source.display(), err.stage);
            if let Some(p) = &err.path {
                s.push_str(p);
                s.push_str(": ");
            }
            s.push_str(&err.message);
            s.push('\n');
            s
        }
        Format::Structured => {
            let v = serde_json::json!({
                "file": source.display().to_string(),
                "status": "error",
                "stage": err.stage.as_str(),
                "path": err.path,
                "message": err.message,
            });
            format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
        }
    };
    Outcome { stdout, code: 1 }
}

fn read_input(path: &Path) -> Result<String, StageError> {
    fs::read_to_string(path)
        .map_err(|e| StageError::new(Stage::Parse, format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path, ctx: &Resolved) -> Result<Prepared, StageError> {
    let text = read_input(path)?;
    let prepared = prepare(&text, &ctx.settings.catalog)?;
    for w in &prepared.dangling_walls {
        log::warn!("{}: {w} does not bound any room", path.display());
    }
    Ok(prepared)
}

fn refine(prepared: &Prepared, ctx: &Resolved) -> Result<Refinement, StageError> {
    refine_plan(&prepared.plan, &ctx.settings.refiner)
        .map_err(|e| StageError::new(Stage::Refine, e))
}

fn plan_inputs(input: &Path) -> Result<Vec<PathBuf>> {
    if input.is_dir() {
        let mut files: Vec<PathBuf> = fs::read_dir(input)
            .with_context(|| format!("listing {}", input.display()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        Ok(files)
    } else {
        Ok(vec![input.to_path_buf()])
    }
}

fn for_each_input(
    ctx: &Resolved,
    input: &Path,
    f: impl Fn(&Path) -> Outcome + Sync,
) -> Result<Outcome> {
    let files = plan_inputs(input)?;
    let run = || files.par_iter().map(|p| f(p)).collect::<Vec<_>>();
    let outcomes = match ctx.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()?
            .install(run),
        None => run(),
    };
    let structured_batch = ctx.format == Format::Structured && input.is_dir();
    let mut stdout = String::new();
    if structured_batch {
        stdout.push_str("[\n");
    }
    let mut code = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if structured_batch && i > 0 {
            stdout.push_str(",\n");
        }
        stdout.push_str(if structured_batch {
            o.stdout.trim_end()
        } else {
            &o.stdout
        });
        code = code.max(o.code);
    }
    if structured_batch {
        stdout.push_str("\n]\n");
    }
    Ok(Outcome { stdout, code })
}

fn validate_one(path: &Path, ctx: &Resolved) -> Outcome {
    let prepared = match load(path, ctx) {
        Ok(p) => p,
        Err(e) => return stage_failure(ctx, path, &e),
    };
    let plan = &prepared.plan;
    let doors = plan
        .openings
        .iter()
        .filter(|o| o.kind() == floorplan_core::model::OpeningKind::Door)
        .count();
    let warnings: Vec<String> = prepared
        .dangling_walls
        .iter()
        .map(|w| format!("{w} does not bound any room"))
        .chain(
            prepared
                .orphans
                .iter()
                .map(|o| format!("{o} is not on any wall")),
        )
        .collect();
    let code = if warnings.is_empty() { 0 } else { 2 };
    let stdout = match ctx.format {
        Format::Text => {
            let mut s = format!(
                "{}: {} ({} walls, {} rooms, {} doors, {} windows, {} furniture items)\n",
                path.display(),
                if code == 0 { "ok" } else { "warnings" },
                plan.walls.len(),
                plan.rooms.len(),
                doors,
                plan.openings.len() - doors,
                plan.furniture.len()
            );
            for w in &warnings {
                s.push_str(&format!("  warning: {w}\n"));
            }
            s
        }
        Format::Structured => {
            let rooms: Vec<_> = plan
                .rooms
                .iter()
                .map(|r| serde_json::json!({"name": r.name, "area": r.boundary.area()}))
                .collect();
            let v = serde_json::json!({
                "file": path.display().to_string(),
                "status": if code == 0 { "ok" } else { "warnings" },
                "walls": plan.walls.len(),
                "rooms": rooms,
                "doors": doors,
                "windows": plan.openings.len() - doors,
                "furniture": plan.furniture.len(),
                "warnings": warnings,
            });
            format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
        }
    };
    Outcome { stdout, code }
}

fn check_one(path: &Path, ctx: &Resolved, do_refine: bool) -> Outcome {
    let prepared = match load(path, ctx) {
        Ok(p) => p,
        Err(e) => return stage_failure(ctx, path, &e),
    };
    let mut failed = 0;
    let plan = if do_refine {
        match refine(&prepared, ctx) {
            Ok(r) => {
                failed = r.failed.len();
                r.plan
            }
            Err(e) => return stage_failure(ctx, path, &e),
        }
    } else {
        prepared.plan
    };
    let report = run_all_checks(&plan, &ctx.settings.requirements, &ctx.settings.checks);
    let mut code = report.exit_code();
    if code == 0 && failed > 0 {
        code = 2;
    }
    let stdout = match ctx.format {
        Format::Text => format!("{}:\n{}", path.display(), report.to_text()),
        Format::Structured => {
            let mut s = report.to_json();
            if !s.ends_with('\n') {
                s.push('\n');
            }
            s
        }
    };
    Outcome { stdout, code }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn refine_summary(path: &Path, r: &Refinement) -> String {
    let placed = r
        .plan
        .furniture
        .iter()
        .filter(|f| f.refined_center.is_some())
        .count();
    let mut s = format!(
        "{}: placed {placed}/{} items\n",
        path.display(),
        r.plan.furniture.len()
    );
    for id in &r.failed {
        if let Some(item) = r.plan.furniture.iter().find(|f| f.id == *id) {
            s.push_str(&format!(
                "  failed: {id} {} in {}\n",
                item.name, item.room_name
            ));
        }
    }
    s
}

fn cmd_refine(
    ctx: &Resolved,
    input: &Path,
    output: Option<&Path>,
    trace: Option<&Path>,
    verify: bool,
) -> Result<Outcome> {
    if input.is_dir() {
        let Some(out_dir) = output else {
            bail!("a directory input needs --output DIR");
        };
        return for_each_input(ctx, input, |p| {
            let stem = p
                .file_stem()
                .unwrap_or_default()
                .to_string_lossy()
                .to_string();
            let out = out_dir.join(format!("{stem}.json"));
            let tr = trace.map(|d| d.join(format!("{stem}.trace.json")));
            refine_one(ctx, p, Some(&out), tr.as_deref(), verify).unwrap_or_else(|e| Outcome {
                stdout: format!("{}: error {e:#}\n", p.display()),
                code: 1,
            })
        });
    }
    refine_one(ctx, input, output, trace, verify)
}

fn refine_one(
    ctx: &Resolved,
    path: &Path,
    output: Option<&Path>,
    trace: Option<&Path>,
    verify: bool,
) -> Result<Outcome> {
    let prepared = match load(path, ctx) {
        Ok(p) => p,
        Err(e) => return Ok(stage_failure(ctx, path, &e)),
    };
    let r = match refine(&prepared, ctx) {
        Ok(r) => r,
        Err(e) => return Ok(stage_failure(ctx, path, &e)),
    };
    let mut code = if r.failed.is_empty() { 0 } else { 2 };
    let mut notes = refine_summary(path, &r);
    if verify {
        let rep = verify_refinement(&r.plan, &ctx.settings.refiner, 0.25);
        notes.push_str(&format!(
            "  verify: {} violations, {} unplaced items with oracle-feasible centers\n",
            rep.violations.len(),
            rep.missed.len()
        ));
        for (id, v) in &rep.violations {
            notes.push_str(&format!(
                "  violation: {id} a={} b={} c={}\n",
                v.a, v.b, v.c
            ));
        }
        for (id, n) in &rep.missed {
            notes.push_str(&format!("  missed: {id} ({n} feasible centers)\n"));
        }
        if !rep.is_clean() {
            code = 3;
        }
    }
    if let Some(t) = trace {
        write_file(
            t,
            &format!("{}\n", serde_json::to_string_pretty(&r.traces)?),
        )?;
    }
    let emitted = emit_plan(&r.plan);
    let stdout = match output {
        Some(out) => {
            write_file(out, &emitted)?;
            notes
        }
        None => {
            eprint!("{notes}");
            emitted
        }
    };
    Ok(Outcome { stdout, code })
}

fn cmd_render(
    ctx: &Resolved,
    input: &Path,
    output: Option<&Path>,
    scale: Option<f64>,
    trace: bool,
) -> Result<Outcome> {
    let prepared = match load(input, ctx) {
        Ok(p) => p,
        Err(e) => return Ok(stage_failure(ctx, input, &e)),
    };
    let mut style = ctx.settings.style.clone();
    if let Some(s) = scale {
        if !(s.is_finite() && s > 0.0) {
            bail!("scale must be positive");
        }
        style.scale = s;
    }
    let svg = if trace {
        match refine(&prepared, ctx) {
            Ok(r) => render_svg(&r.plan, &style, &r.traces),
            Err(e) => return Ok(stage_failure(ctx, input, &e)),
        }
    } else {
        render_svg(&prepared.plan, &style, &[])
    };
    Ok(match output {
        Some(out) => {
            write_file(out, &svg)?;
            Outcome {
                stdout: String::new(),
                code: 0,
            }
        }
        None => Outcome {
            stdout: svg,
            code: 0,
        },
    })
}

fn cmd_export(ctx: &Resolved, input: &Path, out_dir: &Path, do_refine: bool) -> Result<Outcome> {
    let prepared = match load(input, ctx) {
        Ok(p) => p,
        Err(e) => return Ok(stage_failure(ctx, input, &e)),
    };
    let plan = if do_refine {
        match refine(&prepared, ctx) {
            Ok(r) => r.plan,
            Err(e) => return Ok(stage_failure(ctx, input, &e)),
        }
    } else {
        prepared.plan
    };
    let scripts = match export_bim_script(&plan) {
        Ok(s) => s,
        Err(e) => {
            return Ok(stage_failure(
                ctx,
                input,
                &StageError::new(Stage::Export, e),
            ))
        }
    };
    write_file(&out_dir.join("walls.py"), &scripts.walls)?;
    write_file(&out_dir.join("openings.py"), &scripts.openings)?;
    write_file(&out_dir.join("furniture.py"), &scripts.furniture)?;
    Ok(Outcome {
        stdout: format!(
            "wrote walls.py, openings.py, furniture.py to {}\n",
            out_dir.display()
        ),
        code: 0,
    })
}

fn load_brief(path: &Path, directives: bool) -> Result<Brief, StageError> {
    let text = fs::read_to_string(path).map_err(|e| {
        StageError::new(
            Stage::Prompt,
            format!("cannot read {}: {e}", path.display()),
        )
    })?;
    let mut brief = Brief::from_json(&text).map_err(|e| StageError::new(Stage::Prompt, e))?;
    brief.directives |= directives;
    Ok(brief)
}

fn cmd_prompt(
    ctx: &Resolved,
    brief: Option<&Path>,
    output: Option<&Path>,
    class: Option<ScriptClass>,
    directives: bool,
) -> Result<Outcome> {
    let text = match (class, brief) {
        (Some(c), _) => build_script_prompt(c.into()),
        (None, Some(b)) => {
            let built = load_brief(b, directives).and_then(|brief| {
                build_layout_prompt(&brief).map_err(|e| StageError::new(Stage::Prompt, e))
            });
            match built {
                Ok(t) => t,
                Err(e) => return Ok(stage_failure(ctx, b, &e)),
            }
        }
        (None, None) => bail!("give a brief file or --script-class"),
    };
    Ok(match output {
        Some(out) => {
            write_file(out, &text)?;
            Outcome {
                stdout: String::new(),
                code: 0,
            }
        }
        None => Outcome {
            stdout: text,
            code: 0,
        },
    })
}

fn cmd_pipeline(
    ctx: &Resolved,
    brief_path: &Path,
    out_dir: &Path,
    transport: Option<TransportKind>,
    response: Option<&Path>,
    directives: bool,
) -> Result<Outcome> {
    let mut log = String::new();
    let fail = |log: String, e: StageError| {
        let mut o = stage_failure(ctx, brief_path, &e);
        o.stdout = log + &o.stdout;
        Ok(o)
    };

    let prompt = match load_brief(brief_path, directives)
        .and_then(|b| build_layout_prompt(&b).map_err(|e| StageError::new(Stage::Prompt, e)))
    {
        Ok(p) => p,
        Err(e) => return fail(log, e),
    };
    write_file(&out_dir.join("prompt.txt"), &prompt)?;
    log.push_str("[prompt] wrote prompt.txt\n");

    let kind = transport
        .or(ctx.transport)
        .unwrap_or(if response.is_some() {
            TransportKind::File
        } else {
            TransportKind::Endpoint
        });
    let transport = match kind {
        TransportKind::File => match response {
            Some(p) => Transport::File(p.to_path_buf()),
            None => {
                return fail(
                    log,
                    StageError::new(Stage::Fetch, "the file transport needs --response FILE"),
                )
            }
        },
        TransportKind::Endpoint => match EndpointConfig::from_env() {
            Ok(cfg) => Transport::Endpoint(cfg),
            Err(e) => return fail(log, StageError::new(Stage::Fetch, e)),
        },
    };
    let raw = match fetch_layout(&prompt, &transport) {
        Ok(r) => r,
        Err(e) => return fail(log, StageError::new(Stage::Fetch, e)),
    };
    write_file(&out_dir.join("response.txt"), &raw)?;
    log.push_str("[fetch] wrote response.txt\n");

    let json = match sanitize_llm_response(&raw) {
        Ok(j) => j,
        Err(e) => return fail(log, StageError::new(Stage::Sanitize, e)),
    };
    write_file(&out_dir.join("plan.json"), &json)?;
    log.push_str("[sanitize] wrote plan.json\n");

    let prepared = match prepare(&json, &ctx.settings.catalog) {
        Ok(p) => p,
        Err(e) => return fail(log, e),
    };
    log.push_str(&format!(
        "[topology] {} rooms, {} dangling walls, {} orphan openings\n",
        prepared.plan.rooms.len(),
        prepared.dangling_walls.len(),
        prepared.orphans.len()
    ));

    let r = match refine(&prepared, ctx) {
        Ok(r) => r,
        Err(e) => return fail(log, e),
    };
    write_file(&out_dir.join("refined.json"), &emit_plan(&r.plan))?;
    write_file(
        &out_dir.join("trace.json"),
        &format!("{}\n", serde_json::to_string_pretty(&r.traces)?),
    )?;
    let placed = r.plan.furniture.len() - r.failed.len();
    log.push_str(&format!(
        "[refine] placed {placed}/{} items\n",
        r.plan.furniture.len()
    ));

    let report = run_all_checks(&r.plan, &ctx.settings.requirements, &ctx.settings.checks);
    let (name, body) = match ctx.format {
        Format::Text => ("report.txt", report.to_text()),
        Format::Structured => ("report.json", report.to_json()),
    };
    write_file(&out_dir.join(name), &body)?;
    log.push_str(&format!(
        "[check] {} errors, {} warnings, {} info\n",
        report.summary.errors, report.summary.warnings, report.summary.info
    ));

    let svg = render_svg(&r.plan, &ctx.settings.style, &r.traces);
    write_file(&out_dir.join("layout.svg"), &svg)?;
    log.push_str("[render] wrote layout.svg\n");

    let scripts = match export_bim_script(&r.plan) {
        Ok(s) => s,
        Err(e) => return fail(log, StageError::new(Stage::Export, e)),
    };
    write_file(&out_dir.join("walls.py"), &scripts.walls)?;
    write_file(&out_dir.join("openings.py"), &scripts.openings)?;
    write_file(&out_dir.join("furniture.py"), &scripts.furniture)?;
    log.push_str("[export] wrote walls.py, openings.py, furniture.py\n");

    let mut code = report.exit_code();
    if code == 0 && !r.failed.is_empty() {
        code = 2;
    }
    Ok(Outcome { stdout: log, code })
}

fn run(cli: Cli) -> Result<Outcome> {
    let ctx = resolve(&cli.opts)?;
    match &cli.command {
        Command::Validate { input } => for_each_input(&ctx, input, |p| validate_one(p, &ctx)),
        Command::Check { input, refine } => {
            for_each_input(&ctx, input, |p| check_one(p, &ctx, *refine))
        }
        Command::Refine {
            input,
            output,
            trace,
            verify,
        } => cmd_refine(&ctx, input, output.as_deref(), trace.as_deref(), *verify),
        Command::Render {
            input,
            output,
            scale,
            trace,
        } => cmd_render(&ctx, input, output.as_deref(), *scale, *trace),
        Command::Export {
            input,
            out_dir,
            refine,
        } => cmd_export(&ctx, input, out_dir, *refine),
        Command::Prompt {
            brief,
            output,
            script_class,
            directives,
        } => cmd_prompt(
            &ctx,
            brief.as_deref(),
            output.as_deref(),
            *script_class,
            *directives,
        ),
        Command::Pipeline {
            brief,
            out_dir,
            transport,
            response,
            directives,
        } => cmd_pipeline(
            &ctx,
            brief,
            out_dir,
            *transport,
            response.as_deref(),
            *directives,
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.opts.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(o) => {
            print!("{}", o.stdout);
            ExitCode::from(o.code as u8)
        }
        Err(e) => {
            println!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
