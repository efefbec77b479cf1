//! Batch front end: parse a scene file, run the lifting pipeline, emit
//! meshes, CSV tables, and JSON reports.

mod scene;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use lift_core::distfield::{distance_transform, lipschitz_constant, regularized_distance};
use lift_core::grid::{Grid, ScalarField};
use lift_core::io as lio;
use lift_core::lift::{extract_lifted_boundary, lift_open_set};
use lift_core::mesh::BoundaryMesh;
use lift_core::ops::curve::{toeplitz_curve, CurveSampling, SymbolSpec};
use lift_core::ops::index::fredholm_index;
use lift_core::region::RegionSpec;
use lift_core::topo;
use scene::{Analysis, SceneConfig};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

const VERSION: &str = concat!("lift ", env!("CARGO_PKG_VERSION"));

#[derive(Parser)]
#[command(name = "lift", version, about = "Distance-function lifting pipeline")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every analysis in a scene file and write all artifacts.
    Run {
        #[arg(long)]
        scene: PathBuf,
        /// Override the scene's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export a single artifact without running analyses.
    Export {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long, value_enum)]
        what: ExportWhat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse and validate a scene file, writing nothing.
    Validate {
        #[arg(long)]
        scene: PathBuf,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum ExportWhat {
    Mesh,
    Field,
}

#[derive(Debug)]
enum CliError {
    /// Schema or precondition problem: exit 2.
    Validation(String),
    /// Unexpected runtime failure: exit 1.
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Runtime(e)
    }
}

fn main() {
    let cli = Cli::parse();
    let threads = std::env::var("LIFT_THREADS").ok();
    if let Some(t) = &threads {
        if t.parse::<usize>().is_err() {
            eprintln!("error: LIFT_THREADS must be a nonnegative integer, got {t:?}");
            std::process::exit(2);
        }
    }
    let outcome = match cli.cmd {
        Cmd::Run { scene, out } => run_scene(&scene, out.as_deref()),
        Cmd::Export { scene, what, out } => {
            export_only(&scene, what, out.as_deref()).map(|()| false)
        }
        Cmd::Validate { scene } => load_scene(&scene).map(|_| {
            println!("ok");
            false
        }),
    };
    match outcome {
        Ok(false) => {}
        Ok(true) => {
            eprintln!("warning: numerical result flagged unreliable");
            std::process::exit(3);
        }
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
        Err(CliError::Runtime(e)) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}

fn load_scene(path: &Path) -> Result<SceneConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read scene {}: {e}", path.display())))?;
    let cfg: SceneConfig =
        serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("scene: {e}")))?;
    cfg.validate().map_err(CliError::Validation)?;
    Ok(cfg)
}

struct Pipeline {
    region: RegionSpec,
    dfield: ScalarField,
    heights: ScalarField,
    mesh: BoundaryMesh,
    indicator: lift_core::lift::LiftedIndicator,
}

fn build_pipeline(cfg: &SceneConfig) -> Result<Pipeline, CliError> {
    let region = cfg
        .build_region()
        .map_err(|e| CliError::Validation(format!("region.primitives: {e}")))?;
    let grid = Grid::for_region(&region, cfg.grid.resolution as usize, cfg.grid.padding_factor)
        .map_err(|e| CliError::Validation(format!("grid: {e}")))?;
    let dfield = distance_transform(&grid, &region)
        .map_err(|e| CliError::Validation(format!("grid: {e}")))?;
    let heights = match cfg.lift.regularize_epsilon {
        Some(eps) => regularized_distance(&dfield, eps)
            .map_err(|e| CliError::Validation(format!("lift.regularize_epsilon: {e}")))?,
        None => dfield.clone(),
    };
    let indicator = lift_open_set(&region, &dfield, cfg.lift.t_resolution as usize)
        .map_err(|e| CliError::Validation(format!("lift.t_resolution: {e}")))?;
    let mesh = extract_lifted_boundary(&region, &heights)
        .map_err(|e| CliError::Runtime(anyhow::anyhow!("mesh extraction: {e}")))?;
    Ok(Pipeline {
        region,
        dfield,
        heights,
        mesh,
        indicator,
    })
}

#[derive(Serialize)]
struct Report {
    version: String,
    region_dimension: usize,
    grid_spacing: f64,
    grid_dims: [usize; 2],
    lift_t_max: f64,
    lift_occupied_nodes: usize,
    lipschitz_constant: f64,
    analyses: Vec<serde_json::Value>,
}

#[derive(Serialize)]
struct ManifestEntry {
    path: String,
    sha256: String,
}

fn run_scene(scene_path: &Path, out_override: Option<&Path>) -> Result<bool, CliError> {
    let cfg = load_scene(scene_path)?;
    let out_dir = out_override
        .map(|p| p.to_path_buf())
        .unwrap_or_else(|| PathBuf::from(&cfg.output.directory));
    std::fs::create_dir_all(&out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))
        .map_err(CliError::from)?;

    let mut written: Vec<PathBuf> = Vec::new();
    let result = run_scene_inner(&cfg, &out_dir, &mut written);
    if result.is_err() {
        for p in &written {
            std::fs::remove_file(p).ok();
        }
    }
    result
}

fn run_scene_inner(
    cfg: &SceneConfig,
    out_dir: &Path,
    written: &mut Vec<PathBuf>,
) -> Result<bool, CliError> {
    let mut pipe = build_pipeline(cfg)?;
    let mut flagged = false;
    let mut analyses: Vec<serde_json::Value> = Vec::new();
    let mut fit_csv: Option<String> = None;

    for (i, analysis) in cfg.analyses.iter().enumerate() {
        match analysis {
            Analysis::Components => {
                analyses.push(run_components(&pipe.region, &pipe.dfield, &mut pipe.mesh, &pipe.indicator, i)?);
            }
            Analysis::Dimension { scales } => {
                let (value, csv) = run_dimension(&pipe.region, &pipe.mesh, scales, i)?;
                analyses.push(value);
                fit_csv = Some(csv);
            }
            Analysis::Euler => {
                let chi = topo::euler_characteristic(&pipe.mesh)
                    .map_err(|e| CliError::Runtime(anyhow::anyhow!("analyses[{i}]: {e}")))?;
                analyses.push(serde_json::json!({"kind": "euler", "chi": chi}));
            }
            Analysis::Operators { winding, n } => {
                let (value, unreliable) = run_operators(&mut pipe.mesh, *winding, *n as usize, i)?;
                flagged = flagged || unreliable;
                analyses.push(value);
            }
        }
    }

    let report = Report {
        version: VERSION.to_string(),
        region_dimension: pipe.region.dimension(),
        grid_spacing: pipe.dfield.grid.spacing(),
        grid_dims: pipe.dfield.grid.dims(),
        lift_t_max: pipe.indicator.t_max,
        lift_occupied_nodes: pipe.indicator.occupied_count(),
        lipschitz_constant: lipschitz_constant(&pipe.dfield),
        analyses,
    };

    let fmt = |name: &str| cfg.output.formats.iter().any(|f| f == name);
    let write = |name: &str, bytes: Vec<u8>, written: &mut Vec<PathBuf>| -> Result<(), CliError> {
        let p = out_dir.join(name);
        std::fs::write(&p, bytes)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(CliError::from)?;
        written.push(p);
        Ok(())
    };

    if fmt("obj") {
        let p = out_dir.join("mesh.obj");
        lio::export_obj(&pipe.mesh, &p).map_err(|e| CliError::Runtime(e.into()))?;
        written.push(p);
    }
    if fmt("ply") {
        let p = out_dir.join("mesh.ply");
        lio::export_ply(&pipe.mesh, &p).map_err(|e| CliError::Runtime(e.into()))?;
        written.push(p);
    }
    if fmt("csv") {
        write("field.csv", lio::csv_scalar_field(&pipe.heights).into_bytes(), written)?;
        if let Some(csv) = fit_csv {
            write("dimension_fit.csv", csv.into_bytes(), written)?;
        }
    }
    if fmt("rle") {
        let p = out_dir.join("occupancy.rle");
        lio::export_occupancy_rle(&pipe.indicator, &p).map_err(|e| CliError::Runtime(e.into()))?;
        written.push(p);
    }

    let report_json = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Runtime(e.into()))?;
    write("report.json", report_json.into_bytes(), written)?;

    let mut entries: Vec<ManifestEntry> = Vec::new();
    let mut sorted = written.clone();
    sorted.sort();
    for p in &sorted {
        let bytes = std::fs::read(p)
            .with_context(|| format!("hashing {}", p.display()))
            .map_err(CliError::from)?;
        let digest = Sha256::digest(&bytes);
        entries.push(ManifestEntry {
            path: p.file_name().unwrap().to_string_lossy().into_owned(),
            sha256: format!("{digest:x}"),
        });
    }
    let manifest = serde_json::json!({"version": VERSION, "artifacts": entries});
    let p = out_dir.join("manifest.json");
    std::fs::write(&p, serde_json::to_string_pretty(&manifest).unwrap())
        .with_context(|| format!("writing {}", p.display()))
        .map_err(CliError::from)?;
    written.push(p);
    Ok(flagged)
}

fn run_components(
    region: &RegionSpec,
    dfield: &ScalarField,
    mesh: &mut BoundaryMesh,
    indicator: &lift_core::lift::LiftedIndicator,
    i: usize,
) -> Result<serde_json::Value, CliError> {
    let grid = &dfield.grid;
    let occ_base: Vec<bool> = (0..grid.node_count())
        .map(|idx| region.contains(&grid.position(idx)))
        .collect();
    let labels_base = topo::label_components(&occ_base, &[grid.dims()[0], grid.dims()[1]]);
    let labels_lift = topo::label_components(&indicator.occupancy, &indicator.lattice_dims());
    let bijection =
        topo::lifted_component_bijection(&labels_base, &labels_lift, indicator);
    let mesh_components = topo::mesh_component_count(mesh)
        .map_err(|e| CliError::Runtime(anyhow::anyhow!("analyses[{i}]: {e}")))?;
    Ok(serde_json::json!({
        "kind": "components",
        "base_components": labels_base.component_count,
        "lifted_components": labels_lift.component_count,
        "bijection_ok": bijection.is_ok(),
        "mesh_components": mesh_components,
    }))
}

fn run_dimension(
    region: &RegionSpec,
    mesh: &BoundaryMesh,
    scales: &[f64],
    i: usize,
) -> Result<(serde_json::Value, String), CliError> {
    let min_scale = scales.iter().cloned().fold(f64::INFINITY, f64::min);
    let samples = region.boundary_samples(min_scale / 4.0);
    let fit_e = topo::box_counting_dimension(&samples.points, region.dimension(), scales)
        .map_err(|e| CliError::Validation(format!("analyses[{i}].scales: {e}")))?;
    let fit_lifted = topo::box_counting_dimension_mesh(mesh, scales)
        .map_err(|e| CliError::Validation(format!("analyses[{i}].scales: {e}")))?;
    let csv = lio::csv_dimension_fit(&fit_e);
    Ok((
        serde_json::json!({
            "kind": "dimension",
            "scales": fit_e.scales,
            "counts_e": fit_e.counts,
            "slope_e": fit_e.slope,
            "residual_e": fit_e.residual,
            "counts_lifted": fit_lifted.counts,
            "slope_lifted": fit_lifted.slope,
            "residual_lifted": fit_lifted.residual,
        }),
        csv,
    ))
}

fn run_operators(
    mesh: &mut BoundaryMesh,
    winding: i64,
    n: usize,
    i: usize,
) -> Result<(serde_json::Value, bool), CliError> {
    topo::mesh_component_count(mesh)
        .map_err(|e| CliError::Runtime(anyhow::anyhow!("analyses[{i}]: {e}")))?;
    let loop_xy = mesh
        .closed_loop(0)
        .map_err(|e| CliError::Runtime(anyhow::anyhow!("analyses[{i}]: {e}")))?;
    let curve = CurveSampling::from_loop(&loop_xy, n)
        .map_err(|e| CliError::Validation(format!("analyses[{i}].n: {e}")))?;
    let (t, p) = toeplitz_curve(&curve, &SymbolSpec::Winding(winding as i32))
        .map_err(|e| CliError::Runtime(anyhow::anyhow!("analyses[{i}]: {e}")))?;
    let defect = p.mul(&p).sub(&p).operator_norm();
    // General lifted curves carry corner-limited quadrature error around
    // 1e-2, so the null threshold sits above that; genuine gaps are 30x+.
    let report = fredholm_index(&t, &p, 3e-2)
        .map_err(|e| CliError::Runtime(anyhow::anyhow!("analyses[{i}]: {e}")))?;
    let unreliable = !report.reliable;
    Ok((
        serde_json::json!({
            "kind": "operators",
            "symbol": "winding",
            "winding": winding,
            "n": n,
            "projection_defect": defect,
            "index": report.index,
            "gap_ratio": report.gap_ratio,
            "reliable": report.reliable,
        }),
        unreliable,
    ))
}

fn export_only(
    scene_path: &Path,
    what: ExportWhat,
    out_override: Option<&Path>,
) -> Result<(), CliError> {
    let cfg = load_scene(scene_path)?;
    let out_dir = out_override
        .map(|p| p.to_path_buf())
        .unwrap_or_else(|| PathBuf::from(&cfg.output.directory));
    std::fs::create_dir_all(&out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))
        .map_err(CliError::from)?;
    let pipe = build_pipeline(&cfg)?;
    match what {
        ExportWhat::Mesh => {
            lio::export_obj(&pipe.mesh, &out_dir.join("mesh.obj"))
                .map_err(|e| CliError::Runtime(e.into()))?;
            lio::export_ply(&pipe.mesh, &out_dir.join("mesh.ply"))
                .map_err(|e| CliError::Runtime(e.into()))?;
        }
        ExportWhat::Field => {
            std::fs::write(
                out_dir.join("field.csv"),
                lio::csv_scalar_field(&pipe.heights),
            )
            .context("writing field.csv")
            .map_err(CliError::from)?;
        }
    }
    Ok(())
}
