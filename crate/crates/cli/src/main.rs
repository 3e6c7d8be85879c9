//! Command-line surface for the tile self-assembly engine: fractal
//! shape rendering, exploration and guided-assembly runs, verification
//! subcommands, and construction exporters.
//!
//! Exit codes: 0 success/pass, 1 verification fail, 2 input error,
//! 3 exploration budget exceeded.

mod formats;
mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use hamsim_core::{
    build_carpet_2ham, build_triangle_3ham, build_triangle_6ham, explore, guided_assemble,
    is_near_triangle, near_perfect_check, pointlanding_holds, within_fractal, AssemblySystem,
    ConstructionBundle, ExplorationConfig, FractalKind, Shape,
};

use formats::{
    check_version, load_json, save_json, AssemblyFile, ReportFile, ScriptFile, TileSetFile,
};
use render::Scene;

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "hamsim",
    version,
    about = "Multi-handed tile self-assembly toolkit"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Triangle,
    Carpet,
}

impl Kind {
    fn fractal(self, scale: u32) -> FractalKind {
        match self {
            Kind::Triangle => FractalKind::Triangle { scale },
            Kind::Carpet => FractalKind::Carpet { scale },
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Svg,
    Ascii,
    Points,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    Triangle6,
    Triangle3,
    Carpet2,
}

#[derive(Subcommand)]
enum Cmd {
    /// Render a fractal stage point set.
    Shapes {
        /// Which fractal to generate.
        kind: Kind,
        #[arg(long)]
        stage: u32,
        #[arg(long, default_value_t = 1)]
        scale: u32,
        #[arg(long, value_enum, default_value_t = Format::Points)]
        format: Format,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate the producible assemblies of a tile system.
    Explore {
        #[arg(long)]
        tileset: PathBuf,
        #[arg(long)]
        max_size: usize,
        #[arg(long)]
        max_rounds: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Replay a guided script and write the final assembly.
    Guided {
        #[arg(long)]
        tileset: PathBuf,
        #[arg(long)]
        script: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also render the product as SVG to this path.
        #[arg(long)]
        render: Option<PathBuf>,
    },
    /// Verification drivers; exit 0 on pass, 1 on fail.
    Verify {
        #[command(subcommand)]
        check: VerifyCmd,
    },
    /// Export a built-in construction as tile-set and script files.
    Build {
        construction: Construction,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Bounded near-perfect-assembly check over a saturated exploration.
    NearPerfect {
        #[arg(long)]
        tileset: PathBuf,
        #[arg(long)]
        max_size: usize,
        #[arg(long)]
        kind: Kind,
        #[arg(long, default_value_t = 1)]
        scale: u32,
        #[arg(long, default_value_t = 0)]
        stage_min: u32,
        #[arg(long)]
        stage_max: u32,
        /// Allowed per-stage point deficit.
        #[arg(long)]
        constant: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Every tile of the assembly must lie inside the fractal.
    WithinFractal {
        #[arg(long)]
        assembly: PathBuf,
        #[arg(long)]
        kind: Kind,
        #[arg(long, default_value_t = 1)]
        scale: u32,
        #[arg(long, default_value_t = 0)]
        anchor_x: i64,
        #[arg(long, default_value_t = 0)]
        anchor_y: i64,
    },
    /// The assembly must be a stage shape minus its six corner points.
    NearTriangle {
        #[arg(long)]
        assembly: PathBuf,
        #[arg(long)]
        stage: u32,
        #[arg(long, default_value_t = 0)]
        anchor_x: i64,
        #[arg(long, default_value_t = 0)]
        anchor_y: i64,
    },
    /// Brute-force sweep of the choke-point landing condition.
    Lemma {
        #[arg(long, default_value_t = 1)]
        c: u32,
        #[arg(long)]
        imax: u32,
        #[arg(long)]
        jmax: u32,
        #[arg(long)]
        kmax: u32,
        /// Lower bound on the landing stage k (default: i + 1).
        #[arg(long)]
        kmin: Option<u32>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn run(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::Shapes {
            kind,
            stage,
            scale,
            format,
            out,
        } => cmd_shapes(kind, stage, scale, format, out.as_deref()),
        Cmd::Explore {
            tileset,
            max_size,
            max_rounds,
            out,
        } => cmd_explore(&tileset, max_size, max_rounds, &out),
        Cmd::Guided {
            tileset,
            script,
            out,
            render,
        } => cmd_guided(&tileset, &script, &out, render.as_deref()),
        Cmd::Verify { check } => cmd_verify(check),
        Cmd::Build {
            construction,
            out_dir,
        } => cmd_build(construction, &out_dir),
    }
}

fn load_system(path: &Path) -> Result<AssemblySystem> {
    let file: TileSetFile = load_json(path)?;
    check_version(file.format_version, "tile set")?;
    file.into_system()
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("write {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_shapes(
    kind: Kind,
    stage: u32,
    scale: u32,
    format: Format,
    out: Option<&Path>,
) -> Result<u8> {
    if scale == 0 {
        bail!("scale must be at least 1");
    }
    let shape: Shape = kind.fractal(scale).stage(stage);
    let scene = Scene::from_shape(&shape);
    let text = match format {
        Format::Points => scene.points(),
        Format::Ascii => scene.ascii(),
        Format::Svg => scene.svg(),
        Format::Json => serde_json::to_string_pretty(&shape)? + "\n",
    };
    emit(&text, out)?;
    Ok(0)
}

fn cmd_explore(
    tileset: &Path,
    max_size: usize,
    max_rounds: Option<usize>,
    out: &Path,
) -> Result<u8> {
    let system = load_system(tileset)?;
    let mut config = ExplorationConfig::new(max_size);
    config.max_rounds = max_rounds;
    let report = explore(&system, &config).context("exploration failed")?;
    save_json(out, &ReportFile::from_report(&report))?;
    if report.saturated {
        println!(
            "saturated after {} rounds: {} canonical assemblies",
            report.rounds,
            report.assemblies.len()
        );
        Ok(0)
    } else {
        eprintln!(
            "budget exceeded after {} rounds: partial report written ({} assemblies)",
            report.rounds,
            report.assemblies.len()
        );
        Ok(EXIT_BUDGET)
    }
}

fn cmd_guided(tileset: &Path, script: &Path, out: &Path, render: Option<&Path>) -> Result<u8> {
    let system = load_system(tileset)?;
    let file: ScriptFile = load_json(script)?;
    check_version(file.format_version, "script")?;
    match guided_assemble(&system, &file.into_script()) {
        Ok(product) => {
            save_json(out, &AssemblyFile::from_assembly(&product))?;
            if let Some(path) = render {
                let scene = Scene::from_assembly(&product, Some(&system.tileset));
                std::fs::write(path, scene.svg())
                    .with_context(|| format!("write {}", path.display()))?;
            }
            println!("assembled {} tiles", product.len());
            Ok(0)
        }
        Err(err) => {
            eprintln!("script rejected: {err}");
            Ok(EXIT_FAIL)
        }
    }
}

fn cmd_verify(check: VerifyCmd) -> Result<u8> {
    match check {
        VerifyCmd::NearPerfect {
            tileset,
            max_size,
            kind,
            scale,
            stage_min,
            stage_max,
            constant,
            out,
        } => {
            let system = load_system(&tileset)?;
            let report = explore(&system, &ExplorationConfig::new(max_size))?;
            if !report.saturated {
                eprintln!("exploration did not saturate; verdict would be unsound");
                return Ok(EXIT_BUDGET);
            }
            let np = near_perfect_check(
                &report,
                kind.fractal(scale),
                (stage_min, stage_max),
                constant,
            )?;
            if let Some(path) = out {
                save_json(&path, &np)?;
            }
            if np.passed() {
                println!(
                    "near-perfect up to stage {stage_max}, size {max_size}, deficit {constant}"
                );
                Ok(0)
            } else {
                eprintln!(
                    "near-perfect check failed: {} stages without witness, {} violations",
                    np.missing_stages.len(),
                    np.violations.len()
                );
                Ok(EXIT_FAIL)
            }
        }
        VerifyCmd::WithinFractal {
            assembly,
            kind,
            scale,
            anchor_x,
            anchor_y,
        } => {
            let file: AssemblyFile = load_json(&assembly)?;
            check_version(file.format_version, "assembly")?;
            let a = file.into_assembly();
            if within_fractal(&a, kind.fractal(scale), (anchor_x, anchor_y)) {
                println!("all {} tiles inside the fractal", a.len());
                Ok(0)
            } else {
                eprintln!("assembly places tiles outside the fractal");
                Ok(EXIT_FAIL)
            }
        }
        VerifyCmd::NearTriangle {
            assembly,
            stage,
            anchor_x,
            anchor_y,
        } => {
            let file: AssemblyFile = load_json(&assembly)?;
            check_version(file.format_version, "assembly")?;
            let a = file.into_assembly();
            if is_near_triangle(&a, stage, (anchor_x, anchor_y)) {
                println!("near-triangle of stage {stage}");
                Ok(0)
            } else {
                eprintln!("not a stage-{stage} near-triangle");
                Ok(EXIT_FAIL)
            }
        }
        VerifyCmd::Lemma {
            c,
            imax,
            jmax,
            kmax,
            kmin,
        } => {
            let mut checked = 0usize;
            let mut failures = Vec::new();
            for i in 1..=imax {
                for j in i + 1..=jmax {
                    for k in kmin.unwrap_or(i + 1).max(i + 1)..=kmax {
                        checked += 1;
                        if !pointlanding_holds(c, i, j, k)? {
                            failures.push((c, i, j, k));
                        }
                    }
                }
            }
            if failures.is_empty() {
                println!("landing condition holds on all {checked} instances");
                Ok(0)
            } else {
                eprintln!(
                    "landing condition fails on {} of {checked} instances, e.g. (c,i,j,k)={:?}",
                    failures.len(),
                    failures[0]
                );
                Ok(EXIT_FAIL)
            }
        }
    }
}

fn cmd_build(construction: Construction, out_dir: &Path) -> Result<u8> {
    let (name, target, bundle): (&str, usize, ConstructionBundle) = match construction {
        Construction::Triangle6 => ("triangle6", 30, build_triangle_6ham()),
        Construction::Triangle3 => ("triangle3", 990, build_triangle_3ham()),
        Construction::Carpet2 => ("carpet2", 1216, build_carpet_2ham()),
    };
    std::fs::create_dir_all(out_dir).with_context(|| format!("create {}", out_dir.display()))?;
    save_json(
        &out_dir.join("tileset.json"),
        &TileSetFile::from_system(name, &bundle.system),
    )?;
    for (stage, script) in &bundle.stage_scripts {
        save_json(
            &out_dir.join(format!("stage-{stage}.script.json")),
            &ScriptFile::from_script(script),
        )?;
    }
    #[derive(serde::Serialize)]
    struct BuildMetadata<'a> {
        format_version: u32,
        name: &'a str,
        temperature: u32,
        hands: usize,
        target_tile_count: usize,
        #[serde(flatten)]
        metadata: &'a hamsim_core::ConstructionMetadata,
    }
    save_json(
        &out_dir.join("metadata.json"),
        &BuildMetadata {
            format_version: formats::FORMAT_VERSION,
            name,
            temperature: bundle.system.tau,
            hands: bundle.system.hands,
            target_tile_count: target,
            metadata: &bundle.metadata,
        },
    )?;
    println!(
        "{name}: {} tile types (target {target}), {} stage scripts",
        bundle.metadata.tile_count,
        bundle.stage_scripts.len()
    );
    Ok(0)
}
