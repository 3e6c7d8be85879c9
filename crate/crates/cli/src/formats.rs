//! On-disk file formats: JSON with an explicit format-version field so
//! fixtures stay diffable and older files are rejected loudly.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use hamsim_core::{
    Assembly, AssemblySystem, ExplorationReport, GuidedScript, Point, ScriptStep, TileSet, TileType,
};

pub const FORMAT_VERSION: u32 = 1;

/// A tile system on disk: the tile set plus temperature and hand count.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TileSetFile {
    pub format_version: u32,
    pub name: String,
    pub temperature: u32,
    pub hands: usize,
    pub tiles: Vec<TileType>,
}

impl TileSetFile {
    pub fn from_system(name: &str, system: &AssemblySystem) -> Self {
        TileSetFile {
            format_version: FORMAT_VERSION,
            name: name.to_string(),
            temperature: system.tau,
            hands: system.hands,
            tiles: system.tileset.iter().cloned().collect(),
        }
    }

    /// Validates the core invariants (unique names, one strength per
    /// label) and produces the runnable system.
    pub fn into_system(self) -> Result<AssemblySystem> {
        let tileset = TileSet::new(self.tiles).context("invalid tile set")?;
        Ok(AssemblySystem::multi_handed(
            tileset,
            self.temperature,
            self.hands,
        ))
    }
}

/// A guided script on disk: ordered steps over tiles and earlier steps.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ScriptFile {
    pub format_version: u32,
    pub steps: Vec<ScriptStep>,
}

impl ScriptFile {
    pub fn from_script(script: &GuidedScript) -> Self {
        ScriptFile {
            format_version: FORMAT_VERSION,
            steps: script.steps.clone(),
        }
    }

    pub fn into_script(self) -> GuidedScript {
        GuidedScript { steps: self.steps }
    }
}

/// One placed tile of a serialized assembly.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PlacedTile {
    pub x: i64,
    pub y: i64,
    pub tile: String,
}

/// An assembly on disk.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct AssemblyFile {
    pub format_version: u32,
    pub tiles: Vec<PlacedTile>,
}

impl AssemblyFile {
    pub fn from_assembly(a: &Assembly) -> Self {
        AssemblyFile {
            format_version: FORMAT_VERSION,
            tiles: a
                .tiles
                .iter()
                .map(|(&(x, y), name)| PlacedTile {
                    x,
                    y,
                    tile: name.clone(),
                })
                .collect(),
        }
    }

    pub fn into_assembly(self) -> Assembly {
        Assembly::new(self.tiles.into_iter().map(|t| ((t.x, t.y), t.tile)))
    }
}

/// A serialized exploration outcome: spectrum plus a canonical dump.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportFile {
    pub format_version: u32,
    pub rounds: usize,
    pub saturated: bool,
    pub size_spectrum: Vec<(usize, usize)>,
    pub assemblies: Vec<ReportEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportEntry {
    pub hash: String,
    pub size: usize,
    pub tiles: Vec<PlacedTile>,
    /// Witness derivation: constituent canonical hashes with translations.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pieces: Vec<(String, Point)>,
}

impl ReportFile {
    pub fn from_report(report: &ExplorationReport) -> Self {
        ReportFile {
            format_version: FORMAT_VERSION,
            rounds: report.rounds,
            saturated: report.saturated,
            size_spectrum: report.size_spectrum(),
            assemblies: report
                .assemblies
                .iter()
                .map(|(h, a)| ReportEntry {
                    hash: hamsim_core::assembly::hash_hex(h),
                    size: a.len(),
                    tiles: AssemblyFile::from_assembly(a).tiles,
                    pieces: report
                        .provenance
                        .get(h)
                        .map(|p| {
                            p.pieces
                                .iter()
                                .map(|(ph, v)| (hamsim_core::assembly::hash_hex(ph), *v))
                                .collect()
                        })
                        .unwrap_or_default(),
                })
                .collect(),
        }
    }
}

pub fn save_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).context("serialize")?;
    fs::write(path, text + "\n").with_context(|| format!("write {}", path.display()))?;
    Ok(())
}

pub fn load_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parse {}", path.display()))
}

/// Rejects files written by a different format revision.
pub fn check_version(version: u32, what: &str) -> Result<()> {
    if version != FORMAT_VERSION {
        bail!("{what}: unsupported format_version {version} (expected {FORMAT_VERSION})");
    }
    Ok(())
}
