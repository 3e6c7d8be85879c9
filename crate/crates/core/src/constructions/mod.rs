//! Builders for the three shipped tile systems: a 6-hand triangle
//! assembler at scale 1, a 3-hand triangle assembler at scale 3, and a
//! 2-hand carpet assembler at scale 3. Each bundle packages the system
//! with guided scripts that realize its intended stage-by-stage growth.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::assembly::Point;
use crate::engine::{AssemblySystem, GuidedScript};
use crate::fractals::FractalKind;

mod carpet2;
mod triangle3;
mod triangle6;

pub use carpet2::{build_carpet_2ham, carpet_base_shape, carpet_stage2_combinable_script};
pub use triangle3::{build_triangle_3ham, triangle_mixed_keystone_script};
pub use triangle6::build_triangle_6ham;

/// Descriptive facts about a construction, for reports and tests.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstructionMetadata {
    /// Number of distinct tile types in the system.
    pub tile_count: usize,
    /// Stage index -> expected tile count of that stage's scripted product.
    pub expected_stage_sizes: BTreeMap<u32, usize>,
    /// The fractal (kind and scale) the construction targets.
    pub fractal: FractalKind,
    /// Translation mapping scripted products onto canonical fractal
    /// coordinates.
    pub anchor: Point,
}

/// A tile system together with the guided scripts for its growth stages.
#[derive(Debug, Clone)]
pub struct ConstructionBundle {
    pub system: AssemblySystem,
    /// Stage index -> script whose final step yields the stage product.
    pub stage_scripts: BTreeMap<u32, GuidedScript>,
    pub metadata: ConstructionMetadata,
}
