//! Multi-handed hierarchical tile self-assembly: core data model,
//! stability analysis, exploration and scripted assembly engines,
//! discrete self-similar fractal geometry, and shape verification.

pub mod assembly;
pub mod bond;
pub mod constructions;
pub mod engine;
pub mod error;
pub mod fractals;
pub mod tile;
pub mod verify;

pub use assembly::{Assembly, CanonicalHash, Point, Shape};
pub use bond::{bond_graph, is_tau_stable, BondGraph};
pub use constructions::{
    build_carpet_2ham, build_triangle_3ham, build_triangle_6ham, ConstructionBundle,
    ConstructionMetadata,
};
pub use engine::{
    atam_grow, candidate_translations, combine, explore, guided_assemble, AssemblySystem,
    ExplorationConfig, ExplorationReport, GuidedScript, OperandSource, ScriptOperand, ScriptStep,
};
pub use error::{Error, Result};
pub use fractals::{
    choke_edges, in_carpet, in_triangle, pointlanding_holds, sierpinski_carpet,
    sierpinski_triangle, FractalKind, LatticeEdge,
};
pub use tile::{Glue, Side, TileSet, TileType};
pub use verify::{
    is_near_triangle, near_perfect_check, shape_deficit, within_fractal, NearPerfectReport,
};
