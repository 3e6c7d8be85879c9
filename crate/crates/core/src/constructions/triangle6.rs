//! Six-hand triangle assembler at scale 1 and temperature 2.
//!
//! Thirty tile types form six kinds of pieces: three 6-tile blocks b1,
//! b2, b3 (each a pair of vertical strength-2 columns cross-linked by two
//! strength-1 glues) and three 4-tile helpers alpha, beta, gamma (each a
//! strength-2 chain). A stage product is a near-triangle: the stage shape
//! minus its two leftmost, two rightmost, and two bottommost points.
//!
//! Six strength-1 interface glues occupy fixed slots on the blocks:
//!   A  = west of L2    A' = south of L1
//!   B  = east of R2    B' = south of R1
//!   G  = west of L3    G' = east of R3
//! Each block carries four of the six (b1: A,B,A',B'; b2: A,G,A',G';
//! b3: B,G,B',G'), and each helper terminates two of them, so the six
//! pieces of a stage bond in a single strength-1 hexagonal cycle: every
//! proper sub-collection has a cut below 2, the full loop is 2-stable.
//! The surviving four interface glues of a finished stage sit in the same
//! slots relative to its three clipped corners at every stage, so the
//! next stage joins three stage products with fresh helpers identically.

use std::collections::BTreeMap;

use crate::engine::{step_operand, tile_operand, AssemblySystem, GuidedScript};
use crate::fractals::FractalKind;
use crate::tile::{Side, TileSet, TileType};

use super::{ConstructionBundle, ConstructionMetadata};

fn block(n: u32) -> Vec<TileType> {
    let g = |s: &str| format!("b{n}.{s}");
    // Interface slot occupancy per block index.
    let has = |slot: &str| {
        matches!(
            (n, slot),
            (1, "A" | "B" | "A'" | "B'")
                | (2, "A" | "G" | "A'" | "G'")
                | (3, "B" | "G" | "B'" | "G'")
        )
    };
    let mut l1 = TileType::new(g("L1"))
        .with_glue(Side::North, g("L01"), 2)
        .with_glue(Side::East, g("c1"), 1);
    if has("A'") {
        l1 = l1.with_glue(Side::South, "A'", 1);
    }
    let mut l2 = TileType::new(g("L2"))
        .with_glue(Side::South, g("L01"), 2)
        .with_glue(Side::North, g("L12"), 2);
    if has("A") {
        l2 = l2.with_glue(Side::West, "A", 1);
    }
    let mut l3 = TileType::new(g("L3"))
        .with_glue(Side::South, g("L12"), 2)
        .with_glue(Side::East, g("c2"), 1);
    if has("G") {
        l3 = l3.with_glue(Side::West, "G", 1);
    }
    let mut r1 = TileType::new(g("R1"))
        .with_glue(Side::North, g("R01"), 2)
        .with_glue(Side::West, g("c1"), 1);
    if has("B'") {
        r1 = r1.with_glue(Side::South, "B'", 1);
    }
    let mut r2 = TileType::new(g("R2"))
        .with_glue(Side::South, g("R01"), 2)
        .with_glue(Side::North, g("R12"), 2);
    if has("B") {
        r2 = r2.with_glue(Side::East, "B", 1);
    }
    let mut r3 = TileType::new(g("R3"))
        .with_glue(Side::South, g("R12"), 2)
        .with_glue(Side::West, g("c2"), 1);
    if has("G'") {
        r3 = r3.with_glue(Side::East, "G'", 1);
    }
    vec![l1, l2, l3, r1, r2, r3]
}

fn helpers() -> Vec<TileType> {
    vec![
        // alpha: a strength-2 chain hugging a stage's lower-left flank,
        // ending in the two points clipped from the bottom of the next
        // copy up. Terminates A (east of its foot) and A' (north of its
        // head).
        TileType::new("al.1")
            .with_glue(Side::East, "A", 1)
            .with_glue(Side::North, "al.12", 2),
        TileType::new("al.2")
            .with_glue(Side::South, "al.12", 2)
            .with_glue(Side::North, "al.23", 2),
        TileType::new("al.3")
            .with_glue(Side::South, "al.23", 2)
            .with_glue(Side::West, "al.34", 2),
        TileType::new("al.4")
            .with_glue(Side::East, "al.34", 2)
            .with_glue(Side::North, "A'", 1),
        // beta: the mirror image on the lower-right flank (B, B').
        TileType::new("be.1")
            .with_glue(Side::West, "B", 1)
            .with_glue(Side::North, "be.12", 2),
        TileType::new("be.2")
            .with_glue(Side::South, "be.12", 2)
            .with_glue(Side::North, "be.23", 2),
        TileType::new("be.3")
            .with_glue(Side::South, "be.23", 2)
            .with_glue(Side::East, "be.34", 2),
        TileType::new("be.4")
            .with_glue(Side::West, "be.34", 2)
            .with_glue(Side::North, "B'", 1),
        // gamma: a 2x2 block filling the mutual clipped corners of the
        // two upper copies, terminating G' (west column) and G (east
        // column). Internally two strength-2 columns plus two
        // strength-1 rungs.
        TileType::new("ga.L1")
            .with_glue(Side::North, "ga.L", 2)
            .with_glue(Side::East, "ga.b1", 1),
        TileType::new("ga.L2")
            .with_glue(Side::South, "ga.L", 2)
            .with_glue(Side::East, "ga.b2", 1)
            .with_glue(Side::West, "G'", 1),
        TileType::new("ga.R1")
            .with_glue(Side::North, "ga.R", 2)
            .with_glue(Side::West, "ga.b1", 1),
        TileType::new("ga.R2")
            .with_glue(Side::South, "ga.R", 2)
            .with_glue(Side::West, "ga.b2", 1)
            .with_glue(Side::East, "G", 1),
    ]
}

fn block_step(script: &mut GuidedScript, n: u32) {
    let g = |s: &str| format!("b{n}.{s}");
    script.push(
        format!("b{n}"),
        vec![
            tile_operand(g("L1"), (-1, 1)),
            tile_operand(g("L2"), (-1, 2)),
            tile_operand(g("L3"), (-1, 3)),
            tile_operand(g("R1"), (0, 1)),
            tile_operand(g("R2"), (0, 2)),
            tile_operand(g("R3"), (0, 3)),
        ],
    );
}

fn helper_steps(script: &mut GuidedScript) {
    script.push(
        "alpha",
        vec![
            tile_operand("al.1", (-2, 2)),
            tile_operand("al.2", (-2, 3)),
            tile_operand("al.3", (-2, 4)),
            tile_operand("al.4", (-3, 4)),
        ],
    );
    script.push(
        "beta",
        vec![
            tile_operand("be.1", (1, 2)),
            tile_operand("be.2", (1, 3)),
            tile_operand("be.3", (1, 4)),
            tile_operand("be.4", (2, 4)),
        ],
    );
    script.push(
        "gamma",
        vec![
            tile_operand("ga.L1", (-1, 6)),
            tile_operand("ga.L2", (-1, 7)),
            tile_operand("ga.R1", (0, 6)),
            tile_operand("ga.R2", (0, 7)),
        ],
    );
}

/// Appends the step assembling stage `i + 1` from three stage-`i`
/// products (step id `prev`) and fresh helpers; returns the new step id.
fn stage_step(script: &mut GuidedScript, prev: &str, i: u32) -> String {
    let e = 1i64 << i;
    script.push(
        format!("A{}", i + 1),
        vec![
            step_operand(prev, (0, 0)),
            step_operand(prev, (-e, 2 * e)),
            step_operand(prev, (e, 2 * e)),
            step_operand("alpha", (-e + 2, 2 * e - 4)),
            step_operand("beta", (e - 2, 2 * e - 4)),
            step_operand("gamma", (0, 4 * e - 8)),
        ],
    );
    format!("A{}", i + 1)
}

/// Builds the 6-hand, temperature-2, scale-1 triangle assembler with
/// guided scripts for stages 2 through 4.
pub fn build_triangle_6ham() -> ConstructionBundle {
    let mut tiles = Vec::new();
    for n in 1..=3 {
        tiles.extend(block(n));
    }
    tiles.extend(helpers());
    let tile_count = tiles.len();
    let tileset = TileSet::new(tiles).expect("triangle6 tile set is consistent");
    let system = AssemblySystem::multi_handed(tileset, 2, 6);

    let mut base = GuidedScript::default();
    for n in 1..=3 {
        block_step(&mut base, n);
    }
    helper_steps(&mut base);
    base.push(
        "A2",
        vec![
            step_operand("b1", (0, 0)),
            step_operand("b2", (-2, 4)),
            step_operand("b3", (2, 4)),
            step_operand("alpha", (0, 0)),
            step_operand("beta", (0, 0)),
            step_operand("gamma", (0, 0)),
        ],
    );

    let mut stage_scripts = BTreeMap::new();
    stage_scripts.insert(2, base.clone());
    let mut prev = "A2".to_string();
    for i in 2..4u32 {
        prev = stage_step(&mut base, &prev, i);
        stage_scripts.insert(i + 1, base.clone());
    }

    let expected_stage_sizes = (2..=4u32).map(|i| (i, 4 * 3usize.pow(i) - 6)).collect();
    ConstructionBundle {
        system,
        stage_scripts,
        metadata: ConstructionMetadata {
            tile_count,
            expected_stage_sizes,
            fractal: FractalKind::Triangle { scale: 1 },
            anchor: (0, 0),
        },
    }
}
