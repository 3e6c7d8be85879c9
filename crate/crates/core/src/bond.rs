//! Bond graphs and exact global min-cut stability.

use std::collections::BTreeMap;

use crate::assembly::{Assembly, Point};
use crate::error::Result;
use crate::tile::{Side, TileSet};

/// The weighted bond graph of an assembly: one vertex per tile, an edge
/// between orthogonal neighbors weighted by the strength of the matching
/// facing glue pair (0 when labels differ or a side lacks a glue).
#[derive(Debug, Clone)]
pub struct BondGraph {
    /// Vertex i sits at `positions[i]`.
    pub positions: Vec<Point>,
    /// Edges (i, j, weight) with i < j; zero-weight adjacencies are kept
    /// out (they never affect cuts).
    pub edges: Vec<(usize, usize, u64)>,
}

impl BondGraph {
    pub fn vertex_count(&self) -> usize {
        self.positions.len()
    }

    /// Exact global min-cut weight. `None` for graphs with fewer than two
    /// vertices (no cut exists). Disconnected graphs report 0.
    pub fn min_cut(&self) -> Option<u64> {
        let n = self.vertex_count();
        if n < 2 {
            return None;
        }
        let mut w = vec![vec![0u64; n]; n];
        for &(i, j, weight) in &self.edges {
            w[i][j] += weight;
            w[j][i] += weight;
        }
        Some(stoer_wagner(&mut w))
    }
}

/// Deterministic Stoer–Wagner global min-cut on an adjacency matrix.
/// The matrix is consumed (vertices get merged in place).
fn stoer_wagner(w: &mut [Vec<u64>]) -> u64 {
    let n = w.len();
    let mut active: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    while active.len() > 1 {
        let m = active.len();
        // Maximum-adjacency ordering starting from active[0].
        let mut in_a = vec![false; m];
        let mut weight_to_a = vec![0u64; m];
        in_a[0] = true;
        for k in 1..m {
            weight_to_a[k] = w[active[0]][active[k]];
        }
        let mut prev = 0usize;
        let mut last = 0usize;
        for _ in 1..m {
            let mut sel = usize::MAX;
            for k in 0..m {
                if !in_a[k] && (sel == usize::MAX || weight_to_a[k] > weight_to_a[sel]) {
                    sel = k;
                }
            }
            in_a[sel] = true;
            prev = last;
            last = sel;
            for k in 0..m {
                if !in_a[k] {
                    weight_to_a[k] += w[active[sel]][active[k]];
                }
            }
        }
        // Cut-of-the-phase: {active[last]} vs the rest.
        best = best.min(weight_to_a[last]);
        // Merge last into prev.
        let (vp, vl) = (active[prev], active[last]);
        for &vk in &active {
            if vk != vp && vk != vl {
                w[vp][vk] += w[vl][vk];
                w[vk][vp] = w[vp][vk];
            }
        }
        active.remove(last);
    }
    best
}

/// Bond weight between two facing tile sides: the shared strength when
/// both glues exist with equal labels, otherwise 0.
pub fn facing_bond(tileset: &TileSet, name_a: &str, side_a: Side, name_b: &str) -> Result<u64> {
    let a = tileset.get(name_a)?;
    let b = tileset.get(name_b)?;
    Ok(match (a.glue(side_a), b.glue(side_a.opposite())) {
        (Some(ga), Some(gb)) if ga.label == gb.label => u64::from(ga.strength),
        _ => 0,
    })
}

/// Build the bond graph of `assembly` over `tileset`.
pub fn bond_graph(assembly: &Assembly, tileset: &TileSet) -> Result<BondGraph> {
    let positions: Vec<Point> = assembly.tiles.keys().copied().collect();
    let index: BTreeMap<Point, usize> =
        positions.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut edges = Vec::new();
    for (&(x, y), name) in &assembly.tiles {
        // Visit each unordered adjacent pair once via north and east.
        for side in [Side::North, Side::East] {
            let (dx, dy) = side.offset();
            let q = (x + dx, y + dy);
            if let Some(other) = assembly.tiles.get(&q) {
                let weight = facing_bond(tileset, name, side, other)?;
                if weight > 0 {
                    edges.push((index[&(x, y)], index[&q], weight));
                }
            }
        }
    }
    // Early name validation even for isolated tiles.
    for name in assembly.tiles.values() {
        tileset.get(name)?;
    }
    Ok(BondGraph { positions, edges })
}

/// True iff the assembly's bond graph has global min-cut >= tau.
/// Singletons are stable by convention (no cut exists).
pub fn is_tau_stable(assembly: &Assembly, tileset: &TileSet, tau: u32) -> Result<bool> {
    let graph = bond_graph(assembly, tileset)?;
    Ok(match graph.min_cut() {
        None => true,
        Some(cut) => cut >= u64::from(tau),
    })
}
