//! Combinability search, multi-handed producibility exploration, scripted
//! (guided) assembly, and seeded single-tile growth.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::assembly::{Assembly, CanonicalHash, Point};
use crate::bond::{facing_bond, BondGraph};
use crate::error::{Error, Result};
use crate::tile::{Side, TileSet};

/// A tile system: tile set, temperature, hand count, and an optional seed
/// (present iff the system runs in seeded single-tile mode).
#[derive(Debug, Clone)]
pub struct AssemblySystem {
    pub tileset: TileSet,
    pub tau: u32,
    pub hands: usize,
    pub seed: Option<Assembly>,
}

impl AssemblySystem {
    pub fn multi_handed(tileset: TileSet, tau: u32, hands: usize) -> Self {
        AssemblySystem {
            tileset,
            tau,
            hands,
            seed: None,
        }
    }

    pub fn seeded(tileset: TileSet, tau: u32, seed: Assembly) -> Self {
        AssemblySystem {
            tileset,
            tau,
            hands: 1,
            seed: Some(seed),
        }
    }
}

/// Bounds for `explore`.
#[derive(Debug, Clone)]
pub struct ExplorationConfig {
    pub max_size: usize,
    pub max_rounds: Option<usize>,
    pub record_provenance: bool,
}

impl ExplorationConfig {
    pub fn new(max_size: usize) -> Self {
        ExplorationConfig {
            max_size,
            max_rounds: None,
            record_provenance: true,
        }
    }
}

/// One witness derivation for a produced assembly: the constituent
/// canonical hashes with the translations that realized the union.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub pieces: Vec<(CanonicalHash, Point)>,
}

/// The canonical producible set found under a size bound.
#[derive(Debug, Clone)]
pub struct ExplorationReport {
    pub assemblies: BTreeMap<CanonicalHash, Assembly>,
    pub provenance: BTreeMap<CanonicalHash, Provenance>,
    pub rounds: usize,
    pub saturated: bool,
}

impl ExplorationReport {
    /// Counts of canonical assemblies by tile count, ascending.
    pub fn size_spectrum(&self) -> Vec<(usize, usize)> {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for asm in self.assemblies.values() {
            *counts.entry(asm.len()).or_insert(0) += 1;
        }
        counts.into_iter().collect()
    }
}

/// An exposed glue face of an assembly: the face of the tile at `pos`
/// looking across `side` into an empty cell.
#[derive(Debug, Clone)]
struct ExposedFace {
    pos: Point,
    side: Side,
    label: String,
}

fn exposed_faces(assembly: &Assembly, tileset: &TileSet) -> Result<Vec<ExposedFace>> {
    let mut out = Vec::new();
    for (&(x, y), name) in &assembly.tiles {
        let tile = tileset.get(name)?;
        for side in Side::ALL {
            if let Some(glue) = tile.glue(side) {
                if glue.strength == 0 {
                    continue;
                }
                let (dx, dy) = side.offset();
                if !assembly.tiles.contains_key(&(x + dx, y + dy)) {
                    out.push(ExposedFace {
                        pos: (x, y),
                        side,
                        label: glue.label.clone(),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Every translation v such that `mover + v` is disjoint from `anchored`
/// and shares at least one positive-weight bond with it. Complete: any
/// stable union in which the two pieces bond directly aligns a matching
/// exposed face pair, and every such pair is enumerated.
pub fn candidate_translations(
    anchored: &Assembly,
    mover: &Assembly,
    tileset: &TileSet,
) -> Result<BTreeSet<Point>> {
    let afaces = exposed_faces(anchored, tileset)?;
    let mfaces = exposed_faces(mover, tileset)?;
    let mut by_key: BTreeMap<(String, Side), Vec<Point>> = BTreeMap::new();
    for f in &mfaces {
        by_key
            .entry((f.label.clone(), f.side))
            .or_default()
            .push(f.pos);
    }
    let mut out = BTreeSet::new();
    for af in &afaces {
        // The mover tile must present the same label on the opposite side.
        if let Some(positions) = by_key.get(&(af.label.clone(), af.side.opposite())) {
            let (dx, dy) = af.side.offset();
            let target = (af.pos.0 + dx, af.pos.1 + dy);
            for &mp in positions {
                let v = (target.0 - mp.0, target.1 - mp.1);
                if out.contains(&v) {
                    continue;
                }
                let moved = mover.translate(v);
                if moved.disjoint(anchored) {
                    out.insert(v);
                }
            }
        }
    }
    Ok(out)
}

/// Total bond weight between two disjointly placed assemblies.
pub fn inter_bond_weight(a: &Assembly, b: &Assembly, tileset: &TileSet) -> Result<u64> {
    let (small, big) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut total = 0u64;
    for (&(x, y), name) in &small.tiles {
        for side in Side::ALL {
            let (dx, dy) = side.offset();
            if let Some(other) = big.tiles.get(&(x + dx, y + dy)) {
                total += facing_bond(tileset, name, side, other)?;
            }
        }
    }
    Ok(total)
}

/// Decide stability of a union of disjointly placed stable pieces by the
/// piece-level reduction: build the piece graph (one vertex per piece,
/// edge weight = total bond strength between the pair) and compare its
/// global min-cut against tau. For stable pieces this verdict equals the
/// full bond-graph verdict: any cut separating two tiles of one piece
/// already weighs at least tau, so a minimum cut below tau must separate
/// whole pieces.
pub fn piece_union_stable(pieces: &[Assembly], tileset: &TileSet, tau: u32) -> Result<bool> {
    piece_graph_min_cut(pieces, tileset).map(|cut| match cut {
        None => true,
        Some(c) => c >= u64::from(tau),
    })
}

/// Min-cut of the piece graph; `None` for fewer than two pieces.
pub fn piece_graph_min_cut(pieces: &[Assembly], tileset: &TileSet) -> Result<Option<u64>> {
    let n = pieces.len();
    if n < 2 {
        return Ok(None);
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let w = inter_bond_weight(&pieces[i], &pieces[j], tileset)?;
            if w > 0 {
                edges.push((i, j, w));
            }
        }
    }
    let graph = BondGraph {
        positions: (0..n).map(|i| (i as i64, 0)).collect(),
        edges,
    };
    Ok(graph.min_cut())
}

fn pieces_disjoint(pieces: &[Assembly]) -> bool {
    let mut seen: BTreeSet<Point> = BTreeSet::new();
    for p in pieces {
        for &pt in p.tiles.keys() {
            if !seen.insert(pt) {
                return false;
            }
        }
    }
    true
}

fn union_all(pieces: &[Assembly]) -> Assembly {
    let mut tiles = BTreeMap::new();
    for p in pieces {
        for (&pt, name) in &p.tiles {
            tiles.insert(pt, name.clone());
        }
    }
    Assembly { tiles }
}

/// All canonical stable unions formable from the given stable pieces
/// (each used exactly once), over every translation in which each newly
/// placed piece bonds the already-placed ones. Complete because the piece
/// contact graph of any stable union is connected.
pub fn combine(pieces: &[Assembly], system: &AssemblySystem) -> Result<BTreeSet<Assembly>> {
    if pieces.len() > system.hands {
        return Err(Error::HandCountExceeded {
            used: pieces.len(),
            hands: system.hands,
        });
    }
    let mut results = BTreeSet::new();
    if pieces.len() < 2 {
        return Ok(results);
    }
    let n = pieces.len();
    // State: placements[i] = Some(translation) for placed pieces.
    // Anchor piece 0 at the origin translation.
    let mut queue: VecDeque<Vec<Option<Point>>> = VecDeque::new();
    let mut start = vec![None; n];
    start[0] = Some((0, 0));
    let mut seen_states: BTreeSet<Vec<Option<Point>>> = BTreeSet::new();
    seen_states.insert(start.clone());
    queue.push_back(start);
    while let Some(state) = queue.pop_front() {
        let placed: Vec<Assembly> = state
            .iter()
            .enumerate()
            .filter_map(|(i, t)| t.map(|v| pieces[i].translate(v)))
            .collect();
        if placed.len() == n {
            if piece_union_stable(&placed, &system.tileset, system.tau)? {
                results.insert(union_all(&placed).canonical_form());
            }
            continue;
        }
        let current = union_all(&placed);
        for i in 0..n {
            if state[i].is_some() {
                continue;
            }
            for v in candidate_translations(&current, &pieces[i], &system.tileset)? {
                let mut next = state.clone();
                next[i] = Some(v);
                if seen_states.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(results)
}

/// A partial placement during exploration: pieces by canonical hash with
/// translations, normalized so the union's min corner is the origin.
type PlacementKey = Vec<(CanonicalHash, Point)>;

/// Fixed-point exploration of the producible set up to `max_size`.
///
/// Each round expands around the assemblies discovered in the previous
/// round (round one: the singleton tiles): breadth-first search over
/// connected placements of known assemblies anchored at a new assembly,
/// extending a placement only while its piece graph is below tau. A
/// placement that reaches stability is recorded as a new producible and
/// is not extended further; combinations that contain it as a stable
/// sub-collection are found in later rounds with the recorded assembly
/// acting as a single piece, which yields the same closure.
pub fn explore(system: &AssemblySystem, config: &ExplorationConfig) -> Result<ExplorationReport> {
    let tileset = &system.tileset;
    let mut known: BTreeMap<CanonicalHash, Assembly> = BTreeMap::new();
    let mut provenance: BTreeMap<CanonicalHash, Provenance> = BTreeMap::new();
    let mut fresh: Vec<CanonicalHash> = Vec::new();
    for tile in tileset.iter() {
        let asm = Assembly::singleton((0, 0), tile.name.clone());
        if asm.len() <= config.max_size {
            let h = asm.canonical_hash();
            if known.insert(h, asm).is_none() {
                fresh.push(h);
            }
        }
    }
    let mut rounds = 0usize;
    let mut saturated = false;
    loop {
        if fresh.is_empty() {
            saturated = true;
            break;
        }
        if let Some(limit) = config.max_rounds {
            if rounds >= limit {
                break;
            }
        }
        rounds += 1;
        let mut next_fresh: Vec<CanonicalHash> = Vec::new();
        let anchors = std::mem::take(&mut fresh);
        // Snapshot of the known set for this round; assemblies found
        // during the round become anchors next round.
        let round_known: Vec<(CanonicalHash, Assembly)> =
            known.iter().map(|(h, a)| (*h, a.clone())).collect();
        for anchor_hash in anchors {
            let anchor = known[&anchor_hash].clone();
            expand_around(
                system,
                config,
                &anchor,
                anchor_hash,
                &round_known,
                &mut known,
                &mut provenance,
                &mut next_fresh,
            )?;
        }
        fresh = next_fresh;
    }
    if !saturated && config.max_rounds.is_some() && !fresh.is_empty() {
        // Caller distinguishes budget exhaustion by the saturation flag;
        // the partial result is still returned.
    }
    Ok(ExplorationReport {
        assemblies: known,
        provenance,
        rounds,
        saturated,
    })
}

#[allow(clippy::too_many_arguments)]
fn expand_around(
    system: &AssemblySystem,
    config: &ExplorationConfig,
    anchor: &Assembly,
    anchor_hash: CanonicalHash,
    round_known: &[(CanonicalHash, Assembly)],
    known: &mut BTreeMap<CanonicalHash, Assembly>,
    provenance: &mut BTreeMap<CanonicalHash, Provenance>,
    fresh: &mut Vec<CanonicalHash>,
) -> Result<()> {
    let tileset = &system.tileset;
    // A state is a multiset of (hash, translation), anchored at the
    // anchor assembly at translation (0,0).
    let mut queue: VecDeque<Vec<(CanonicalHash, Point)>> = VecDeque::new();
    let mut seen: BTreeSet<PlacementKey> = BTreeSet::new();
    let start = vec![(anchor_hash, (0, 0))];
    seen.insert(normalize_key(&start, anchor));
    queue.push_back(start);
    while let Some(state) = queue.pop_front() {
        let placed: Vec<Assembly> = state.iter().map(|(h, v)| known[h].translate(*v)).collect();
        let total: usize = placed.iter().map(|p| p.len()).sum();
        let current = union_all(&placed);
        if state.len() > 1 {
            let stable = piece_union_stable(&placed, tileset, system.tau)?;
            if stable {
                let canon = current.canonical_form();
                let h = canon.canonical_hash();
                if let std::collections::btree_map::Entry::Vacant(e) = known.entry(h) {
                    e.insert(canon);
                    if config.record_provenance {
                        provenance.insert(
                            h,
                            Provenance {
                                pieces: state.clone(),
                            },
                        );
                    }
                    fresh.push(h);
                }
                // Stable placements are not extended; supersets are
                // reachable in later rounds via the recorded assembly.
                continue;
            }
        }
        if state.len() >= system.hands {
            continue;
        }
        for (h, piece) in round_known {
            if total + piece.len() > config.max_size {
                continue;
            }
            for v in candidate_translations(&current, piece, tileset)? {
                let mut next = state.clone();
                next.push((*h, v));
                next.sort();
                let key = normalize_key_pieces(&next, known);
                if seen.insert(key) {
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(())
}

fn normalize_key(state: &[(CanonicalHash, Point)], anchor: &Assembly) -> PlacementKey {
    let minx = anchor.tiles.keys().map(|p| p.0).min().unwrap_or(0);
    let miny = anchor.tiles.keys().map(|p| p.1).min().unwrap_or(0);
    let mut key: PlacementKey = state
        .iter()
        .map(|(h, (x, y))| (*h, (x - minx, y - miny)))
        .collect();
    key.sort();
    key
}

fn normalize_key_pieces(
    state: &[(CanonicalHash, Point)],
    known: &BTreeMap<CanonicalHash, Assembly>,
) -> PlacementKey {
    // Normalize by the union footprint's min corner so that translated
    // copies of the same decomposition collide.
    let mut minx = i64::MAX;
    let mut miny = i64::MAX;
    for (h, (vx, vy)) in state {
        let a = &known[h];
        for &(x, y) in a.tiles.keys() {
            minx = minx.min(x + vx);
            miny = miny.min(y + vy);
        }
    }
    let mut key: PlacementKey = state
        .iter()
        .map(|(h, (x, y))| (*h, (x - minx, y - miny)))
        .collect();
    key.sort();
    key
}

/// One step of a guided script: a set of previously defined assemblies
/// (or single tiles) at explicit translations whose union must be stable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptStep {
    pub id: String,
    pub operands: Vec<ScriptOperand>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptOperand {
    pub source: OperandSource,
    pub translation: Point,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum OperandSource {
    /// A singleton tile by type name.
    Tile(String),
    /// The result of an earlier step by id.
    Step(String),
}

/// A deterministic replay of intended combination sequences.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuidedScript {
    pub steps: Vec<ScriptStep>,
}

impl GuidedScript {
    pub fn push(&mut self, id: impl Into<String>, operands: Vec<ScriptOperand>) -> String {
        let id = id.into();
        self.steps.push(ScriptStep {
            id: id.clone(),
            operands,
        });
        id
    }
}

pub fn tile_operand(name: impl Into<String>, translation: Point) -> ScriptOperand {
    ScriptOperand {
        source: OperandSource::Tile(name.into()),
        translation,
    }
}

pub fn step_operand(id: impl Into<String>, translation: Point) -> ScriptOperand {
    ScriptOperand {
        source: OperandSource::Step(id.into()),
        translation,
    }
}

/// Execute `script` literally, checking at each step that the operand
/// count respects the hand bound, footprints are disjoint, and the union
/// is tau-stable. Returns the final step's assembly.
pub fn guided_assemble(system: &AssemblySystem, script: &GuidedScript) -> Result<Assembly> {
    let mut defined: BTreeMap<String, Assembly> = BTreeMap::new();
    let mut last: Option<Assembly> = None;
    for (index, step) in script.steps.iter().enumerate() {
        if step.operands.len() > system.hands {
            return Err(Error::HandCountExceeded {
                used: step.operands.len(),
                hands: system.hands,
            });
        }
        let mut pieces = Vec::with_capacity(step.operands.len());
        for op in &step.operands {
            let base = match &op.source {
                OperandSource::Tile(name) => {
                    system.tileset.get(name)?;
                    Assembly::singleton((0, 0), name.clone())
                }
                OperandSource::Step(id) => {
                    defined
                        .get(id)
                        .cloned()
                        .ok_or_else(|| Error::UndefinedOperand {
                            step: index,
                            name: id.clone(),
                        })?
                }
            };
            pieces.push(base.translate(op.translation));
        }
        if !pieces_disjoint(&pieces) {
            let mut seen: BTreeSet<Point> = BTreeSet::new();
            let mut clash = (0, 0);
            'outer: for p in &pieces {
                for &pt in p.tiles.keys() {
                    if !seen.insert(pt) {
                        clash = pt;
                        break 'outer;
                    }
                }
            }
            return Err(Error::StepOverlap {
                step: index,
                x: clash.0,
                y: clash.1,
            });
        }
        if pieces.len() > 1 {
            match piece_graph_min_cut(&pieces, &system.tileset)? {
                Some(cut) if cut < u64::from(system.tau) => {
                    return Err(Error::StepUnstable {
                        step: index,
                        cut,
                        tau: system.tau,
                    });
                }
                _ => {}
            }
        }
        let result = union_all(&pieces);
        defined.insert(step.id.clone(), result.clone());
        last = Some(result);
    }
    last.ok_or_else(|| Error::PreconditionViolated("script has no steps".into()))
}

/// Breadth-first closure of single-tile attachments from the seed: a tile
/// may attach at an empty neighbor cell when its new bonds total at least
/// tau. Positions are absolute (the seed is fixed), so deduplication uses
/// the raw tile map. `max_steps` bounds the number of attachments.
pub fn atam_grow(system: &AssemblySystem, max_steps: usize) -> Result<BTreeSet<Assembly>> {
    let seed = system
        .seed
        .clone()
        .ok_or_else(|| Error::PreconditionViolated("seeded mode requires a seed".into()))?;
    let tileset = &system.tileset;
    for name in seed.tiles.values() {
        tileset.get(name)?;
    }
    let mut seen: BTreeSet<Assembly> = BTreeSet::new();
    let mut queue: VecDeque<(Assembly, usize)> = VecDeque::new();
    seen.insert(seed.clone());
    queue.push_back((seed, 0));
    while let Some((asm, steps)) = queue.pop_front() {
        if steps >= max_steps {
            continue;
        }
        // Frontier cells: empty neighbors of the assembly.
        let mut frontier: BTreeSet<Point> = BTreeSet::new();
        for &(x, y) in asm.tiles.keys() {
            for side in Side::ALL {
                let (dx, dy) = side.offset();
                let q = (x + dx, y + dy);
                if !asm.tiles.contains_key(&q) {
                    frontier.insert(q);
                }
            }
        }
        for &cell in &frontier {
            for tile in tileset.iter() {
                let mut weight = 0u64;
                for side in Side::ALL {
                    let (dx, dy) = side.offset();
                    if let Some(nb) = asm.tiles.get(&(cell.0 + dx, cell.1 + dy)) {
                        weight += facing_bond(tileset, &tile.name, side, nb)?;
                    }
                }
                if weight >= u64::from(system.tau) {
                    let mut next = asm.clone();
                    next.tiles.insert(cell, tile.name.clone());
                    if seen.insert(next.clone()) {
                        queue.push_back((next, steps + 1));
                    }
                }
            }
        }
    }
    Ok(seen)
}
