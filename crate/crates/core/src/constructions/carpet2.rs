//! Two-hand carpet assembler at scale 3 and temperature 2.
//!
//! The carpet is grown from "base shapes": a stage-n base shape is the
//! scaled stage with its outermost ring removed and its four ring-adjacent
//! corner cells indented. Eight base shapes tile the next stage around the
//! central hole, one per grid position (numbered 1 2 3 across the top,
//! 4 _ 5 in the middle, 6 7 8 across the bottom), leaving the next ring
//! and indents to be re-created one level up.
//!
//! Growth of one level, uniform at every scale:
//!
//! 1. A completed position-x occupant exposes a two-glue keystone site
//!    `Kx.a`/`Kx.b` split across two sub-units, so the keystone can only
//!    attach to a finished piece. At stage 1 the site spans the two halves
//!    of a base piece; at higher stages it spans two sub-assemblies.
//! 2. A two-tile keystone `(x, t)` binds the site cooperatively and stamps
//!    a type `t` on everything that follows.
//! 3. Fill chains grow from the keystone along the perimeter sides of the
//!    block that face the parent's interior. Each fill tile binds with a
//!    strength-1 stamped chain glue plus a strength-1 directional support
//!    glue (`NB`/`EB`/`SB`/`WB`) from the tile it rests on; indent cells
//!    and block corners attach as two-tile strength-2 groups. Because each
//!    directional label only ever appears on one provider face direction,
//!    support glues never bond two finished assemblies to each other.
//! 4. Both end cells of every filled strip carry a stamped seam connector
//!    `G.x.q.t`, so each of the eight seams of the next stage bonds with
//!    weight exactly 2, and only between occupants stamped with the same
//!    type. Designated strip-end tiles expose the next site `Kt.a`/`Kt.b`,
//!    and the stamped type becomes the position the finished assembly
//!    occupies one level up.

use std::collections::{BTreeMap, BTreeSet};

use crate::assembly::{Point, Shape};
use crate::engine::{step_operand, tile_operand, AssemblySystem, GuidedScript};
use crate::fractals::{in_carpet, FractalKind};
use crate::tile::{Side, TileSet, TileType};

use super::{ConstructionBundle, ConstructionMetadata};

/// Stage-1 block edge length at scale 3.
const B1: i64 = 9;

type FaceMap = BTreeMap<Side, (String, u32)>;

/// Grid offset of position `p` in the 3x3 block of a stage.
fn grid_offset(p: u8) -> (i64, i64) {
    match p {
        1 => (0, 2),
        2 => (1, 2),
        3 => (2, 2),
        4 => (0, 1),
        5 => (2, 1),
        6 => (0, 0),
        7 => (1, 0),
        8 => (2, 0),
        _ => unreachable!("position out of range"),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum NeighborKind {
    /// Off the 3x3 grid: the strip beyond faces the parent's outer ring.
    Exterior,
    /// The central hole.
    Hole,
    /// The adjacent occupied position.
    Pos(u8),
}

fn neighbor_kind(p: u8, d: Side) -> NeighborKind {
    let (ox, oy) = grid_offset(p);
    let (dx, dy) = d.offset();
    let n = (ox + dx, oy + dy);
    if n == (1, 1) {
        NeighborKind::Hole
    } else if n.0 < 0 || n.0 > 2 || n.1 < 0 || n.1 > 2 {
        NeighborKind::Exterior
    } else {
        let q = (1..=8)
            .find(|&q| grid_offset(q) == n)
            .expect("occupied grid cell");
        NeighborKind::Pos(q)
    }
}

fn exterior(p: u8, d: Side) -> bool {
    neighbor_kind(p, d) == NeighborKind::Exterior
}

/// Block-perimeter sides a position-`x` occupant fills: exactly the sides
/// facing the parent's interior, as an arc with the keystone side first.
fn arc_sides(x: u8) -> &'static [(Side, bool)] {
    use Side::{East as E, North as N, South as S, West as W};
    // The bool reverses the canonical strip order (west-to-east for
    // horizontal strips, south-to-north for vertical ones).
    match x {
        1 => &[(E, true), (S, true)],
        2 => &[(W, true), (S, false), (E, false)],
        3 => &[(W, true), (S, false)],
        4 => &[(S, false), (E, false), (N, true)],
        5 => &[(S, true), (W, false), (N, false)],
        6 => &[(E, false), (N, true)],
        7 => &[(W, false), (N, false), (E, true)],
        8 => &[(W, false), (N, false)],

        _ => unreachable!("position out of range"),
    }
}

/// Cells of the side-`d` perimeter strip of a size-`b` block occupied by
/// position `x`, in canonical order, clipped where the orthogonal sides
/// leave the parent's kept region.
fn strip_cells(x: u8, d: Side, b: i64) -> Vec<Point> {
    use Side::{East as E, North as N, South as S, West as W};
    match d {
        N | S => {
            let y = if d == N { b - 1 } else { 0 };
            let lo = if exterior(x, W) { 1 } else { 0 };
            let hi = if exterior(x, E) { b - 2 } else { b - 1 };
            (lo..=hi).map(|cx| (cx, y)).collect()
        }
        E | W => {
            let cx = if d == E { b - 1 } else { 0 };
            let lo = if exterior(x, S) { 1 } else { 0 };
            let hi = if exterior(x, N) { b - 2 } else { b - 1 };
            (lo..=hi).map(|y| (cx, y)).collect()
        }
    }
}

fn in_block(c: Point, b: i64) -> bool {
    c.0 >= 0 && c.0 < b && c.1 >= 0 && c.1 < b
}

fn in_hole(c: Point, b: i64) -> bool {
    let t = b / 3;
    c.0 >= t && c.0 < 2 * t && c.1 >= t && c.1 < 2 * t
}

fn indents(b: i64) -> [Point; 4] {
    [(1, 1), (b - 2, 1), (1, b - 2), (b - 2, b - 2)]
}

/// Ring model of the occupied interior of a block: every cell of the
/// two-cell-thick boundary ring of a scaled carpet stage is present, so
/// membership near the perimeter only depends on the ring geometry.
fn base_present(c: Point, b: i64) -> bool {
    c.0 >= 1
        && c.0 <= b - 2
        && c.1 >= 1
        && c.1 <= b - 2
        && !in_hole(c, b)
        && !indents(b).contains(&c)
}

fn is_block_corner(c: Point, b: i64) -> bool {
    (c.0 == 0 || c.0 == b - 1) && (c.1 == 0 || c.1 == b - 1)
}

fn corner_compass(c: Point) -> &'static str {
    match (c.0 == 0, c.1 == 0) {
        (true, true) => "sw",
        (false, true) => "se",
        (true, false) => "nw",
        (false, false) => "ne",
    }
}

fn indent_compass(c: Point) -> &'static str {
    match (c.0 == 1, c.1 == 1) {
        (true, true) => "sw",
        (false, true) => "se",
        (true, false) => "nw",
        (false, false) => "ne",
    }
}

fn side_char(d: Side) -> char {
    match d {
        Side::North => 'N',
        Side::East => 'E',
        Side::South => 'S',
        Side::West => 'W',
    }
}

/// Directional support label: providers expose it on their `d` face, the
/// supported cell on the opposite face. Each label is tied to one face
/// direction globally, so stray exposed providers can never pair up.
fn sup_label(d: Side) -> &'static str {
    match d {
        Side::North => "NB",
        Side::East => "EB",
        Side::South => "SB",
        Side::West => "WB",
    }
}

fn chain_label(x: u8, t: u8, dir: Side, strip: Side) -> String {
    format!(
        "c.{x}.{t}.{}{}",
        side_char(dir).to_ascii_lowercase(),
        side_char(strip)
    )
}

fn connector_label(x: u8, q: u8, t: u8) -> String {
    format!("G.{}.{}.{t}", x.min(q), x.max(q))
}

fn site_label(x: u8, half: char) -> String {
    format!("K{x}.{half}")
}

fn step_dir(from: Point, to: Point) -> Side {
    Side::ALL
        .into_iter()
        .find(|d| {
            let (dx, dy) = d.offset();
            (from.0 + dx, from.1 + dy) == to
        })
        .expect("cells adjacent")
}

fn cell_add(c: Point, d: Side) -> Point {
    let (dx, dy) = d.offset();
    (c.0 + dx, c.1 + dy)
}

/// Next-site duty: the fill tile of family `(x, t)` at `cell` exposes one
/// half of the next keystone site `Kt` on face `d` when the finished
/// assembly's site lies on this block's corner of the parent.
fn k_duty(x: u8, t: u8, cell: Point, d: Side, b: i64) -> Option<String> {
    use Side::{East as E, South as S, West as W};
    let duty = |half: char| Some(site_label(t, half));
    match (x, d) {
        (8, E) if cell == (b - 2, b - 1) && matches!(t, 1 | 6) => duty('a'),
        (5, E) if cell == (b - 2, 0) && matches!(t, 1 | 6) => duty('b'),
        (6, W) if cell == (1, b - 1) && matches!(t, 2 | 3 | 7 | 8) => duty('a'),
        (4, W) if cell == (1, 0) && matches!(t, 2 | 3 | 7 | 8) => duty('b'),
        (6, S) if cell == (b - 1, 1) && matches!(t, 4 | 5) => duty('a'),
        (7, S) if cell == (0, 1) && matches!(t, 4 | 5) => duty('b'),
        _ => None,
    }
}

/// Glue for an otherwise unused face of a fill tile of family `(x, t)`.
fn generic_face(x: u8, t: u8, cell: Point, d: Side, b: i64) -> Option<(String, u32)> {
    let n = cell_add(cell, d);
    if in_block(n, b) {
        if in_hole(n, b) || base_present(n, b) {
            return None;
        }
        if let Some(k) = k_duty(x, t, cell, d, b) {
            return Some((k, 1));
        }
        return Some((sup_label(d).to_string(), 1));
    }
    match neighbor_kind(x, d) {
        NeighborKind::Hole | NeighborKind::Exterior => None,
        NeighborKind::Pos(q) => {
            let strip = strip_cells(x, d, b);
            if cell == strip[0] || cell == *strip.last().expect("strip nonempty") {
                Some((connector_label(x, q, t), 1))
            } else {
                Some((sup_label(d).to_string(), 1))
            }
        }
    }
}

fn fill_remaining(x: u8, t: u8, cell: Point, b: i64, faces: &mut FaceMap) {
    for d in Side::ALL {
        if let std::collections::btree_map::Entry::Vacant(e) = faces.entry(d) {
            if let Some(g) = generic_face(x, t, cell, d, b) {
                e.insert(g);
            }
        }
    }
}

/// Keystone site geometry for the occupant of position `x` in a size-`b`
/// block: (site side, keystone cells `[kA, kB]`).
fn site_geometry(x: u8, b: i64) -> (Side, [Point; 2]) {
    use Side::{East as E, South as S, West as W};
    let m = b / 3;
    match x {
        1 | 6 => (E, [(b - 1, m - 1), (b - 1, m)]),
        2 | 3 | 7 | 8 => (W, [(0, m - 1), (0, m)]),
        4 | 5 => (S, [(m - 1, 0), (m, 0)]),
        _ => unreachable!("position out of range"),
    }
}

/// Face maps of the two keystone tiles of keystone `(x, t)`. `kA` is the
/// lower (or western) tile, matching the `Kx.a` half of the site.
fn keystone_facemaps(x: u8, t: u8, b: i64) -> [(Point, FaceMap); 2] {
    use Side::{East as E, North as N, South as S, West as W};
    let (side, [ka, kb]) = site_geometry(x, b);
    let s2 = (format!("k2.{x}.{t}"), 2);
    let mut a = FaceMap::new();
    let mut bm = FaceMap::new();
    match side {
        E | W => {
            let inward = side.opposite();
            a.insert(inward, (site_label(x, 'a'), 1));
            bm.insert(inward, (site_label(x, 'b'), 1));
            a.insert(N, s2.clone());
            bm.insert(S, s2);
            a.insert(S, (chain_label(x, t, S, side), 1));
            bm.insert(N, (chain_label(x, t, N, side), 1));
        }
        _ => {
            a.insert(N, (site_label(x, 'a'), 1));
            bm.insert(N, (site_label(x, 'b'), 1));
            a.insert(E, s2.clone());
            bm.insert(W, s2);
            a.insert(W, (chain_label(x, t, W, S), 1));
            bm.insert(E, (chain_label(x, t, E, S), 1));
        }
    }
    fill_remaining(x, t, ka, b, &mut a);
    fill_remaining(x, t, kb, b, &mut bm);
    [(ka, a), (kb, bm)]
}

/// One placement of the fill walk: a single tile or a strength-2-joined
/// pair that attaches as a group.
struct WalkStep {
    tiles: Vec<(Point, FaceMap)>,
}

/// Perimeter fill of family `(x, t)` on a size-`b` block, in attachment
/// order (keystone not included). Every step bonds to the already-placed
/// tiles with weight at least 2.
fn fill_walk(x: u8, t: u8, b: i64) -> Vec<WalkStep> {
    // Ordered arc path with strip-side tags; shared corner cells keep the
    // tag of the strip they are first reached through.
    let mut path: Vec<(Point, Side)> = Vec::new();
    for &(side, rev) in arc_sides(x) {
        let mut cells = strip_cells(x, side, b);
        if rev {
            cells.reverse();
        }
        for c in cells {
            if path.last().map(|&(p, _)| p) != Some(c) {
                path.push((c, side));
            }
        }
    }
    let (_, [ka, kb]) = site_geometry(x, b);
    let i = path
        .iter()
        .position(|&(c, _)| c == ka || c == kb)
        .expect("keystone on arc");
    let k1 = path[i].0;
    let k2 = path[i + 1].0;
    let before: Vec<(Point, Side)> = path[..i].iter().rev().copied().collect();
    let after: Vec<(Point, Side)> = path[i + 2..].to_vec();

    let mut steps = Vec::new();
    for (seed, chain) in [(k1, before), (k2, after)] {
        walk_chain(x, t, b, seed, &chain, &mut steps);
    }
    steps
}

fn walk_chain(
    x: u8,
    t: u8,
    b: i64,
    seed: Point,
    cells: &[(Point, Side)],
    steps: &mut Vec<WalkStep>,
) {
    let (kside, _) = site_geometry(x, b);
    let kstrip = if matches!(kside, Side::South) {
        Side::South
    } else {
        kside
    };
    let mut prev = seed;
    let mut prev_strip = kstrip;
    let mut i = 0;
    while i < cells.len() {
        let (c, strip) = cells[i];
        let d_in = step_dir(prev, c);
        let in_glue = (chain_label(x, t, d_in, prev_strip), 1);
        if is_block_corner(c, b) {
            // Corner turn: the corner and the next strip cell attach as a
            // strength-2 pair; the partner rests on the indent fill placed
            // just before the turn.
            let (p2, p2strip) = cells[i + 1];
            let s2 = (format!("s2.{x}.{t}.c{}", corner_compass(c)), 2);
            let mut cf = FaceMap::new();
            cf.insert(d_in.opposite(), in_glue);
            cf.insert(step_dir(c, p2), s2.clone());
            fill_remaining(x, t, c, b, &mut cf);
            let mut pf = FaceMap::new();
            pf.insert(step_dir(p2, c), s2);
            let inward = p2strip.opposite();
            pf.insert(inward, (sup_label(p2strip).to_string(), 1));
            if i + 2 < cells.len() {
                let d_out = step_dir(p2, cells[i + 2].0);
                pf.insert(d_out, (chain_label(x, t, d_out, p2strip), 1));
            }
            fill_remaining(x, t, p2, b, &mut pf);
            steps.push(WalkStep {
                tiles: vec![(c, cf), (p2, pf)],
            });
            prev = p2;
            prev_strip = p2strip;
            i += 2;
            continue;
        }
        let inward = strip.opposite();
        let sc = cell_add(c, inward);
        if base_present(sc, b) {
            // Plain chain cell: stamped chain glue plus one support bond.
            let mut f = FaceMap::new();
            f.insert(d_in.opposite(), in_glue);
            f.insert(inward, (sup_label(strip).to_string(), 1));
            if i + 1 < cells.len() {
                let d_out = step_dir(c, cells[i + 1].0);
                f.insert(d_out, (chain_label(x, t, d_out, strip), 1));
            }
            fill_remaining(x, t, c, b, &mut f);
            steps.push(WalkStep {
                tiles: vec![(c, f)],
            });
        } else {
            // The inward neighbor is an indented corner of the occupied
            // region: it joins the strip cell as a strength-2 pair that
            // rests on the indent's own two supports.
            let s2 = (format!("s2.{x}.{t}.i{}", indent_compass(sc)), 2);
            let mut f = FaceMap::new();
            f.insert(d_in.opposite(), in_glue);
            f.insert(inward, s2.clone());
            if i + 1 < cells.len() {
                let d_out = step_dir(c, cells[i + 1].0);
                f.insert(d_out, (chain_label(x, t, d_out, strip), 1));
            }
            fill_remaining(x, t, c, b, &mut f);
            let mut sf = FaceMap::new();
            sf.insert(strip, s2);
            for d in Side::ALL {
                if d != strip && base_present(cell_add(sc, d), b) {
                    sf.insert(d, (sup_label(d.opposite()).to_string(), 1));
                }
            }
            fill_remaining(x, t, sc, b, &mut sf);
            steps.push(WalkStep {
                tiles: vec![(c, f), (sc, sf)],
            });
        }
        prev = c;
        prev_strip = strip;
        i += 1;
    }
}

/// Base piece for position `p`: 36 tiles on the stage-1 base shape, two
/// strength-2-meshed halves joined by two strength-1 seams, with the
/// split keystone site spanning the halves.
fn base_tiles(p: u8) -> Vec<(Point, TileType)> {
    let b = B1;
    let m = b / 3;
    let vertical_site = !matches!(p, 4 | 5);
    // Half A is the thin slice behind the site; the site glues straddle
    // the cut so the keystone needs both halves in place.
    let half = |c: Point| -> u8 {
        if vertical_site {
            u8::from(c.1 >= m)
        } else {
            u8::from(c.0 >= m)
        }
    };
    let seams: [(Point, Point); 2] = if vertical_site {
        [((1, m - 1), (1, m)), ((b - 2, m - 1), (b - 2, m))]
    } else {
        [((m - 1, 1), (m, 1)), ((m - 1, b - 2), (m, b - 2))]
    };
    let (site_side, site_cells): (Side, [Point; 2]) = match p {
        1 | 6 => (Side::East, [(b - 2, m - 1), (b - 2, m)]),
        2 | 3 | 7 | 8 => (Side::West, [(1, m - 1), (1, m)]),
        _ => (Side::South, [(m - 1, 1), (m, 1)]),
    };

    let mut out = Vec::new();
    for y in 1..=b - 2 {
        for x in 1..=b - 2 {
            let c = (x, y);
            if !base_present(c, b) {
                continue;
            }
            let mut tile = TileType::new(format!("b{p}.{x}.{y}"));
            for d in Side::ALL {
                let n = cell_add(c, d);
                if base_present(n, b) {
                    if half(n) == half(c) {
                        // Unique strength-2 mesh glue per interior edge.
                        let (lo, hi) = if n < c { (n, c) } else { (c, n) };
                        let axis = if lo.0 != hi.0 { 'h' } else { 'v' };
                        tile = tile.with_glue(d, format!("e{p}.{axis}.{}.{}", lo.0, lo.1), 2);
                    } else if let Some(k) = seams
                        .iter()
                        .position(|&(a, bb)| (a, bb) == (c.min(n), c.max(n)))
                    {
                        tile = tile.with_glue(d, format!("m{p}.{k}"), 1);
                    }
                    continue;
                }
                if in_hole(n, b) {
                    continue;
                }
                if d == site_side && c == site_cells[0] {
                    tile = tile.with_glue(d, site_label(p, 'a'), 1);
                } else if d == site_side && c == site_cells[1] {
                    tile = tile.with_glue(d, site_label(p, 'b'), 1);
                } else {
                    tile = tile.with_glue(d, sup_label(d), 1);
                }
            }
            out.push((c, tile));
        }
    }
    out
}

/// Interns fill face maps as named tile types, collapsing duplicates.
#[derive(Default)]
struct Interner {
    by_faces: BTreeMap<Vec<(Side, String, u32)>, String>,
    tiles: Vec<TileType>,
    counters: BTreeMap<(u8, u8), usize>,
}

impl Interner {
    fn intern(&mut self, x: u8, t: u8, faces: &FaceMap) -> String {
        let key: Vec<(Side, String, u32)> = faces
            .iter()
            .map(|(&d, (l, s))| (d, l.clone(), *s))
            .collect();
        if let Some(name) = self.by_faces.get(&key) {
            return name.clone();
        }
        let n = self.counters.entry((x, t)).or_insert(0);
        let name = format!("f{x}.{t}.{n}");
        *n += 1;
        let mut tile = TileType::new(name.clone());
        for (&d, (l, s)) in faces {
            tile = tile.with_glue(d, l.clone(), *s);
        }
        self.tiles.push(tile);
        self.by_faces.insert(key, name.clone());
        name
    }
}

/// One fill walk: placed tile names in attachment order.
type Walk = Vec<(Point, String)>;

/// Everything deterministic the builders need: the full tile list plus
/// the fill walks resolved to tile names, per family and block size.
struct Plan {
    tiles: Vec<TileType>,
    walks: BTreeMap<(u8, u8, i64), Vec<Walk>>,
}

fn plan() -> Plan {
    let mut tiles: Vec<TileType> = Vec::new();
    for p in 1..=8 {
        tiles.extend(base_tiles(p).into_iter().map(|(_, t)| t));
    }
    for x in 1..=8 {
        for t in 1..=8 {
            for (cell, faces) in keystone_facemaps(x, t, B1) {
                let _ = cell;
                let half = if faces.values().any(|(l, _)| *l == site_label(x, 'a')) {
                    'a'
                } else {
                    'b'
                };
                let mut tile = TileType::new(format!("k{x}.{t}.{half}"));
                for (&d, (l, s)) in &faces {
                    tile = tile.with_glue(d, l.clone(), *s);
                }
                tiles.push(tile);
            }
        }
    }
    let mut interner = Interner::default();
    let mut walks = BTreeMap::new();
    for x in 1..=8 {
        for t in 1..=8 {
            for b in [B1, 3 * B1] {
                let resolved: Vec<Vec<(Point, String)>> = fill_walk(x, t, b)
                    .into_iter()
                    .map(|step| {
                        step.tiles
                            .into_iter()
                            .map(|(c, f)| (c, interner.intern(x, t, &f)))
                            .collect()
                    })
                    .collect();
                walks.insert((x, t, b), resolved);
            }
        }
    }
    tiles.extend(interner.tiles);
    Plan { tiles, walks }
}

/// The stage-n base shape in carpet coordinates: the scaled stage with
/// the outer ring removed and the four ring-adjacent corners indented.
pub fn carpet_base_shape(stage: u32) -> Shape {
    let n = 3i64.pow(stage + 1);
    let mut points = BTreeSet::new();
    for y in 1..=n - 2 {
        for x in 1..=n - 2 {
            if in_carpet((x, y), 3) && !indents(n).contains(&(x, y)) {
                points.insert((x, y));
            }
        }
    }
    Shape { points }
}

struct ScriptBuilder<'a> {
    plan: &'a Plan,
    script: GuidedScript,
}

impl<'a> ScriptBuilder<'a> {
    /// Builds base piece `p` in block-local coordinates: each half grows
    /// tile by tile over its strength-2 mesh, then the halves join across
    /// the two strength-1 seams.
    fn base_piece(&mut self, p: u8) -> String {
        let cells = base_tiles(p);
        let m = B1 / 3;
        let vertical = !matches!(p, 4 | 5);
        let half = |c: Point| -> u8 {
            if vertical {
                u8::from(c.1 >= m)
            } else {
                u8::from(c.0 >= m)
            }
        };
        let mut ids = Vec::new();
        for h in 0..2u8 {
            let part: BTreeSet<Point> = cells
                .iter()
                .filter(|(c, _)| half(*c) == h)
                .map(|(c, _)| *c)
                .collect();
            // Breadth-first over the mesh so every tile lands on a glue.
            let start = *part.iter().next().expect("half nonempty");
            let mut order = vec![start];
            let mut seen: BTreeSet<Point> = [start].into();
            let mut qi = 0;
            while qi < order.len() {
                let c = order[qi];
                qi += 1;
                for d in Side::ALL {
                    let n = cell_add(c, d);
                    if part.contains(&n) && seen.insert(n) {
                        order.push(n);
                    }
                }
            }
            let mut cur = self.script.push(
                format!("B{p}.h{h}.0"),
                vec![tile_operand(format!("b{p}.{}.{}", start.0, start.1), start)],
            );
            for (i, c) in order.iter().enumerate().skip(1) {
                cur = self.script.push(
                    format!("B{p}.h{h}.{i}"),
                    vec![
                        step_operand(cur, (0, 0)),
                        tile_operand(format!("b{p}.{}.{}", c.0, c.1), *c),
                    ],
                );
            }
            ids.push(cur);
        }
        self.script.push(
            format!("B{p}"),
            vec![
                step_operand(ids[0].clone(), (0, 0)),
                step_operand(ids[1].clone(), (0, 0)),
            ],
        )
    }

    /// Attaches keystone `(x, t)` to the occupant assembly `base_id`
    /// (in block-local coordinates of a size-`b` block) and runs the
    /// family-`(x, t)` fill chains. Returns the completed occupant.
    fn keystone_and_fill(&mut self, x: u8, t: u8, b: i64, base_id: &str, prefix: &str) -> String {
        let (_, [ka, kb]) = site_geometry(x, b);
        let ks = self.script.push(
            format!("{prefix}.ks"),
            vec![
                tile_operand(format!("k{x}.{t}.a"), ka),
                tile_operand(format!("k{x}.{t}.b"), kb),
            ],
        );
        let mut cur = self.script.push(
            format!("{prefix}.attach"),
            vec![step_operand(base_id, (0, 0)), step_operand(ks, (0, 0))],
        );
        let walk = &self.plan.walks[&(x, t, b)];
        for (i, step) in walk.iter().enumerate() {
            let op = if step.len() == 1 {
                tile_operand(step[0].1.clone(), step[0].0)
            } else {
                let gid = self.script.push(
                    format!("{prefix}.g{i}"),
                    step.iter()
                        .map(|(c, name)| tile_operand(name.clone(), *c))
                        .collect(),
                );
                step_operand(gid, (0, 0))
            };
            cur = self.script.push(
                format!("{prefix}.f{i}"),
                vec![step_operand(cur, (0, 0)), op],
            );
        }
        cur
    }

    /// Joins eight completed occupants (`ids[p-1]` in its own block-local
    /// coordinates, block size `b`) into the next base shape. Every join
    /// crosses at least one two-connector seam.
    fn join_stage(&mut self, ids: &[String; 8], b: i64, prefix: &str) -> String {
        let place = |p: u8| -> (Point, String) {
            let (ox, oy) = grid_offset(p);
            ((ox * b, oy * b), ids[p as usize - 1].clone())
        };
        let order = [1u8, 2, 3, 4, 6, 7, 8, 5];
        let (pos0, id0) = place(order[0]);
        let mut cur = self
            .script
            .push(format!("{prefix}.j0"), vec![step_operand(id0, pos0)]);
        for (i, &p) in order.iter().enumerate().skip(1) {
            let (pos, id) = place(p);
            cur = self.script.push(
                format!("{prefix}.j{i}"),
                vec![step_operand(cur, (0, 0)), step_operand(id, pos)],
            );
        }
        cur
    }

    /// The stage-2 base shape built from eight type-`t` stage-1 pieces.
    fn stage2(&mut self, t: u8, base_ids: &[String; 8]) -> String {
        let mut done = Vec::new();
        for p in 1..=8u8 {
            let id = self.keystone_and_fill(
                p,
                t,
                B1,
                &base_ids[p as usize - 1].clone(),
                &format!("s2.{t}.p{p}"),
            );
            done.push(id);
        }
        let done: [String; 8] = done.try_into().expect("eight pieces");
        self.join_stage(&done, B1, &format!("s2.{t}"))
    }
}

fn base_ids(builder: &mut ScriptBuilder) -> [String; 8] {
    let ids: Vec<String> = (1..=8).map(|p| builder.base_piece(p)).collect();
    ids.try_into().expect("eight base pieces")
}

/// Guided script for one stage-2 combinable: the stage-2 base shape that
/// occupies `position`, completed with a keystone of type `next_type` and
/// the matching perimeter fill.
pub fn carpet_stage2_combinable_script(position: u8, next_type: u8) -> GuidedScript {
    assert!((1..=8).contains(&position) && (1..=8).contains(&next_type));
    let plan = plan();
    let mut builder = ScriptBuilder {
        plan: &plan,
        script: GuidedScript::default(),
    };
    let bases = base_ids(&mut builder);
    let s2 = builder.stage2(position, &bases);
    builder.keystone_and_fill(
        position,
        next_type,
        3 * B1,
        &s2,
        &format!("c2.{position}.{next_type}"),
    );
    builder.script
}

/// Builds the 2-hand carpet assembler: temperature 2, two hands, scale 3.
pub fn build_carpet_2ham() -> ConstructionBundle {
    let plan = plan();
    let tileset = TileSet::new(plan.tiles.clone()).expect("carpet tile set is consistent");
    let tile_count = tileset.len();

    // Stage 2: eight type-2 stage-1 pieces joined into the stage-2 base
    // shape, which exposes the two-glue site K2.
    let mut b2 = ScriptBuilder {
        plan: &plan,
        script: GuidedScript::default(),
    };
    let bases = base_ids(&mut b2);
    b2.stage2(2, &bases);
    let script2 = b2.script;

    // Stage 3: one stage-2 assembly per type, each completed with a
    // type-2 keystone and fill, joined into the stage-3 base shape.
    let mut b3 = ScriptBuilder {
        plan: &plan,
        script: GuidedScript::default(),
    };
    let bases = base_ids(&mut b3);
    let mut combinables = Vec::new();
    for t in 1..=8u8 {
        let s2 = b3.stage2(t, &bases);
        combinables.push(b3.keystone_and_fill(t, 2, 3 * B1, &s2, &format!("c2.{t}")));
    }
    let combinables: [String; 8] = combinables.try_into().expect("eight combinables");
    b3.join_stage(&combinables, 3 * B1, "s3");
    let script3 = b3.script;

    let mut expected_stage_sizes = BTreeMap::new();
    expected_stage_sizes.insert(2, carpet_base_shape(2).len());
    expected_stage_sizes.insert(3, carpet_base_shape(3).len());

    let mut stage_scripts = BTreeMap::new();
    stage_scripts.insert(2, script2);
    stage_scripts.insert(3, script3);

    ConstructionBundle {
        system: AssemblySystem::multi_handed(tileset, 2, 2),
        stage_scripts,
        metadata: ConstructionMetadata {
            tile_count,
            expected_stage_sizes,
            fractal: FractalKind::Carpet { scale: 3 },
            anchor: (0, 0),
        },
    }
}
