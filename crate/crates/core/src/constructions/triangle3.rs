//! 3-hand triangle assembler at scale 3.
//!
//! Stage products are built from nine hard-coded stage-1 pieces: one per
//! (edge colour, stamp) pair, where the edge colour names the piece's
//! pre-filled edge ('Y' right staircase, 'B' left staircase, 'R' top row)
//! and the stamp labels every outward-facing glue the piece exposes for
//! the next stage. Three pieces with matching stamps and one of each edge
//! colour join in a single three-handed step through three strength-1
//! bonds; mismatched stamps leave at least one piece bondless, so the
//! join is rejected. The joined base exposes a two-glue keystone site on
//! the edge named by its stamp. A keystone (split across two hands)
//! attaches there and seeds scale-free filler chains that tile that edge,
//! reproducing a stamped piece one stage up.
//!
//! Geometry, in points of the scale-3 triangle: stage i spans
//! x in [-w, w-1], y in [0, 2w-1] with w = 3 * 2^i. Every piece is its
//! stage footprint minus four strips that later stages fill: a width-1
//! left staircase, a width-1 right staircase (each with three connector
//! points dipping inward at every column jump), the top row minus its end
//! points, and the six-point apex row. Staircase connector points land on
//! apex-row holes of the sub-piece above each junction, so the same
//! filler tile types work at every scale.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::assembly::Point;
use crate::engine::{step_operand, tile_operand, AssemblySystem, GuidedScript};
use crate::fractals::{sierpinski_triangle, FractalKind};
use crate::tile::{Side, TileSet, TileType};

use super::{ConstructionBundle, ConstructionMetadata};

use Side::{East as E, North as N, South as S, West as W};

const COLORS: [char; 3] = ['Y', 'B', 'R'];

/// Point half-width of stage i.
fn width(i: u32) -> i64 {
    3 * (1i64 << i)
}

/// Right-edge staircase: one point column per pair of cell rows plus a
/// three-point connector dipping inward at each column jump.
fn right_edge(i: u32) -> BTreeSet<Point> {
    let mut out = BTreeSet::new();
    for m in 0..(1i64 << i) {
        for y in 6 * m..6 * m + 6 {
            out.insert((3 * m + 2, y));
        }
    }
    for m in 1..(1i64 << i) {
        for x in 3 * m - 1..=3 * m + 1 {
            out.insert((x, 6 * m));
        }
    }
    out
}

/// Mirror image of `right_edge` about the x = -1/2 axis.
fn left_edge(i: u32) -> BTreeSet<Point> {
    right_edge(i)
        .into_iter()
        .map(|(x, y)| (-1 - x, y))
        .collect()
}

/// Top row minus its two staircase end points.
fn top_edge(i: u32) -> BTreeSet<Point> {
    let w = width(i);
    (-w + 1..=w - 2).map(|x| (x, 2 * w - 1)).collect()
}

/// The six-point apex row; its interior points host the staircase
/// connectors of every enclosing stage, so they stay open until a
/// staircase fill of some later stage runs through them.
fn apex_row() -> BTreeSet<Point> {
    (-3..=2).map(|x| (x, 0)).collect()
}

/// Stage-1 footprint shared by all pieces: the stage shape minus both
/// staircases, the trimmed top row, and the apex row.
fn piece_base() -> BTreeSet<Point> {
    let mut pts: BTreeSet<Point> = sierpinski_triangle(1, 3).points;
    for p in left_edge(1)
        .into_iter()
        .chain(right_edge(1))
        .chain(top_edge(1))
        .chain(apex_row())
    {
        pts.remove(&p);
    }
    pts
}

/// Points a colour-`x` fill covers at stage i: the designated edge, with
/// staircase fills stopping one point short of the top row (that corner
/// belongs to the next stage's top edge).
fn fill_region(x: char, i: u32) -> BTreeSet<Point> {
    let w = width(i);
    let mut out = match x {
        'Y' => right_edge(i),
        'B' => left_edge(i),
        _ => top_edge(i),
    };
    if x == 'Y' {
        out.remove(&(w - 1, 2 * w - 1));
    }
    if x == 'B' {
        out.remove(&(-w, 2 * w - 1));
    }
    out
}

fn footprint(x: char) -> BTreeSet<Point> {
    let mut f = piece_base();
    f.extend(fill_region(x, 1));
    f
}

fn join_label(kind: &str, u: char) -> String {
    format!("{kind}.{u}")
}

fn site_label(edge: char, half: char) -> String {
    format!("K.{edge}.{half}")
}

/// Support glue offered downward above an apex-row or connector hole,
/// keyed by the hole's offset from the local apex origin (-2..=1).
fn bs_label(local: i64) -> String {
    format!("bs.{}", (b'a' + (local + 2) as u8) as char)
}

fn chain(edge: char, u: char, tag: &str) -> String {
    format!("f.{edge}.{u}.{tag}")
}

/// Downward support offered into the hole at `n`, if `n` is an apex-row
/// point or a staircase connector point of some junction.
fn bs_provider(n: Point) -> Option<String> {
    let (x, y) = n;
    if y == 0 && (-2..=1).contains(&x) {
        return Some(bs_label(x));
    }
    if y > 0 && y % 6 == 0 {
        let m = y / 6;
        if (3 * m - 1..=3 * m + 1).contains(&x) {
            return Some(bs_label(x - 3 * m));
        }
        if (-3 * m - 2..=-3 * m).contains(&x) {
            return Some(bs_label(x + 3 * m));
        }
    }
    None
}

/// Outward glue of a stage-1 base tile at `p` toward the open point `n`.
fn static_face(p: Point, d: Side) -> Option<String> {
    let (dx, dy) = d.offset();
    let n = (p.0 + dx, p.1 + dy);
    match d {
        Side::North if top_edge(1).contains(&n) => Some("ts".into()),
        Side::East if right_edge(1).contains(&n) => Some("rs".into()),
        Side::West if left_edge(1).contains(&n) => Some("ls".into()),
        Side::South => bs_provider(n),
        _ => None,
    }
}

/// Outward glue of a stage-1 fill tile: the join glues, the keystone-site
/// duty faces, and supports for the next stage's fills over the caps.
fn fill_special(x: char, u: char, p: Point, d: Side) -> Option<String> {
    let at = |q: Point, s: Side| p == q && d == s;
    match x {
        'Y' => {
            if at((2, 0), S) {
                Some(join_label("jBL", u))
            } else if at((5, 10), E) {
                Some(join_label("jLR", u))
            } else if at((5, 10), N) {
                Some(if u == 'R' {
                    site_label('R', 'a')
                } else {
                    "ts".into()
                })
            } else {
                None
            }
        }
        'B' => {
            if at((-3, 0), S) {
                Some(join_label("jBR", u))
            } else if at((-6, 10), W) {
                Some(join_label("jLR", u))
            } else if at((-6, 10), N) {
                Some(if u == 'R' {
                    site_label('R', 'b')
                } else {
                    "ts".into()
                })
            } else {
                None
            }
        }
        _ => {
            if at((-4, 11), N) {
                Some(join_label("jBL", u))
            } else if at((3, 11), N) {
                Some(join_label("jBR", u))
            } else if at((-5, 11), W) {
                Some(if u == 'B' {
                    site_label('B', 'a')
                } else {
                    "ls".into()
                })
            } else if at((4, 11), E) {
                Some(if u == 'Y' {
                    site_label('Y', 'a')
                } else {
                    "rs".into()
                })
            } else {
                None
            }
        }
    }
}

fn piece_name(x: char, u: char, p: Point) -> String {
    format!("p{x}{u}.{}.{}", p.0, p.1)
}

/// All tiles of the stage-1 piece with edge colour `x` and stamp `u`,
/// rigidly meshed by unique strength-2 glues on every internal face.
fn piece_tiles(x: char, u: char) -> Vec<(Point, TileType)> {
    let fill = fill_region(x, 1);
    let fp = footprint(x);
    let mut out = Vec::new();
    for &p in &fp {
        let mut tile = TileType::new(piece_name(x, u, p));
        for d in Side::ALL {
            let (dx, dy) = d.offset();
            let n = (p.0 + dx, p.1 + dy);
            if fp.contains(&n) {
                let (ex, ey, o) = match d {
                    Side::North => (p.0, p.1, 'v'),
                    Side::South => (n.0, n.1, 'v'),
                    Side::East => (p.0, p.1, 'h'),
                    Side::West => (n.0, n.1, 'h'),
                };
                tile = tile.with_glue(d, format!("m{x}{u}.{ex}.{ey}.{o}"), 2);
            } else if fill.contains(&p) {
                if let Some(lbl) = fill_special(x, u, p, d) {
                    tile = tile.with_glue(d, lbl, 1);
                }
            } else if let Some(lbl) = static_face(p, d) {
                tile = tile.with_glue(d, lbl, 1);
            }
        }
        out.push((p, tile));
    }
    out
}

fn keystone_name(edge: char, u: char, half: u8) -> String {
    format!("k{edge}{u}.{half}")
}

/// The two keystone tiles for the site on edge `edge`, stamping `u`.
fn keystone_tiles(edge: char, u: char) -> [TileType; 2] {
    let ks = format!("ks.{edge}.{u}");
    match edge {
        'Y' => [
            TileType::new(keystone_name(edge, u, 1))
                .with_glue(W, site_label('Y', 'a'), 1)
                .with_glue(N, ks.clone(), 2)
                .with_glue(S, chain('Y', u, "dn"), 1),
            TileType::new(keystone_name(edge, u, 2))
                .with_glue(S, ks, 2)
                .with_glue(N, bs_label(-1), 1)
                .with_glue(E, chain('Y', u, "u1"), 1),
        ],
        'B' => [
            TileType::new(keystone_name(edge, u, 1))
                .with_glue(E, site_label('B', 'a'), 1)
                .with_glue(N, ks.clone(), 2)
                .with_glue(S, chain('B', u, "dn"), 1),
            TileType::new(keystone_name(edge, u, 2))
                .with_glue(S, ks, 2)
                .with_glue(N, bs_label(0), 1)
                .with_glue(W, chain('B', u, "u1"), 1),
        ],
        _ => [
            TileType::new(keystone_name(edge, u, 1))
                .with_glue(S, site_label('R', 'a'), 1)
                .with_glue(E, ks.clone(), 2)
                .with_glue(W, chain('R', u, "w"), 1),
            TileType::new(keystone_name(edge, u, 2))
                .with_glue(S, site_label('R', 'b'), 1)
                .with_glue(W, ks, 2)
                .with_glue(E, chain('R', u, "e"), 1),
        ],
    }
}

fn walk_name(edge: char, u: char, tag: &str) -> String {
    format!("w{edge}{u}.{tag}")
}

/// Scale-free filler tiles for a staircase edge ('Y' right, 'B' left).
/// The down chain runs from the keystone to the apex cap (which carries
/// the next join glue); the up chain runs to the top cap (join glue plus
/// keystone-site duty for the stage above).
fn staircase_tiles(edge: char, u: char) -> Vec<TileType> {
    let flip = edge == 'B';
    let sup = if flip { "ls" } else { "rs" };
    let (fe, fw) = if flip { (W, E) } else { (E, W) };
    let loc = |l: i64| if flip { -1 - l } else { l };
    let c = |tag: &str| chain(edge, u, tag);
    let t = |tag: &str| TileType::new(walk_name(edge, u, tag));
    let apex_join = if flip { "jBR" } else { "jBL" };
    let cap_duty = if u == 'R' {
        site_label('R', if flip { 'b' } else { 'a' })
    } else {
        "ts".into()
    };
    vec![
        t("dnrun")
            .with_glue(N, c("dn"), 1)
            .with_glue(S, c("dn"), 1)
            .with_glue(fw, sup, 1),
        t("dnlead")
            .with_glue(N, c("dn"), 1)
            .with_glue(fw, c("p1"), 1),
        t("dnpart")
            .with_glue(fe, c("p1"), 1)
            .with_glue(N, bs_label(loc(1)), 1)
            .with_glue(fw, c("c1"), 1),
        t("dnc")
            .with_glue(fe, c("c1"), 1)
            .with_glue(N, bs_label(loc(0)), 1)
            .with_glue(fw, c("c2"), 1),
        t("dnb")
            .with_glue(fe, c("c2"), 1)
            .with_glue(N, bs_label(loc(-1)), 1)
            .with_glue(S, c("dn"), 1),
        t("aplead")
            .with_glue(N, c("dn"), 1)
            .with_glue(fw, sup, 1)
            .with_glue(S, c("ap"), 2),
        t("apcap")
            .with_glue(N, c("ap"), 2)
            .with_glue(S, join_label(apex_join, u), 1),
        t("upb")
            .with_glue(S, c("un"), 1)
            .with_glue(N, bs_label(loc(-1)), 1)
            .with_glue(fe, c("u1"), 1),
        t("upc")
            .with_glue(fw, c("u1"), 1)
            .with_glue(N, bs_label(loc(0)), 1)
            .with_glue(fe, c("u2"), 1),
        t("upd")
            .with_glue(fw, c("u2"), 1)
            .with_glue(N, bs_label(loc(1)), 1)
            .with_glue(fe, c("u3"), 1),
        t("tlead")
            .with_glue(fw, c("u3"), 1)
            .with_glue(N, c("tp"), 1),
        t("tpart")
            .with_glue(S, c("tp"), 1)
            .with_glue(fw, sup, 1)
            .with_glue(N, c("un"), 1),
        t("uprun")
            .with_glue(S, c("un"), 1)
            .with_glue(N, c("un"), 1)
            .with_glue(fw, sup, 1),
        t("upcap")
            .with_glue(S, c("un"), 1)
            .with_glue(fw, sup, 1)
            .with_glue(fe, join_label("jLR", u), 1)
            .with_glue(N, cap_duty, 1),
    ]
}

/// Scale-free filler tiles for the top row, stamped `u`: two straight
/// chains from the keystone to end caps that take over the staircase
/// supports and, on a matching stamp, the lateral keystone-site duty.
fn top_tiles(u: char) -> Vec<TileType> {
    let c = |tag: &str| chain('R', u, tag);
    let t = |tag: &str| TileType::new(walk_name('R', u, tag));
    vec![
        t("wrun")
            .with_glue(E, c("w"), 1)
            .with_glue(W, c("w"), 1)
            .with_glue(S, "ts", 1),
        t("wcar")
            .with_glue(E, c("w"), 1)
            .with_glue(W, c("w"), 1)
            .with_glue(S, "ts", 1)
            .with_glue(N, join_label("jBL", u), 1),
        t("wcap")
            .with_glue(E, c("w"), 1)
            .with_glue(S, "ts", 1)
            .with_glue(
                W,
                if u == 'B' {
                    site_label('B', 'a')
                } else {
                    "ls".into()
                },
                1,
            ),
        t("erun")
            .with_glue(W, c("e"), 1)
            .with_glue(E, c("e"), 1)
            .with_glue(S, "ts", 1),
        t("ecar")
            .with_glue(W, c("e"), 1)
            .with_glue(E, c("e"), 1)
            .with_glue(S, "ts", 1)
            .with_glue(N, join_label("jBR", u), 1),
        t("ecap")
            .with_glue(W, c("e"), 1)
            .with_glue(S, "ts", 1)
            .with_glue(
                E,
                if u == 'Y' {
                    site_label('Y', 'a')
                } else {
                    "rs".into()
                },
                1,
            ),
    ]
}

/// Keystone tile positions for a stage-i base whose site sits on `edge`.
fn keystone_pos(edge: char, i: u32) -> (Point, Point) {
    let w = width(i);
    let m = 1i64 << (i - 1);
    match edge {
        'Y' => ((3 * m - 1, 6 * m - 1), (3 * m - 1, 6 * m)),
        'B' => ((-3 * m, 6 * m - 1), (-3 * m, 6 * m)),
        _ => ((-1, 2 * w - 1), (0, 2 * w - 1)),
    }
}

/// One filler attachment: a single tile, a corner-plus-fitting pair
/// placed with three hands, or a pre-joined strength-2 pair.
enum Chunk {
    One(Point, String),
    Two {
        a: (Point, String),
        b: (Point, String),
        prebuilt: bool,
    },
}

/// Attachment sequence filling a staircase edge of a stage-i base, keyed
/// off the keystone at the middle junction: down to the apex cap, then
/// up to the top cap.
fn staircase_walk(edge: char, u: char, i: u32) -> Vec<Chunk> {
    let flip = edge == 'B';
    let fx = |x: i64| if flip { -1 - x } else { x };
    let nm = |tag: &str| walk_name(edge, u, tag);
    let mstar = 1i64 << (i - 1);
    let runs = 1i64 << i;
    let mut out = Vec::new();
    for m in (0..mstar).rev() {
        let col = 3 * m + 2;
        let top = if m == mstar - 1 {
            6 * mstar - 2
        } else {
            6 * m + 5
        };
        let stop = if m > 0 { 6 * m + 1 } else { 2 };
        for y in (stop..=top).rev() {
            out.push(Chunk::One((fx(col), y), nm("dnrun")));
        }
        if m > 0 {
            out.push(Chunk::Two {
                a: ((fx(col), 6 * m), nm("dnlead")),
                b: ((fx(col - 1), 6 * m), nm("dnpart")),
                prebuilt: false,
            });
            out.push(Chunk::One((fx(3 * m), 6 * m), nm("dnc")));
            out.push(Chunk::One((fx(3 * m - 1), 6 * m), nm("dnb")));
        } else {
            out.push(Chunk::Two {
                a: ((fx(2), 1), nm("aplead")),
                b: ((fx(2), 0), nm("apcap")),
                prebuilt: true,
            });
        }
    }
    out.push(Chunk::One((fx(3 * mstar), 6 * mstar), nm("upc")));
    out.push(Chunk::One((fx(3 * mstar + 1), 6 * mstar), nm("upd")));
    for m in mstar..runs {
        let col = 3 * m + 2;
        out.push(Chunk::Two {
            a: ((fx(col), 6 * m), nm("tlead")),
            b: ((fx(col), 6 * m + 1), nm("tpart")),
            prebuilt: false,
        });
        if m == runs - 1 {
            for y in 6 * m + 2..=6 * m + 3 {
                out.push(Chunk::One((fx(col), y), nm("uprun")));
            }
            out.push(Chunk::One((fx(col), 6 * m + 4), nm("upcap")));
        } else {
            for y in 6 * m + 2..=6 * m + 5 {
                out.push(Chunk::One((fx(col), y), nm("uprun")));
            }
            out.push(Chunk::One((fx(col), 6 * m + 6), nm("upb")));
            out.push(Chunk::One((fx(col + 1), 6 * m + 6), nm("upc")));
            out.push(Chunk::One((fx(col + 2), 6 * m + 6), nm("upd")));
        }
    }
    out
}

/// Attachment sequence filling the top row of a stage-i base.
fn top_walk(u: char, i: u32) -> Vec<Chunk> {
    let w = width(i);
    let y = 2 * w - 1;
    let nm = |tag: &str| walk_name('R', u, tag);
    let mut out = Vec::new();
    for x in (-w + 3..=-2).rev() {
        out.push(Chunk::One((x, y), nm("wrun")));
    }
    out.push(Chunk::One((-w + 2, y), nm("wcar")));
    out.push(Chunk::One((-w + 1, y), nm("wcap")));
    for x in 1..=w - 4 {
        out.push(Chunk::One((x, y), nm("erun")));
    }
    out.push(Chunk::One((w - 3, y), nm("ecar")));
    out.push(Chunk::One((w - 2, y), nm("ecap")));
    out
}

#[derive(Default)]
struct Builder {
    script: GuidedScript,
}

impl Builder {
    /// Tile-by-tile assembly of one stage-1 piece along its rigid mesh.
    fn piece(&mut self, x: char, u: char, prefix: &str) -> String {
        let fp = footprint(x);
        let start = *fp.iter().next().expect("piece footprint is non-empty");
        let mut seen: BTreeSet<Point> = [start].into_iter().collect();
        let mut order = vec![start];
        let mut queue: VecDeque<Point> = [start].into_iter().collect();
        while let Some(p) = queue.pop_front() {
            for d in Side::ALL {
                let (dx, dy) = d.offset();
                let n = (p.0 + dx, p.1 + dy);
                if fp.contains(&n) && seen.insert(n) {
                    order.push(n);
                    queue.push_back(n);
                }
            }
        }
        let mut cur = self.script.push(
            format!("{prefix}.0"),
            vec![tile_operand(piece_name(x, u, start), start)],
        );
        for (k, &p) in order.iter().enumerate().skip(1) {
            cur = self.script.push(
                format!("{prefix}.{k}"),
                vec![
                    step_operand(cur, (0, 0)),
                    tile_operand(piece_name(x, u, p), p),
                ],
            );
        }
        cur
    }

    /// Three-handed join of one piece of each edge colour, all stamped
    /// `u`, into the stage-2 base coloured `u`.
    fn base2(&mut self, u: char, prefix: &str) -> String {
        let l = self.piece('Y', u, &format!("{prefix}.L"));
        let r = self.piece('B', u, &format!("{prefix}.R"));
        let b = self.piece('R', u, &format!("{prefix}.B"));
        self.script.push(
            format!("{prefix}.join"),
            vec![
                step_operand(b, (0, 0)),
                step_operand(l, (-6, 12)),
                step_operand(r, (6, 12)),
            ],
        )
    }

    /// Keystone attachment (two extra hands) followed by the filler walk
    /// along the base's designated edge.
    fn keystone_fill(&mut self, base: String, edge: char, u: char, i: u32, prefix: &str) -> String {
        let (p1, p2) = keystone_pos(edge, i);
        let mut cur = self.script.push(
            format!("{prefix}.ks"),
            vec![
                step_operand(base, (0, 0)),
                tile_operand(keystone_name(edge, u, 1), p1),
                tile_operand(keystone_name(edge, u, 2), p2),
            ],
        );
        let chunks = if edge == 'R' {
            top_walk(u, i)
        } else {
            staircase_walk(edge, u, i)
        };
        for (k, ch) in chunks.into_iter().enumerate() {
            cur = match ch {
                Chunk::One(p, name) => self.script.push(
                    format!("{prefix}.f{k}"),
                    vec![step_operand(cur, (0, 0)), tile_operand(name, p)],
                ),
                Chunk::Two {
                    a,
                    b,
                    prebuilt: true,
                } => {
                    let pair = self.script.push(
                        format!("{prefix}.f{k}p"),
                        vec![tile_operand(a.1, a.0), tile_operand(b.1, b.0)],
                    );
                    self.script.push(
                        format!("{prefix}.f{k}"),
                        vec![step_operand(cur, (0, 0)), step_operand(pair, (0, 0))],
                    )
                }
                Chunk::Two {
                    a,
                    b,
                    prebuilt: false,
                } => self.script.push(
                    format!("{prefix}.f{k}"),
                    vec![
                        step_operand(cur, (0, 0)),
                        tile_operand(a.1, a.0),
                        tile_operand(b.1, b.0),
                    ],
                ),
            };
        }
        cur
    }

    /// Full stage-2 combinable: base coloured `x`, keystone stamp `u`.
    fn combinable2(&mut self, x: char, u: char, prefix: &str) -> String {
        let base = self.base2(x, &format!("{prefix}.b"));
        self.keystone_fill(base, x, u, 2, prefix)
    }
}

fn stage2_script() -> GuidedScript {
    let mut b = Builder::default();
    b.combinable2('R', 'R', "s2");
    b.script
}

fn stage3_script() -> GuidedScript {
    let mut b = Builder::default();
    let cy = b.combinable2('Y', 'R', "s3.L");
    let cb = b.combinable2('B', 'R', "s3.R");
    let cr = b.combinable2('R', 'R', "s3.B");
    let join = b.script.push(
        "s3.join",
        vec![
            step_operand(cr, (0, 0)),
            step_operand(cy, (-12, 24)),
            step_operand(cb, (12, 24)),
        ],
    );
    b.keystone_fill(join, 'R', 'R', 3, "s3");
    b.script
}

/// A stage-2 join whose right piece carries a mismatched stamp; the
/// final step must be rejected as unstable.
pub fn triangle_mixed_keystone_script() -> GuidedScript {
    let mut b = Builder::default();
    let l = b.piece('Y', 'R', "mx.L");
    let r = b.piece('B', 'B', "mx.R");
    let bb = b.piece('R', 'R', "mx.B");
    b.script.push(
        "mx.join",
        vec![
            step_operand(bb, (0, 0)),
            step_operand(l, (-6, 12)),
            step_operand(r, (6, 12)),
        ],
    );
    b.script
}

/// Expected point set of the scripted stage-2 combinable coloured `x`.
fn combinable2_points(x: char) -> BTreeSet<Point> {
    let mut pts = BTreeSet::new();
    for (fp, off) in [
        (footprint('Y'), (-6i64, 12i64)),
        (footprint('B'), (6, 12)),
        (footprint('R'), (0, 0)),
    ] {
        pts.extend(fp.into_iter().map(|(px, py)| (px + off.0, py + off.1)));
    }
    pts.extend(fill_region(x, 2));
    pts
}

/// Expected point set of the scripted stage-3 product.
fn stage3_points() -> BTreeSet<Point> {
    let mut pts = BTreeSet::new();
    for (set, off) in [
        (combinable2_points('Y'), (-12i64, 24i64)),
        (combinable2_points('B'), (12, 24)),
        (combinable2_points('R'), (0, 0)),
    ] {
        pts.extend(set.into_iter().map(|(px, py)| (px + off.0, py + off.1)));
    }
    pts.extend(fill_region('R', 3));
    pts
}

/// Builds the 3-hand triangle assembler: temperature 2, scale 3, with
/// guided scripts for the stage-2 and stage-3 products.
pub fn build_triangle_3ham() -> ConstructionBundle {
    let mut tiles = Vec::new();
    for &x in &COLORS {
        for &u in &COLORS {
            tiles.extend(piece_tiles(x, u).into_iter().map(|(_, t)| t));
        }
    }
    for &edge in &COLORS {
        for &u in &COLORS {
            tiles.extend(keystone_tiles(edge, u));
        }
    }
    for &u in &COLORS {
        tiles.extend(staircase_tiles('Y', u));
        tiles.extend(staircase_tiles('B', u));
        tiles.extend(top_tiles(u));
    }
    let tileset = TileSet::new(tiles).expect("triangle tile set is consistent");
    let system = AssemblySystem::multi_handed(tileset, 2, 3);
    let tile_count = system.tileset.len();
    let stage_scripts = BTreeMap::from([(2u32, stage2_script()), (3u32, stage3_script())]);
    let metadata = ConstructionMetadata {
        tile_count,
        expected_stage_sizes: BTreeMap::from([
            (2u32, combinable2_points('R').len()),
            (3u32, stage3_points().len()),
        ]),
        fractal: FractalKind::Triangle { scale: 3 },
        anchor: (0, 0),
    };
    ConstructionBundle {
        system,
        stage_scripts,
        metadata,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::Shape;
    use crate::engine::guided_assemble;
    use crate::error::Error;
    use crate::verify::within_fractal;

    #[test]
    fn tile_count_within_budget() {
        let bundle = build_triangle_3ham();
        let n = bundle.metadata.tile_count;
        assert!((792..=1188).contains(&n), "tile count {n} out of range");
    }

    #[test]
    fn stage2_product_matches_expected_points() {
        let bundle = build_triangle_3ham();
        let a = guided_assemble(&bundle.system, &bundle.stage_scripts[&2])
            .expect("stage-2 script assembles");
        assert_eq!(a.len(), bundle.metadata.expected_stage_sizes[&2]);
        assert_eq!(a.shape(), Shape::new(combinable2_points('R')));
        assert!(within_fractal(
            &a,
            bundle.metadata.fractal,
            bundle.metadata.anchor
        ));
    }

    #[test]
    fn stage3_product_matches_expected_points() {
        let bundle = build_triangle_3ham();
        let a = guided_assemble(&bundle.system, &bundle.stage_scripts[&3])
            .expect("stage-3 script assembles");
        assert_eq!(a.len(), bundle.metadata.expected_stage_sizes[&3]);
        assert_eq!(a.shape(), Shape::new(stage3_points()));
        assert!(within_fractal(
            &a,
            bundle.metadata.fractal,
            bundle.metadata.anchor
        ));
    }

    #[test]
    fn mixed_keystone_join_is_rejected() {
        let bundle = build_triangle_3ham();
        let script = triangle_mixed_keystone_script();
        match guided_assemble(&bundle.system, &script) {
            Err(Error::StepUnstable { .. }) => {}
            other => panic!("expected unstable join, got {other:?}"),
        }
    }

    #[test]
    fn keystone_needs_a_completed_base() {
        let bundle = build_triangle_3ham();
        let mut b = Builder::default();
        let lone = b.piece('Y', 'R', "pk");
        b.script.push(
            "pk.ks",
            vec![
                step_operand(lone, (0, 0)),
                tile_operand(keystone_name('R', 'R', 1), (5, 11)),
                tile_operand(keystone_name('R', 'R', 2), (6, 11)),
            ],
        );
        match guided_assemble(&bundle.system, &b.script) {
            Err(Error::StepUnstable { .. }) => {}
            other => panic!("expected unstable keystone attachment, got {other:?}"),
        }
    }
}
