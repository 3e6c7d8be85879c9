//! Shared helpers for integration tests: independent brute-force
//! stability oracles, a derivation-enumeration oracle for producibility,
//! randomized assembly generation, and a corpus of micro systems.
//!
//! Not every test binary uses every helper.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hamsim_core::engine::piece_union_stable;
use hamsim_core::{
    candidate_translations, combine, explore, is_tau_stable, Assembly, AssemblySystem,
    ExplorationConfig, Point, Side, TileSet, TileType,
};

/// Facing-glue bond weight computed directly from the tile definitions,
/// independent of the library's bond-graph code: matching labels bond
/// with the glue strength, anything else contributes zero.
pub fn raw_bond(tileset: &TileSet, a: &str, b: &str, side: Side) -> u64 {
    let ta = tileset.get(a).expect("tile resolves");
    let tb = tileset.get(b).expect("tile resolves");
    match (ta.glue(side), tb.glue(side.opposite())) {
        (Some(ga), Some(gb)) if ga.label == gb.label && ga.strength == gb.strength => {
            u64::from(ga.strength)
        }
        _ => 0,
    }
}

/// Exhaustive 2-partition minimum cut of an assembly's bond graph.
/// Returns `None` for a singleton (no cut exists).
pub fn brute_min_cut(assembly: &Assembly, tileset: &TileSet) -> Option<u64> {
    let tiles: Vec<(Point, &str)> = assembly
        .tiles
        .iter()
        .map(|(&p, n)| (p, n.as_str()))
        .collect();
    let n = tiles.len();
    if n < 2 {
        return None;
    }
    assert!(n <= 20, "brute force limited to small assemblies");
    // Precompute weighted adjacency between tile indices.
    let index: BTreeMap<Point, usize> = tiles
        .iter()
        .enumerate()
        .map(|(i, &(p, _))| (p, i))
        .collect();
    let mut edges = Vec::new();
    for (i, &((x, y), name)) in tiles.iter().enumerate() {
        for side in [Side::East, Side::North] {
            let (dx, dy) = side.offset();
            if let Some(&j) = index.get(&(x + dx, y + dy)) {
                edges.push((i, j, raw_bond(tileset, name, tiles[j].1, side)));
            }
        }
    }
    // Tile 0 stays on one side; enumerate the other tiles' side choices.
    let mut best = u64::MAX;
    for mask in 1..(1u32 << (n - 1)) {
        let side_of = |i: usize| i > 0 && mask & (1 << (i - 1)) != 0;
        let cut: u64 = edges
            .iter()
            .filter(|&&(i, j, _)| side_of(i) != side_of(j))
            .map(|&(_, _, w)| w)
            .sum();
        best = best.min(cut);
    }
    Some(best)
}

/// Stability by exhaustive partition enumeration.
pub fn brute_stable(assembly: &Assembly, tileset: &TileSet, tau: u32) -> bool {
    match brute_min_cut(assembly, tileset) {
        None => true,
        Some(cut) => cut >= u64::from(tau),
    }
}

fn bounding_box(a: &Assembly) -> (Point, Point) {
    let xs: Vec<i64> = a.tiles.keys().map(|p| p.0).collect();
    let ys: Vec<i64> = a.tiles.keys().map(|p| p.1).collect();
    (
        (*xs.iter().min().unwrap(), *ys.iter().min().unwrap()),
        (*xs.iter().max().unwrap(), *ys.iter().max().unwrap()),
    )
}

/// Whether two disjoint assemblies share at least one unit-adjacent pair
/// of points (a necessary condition for a direct bond).
fn touches(a: &Assembly, b: &Assembly) -> bool {
    b.tiles.keys().any(|&(x, y)| {
        Side::ALL.iter().any(|s| {
            let (dx, dy) = s.offset();
            a.tiles.contains_key(&(x + dx, y + dy))
        })
    })
}

/// Every translation of `mover` that puts it disjoint from and touching
/// `anchored`, by scanning the full window of bounding-box contacts.
/// Deliberately brute force: no glue information is consulted.
pub fn all_contact_translations(anchored: &Assembly, mover: &Assembly) -> Vec<Point> {
    let ((ax0, ay0), (ax1, ay1)) = bounding_box(anchored);
    let ((bx0, by0), (bx1, by1)) = bounding_box(mover);
    let mut out = Vec::new();
    for vx in (ax0 - bx1 - 1)..=(ax1 - bx0 + 1) {
        for vy in (ay0 - by1 - 1)..=(ay1 - by0 + 1) {
            let moved = mover.translate((vx, vy));
            if anchored.disjoint(&moved) && touches(anchored, &moved) {
                out.push((vx, vy));
            }
        }
    }
    out
}

/// Brute-force fixed point of producibility under a size bound: start
/// from the singleton tiles and close under every stable union of up to
/// `hands` already-produced assemblies, enumerating placements by pure
/// window scan and deciding stability by exhaustive partition min-cut.
pub fn derivation_closure(system: &AssemblySystem, max_size: usize) -> BTreeSet<Assembly> {
    let tileset = &system.tileset;
    let mut known: BTreeSet<Assembly> = tileset
        .names()
        .map(|n| Assembly::singleton((0, 0), n).canonical_form())
        .collect();
    loop {
        let pool: Vec<Assembly> = known.iter().cloned().collect();
        let mut fresh: BTreeSet<Assembly> = BTreeSet::new();
        // Multisets of 2..=hands pool members, by non-decreasing index.
        let mut stack: Vec<Vec<usize>> = (0..pool.len()).map(|i| vec![i]).collect();
        while let Some(pick) = stack.pop() {
            if pick.len() >= 2 {
                extend_placements(&pool, &pick, system, max_size, &mut fresh);
            }
            if pick.len() < system.hands {
                let last = *pick.last().unwrap();
                for next in last..pool.len() {
                    let total: usize =
                        pick.iter().map(|&i| pool[i].len()).sum::<usize>() + pool[next].len();
                    if total <= max_size {
                        let mut longer = pick.clone();
                        longer.push(next);
                        stack.push(longer);
                    }
                }
            }
        }
        let before = known.len();
        known.extend(fresh);
        if known.len() == before {
            return known;
        }
    }
}

/// Enumerates all placements of the picked multiset (first piece
/// anchored, each later piece touching the union so far) and records
/// every stable union.
fn extend_placements(
    pool: &[Assembly],
    pick: &[usize],
    system: &AssemblySystem,
    max_size: usize,
    out: &mut BTreeSet<Assembly>,
) {
    let total: usize = pick.iter().map(|&i| pool[i].len()).sum();
    if total > max_size {
        return;
    }
    // Pieces must be allowed to take any role, so try every ordering of
    // the multiset (distinct orderings of indices suffice).
    let mut orders = Vec::new();
    permutations(
        pick,
        &mut Vec::new(),
        &mut vec![false; pick.len()],
        &mut orders,
    );
    orders.sort();
    orders.dedup();
    for order in orders {
        let first = pool[order[0]].clone();
        place_rest(&first, &order[1..], pool, system, out);
    }
}

fn permutations(
    items: &[usize],
    cur: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<usize>>,
) {
    if cur.len() == items.len() {
        out.push(cur.clone());
        return;
    }
    for i in 0..items.len() {
        if !used[i] {
            used[i] = true;
            cur.push(items[i]);
            permutations(items, cur, used, out);
            cur.pop();
            used[i] = false;
        }
    }
}

fn place_rest(
    union: &Assembly,
    rest: &[usize],
    pool: &[Assembly],
    system: &AssemblySystem,
    out: &mut BTreeSet<Assembly>,
) {
    if rest.is_empty() {
        if brute_stable(union, &system.tileset, system.tau) {
            out.insert(union.canonical_form());
        }
        return;
    }
    let piece = &pool[rest[0]];
    for v in all_contact_translations(union, piece) {
        place_rest(
            &union.union(&piece.translate(v)),
            &rest[1..],
            pool,
            system,
            out,
        );
    }
}

/// A randomized connected assembly plus the tile set that defines its
/// glues: every internal edge is independently matched (bonding), torn
/// (label mismatch), or bare.
pub fn random_case(rng: &mut ChaCha8Rng, case: usize) -> (Assembly, TileSet) {
    let n = rng.gen_range(1..=12);
    let mut points: Vec<Point> = vec![(0, 0)];
    while points.len() < n {
        let &(x, y) = &points[rng.gen_range(0..points.len())];
        let (dx, dy) = Side::ALL[rng.gen_range(0..4)].offset();
        let q = (x + dx, y + dy);
        if !points.contains(&q) {
            points.push(q);
        }
    }
    let mut tiles: Vec<TileType> = points
        .iter()
        .enumerate()
        .map(|(i, _)| TileType::new(format!("t{case}.{i}")))
        .collect();
    let mut edge = 0;
    for i in 0..points.len() {
        for side in [Side::East, Side::North] {
            let (dx, dy) = side.offset();
            let q = (points[i].0 + dx, points[i].1 + dy);
            if let Some(j) = points.iter().position(|&p| p == q) {
                edge += 1;
                match rng.gen_range(0..10) {
                    0..=5 => {
                        let s = rng.gen_range(1..=2);
                        tiles[i] = tiles[i].clone().with_glue(side, format!("g{edge}"), s);
                        tiles[j] =
                            tiles[j]
                                .clone()
                                .with_glue(side.opposite(), format!("g{edge}"), s);
                    }
                    6..=7 => {
                        tiles[i] = tiles[i].clone().with_glue(
                            side,
                            format!("ga{edge}"),
                            rng.gen_range(1..=2),
                        );
                        tiles[j] = tiles[j].clone().with_glue(
                            side.opposite(),
                            format!("gb{edge}"),
                            rng.gen_range(1..=2),
                        );
                    }
                    _ => {}
                }
            }
        }
    }
    let assembly = Assembly::new(
        points
            .iter()
            .enumerate()
            .map(|(i, &p)| (p, format!("t{case}.{i}"))),
    );
    (
        assembly,
        TileSet::new(tiles).expect("random set is consistent"),
    )
}

/// Stability verdicts must match the exhaustive 2-partition oracle on
/// `cases` randomized assemblies at every temperature 1..=3.
pub fn check_stability_oracle(cases: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for case in 0..cases {
        let (assembly, tileset) = random_case(&mut rng, case);
        for tau in 1..=3 {
            assert_eq!(
                is_tau_stable(&assembly, &tileset, tau).unwrap(),
                brute_stable(&assembly, &tileset, tau),
                "case {case} tau {tau}: {assembly:?}"
            );
        }
    }
}

/// The piece-level min-cut reduction must agree with the full tile-level
/// bond graph on every two-piece placement over the micro-system corpus,
/// and every combine result must pass the exhaustive stability check.
/// Returns the number of placements compared.
pub fn check_piece_reduction() -> usize {
    let mut checked = 0usize;
    for (name, system) in micro_systems() {
        let report = explore(&system, &ExplorationConfig::new(8)).expect("micro explore");
        let pool: Vec<Assembly> = report.assemblies.values().cloned().collect();
        for a in &pool {
            for b in &pool {
                if a.len() + b.len() > 16 {
                    continue;
                }
                for v in candidate_translations(a, b, &system.tileset).expect("translations") {
                    let moved = b.translate(v);
                    if !a.disjoint(&moved) {
                        continue;
                    }
                    let union = a.union(&moved);
                    let piece_verdict =
                        piece_union_stable(&[a.clone(), moved], &system.tileset, system.tau)
                            .expect("piece verdict");
                    let full_verdict =
                        is_tau_stable(&union, &system.tileset, system.tau).expect("full verdict");
                    assert_eq!(
                        piece_verdict, full_verdict,
                        "system {name}, pieces {a:?} + {b:?} at {v:?}"
                    );
                    checked += 1;
                }
            }
        }
        for a in &pool {
            for b in &pool {
                if a.len() + b.len() > 16 {
                    continue;
                }
                for c in combine(&[a.clone(), b.clone()], &system).unwrap_or_default() {
                    assert!(brute_stable(&c, &system.tileset, system.tau));
                }
            }
        }
    }
    checked
}

/// Saturated exploration must equal the brute-force derivation closure
/// on every micro system.
pub fn check_exploration_closure() {
    for (name, system) in micro_systems() {
        let report = explore(&system, &ExplorationConfig::new(8)).expect("micro explore");
        assert!(report.saturated, "system {name} must saturate");
        let explored: BTreeSet<Assembly> = report.assemblies.values().cloned().collect();
        let oracle = derivation_closure(&system, 8);
        assert_eq!(explored, oracle, "system {name} producible sets differ");
    }
}

/// The five micro systems used for exploration cross-checks: at most
/// four tile types each, chosen to exercise distinct derivation shapes.
pub fn micro_systems() -> Vec<(&'static str, AssemblySystem)> {
    let sys = |tiles: Vec<TileType>, tau, hands| {
        AssemblySystem::multi_handed(TileSet::new(tiles).expect("valid micro set"), tau, hands)
    };
    vec![
        // 1. A single strength-2 pair.
        (
            "pair",
            sys(
                vec![
                    TileType::new("A").with_glue(Side::East, "x", 2),
                    TileType::new("B").with_glue(Side::West, "x", 2),
                ],
                2,
                2,
            ),
        ),
        // 2. Cooperative trio: a strength-2 domino plus two tiles that
        // only stabilize when all three pieces close a loop.
        (
            "coop-trio",
            sys(
                vec![
                    TileType::new("D0")
                        .with_glue(Side::North, "i", 2)
                        .with_glue(Side::East, "a", 1),
                    TileType::new("D1")
                        .with_glue(Side::South, "i", 2)
                        .with_glue(Side::East, "b", 1),
                    TileType::new("P")
                        .with_glue(Side::West, "a", 1)
                        .with_glue(Side::North, "c", 1),
                    TileType::new("Q")
                        .with_glue(Side::West, "b", 1)
                        .with_glue(Side::South, "c", 1),
                ],
                2,
                3,
            ),
        ),
        // 3. Temperature-1 unbounded row grower.
        (
            "row",
            sys(
                vec![TileType::new("R").with_glue(Side::East, "x", 1).with_glue(
                    Side::West,
                    "x",
                    1,
                )],
                1,
                2,
            ),
        ),
        // 4. Strength-1 glues only at temperature 2: singletons forever.
        (
            "frozen",
            sys(
                vec![
                    TileType::new("S")
                        .with_glue(Side::East, "a", 1)
                        .with_glue(Side::North, "b", 1),
                    TileType::new("T")
                        .with_glue(Side::West, "a", 1)
                        .with_glue(Side::South, "b", 1),
                ],
                2,
                2,
            ),
        ),
        // 5. A three-link strength-2 tower with distinct rungs.
        (
            "tower",
            sys(
                vec![
                    TileType::new("L0").with_glue(Side::North, "g", 2),
                    TileType::new("L1")
                        .with_glue(Side::South, "g", 2)
                        .with_glue(Side::North, "h", 2),
                    TileType::new("L2").with_glue(Side::South, "h", 2),
                ],
                2,
                2,
            ),
        ),
    ]
}
