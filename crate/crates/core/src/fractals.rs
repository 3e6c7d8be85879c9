//! Exact generators and membership oracles for the discrete Sierpinski
//! triangle and carpet, choke edge sets, and the point-landing check.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::assembly::{Point, Shape};
use crate::error::{Error, Result};

/// Which fractal a check targets, together with its scale factor c >= 1
/// (every fractal point becomes a c x c block with corner c*p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FractalKind {
    Triangle { scale: u32 },
    Carpet { scale: u32 },
}

impl FractalKind {
    pub fn scale(self) -> u32 {
        match self {
            FractalKind::Triangle { scale } | FractalKind::Carpet { scale } => scale,
        }
    }

    pub fn contains(self, p: Point) -> bool {
        match self {
            FractalKind::Triangle { scale } => in_triangle(p, scale),
            FractalKind::Carpet { scale } => in_carpet(p, scale),
        }
    }

    pub fn stage(self, i: u32) -> Shape {
        match self {
            FractalKind::Triangle { scale } => sierpinski_triangle(i, scale),
            FractalKind::Carpet { scale } => sierpinski_carpet(i, scale),
        }
    }
}

/// An unordered pair of lattice points at unit distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeEdge(pub Point, pub Point);

impl LatticeEdge {
    pub fn new(a: Point, b: Point) -> Self {
        let d = ((a.0 - b.0).abs(), (a.1 - b.1).abs());
        debug_assert!(
            d == (1, 0) || d == (0, 1),
            "endpoints must be unit-distance"
        );
        if a <= b {
            LatticeEdge(a, b)
        } else {
            LatticeEdge(b, a)
        }
    }
}

fn scale_shape(cells: &BTreeSet<Point>, c: u32) -> Shape {
    let c = i64::from(c);
    let mut points = BTreeSet::new();
    for &(x, y) in cells {
        for dx in 0..c {
            for dy in 0..c {
                points.insert((c * x + dx, c * y + dy));
            }
        }
    }
    Shape { points }
}

fn triangle_cells(i: u32) -> BTreeSet<Point> {
    let mut cells: BTreeSet<Point> = [(0, 0), (-1, 0), (0, 1), (-1, 1)].into_iter().collect();
    for level in 0..i {
        let s = 1i64 << level;
        let mut next = cells.clone();
        for &(x, y) in &cells {
            next.insert((x + s, y + 2 * s));
            next.insert((x - s, y + 2 * s));
        }
        cells = next;
    }
    cells
}

/// Stage i of the discrete Sierpinski triangle at scale c.
pub fn sierpinski_triangle(i: u32, c: u32) -> Shape {
    scale_shape(&triangle_cells(i), c)
}

const CARPET_OFFSETS: [Point; 8] = [
    (0, 0),
    (1, 0),
    (2, 0),
    (0, 1),
    (2, 1),
    (0, 2),
    (1, 2),
    (2, 2),
];

fn carpet_cells(i: u32) -> BTreeSet<Point> {
    let mut cells: BTreeSet<Point> = [(0, 0)].into_iter().collect();
    for level in 0..i {
        let s = 3i64.pow(level);
        let mut next = BTreeSet::new();
        for &(vx, vy) in &CARPET_OFFSETS {
            for &(x, y) in &cells {
                next.insert((x + s * vx, y + s * vy));
            }
        }
        cells = next;
    }
    cells
}

/// Stage i of the discrete Sierpinski carpet at scale c.
pub fn sierpinski_carpet(i: u32, c: u32) -> Shape {
    scale_shape(&carpet_cells(i), c)
}

/// Membership of a scale-1 cell in the infinite triangle S_infinity,
/// by recursive descent on the three disjoint copy bounding boxes:
/// stage i spans x in [-2^i, 2^i - 1], y in [0, 2^(i+1) - 1].
fn triangle_cell_member(p: Point) -> bool {
    let (x, y) = p;
    if y < 0 {
        return false;
    }
    // Smallest stage whose bounding box contains p (membership
    // stabilizes because S_i is a subset of S_{i+1}).
    let mut i = 0u32;
    while x < -(1i64 << i) || x > (1i64 << i) - 1 || y > (1i64 << (i + 1)) - 1 {
        i += 1;
        if i > 62 {
            return false;
        }
    }
    triangle_stage_member(p, i)
}

fn triangle_stage_member(p: Point, i: u32) -> bool {
    let (x, y) = p;
    if i == 0 {
        return (-1..=0).contains(&x) && (0..=1).contains(&y);
    }
    let s = 1i64 << (i - 1);
    if y < 2 * s {
        // Base copy region; the copies start at y = 2^i.
        triangle_stage_member(p, i - 1)
    } else if x < 0 {
        triangle_stage_member((x + s, y - 2 * s), i - 1)
    } else {
        triangle_stage_member((x - s, y - 2 * s), i - 1)
    }
}

/// Membership of a scale-1 cell in the infinite carpet C_infinity:
/// no base-3 digit position may have digit 1 in both coordinates.
fn carpet_cell_member(p: Point) -> bool {
    let (mut x, mut y) = p;
    if x < 0 || y < 0 {
        return false;
    }
    while x > 0 || y > 0 {
        if x % 3 == 1 && y % 3 == 1 {
            return false;
        }
        x /= 3;
        y /= 3;
    }
    true
}

fn to_cell(p: Point, c: u32) -> Point {
    let c = i64::from(c);
    (p.0.div_euclid(c), p.1.div_euclid(c))
}

/// True iff p lies in the scale-c infinite Sierpinski triangle.
pub fn in_triangle(p: Point, c: u32) -> bool {
    triangle_cell_member(to_cell(p, c))
}

/// True iff p lies in the scale-c infinite Sierpinski carpet.
pub fn in_carpet(p: Point, c: u32) -> bool {
    carpet_cell_member(to_cell(p, c))
}

/// Which translated copy a choke set connects the stage to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChokeSide {
    Left,
    Right,
}

/// The unit lattice edges connecting the scale-c stage-i triangle to its
/// translated copy at (-c*2^i, c*2^(i+1)) (left) or (c*2^i, c*2^(i+1))
/// (right). There are exactly c of them.
pub fn choke_edges(i: u32, c: u32, side: ChokeSide) -> BTreeSet<LatticeEdge> {
    let stage = sierpinski_triangle(i, c);
    let shift = i64::from(c) * (1i64 << i);
    let v = match side {
        ChokeSide::Left => (-shift, 2 * shift),
        ChokeSide::Right => (shift, 2 * shift),
    };
    let copy = stage.translate(v);
    let mut edges = BTreeSet::new();
    for &p in &stage.points {
        for q in [
            (p.0 + 1, p.1),
            (p.0 - 1, p.1),
            (p.0, p.1 + 1),
            (p.0, p.1 - 1),
        ] {
            if copy.contains(q) && !stage.contains(q) {
                edges.insert(LatticeEdge::new(p, q));
            }
        }
    }
    edges
}

/// Brute-force check of the point-landing disjunction: with
/// v = (c*2^j - c*2^i, c*2^(j+1) - c*2^(i+1)), for every
/// p_y in [c*2^(k+1), c*2^(k+1) + 2c - 1], the translated points
/// (-1, p_y) + v and (0, p_y) + v are not both in the scale-c infinite
/// triangle. Requires k, j > i >= 1.
pub fn pointlanding_holds(c: u32, i: u32, j: u32, k: u32) -> Result<bool> {
    if i < 1 || j <= i || k <= i {
        return Err(Error::PreconditionViolated(format!(
            "pointlanding requires k, j > i >= 1; got c={c}, i={i}, j={j}, k={k}"
        )));
    }
    let cc = i64::from(c);
    let v = (
        cc * (1i64 << j) - cc * (1i64 << i),
        cc * (1i64 << (j + 1)) - cc * (1i64 << (i + 1)),
    );
    let y0 = cc * (1i64 << (k + 1));
    for p_y in y0..y0 + 2 * cc {
        let left = (-1 + v.0, p_y + v.1);
        let right = (v.0, p_y + v.1);
        if in_triangle(left, c) && in_triangle(right, c) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_stage_zero() {
        let s0 = sierpinski_triangle(0, 1);
        let expect: BTreeSet<Point> = [(0, 0), (-1, 0), (0, 1), (-1, 1)].into_iter().collect();
        assert_eq!(s0.points, expect);
    }

    #[test]
    fn triangle_stage_one_expansion() {
        let s1 = sierpinski_triangle(1, 1);
        let s0 = sierpinski_triangle(0, 1);
        let expect = s0
            .union(&s0.translate((1, 2)))
            .union(&s0.translate((-1, 2)));
        assert_eq!(s1, expect);
        assert_eq!(s1.len(), 12);
    }

    #[test]
    fn triangle_cardinalities() {
        for i in 0..=8 {
            assert_eq!(
                sierpinski_triangle(i, 1).len(),
                4 * 3usize.pow(i),
                "stage {i}"
            );
        }
    }

    #[test]
    fn triangle_self_similarity() {
        for c in 1..=3u32 {
            for i in 0..=4u32 {
                let si = sierpinski_triangle(i, c);
                let shift = i64::from(c) * (1i64 << i);
                let expect = si
                    .union(&si.translate((shift, 2 * shift)))
                    .union(&si.translate((-shift, 2 * shift)));
                assert_eq!(sierpinski_triangle(i + 1, c), expect, "c={c} i={i}");
            }
        }
    }

    #[test]
    fn carpet_stage_one() {
        let c1 = sierpinski_carpet(1, 1);
        assert_eq!(c1.len(), 8);
        assert!(!c1.contains((1, 1)));
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(c1.contains((x, y)), (x, y) != (1, 1));
            }
        }
        assert_eq!(
            sierpinski_carpet(0, 1).points,
            [(0, 0)].into_iter().collect()
        );
    }

    #[test]
    fn carpet_cardinalities() {
        for i in 0..=6 {
            assert_eq!(sierpinski_carpet(i, 1).len(), 8usize.pow(i), "stage {i}");
        }
    }

    #[test]
    fn scaling_multiplies_cardinality() {
        for c in 1..=3u32 {
            for i in 0..=3u32 {
                assert_eq!(
                    sierpinski_triangle(i, c).len(),
                    (c * c) as usize * sierpinski_triangle(i, 1).len()
                );
                assert_eq!(
                    sierpinski_carpet(i, c).len(),
                    (c * c) as usize * sierpinski_carpet(i, 1).len()
                );
            }
        }
    }

    #[test]
    fn nesting() {
        for c in 1..=2u32 {
            for i in 0..=4u32 {
                assert!(sierpinski_triangle(i, c).is_subset(&sierpinski_triangle(i + 1, c)));
                assert!(sierpinski_carpet(i, c).is_subset(&sierpinski_carpet(i + 1, c)));
            }
        }
    }

    #[test]
    fn membership_matches_materialized_stages() {
        for c in 1..=3u32 {
            let cc = i64::from(c);
            let tri = sierpinski_triangle(6, c);
            // Triangle stage-6 bounding box at scale c.
            let (xmin, xmax) = (-cc * 64, cc * 64 - 1);
            let (ymin, ymax) = (0, cc * 128 - 1);
            // Membership is the infinite-shape predicate, so it may accept
            // points outside the stage box that belong to later stages; the
            // comparison against a materialized stage is only valid inside
            // that stage's box.
            //
            // Full scan is too slow at c=3; sample a lattice-stride grid.
            let stride = i64::from(c * 2 + 1);
            for x in (xmin..=xmax).step_by(stride as usize) {
                for y in (ymin..=ymax).step_by(stride as usize) {
                    assert_eq!(
                        in_triangle((x, y), c),
                        tri.contains((x, y)),
                        "triangle c={c} p=({x},{y})"
                    );
                }
            }
            for &p in tri.points.iter().step_by(7) {
                assert!(in_triangle(p, c));
            }

            // Points left of the box or below it are never members.
            for y in ymin..=ymax {
                assert!(!in_triangle((xmin - 1 - (y % 3), y), c));
            }
            for x in xmin..=xmax {
                assert!(!in_triangle((x, -1 - (x.rem_euclid(2))), c));
            }

            let car = sierpinski_carpet(4, c);
            let n = cc * 81;
            for x in 0..n {
                for y in (0..n).step_by(stride as usize) {
                    assert_eq!(
                        in_carpet((x, y), c),
                        car.contains((x, y)),
                        "carpet c={c} p=({x},{y})"
                    );
                }
            }
            // Negative coordinates are never in the carpet.
            for t in 0..n {
                assert!(!in_carpet((-1, t), c));
                assert!(!in_carpet((t, -1), c));
            }
        }
        assert!(in_triangle((0, 0), 1));
        assert!(!in_carpet((1, 1), 1));
        // Points beyond a stage box belong to later stages of the same
        // infinite shape.
        let car5 = sierpinski_carpet(5, 1);
        for y in [81, 82, 100, 242] {
            for x in [0, 1, 80, 200] {
                assert_eq!(in_carpet((x, y), 1), car5.contains((x, y)));
            }
        }
    }

    #[test]
    fn membership_stabilizes_beyond_stage_bounds() {
        // Points covered by stage 5's box agree with the stage-8 set.
        let tri8 = sierpinski_triangle(8, 1);
        for x in -32..32 {
            for y in 0..64 {
                assert_eq!(in_triangle((x, y), 1), tri8.contains((x, y)));
            }
        }
    }

    #[test]
    fn choke_edges_stage_zero() {
        let left = choke_edges(0, 1, ChokeSide::Left);
        assert_eq!(
            left,
            [LatticeEdge::new((-1, 1), (-1, 2))].into_iter().collect()
        );
        let right = choke_edges(0, 1, ChokeSide::Right);
        assert_eq!(
            right,
            [LatticeEdge::new((0, 1), (0, 2))].into_iter().collect()
        );
    }

    #[test]
    fn choke_edge_counts() {
        for i in 0..=4u32 {
            for c in 1..=3u32 {
                for side in [ChokeSide::Left, ChokeSide::Right] {
                    assert_eq!(
                        choke_edges(i, c, side).len(),
                        c as usize,
                        "i={i} c={c} side={side:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn pointlanding_examples() {
        // Frozen against a brute-force membership sweep over materialized
        // stages: the landing property holds exactly when k > j; for
        // i < k <= j the translated pair lands on a center pair of a
        // higher-stage sub-copy and both points are members.
        assert!(pointlanding_holds(1, 1, 2, 3).unwrap());
        assert!(pointlanding_holds(2, 1, 3, 4).unwrap());
        assert!(pointlanding_holds(3, 2, 4, 5).unwrap());
        assert!(!pointlanding_holds(1, 1, 2, 2).unwrap());
        assert!(!pointlanding_holds(1, 1, 3, 2).unwrap());
        assert!(!pointlanding_holds(2, 2, 4, 3).unwrap());
        assert!(matches!(
            pointlanding_holds(1, 0, 2, 2),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(pointlanding_holds(1, 2, 2, 3).is_err());
        assert!(pointlanding_holds(1, 2, 3, 2).is_err());
    }
}
