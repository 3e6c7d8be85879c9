//! Machine checks for assembly correctness notions: near-perfect
//! assembly against a fractal stage sequence, near-triangle shape
//! recognition, fractal containment, and minimum-deficit subset
//! embedding of one shape into another.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::assembly::{Assembly, CanonicalHash, Point, Shape};
use crate::engine::ExplorationReport;
use crate::error::{Error, Result};
use crate::fractals::{sierpinski_triangle, FractalKind};

/// Outcome of a bounded near-perfection check.
///
/// The verdict is only "verified up to the checked (stage, size) bound":
/// the underlying definition quantifies over all stages and all
/// producibles, while this report covers a finite stage range and the
/// finite saturated exploration it was given.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NearPerfectReport {
    /// Stage index -> (witness canonical hash, deficit) for condition 1:
    /// some producible embeds in that stage's point set with deficit <= d.
    pub stage_witnesses: BTreeMap<u32, (CanonicalHash, usize)>,
    /// Stages in the checked range with no qualifying witness.
    pub missing_stages: Vec<u32>,
    /// Producibles with no (stage, translation) embedding of deficit <= d
    /// within the checked range (condition 2 violations).
    pub violations: Vec<CanonicalHash>,
    /// Deficit bound checked.
    pub d: usize,
    /// Inclusive stage range checked.
    pub stages: (u32, u32),
}

impl NearPerfectReport {
    pub fn passed(&self) -> bool {
        self.missing_stages.is_empty() && self.violations.is_empty()
    }
}

/// Finds a translation placing `a` inside `target` as a subset, if one
/// exists, and reports the deficit `|target| - |a|` along with the
/// lexicographically smallest such translation.
///
/// Any subset embedding must map `a`'s minimum point onto some point of
/// `target`, so trying those |target| candidate translations is complete.
/// The deficit is the same for every successful translation.
pub fn shape_deficit(a: &Shape, target: &Shape) -> Option<(Point, usize)> {
    let anchor = *a.points.iter().next()?;
    target.points.iter().next()?;
    if a.len() > target.len() {
        return None;
    }
    let deficit = target.len() - a.len();
    for &t in target.points.iter() {
        let v = (t.0 - anchor.0, t.1 - anchor.1);
        if a.points
            .iter()
            .all(|&(x, y)| target.contains((x + v.0, y + v.1)))
        {
            // target.points iterates in lexicographic order, and the map
            // from target points to translations is monotone, so the
            // first hit is the lexicographically smallest translation.
            return Some((v, deficit));
        }
    }
    None
}

/// Checks both near-perfection conditions over a bounded stage range:
/// every checked stage has a producible within deficit `d` of its point
/// set, and every producible in the report embeds in some checked stage
/// within deficit `d`.
pub fn near_perfect_check(
    report: &ExplorationReport,
    fractal: FractalKind,
    stages: (u32, u32),
    d: usize,
) -> Result<NearPerfectReport> {
    if !report.saturated {
        return Err(Error::ReportUnsaturated);
    }
    let (lo, hi) = stages;
    if lo > hi {
        return Err(Error::PreconditionViolated(format!(
            "empty stage range {lo}..={hi}"
        )));
    }
    let stage_shapes: Vec<(u32, Shape)> = (lo..=hi).map(|i| (i, fractal.stage(i))).collect();

    let mut stage_witnesses = BTreeMap::new();
    let mut missing_stages = Vec::new();
    for (i, shape) in &stage_shapes {
        let mut best: Option<(CanonicalHash, usize)> = None;
        for (hash, asm) in &report.assemblies {
            if let Some((_, deficit)) = shape_deficit(&asm.shape(), shape) {
                if deficit <= d && best.is_none_or(|(_, b)| deficit < b) {
                    best = Some((*hash, deficit));
                    if deficit == 0 {
                        break;
                    }
                }
            }
        }
        match best {
            Some(w) => {
                stage_witnesses.insert(*i, w);
            }
            None => missing_stages.push(*i),
        }
    }

    let mut violations = Vec::new();
    for (hash, asm) in &report.assemblies {
        let shape = asm.shape();
        let ok = stage_shapes
            .iter()
            .any(|(_, s)| matches!(shape_deficit(&shape, s), Some((_, deficit)) if deficit <= d));
        if !ok {
            violations.push(*hash);
        }
    }

    Ok(NearPerfectReport {
        stage_witnesses,
        missing_stages,
        violations,
        d,
        stages,
    })
}

/// True iff the translated assembly's shape is exactly the stage-`i`
/// scale-1 triangle minus its six extreme points: the two leftmost, the
/// two rightmost, and the two bottommost.
pub fn is_near_triangle(a: &Assembly, i: u32, anchor: Point) -> bool {
    if i < 2 {
        return false;
    }
    let full = sierpinski_triangle(i, 1);
    if a.len() + 6 != full.len() {
        return false;
    }
    let mut expected = full.points.clone();
    // The scale-1 stage-i triangle spans x in [-2^i, 2^i - 1], y in
    // [0, 2^(i+1) - 1]; each extreme is attained by exactly two points.
    let ext = 1i64 << i;
    for p in [
        (-ext, (ext - 1) * 2),
        (-ext, ext * 2 - 1),
        (ext - 1, (ext - 1) * 2),
        (ext - 1, ext * 2 - 1),
        (-1, 0),
        (0, 0),
    ] {
        if !expected.remove(&p) {
            return false;
        }
    }
    let translated = a.shape().translate(anchor);
    translated.points == expected
}

/// True iff every tile of the translated assembly lies on a point of the
/// infinite fractal shape.
pub fn within_fractal(a: &Assembly, fractal: FractalKind, anchor: Point) -> bool {
    a.tiles
        .keys()
        .all(|&(x, y)| fractal.contains((x + anchor.0, y + anchor.1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{explore, AssemblySystem, ExplorationConfig};
    use crate::tile::{Side, TileSet, TileType};

    fn shape(points: &[(i64, i64)]) -> Shape {
        Shape::new(points.iter().copied())
    }

    #[test]
    fn deficit_identity_is_zero() {
        let s = sierpinski_triangle(2, 1);
        assert_eq!(shape_deficit(&s, &s), Some(((0, 0), 0)));
    }

    #[test]
    fn deficit_counts_missing_points() {
        let target = shape(&[(0, 0), (1, 0), (0, 1), (1, 1)]);
        let a = shape(&[(5, 5), (6, 5), (5, 6)]);
        assert_eq!(shape_deficit(&a, &target), Some(((-5, -5), 1)));
    }

    #[test]
    fn deficit_absent_when_no_embedding() {
        let horiz = shape(&[(0, 0), (1, 0)]);
        let vert = shape(&[(0, 0), (0, 1)]);
        assert_eq!(shape_deficit(&horiz, &vert), None);
        assert_eq!(shape_deficit(&vert, &horiz), None);
    }

    #[test]
    fn deficit_prefers_lexicographically_smallest_translation() {
        // A single point embeds everywhere; the reported translation must
        // map it onto the lexicographically smallest target point.
        let a = shape(&[(3, 3)]);
        let target = shape(&[(1, 7), (2, 0), (2, 5)]);
        assert_eq!(shape_deficit(&a, &target), Some(((-2, 4), 2)));
    }

    #[test]
    fn near_triangle_recognizes_clipped_stage() {
        let full = sierpinski_triangle(2, 1);
        let corners = [(-4, 6), (-4, 7), (3, 6), (3, 7), (-1, 0), (0, 0)];
        let tiles: Vec<_> = full
            .points
            .iter()
            .filter(|p| !corners.contains(p))
            .map(|&p| (p, "t".to_string()))
            .collect();
        let asm = Assembly::new(tiles.clone());
        assert_eq!(asm.len(), 30);
        assert!(is_near_triangle(&asm, 2, (0, 0)));
        assert!(!is_near_triangle(&asm, 3, (0, 0)));
        // The same assembly shifted needs the matching anchor.
        let shifted = asm.translate((10, -2));
        assert!(is_near_triangle(&shifted, 2, (-10, 2)));
        assert!(!is_near_triangle(&shifted, 2, (0, 0)));

        // Removing an interior tile or keeping all corners both fail.
        let mut fewer = tiles.clone();
        fewer.pop();
        assert!(!is_near_triangle(&Assembly::new(fewer), 2, (0, 0)));
        let all: Vec<_> = full.points.iter().map(|&p| (p, "t".to_string())).collect();
        assert!(!is_near_triangle(&Assembly::new(all), 2, (0, 0)));
    }

    #[test]
    fn within_fractal_checks_every_tile() {
        let tri = FractalKind::Triangle { scale: 1 };
        let a = Assembly::singleton((0, 0), "t");
        assert!(within_fractal(&a, tri, (0, 0)));
        let b = Assembly::new([((5, 0), "t".to_string())]);
        assert!(!within_fractal(&b, tri, (0, 0)));
        // (5,0) is outside, but translating to (0,0) fixes it.
        assert!(within_fractal(&b, tri, (-5, 0)));

        let carpet = FractalKind::Carpet { scale: 1 };
        let hole = Assembly::new([((0, 0), "t".to_string()), ((4, 4), "t".to_string())]);
        assert!(!within_fractal(&hole, carpet, (0, 0)));
    }

    #[test]
    fn near_perfect_requires_saturated_report() {
        let ts = TileSet::new([TileType::new("a").with_glue(Side::East, "g", 2)]).unwrap();
        let sys = AssemblySystem::multi_handed(ts, 2, 2);
        let mut cfg = ExplorationConfig::new(1);
        cfg.max_rounds = Some(0);
        let mut report = explore(&sys, &cfg).unwrap();
        report.saturated = false;
        let tri = FractalKind::Triangle { scale: 1 };
        assert!(matches!(
            near_perfect_check(&report, tri, (0, 2), 6),
            Err(Error::ReportUnsaturated)
        ));
    }

    #[test]
    fn near_perfect_flags_non_embedding_producibles() {
        // A west-east domino system: producibles are the two singletons
        // and the horizontal pair. With d = 0 nothing matches a triangle
        // stage exactly, so every producible is a violation.
        let ts = TileSet::new([
            TileType::new("l").with_glue(Side::East, "g", 2),
            TileType::new("r").with_glue(Side::West, "g", 2),
        ])
        .unwrap();
        let sys = AssemblySystem::multi_handed(ts, 2, 2);
        let report = explore(&sys, &ExplorationConfig::new(2)).unwrap();
        let tri = FractalKind::Triangle { scale: 1 };
        let out = near_perfect_check(&report, tri, (0, 1), 0).unwrap();
        assert!(!out.passed());
        assert_eq!(out.violations.len(), report.assemblies.len());
        assert_eq!(out.missing_stages, vec![0, 1]);

        // With d = 3 the singletons and the domino all embed in the
        // stage-0 square, and stage 1 still lacks a witness.
        let out = near_perfect_check(&report, tri, (0, 1), 3).unwrap();
        assert!(out.violations.is_empty());
        assert_eq!(out.missing_stages, vec![1]);
        assert_eq!(out.stage_witnesses[&0].1, 2);
    }
}
