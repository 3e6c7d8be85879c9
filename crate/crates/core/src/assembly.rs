//! Assemblies: finite placements of tiles on the integer lattice, with
//! translation, canonical forms, and shapes.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// A lattice point.
pub type Point = (i64, i64);

/// A finite set of lattice points; the footprint of an assembly or a
/// fractal stage.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Shape {
    pub points: BTreeSet<Point>,
}

impl Shape {
    pub fn new(points: impl IntoIterator<Item = Point>) -> Self {
        Shape {
            points: points.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.points.contains(&p)
    }

    pub fn translate(&self, v: Point) -> Shape {
        Shape {
            points: self
                .points
                .iter()
                .map(|&(x, y)| (x + v.0, y + v.1))
                .collect(),
        }
    }

    pub fn union(&self, other: &Shape) -> Shape {
        Shape {
            points: self.points.union(&other.points).copied().collect(),
        }
    }

    pub fn is_subset(&self, other: &Shape) -> bool {
        self.points.is_subset(&other.points)
    }

    pub fn min_corner(&self) -> Option<Point> {
        if self.points.is_empty() {
            return None;
        }
        let minx = self.points.iter().map(|p| p.0).min().unwrap();
        let miny = self.points.iter().map(|p| p.1).min().unwrap();
        Some((minx, miny))
    }
}

impl FromIterator<Point> for Shape {
    fn from_iter<T: IntoIterator<Item = Point>>(iter: T) -> Self {
        Shape::new(iter)
    }
}

/// A stable digest identifying an assembly up to translation.
pub type CanonicalHash = [u8; 32];

/// Hex rendering of a canonical hash, for reports and logs.
pub fn hash_hex(h: &CanonicalHash) -> String {
    h.iter().map(|b| format!("{b:02x}")).collect()
}

/// A nonempty finite map from lattice points to tile-type names.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Assembly {
    pub tiles: BTreeMap<Point, String>,
}

impl Assembly {
    pub fn new(tiles: impl IntoIterator<Item = (Point, String)>) -> Self {
        Assembly {
            tiles: tiles.into_iter().collect(),
        }
    }

    pub fn singleton(p: Point, name: impl Into<String>) -> Self {
        let mut tiles = BTreeMap::new();
        tiles.insert(p, name.into());
        Assembly { tiles }
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn shape(&self) -> Shape {
        Shape {
            points: self.tiles.keys().copied().collect(),
        }
    }

    /// Shift every tile by `v`.
    pub fn translate(&self, v: Point) -> Assembly {
        Assembly {
            tiles: self
                .tiles
                .iter()
                .map(|(&(x, y), name)| ((x + v.0, y + v.1), name.clone()))
                .collect(),
        }
    }

    /// True iff the two assemblies occupy disjoint point sets.
    pub fn disjoint(&self, other: &Assembly) -> bool {
        // Iterate over the smaller map.
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.tiles.keys().all(|p| !big.tiles.contains_key(p))
    }

    /// Disjoint union; caller must check `disjoint` first.
    pub fn union(&self, other: &Assembly) -> Assembly {
        let mut tiles = self.tiles.clone();
        for (p, name) in &other.tiles {
            tiles.insert(*p, name.clone());
        }
        Assembly { tiles }
    }

    /// Translate so the minimum x and minimum y over tile positions are 0.
    pub fn canonical_form(&self) -> Assembly {
        let minx = self.tiles.keys().map(|p| p.0).min().unwrap_or(0);
        let miny = self.tiles.keys().map(|p| p.1).min().unwrap_or(0);
        self.translate((-minx, -miny))
    }

    /// Deterministic digest of the canonical form: two assemblies are
    /// translations of each other iff their hashes are equal.
    pub fn canonical_hash(&self) -> CanonicalHash {
        let canon = self.canonical_form();
        let mut hasher = Sha256::new();
        for ((x, y), name) in &canon.tiles {
            hasher.update(x.to_le_bytes());
            hasher.update(y.to_le_bytes());
            hasher.update((name.len() as u64).to_le_bytes());
            hasher.update(name.as_bytes());
        }
        hasher.finalize().into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn translate_roundtrip() {
        let a = Assembly::singleton((0, 0), "t");
        let b = a.translate((1, 2));
        assert_eq!(b.tiles.keys().next(), Some(&(1, 2)));
        assert_eq!(b.translate((-1, -2)), a);
        assert_eq!(a.translate((0, 0)), a);
    }

    #[test]
    fn canonical_form_normalizes() {
        let a = Assembly::singleton((5, -3), "t");
        assert_eq!(a.canonical_form(), Assembly::singleton((0, 0), "t"));
        let anchored = Assembly::new([((0, 0), "t".into()), ((1, 0), "u".into())]);
        assert_eq!(anchored.canonical_form(), anchored);
    }

    #[test]
    fn translations_share_hashes() {
        let a = Assembly::new([((0, 0), "t".into()), ((0, 1), "u".into())]);
        let b = a.translate((7, -9));
        assert_eq!(a.canonical_hash(), b.canonical_hash());
        let c = Assembly::new([((0, 0), "u".into()), ((0, 1), "t".into())]);
        assert_ne!(a.canonical_hash(), c.canonical_hash());
    }
}
