//! Tile types, glues, and validated tile sets.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A glue: a label plus a non-negative integer strength. Two glues bond
/// iff their labels are equal; the bond weight is the shared strength.
/// A tile set enforces one strength per label, so equal labels always
/// carry equal strengths inside a validated set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Glue {
    pub label: String,
    pub strength: u32,
}

impl Glue {
    pub fn new(label: impl Into<String>, strength: u32) -> Self {
        Glue {
            label: label.into(),
            strength,
        }
    }
}

/// The four cardinal sides of a tile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    North,
    East,
    South,
    West,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::North, Side::East, Side::South, Side::West];

    /// Unit offset from a tile to the neighbor across this side.
    pub fn offset(self) -> (i64, i64) {
        match self {
            Side::North => (0, 1),
            Side::East => (1, 0),
            Side::South => (0, -1),
            Side::West => (-1, 0),
        }
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::North => Side::South,
            Side::East => Side::West,
            Side::South => Side::North,
            Side::West => Side::East,
        }
    }
}

/// A unit-square tile type: up to one glue per side, never rotated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileType {
    pub name: String,
    pub north: Option<Glue>,
    pub east: Option<Glue>,
    pub south: Option<Glue>,
    pub west: Option<Glue>,
    #[serde(default)]
    pub display_label: String,
}

impl TileType {
    pub fn new(name: impl Into<String>) -> Self {
        TileType {
            name: name.into(),
            north: None,
            east: None,
            south: None,
            west: None,
            display_label: String::new(),
        }
    }

    pub fn with_glue(mut self, side: Side, label: impl Into<String>, strength: u32) -> Self {
        let g = Some(Glue::new(label, strength));
        match side {
            Side::North => self.north = g,
            Side::East => self.east = g,
            Side::South => self.south = g,
            Side::West => self.west = g,
        }
        self
    }

    pub fn with_display(mut self, label: impl Into<String>) -> Self {
        self.display_label = label.into();
        self
    }

    pub fn glue(&self, side: Side) -> Option<&Glue> {
        match side {
            Side::North => self.north.as_ref(),
            Side::East => self.east.as_ref(),
            Side::South => self.south.as_ref(),
            Side::West => self.west.as_ref(),
        }
    }
}

/// A validated set of tile types: names are unique and every glue label
/// carries exactly one strength across the whole set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileSet {
    tiles: BTreeMap<String, TileType>,
}

impl TileSet {
    pub fn new(tiles: impl IntoIterator<Item = TileType>) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut strengths: BTreeMap<String, u32> = BTreeMap::new();
        for tile in tiles {
            for side in Side::ALL {
                if let Some(g) = tile.glue(side) {
                    match strengths.get(&g.label) {
                        Some(&s) if s != g.strength => {
                            return Err(Error::GlueStrengthConflict {
                                label: g.label.clone(),
                                first: s,
                                second: g.strength,
                            });
                        }
                        Some(_) => {}
                        None => {
                            strengths.insert(g.label.clone(), g.strength);
                        }
                    }
                }
            }
            if map.insert(tile.name.clone(), tile.clone()).is_some() {
                return Err(Error::DuplicateTileName(tile.name));
            }
        }
        Ok(TileSet { tiles: map })
    }

    pub fn get(&self, name: &str) -> Result<&TileType> {
        self.tiles
            .get(name)
            .ok_or_else(|| Error::UnknownTileName(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.tiles.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &TileType> {
        self.tiles.values()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.tiles.keys().map(|s| s.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tileset_rejects_duplicate_names() {
        let err = TileSet::new([TileType::new("a"), TileType::new("a")]).unwrap_err();
        assert_eq!(err, Error::DuplicateTileName("a".into()));
    }

    #[test]
    fn tileset_rejects_strength_conflicts() {
        let err = TileSet::new([
            TileType::new("a").with_glue(Side::East, "g", 1),
            TileType::new("b").with_glue(Side::West, "g", 2),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::GlueStrengthConflict { .. }));
    }

    #[test]
    fn tileset_accepts_consistent_glues() {
        let ts = TileSet::new([
            TileType::new("a").with_glue(Side::East, "g", 2),
            TileType::new("b").with_glue(Side::West, "g", 2),
        ])
        .unwrap();
        assert_eq!(ts.len(), 2);
        assert_eq!(ts.get("a").unwrap().east.as_ref().unwrap().strength, 2);
        assert!(ts.get("c").is_err());
    }
}
