//! Renderers: point lists, ASCII grids, and SVG for shapes and
//! assemblies.

use std::collections::BTreeMap;

use hamsim_core::{Assembly, Point, Shape, TileSet};

/// A renderable scene: points with an optional display label per point.
pub struct Scene {
    cells: BTreeMap<Point, String>,
}

impl Scene {
    pub fn from_shape(shape: &Shape) -> Self {
        Scene {
            cells: shape.points.iter().map(|&p| (p, String::new())).collect(),
        }
    }

    pub fn from_assembly(a: &Assembly, tileset: Option<&TileSet>) -> Self {
        let cells = a
            .tiles
            .iter()
            .map(|(&p, name)| {
                let label = tileset
                    .and_then(|ts| ts.get(name).ok())
                    .map(|t| t.display_label.clone())
                    .filter(|l| !l.is_empty())
                    .unwrap_or_else(|| name.clone());
                (p, label)
            })
            .collect();
        Scene { cells }
    }

    fn bounds(&self) -> (Point, Point) {
        let xs: Vec<i64> = self.cells.keys().map(|p| p.0).collect();
        let ys: Vec<i64> = self.cells.keys().map(|p| p.1).collect();
        (
            (
                xs.iter().min().copied().unwrap_or(0),
                ys.iter().min().copied().unwrap_or(0),
            ),
            (
                xs.iter().max().copied().unwrap_or(0),
                ys.iter().max().copied().unwrap_or(0),
            ),
        )
    }

    /// One "x y" line per point, sorted.
    pub fn points(&self) -> String {
        let mut out = String::new();
        for &(x, y) in self.cells.keys() {
            out.push_str(&format!("{x} {y}\n"));
        }
        out
    }

    /// Row-per-line grid, highest y first, '#' for occupied cells.
    pub fn ascii(&self) -> String {
        if self.cells.is_empty() {
            return String::new();
        }
        let ((x0, y0), (x1, y1)) = self.bounds();
        let mut out = String::new();
        for y in (y0..=y1).rev() {
            for x in x0..=x1 {
                out.push(if self.cells.contains_key(&(x, y)) {
                    '#'
                } else {
                    '.'
                });
            }
            out.push('\n');
        }
        out
    }

    /// One unit square per cell, filled by a palette keyed on the cell's
    /// display label so equal labels render in equal colors.
    pub fn svg(&self) -> String {
        const CELL: i64 = 10;
        const PALETTE: [&str; 8] = [
            "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#9c755f",
        ];
        let ((x0, y0), (x1, y1)) = self.bounds();
        let w = (x1 - x0 + 1) * CELL;
        let h = (y1 - y0 + 1) * CELL;
        let mut out = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {w} {h}\" \
             width=\"{w}\" height=\"{h}\">\n"
        );
        for (&(x, y), label) in &self.cells {
            let px = (x - x0) * CELL;
            // SVG y grows downward; lattice y grows upward.
            let py = (y1 - y) * CELL;
            let color = if label.is_empty() {
                "#4e79a7"
            } else {
                let digest: usize = label.bytes().map(usize::from).sum();
                PALETTE[digest % PALETTE.len()]
            };
            out.push_str(&format!(
                "  <rect x=\"{px}\" y=\"{py}\" width=\"{CELL}\" height=\"{CELL}\" \
                 fill=\"{color}\" stroke=\"#222\" stroke-width=\"0.5\"/>\n"
            ));
        }
        out.push_str("</svg>\n");
        out
    }
}
