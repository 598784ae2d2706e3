//! Pointy-top hexagonal lattice in axial coordinates.

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{MapError, Point};

/// Axial neighbor offsets.
pub const NEIGHBORS: [(i32, i32); 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];

/// `round-half-up(W·H/π)`, at least 1.
pub fn compute_seed_count(w: f64, h: f64) -> Result<usize, MapError> {
    if !(w > 0.0 && h > 0.0) || !w.is_finite() || !h.is_finite() {
        return Err(MapError::BadDimensions { w, h });
    }
    Ok(((w * h / PI) + 0.5).floor().max(1.0) as usize)
}

/// Side length of a regular hexagon with the given area.
pub fn hex_side(area: f64) -> f64 {
    (2.0 * area / (3.0 * 3f64.sqrt())).sqrt()
}

pub fn hex_distance(a: (i32, i32), b: (i32, i32)) -> i32 {
    let dq = a.0 - b.0;
    let dr = a.1 - b.1;
    (dq.abs() + dr.abs() + (dq + dr).abs()) / 2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HexCell {
    pub q: i32,
    pub r: i32,
    pub center: Point,
}

impl HexCell {
    pub fn axial(&self) -> (i32, i32) {
        (self.q, self.r)
    }
}

#[derive(Debug, Clone)]
pub struct HexGrid {
    pub cells: Vec<HexCell>,
    pub cell_area: f64,
    index: HashMap<(i32, i32), usize>,
}

impl HexGrid {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn find(&self, q: i32, r: i32) -> Option<usize> {
        self.index.get(&(q, r)).copied()
    }

    pub fn neighbors(&self, cell: usize) -> impl Iterator<Item = usize> + '_ {
        let (q, r) = self.cells[cell].axial();
        NEIGHBORS.iter().filter_map(move |(dq, dr)| self.find(q + dq, r + dr))
    }
}

/// Lattice of cells with the given area inside `[min, max]`, centered in the
/// box. Rows and columns are chosen so every center lies in the box and the
/// count is as close as possible to `area(box) / cell_area`; at least one
/// cell is always produced.
pub fn generate_hex_plane(min: Point, max: Point, cell_area: f64) -> HexGrid {
    assert!(cell_area > 0.0, "cell area must be positive");
    let w = (max.x - min.x).max(0.0);
    let h = (max.y - min.y).max(0.0);
    let s = hex_side(cell_area);
    let dx = 3f64.sqrt() * s;
    let dy = 1.5 * s;
    let target = w * h / cell_area;

    // staggered rows need half a column of slack
    let max_rows = if w >= dx / 2.0 {
        (h / dy).floor() as usize + 1
    } else {
        1
    };
    let max_cols = ((w / dx + 0.5).floor() as usize).max(1);
    let (mut rows, mut cols) = (1, 1);
    let mut best = f64::INFINITY;
    for nr in 1..=max_rows {
        let nc = ((target / nr as f64).round() as usize).clamp(1, max_cols);
        let err = ((nr * nc) as f64 - target).abs();
        if err < best {
            best = err;
            rows = nr;
            cols = nc;
        }
    }

    let cx = 0.5 * (min.x + max.x);
    let cy = 0.5 * (min.y + max.y);
    let x0 = cx - (cols as f64 - 1.0) * dx / 2.0;
    let y0 = cy - (rows as f64 - 1.0) * dy / 2.0;
    let mut cells = Vec::with_capacity(rows * cols);
    for k in 0..rows {
        let shift = if rows == 1 {
            0.0
        } else if k % 2 == 1 {
            dx / 4.0
        } else {
            -dx / 4.0
        };
        for j in 0..cols {
            let (k, j) = (k as i32, j as i32);
            cells.push(HexCell {
                q: j - (k - (k & 1)) / 2,
                r: k,
                center: Point {
                    x: x0 + j as f64 * dx + shift,
                    y: y0 + k as f64 * dy,
                },
            });
        }
    }
    let index = cells.iter().enumerate().map(|(i, c)| (c.axial(), i)).collect();
    HexGrid {
        cells,
        cell_area,
        index,
    }
}
