//! National and county boundaries, and the railway through period stations.

use serde::{Deserialize, Serialize};

use super::hex::HexGrid;
use super::{MapError, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryClass {
    National,
    County,
}

/// Shared edge between two cells, `a < b` in `(q, r)` order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Boundary {
    pub a: [i32; 2],
    pub b: [i32; 2],
    pub class: BoundaryClass,
}

/// `region[cell]` is `(country, county)` for assigned cells. Edges touching
/// an unassigned cell are not marked. Sorted by `(a, b)`.
pub fn mark_boundaries(grid: &HexGrid, region: &[Option<(usize, usize)>]) -> Vec<Boundary> {
    let mut out = Vec::new();
    for (i, cell) in grid.cells.iter().enumerate() {
        let Some((country, county)) = region[i] else {
            continue;
        };
        for j in grid.neighbors(i) {
            let other = &grid.cells[j];
            if other.axial() <= cell.axial() {
                continue;
            }
            let Some((c2, k2)) = region[j] else {
                continue;
            };
            let class = if c2 != country {
                BoundaryClass::National
            } else if k2 != county {
                BoundaryClass::County
            } else {
                continue;
            };
            out.push(Boundary {
                a: [cell.q, cell.r],
                b: [other.q, other.r],
                class,
            });
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StationStyle {
    Solid,
    Double,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Station {
    pub period: usize,
    pub at: Point,
    pub style: StationStyle,
}

/// Stations in period order; the earliest is solid, the rest double.
pub fn build_railway(countries: &[(usize, Point)]) -> Result<Vec<Station>, MapError> {
    if countries.is_empty() {
        return Err(MapError::NoPeriods);
    }
    let mut sorted = countries.to_vec();
    sorted.sort_by_key(|c| c.0);
    Ok(sorted
        .into_iter()
        .enumerate()
        .map(|(i, (period, at))| Station {
            period,
            at,
            style: if i == 0 {
                StationStyle::Solid
            } else {
                StationStyle::Double
            },
        })
        .collect())
}
