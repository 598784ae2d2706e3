//! Comment-to-cell assignment.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::hex::HexGrid;
use super::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssignStrategy {
    /// Grow each territory from its seed cell through adjacent free cells.
    #[default]
    Frontier,
    /// Each comment takes the free cell nearest its topic center, anywhere.
    GlobalNearest,
}

/// Cell owner: territory index and comment position within it.
pub type Owner = (usize, usize);

#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub owner: Vec<Option<Owner>>,
    /// Comments placed by global search because their territory's frontier
    /// was empty.
    pub fallback_count: usize,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    dist: f64,
    q: i32,
    r: i32,
    cell: usize,
}

impl Candidate {
    fn key_cmp(&self, other: &Self) -> Ordering {
        self.dist
            .total_cmp(&other.dist)
            .then(self.q.cmp(&other.q))
            .then(self.r.cmp(&other.r))
    }
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.key_cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other.key_cmp(self)
    }
}

fn candidate(grid: &HexGrid, cell: usize, center: Point) -> Candidate {
    let c = &grid.cells[cell];
    Candidate {
        dist: c.center.dist(center),
        q: c.q,
        r: c.r,
        cell,
    }
}

fn nearest_free(grid: &HexGrid, owner: &[Option<Owner>], center: Point) -> Option<usize> {
    (0..grid.len())
        .filter(|&i| owner[i].is_none())
        .map(|i| candidate(grid, i, center))
        .min_by(Candidate::key_cmp)
        .map(|c| c.cell)
}

/// Assigns `sizes[t]` comments to territory `t` (centered at `centers[t]`),
/// territories in the given order. Distance ties go to the smaller `(q, r)`.
/// Returns `None` when the grid has fewer cells than comments.
pub fn assign_comments(
    grid: &HexGrid,
    centers: &[Point],
    sizes: &[usize],
    strategy: AssignStrategy,
) -> Option<Assignment> {
    assert_eq!(centers.len(), sizes.len());
    if sizes.iter().sum::<usize>() > grid.len() {
        return None;
    }
    let mut owner: Vec<Option<Owner>> = vec![None; grid.len()];
    let mut fallback_count = 0;
    let mut queued = vec![usize::MAX; grid.len()];

    for (t, (&center, &size)) in centers.iter().zip(sizes).enumerate() {
        let mut frontier = BinaryHeap::new();
        for k in 0..size {
            let cell = match strategy {
                AssignStrategy::GlobalNearest => nearest_free(grid, &owner, center),
                AssignStrategy::Frontier if k == 0 => nearest_free(grid, &owner, center),
                AssignStrategy::Frontier => {
                    let mut next = None;
                    while let Some(c) = frontier.pop() {
                        let c: Candidate = c;
                        if owner[c.cell].is_none() {
                            next = Some(c.cell);
                            break;
                        }
                    }
                    if next.is_none() {
                        fallback_count += 1;
                        next = nearest_free(grid, &owner, center);
                    }
                    next
                }
            }
            .expect("capacity checked above");
            owner[cell] = Some((t, k));
            if strategy == AssignStrategy::Frontier {
                for nb in grid.neighbors(cell) {
                    if owner[nb].is_none() && queued[nb] != t {
                        queued[nb] = t;
                        frontier.push(candidate(grid, nb, center));
                    }
                }
            }
        }
    }
    Some(Assignment { owner, fallback_count })
}
