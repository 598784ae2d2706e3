//! Topic tree and its bubble-tree disk layout.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{MapError, Point};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicNode {
    pub topic: usize,
    pub count: usize,
    pub radius: f64,
}

/// One period. Topics are sorted by descending count, then topic id, so the
/// first one is the representative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeNode {
    pub period: usize,
    pub topics: Vec<TopicNode>,
}

impl TimeNode {
    pub fn representative(&self) -> &TopicNode {
        &self.topics[0]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicTree {
    pub periods: Vec<TimeNode>,
}

impl TopicTree {
    /// Topic nodes in skeleton order, with their period position.
    pub fn nodes(&self) -> impl Iterator<Item = (usize, &TopicNode)> {
        self.periods
            .iter()
            .enumerate()
            .flat_map(|(p, t)| t.topics.iter().map(move |n| (p, n)))
    }

    pub fn node_count(&self) -> usize {
        self.periods.iter().map(|p| p.topics.len()).sum()
    }
}

/// `counts[p][t]` is the member count of topic `t` in the `p`-th period;
/// `period_index[p]` is that period's index. Periods are chained in the
/// given order.
pub fn build_topic_tree(period_index: &[usize], counts: &[Vec<usize>]) -> Result<TopicTree, MapError> {
    assert_eq!(period_index.len(), counts.len());
    let periods = period_index
        .iter()
        .zip(counts)
        .map(|(&period, cs)| {
            if cs.is_empty() {
                return Err(MapError::EmptyPeriod { period });
            }
            let mut topics: Vec<TopicNode> = cs
                .iter()
                .enumerate()
                .map(|(topic, &count)| TopicNode {
                    topic,
                    count,
                    radius: (count as f64).sqrt(),
                })
                .collect();
            topics.sort_by(|a, b| b.count.cmp(&a.count).then(a.topic.cmp(&b.topic)));
            Ok(TimeNode { period, topics })
        })
        .collect::<Result<_, _>>()?;
    Ok(TopicTree { periods })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Point,
    pub radius: f64,
}

impl Disk {
    fn clear_of(&self, other: &Disk, gap: f64) -> bool {
        self.center.dist(other.center) >= self.radius + other.radius + gap - 1e-9
    }
}

/// Disks in [`TopicTree::nodes`] order and a bounding box padded by the
/// largest radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkeletonLayout {
    pub disks: Vec<Disk>,
    pub min: Point,
    pub max: Point,
}

impl SkeletonLayout {
    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }
}

const ANGLE_STEPS: usize = 72;
const CHAIN_TILT: f64 = PI / 9.0;

/// Each period's representative sits at its cluster center with the other
/// topics packed tangentially around it, first free angle on the innermost
/// ring that has room. Clusters are chained left to right with a slight
/// zigzag, each clear of all earlier ones. `gap` is the minimum clearance
/// between disks.
pub fn bubble_tree_layout(tree: &TopicTree, gap: f64) -> SkeletonLayout {
    let mut disks = Vec::with_capacity(tree.node_count());
    let mut placed_clusters: Vec<Disk> = Vec::new();

    for (p, period) in tree.periods.iter().enumerate() {
        let local = pack_cluster(period, gap);
        let extent = local.iter().map(|d| d.center.norm() + d.radius).fold(0.0, f64::max);
        let origin = match placed_clusters.last() {
            None => Point { x: 0.0, y: 0.0 },
            Some(prev) => {
                let tilt = if p % 2 == 1 { CHAIN_TILT } else { -CHAIN_TILT };
                place_cluster(prev, extent, tilt, &placed_clusters, gap)
            }
        };
        placed_clusters.push(Disk {
            center: origin,
            radius: extent,
        });
        disks.extend(local.into_iter().map(|d| Disk {
            center: d.center + origin,
            radius: d.radius,
        }));
    }

    let pad = disks.iter().map(|d| d.radius).fold(0.0, f64::max).max(1.0);
    let (mut min, mut max) = (
        Point {
            x: f64::INFINITY,
            y: f64::INFINITY,
        },
        Point {
            x: f64::NEG_INFINITY,
            y: f64::NEG_INFINITY,
        },
    );
    for d in &disks {
        min.x = min.x.min(d.center.x - d.radius - pad);
        min.y = min.y.min(d.center.y - d.radius - pad);
        max.x = max.x.max(d.center.x + d.radius + pad);
        max.y = max.y.max(d.center.y + d.radius + pad);
    }
    SkeletonLayout { disks, min, max }
}

fn pack_cluster(period: &TimeNode, gap: f64) -> Vec<Disk> {
    let rep = period.representative();
    let mut placed = vec![Disk {
        center: Point { x: 0.0, y: 0.0 },
        radius: rep.radius,
    }];
    for node in &period.topics[1..] {
        let rc = node.radius;
        let step = rc.max(0.5) + gap;
        let mut dist = rep.radius + rc + gap;
        'rings: loop {
            for j in 0..ANGLE_STEPS {
                let theta = PI / 2.0 - j as f64 * 2.0 * PI / ANGLE_STEPS as f64;
                let cand = Disk {
                    center: Point {
                        x: dist * theta.cos(),
                        y: dist * theta.sin(),
                    },
                    radius: rc,
                };
                if placed.iter().all(|d| cand.clear_of(d, gap)) {
                    placed.push(cand);
                    break 'rings;
                }
            }
            dist += step;
        }
    }
    placed
}

fn place_cluster(prev: &Disk, extent: f64, preferred: f64, placed: &[Disk], gap: f64) -> Point {
    let mut dist = prev.radius + extent + gap;
    loop {
        for k in 0..=ANGLE_STEPS / 2 {
            let offset = (k as f64 / 2.0).ceil() * 2.0 * PI / ANGLE_STEPS as f64;
            let theta = if k % 2 == 1 {
                preferred + offset
            } else {
                preferred - offset
            };
            let cand = Disk {
                center: prev.center
                    + Point {
                        x: dist * theta.cos(),
                        y: dist * theta.sin(),
                    },
                radius: extent,
            };
            if placed.iter().all(|d| cand.clear_of(d, gap)) {
                return cand.center;
            }
        }
        dist += extent.max(1.0);
    }
}
