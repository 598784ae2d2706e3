//! Comment map construction: topic tree, disk skeleton, hex plane, cell
//! assignment, boundaries and railway, and the exported layout document.

mod assign;
mod boundary;
mod hex;
mod skeleton;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::nlp::{MechanismLabel, SentimentLabel};
use crate::segment::TimePeriod;
use crate::topics::WeightedWord;

pub use assign::{assign_comments, AssignStrategy, Assignment, Owner};
pub use boundary::{build_railway, mark_boundaries, Boundary, BoundaryClass, Station, StationStyle};
pub use hex::{compute_seed_count, generate_hex_plane, hex_distance, hex_side, HexCell, HexGrid, NEIGHBORS};
pub use skeleton::{bubble_tree_layout, build_topic_tree, Disk, SkeletonLayout, TimeNode, TopicNode, TopicTree};

pub const LAYOUT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }
}

impl std::ops::Add for Point {
    type Output = Point;

    fn add(self, other: Point) -> Point {
        Point {
            x: self.x + other.x,
            y: self.y + other.y,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum MapError {
    #[error("no periods to lay out")]
    NoPeriods,
    #[error("period {period} has no topics")]
    EmptyPeriod { period: usize },
    #[error("dimensions must be positive, got {w}x{h}")]
    BadDimensions { w: f64, h: f64 },
    #[error("{comments} comments do not fit in {cells} cells after densification")]
    GridExhausted { comments: usize, cells: usize },
    #[error("no labels for comment {0}")]
    MissingLabels(String),
    #[error("county refers to unknown period {0}")]
    UnknownPeriod(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColorClass {
    Orange,
    Red,
    Blue,
    Violet,
    Yellow,
    Green,
}

pub fn sentiment_to_color(label: SentimentLabel) -> ColorClass {
    match label {
        SentimentLabel::Happy => ColorClass::Orange,
        SentimentLabel::Angry => ColorClass::Red,
        SentimentLabel::Sad => ColorClass::Blue,
        SentimentLabel::Fear => ColorClass::Violet,
        SentimentLabel::Surprise => ColorClass::Yellow,
        SentimentLabel::Neutral => ColorClass::Green,
    }
}

/// One topic of one period, with members in chronological order.
#[derive(Debug, Clone, PartialEq)]
pub struct CountyInput {
    pub period: usize,
    pub cloud: Vec<WeightedWord>,
    pub comment_ids: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommentLabels {
    pub sentiment: SentimentLabel,
    pub mechanism: MechanismLabel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MapParams {
    pub strategy: AssignStrategy,
    /// Clearance between skeleton disks.
    pub gap: f64,
    pub densify_retries: usize,
}

impl Default for MapParams {
    fn default() -> Self {
        MapParams {
            strategy: AssignStrategy::Frontier,
            gap: 1.0,
            densify_retries: 3,
        }
    }
}

pub type MechanismHist = BTreeMap<MechanismLabel, usize>;

fn empty_hist() -> MechanismHist {
    MechanismLabel::ALL.iter().map(|&m| (m, 0)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Canvas {
    pub w: f64,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationDoc {
    pub x: f64,
    pub y: f64,
    pub style: StationStyle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountryDoc {
    pub index: usize,
    pub start: i64,
    pub end: i64,
    pub station: StationDoc,
    pub mechanism_hist: MechanismHist,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloudWord {
    pub word: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountyDoc {
    pub id: usize,
    pub country: usize,
    pub cloud: Vec<CloudWord>,
    pub mechanism_hist: MechanismHist,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellDoc {
    pub q: i32,
    pub r: i32,
    pub x: f64,
    pub y: f64,
    pub comment_id: String,
    pub color: ColorClass,
    pub county: usize,
    pub country: usize,
}

/// The exported layout. Countries are sorted by index, counties by id,
/// cells by `(q, r)`, boundaries by `(a, b)`; coordinates lie in
/// `[0, w] x [0, h]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapLayout {
    pub layout_version: u32,
    pub canvas: Canvas,
    pub cell_area: f64,
    pub countries: Vec<CountryDoc>,
    pub counties: Vec<CountyDoc>,
    pub cells: Vec<CellDoc>,
    pub boundaries: Vec<Boundary>,
    pub railway: Vec<[f64; 2]>,
    pub fallback_count: usize,
    /// Configuration and seeds that produced the layout.
    #[serde(default)]
    pub meta: Value,
}

impl MapLayout {
    /// Sorted keys, floats rounded to 4 decimals, pretty-printed.
    pub fn to_canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("layout serializes");
        let mut s = serde_json::to_string_pretty(&canonicalize(value)).expect("value serializes");
        s.push('\n');
        s
    }
}

/// Rounds floats to 4 decimals and rebuilds objects in key order.
pub fn canonicalize(value: Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = (n.as_f64().unwrap() * 1e4).round() / 1e4;
            let x = if x == 0.0 { 0.0 } else { x };
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(canonicalize).collect()),
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, canonicalize(v))).collect())
        }
        other => other,
    }
}

/// Runs every layout stage. Counties may appear in any order; each must
/// name the index of one of `periods`. Periods without counties are
/// skipped.
pub fn build_map(
    periods: &[TimePeriod],
    counties: &[CountyInput],
    labels: &BTreeMap<String, CommentLabels>,
    params: &MapParams,
) -> Result<MapLayout, MapError> {
    for c in counties {
        if !periods.iter().any(|p| p.index == c.period) {
            return Err(MapError::UnknownPeriod(c.period));
        }
        if let Some(id) = c.comment_ids.iter().find(|id| !labels.contains_key(*id)) {
            return Err(MapError::MissingLabels(id.clone()));
        }
    }
    let mut periods: Vec<&TimePeriod> = periods
        .iter()
        .filter(|p| counties.iter().any(|c| c.period == p.index))
        .collect();
    periods.sort_by_key(|p| p.index);
    if periods.is_empty() {
        return Err(MapError::NoPeriods);
    }

    // per period: input county indices, positionally matching tree topic ids
    let members: Vec<Vec<usize>> = periods
        .iter()
        .map(|p| (0..counties.len()).filter(|&i| counties[i].period == p.index).collect())
        .collect();
    let counts: Vec<Vec<usize>> = members
        .iter()
        .map(|m| m.iter().map(|&i| counties[i].comment_ids.len()).collect())
        .collect();
    let index: Vec<usize> = periods.iter().map(|p| p.index).collect();
    let tree = build_topic_tree(&index, &counts)?;
    let skeleton = bubble_tree_layout(&tree, params.gap);

    // territories in skeleton order
    let territories: Vec<(usize, &CountyInput)> = tree
        .nodes()
        .map(|(p, node)| (p, &counties[members[p][node.topic]]))
        .collect();
    let centers: Vec<Point> = skeleton.disks.iter().map(|d| d.center).collect();
    let sizes: Vec<usize> = territories.iter().map(|(_, c)| c.comment_ids.len()).collect();
    let total: usize = sizes.iter().sum();

    let mut area = PI;
    let mut grid = generate_hex_plane(skeleton.min, skeleton.max, area);
    let mut assignment = assign_comments(&grid, &centers, &sizes, params.strategy);
    for _ in 0..params.densify_retries {
        if assignment.is_some() {
            break;
        }
        area *= grid.len() as f64 / total as f64 * 0.9;
        grid = generate_hex_plane(skeleton.min, skeleton.max, area);
        assignment = assign_comments(&grid, &centers, &sizes, params.strategy);
    }
    let assignment = assignment.ok_or(MapError::GridExhausted {
        comments: total,
        cells: grid.len(),
    })?;

    let region: Vec<Option<(usize, usize)>> = assignment
        .owner
        .iter()
        .map(|o| o.map(|(t, _)| (territories[t].0, t)))
        .collect();
    let boundaries = mark_boundaries(&grid, &region);

    let mut first = 0;
    let stations: Vec<(usize, Point)> = tree
        .periods
        .iter()
        .map(|t| {
            let at = centers[first];
            first += t.topics.len();
            (t.period, at)
        })
        .collect();
    let railway = build_railway(&stations)?;

    let origin = skeleton.min;
    let shift = |p: Point| Point {
        x: p.x - origin.x,
        y: p.y - origin.y,
    };
    let country_of_index: BTreeMap<usize, usize> = periods.iter().enumerate().map(|(i, p)| (p.index, i)).collect();

    let mut county_docs: Vec<CountyDoc> = territories
        .iter()
        .enumerate()
        .map(|(id, (p, c))| {
            let mut hist = empty_hist();
            for cid in &c.comment_ids {
                *hist.get_mut(&labels[cid].mechanism).unwrap() += 1;
            }
            let top = c.cloud.iter().map(|w| w.weight).fold(0.0, f64::max);
            CountyDoc {
                id,
                country: periods[*p].index,
                cloud: c
                    .cloud
                    .iter()
                    .map(|w| CloudWord {
                        word: w.word.clone(),
                        weight: if top > 0.0 { w.weight / top } else { 0.0 },
                    })
                    .collect(),
                mechanism_hist: hist,
                size: c.comment_ids.len(),
            }
        })
        .collect();
    county_docs.sort_by_key(|c| c.id);

    let countries: Vec<CountryDoc> = railway
        .iter()
        .map(|s| {
            let p = periods[country_of_index[&s.period]];
            let mut hist = empty_hist();
            for c in county_docs.iter().filter(|c| c.country == p.index) {
                for (m, n) in &c.mechanism_hist {
                    *hist.get_mut(m).unwrap() += n;
                }
            }
            let at = shift(s.at);
            CountryDoc {
                index: p.index,
                start: p.start,
                end: p.end,
                station: StationDoc {
                    x: at.x,
                    y: at.y,
                    style: s.style,
                },
                mechanism_hist: hist,
            }
        })
        .collect();

    let mut cells: Vec<CellDoc> = grid
        .cells
        .iter()
        .zip(&assignment.owner)
        .filter_map(|(cell, owner)| {
            let (t, k) = (*owner)?;
            let (p, county) = territories[t];
            let comment_id = county.comment_ids[k].clone();
            let at = shift(cell.center);
            Some(CellDoc {
                q: cell.q,
                r: cell.r,
                x: at.x,
                y: at.y,
                color: sentiment_to_color(labels[&comment_id].sentiment),
                comment_id,
                county: t,
                country: periods[p].index,
            })
        })
        .collect();
    cells.sort_by_key(|c| (c.q, c.r));

    Ok(MapLayout {
        layout_version: LAYOUT_VERSION,
        canvas: Canvas {
            w: skeleton.width(),
            h: skeleton.height(),
        },
        cell_area: grid.cell_area,
        countries,
        counties: county_docs,
        cells,
        boundaries,
        railway: railway
            .iter()
            .map(|s| {
                let p = shift(s.at);
                [p.x, p.y]
            })
            .collect(),
        fallback_count: assignment.fallback_count,
        meta: Value::Null,
    })
}
