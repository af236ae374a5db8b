//! Density-based clustering of frustum point sets and target-cluster
//! selection.

use std::collections::{HashMap, VecDeque};

use nalgebra::Point3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cluster id given to points that belong to no cluster.
pub const NOISE: i32 = -1;

const UNCLASSIFIED: i32 = -2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClusterParams {
    /// Neighborhood radius in meters (inclusive: distance == eps counts).
    pub eps: f64,
    /// Minimum neighborhood size (the point itself included) for a core point.
    pub min_pts: usize,
}

impl Default for ClusterParams {
    fn default() -> Self {
        // Tuned for car-scale LiDAR returns at mid range; configurable.
        ClusterParams { eps: 0.6, min_pts: 5 }
    }
}

impl ClusterParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0) || !self.eps.is_finite() {
            return Err(Error::InvalidConfig(format!("cluster eps must be positive, got {}", self.eps)));
        }
        if self.min_pts < 1 {
            return Err(Error::InvalidConfig("cluster min_pts must be at least 1".into()));
        }
        Ok(())
    }
}

/// A partition of the input points: `labels[i]` is a cluster id starting at 0
/// in discovery order, or [`NOISE`].
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    pub labels: Vec<i32>,
    /// Point count per cluster id.
    pub cluster_sizes: Vec<usize>,
}

impl Clustering {
    pub fn n_clusters(&self) -> usize {
        self.cluster_sizes.len()
    }

    /// Id of the most populated cluster; ties go to the lowest id, `None` when
    /// everything is noise.
    pub fn largest_cluster_id(&self) -> Option<i32> {
        let mut best: Option<(i32, usize)> = None;
        for (id, &size) in self.cluster_sizes.iter().enumerate() {
            if best.map_or(true, |(_, s)| size > s) {
                best = Some((id as i32, size));
            }
        }
        best.map(|(id, _)| id)
    }
}

/// Uniform-grid spatial index with cell size `eps`; a point's eps-ball is
/// covered by its own cell plus the 26 surrounding ones.
struct Grid {
    cells: HashMap<(i64, i64, i64), Vec<usize>>,
    eps2: f64,
    inv_eps: f64,
}

impl Grid {
    fn build(points: &[Point3<f64>], eps: f64) -> Self {
        let inv_eps = 1.0 / eps;
        let mut cells: HashMap<(i64, i64, i64), Vec<usize>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            cells.entry(Self::key(p, inv_eps)).or_default().push(i);
        }
        Grid { cells, eps2: eps * eps, inv_eps }
    }

    fn key(p: &Point3<f64>, inv_eps: f64) -> (i64, i64, i64) {
        (
            (p.x * inv_eps).floor() as i64,
            (p.y * inv_eps).floor() as i64,
            (p.z * inv_eps).floor() as i64,
        )
    }

    /// Indices within eps of `points[i]`, including `i` itself.
    fn neighbors(&self, points: &[Point3<f64>], i: usize) -> Vec<usize> {
        let p = &points[i];
        let (cx, cy, cz) = Self::key(p, self.inv_eps);
        let mut out = Vec::new();
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    let Some(cell) = self.cells.get(&(cx + dx, cy + dy, cz + dz)) else {
                        continue;
                    };
                    for &j in cell {
                        if nalgebra::distance_squared(p, &points[j]) <= self.eps2 {
                            out.push(j);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Standard density clustering: a point is core when its (inclusive) eps-ball
/// holds at least `min_pts` points; clusters are maximal chains of core points
/// with their borders. Ids are assigned in scan order of the seeds, and a
/// border point reachable from several clusters joins the one discovered
/// first, so the labeling is deterministic for a given input order.
pub fn dbscan(points: &[Point3<f64>], params: &ClusterParams) -> Clustering {
    let n = points.len();
    let mut labels = vec![UNCLASSIFIED; n];
    let mut cluster_sizes = Vec::new();
    if n == 0 {
        return Clustering { labels, cluster_sizes };
    }

    let grid = Grid::build(points, params.eps);
    let is_core: Vec<bool> =
        (0..n).map(|i| grid.neighbors(points, i).len() >= params.min_pts).collect();

    for seed in 0..n {
        if labels[seed] != UNCLASSIFIED {
            continue;
        }
        if !is_core[seed] {
            labels[seed] = NOISE;
            continue;
        }
        let id = cluster_sizes.len() as i32;
        let mut size = 0usize;
        labels[seed] = id;
        size += 1;
        let mut queue: VecDeque<usize> = grid.neighbors(points, seed).into();
        while let Some(j) = queue.pop_front() {
            if labels[j] == NOISE {
                // Previously dismissed border point, adopted by the first
                // cluster that reaches it.
                labels[j] = id;
                size += 1;
            }
            if labels[j] != UNCLASSIFIED {
                continue;
            }
            labels[j] = id;
            size += 1;
            if is_core[j] {
                queue.extend(grid.neighbors(points, j));
            }
        }
        cluster_sizes.push(size);
    }

    Clustering { labels, cluster_sizes }
}

/// Points of the most populated cluster, in input order; empty when the
/// clustering found nothing but noise.
pub fn largest_cluster(clustering: &Clustering, points: &[Point3<f64>]) -> Vec<Point3<f64>> {
    match clustering.largest_cluster_id() {
        None => Vec::new(),
        Some(id) => points
            .iter()
            .zip(&clustering.labels)
            .filter(|(_, &l)| l == id)
            .map(|(p, _)| *p)
            .collect(),
    }
}
