use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use super::{MeshError, TriangleMesh};
use crate::geom;

/// How the region around a seed vertex is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceMetric {
    /// Shortest path over mesh edges weighted by Euclidean edge length.
    #[default]
    GeodesicEdgeGraph,
    /// Straight-line distance from the seed position.
    Euclidean,
}

/// Vertex index to distance from the seed, sorted by vertex.
pub type DistanceMap = BTreeMap<u32, f64>;

#[derive(Clone, Copy, PartialEq)]
struct Entry {
    dist: f64,
    vertex: u32,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All vertices within `radius` of `seed` under `metric`, with their
/// distances. The seed is always present at distance 0.
pub fn surface_distances(
    mesh: &TriangleMesh,
    seed: usize,
    radius: f64,
    metric: DistanceMetric,
) -> Result<DistanceMap, MeshError> {
    mesh.check_vertex(seed)?;
    if !radius.is_finite() || radius < 0.0 {
        return Err(MeshError::InvalidRadius(radius));
    }
    match metric {
        DistanceMetric::Euclidean => {
            let origin = mesh.positions()[seed];
            let mut out: DistanceMap = mesh
                .positions()
                .iter()
                .enumerate()
                .filter_map(|(v, &p)| {
                    let d = geom::distance(origin, p);
                    (d <= radius).then_some((v as u32, d))
                })
                .collect();
            out.insert(seed as u32, 0.0);
            Ok(out)
        }
        DistanceMetric::GeodesicEdgeGraph => bounded_dijkstra(mesh, seed, radius),
    }
}

fn bounded_dijkstra(mesh: &TriangleMesh, seed: usize, radius: f64) -> Result<DistanceMap, MeshError> {
    let adjacency = mesh.adjacency()?;
    let mut best: HashMap<u32, f64> = HashMap::new();
    let mut settled = DistanceMap::new();
    let mut heap = BinaryHeap::new();
    best.insert(seed as u32, 0.0);
    heap.push(Entry {
        dist: 0.0,
        vertex: seed as u32,
    });
    while let Some(Entry { dist, vertex }) = heap.pop() {
        if settled.contains_key(&vertex) || dist > best[&vertex] {
            continue;
        }
        settled.insert(vertex, dist);
        for (next, len) in adjacency.edges(vertex as usize) {
            if settled.contains_key(&next) {
                continue;
            }
            let candidate = dist + len;
            if candidate > radius {
                continue;
            }
            let improved = best.get(&next).is_none_or(|&d| candidate < d);
            if improved {
                best.insert(next, candidate);
                heap.push(Entry {
                    dist: candidate,
                    vertex: next,
                });
            }
        }
    }
    Ok(settled)
}
