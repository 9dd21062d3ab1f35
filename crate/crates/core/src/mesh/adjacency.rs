use super::{validate_geometry, MeshError, TriangleMesh};
use crate::geom;

/// Vertex adjacency of a triangle mesh in compressed-row form.
///
/// Neighbour lists are sorted and free of duplicates and self-loops. Each
/// entry carries the Euclidean length of the edge.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyMap {
    offsets: Vec<usize>,
    neighbours: Vec<u32>,
    lengths: Vec<f64>,
}

impl AdjacencyMap {
    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Sorted neighbours of `vertex`.
    pub fn neighbours(&self, vertex: usize) -> &[u32] {
        &self.neighbours[self.offsets[vertex]..self.offsets[vertex + 1]]
    }

    /// `(neighbour, edge length)` pairs of `vertex`.
    pub fn edges(&self, vertex: usize) -> impl Iterator<Item = (u32, f64)> + '_ {
        let range = self.offsets[vertex]..self.offsets[vertex + 1];
        self.neighbours[range.clone()]
            .iter()
            .copied()
            .zip(self.lengths[range].iter().copied())
    }

    pub fn degree(&self, vertex: usize) -> usize {
        self.offsets[vertex + 1] - self.offsets[vertex]
    }

    pub fn contains(&self, u: usize, v: u32) -> bool {
        self.neighbours(u).binary_search(&v).is_ok()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.neighbours.len() / 2
    }
}

/// Build the vertex adjacency of a validated mesh.
pub fn build_adjacency(mesh: &TriangleMesh) -> Result<AdjacencyMap, MeshError> {
    let report = validate_geometry(mesh);
    if !report.is_empty() {
        return Err(MeshError::Invalid(report));
    }
    let n = mesh.vertex_count();
    let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(mesh.triangle_count() * 6);
    for &[a, b, c] in mesh.triangles() {
        for (u, v) in [(a, b), (b, c), (c, a)] {
            pairs.push((u, v));
            pairs.push((v, u));
        }
    }
    pairs.sort_unstable();
    pairs.dedup();

    let mut offsets = vec![0usize; n + 1];
    for &(u, _) in &pairs {
        offsets[u as usize + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let positions = mesh.positions();
    let lengths = pairs
        .iter()
        .map(|&(u, v)| geom::distance(positions[u as usize], positions[v as usize]))
        .collect();
    let neighbours = pairs.into_iter().map(|(_, v)| v).collect();
    Ok(AdjacencyMap {
        offsets,
        neighbours,
        lengths,
    })
}
