//! Triangle mesh representation and the geometric queries the annotation
//! tools are built on: validation, vertex adjacency, ray picking, bounded
//! surface distances and triangle areas.
//!
//! All algorithms work on the vertex/edge graph only. Non-manifold,
//! disconnected and zero-area input is accepted.

mod adjacency;
mod distance;
mod pick;
mod validate;

use std::sync::OnceLock;

use thiserror::Error;

use crate::geom;

pub use adjacency::{build_adjacency, AdjacencyMap};
pub use distance::{surface_distances, DistanceMap, DistanceMetric};
pub use pick::{ray_pick, PickHit, Ray, PICK_EPSILON};
pub use validate::{validate_geometry, validate_mesh, ValidationIssue, ValidationReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("invalid mesh: {0}")]
    Invalid(ValidationReport),
    #[error("vertex {vertex} out of range (vertex count {count})")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("triangle {triangle} out of range (triangle count {count})")]
    TriangleOutOfRange { triangle: usize, count: usize },
    #[error("radius must be finite and non-negative, got {0}")]
    InvalidRadius(f64),
    #[error("ray direction must be finite and non-zero")]
    InvalidRay,
}

/// A triangle mesh with `f32` vertex positions and `u32` indices.
///
/// Construction does not validate; use [`validate_geometry`] or
/// [`TriangleMesh::try_new`]. The vertex adjacency is built lazily on first
/// use and cached.
#[derive(Debug, Clone, Default)]
pub struct TriangleMesh {
    positions: Vec<[f32; 3]>,
    triangles: Vec<[u32; 3]>,
    adjacency: OnceLock<AdjacencyMap>,
}

impl PartialEq for TriangleMesh {
    fn eq(&self, other: &Self) -> bool {
        self.triangles == other.triangles
            && self.positions.len() == other.positions.len()
            && self
                .positions
                .iter()
                .zip(&other.positions)
                .all(|(a, b)| a.map(f32::to_bits) == b.map(f32::to_bits))
    }
}

impl TriangleMesh {
    pub fn new(positions: Vec<[f32; 3]>, triangles: Vec<[u32; 3]>) -> Self {
        Self {
            positions,
            triangles,
            adjacency: OnceLock::new(),
        }
    }

    pub fn try_new(positions: Vec<[f32; 3]>, triangles: Vec<[u32; 3]>) -> Result<Self, MeshError> {
        let mesh = Self::new(positions, triangles);
        let report = validate_geometry(&mesh);
        if report.is_empty() {
            Ok(mesh)
        } else {
            Err(MeshError::Invalid(report))
        }
    }

    pub fn positions(&self) -> &[[f32; 3]] {
        &self.positions
    }

    pub fn triangles(&self) -> &[[u32; 3]] {
        &self.triangles
    }

    pub fn vertex_count(&self) -> usize {
        self.positions.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn position(&self, vertex: usize) -> Result<[f32; 3], MeshError> {
        self.positions.get(vertex).copied().ok_or(MeshError::VertexOutOfRange {
            vertex,
            count: self.positions.len(),
        })
    }

    /// Cached vertex adjacency; built (and the mesh validated) on first call.
    pub fn adjacency(&self) -> Result<&AdjacencyMap, MeshError> {
        if let Some(adj) = self.adjacency.get() {
            return Ok(adj);
        }
        let adj = build_adjacency(self)?;
        Ok(self.adjacency.get_or_init(|| adj))
    }

    pub fn check_vertex(&self, vertex: usize) -> Result<(), MeshError> {
        self.position(vertex).map(|_| ())
    }

    /// Sum of all triangle areas.
    pub fn total_area(&self) -> f64 {
        (0..self.triangles.len()).fold(0.0, |acc, t| acc + triangle_area(self, t))
    }
}

/// Per-vertex two-channel intensity data. Channel 0 is stored in the PLY red
/// slot and channel 1 in green.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ChannelData {
    pub channel0: Vec<u8>,
    pub channel1: Vec<u8>,
}

impl ChannelData {
    pub fn new(channel0: Vec<u8>, channel1: Vec<u8>) -> Self {
        Self { channel0, channel1 }
    }

    /// Both channels filled with one value.
    pub fn uniform(vertex_count: usize, c0: u8, c1: u8) -> Self {
        Self {
            channel0: vec![c0; vertex_count],
            channel1: vec![c1; vertex_count],
        }
    }

    /// Channel by index (0 or 1).
    pub fn channel(&self, index: usize) -> Option<&[u8]> {
        match index {
            0 => Some(&self.channel0),
            1 => Some(&self.channel1),
            _ => None,
        }
    }
}

/// Area of one triangle: half the magnitude of the cross product of two edge
/// vectors.
///
/// Panics if `index` or any of the triangle's vertex indices is out of range.
pub fn triangle_area(mesh: &TriangleMesh, index: usize) -> f64 {
    let [a, b, c] = mesh.triangles[index].map(|v| geom::widen(mesh.positions[v as usize]));
    0.5 * geom::norm(geom::cross(geom::sub(b, a), geom::sub(c, a)))
}
