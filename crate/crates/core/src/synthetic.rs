//! Generated demonstration data: flat grids, spheres and a series with a
//! growing bright patch. Used by the examples and handy for experiments.

use std::collections::VecDeque;

use crate::mesh::{ChannelData, TriangleMesh};
use crate::ply::{SurfaceFrame, SurfaceSeries};

/// `nx * ny` vertex grid in the z = 0 plane with the given spacing, two
/// triangles per cell. Vertex `(i, j)` has index `j * nx + i`.
pub fn grid_mesh(nx: usize, ny: usize, spacing: f32) -> TriangleMesh {
    assert!(nx >= 2 && ny >= 2, "grid needs at least 2x2 vertices");
    let mut positions = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            positions.push([i as f32 * spacing, j as f32 * spacing, 0.0]);
        }
    }
    let mut triangles = Vec::with_capacity(2 * (nx - 1) * (ny - 1));
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let a = (j * nx + i) as u32;
            let b = a + 1;
            let c = a + nx as u32;
            let d = c + 1;
            triangles.push([a, b, d]);
            triangles.push([a, d, c]);
        }
    }
    TriangleMesh::new(positions, triangles)
}

/// Latitude/longitude sphere with `rings` latitude bands and `segments`
/// longitude steps, poles included.
pub fn uv_sphere(rings: usize, segments: usize, radius: f32) -> TriangleMesh {
    assert!(rings >= 2 && segments >= 3);
    let mut positions = vec![[0.0, 0.0, radius]];
    for r in 1..rings {
        let theta = std::f32::consts::PI * r as f32 / rings as f32;
        for s in 0..segments {
            let phi = 2.0 * std::f32::consts::PI * s as f32 / segments as f32;
            positions.push([
                radius * theta.sin() * phi.cos(),
                radius * theta.sin() * phi.sin(),
                radius * theta.cos(),
            ]);
        }
    }
    let south = positions.len() as u32;
    positions.push([0.0, 0.0, -radius]);
    let ring = |r: usize, s: usize| (1 + (r - 1) * segments + s % segments) as u32;
    let mut triangles = Vec::new();
    for s in 0..segments {
        triangles.push([0, ring(1, s), ring(1, s + 1)]);
        triangles.push([south, ring(rings - 1, s + 1), ring(rings - 1, s)]);
    }
    for r in 1..rings - 1 {
        for s in 0..segments {
            let (a, b) = (ring(r, s), ring(r, s + 1));
            let (c, d) = (ring(r + 1, s), ring(r + 1, s + 1));
            triangles.push([a, c, d]);
            triangles.push([a, d, b]);
        }
    }
    TriangleMesh::new(positions, triangles)
}

/// Hop distance over mesh edges from `seed`; `usize::MAX` when unreachable.
pub fn hop_distances(mesh: &TriangleMesh, seed: usize) -> Vec<usize> {
    let adjacency = mesh.adjacency().expect("generated meshes are valid");
    let mut hops = vec![usize::MAX; mesh.vertex_count()];
    hops[seed] = 0;
    let mut queue = VecDeque::from([seed]);
    while let Some(v) = queue.pop_front() {
        for &n in adjacency.neighbours(v) {
            if hops[n as usize] == usize::MAX {
                hops[n as usize] = hops[v] + 1;
                queue.push_back(n as usize);
            }
        }
    }
    hops
}

/// Bright and dim green values used by [`growing_patch_series`].
pub const PATCH_BRIGHT: u8 = 220;
pub const PATCH_DIM: u8 = 30;

/// A `frames`-long series on a `size * size` grid where the green channel is
/// bright within `k` edge hops of the centre vertex in frame `k`. The red
/// channel carries a smooth gradient. Returns the series and the centre
/// vertex.
pub fn growing_patch_series(frames: usize, size: usize) -> (SurfaceSeries, u32) {
    let mesh = grid_mesh(size, size, 1.0);
    let centre = (size / 2) * size + size / 2;
    let hops = hop_distances(&mesh, centre);
    let red: Vec<u8> = (0..mesh.vertex_count())
        .map(|v| ((v % size) * 255 / (size - 1)) as u8)
        .collect();
    let frames = (0..frames)
        .map(|k| {
            let green = hops
                .iter()
                .map(|&h| if h <= k { PATCH_BRIGHT } else { PATCH_DIM })
                .collect();
            SurfaceFrame::new(mesh.clone(), ChannelData::new(red.clone(), green))
        })
        .collect();
    (SurfaceSeries::new(frames).expect("at least one frame"), centre as u32)
}
