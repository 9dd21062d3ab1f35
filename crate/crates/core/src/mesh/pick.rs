use serde::{Deserialize, Serialize};

use super::{MeshError, TriangleMesh};
use crate::geom::{self, Vec3};

/// Tolerance on the ray parameter and barycentric bounds.
pub const PICK_EPSILON: f64 = 1e-9;

/// A ray with unit-length direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRay")]
pub struct Ray {
    origin: Vec3,
    direction: Vec3,
}

#[derive(Deserialize)]
struct RawRay {
    origin: Vec3,
    direction: Vec3,
}

impl TryFrom<RawRay> for Ray {
    type Error = MeshError;

    fn try_from(raw: RawRay) -> Result<Self, Self::Error> {
        Ray::new(raw.origin, raw.direction)
    }
}

impl Ray {
    /// Normalizes `direction`. Fails on zero or non-finite input.
    pub fn new(origin: Vec3, direction: Vec3) -> Result<Self, MeshError> {
        let len = geom::norm(direction);
        if !len.is_finite() || len == 0.0 || !origin.iter().all(|c| c.is_finite()) {
            return Err(MeshError::InvalidRay);
        }
        Ok(Self {
            origin,
            direction: geom::scale(direction, 1.0 / len),
        })
    }

    pub fn origin(&self) -> Vec3 {
        self.origin
    }

    pub fn direction(&self) -> Vec3 {
        self.direction
    }

    pub fn at(&self, t: f64) -> Vec3 {
        geom::add(self.origin, geom::scale(self.direction, t))
    }
}

/// Nearest intersection of a ray with a mesh.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PickHit {
    pub triangle_index: u32,
    /// Weights of the triangle's three corners, in triangle order.
    pub barycentric: [f64; 3],
    pub point: Vec3,
    /// Corner with the greatest weight; ties go to the lower vertex index.
    pub nearest_vertex: u32,
    /// Ray parameter of the hit.
    pub distance: f64,
}

struct Hit {
    t: f64,
    bary: [f64; 3],
}

// Moller-Trumbore with relaxed bounds.
fn intersect(ray: &Ray, corners: [Vec3; 3]) -> Option<Hit> {
    let [v0, v1, v2] = corners;
    let e1 = geom::sub(v1, v0);
    let e2 = geom::sub(v2, v0);
    let p = geom::cross(ray.direction, e2);
    let det = geom::dot(e1, p);
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let inv = 1.0 / det;
    let s = geom::sub(ray.origin, v0);
    let u = geom::dot(s, p) * inv;
    if !(-PICK_EPSILON..=1.0 + PICK_EPSILON).contains(&u) {
        return None;
    }
    let q = geom::cross(s, e1);
    let v = geom::dot(ray.direction, q) * inv;
    if v < -PICK_EPSILON || u + v > 1.0 + PICK_EPSILON {
        return None;
    }
    let t = geom::dot(e2, q) * inv;
    if t.is_nan() || t < -PICK_EPSILON {
        return None;
    }
    Some(Hit {
        t: t.max(0.0),
        bary: [1.0 - u - v, u, v],
    })
}

fn normalize_weights(bary: [f64; 3]) -> [f64; 3] {
    let clamped = bary.map(|w| w.max(0.0));
    let sum: f64 = clamped.iter().sum();
    clamped.map(|w| w / sum)
}

/// Closest hit along the ray over all triangles, or `None`.
///
/// Hits at equal ray parameter resolve to the lower triangle index.
pub fn ray_pick(mesh: &TriangleMesh, ray: &Ray) -> Result<Option<PickHit>, MeshError> {
    let positions = mesh.positions();
    let mut best: Option<(usize, Hit)> = None;
    for (index, tri) in mesh.triangles().iter().enumerate() {
        let mut corners = [[0.0; 3]; 3];
        for (corner, &v) in corners.iter_mut().zip(tri) {
            let p = positions.get(v as usize).ok_or(MeshError::VertexOutOfRange {
                vertex: v as usize,
                count: positions.len(),
            })?;
            *corner = geom::widen(*p);
        }
        if let Some(hit) = intersect(ray, corners) {
            if best.as_ref().is_none_or(|(_, b)| hit.t < b.t) {
                best = Some((index, hit));
            }
        }
    }
    Ok(best.map(|(index, hit)| {
        let tri = mesh.triangles()[index];
        let bary = normalize_weights(hit.bary);
        let corners = tri.map(|v| geom::widen(positions[v as usize]));
        let point = (0..3).fold([0.0; 3], |acc, k| geom::add(acc, geom::scale(corners[k], bary[k])));
        let mut nearest = 0;
        for k in 1..3 {
            if bary[k] > bary[nearest] || (bary[k] == bary[nearest] && tri[k] < tri[nearest]) {
                nearest = k;
            }
        }
        PickHit {
            triangle_index: index as u32,
            barycentric: bary,
            point,
            nearest_vertex: tri[nearest],
            distance: hit.t,
        }
    }))
}
