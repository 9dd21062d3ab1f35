use std::fmt;

use serde::{Deserialize, Serialize};

/// Opaque marker identifier, unique within a session.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MarkerId(pub u64);

impl fmt::Display for MarkerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A point annotation resident on a mesh vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Marker {
    pub id: MarkerId,
    /// 0-based frame index.
    pub frame: usize,
    /// Position of `vertex_index` in that frame's mesh.
    pub position: [f32; 3],
    pub vertex_index: u32,
}

impl Marker {
    /// Equality ignoring the id.
    pub fn same_payload(&self, other: &Marker) -> bool {
        self.frame == other.frame
            && self.vertex_index == other.vertex_index
            && self.position.map(f32::to_bits) == other.position.map(f32::to_bits)
    }
}

/// Markers in insertion order. Several markers may share a vertex.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MarkerSet {
    markers: Vec<Marker>,
}

impl MarkerSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.markers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.markers.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Marker> {
        self.markers.iter()
    }

    pub fn as_slice(&self) -> &[Marker] {
        &self.markers
    }

    pub fn get(&self, id: MarkerId) -> Option<&Marker> {
        self.markers.iter().find(|m| m.id == id)
    }

    pub fn index_of(&self, id: MarkerId) -> Option<usize> {
        self.markers.iter().position(|m| m.id == id)
    }

    /// Append a marker. Returns `false` (and does nothing) on a duplicate id.
    pub fn push(&mut self, marker: Marker) -> bool {
        if self.get(marker.id).is_some() {
            return false;
        }
        self.markers.push(marker);
        true
    }

    pub(crate) fn insert(&mut self, index: usize, marker: Marker) {
        self.markers.insert(index.min(self.markers.len()), marker);
    }

    pub fn remove(&mut self, id: MarkerId) -> Option<(usize, Marker)> {
        let index = self.index_of(id)?;
        Some((index, self.markers.remove(index)))
    }

    /// Payload equality in order, ignoring ids.
    pub fn same_payload(&self, other: &MarkerSet) -> bool {
        self.len() == other.len() && self.iter().zip(other.iter()).all(|(a, b)| a.same_payload(b))
    }

    pub fn max_id(&self) -> Option<MarkerId> {
        self.markers.iter().map(|m| m.id).max()
    }
}

impl<'a> IntoIterator for &'a MarkerSet {
    type Item = &'a Marker;
    type IntoIter = std::slice::Iter<'a, Marker>;

    fn into_iter(self) -> Self::IntoIter {
        self.markers.iter()
    }
}
