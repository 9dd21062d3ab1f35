//! Per-series annotation state: vertex markers, paint label layers, brush
//! strokes with an eraser mode, a bounded undo history, and the marker CSV
//! format.
//!
//! All mutations go through [`AnnotationState`], which is meant to have a
//! single owner.

mod csv;
mod labels;
mod markers;
mod undo;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom;
use crate::mesh::{surface_distances, DistanceMetric, MeshError, PickHit};
use crate::ply::{SurfaceFrame, SurfaceSeries};

pub use self::csv::{export_markers_csv, import_markers_csv, CsvError, MARKER_CSV_HEADER, MARKER_SNAP_TOLERANCE};
pub use labels::LabelLayer;
pub use markers::{Marker, MarkerId, MarkerSet};
pub use undo::{UndoStack, DEFAULT_UNDO_DEPTH};

/// Label class written by paint strokes. Only one class exists on disk.
pub const PAINT_CLASS: u8 = 1;

/// Tolerance used to decide whether a pick still matches the frame mesh.
const HIT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnnotationError {
    #[error("frame {frame} out of range (frame count {count})")]
    FrameOutOfRange { frame: usize, count: usize },
    #[error("pick does not match the frame mesh: {0}")]
    StaleHit(String),
    #[error("unknown marker id {0}")]
    UnknownMarker(MarkerId),
    #[error("invalid stroke: {0}")]
    InvalidStroke(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrokeMode {
    #[default]
    Paint,
    Erase,
}

/// One paint or erase action.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BrushStroke {
    pub frame: usize,
    pub seed: u32,
    /// Brush radius in mesh units; finite and positive.
    pub radius: f64,
    #[serde(default)]
    pub metric: DistanceMetric,
    #[serde(default)]
    pub mode: StrokeMode,
}

impl BrushStroke {
    pub fn paint(frame: usize, seed: u32, radius: f64) -> Self {
        Self {
            frame,
            seed,
            radius,
            metric: DistanceMetric::default(),
            mode: StrokeMode::Paint,
        }
    }

    pub fn erase(frame: usize, seed: u32, radius: f64) -> Self {
        Self {
            mode: StrokeMode::Erase,
            ..Self::paint(frame, seed, radius)
        }
    }

    pub fn with_metric(mut self, metric: DistanceMetric) -> Self {
        self.metric = metric;
        self
    }
}

/// A reversible change to the annotation state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Delta {
    MarkerAdded {
        marker: Marker,
    },
    MarkerRemoved {
        marker: Marker,
        index: usize,
    },
    Stroke {
        frame: usize,
        #[serde(skip)]
        class: u8,
        /// Vertices whose label changed, ascending.
        vertices: Vec<u32>,
        /// Label value after the stroke.
        labelled: bool,
    },
}

/// Markers plus every frame's label layer.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotationSnapshot {
    pub markers: MarkerSet,
    pub layers: Vec<LabelLayer>,
}

impl AnnotationSnapshot {
    /// Equality that ignores marker ids.
    pub fn same_payload(&self, other: &Self) -> bool {
        self.layers == other.layers && self.markers.same_payload(&other.markers)
    }
}

#[derive(Debug, Clone)]
pub struct AnnotationState {
    markers: MarkerSet,
    layers: Vec<LabelLayer>,
    history: UndoStack<Delta>,
    next_id: u64,
}

impl AnnotationState {
    /// Fresh state whose label layers start from the series' stored labels.
    pub fn new(series: &SurfaceSeries) -> Self {
        Self::with_undo_depth(series, DEFAULT_UNDO_DEPTH)
    }

    pub fn with_undo_depth(series: &SurfaceSeries, depth: usize) -> Self {
        Self {
            markers: MarkerSet::new(),
            layers: series.frames().iter().map(SurfaceFrame::labels_or_blank).collect(),
            history: UndoStack::new(depth),
            next_id: 0,
        }
    }

    pub fn markers(&self) -> &MarkerSet {
        &self.markers
    }

    pub fn layer(&self, frame: usize) -> Option<&LabelLayer> {
        self.layers.get(frame)
    }

    pub fn layers(&self) -> &[LabelLayer] {
        &self.layers
    }

    pub fn undo_depth(&self) -> usize {
        self.history.undo_len()
    }

    pub fn redo_depth(&self) -> usize {
        self.history.redo_len()
    }

    pub fn snapshot(&self) -> AnnotationSnapshot {
        AnnotationSnapshot {
            markers: self.markers.clone(),
            layers: self.layers.clone(),
        }
    }

    /// Replace the marker set wholesale (session resume). Clears history.
    pub fn replace_markers(&mut self, markers: MarkerSet) {
        self.next_id = self.next_id.max(markers.max_id().map_or(0, |id| id.0 + 1));
        self.markers = markers;
        self.history.clear();
    }

    /// Copy of `series` with every frame's labels taken from this state.
    pub fn labelled_series(&self, series: &SurfaceSeries) -> SurfaceSeries {
        let frames = series
            .frames()
            .iter()
            .zip(&self.layers)
            .map(|(frame, layer)| {
                let mut frame = frame.clone();
                frame.set_labels(layer.clone());
                frame
            })
            .collect();
        SurfaceSeries::new(frames).expect("series is non-empty")
    }

    fn frame<'a>(&self, series: &'a SurfaceSeries, frame: usize) -> Result<&'a SurfaceFrame, AnnotationError> {
        series.frame(frame).ok_or(AnnotationError::FrameOutOfRange {
            frame,
            count: series.len(),
        })
    }

    /// Place a marker on the pick's nearest vertex.
    pub fn place_marker(
        &mut self,
        series: &SurfaceSeries,
        frame: usize,
        hit: &PickHit,
    ) -> Result<Marker, AnnotationError> {
        let mesh = &self.frame(series, frame)?.mesh;
        check_hit(mesh, hit)?;
        let marker = Marker {
            id: MarkerId(self.next_id),
            frame,
            position: mesh.positions()[hit.nearest_vertex as usize],
            vertex_index: hit.nearest_vertex,
        };
        self.next_id += 1;
        self.markers.push(marker);
        self.history.record(Delta::MarkerAdded { marker });
        Ok(marker)
    }

    /// Place a marker directly on a vertex, as a pick on that vertex would.
    pub fn place_marker_at_vertex(
        &mut self,
        series: &SurfaceSeries,
        frame: usize,
        vertex: u32,
    ) -> Result<Marker, AnnotationError> {
        let mesh = &self.frame(series, frame)?.mesh;
        let position = mesh.position(vertex as usize)?;
        let marker = Marker {
            id: MarkerId(self.next_id),
            frame,
            position,
            vertex_index: vertex,
        };
        self.next_id += 1;
        self.markers.push(marker);
        self.history.record(Delta::MarkerAdded { marker });
        Ok(marker)
    }

    pub fn remove_marker(&mut self, id: MarkerId) -> Result<Marker, AnnotationError> {
        let (index, marker) = self.markers.remove(id).ok_or(AnnotationError::UnknownMarker(id))?;
        self.history.record(Delta::MarkerRemoved { marker, index });
        Ok(marker)
    }

    /// Paint or erase the stroke region. Returns exactly the vertices whose
    /// label changed, ascending. Every accepted stroke is one undo entry.
    pub fn apply_stroke(&mut self, series: &SurfaceSeries, stroke: &BrushStroke) -> Result<Vec<u32>, AnnotationError> {
        if !(stroke.radius.is_finite() && stroke.radius > 0.0) {
            return Err(AnnotationError::InvalidStroke(format!(
                "radius must be finite and positive, got {}",
                stroke.radius
            )));
        }
        let mesh = &self.frame(series, stroke.frame)?.mesh;
        let region = surface_distances(mesh, stroke.seed as usize, stroke.radius, stroke.metric)?;
        let labelled = stroke.mode == StrokeMode::Paint;
        let layer = &mut self.layers[stroke.frame];
        let vertices: Vec<u32> = region
            .keys()
            .copied()
            .filter(|&v| layer.get(v as usize) != labelled)
            .collect();
        for &v in &vertices {
            layer.set(v as usize, labelled);
        }
        self.history.record(Delta::Stroke {
            frame: stroke.frame,
            class: PAINT_CLASS,
            vertices: vertices.clone(),
            labelled,
        });
        Ok(vertices)
    }

    /// Revert the newest change. `None` when there is nothing to undo.
    pub fn undo(&mut self) -> Option<Delta> {
        let delta = self.history.undo()?.clone();
        match &delta {
            Delta::MarkerAdded { marker } => {
                self.markers.remove(marker.id);
            }
            Delta::MarkerRemoved { marker, index } => self.markers.insert(*index, *marker),
            Delta::Stroke {
                frame,
                vertices,
                labelled,
                ..
            } => set_all(&mut self.layers[*frame], vertices, !labelled),
        }
        Some(delta)
    }

    /// Reapply the newest undone change. `None` when there is nothing to redo.
    pub fn redo(&mut self) -> Option<Delta> {
        let delta = self.history.redo()?.clone();
        match &delta {
            Delta::MarkerAdded { marker } => {
                self.markers.push(*marker);
            }
            Delta::MarkerRemoved { marker, .. } => {
                self.markers.remove(marker.id);
            }
            Delta::Stroke {
                frame,
                vertices,
                labelled,
                ..
            } => set_all(&mut self.layers[*frame], vertices, *labelled),
        }
        Some(delta)
    }
}

fn set_all(layer: &mut LabelLayer, vertices: &[u32], labelled: bool) {
    for &v in vertices {
        layer.set(v as usize, labelled);
    }
}

fn check_hit(mesh: &crate::mesh::TriangleMesh, hit: &PickHit) -> Result<(), AnnotationError> {
    let tri = mesh
        .triangles()
        .get(hit.triangle_index as usize)
        .ok_or_else(|| AnnotationError::StaleHit(format!("no triangle {}", hit.triangle_index)))?;
    if !tri.contains(&hit.nearest_vertex) {
        return Err(AnnotationError::StaleHit(format!(
            "vertex {} is not a corner of triangle {}",
            hit.nearest_vertex, hit.triangle_index
        )));
    }
    let corners = tri.map(|v| geom::widen(mesh.positions()[v as usize]));
    let expected = (0..3).fold([0.0; 3], |acc, k| {
        geom::add(acc, geom::scale(corners[k], hit.barycentric[k]))
    });
    let scale = 1.0 + geom::norm(expected);
    let gap = geom::norm(geom::sub(expected, hit.point));
    if gap.is_nan() || gap > HIT_TOLERANCE * scale {
        return Err(AnnotationError::StaleHit("hit point is off the triangle".into()));
    }
    Ok(())
}
