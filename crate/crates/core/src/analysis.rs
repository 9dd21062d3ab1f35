//! Threshold-driven component extraction around markers and per-frame
//! measurements for tracking surface features over time.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::annotation::{MarkerId, MarkerSet};
use crate::geom;
use crate::mesh::{triangle_area, MeshError};
use crate::ply::{SurfaceFrame, SurfaceSeries};

pub const TRACK_CSV_HEADER: &str = "marker_id,frame,area,vertex_count,centroid_x,centroid_y,centroid_z";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("channel must be 0 or 1, got {0}")]
    BadChannel(usize),
    #[error("frame {frame} out of range (frame count {count})")]
    FrameOutOfRange { frame: usize, count: usize },
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

/// The connected set of vertices around a seed whose channel value passes a
/// threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentResult {
    pub frame: usize,
    pub seed: u32,
    /// Ascending vertex indices.
    pub members: Vec<u32>,
    /// Ascending indices of triangles whose three corners are all members.
    pub triangles: Vec<u32>,
    pub area: f64,
    /// Unweighted mean of member positions; `None` for an empty component.
    pub centroid: Option<[f64; 3]>,
    pub vertex_count: usize,
}

impl ComponentResult {
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Flood fill from `seed` over vertices with `channel value >= threshold`.
///
/// A seed that fails the predicate yields an empty component with zero
/// measures.
pub fn extract_component(
    frame: &SurfaceFrame,
    frame_index: usize,
    seed: usize,
    channel: usize,
    threshold: u8,
) -> Result<ComponentResult, AnalysisError> {
    let values = frame
        .colours
        .channel(channel)
        .ok_or(AnalysisError::BadChannel(channel))?;
    let mesh = &frame.mesh;
    mesh.check_vertex(seed)?;
    let adjacency = mesh.adjacency()?;
    let empty = ComponentResult {
        frame: frame_index,
        seed: seed as u32,
        members: Vec::new(),
        triangles: Vec::new(),
        area: 0.0,
        centroid: None,
        vertex_count: 0,
    };
    let passes = |v: usize| values[v] >= threshold;
    if !passes(seed) {
        return Ok(empty);
    }

    let mut member = vec![false; mesh.vertex_count()];
    let mut queue = VecDeque::from([seed]);
    member[seed] = true;
    while let Some(v) = queue.pop_front() {
        for &n in adjacency.neighbours(v) {
            let n = n as usize;
            if !member[n] && passes(n) {
                member[n] = true;
                queue.push_back(n);
            }
        }
    }

    let members: Vec<u32> = (0..member.len()).filter(|&v| member[v]).map(|v| v as u32).collect();
    let triangles: Vec<u32> = mesh
        .triangles()
        .iter()
        .enumerate()
        .filter(|(_, t)| t.iter().all(|&v| member[v as usize]))
        .map(|(i, _)| i as u32)
        .collect();
    let area = triangles
        .iter()
        .fold(0.0, |acc, &t| acc + triangle_area(mesh, t as usize));
    let sum = members.iter().fold([0.0; 3], |acc, &v| {
        geom::add(acc, geom::widen(mesh.positions()[v as usize]))
    });
    let centroid = geom::scale(sum, 1.0 / members.len() as f64);
    Ok(ComponentResult {
        vertex_count: members.len(),
        members,
        triangles,
        area,
        centroid: Some(centroid),
        ..empty
    })
}

/// One measurement row. Failed extractions keep their row with zero
/// measures and the reason in `error`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrackRow {
    pub marker_id: MarkerId,
    pub frame: usize,
    pub area: f64,
    pub vertex_count: usize,
    pub centroid: Option<[f64; 3]>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct TrackTable {
    pub rows: Vec<TrackRow>,
}

/// Measure the component under every marker. Rows are ordered by
/// `(marker id, frame)` regardless of marker insertion order.
pub fn track_measurements(series: &SurfaceSeries, markers: &MarkerSet, channel: usize, threshold: u8) -> TrackTable {
    let mut keyed: BTreeMap<(MarkerId, usize), TrackRow> = BTreeMap::new();
    for marker in markers {
        let result = series
            .frame(marker.frame)
            .ok_or(AnalysisError::FrameOutOfRange {
                frame: marker.frame,
                count: series.len(),
            })
            .and_then(|frame| extract_component(frame, marker.frame, marker.vertex_index as usize, channel, threshold));
        let row = match result {
            Ok(c) => TrackRow {
                marker_id: marker.id,
                frame: marker.frame,
                area: c.area,
                vertex_count: c.vertex_count,
                centroid: c.centroid,
                error: None,
            },
            Err(e) => TrackRow {
                marker_id: marker.id,
                frame: marker.frame,
                area: 0.0,
                vertex_count: 0,
                centroid: None,
                error: Some(e.to_string()),
            },
        };
        keyed.insert((marker.id, marker.frame), row);
    }
    TrackTable {
        rows: keyed.into_values().collect(),
    }
}

/// Track CSV with LF endings. Floats use the shortest round-trip form;
/// centroid fields are empty for empty components.
pub fn export_track_csv(table: &TrackTable) -> String {
    let mut out = String::new();
    out.push_str(TRACK_CSV_HEADER);
    out.push('\n');
    for row in &table.rows {
        let (cx, cy, cz) = match row.centroid {
            Some([x, y, z]) => (x.to_string(), y.to_string(), z.to_string()),
            None => Default::default(),
        };
        writeln!(
            out,
            "{},{},{},{},{cx},{cy},{cz}",
            row.marker_id, row.frame, row.area, row.vertex_count
        )
        .expect("write to String");
    }
    out
}
