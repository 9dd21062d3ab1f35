//! Marker CSV: header `frame,x,y,z,vertex_index`, one row per marker in
//! insertion order, 0-based frames, LF line endings. Coordinates are the
//! shortest decimal strings that parse back to the same `f32`.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Marker, MarkerId, MarkerSet};
use crate::geom;
use crate::ply::SurfaceSeries;

pub const MARKER_CSV_HEADER: &str = "frame,x,y,z,vertex_index";

/// Imported positions within this distance of their vertex are snapped.
pub const MARKER_SNAP_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CsvError {
    #[error("bad header: expected '{MARKER_CSV_HEADER}', found '{0}'")]
    BadHeader(String),
    #[error("line {line}: {reason}")]
    BadRow { line: u64, reason: String },
    #[error("line {line}: frame {frame} out of range (frame count {count})")]
    FrameOutOfRange { line: u64, frame: usize, count: usize },
    #[error("line {line}: vertex {vertex} out of range in frame {frame} (vertex count {count})")]
    VertexOutOfRange {
        line: u64,
        frame: usize,
        vertex: u32,
        count: usize,
    },
    #[error("line {line}: position is {distance} from vertex {vertex}, beyond tolerance {MARKER_SNAP_TOLERANCE}")]
    PositionMismatch { line: u64, vertex: u32, distance: f64 },
}

pub fn export_markers_csv(markers: &MarkerSet) -> String {
    let mut out = String::with_capacity(32 * (markers.len() + 1));
    out.push_str(MARKER_CSV_HEADER);
    out.push('\n');
    for m in markers {
        let [x, y, z] = m.position;
        writeln!(out, "{},{x},{y},{z},{}", m.frame, m.vertex_index).expect("write to String");
    }
    out
}

/// Parse and validate a marker CSV against `series`. Ids are assigned
/// 0, 1, 2, ... in row order. Positions off their vertex by at most
/// [`MARKER_SNAP_TOLERANCE`] are snapped with a warning.
pub fn import_markers_csv(bytes: &[u8], series: &SurfaceSeries) -> Result<MarkerSet, CsvError> {
    let mut reader = ::csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(bytes);
    let headers = reader
        .headers()
        .map_err(|e| CsvError::BadHeader(e.to_string()))?
        .iter()
        .collect::<Vec<_>>()
        .join(",");
    if headers != MARKER_CSV_HEADER {
        return Err(CsvError::BadHeader(headers));
    }

    let mut markers = MarkerSet::new();
    for (row, record) in reader.records().enumerate() {
        let fallback_line = row as u64 + 2;
        let record = record.map_err(|e| CsvError::BadRow {
            line: e.position().map_or(fallback_line, |p| p.line()),
            reason: e.to_string(),
        })?;
        let line = record.position().map_or(fallback_line, |p| p.line());
        let bad = |reason: String| CsvError::BadRow { line, reason };
        if record.len() != 5 {
            return Err(bad(format!("expected 5 fields, found {}", record.len())));
        }
        let frame: usize = record[0]
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad frame '{}'", &record[0])))?;
        let mut coords = [0f64; 3];
        for (axis, c) in coords.iter_mut().enumerate() {
            let text = record[axis + 1].trim();
            *c = text
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| bad(format!("bad coordinate '{text}'")))?;
        }
        let vertex: u32 = record[4]
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad vertex index '{}'", &record[4])))?;

        let mesh = &series
            .frame(frame)
            .ok_or(CsvError::FrameOutOfRange {
                line,
                frame,
                count: series.len(),
            })?
            .mesh;
        let position = mesh.position(vertex as usize).map_err(|_| CsvError::VertexOutOfRange {
            line,
            frame,
            vertex,
            count: mesh.vertex_count(),
        })?;
        let distance = geom::norm(geom::sub(coords, geom::widen(position)));
        if distance > MARKER_SNAP_TOLERANCE {
            return Err(CsvError::PositionMismatch { line, vertex, distance });
        }
        if geom::widen(position) != coords {
            log::warn!("marker csv line {line}: position snapped to vertex {vertex} (off by {distance:e})");
        }
        markers.push(Marker {
            id: MarkerId(row as u64),
            frame,
            position,
            vertex_index: vertex,
        });
    }
    Ok(markers)
}
