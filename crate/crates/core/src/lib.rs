//! Toolkit for annotating time series of triangulated cell-surface meshes
//! that carry two fluorescence channels as vertex colours.
//!
//! - [`mesh`]: geometry, adjacency, ray picking, brush-region distances
//! - [`ply`]: `.ply` frame codec and series loading/saving
//! - [`annotation`]: markers, paint labels, undo, marker CSV
//! - [`view`]: display colours for thresholding, opacity and render modes
//! - [`analysis`]: thresholded components under markers, track tables
//! - [`session`]: projects, the HTTP API and the batch CLI
//!
//! ```
//! use surfannot::annotation::{AnnotationState, BrushStroke};
//! use surfannot::mesh::ChannelData;
//! use surfannot::ply::{parse_ply, write_ply, SurfaceFrame, SurfaceSeries};
//! use surfannot::synthetic::grid_mesh;
//!
//! let mesh = grid_mesh(10, 10, 1.0);
//! let frame = SurfaceFrame::new(mesh, ChannelData::uniform(100, 80, 200));
//! let series = SurfaceSeries::new(vec![frame]).unwrap();
//!
//! let mut state = AnnotationState::new(&series);
//! let changed = state.apply_stroke(&series, &BrushStroke::paint(0, 55, 1.5)).unwrap();
//! // The seed plus its six edge neighbours (four axis edges, two diagonals).
//! assert_eq!(changed.len(), 7);
//!
//! let saved = state.labelled_series(&series);
//! let bytes = write_ply(&saved.frames()[0]).unwrap();
//! assert_eq!(parse_ply(&bytes).unwrap().labels.unwrap().count(), 7);
//! ```

pub mod analysis;
pub mod annotation;
mod geom;
pub mod mesh;
pub mod ply;
pub mod session;
pub mod synthetic;
pub mod view;

pub use geom::Vec3;
