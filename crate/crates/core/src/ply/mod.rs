//! Reading and writing `.ply` surface frames and frame sequences.
//!
//! Colour convention: PLY `red` holds channel 0, `green` holds channel 1 and
//! `blue` holds the paint label (255 labelled, 0 unlabelled; any value
//! `>= 128` reads as labelled). The reader accepts `ascii 1.0` and
//! `binary_little_endian 1.0`; the writer always produces binary little
//! endian. Extra scalar vertex properties such as normals are carried through
//! unchanged.

mod frame;
mod header;
mod natural;
mod read;
mod series;
pub(crate) use series::load_files_in_order;
mod write;

use thiserror::Error;

use crate::mesh::ValidationReport;

pub use frame::{ExtraProperty, SurfaceFrame};
pub use header::{parse_header, ElementDef, PlyFormat, PlyHeader, PropertyDef, PropertyKind, ScalarType};
pub use natural::natural_cmp;
pub use read::parse_ply;
pub use series::{
    labelled_file_name, load_series, load_series_dir, save_labelled_series, ParseFailures, SeriesError, SurfaceSeries,
    DEFAULT_LABEL_SUFFIX,
};
pub use write::write_ply;

/// Blue values at or above this read as labelled.
pub const LABEL_READ_THRESHOLD: u8 = 128;
/// Blue value written for labelled vertices.
pub const LABEL_WRITE_VALUE: u8 = 255;

/// A parse failure with the byte offset where it was detected.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("byte {offset}: {kind}")]
pub struct PlyError {
    pub offset: usize,
    pub kind: PlyErrorKind,
}

impl PlyError {
    pub(crate) fn new(offset: usize, kind: PlyErrorKind) -> Self {
        Self { offset, kind }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlyErrorKind {
    #[error("missing 'ply' magic line")]
    MissingMagic,
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("unsupported format '{0}'")]
    UnsupportedFormat(String),
    #[error("unsupported element '{0}'")]
    UnsupportedElement(String),
    #[error("unsupported vertex property '{0}'")]
    UnsupportedVertexProperty(String),
    #[error("unknown face property '{0}'")]
    UnknownFaceProperty(String),
    #[error("missing required vertex property '{0}'")]
    MissingProperty(&'static str),
    #[error("unexpected end of data")]
    Truncated,
    #[error("invalid value '{0}'")]
    InvalidValue(String),
    #[error("face has {0} vertices, only triangles are supported")]
    NonTriangleFace(u64),
    #[error("trailing data after last element")]
    TrailingData,
    #[error("invalid mesh: {0}")]
    InvalidMesh(ValidationReport),
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
}
