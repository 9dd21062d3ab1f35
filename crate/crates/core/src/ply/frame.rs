use std::path::PathBuf;

use super::ScalarType;
use crate::annotation::LabelLayer;
use crate::mesh::{validate_mesh, ChannelData, TriangleMesh};

/// A vertex property the toolkit does not interpret, kept as raw
/// little-endian values so it can be written back unchanged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtraProperty {
    pub name: String,
    pub scalar: ScalarType,
    /// `vertex_count * scalar.size()` bytes, little endian.
    pub data: Vec<u8>,
}

/// One time point: a mesh, its two colour channels and an optional label
/// layer.
///
/// Equality compares content only; `source_path` is ignored.
#[derive(Debug, Clone, Default)]
pub struct SurfaceFrame {
    pub mesh: TriangleMesh,
    pub colours: ChannelData,
    pub labels: Option<LabelLayer>,
    pub extra: Vec<ExtraProperty>,
    pub source_path: Option<PathBuf>,
}

impl PartialEq for SurfaceFrame {
    fn eq(&self, other: &Self) -> bool {
        self.mesh == other.mesh
            && self.colours == other.colours
            && self.labels == other.labels
            && self.extra == other.extra
    }
}

impl SurfaceFrame {
    pub fn new(mesh: TriangleMesh, colours: ChannelData) -> Self {
        Self {
            mesh,
            colours,
            ..Default::default()
        }
    }

    pub fn with_labels(mut self, labels: LabelLayer) -> Self {
        self.set_labels(labels);
        self
    }

    /// Store a label layer. A layer with no labelled vertex is stored as
    /// absent, which is how it reads back from disk.
    pub fn set_labels(&mut self, labels: LabelLayer) {
        self.labels = (!labels.is_blank()).then_some(labels);
    }

    pub fn vertex_count(&self) -> usize {
        self.mesh.vertex_count()
    }

    /// Label layer, or an all-unlabelled layer when absent.
    pub fn labels_or_blank(&self) -> LabelLayer {
        self.labels
            .clone()
            .unwrap_or_else(|| LabelLayer::new(self.vertex_count()))
    }

    /// Description of the first violated invariant, if any.
    pub fn check(&self) -> Result<(), String> {
        let report = validate_mesh(&self.mesh, &self.colours);
        if !report.is_empty() {
            return Err(report.to_string());
        }
        let n = self.vertex_count();
        if let Some(labels) = &self.labels {
            if labels.len() != n {
                return Err(format!("label layer length {} != vertex count {n}", labels.len()));
            }
        }
        for prop in &self.extra {
            if super::header::is_standard_vertex_property(&prop.name) {
                return Err(format!("extra property '{}' shadows a standard property", prop.name));
            }
            if prop.data.len() != n * prop.scalar.size() {
                return Err(format!("extra property '{}' has wrong length", prop.name));
            }
        }
        Ok(())
    }
}
