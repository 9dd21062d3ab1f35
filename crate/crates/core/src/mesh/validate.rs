use std::fmt;

use super::{ChannelData, TriangleMesh};

/// One violated mesh or channel invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum ValidationIssue {
    NoVertices,
    NonFinitePosition {
        vertex: usize,
    },
    IndexOutOfRange {
        triangle: usize,
        index: u32,
        vertex_count: usize,
    },
    DegenerateIndices {
        triangle: usize,
    },
    ChannelLengthMismatch {
        channel: usize,
        len: usize,
        expected: usize,
    },
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NoVertices => write!(f, "mesh has no vertices"),
            Self::NonFinitePosition { vertex } => {
                write!(f, "vertex {vertex}: non-finite position")
            }
            Self::IndexOutOfRange {
                triangle,
                index,
                vertex_count,
            } => write!(f, "triangle {triangle}: index out of range ({index} >= {vertex_count})"),
            Self::DegenerateIndices { triangle } => {
                write!(f, "triangle {triangle}: repeated vertex index")
            }
            Self::ChannelLengthMismatch { channel, len, expected } => {
                write!(f, "channel {channel}: channel length mismatch ({len} != {expected})")
            }
        }
    }
}

/// Every invariant violation found in a mesh. Empty means valid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn len(&self) -> usize {
        self.issues.len()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            return write!(f, "ok");
        }
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

/// Check the geometric invariants only.
pub fn validate_geometry(mesh: &TriangleMesh) -> ValidationReport {
    let mut issues = Vec::new();
    let n = mesh.vertex_count();
    if n == 0 {
        issues.push(ValidationIssue::NoVertices);
    }
    for (vertex, p) in mesh.positions().iter().enumerate() {
        if !p.iter().all(|c| c.is_finite()) {
            issues.push(ValidationIssue::NonFinitePosition { vertex });
        }
    }
    for (triangle, t) in mesh.triangles().iter().enumerate() {
        for &index in t {
            if index as usize >= n {
                issues.push(ValidationIssue::IndexOutOfRange {
                    triangle,
                    index,
                    vertex_count: n,
                });
            }
        }
        if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
            issues.push(ValidationIssue::DegenerateIndices { triangle });
        }
    }
    ValidationReport { issues }
}

/// Check mesh and channel invariants. Never fails; violations are reported.
pub fn validate_mesh(mesh: &TriangleMesh, colours: &ChannelData) -> ValidationReport {
    let mut report = validate_geometry(mesh);
    let expected = mesh.vertex_count();
    for (channel, len) in [(0, colours.channel0.len()), (1, colours.channel1.len())] {
        if len != expected {
            report
                .issues
                .push(ValidationIssue::ChannelLengthMismatch { channel, len, expected });
        }
    }
    report
}
