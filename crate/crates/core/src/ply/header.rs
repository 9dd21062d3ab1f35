use std::fmt;

use super::{PlyError, PlyErrorKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlyFormat {
    Ascii,
    BinaryLittleEndian,
}

impl fmt::Display for PlyFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ascii => "ascii",
            Self::BinaryLittleEndian => "binary_little_endian",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarType {
    I8,
    U8,
    I16,
    U16,
    I32,
    U32,
    F32,
    F64,
}

impl ScalarType {
    pub fn size(self) -> usize {
        match self {
            Self::I8 | Self::U8 => 1,
            Self::I16 | Self::U16 => 2,
            Self::I32 | Self::U32 | Self::F32 => 4,
            Self::F64 => 8,
        }
    }

    pub fn is_integer(self) -> bool {
        !matches!(self, Self::F32 | Self::F64)
    }

    /// Accepts both the classic names and the sized aliases.
    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "char" | "int8" => Self::I8,
            "uchar" | "uint8" => Self::U8,
            "short" | "int16" => Self::I16,
            "ushort" | "uint16" => Self::U16,
            "int" | "int32" => Self::I32,
            "uint" | "uint32" => Self::U32,
            "float" | "float32" => Self::F32,
            "double" | "float64" => Self::F64,
            _ => return None,
        })
    }

    /// Classic PLY type name.
    pub fn name(self) -> &'static str {
        match self {
            Self::I8 => "char",
            Self::U8 => "uchar",
            Self::I16 => "short",
            Self::U16 => "ushort",
            Self::I32 => "int",
            Self::U32 => "uint",
            Self::F32 => "float",
            Self::F64 => "double",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropertyKind {
    Scalar(ScalarType),
    List { count: ScalarType, item: ScalarType },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyDef {
    pub name: String,
    pub kind: PropertyKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementDef {
    pub name: String,
    pub count: u64,
    pub properties: Vec<PropertyDef>,
    /// Byte offset of the `element` line, for diagnostics.
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlyHeader {
    pub format: PlyFormat,
    pub elements: Vec<ElementDef>,
    pub comments: Vec<String>,
    /// Offset of the first body byte.
    pub body_offset: usize,
}

impl PlyHeader {
    pub fn element(&self, name: &str) -> Option<&ElementDef> {
        self.elements.iter().find(|e| e.name == name)
    }

    pub fn vertex_count(&self) -> u64 {
        self.element("vertex").map_or(0, |e| e.count)
    }

    pub fn face_count(&self) -> u64 {
        self.element("face").map_or(0, |e| e.count)
    }
}

pub(crate) const STANDARD_VERTEX_PROPERTIES: [&str; 6] = ["x", "y", "z", "red", "green", "blue"];

pub(crate) fn is_standard_vertex_property(name: &str) -> bool {
    STANDARD_VERTEX_PROPERTIES.contains(&name)
}

fn malformed(offset: usize, msg: impl Into<String>) -> PlyError {
    PlyError::new(offset, PlyErrorKind::MalformedHeader(msg.into()))
}

/// Parse the header. Structural checks on which elements and properties are
/// acceptable happen in the body reader.
pub fn parse_header(bytes: &[u8]) -> Result<PlyHeader, PlyError> {
    let mut pos = 0usize;
    let next_line = |pos: &mut usize| -> Result<(usize, String), PlyError> {
        let start = *pos;
        let rest = &bytes[start..];
        let end = rest
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| PlyError::new(bytes.len(), PlyErrorKind::Truncated))?;
        *pos = start + end + 1;
        let raw = &rest[..end];
        let raw = raw.strip_suffix(b"\r").unwrap_or(raw);
        let line = std::str::from_utf8(raw).map_err(|_| malformed(start, "header is not ASCII"))?;
        Ok((start, line.to_string()))
    };

    match next_line(&mut pos) {
        Ok((_, line)) if line.trim_end() == "ply" => {}
        _ => return Err(PlyError::new(0, PlyErrorKind::MissingMagic)),
    }

    let mut format = None;
    let mut elements: Vec<ElementDef> = Vec::new();
    let mut comments = Vec::new();
    loop {
        let (offset, line) = next_line(&mut pos)?;
        let mut words = line.split_whitespace();
        let Some(keyword) = words.next() else {
            continue;
        };
        match keyword {
            "format" => {
                let (Some(name), Some(version), None) = (words.next(), words.next(), words.next()) else {
                    return Err(malformed(offset, "format line needs a name and a version"));
                };
                if version != "1.0" {
                    return Err(PlyError::new(
                        offset,
                        PlyErrorKind::UnsupportedFormat(format!("{name} {version}")),
                    ));
                }
                format = Some(match name {
                    "ascii" => PlyFormat::Ascii,
                    "binary_little_endian" => PlyFormat::BinaryLittleEndian,
                    other => return Err(PlyError::new(offset, PlyErrorKind::UnsupportedFormat(other.into()))),
                });
            }
            "comment" | "obj_info" => {
                comments.push(line[keyword.len()..].trim().to_string());
            }
            "element" => {
                let (Some(name), Some(count), None) = (words.next(), words.next(), words.next()) else {
                    return Err(malformed(offset, "element line needs a name and a count"));
                };
                let count: u64 = count
                    .parse()
                    .map_err(|_| malformed(offset, format!("bad element count '{count}'")))?;
                if count > u32::MAX as u64 {
                    return Err(malformed(offset, format!("element count {count} exceeds 2^32-1")));
                }
                if elements.iter().any(|e| e.name == name) {
                    return Err(malformed(offset, format!("duplicate element '{name}'")));
                }
                elements.push(ElementDef {
                    name: name.to_string(),
                    count,
                    properties: Vec::new(),
                    offset,
                });
            }
            "property" => {
                let Some(element) = elements.last_mut() else {
                    return Err(malformed(offset, "property before any element"));
                };
                let words: Vec<&str> = words.collect();
                let (kind, name) = match words.as_slice() {
                    ["list", count, item, name] => {
                        let count = ScalarType::from_name(count)
                            .filter(|t| t.is_integer())
                            .ok_or_else(|| malformed(offset, format!("bad list count type '{count}'")))?;
                        let item = ScalarType::from_name(item)
                            .ok_or_else(|| malformed(offset, format!("unknown type '{item}'")))?;
                        (PropertyKind::List { count, item }, *name)
                    }
                    [ty, name] => {
                        let ty = ScalarType::from_name(ty)
                            .ok_or_else(|| malformed(offset, format!("unknown type '{ty}'")))?;
                        (PropertyKind::Scalar(ty), *name)
                    }
                    _ => return Err(malformed(offset, "bad property line")),
                };
                if element.properties.iter().any(|p| p.name == name) {
                    return Err(malformed(offset, format!("duplicate property '{name}'")));
                }
                element.properties.push(PropertyDef {
                    name: name.to_string(),
                    kind,
                });
            }
            "end_header" => break,
            other => return Err(malformed(offset, format!("unknown keyword '{other}'"))),
        }
    }
    let format = format.ok_or_else(|| malformed(pos, "missing format line"))?;
    Ok(PlyHeader {
        format,
        elements,
        comments,
        body_offset: pos,
    })
}
