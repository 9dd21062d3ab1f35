use super::header::{parse_header, PlyFormat, PlyHeader, PropertyKind, ScalarType};
use super::{ExtraProperty, PlyError, PlyErrorKind, SurfaceFrame, LABEL_READ_THRESHOLD};
use crate::annotation::LabelLayer;
use crate::mesh::{validate_mesh, ChannelData, TriangleMesh};

#[derive(Debug, Clone, Copy)]
enum Scalar {
    I8(i8),
    U8(u8),
    I16(i16),
    U16(u16),
    I32(i32),
    U32(u32),
    F32(f32),
    F64(f64),
}

impl Scalar {
    fn push_le(self, out: &mut Vec<u8>) {
        match self {
            Self::I8(v) => out.extend_from_slice(&v.to_le_bytes()),
            Self::U8(v) => out.push(v),
            Self::I16(v) => out.extend_from_slice(&v.to_le_bytes()),
            Self::U16(v) => out.extend_from_slice(&v.to_le_bytes()),
            Self::I32(v) => out.extend_from_slice(&v.to_le_bytes()),
            Self::U32(v) => out.extend_from_slice(&v.to_le_bytes()),
            Self::F32(v) => out.extend_from_slice(&v.to_le_bytes()),
            Self::F64(v) => out.extend_from_slice(&v.to_le_bytes()),
        }
    }

    fn as_integer(self) -> Option<i64> {
        Some(match self {
            Self::I8(v) => v as i64,
            Self::U8(v) => v as i64,
            Self::I16(v) => v as i64,
            Self::U16(v) => v as i64,
            Self::I32(v) => v as i64,
            Self::U32(v) => v as i64,
            Self::F32(_) | Self::F64(_) => return None,
        })
    }
}

/// A stream of typed scalars from either body encoding.
trait ValueSource {
    fn offset(&self) -> usize;
    fn scalar(&mut self, ty: ScalarType) -> Result<Scalar, PlyError>;
    fn finish(&mut self) -> Result<(), PlyError>;
}

struct BinarySource<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl BinarySource<'_> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N], PlyError> {
        let end = self.pos + N;
        let chunk = self
            .bytes
            .get(self.pos..end)
            .ok_or_else(|| PlyError::new(self.bytes.len(), PlyErrorKind::Truncated))?;
        self.pos = end;
        Ok(chunk.try_into().expect("slice length checked"))
    }
}

impl ValueSource for BinarySource<'_> {
    fn offset(&self) -> usize {
        self.pos
    }

    fn scalar(&mut self, ty: ScalarType) -> Result<Scalar, PlyError> {
        Ok(match ty {
            ScalarType::I8 => Scalar::I8(i8::from_le_bytes(self.take()?)),
            ScalarType::U8 => Scalar::U8(self.take::<1>()?[0]),
            ScalarType::I16 => Scalar::I16(i16::from_le_bytes(self.take()?)),
            ScalarType::U16 => Scalar::U16(u16::from_le_bytes(self.take()?)),
            ScalarType::I32 => Scalar::I32(i32::from_le_bytes(self.take()?)),
            ScalarType::U32 => Scalar::U32(u32::from_le_bytes(self.take()?)),
            ScalarType::F32 => Scalar::F32(f32::from_le_bytes(self.take()?)),
            ScalarType::F64 => Scalar::F64(f64::from_le_bytes(self.take()?)),
        })
    }

    fn finish(&mut self) -> Result<(), PlyError> {
        if self.pos == self.bytes.len() {
            Ok(())
        } else {
            Err(PlyError::new(self.pos, PlyErrorKind::TrailingData))
        }
    }
}

struct AsciiSource<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> AsciiSource<'a> {
    fn skip_whitespace(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn token(&mut self) -> Result<(usize, &'a str), PlyError> {
        self.skip_whitespace();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(PlyError::new(start, PlyErrorKind::Truncated));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos])
            .map_err(|_| PlyError::new(start, PlyErrorKind::InvalidValue("non-ASCII token".into())))?;
        Ok((start, text))
    }
}

fn parse_int<T: TryFrom<i64>>(offset: usize, text: &str) -> Result<T, PlyError> {
    text.parse::<i64>()
        .ok()
        .and_then(|v| T::try_from(v).ok())
        .ok_or_else(|| PlyError::new(offset, PlyErrorKind::InvalidValue(text.into())))
}

fn parse_float<T: std::str::FromStr>(offset: usize, text: &str) -> Result<T, PlyError> {
    text.parse::<T>()
        .map_err(|_| PlyError::new(offset, PlyErrorKind::InvalidValue(text.into())))
}

impl ValueSource for AsciiSource<'_> {
    fn offset(&self) -> usize {
        self.pos
    }

    fn scalar(&mut self, ty: ScalarType) -> Result<Scalar, PlyError> {
        let (at, text) = self.token()?;
        Ok(match ty {
            ScalarType::I8 => Scalar::I8(parse_int(at, text)?),
            ScalarType::U8 => Scalar::U8(parse_int(at, text)?),
            ScalarType::I16 => Scalar::I16(parse_int(at, text)?),
            ScalarType::U16 => Scalar::U16(parse_int(at, text)?),
            ScalarType::I32 => Scalar::I32(parse_int(at, text)?),
            ScalarType::U32 => Scalar::U32(parse_int(at, text)?),
            ScalarType::F32 => Scalar::F32(parse_float(at, text)?),
            ScalarType::F64 => Scalar::F64(parse_float(at, text)?),
        })
    }

    fn finish(&mut self) -> Result<(), PlyError> {
        self.skip_whitespace();
        if self.pos == self.bytes.len() {
            Ok(())
        } else {
            Err(PlyError::new(self.pos, PlyErrorKind::TrailingData))
        }
    }
}

/// Where each vertex property goes.
#[derive(Clone, Copy)]
enum Slot {
    Coord(usize),
    Red,
    Green,
    Blue,
    Extra(usize),
}

struct Layout {
    vertex_slots: Vec<(Slot, ScalarType)>,
    extras: Vec<ExtraProperty>,
    has_blue: bool,
    face_types: Option<(ScalarType, ScalarType)>,
}

fn unsupported_vertex(offset: usize, name: &str, kind: &PropertyKind) -> PlyError {
    let ty = match kind {
        PropertyKind::Scalar(t) => t.name().to_string(),
        PropertyKind::List { .. } => "list".to_string(),
    };
    PlyError::new(offset, PlyErrorKind::UnsupportedVertexProperty(format!("{ty} {name}")))
}

fn layout(header: &PlyHeader) -> Result<Layout, PlyError> {
    let mut vertex_slots = Vec::new();
    let mut extras = Vec::new();
    let mut coords = [false; 3];
    let mut has_blue = false;
    let mut face_types = None;
    let mut seen_vertex = false;
    for element in &header.elements {
        match element.name.as_str() {
            "vertex" => {
                seen_vertex = true;
                for prop in &element.properties {
                    let name = prop.name.as_str();
                    let slot = match (name, &prop.kind) {
                        ("x" | "y" | "z", PropertyKind::Scalar(t @ (ScalarType::F32 | ScalarType::F64))) => {
                            let axis = (name.as_bytes()[0] - b'x') as usize;
                            coords[axis] = true;
                            (Slot::Coord(axis), *t)
                        }
                        ("red", PropertyKind::Scalar(ScalarType::U8)) => (Slot::Red, ScalarType::U8),
                        ("green", PropertyKind::Scalar(ScalarType::U8)) => (Slot::Green, ScalarType::U8),
                        ("blue", PropertyKind::Scalar(ScalarType::U8)) => {
                            has_blue = true;
                            (Slot::Blue, ScalarType::U8)
                        }
                        ("x" | "y" | "z" | "red" | "green" | "blue", kind) => {
                            return Err(unsupported_vertex(element.offset, name, kind))
                        }
                        (_, PropertyKind::Scalar(t)) => {
                            extras.push(ExtraProperty {
                                name: name.to_string(),
                                scalar: *t,
                                data: Vec::with_capacity(element.count as usize * t.size()),
                            });
                            (Slot::Extra(extras.len() - 1), *t)
                        }
                        (_, kind) => return Err(unsupported_vertex(element.offset, name, kind)),
                    };
                    vertex_slots.push(slot);
                }
            }
            "face" => {
                if !seen_vertex {
                    return Err(PlyError::new(
                        element.offset,
                        PlyErrorKind::MalformedHeader("face element before vertex element".into()),
                    ));
                }
                match element.properties.as_slice() {
                    [prop] if prop.name == "vertex_indices" || prop.name == "vertex_index" => match prop.kind {
                        PropertyKind::List { count, item } if item.is_integer() => {
                            face_types = Some((count, item));
                        }
                        _ => {
                            return Err(PlyError::new(
                                element.offset,
                                PlyErrorKind::UnknownFaceProperty(format!("{} (not an integer list)", prop.name)),
                            ))
                        }
                    },
                    [] => {
                        return Err(PlyError::new(
                            element.offset,
                            PlyErrorKind::MalformedHeader("face element without vertex_indices".into()),
                        ))
                    }
                    props => {
                        let unknown = props
                            .iter()
                            .find(|p| p.name != "vertex_indices" && p.name != "vertex_index")
                            .unwrap_or(&props[1]);
                        return Err(PlyError::new(
                            element.offset,
                            PlyErrorKind::UnknownFaceProperty(unknown.name.clone()),
                        ));
                    }
                }
            }
            other => {
                return Err(PlyError::new(
                    element.offset,
                    PlyErrorKind::UnsupportedElement(other.to_string()),
                ))
            }
        }
    }
    if !seen_vertex {
        return Err(PlyError::new(
            header.body_offset,
            PlyErrorKind::MalformedHeader("no vertex element".into()),
        ));
    }
    for (axis, name) in ["x", "y", "z"].into_iter().enumerate() {
        if !coords[axis] {
            return Err(PlyError::new(header.body_offset, PlyErrorKind::MissingProperty(name)));
        }
    }
    Ok(Layout {
        vertex_slots,
        extras,
        has_blue,
        face_types,
    })
}

/// Parse a complete `.ply` file into a frame.
///
/// Red and green become channels 0 and 1 (missing colour properties read as
/// zero). The blue channel becomes the label layer when at least one vertex
/// has blue `>= 128`; otherwise the frame has no labels.
pub fn parse_ply(bytes: &[u8]) -> Result<SurfaceFrame, PlyError> {
    let header = parse_header(bytes)?;
    let layout = layout(&header)?;
    match header.format {
        PlyFormat::Ascii => read_body(
            &header,
            layout,
            AsciiSource {
                bytes,
                pos: header.body_offset,
            },
        ),
        PlyFormat::BinaryLittleEndian => read_body(
            &header,
            layout,
            BinarySource {
                bytes,
                pos: header.body_offset,
            },
        ),
    }
}

fn read_body<S: ValueSource>(header: &PlyHeader, mut layout: Layout, mut src: S) -> Result<SurfaceFrame, PlyError> {
    let mut positions: Vec<[f32; 3]> = Vec::new();
    let mut red = Vec::new();
    let mut green = Vec::new();
    let mut blue = Vec::new();
    let mut triangles: Vec<[u32; 3]> = Vec::new();

    for element in &header.elements {
        let count = element.count as usize;
        if element.name == "vertex" {
            positions.reserve(count);
            red.reserve(count);
            green.reserve(count);
            blue.reserve(count);
            for _ in 0..count {
                let mut p = [0f32; 3];
                let (mut r, mut g, mut b) = (0u8, 0u8, 0u8);
                for &(slot, ty) in &layout.vertex_slots {
                    let value = src.scalar(ty)?;
                    match (slot, value) {
                        (Slot::Coord(axis), Scalar::F32(v)) => p[axis] = v,
                        (Slot::Coord(axis), Scalar::F64(v)) => p[axis] = v as f32,
                        (Slot::Red, Scalar::U8(v)) => r = v,
                        (Slot::Green, Scalar::U8(v)) => g = v,
                        (Slot::Blue, Scalar::U8(v)) => b = v,
                        (Slot::Extra(i), v) => v.push_le(&mut layout.extras[i].data),
                        _ => unreachable!("layout fixes scalar types"),
                    }
                }
                positions.push(p);
                red.push(r);
                green.push(g);
                blue.push(b);
            }
        } else {
            let (count_ty, item_ty) = layout.face_types.expect("face layout checked");
            triangles.reserve(count);
            for _ in 0..count {
                let at = src.offset();
                let n = src.scalar(count_ty)?.as_integer().expect("integer count type");
                if n != 3 {
                    if n < 0 {
                        return Err(PlyError::new(at, PlyErrorKind::InvalidValue(n.to_string())));
                    }
                    return Err(PlyError::new(at, PlyErrorKind::NonTriangleFace(n as u64)));
                }
                let mut tri = [0u32; 3];
                for corner in &mut tri {
                    let at = src.offset();
                    let index = src.scalar(item_ty)?.as_integer().expect("integer index type");
                    *corner = u32::try_from(index)
                        .map_err(|_| PlyError::new(at, PlyErrorKind::InvalidValue(index.to_string())))?;
                }
                triangles.push(tri);
            }
        }
    }
    src.finish()?;

    let mesh = TriangleMesh::new(positions, triangles);
    let colours = ChannelData::new(red, green);
    let report = validate_mesh(&mesh, &colours);
    if !report.is_empty() {
        return Err(PlyError::new(header.body_offset, PlyErrorKind::InvalidMesh(report)));
    }
    let labels = if layout.has_blue {
        Some(LabelLayer::from_mask(
            blue.iter().map(|&b| b >= LABEL_READ_THRESHOLD).collect(),
        ))
    } else {
        None
    };
    let mut frame = SurfaceFrame::new(mesh, colours);
    frame.extra = layout.extras;
    if let Some(labels) = labels {
        frame.set_labels(labels);
    }
    Ok(frame)
}
