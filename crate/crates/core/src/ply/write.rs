use std::io::Write;

use super::{PlyError, PlyErrorKind, SurfaceFrame, LABEL_WRITE_VALUE};

/// Encode a frame as `binary_little_endian 1.0`.
///
/// Properties are written as `x y z red green blue` followed by any extra
/// vertex properties in their original order. Blue is 255 on labelled
/// vertices and 0 elsewhere. Faces use `list uchar uint vertex_indices`.
pub fn write_ply(frame: &SurfaceFrame) -> Result<Vec<u8>, PlyError> {
    frame
        .check()
        .map_err(|e| PlyError::new(0, PlyErrorKind::InvalidFrame(e)))?;
    let mesh = &frame.mesh;
    let n = mesh.vertex_count();
    let vertex_stride = 15 + frame.extra.iter().map(|p| p.scalar.size()).sum::<usize>();
    let mut out = Vec::with_capacity(256 + n * vertex_stride + mesh.triangle_count() * 13);

    let mut header = format!(
        "ply\nformat binary_little_endian 1.0\nelement vertex {n}\n\
         property float x\nproperty float y\nproperty float z\n\
         property uchar red\nproperty uchar green\nproperty uchar blue\n"
    );
    for prop in &frame.extra {
        header.push_str(&format!("property {} {}\n", prop.scalar.name(), prop.name));
    }
    header.push_str(&format!(
        "element face {}\nproperty list uchar uint vertex_indices\nend_header\n",
        mesh.triangle_count()
    ));
    out.write_all(header.as_bytes()).expect("write to Vec");

    let labels = frame.labels.as_ref();
    for (v, p) in mesh.positions().iter().enumerate() {
        for c in p {
            out.extend_from_slice(&c.to_le_bytes());
        }
        out.push(frame.colours.channel0[v]);
        out.push(frame.colours.channel1[v]);
        out.push(match labels {
            Some(l) if l.get(v) => LABEL_WRITE_VALUE,
            _ => 0,
        });
        for prop in &frame.extra {
            let size = prop.scalar.size();
            out.extend_from_slice(&prop.data[v * size..(v + 1) * size]);
        }
    }
    for tri in mesh.triangles() {
        out.push(3);
        for i in tri {
            out.extend_from_slice(&i.to_le_bytes());
        }
    }
    Ok(out)
}
