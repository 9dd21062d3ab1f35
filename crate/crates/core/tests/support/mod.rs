//! Generators and reference implementations shared by the integration
//! tests. Oracles here deliberately avoid the library's own algorithms.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use petgraph::algo::dijkstra;
use petgraph::graph::{NodeIndex, UnGraph};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use surfannot::annotation::LabelLayer;
use surfannot::mesh::{ChannelData, Ray, TriangleMesh};
use surfannot::ply::{ExtraProperty, ScalarType, SurfaceFrame};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------- generators

/// Jittered grid triangulation over roughly `n` vertices with some triangles
/// dropped and a few long-range triangles added, so meshes are irregular,
/// sometimes disconnected and sometimes non-manifold.
pub fn random_mesh(rng: &mut ChaCha8Rng, n: usize) -> TriangleMesh {
    let n = n.max(4);
    let nx = ((n as f64).sqrt().ceil() as usize).max(2);
    let ny = n.div_ceil(nx).max(2);
    let count = nx * ny;
    let positions: Vec<[f32; 3]> = (0..count)
        .map(|v| {
            let (i, j) = (v % nx, v / nx);
            [
                i as f32 + rng.gen_range(-0.3..0.3),
                j as f32 + rng.gen_range(-0.3..0.3),
                rng.gen_range(-0.5..0.5),
            ]
        })
        .collect();
    let mut triangles = Vec::new();
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let a = (j * nx + i) as u32;
            let (b, c) = (a + 1, a + nx as u32);
            let d = c + 1;
            for t in [[a, b, d], [a, d, c]] {
                if rng.gen_bool(0.9) {
                    triangles.push(t);
                }
            }
        }
    }
    for _ in 0..(count / 50).max(1) {
        let mut corners: Vec<u32> = (0..count as u32).collect::<Vec<_>>();
        corners.shuffle(rng);
        triangles.push([corners[0], corners[1], corners[2]]);
    }
    TriangleMesh::new(positions, triangles)
}

/// Random triangles inside the unit cube sharing no vertices.
pub fn random_soup(rng: &mut ChaCha8Rng, triangles: usize) -> TriangleMesh {
    let mut positions = Vec::with_capacity(3 * triangles);
    let mut tris = Vec::with_capacity(triangles);
    for t in 0..triangles {
        let centre: [f32; 3] = [rng.gen(), rng.gen(), rng.gen()];
        for _ in 0..3 {
            positions.push(centre.map(|c| c + rng.gen_range(-0.2..0.2)));
        }
        let base = 3 * t as u32;
        tris.push([base, base + 1, base + 2]);
    }
    TriangleMesh::new(positions, tris)
}

/// A ray from outside the unit cube aimed at a random interior point.
pub fn random_ray(rng: &mut ChaCha8Rng) -> Ray {
    let target: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
    let dir: [f64; 3] = [
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    ];
    let origin = [0, 1, 2].map(|k| target[k] - 3.0 * dir[k]);
    Ray::new(origin, dir).unwrap_or_else(|_| Ray::new([0.5, 0.5, -2.0], [0.0, 0.0, 1.0]).unwrap())
}

pub fn random_channels(rng: &mut ChaCha8Rng, n: usize) -> ChannelData {
    ChannelData::new((0..n).map(|_| rng.gen()).collect(), (0..n).map(|_| rng.gen()).collect())
}

/// A random valid frame. Labels are either absent or contain at least one
/// labelled vertex; extras are sometimes attached.
pub fn random_frame(rng: &mut ChaCha8Rng, n: usize) -> SurfaceFrame {
    let mesh = random_mesh(rng, n);
    let v = mesh.vertex_count();
    let colours = random_channels(rng, v);
    let mut frame = SurfaceFrame::new(mesh, colours);
    if rng.gen_bool(0.6) {
        let mut mask: Vec<bool> = (0..v).map(|_| rng.gen_bool(0.3)).collect();
        let pick = rng.gen_range(0..v);
        mask[pick] = true;
        frame.labels = Some(LabelLayer::from_mask(mask));
    }
    if rng.gen_bool(0.3) {
        frame.extra.push(ExtraProperty {
            name: "nx".into(),
            scalar: ScalarType::F32,
            data: (0..v).flat_map(|_| rng.gen::<f32>().to_le_bytes()).collect(),
        });
        frame.extra.push(ExtraProperty {
            name: "quality".into(),
            scalar: ScalarType::F64,
            data: (0..v).flat_map(|_| rng.gen_range(-1e6..1e6f64).to_le_bytes()).collect(),
        });
    }
    if rng.gen_bool(0.2) {
        frame.extra.push(ExtraProperty {
            name: "alpha".into(),
            scalar: ScalarType::U8,
            data: (0..v).map(|_| rng.gen()).collect(),
        });
    }
    frame
}

// ---------------------------------------------------------------- ASCII PLY

fn extra_value_text(prop: &ExtraProperty, v: usize) -> String {
    let size = prop.scalar.size();
    let b = &prop.data[v * size..(v + 1) * size];
    match prop.scalar {
        ScalarType::I8 => (b[0] as i8).to_string(),
        ScalarType::U8 => b[0].to_string(),
        ScalarType::I16 => i16::from_le_bytes([b[0], b[1]]).to_string(),
        ScalarType::U16 => u16::from_le_bytes([b[0], b[1]]).to_string(),
        ScalarType::I32 => i32::from_le_bytes(b.try_into().unwrap()).to_string(),
        ScalarType::U32 => u32::from_le_bytes(b.try_into().unwrap()).to_string(),
        ScalarType::F32 => f32::from_le_bytes(b.try_into().unwrap()).to_string(),
        ScalarType::F64 => f64::from_le_bytes(b.try_into().unwrap()).to_string(),
    }
}

/// Independent ASCII encoder. Labelled vertices get a blue value drawn from
/// `[128, 255]`, unlabelled ones from `[0, 127]` (or 0 for unlabelled
/// frames), exercising the read threshold. Extras are placed before the
/// colours to vary the property order.
pub fn ascii_ply(frame: &SurfaceFrame, rng: &mut ChaCha8Rng) -> Vec<u8> {
    let mesh = &frame.mesh;
    let mut s = String::new();
    s.push_str("ply\nformat ascii 1.0\ncomment generated by test support\n");
    s.push_str(&format!("element vertex {}\n", mesh.vertex_count()));
    s.push_str("property float x\nproperty float y\nproperty float z\n");
    for p in &frame.extra {
        s.push_str(&format!("property {} {}\n", p.scalar.name(), p.name));
    }
    s.push_str("property uchar red\nproperty uchar green\nproperty uchar blue\n");
    s.push_str(&format!(
        "element face {}\nproperty list uchar int vertex_indices\nend_header\n",
        mesh.triangle_count()
    ));
    for (v, p) in mesh.positions().iter().enumerate() {
        let blue: u8 = match &frame.labels {
            Some(l) if l.get(v) => rng.gen_range(128..=255),
            Some(_) => rng.gen_range(0..128),
            None => 0,
        };
        let mut fields = vec![p[0].to_string(), p[1].to_string(), p[2].to_string()];
        fields.extend(frame.extra.iter().map(|e| extra_value_text(e, v)));
        fields.push(frame.colours.channel0[v].to_string());
        fields.push(frame.colours.channel1[v].to_string());
        fields.push(blue.to_string());
        s.push_str(&fields.join(" "));
        s.push('\n');
    }
    for t in mesh.triangles() {
        s.push_str(&format!("3 {} {} {}\n", t[0], t[1], t[2]));
    }
    s.into_bytes()
}

/// Byte offset just past `end_header\n`.
pub fn body_offset(bytes: &[u8]) -> usize {
    bytes.windows(11).position(|w| w == b"end_header\n").unwrap() + 11
}

/// Independent read of the blue bytes of a file written by `write_ply`,
/// using only the header text to find the vertex stride.
pub fn binary_rgb_columns(bytes: &[u8]) -> (Vec<u8>, Vec<u8>, Vec<u8>) {
    let body = body_offset(bytes);
    let header = std::str::from_utf8(&bytes[..body]).unwrap();
    let mut n = 0usize;
    let mut stride = 0usize;
    let mut red_at = None;
    let mut in_vertex = false;
    for line in header.lines() {
        let w: Vec<&str> = line.split_whitespace().collect();
        match w.as_slice() {
            ["element", "vertex", count] => {
                n = count.parse().unwrap();
                in_vertex = true;
            }
            ["element", ..] => in_vertex = false,
            ["property", ty, name] if in_vertex => {
                if *name == "red" {
                    red_at = Some(stride);
                }
                stride += match *ty {
                    "char" | "uchar" => 1,
                    "short" | "ushort" => 2,
                    "int" | "uint" | "float" => 4,
                    "double" => 8,
                    other => panic!("unexpected type {other}"),
                };
            }
            _ => {}
        }
    }
    let red_at = red_at.unwrap();
    let col = |k: usize| (0..n).map(|v| bytes[body + v * stride + red_at + k]).collect();
    (col(0), col(1), col(2))
}

// ---------------------------------------------------------------- oracles

/// Edge set built directly from triangles.
pub fn edge_set(mesh: &TriangleMesh) -> HashMap<u32, BTreeSet<u32>> {
    let mut adj: HashMap<u32, BTreeSet<u32>> = HashMap::new();
    for t in mesh.triangles() {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            adj.entry(a).or_default().insert(b);
            adj.entry(b).or_default().insert(a);
        }
    }
    adj
}

pub fn edge_length(mesh: &TriangleMesh, a: u32, b: u32) -> f64 {
    let p = mesh.positions()[a as usize];
    let q = mesh.positions()[b as usize];
    let d = [0, 1, 2].map(|k| p[k] as f64 - q[k] as f64);
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

/// Unbounded single-source shortest paths over the edge graph (petgraph).
pub fn full_dijkstra(mesh: &TriangleMesh, seed: u32) -> HashMap<u32, f64> {
    let mut g: UnGraph<(), f64> = UnGraph::with_capacity(mesh.vertex_count(), 3 * mesh.triangle_count());
    for _ in 0..mesh.vertex_count() {
        g.add_node(());
    }
    let mut seen = HashSet::new();
    for t in mesh.triangles() {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            let key = (a.min(b), a.max(b));
            if seen.insert(key) {
                g.add_edge(
                    NodeIndex::new(a as usize),
                    NodeIndex::new(b as usize),
                    edge_length(mesh, a, b),
                );
            }
        }
    }
    dijkstra(&g, NodeIndex::new(seed as usize), None, |e| *e.weight())
        .into_iter()
        .map(|(n, d)| (n.index() as u32, d))
        .collect()
}

/// Region of a stroke by brute force: geodesic via full Dijkstra truncated
/// at the radius, Euclidean by scanning all vertices.
pub fn region_oracle(mesh: &TriangleMesh, seed: u32, radius: f64, euclidean: bool) -> BTreeSet<u32> {
    if euclidean {
        let s = mesh.positions()[seed as usize];
        let s = s.map(|c| c as f64);
        mesh.positions()
            .iter()
            .enumerate()
            .filter(|(_, p)| {
                let d = [0, 1, 2].map(|k| p[k] as f64 - s[k]);
                (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt() <= radius
            })
            .map(|(v, _)| v as u32)
            .chain(std::iter::once(seed))
            .collect()
    } else {
        full_dijkstra(mesh, seed)
            .into_iter()
            .filter(|&(_, d)| d <= radius)
            .map(|(v, _)| v)
            .collect()
    }
}

/// Depth-first flood fill over the induced subgraph `{v : values[v] >= t}`.
pub fn flood_fill(mesh: &TriangleMesh, values: &[u8], seed: u32, threshold: u8) -> BTreeSet<u32> {
    let mut out = BTreeSet::new();
    if values[seed as usize] < threshold {
        return out;
    }
    let edges = edge_set(mesh);
    let mut stack = vec![seed];
    while let Some(v) = stack.pop() {
        if !out.insert(v) {
            continue;
        }
        if let Some(ns) = edges.get(&v) {
            for &n in ns {
                if values[n as usize] >= threshold && !out.contains(&n) {
                    stack.push(n);
                }
            }
        }
    }
    out
}

/// Area of a triangle via Heron's formula (independent of the cross
/// product route).
pub fn heron_area(mesh: &TriangleMesh, t: usize) -> f64 {
    let [a, b, c] = mesh.triangles()[t];
    let (x, y, z) = (
        edge_length(mesh, a, b),
        edge_length(mesh, b, c),
        edge_length(mesh, c, a),
    );
    let s = 0.5 * (x + y + z);
    (s * (s - x) * (s - y) * (s - z)).max(0.0).sqrt()
}

#[derive(Debug, Clone, Copy)]
pub struct BruteHit {
    pub triangle: usize,
    pub t: f64,
}

/// Ray/plane intersection followed by an inside test with signed sub-areas.
pub fn brute_pick(mesh: &TriangleMesh, ray: &Ray) -> Option<BruteHit> {
    let sub = |a: [f64; 3], b: [f64; 3]| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let cross = |a: [f64; 3], b: [f64; 3]| {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let (o, d) = (ray.origin(), ray.direction());
    let mut best: Option<BruteHit> = None;
    for (i, tri) in mesh.triangles().iter().enumerate() {
        let [a, b, c] = tri.map(|v| mesh.positions()[v as usize].map(|x| x as f64));
        let n = cross(sub(b, a), sub(c, a));
        let nn = dot(n, n);
        let denom = dot(n, d);
        if nn == 0.0 || denom.abs() < 1e-15 * nn.sqrt() {
            continue;
        }
        let t = dot(n, sub(a, o)) / denom;
        if t < 0.0 {
            continue;
        }
        let p = [o[0] + t * d[0], o[1] + t * d[1], o[2] + t * d[2]];
        let wa = dot(cross(sub(b, p), sub(c, p)), n) / nn;
        let wb = dot(cross(sub(c, p), sub(a, p)), n) / nn;
        let wc = dot(cross(sub(a, p), sub(b, p)), n) / nn;
        if wa < 0.0 || wb < 0.0 || wc < 0.0 {
            continue;
        }
        if best.is_none_or(|h| t < h.t) {
            best = Some(BruteHit { triangle: i, t });
        }
    }
    best
}

// ---------------------------------------------------------------- misc

/// Parsed track CSV rows: (marker_id, frame, area, vertex_count, centroid).
pub type ParsedTrack = (u64, usize, f64, usize, Option<[f64; 3]>);

pub fn parse_track_csv(text: &str) -> Vec<ParsedTrack> {
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "marker_id,frame,area,vertex_count,centroid_x,centroid_y,centroid_z"
    );
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f.len(), 7, "{l}");
            let centroid = if f[4].is_empty() {
                None
            } else {
                Some([f[4].parse().unwrap(), f[5].parse().unwrap(), f[6].parse().unwrap()])
            };
            (
                f[0].parse().unwrap(),
                f[1].parse().unwrap(),
                f[2].parse().unwrap(),
                f[3].parse().unwrap(),
                centroid,
            )
        })
        .collect()
}

/// Handcrafted malformed `.ply` files, each with a short name.
pub fn corrupt_corpus() -> Vec<(&'static str, Vec<u8>)> {
    const HEAD: &str = "ply\nformat ascii 1.0\nelement vertex 3\nproperty float x\nproperty float y\nproperty float z\nproperty uchar red\nproperty uchar green\nproperty uchar blue\nelement face 1\nproperty list uchar int vertex_indices\nend_header\n";
    const VERTS: &str = "0 0 0 1 2 0\n1 0 0 1 2 0\n0 1 0 1 2 0\n";
    let ascii = |body: &str| format!("{HEAD}{body}").into_bytes();
    let binary_head = "ply\nformat binary_little_endian 1.0\nelement vertex 3\nproperty float x\nproperty float y\nproperty float z\nelement face 1\nproperty list uchar uint vertex_indices\nend_header\n";
    let mut good_binary = binary_head.as_bytes().to_vec();
    for p in [[0f32, 0., 0.], [1., 0., 0.], [0., 1., 0.]] {
        for c in p {
            good_binary.extend_from_slice(&c.to_le_bytes());
        }
    }
    good_binary.push(3);
    for i in [0u32, 1, 2] {
        good_binary.extend_from_slice(&i.to_le_bytes());
    }
    let mut truncated_binary = good_binary.clone();
    truncated_binary.truncate(good_binary.len() - 5);
    let mut trailing_binary = good_binary.clone();
    trailing_binary.extend_from_slice(b"junk");

    vec![
        ("empty", Vec::new()),
        ("bad magic", b"plx\nformat ascii 1.0\nend_header\n".to_vec()),
        ("no format", b"ply\nelement vertex 0\nend_header\n".to_vec()),
        ("big endian", b"ply\nformat binary_big_endian 1.0\nelement vertex 0\nend_header\n".to_vec()),
        ("format version", b"ply\nformat ascii 2.0\nend_header\n".to_vec()),
        ("unknown keyword", b"ply\nformat ascii 1.0\nvertices 3\nend_header\n".to_vec()),
        ("no end_header", b"ply\nformat ascii 1.0\nelement vertex 3\nproperty float x\n".to_vec()),
        ("bad count", b"ply\nformat ascii 1.0\nelement vertex three\nend_header\n".to_vec()),
        ("unknown type", b"ply\nformat ascii 1.0\nelement vertex 1\nproperty real x\nend_header\n".to_vec()),
        ("property first", b"ply\nformat ascii 1.0\nproperty float x\nelement vertex 1\nend_header\n".to_vec()),
        ("ascii truncated", ascii("0 0 0 1 2 0\n1 0 0 1 2 0\n")),
        ("binary truncated", truncated_binary),
        ("quad face", ascii(&format!("{VERTS}4 0 1 2 0\n"))),
        ("index out of range", ascii(&format!("{VERTS}3 0 1 7\n"))),
        ("degenerate face", ascii(&format!("{VERTS}3 0 0 1\n"))),
        ("non-numeric", ascii("0 0 zero 1 2 0\n1 0 0 1 2 0\n0 1 0 1 2 0\n3 0 1 2\n")),
        ("colour overflow", ascii("0 0 0 300 2 0\n1 0 0 1 2 0\n0 1 0 1 2 0\n3 0 1 2\n")),
        (
            "face flags",
            b"ply\nformat ascii 1.0\nelement vertex 3\nproperty float x\nproperty float y\nproperty float z\nelement face 1\nproperty list uchar int vertex_indices\nproperty uchar flags\nend_header\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2 0\n".to_vec(),
        ),
        (
            "vertex list",
            b"ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\nproperty float y\nproperty float z\nproperty list uchar int tags\nend_header\n0 0 0 0\n".to_vec(),
        ),
        ("trailing binary", trailing_binary),
        ("negative index", ascii(&format!("{VERTS}3 0 -1 2\n"))),
        ("nan coordinate", ascii("nan 0 0 1 2 0\n1 0 0 1 2 0\n0 1 0 1 2 0\n3 0 1 2\n")),
        (
            "edge element",
            b"ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\nproperty float y\nproperty float z\nelement edge 0\nproperty int vertex1\nend_header\n0 0 0\n".to_vec(),
        ),
        (
            "uchar coordinate",
            b"ply\nformat ascii 1.0\nelement vertex 1\nproperty uchar x\nproperty float y\nproperty float z\nend_header\n0 0 0\n".to_vec(),
        ),
        ("no vertices", b"ply\nformat ascii 1.0\nelement vertex 0\nend_header\n".to_vec()),
    ]
}

/// Sorted member set helper.
pub fn keys<V>(m: &BTreeMap<u32, V>) -> BTreeSet<u32> {
    m.keys().copied().collect()
}
