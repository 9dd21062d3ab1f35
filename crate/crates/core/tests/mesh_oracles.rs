mod support;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use support::*;
use surfannot::mesh::{ray_pick, surface_distances, triangle_area, DistanceMetric, MeshError, Ray, TriangleMesh};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pick_matches_brute_force(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let count = rng.gen_range(1..80);
        let mesh = random_soup(&mut rng, count);
        for _ in 0..50 {
            let ray = random_ray(&mut rng);
            let got = ray_pick(&mesh, &ray).unwrap();
            let want = brute_pick(&mesh, &ray);
            prop_assert_eq!(got.map(|h| h.triangle_index as usize), want.map(|h| h.triangle));
            if let (Some(g), Some(w)) = (got, want) {
                prop_assert!((g.distance - w.t).abs() <= 1e-9 * w.t.max(1.0));
                let sum: f64 = g.barycentric.iter().sum();
                prop_assert!((sum - 1.0).abs() < 1e-12);
                prop_assert!(g.barycentric.iter().all(|&b| b >= 0.0));
                let tri = mesh.triangles()[g.triangle_index as usize];
                let best = (0..3)
                    .max_by(|&a, &b| g.barycentric[a].total_cmp(&g.barycentric[b]).then(tri[b].cmp(&tri[a])))
                    .unwrap();
                prop_assert_eq!(g.nearest_vertex, tri[best]);
            }
        }
    }

    #[test]
    fn geodesic_distances_match_dijkstra(seed in any::<u64>(), n in 4usize..300, radius in 0.0f64..6.0) {
        let mut rng = rng(seed);
        let mesh = random_mesh(&mut rng, n);
        let source = rng.gen_range(0..mesh.vertex_count() as u32);
        let got = surface_distances(&mesh, source as usize, radius, DistanceMetric::GeodesicEdgeGraph).unwrap();
        let full = full_dijkstra(&mesh, source);
        let want: std::collections::BTreeSet<u32> = full.iter().filter(|(_, &d)| d <= radius).map(|(&v, _)| v).collect();
        prop_assert_eq!(keys(&got), want);
        for (v, d) in &got {
            prop_assert!((d - full[v]).abs() <= 1e-12 * full[v].max(1.0));
        }
    }

    #[test]
    fn region_grows_with_radius(seed in any::<u64>(), r1 in 0.0f64..3.0, extra in 0.0f64..3.0) {
        let mut rng = rng(seed);
        let mesh = random_mesh(&mut rng, 150);
        let source = rng.gen_range(0..mesh.vertex_count());
        for metric in [DistanceMetric::GeodesicEdgeGraph, DistanceMetric::Euclidean] {
            let small = keys(&surface_distances(&mesh, source, r1, metric).unwrap());
            let large = keys(&surface_distances(&mesh, source, r1 + extra, metric).unwrap());
            prop_assert!(small.contains(&(source as u32)));
            prop_assert!(small.is_subset(&large));
        }
    }

    #[test]
    fn euclidean_region_matches_scan(seed in any::<u64>(), radius in 0.0f64..4.0) {
        let mut rng = rng(seed);
        let mesh = random_mesh(&mut rng, 200);
        let source = rng.gen_range(0..mesh.vertex_count() as u32);
        let got = surface_distances(&mesh, source as usize, radius, DistanceMetric::Euclidean).unwrap();
        prop_assert_eq!(keys(&got), region_oracle(&mesh, source, radius, true));
    }

    #[test]
    fn area_invariant_under_relabelling_and_rigid_motion(seed in any::<u64>(), angle in 0.0f64..std::f64::consts::TAU) {
        let mut rng = rng(seed);
        let mesh = random_mesh(&mut rng, 120);
        let total = mesh.total_area();
        let heron: f64 = (0..mesh.triangle_count()).map(|t| heron_area(&mesh, t)).sum();
        prop_assert!((total - heron).abs() <= 1e-9 * total.max(1.0));

        let mut perm: Vec<u32> = (0..mesh.vertex_count() as u32).collect();
        perm.shuffle(&mut rng);
        let mut positions = vec![[0.0f32; 3]; mesh.vertex_count()];
        for (old, &new) in perm.iter().enumerate() {
            positions[new as usize] = mesh.positions()[old];
        }
        let mut triangles: Vec<[u32; 3]> = mesh.triangles().iter().map(|t| t.map(|v| perm[v as usize])).collect();
        triangles.shuffle(&mut rng);
        let relabelled = TriangleMesh::new(positions, triangles);
        prop_assert!((relabelled.total_area() - total).abs() <= 1e-9 * total.max(1.0));

        let (s, c) = angle.sin_cos();
        let shift: [f64; 3] = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
        let moved: Vec<[f32; 3]> = mesh
            .positions()
            .iter()
            .map(|p| {
                let [x, y, z] = p.map(f64::from);
                [(c * x - s * y + shift[0]) as f32, (s * x + c * y + shift[1]) as f32, (z + shift[2]) as f32]
            })
            .collect();
        let moved = TriangleMesh::new(moved, mesh.triangles().to_vec());
        // Only f32 rounding of the moved coordinates separates the two.
        prop_assert!((moved.total_area() - total).abs() <= 1e-5 * total.max(1.0));
    }
}

#[test]
fn adjacency_matches_triangle_edges() {
    let mut rng = rng(7);
    for _ in 0..20 {
        let mesh = random_mesh(&mut rng, 300);
        let adj = mesh.adjacency().unwrap();
        let edges = edge_set(&mesh);
        let mut total = 0;
        for v in 0..mesh.vertex_count() {
            let want: Vec<u32> = edges
                .get(&(v as u32))
                .map(|s| s.iter().copied().collect())
                .unwrap_or_default();
            assert_eq!(adj.neighbours(v), want.as_slice());
            for (n, len) in adj.edges(v) {
                assert_eq!(len, edge_length(&mesh, v as u32, n));
                assert!(adj.contains(n as usize, v as u32));
            }
            total += want.len();
        }
        assert_eq!(adj.edge_count(), total / 2);
    }
}

#[test]
fn pick_tie_goes_to_lower_triangle() {
    let tri = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
    let mesh = TriangleMesh::new([tri, tri].concat(), vec![[3, 4, 5], [0, 1, 2]]);
    let ray = Ray::new([0.2, 0.2, 1.0], [0.0, 0.0, -1.0]).unwrap();
    let hit = ray_pick(&mesh, &ray).unwrap().unwrap();
    assert_eq!(hit.triangle_index, 0);
    assert!((hit.distance - 1.0).abs() < 1e-12);
}

#[test]
fn pick_on_shared_edge_hits_something() {
    let mesh = surfannot::synthetic::grid_mesh(3, 3, 1.0);
    let ray = Ray::new([0.5, 0.5, 2.0], [0.0, 0.0, -1.0]).unwrap();
    let hit = ray_pick(&mesh, &ray).unwrap().expect("diagonal hit");
    assert!((hit.point[0] - 0.5).abs() < 1e-12 && (hit.point[1] - 0.5).abs() < 1e-12);
}

#[test]
fn invalid_inputs_are_errors() {
    let mesh = surfannot::synthetic::grid_mesh(3, 3, 1.0);
    assert!(matches!(
        surface_distances(&mesh, 99, 1.0, DistanceMetric::default()),
        Err(MeshError::VertexOutOfRange { .. })
    ));
    assert!(matches!(
        surface_distances(&mesh, 0, -1.0, DistanceMetric::default()),
        Err(MeshError::InvalidRadius(_))
    ));
    assert!(surface_distances(&mesh, 0, f64::NAN, DistanceMetric::default()).is_err());
    assert!(Ray::new([0.0; 3], [0.0; 3]).is_err());
    assert!(Ray::new([f64::NAN, 0.0, 0.0], [0.0, 0.0, 1.0]).is_err());
    assert!(TriangleMesh::try_new(vec![[0.0; 3]; 3], vec![[0, 1, 3]]).is_err());
    assert!((triangle_area(&mesh, 0) - 0.5).abs() < 1e-12);
}
