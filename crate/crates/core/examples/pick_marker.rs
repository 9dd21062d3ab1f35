//! Cast rays at a sphere, drop markers on the hits and print the marker CSV.

use surfannot::annotation::{export_markers_csv, import_markers_csv, AnnotationState};
use surfannot::mesh::{ray_pick, ChannelData, Ray};
use surfannot::ply::{SurfaceFrame, SurfaceSeries};
use surfannot::synthetic::uv_sphere;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mesh = uv_sphere(16, 24, 1.0);
    let colours = ChannelData::uniform(mesh.vertex_count(), 200, 50);
    let series = SurfaceSeries::new(vec![SurfaceFrame::new(mesh, colours)]).expect("one frame");
    let mut state = AnnotationState::new(&series);

    let rays = [
        Ray::new([0.0, 0.0, 5.0], [0.0, 0.0, -1.0])?,
        Ray::new([5.0, 0.3, 0.1], [-1.0, 0.0, 0.0])?,
        Ray::new([3.0, 3.0, 3.0], [-1.0, -1.0, -1.0])?,
        Ray::new([0.0, 5.0, 0.0], [0.0, 1.0, 0.0])?,
    ];
    for ray in &rays {
        match ray_pick(&series.frames()[0].mesh, ray)? {
            Some(hit) => {
                let marker = state.place_marker(&series, 0, &hit)?;
                println!(
                    "hit triangle {} at t={:.4}, marker {} on vertex {}",
                    hit.triangle_index, hit.distance, marker.id, marker.vertex_index
                );
            }
            None => println!("ray from {:?} missed", ray.origin()),
        }
    }

    let csv = export_markers_csv(state.markers());
    print!("\n{csv}");
    let back = import_markers_csv(csv.as_bytes(), &series)?;
    assert!(back.same_payload(state.markers()));
    Ok(())
}
