//! Follow a growing bright patch through a series and print its track.

use surfannot::analysis::{export_track_csv, track_measurements};
use surfannot::annotation::AnnotationState;
use surfannot::synthetic::growing_patch_series;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (series, centre) = growing_patch_series(6, 21);
    let mut state = AnnotationState::new(&series);
    for frame in 0..series.len() {
        state.place_marker_at_vertex(&series, frame, centre)?;
    }
    let table = track_measurements(&series, state.markers(), 1, 128);
    for row in &table.rows {
        println!(
            "frame {} -> {} vertices, area {:.1}",
            row.frame, row.vertex_count, row.area
        );
    }
    print!("\n{}", export_track_csv(&table));
    Ok(())
}
