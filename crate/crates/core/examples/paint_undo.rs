//! Paint and erase on a grid, walk the undo history, and save the labels.

use surfannot::annotation::{AnnotationState, BrushStroke};
use surfannot::mesh::{ChannelData, DistanceMetric};
use surfannot::ply::{load_series_dir, save_labelled_series, SurfaceFrame, SurfaceSeries};
use surfannot::synthetic::grid_mesh;

fn show(state: &AnnotationState, nx: usize) {
    let layer = state.layer(0).unwrap();
    for row in layer.as_slice().chunks(nx) {
        println!(
            "  {}",
            row.iter().map(|&l| if l { '#' } else { '.' }).collect::<String>()
        );
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let nx = 20;
    let mesh = grid_mesh(nx, 10, 1.0);
    let colours = ChannelData::uniform(mesh.vertex_count(), 120, 120);
    let series = SurfaceSeries::new(vec![SurfaceFrame::new(mesh, colours)]).expect("one frame");
    let mut state = AnnotationState::new(&series);

    let changed = state.apply_stroke(&series, &BrushStroke::paint(0, 5 * nx as u32 + 5, 3.0))?;
    println!("geodesic paint changed {} vertices", changed.len());
    let stroke = BrushStroke::paint(0, 5 * nx as u32 + 14, 3.0).with_metric(DistanceMetric::Euclidean);
    println!(
        "euclidean paint changed {} vertices",
        state.apply_stroke(&series, &stroke)?.len()
    );
    println!(
        "erase changed {} vertices",
        state
            .apply_stroke(&series, &BrushStroke::erase(0, 5 * nx as u32 + 8, 2.0))?
            .len()
    );
    show(&state, nx);

    state.undo();
    println!("after undo (erase reverted):");
    show(&state, nx);
    state.redo();
    println!("undo depth {}, redo depth {}", state.undo_depth(), state.redo_depth());

    let dir = std::env::temp_dir().join(format!("surfannot-paint-{}", std::process::id()));
    let written = save_labelled_series(&state.labelled_series(&series), &dir, "_labelled")?;
    println!("wrote {}", written[0].display());
    let reloaded = load_series_dir(&dir)?;
    assert_eq!(reloaded.frames()[0].labels.as_ref(), state.layer(0));
    std::fs::remove_dir_all(&dir).ok();
    Ok(())
}
