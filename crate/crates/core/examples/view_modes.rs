//! Threshold windows, render modes and opacity overrides on one frame.

use surfannot::annotation::BrushStroke;
use surfannot::mesh::DistanceMetric;
use surfannot::session::Project;
use surfannot::synthetic::growing_patch_series;
use surfannot::view::{apply_threshold, ChannelWindow, RenderMode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let window = ChannelWindow::new(100, 200)?;
    for v in [50u8, 100, 150, 175, 200, 250] {
        println!("threshold {v:>3} -> {:>3}", apply_threshold(v, &window));
    }

    let (series, centre) = growing_patch_series(3, 9);
    let mut project = Project::from_series(series, "synthetic");
    project.apply_stroke(&BrushStroke::paint(2, centre, 1.0))?;
    project.set_opacity(2, 0, 2.0, 0.25, DistanceMetric::GeodesicEdgeGraph)?;

    let probe = [centre as usize, centre as usize + 2, 0];
    for mode in [RenderMode::Original, RenderMode::TwoTone, RenderMode::CutOut] {
        let display = project.display(2, Some(mode), None)?;
        let px: Vec<[u8; 4]> = probe.iter().map(|&v| display.vertex(v)).collect();
        println!("{mode:?}: centre {:?} off-patch {:?} corner {:?}", px[0], px[1], px[2]);
    }

    let windows = [ChannelWindow::disabled(), ChannelWindow::new(30, 220)?];
    let display = project.display(2, Some(RenderMode::Original), Some(windows))?;
    println!("windowed green at centre: {}", display.vertex(centre as usize)[1]);
    Ok(())
}
