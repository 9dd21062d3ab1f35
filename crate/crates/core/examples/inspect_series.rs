//! Write a synthetic series to disk, load it back and print what was read.
//!
//! `cargo run --example inspect_series [DIR]` inspects DIR instead.

use std::path::PathBuf;

use surfannot::ply::{load_series_dir, save_labelled_series};
use surfannot::synthetic::growing_patch_series;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tmp = tempdir()?;
    let dir = match std::env::args().nth(1) {
        Some(d) => PathBuf::from(d),
        None => {
            let (series, _) = growing_patch_series(4, 12);
            save_labelled_series(&series, &tmp, "")?;
            tmp.clone()
        }
    };

    let series = load_series_dir(&dir)?;
    println!("{} frames from {}", series.len(), dir.display());
    for (i, frame) in series.frames().iter().enumerate() {
        let name = frame
            .source_path
            .as_ref()
            .and_then(|p| p.file_name())
            .unwrap_or_default();
        let labelled = frame.labels.as_ref().map_or(0, |l| l.count());
        let bright = frame.colours.channel1.iter().filter(|&&g| g >= 128).count();
        println!(
            "  [{i}] {:<16} V={:<5} T={:<5} area={:.2} labelled={labelled} bright(ch1)={bright}",
            name.to_string_lossy(),
            frame.vertex_count(),
            frame.mesh.triangle_count(),
            frame.mesh.total_area(),
        );
    }
    std::fs::remove_dir_all(&tmp).ok();
    Ok(())
}

fn tempdir() -> std::io::Result<PathBuf> {
    let dir = std::env::temp_dir().join(format!("surfannot-inspect-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    Ok(dir)
}
