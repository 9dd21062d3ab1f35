mod support;

use support::*;
use surfannot::annotation::BrushStroke;
use surfannot::ply::{save_labelled_series, SurfaceSeries};
use surfannot::session::{CursorCommand, Manifest, Project, SessionError, MANIFEST_FILE};
use surfannot::synthetic::growing_patch_series;
use surfannot::view::{ChannelWindow, RenderMode};

fn saved_project() -> (tempfile::TempDir, Project) {
    let mut rng = rng(12);
    let series = SurfaceSeries::new((0..3).map(|_| random_frame(&mut rng, 100)).collect()).unwrap();
    let mut project = Project::from_series(series, "mem");
    project.apply_stroke(&BrushStroke::paint(1, 5, 1.5)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    project.save(dir.path()).unwrap();
    (dir, project)
}

#[test]
fn manifest_lists_frames_with_checksums() {
    let (dir, project) = saved_project();
    let text = std::fs::read_to_string(dir.path().join(MANIFEST_FILE)).unwrap();
    let manifest: Manifest = serde_json::from_str(&text).unwrap();
    assert_eq!(manifest.version, 1);
    assert_eq!(manifest.markers_file, "markers.csv");
    for (entry, frame) in manifest.frames.iter().zip(project.series().frames()) {
        let bytes = std::fs::read(dir.path().join(&entry.file)).unwrap();
        assert_eq!(entry.sha256, surfannot::session::sha256_hex(&bytes));
        assert_eq!(entry.vertices, frame.vertex_count());
        assert_eq!(entry.triangles, frame.mesh.triangle_count());
    }
    assert!(!project.is_dirty());
}

#[test]
fn manifest_order_wins_over_file_names() {
    let (dir, _) = saved_project();
    let path = dir.path().join(MANIFEST_FILE);
    let mut manifest: Manifest = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    manifest.frames.reverse();
    std::fs::write(&path, serde_json::to_string(&manifest).unwrap()).unwrap();
    let reopened = Project::open(dir.path()).unwrap();
    let files: Vec<_> = reopened.summary().frames.into_iter().map(|f| f.file.unwrap()).collect();
    let expected: Vec<_> = manifest.frames.iter().map(|f| f.file.clone()).collect();
    assert_eq!(files, expected);
}

#[test]
fn bad_manifests_are_rejected() {
    let (dir, _) = saved_project();
    let path = dir.path().join(MANIFEST_FILE);
    let original = std::fs::read_to_string(&path).unwrap();

    std::fs::write(&path, original.replace("\"version\": 1", "\"version\": 7")).unwrap();
    assert!(matches!(Project::open(dir.path()), Err(SessionError::Manifest(_))));

    std::fs::write(
        &path,
        original.replace("frame_0000_labelled.ply", "../frame_0000_labelled.ply"),
    )
    .unwrap();
    assert!(matches!(Project::open(dir.path()), Err(SessionError::Manifest(_))));

    std::fs::write(&path, "{").unwrap();
    assert!(matches!(Project::open(dir.path()), Err(SessionError::Manifest(_))));
}

#[test]
fn directory_without_manifest_opens_with_markers() {
    let (series, centre) = growing_patch_series(3, 7);
    let dir = tempfile::tempdir().unwrap();
    save_labelled_series(&series, dir.path(), "").unwrap();
    let p = series.frames()[2].mesh.positions()[centre as usize];
    std::fs::write(
        dir.path().join("markers.csv"),
        format!("frame,x,y,z,vertex_index\n2,{},{},{},{centre}\n", p[0], p[1], p[2]),
    )
    .unwrap();
    let project = Project::open(dir.path()).unwrap();
    assert_eq!(project.frame_count(), 3);
    assert_eq!(project.annotations().markers().len(), 1);
    assert!(!project.summary().mixed_labels);

    std::fs::write(dir.path().join("markers.csv"), "frame,x,y,z,vertex_index\n9,0,0,0,0\n").unwrap();
    assert!(matches!(Project::open(dir.path()), Err(SessionError::Markers { .. })));
}

#[test]
fn version_and_dirty_tracking() {
    let (series, _) = growing_patch_series(4, 7);
    let mut project = Project::from_series(series, "mem");
    assert_eq!((project.version(), project.is_dirty()), (0, false));
    project.apply_stroke(&BrushStroke::paint(0, 3, 1.0)).unwrap();
    assert_eq!((project.version(), project.is_dirty()), (1, true));
    assert!(project.apply_stroke(&BrushStroke::paint(0, 3, -1.0)).is_err());
    assert_eq!(project.version(), 1);
    project.undo();
    assert_eq!(project.version(), 2);
    assert!(project.undo().is_none());
    assert_eq!(project.version(), 2);

    assert_eq!(project.move_cursor(CursorCommand::Frame(10)).frame, 3);
    assert_eq!(project.move_cursor(CursorCommand::Step(-2)).frame, 1);
    assert_eq!(project.move_cursor(CursorCommand::FrameRate(-3.0)).frame_rate, 5.0);

    project.set_view_defaults(
        [ChannelWindow::disabled(), ChannelWindow::new(10, 20).unwrap()],
        RenderMode::CutOut,
    );
    assert_eq!(project.view().mode, RenderMode::CutOut);
    assert!(matches!(
        project.display(4, None, None),
        Err(SessionError::FrameOutOfRange { .. })
    ));
}

#[test]
fn cut_out_blocks_unlabelled() {
    let (series, centre) = growing_patch_series(1, 9);
    let mut project = Project::from_series(series, "mem");
    let changed = project.apply_stroke(&BrushStroke::paint(0, centre, 1.0)).unwrap();
    let frame = &project.series().frames()[0];
    let display = project.display(0, Some(RenderMode::CutOut), None).unwrap();
    for v in 0..display.vertex_count() {
        let want = if changed.contains(&(v as u32)) {
            [frame.colours.channel0[v], frame.colours.channel1[v], 0, 255]
        } else {
            [40, 40, 40, 255]
        };
        assert_eq!(display.vertex(v), want, "vertex {v}");
    }
    let two_tone = project.display(0, Some(RenderMode::TwoTone), None).unwrap();
    assert_eq!(two_tone.vertex(centre as usize), [255, 255, 0, 255]);
}
