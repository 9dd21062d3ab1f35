//! Project lifecycle: open a directory of frames, own the annotation and
//! view state, save everything back. [`http`] exposes a project over HTTP and
//! [`cli`] implements the batch commands.
//!
//! A [`Project`] is the single writer for its annotation state. Every
//! successful mutation increments [`Project::version`].

pub mod cli;
pub mod http;
mod manifest;

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{track_measurements, TrackTable};
use crate::annotation::{
    export_markers_csv, import_markers_csv, AnnotationError, AnnotationSnapshot, AnnotationState, BrushStroke,
    CsvError, Delta, Marker, MarkerId,
};
use crate::mesh::{ray_pick, surface_distances, DistanceMetric, MeshError, PickHit, Ray, TriangleMesh};
use crate::ply::{
    load_files_in_order, load_series_dir, save_labelled_series, SeriesError, SurfaceSeries, DEFAULT_LABEL_SUFFIX,
};
use crate::view::{
    compose_display, set_opacity_region, OpacityOverride, RenderMode, ThresholdWindow, VertexDisplay, ViewError,
};

pub use manifest::{sha256_hex, Manifest, ManifestFrame, MANIFEST_FILE, MANIFEST_VERSION};

pub const DEFAULT_MARKERS_FILE: &str = "markers.csv";
pub const DEFAULT_PORT: u16 = 8047;
pub const PORT_ENV: &str = "SURFANNOT_PORT";
pub const DEFAULT_FRAME_RATE: f32 = 5.0;

#[derive(Debug, Error)]
pub enum SessionError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{file}: {source}")]
    Markers { file: PathBuf, source: CsvError },
    #[error("manifest: {0}")]
    Manifest(String),
    #[error("integrity check failed for {file}: expected sha256 {expected}, found {actual}")]
    Integrity {
        file: String,
        expected: String,
        actual: String,
    },
    #[error("frame {frame} out of range (frame count {count})")]
    FrameOutOfRange { frame: usize, count: usize },
    #[error(transparent)]
    Annotation(#[from] AnnotationError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    View(#[from] ViewError),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> SessionError + '_ {
    move |source| SessionError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Current time position for playback.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaybackCursor {
    pub frame: usize,
    pub playing: bool,
    /// Frames per second; a preference for clients, the server keeps no timer.
    pub frame_rate: f32,
}

/// Cursor changes. Frame moves clamp to the series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CursorCommand {
    Frame(usize),
    Step(i64),
    Play,
    Pause,
    FrameRate(f32),
}

/// View defaults shared by all clients plus per-frame opacity overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewState {
    pub thresholds: ThresholdWindow,
    pub mode: RenderMode,
    pub opacity: Vec<OpacityOverride>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameSummary {
    pub index: usize,
    pub file: Option<String>,
    pub vertices: usize,
    pub triangles: usize,
    pub labelled: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectSummary {
    pub id: String,
    pub source_dir: PathBuf,
    pub frame_count: usize,
    pub frames: Vec<FrameSummary>,
    pub marker_count: usize,
    /// Some frames carry labels and others do not.
    pub mixed_labels: bool,
    pub version: u64,
    pub dirty: bool,
}

#[derive(Debug)]
pub struct Project {
    id: String,
    source_dir: PathBuf,
    series: SurfaceSeries,
    annotations: AnnotationState,
    view: ViewState,
    cursor: PlaybackCursor,
    dirty: bool,
    version: u64,
}

impl Project {
    /// Wrap an in-memory series.
    pub fn from_series(series: SurfaceSeries, source_dir: impl Into<PathBuf>) -> Self {
        let opacity = series
            .frames()
            .iter()
            .map(|f| OpacityOverride::new(f.vertex_count()))
            .collect();
        Self {
            id: uuid::Uuid::new_v4().to_string(),
            source_dir: source_dir.into(),
            annotations: AnnotationState::new(&series),
            series,
            view: ViewState {
                thresholds: Default::default(),
                mode: RenderMode::default(),
                opacity,
            },
            cursor: PlaybackCursor {
                frame: 0,
                playing: false,
                frame_rate: DEFAULT_FRAME_RATE,
            },
            dirty: false,
            version: 0,
        }
    }

    /// Open a project directory.
    ///
    /// With a `manifest.json` present, exactly the listed frames are loaded
    /// in manifest order after their checksums are verified. Otherwise every
    /// `.ply` file is loaded in natural name order. Labels come from the
    /// frames' blue channel and markers from `markers.csv` when present.
    pub fn open(dir: &Path) -> Result<Self, SessionError> {
        let manifest_path = dir.join(MANIFEST_FILE);
        let (series, markers_file) = if manifest_path.is_file() {
            let text = fs::read_to_string(&manifest_path).map_err(io_err(&manifest_path))?;
            let manifest: Manifest = serde_json::from_str(&text).map_err(|e| SessionError::Manifest(e.to_string()))?;
            if manifest.version != MANIFEST_VERSION {
                return Err(SessionError::Manifest(format!(
                    "unsupported manifest version {}",
                    manifest.version
                )));
            }
            let mut paths = Vec::with_capacity(manifest.frames.len());
            for entry in &manifest.frames {
                if !manifest::is_plain_file_name(&entry.file) {
                    return Err(SessionError::Manifest(format!("bad frame file name '{}'", entry.file)));
                }
                let path = dir.join(&entry.file);
                let bytes = fs::read(&path).map_err(io_err(&path))?;
                let actual = sha256_hex(&bytes);
                if actual != entry.sha256 {
                    return Err(SessionError::Integrity {
                        file: entry.file.clone(),
                        expected: entry.sha256.clone(),
                        actual,
                    });
                }
                paths.push(path);
            }
            if !manifest::is_plain_file_name(&manifest.markers_file) {
                return Err(SessionError::Manifest(format!(
                    "bad markers file name '{}'",
                    manifest.markers_file
                )));
            }
            (load_files_in_order(paths)?, manifest.markers_file)
        } else {
            (load_series_dir(dir)?, DEFAULT_MARKERS_FILE.to_string())
        };

        let mut project = Self::from_series(series, dir);
        let markers_path = dir.join(markers_file);
        if markers_path.is_file() {
            let bytes = fs::read(&markers_path).map_err(io_err(&markers_path))?;
            let markers = import_markers_csv(&bytes, &project.series).map_err(|source| SessionError::Markers {
                file: markers_path.clone(),
                source,
            })?;
            project.annotations.replace_markers(markers);
        }
        Ok(project)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn source_dir(&self) -> &Path {
        &self.source_dir
    }

    pub fn series(&self) -> &SurfaceSeries {
        &self.series
    }

    pub fn annotations(&self) -> &AnnotationState {
        &self.annotations
    }

    pub fn snapshot(&self) -> AnnotationSnapshot {
        self.annotations.snapshot()
    }

    pub fn view(&self) -> &ViewState {
        &self.view
    }

    pub fn cursor(&self) -> PlaybackCursor {
        self.cursor
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn is_dirty(&self) -> bool {
        self.dirty
    }

    pub fn frame_count(&self) -> usize {
        self.series.len()
    }

    pub fn summary(&self) -> ProjectSummary {
        let frames: Vec<FrameSummary> = self
            .series
            .frames()
            .iter()
            .enumerate()
            .map(|(index, f)| FrameSummary {
                index,
                file: f
                    .source_path
                    .as_deref()
                    .and_then(Path::file_name)
                    .map(|n| n.to_string_lossy().into_owned()),
                vertices: f.vertex_count(),
                triangles: f.mesh.triangle_count(),
                labelled: !self.annotations.layers()[index].is_blank(),
            })
            .collect();
        let labelled = frames.iter().filter(|f| f.labelled).count();
        ProjectSummary {
            id: self.id.clone(),
            source_dir: self.source_dir.clone(),
            frame_count: frames.len(),
            mixed_labels: labelled > 0 && labelled < frames.len(),
            frames,
            marker_count: self.annotations.markers().len(),
            version: self.version,
            dirty: self.dirty,
        }
    }

    fn check_frame(&self, frame: usize) -> Result<(), SessionError> {
        if frame < self.series.len() {
            Ok(())
        } else {
            Err(SessionError::FrameOutOfRange {
                frame,
                count: self.series.len(),
            })
        }
    }

    fn mesh(&self, frame: usize) -> Result<&TriangleMesh, SessionError> {
        self.check_frame(frame)?;
        Ok(&self.series.frames()[frame].mesh)
    }

    fn touched(&mut self) {
        self.version += 1;
        self.dirty = true;
    }

    pub fn pick(&self, frame: usize, ray: &Ray) -> Result<Option<PickHit>, SessionError> {
        Ok(ray_pick(self.mesh(frame)?, ray)?)
    }

    pub fn place_marker(&mut self, frame: usize, hit: &PickHit) -> Result<Marker, SessionError> {
        let marker = self.annotations.place_marker(&self.series, frame, hit)?;
        self.touched();
        Ok(marker)
    }

    pub fn remove_marker(&mut self, id: MarkerId) -> Result<Marker, SessionError> {
        let marker = self.annotations.remove_marker(id)?;
        self.touched();
        Ok(marker)
    }

    pub fn apply_stroke(&mut self, stroke: &BrushStroke) -> Result<Vec<u32>, SessionError> {
        let changed = self.annotations.apply_stroke(&self.series, stroke)?;
        self.touched();
        Ok(changed)
    }

    /// `None` when there was nothing to undo; the version is unchanged then.
    pub fn undo(&mut self) -> Option<Delta> {
        let delta = self.annotations.undo()?;
        self.touched();
        Some(delta)
    }

    pub fn redo(&mut self) -> Option<Delta> {
        let delta = self.annotations.redo()?;
        self.touched();
        Some(delta)
    }

    /// Set `alpha` on the geodesic region of `radius` around `seed`.
    /// Returns the affected vertices.
    pub fn set_opacity(
        &mut self,
        frame: usize,
        seed: u32,
        radius: f64,
        alpha: f32,
        metric: DistanceMetric,
    ) -> Result<Vec<u32>, SessionError> {
        let region = surface_distances(self.mesh(frame)?, seed as usize, radius, metric)?;
        let vertices: Vec<u32> = region.into_keys().collect();
        set_opacity_region(&mut self.view.opacity[frame], vertices.iter().copied(), alpha)?;
        self.version += 1;
        Ok(vertices)
    }

    pub fn reset_opacity(&mut self) {
        for o in &mut self.view.opacity {
            o.reset();
        }
        self.version += 1;
    }

    pub fn set_view_defaults(&mut self, thresholds: ThresholdWindow, mode: RenderMode) {
        self.view.thresholds = thresholds;
        self.view.mode = mode;
        self.version += 1;
    }

    pub fn move_cursor(&mut self, command: CursorCommand) -> PlaybackCursor {
        let last = self.series.len() - 1;
        match command {
            CursorCommand::Frame(f) => self.cursor.frame = f.min(last),
            CursorCommand::Step(delta) => {
                let target = self.cursor.frame as i64 + delta;
                self.cursor.frame = target.clamp(0, last as i64) as usize;
            }
            CursorCommand::Play => self.cursor.playing = true,
            CursorCommand::Pause => self.cursor.playing = false,
            CursorCommand::FrameRate(fps) => {
                if fps.is_finite() && fps > 0.0 {
                    self.cursor.frame_rate = fps;
                }
            }
        }
        self.version += 1;
        self.cursor
    }

    /// Display colours for a frame. `None` arguments fall back to the
    /// project's view defaults.
    pub fn display(
        &self,
        frame: usize,
        mode: Option<RenderMode>,
        thresholds: Option<ThresholdWindow>,
    ) -> Result<VertexDisplay, SessionError> {
        self.check_frame(frame)?;
        Ok(compose_display(
            &self.series.frames()[frame],
            self.annotations.layer(frame),
            &thresholds.unwrap_or(self.view.thresholds),
            Some(&self.view.opacity[frame]),
            mode.unwrap_or(self.view.mode),
        )?)
    }

    pub fn geometry(&self, frame: usize) -> Result<Vec<u8>, SessionError> {
        Ok(geometry_bytes(self.mesh(frame)?))
    }

    pub fn markers_csv(&self) -> String {
        export_markers_csv(self.annotations.markers())
    }

    pub fn tracks(&self, channel: usize, threshold: u8) -> TrackTable {
        track_measurements(&self.series, self.annotations.markers(), channel, threshold)
    }

    /// Write labelled frames, `markers.csv` and `manifest.json` to
    /// `destination`.
    pub fn save(&mut self, destination: &Path) -> Result<Manifest, SessionError> {
        fs::create_dir_all(destination).map_err(io_err(destination))?;
        let labelled = self.annotations.labelled_series(&self.series);
        let written = save_labelled_series(&labelled, destination, DEFAULT_LABEL_SUFFIX)?;
        let mut frames = Vec::with_capacity(written.len());
        for (path, frame) in written.iter().zip(labelled.frames()) {
            let bytes = fs::read(path).map_err(io_err(path))?;
            frames.push(ManifestFrame {
                file: path
                    .file_name()
                    .expect("written path has a file name")
                    .to_string_lossy()
                    .into_owned(),
                sha256: sha256_hex(&bytes),
                vertices: frame.vertex_count(),
                triangles: frame.mesh.triangle_count(),
            });
        }
        let markers_path = destination.join(DEFAULT_MARKERS_FILE);
        fs::write(&markers_path, self.markers_csv()).map_err(io_err(&markers_path))?;
        let manifest = Manifest {
            version: MANIFEST_VERSION,
            frames,
            markers_file: DEFAULT_MARKERS_FILE.to_string(),
        };
        let manifest_path = destination.join(MANIFEST_FILE);
        let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        fs::write(&manifest_path, json + "\n").map_err(io_err(&manifest_path))?;
        self.dirty = false;
        Ok(manifest)
    }
}

/// `vertex_count u32 | triangle_count u32 | positions f32*3V | indices u32*3T`,
/// all little endian.
pub fn geometry_bytes(mesh: &TriangleMesh) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + 12 * mesh.vertex_count() + 12 * mesh.triangle_count());
    out.extend_from_slice(&(mesh.vertex_count() as u32).to_le_bytes());
    out.extend_from_slice(&(mesh.triangle_count() as u32).to_le_bytes());
    for p in mesh.positions() {
        for c in p {
            out.extend_from_slice(&c.to_le_bytes());
        }
    }
    for t in mesh.triangles() {
        for i in t {
            out.extend_from_slice(&i.to_le_bytes());
        }
    }
    out
}
