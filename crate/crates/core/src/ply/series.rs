use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::{natural_cmp, parse_ply, write_ply, PlyError, SurfaceFrame};

/// Suffix appended to each file stem by [`save_labelled_series`].
pub const DEFAULT_LABEL_SUFFIX: &str = "_labelled";

/// An ordered sequence of frames. Frames may differ in vertex count.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceSeries {
    frames: Vec<SurfaceFrame>,
}

impl SurfaceSeries {
    /// Returns `None` for an empty frame list.
    pub fn new(frames: Vec<SurfaceFrame>) -> Option<Self> {
        (!frames.is_empty()).then_some(Self { frames })
    }

    pub fn frames(&self) -> &[SurfaceFrame] {
        &self.frames
    }

    pub fn frame(&self, index: usize) -> Option<&SurfaceFrame> {
        self.frames.get(index)
    }

    pub fn frames_mut(&mut self) -> &mut [SurfaceFrame] {
        &mut self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn into_frames(self) -> Vec<SurfaceFrame> {
        self.frames
    }
}

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("no .ply files found in {0}")]
    Empty(PathBuf),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Parse(ParseFailures),
    #[error("{path}: {reason}")]
    Write { path: PathBuf, reason: String },
}

/// Every file that failed to load, with its error.
#[derive(Debug)]
pub struct ParseFailures(pub Vec<(PathBuf, PlyError)>);

impl fmt::Display for ParseFailures {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} file(s) failed to parse", self.0.len())?;
        for (path, err) in &self.0 {
            write!(f, "; {}: {err}", path.display())?;
        }
        Ok(())
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> SeriesError + '_ {
    move |source| SeriesError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Load every `.ply` file in `dir` (extension matched case-insensitively).
pub fn load_series_dir(dir: &Path) -> Result<SurfaceSeries, SeriesError> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_err(dir))? {
        let path = entry.map_err(io_err(dir))?.path();
        let is_ply = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("ply"));
        if is_ply && path.is_file() {
            files.push(path);
        }
    }
    if files.is_empty() {
        return Err(SeriesError::Empty(dir.to_path_buf()));
    }
    load_series(&files)
}

/// Load the given files as one series, ordered by natural file-name sort.
/// Fails if any file fails, listing every failure.
pub fn load_series<P: AsRef<Path>>(files: &[P]) -> Result<SurfaceSeries, SeriesError> {
    let mut paths: Vec<PathBuf> = files.iter().map(|p| p.as_ref().to_path_buf()).collect();
    if paths.is_empty() {
        return Err(SeriesError::Empty(PathBuf::new()));
    }
    paths.sort_by(|a, b| natural_cmp(&file_name(a), &file_name(b)).then_with(|| a.cmp(b)));
    load_files_in_order(paths)
}

/// Load files in exactly the given order.
pub(crate) fn load_files_in_order(paths: Vec<PathBuf>) -> Result<SurfaceSeries, SeriesError> {
    if paths.is_empty() {
        return Err(SeriesError::Empty(PathBuf::new()));
    }
    let mut frames = Vec::with_capacity(paths.len());
    let mut failures = Vec::new();
    for path in paths {
        let bytes = fs::read(&path).map_err(io_err(&path))?;
        match parse_ply(&bytes) {
            Ok(mut frame) => {
                frame.source_path = Some(path);
                frames.push(frame);
            }
            Err(err) => failures.push((path, err)),
        }
    }
    if !failures.is_empty() {
        return Err(SeriesError::Parse(ParseFailures(failures)));
    }
    Ok(SurfaceSeries { frames })
}

/// Output file name for frame `index`: the source stem plus `suffix`, or
/// `frame_<index>` plus `suffix` when the frame has no source path. A stem
/// that already ends in `suffix` is kept as is, so re-saving a saved series
/// reuses its names.
pub fn labelled_file_name(frame: &SurfaceFrame, index: usize, suffix: &str) -> String {
    let stem = frame
        .source_path
        .as_deref()
        .and_then(Path::file_stem)
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| format!("frame_{index:04}"));
    if !suffix.is_empty() && stem.ends_with(suffix) {
        format!("{stem}.ply")
    } else {
        format!("{stem}{suffix}.ply")
    }
}

/// Write every frame with its labels to `dir`, creating it if needed.
/// Returns the written paths in frame order.
pub fn save_labelled_series(series: &SurfaceSeries, dir: &Path, suffix: &str) -> Result<Vec<PathBuf>, SeriesError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut written = Vec::with_capacity(series.len());
    for (index, frame) in series.frames().iter().enumerate() {
        let path = dir.join(labelled_file_name(frame, index, suffix));
        let bytes = write_ply(frame).map_err(|e| SeriesError::Write {
            path: path.clone(),
            reason: e.to_string(),
        })?;
        fs::write(&path, bytes).map_err(io_err(&path))?;
        written.push(path);
    }
    Ok(written)
}
