//! Batch command line. The `surfannot` binary only parses arguments and
//! calls [`run`].

use std::fs;
use std::io::Write;
use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use super::{Project, SessionError, DEFAULT_PORT, PORT_ENV};
use crate::analysis::{export_track_csv, track_measurements};
use crate::annotation::import_markers_csv;
use crate::mesh::validate_mesh;
use crate::ply::{load_series_dir, natural_cmp, parse_ply, save_labelled_series, DEFAULT_LABEL_SUFFIX};

#[derive(Debug, Parser)]
#[command(
    name = "surfannot",
    version,
    about = "Annotate and analyse coloured surface mesh time series"
)]
pub struct Cli {
    /// Print errors to stderr as one-line JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Open a project directory and serve the HTTP API.
    Serve {
        dir: PathBuf,
        #[arg(long, env = PORT_ENV, default_value_t = DEFAULT_PORT)]
        port: u16,
        #[arg(long, default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
        host: IpAddr,
        /// Directory of static client files.
        #[arg(long)]
        web_root: Option<PathBuf>,
    },
    /// Parse and validate every .ply file in a directory.
    Validate { dir: PathBuf },
    /// Rewrite a series with its labels into another directory.
    ExportLabels {
        dir: PathBuf,
        out: PathBuf,
        #[arg(long, default_value = DEFAULT_LABEL_SUFFIX)]
        suffix: String,
    },
    /// Measure thresholded components under each marker.
    Tracks {
        dir: PathBuf,
        #[arg(long)]
        markers: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        channel: u8,
        #[arg(long)]
        threshold: u8,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print a series summary.
    Info { dir: PathBuf },
}

/// A failed command: a short machine-readable kind plus a message.
#[derive(Debug, Serialize)]
pub struct CliError {
    pub error: &'static str,
    pub message: String,
}

impl CliError {
    fn new(error: &'static str, message: impl Into<String>) -> Self {
        Self {
            error,
            message: message.into(),
        }
    }
}

impl From<SessionError> for CliError {
    fn from(e: SessionError) -> Self {
        let kind = match e {
            SessionError::Series(_) => "load",
            SessionError::Integrity { .. } => "integrity",
            SessionError::Markers { .. } => "markers",
            SessionError::Io { .. } => "io",
            _ => "session",
        };
        Self::new(kind, e.to_string())
    }
}

impl From<crate::ply::SeriesError> for CliError {
    fn from(e: crate::ply::SeriesError) -> Self {
        Self::new("load", e.to_string())
    }
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |e| CliError::new("io", format!("{}: {e}", path.display()))
}

/// Execute a parsed command line, writing normal output to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Serve {
            dir,
            port,
            host,
            web_root,
        } => {
            let project = Project::open(dir)?;
            let addr = SocketAddr::new(*host, *port);
            let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::new("io", e.to_string()))?;
            writeln!(
                out,
                "serving {} on http://{addr}{}",
                dir.display(),
                super::http::API_ROOT
            )
            .ok();
            runtime
                .block_on(super::http::serve(project, addr, web_root.clone()))
                .map_err(|e| CliError::new("io", e.to_string()))
        }
        Command::Validate { dir } => validate(dir, out),
        Command::ExportLabels { dir, out: dest, suffix } => {
            let series = load_series_dir(dir)?;
            let written = save_labelled_series(&series, dest, suffix)?;
            for path in written {
                writeln!(out, "{}", path.display()).ok();
            }
            Ok(())
        }
        Command::Tracks {
            dir,
            markers,
            channel,
            threshold,
            out: dest,
        } => {
            let series = load_series_dir(dir)?;
            let bytes = fs::read(markers).map_err(io(markers))?;
            let markers = import_markers_csv(&bytes, &series)
                .map_err(|e| CliError::new("markers", format!("{}: {e}", markers.display())))?;
            let table = track_measurements(&series, &markers, *channel as usize, *threshold);
            fs::write(dest, export_track_csv(&table)).map_err(io(dest))?;
            writeln!(out, "{} rows written to {}", table.rows.len(), dest.display()).ok();
            Ok(())
        }
        Command::Info { dir } => {
            let project = Project::open(dir)?;
            let summary = project.summary();
            if cli.json {
                writeln!(out, "{}", serde_json::to_string(&summary).expect("summary serializes")).ok();
            } else {
                writeln!(out, "frames: {}", summary.frame_count).ok();
                writeln!(out, "markers: {}", summary.marker_count).ok();
                if summary.mixed_labels {
                    writeln!(out, "note: only some frames carry labels").ok();
                }
                for f in &summary.frames {
                    writeln!(
                        out,
                        "  [{}] {} vertices={} triangles={} labelled={}",
                        f.index,
                        f.file.as_deref().unwrap_or("-"),
                        f.vertices,
                        f.triangles,
                        f.labelled
                    )
                    .ok();
                }
            }
            Ok(())
        }
    }
}

fn validate(dir: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e.eq_ignore_ascii_case("ply")))
        .collect();
    if files.is_empty() {
        return Err(CliError::new(
            "load",
            format!("no .ply files found in {}", dir.display()),
        ));
    }
    files.sort_by(|a, b| {
        natural_cmp(
            &a.file_name().unwrap_or_default().to_string_lossy(),
            &b.file_name().unwrap_or_default().to_string_lossy(),
        )
    });
    let mut failures = Vec::new();
    for path in &files {
        let bytes = fs::read(path).map_err(io(path))?;
        let result = parse_ply(&bytes).map_err(|e| e.to_string()).and_then(|frame| {
            let report = validate_mesh(&frame.mesh, &frame.colours);
            if report.is_empty() {
                Ok(frame)
            } else {
                Err(report.to_string())
            }
        });
        match result {
            Ok(frame) => {
                writeln!(
                    out,
                    "ok   {} ({} vertices, {} triangles)",
                    path.display(),
                    frame.vertex_count(),
                    frame.mesh.triangle_count()
                )
                .ok();
            }
            Err(reason) => {
                writeln!(out, "FAIL {}: {reason}", path.display()).ok();
                failures.push(format!("{}: {reason}", path.display()));
            }
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::new(
            "validation",
            format!(
                "{} of {} files failed: {}",
                failures.len(),
                files.len(),
                failures.join("; ")
            ),
        ))
    }
}
