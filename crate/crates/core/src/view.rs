//! Per-vertex display colours: channel thresholding, opacity overrides and
//! the three render modes. Everything here is a pure function of the frame
//! data and the view settings; nothing is written back to frames.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annotation::LabelLayer;
use crate::ply::SurfaceFrame;

/// Label colour in two-tone mode.
pub const LABEL_RGB: [u8; 3] = [255, 255, 0];
/// Unlabelled colour in two-tone mode and block-out colour in cut-out mode.
pub const BLOCK_OUT_RGB: [u8; 3] = [40, 40, 40];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ViewError {
    #[error("threshold window must satisfy lo <= hi, got ({lo}, {hi})")]
    BadWindow { lo: u8, hi: u8 },
    #[error("{what} has length {len}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        len: usize,
        expected: usize,
    },
    #[error("vertex {vertex} out of range (vertex count {count})")]
    VertexOutOfRange { vertex: u32, count: usize },
    #[error("alpha must lie in [0, 1], got {0}")]
    BadAlpha(f32),
}

/// Contrast window for one channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelWindow {
    lo: u8,
    hi: u8,
    pub enabled: bool,
}

impl Default for ChannelWindow {
    fn default() -> Self {
        Self {
            lo: 0,
            hi: 255,
            enabled: true,
        }
    }
}

impl ChannelWindow {
    pub fn new(lo: u8, hi: u8) -> Result<Self, ViewError> {
        if lo > hi {
            return Err(ViewError::BadWindow { lo, hi });
        }
        Ok(Self { lo, hi, enabled: true })
    }

    pub fn disabled() -> Self {
        Self {
            enabled: false,
            ..Self::default()
        }
    }

    pub fn lo(&self) -> u8 {
        self.lo
    }

    pub fn hi(&self) -> u8 {
        self.hi
    }
}

/// Windows for channel 0 and channel 1.
pub type ThresholdWindow = [ChannelWindow; 2];

/// Rescale `value` so `[lo, hi]` maps onto `[0, 255]`, clamping outside.
/// A zero-width window is a step at `lo`.
pub fn apply_threshold(value: u8, window: &ChannelWindow) -> u8 {
    if !window.enabled {
        return value;
    }
    let (lo, hi) = (window.lo as u32, window.hi as u32);
    let v = value as u32;
    if lo == hi {
        return if v >= hi { 255 } else { 0 };
    }
    if v <= lo {
        0
    } else if v >= hi {
        255
    } else {
        // round half up of (v - lo) * 255 / (hi - lo)
        let span = hi - lo;
        ((2 * (v - lo) * 255 + span) / (2 * span)) as u8
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RenderMode {
    #[default]
    Original,
    TwoTone,
    CutOut,
}

impl std::str::FromStr for RenderMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "original" => Ok(Self::Original),
            "two_tone" | "twotone" | "two-tone" => Ok(Self::TwoTone),
            "cut_out" | "cutout" | "cut-out" => Ok(Self::CutOut),
            other => Err(format!("unknown render mode '{other}'")),
        }
    }
}

/// Per-vertex alpha for one frame, 1.0 by default.
#[derive(Debug, Clone, PartialEq)]
pub struct OpacityOverride {
    alpha: Vec<f32>,
}

impl OpacityOverride {
    pub fn new(vertex_count: usize) -> Self {
        Self {
            alpha: vec![1.0; vertex_count],
        }
    }

    pub fn as_slice(&self) -> &[f32] {
        &self.alpha
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn is_default(&self) -> bool {
        self.alpha.iter().all(|&a| a == 1.0)
    }

    pub fn reset(&mut self) {
        self.alpha.fill(1.0);
    }
}

/// Write `alpha` on exactly the vertices of `region`. Validates everything
/// before touching the override.
pub fn set_opacity_region(
    opacity: &mut OpacityOverride,
    region: impl IntoIterator<Item = u32> + Clone,
    alpha: f32,
) -> Result<(), ViewError> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(ViewError::BadAlpha(alpha));
    }
    let count = opacity.alpha.len();
    if let Some(vertex) = region.clone().into_iter().find(|&v| v as usize >= count) {
        return Err(ViewError::VertexOutOfRange { vertex, count });
    }
    for v in region {
        opacity.alpha[v as usize] = alpha;
    }
    Ok(())
}

/// Alpha in `[0, 1]` to a byte, rounding to nearest.
pub fn alpha_byte(alpha: f32) -> u8 {
    (alpha.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// Per-vertex RGBA bytes, 4 per vertex in vertex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexDisplay {
    pub rgba: Vec<u8>,
}

impl VertexDisplay {
    pub fn vertex_count(&self) -> usize {
        self.rgba.len() / 4
    }

    pub fn vertex(&self, v: usize) -> [u8; 4] {
        self.rgba[4 * v..4 * v + 4].try_into().expect("4 bytes")
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.rgba
    }
}

/// Compose display colours for one frame.
///
/// `labels` of `None` means all unlabelled. `opacity` of `None` means fully
/// opaque.
pub fn compose_display(
    frame: &SurfaceFrame,
    labels: Option<&LabelLayer>,
    thresholds: &ThresholdWindow,
    opacity: Option<&OpacityOverride>,
    mode: RenderMode,
) -> Result<VertexDisplay, ViewError> {
    let n = frame.vertex_count();
    let check = |what, len| {
        if len == n {
            Ok(())
        } else {
            Err(ViewError::LengthMismatch { what, len, expected: n })
        }
    };
    check("channel 0", frame.colours.channel0.len())?;
    check("channel 1", frame.colours.channel1.len())?;
    if let Some(l) = labels {
        check("label layer", l.len())?;
    }
    if let Some(o) = opacity {
        check("opacity override", o.len())?;
    }

    let mut rgba = Vec::with_capacity(4 * n);
    for v in 0..n {
        let labelled = labels.is_some_and(|l| l.get(v));
        let original = || {
            [
                apply_threshold(frame.colours.channel0[v], &thresholds[0]),
                apply_threshold(frame.colours.channel1[v], &thresholds[1]),
                0,
            ]
        };
        let rgb = match (mode, labelled) {
            (RenderMode::Original, _) | (RenderMode::CutOut, true) => original(),
            (RenderMode::TwoTone, true) => LABEL_RGB,
            (RenderMode::TwoTone, false) | (RenderMode::CutOut, false) => BLOCK_OUT_RGB,
        };
        let a = opacity.map_or(255, |o| alpha_byte(o.alpha[v]));
        rgba.extend_from_slice(&[rgb[0], rgb[1], rgb[2], a]);
    }
    Ok(VertexDisplay { rgba })
}
