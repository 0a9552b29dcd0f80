//! Object graph of a figure as exposed by the host plotting environment.
//!
//! The notebook driver serializes matplotlib figures into this shape, and the
//! builders below construct the same shape directly from Rust. Missing or
//! non-finite numbers travel as JSON `null` and are read back as `NaN`.

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::AltTextError;

mod nullable {
    use super::*;

    fn to_f64(v: Option<f64>) -> f64 {
        v.unwrap_or(f64::NAN)
    }

    pub fn num<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Option::<f64>::deserialize(d).map(to_f64)
    }

    pub fn vec<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        let raw = Vec::<Option<f64>>::deserialize(d)?;
        Ok(raw.into_iter().map(to_f64).collect())
    }

    pub fn opt_vec<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<f64>>, D::Error> {
        let raw = Option::<Vec<Option<f64>>>::deserialize(d)?;
        Ok(raw.map(|v| v.into_iter().map(to_f64).collect()))
    }

    pub fn pair<'de, D: Deserializer<'de>>(d: D) -> Result<[f64; 2], D::Error> {
        let [a, b] = <[Option<f64>; 2]>::deserialize(d)?;
        Ok([to_f64(a), to_f64(b)])
    }

    pub fn quad<'de, D: Deserializer<'de>>(d: D) -> Result<[f64; 4], D::Error> {
        let raw = <[Option<f64>; 4]>::deserialize(d)?;
        Ok(raw.map(to_f64))
    }

    pub fn pairs<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<[f64; 2]>, D::Error> {
        let raw = Vec::<[Option<f64>; 2]>::deserialize(d)?;
        Ok(raw.into_iter().map(|[a, b]| [to_f64(a), to_f64(b)]).collect())
    }

    pub fn grid<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<f64>>, D::Error> {
        let raw = Vec::<Vec<Option<f64>>>::deserialize(d)?;
        Ok(raw
            .into_iter()
            .map(|row| row.into_iter().map(to_f64).collect())
            .collect())
    }

    /// Contour levels, each a list of closed paths of `[x, y]` vertices.
    type Levels = Vec<Vec<Vec<[f64; 2]>>>;

    pub fn polys<'de, D: Deserializer<'de>>(d: D) -> Result<Levels, D::Error> {
        let raw = Vec::<Vec<Vec<[Option<f64>; 2]>>>::deserialize(d)?;
        Ok(raw
            .into_iter()
            .map(|level| {
                level
                    .into_iter()
                    .map(|poly| poly.into_iter().map(|[a, b]| [to_f64(a), to_f64(b)]).collect())
                    .collect()
            })
            .collect())
    }
}

/// A whole figure: optional super-title, its axes in row-major order and
/// the rendered raster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct HostFigure {
    #[serde(default)]
    pub suptitle: Option<String>,
    pub axes: Vec<HostAxes>,
    #[serde(default, deserialize_with = "nullable::num")]
    pub dpi: f64,
    /// Base64-encoded PNG of the rendered figure.
    #[serde(default)]
    pub png: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct HostAxes {
    #[serde(default)]
    pub title: Option<String>,
    pub x_axis: HostAxis,
    pub y_axis: HostAxis,
    #[serde(default)]
    pub polar: bool,
    #[serde(default)]
    pub artists: Vec<HostArtist>,
    #[serde(default)]
    pub legend_labels: Vec<String>,
    #[serde(default)]
    pub colorbar: Option<HostColorbar>,
    /// Index of an earlier axes this one overlays (twinx/twiny).
    #[serde(default)]
    pub twin_of: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HostAxis {
    #[serde(default)]
    pub label: Option<String>,
    #[serde(deserialize_with = "nullable::pair")]
    pub limits: [f64; 2],
    #[serde(default = "default_scale")]
    pub scale: String,
    #[serde(default)]
    pub ticks: Vec<HostTick>,
    /// Unit converter reported by the host: `"category"`, `"date"` or none.
    #[serde(default)]
    pub units: Option<String>,
}

fn default_scale() -> String {
    "linear".to_string()
}

impl Default for HostAxis {
    fn default() -> Self {
        HostAxis {
            label: None,
            limits: [0.0, 1.0],
            scale: default_scale(),
            ticks: Vec::new(),
            units: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HostTick {
    #[serde(deserialize_with = "nullable::num")]
    pub position: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HostColorbar {
    #[serde(default)]
    pub label: Option<String>,
    #[serde(deserialize_with = "nullable::num")]
    pub vmin: f64,
    #[serde(deserialize_with = "nullable::num")]
    pub vmax: f64,
    #[serde(default = "default_scale")]
    pub scale: String,
}

/// Per-box statistics recorded when the host draws a boxplot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HostBox {
    #[serde(deserialize_with = "nullable::num")]
    pub position: f64,
    #[serde(default)]
    pub label: Option<String>,
    #[serde(deserialize_with = "nullable::num")]
    pub median: f64,
    #[serde(deserialize_with = "nullable::num")]
    pub q1: f64,
    #[serde(deserialize_with = "nullable::num")]
    pub q3: f64,
    #[serde(deserialize_with = "nullable::num")]
    pub whisker_low: f64,
    #[serde(deserialize_with = "nullable::num")]
    pub whisker_high: f64,
    #[serde(default, deserialize_with = "nullable::vec")]
    pub fliers: Vec<f64>,
    /// Raw samples, when the boxplot was drawn from data.
    #[serde(default, deserialize_with = "nullable::opt_vec")]
    pub values: Option<Vec<f64>>,
    #[serde(default = "yes")]
    pub vertical: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HostArtist {
    Line {
        #[serde(deserialize_with = "nullable::vec")]
        x: Vec<f64>,
        #[serde(deserialize_with = "nullable::vec")]
        y: Vec<f64>,
        #[serde(default)]
        x_categories: Option<Vec<String>>,
        #[serde(default)]
        label: Option<String>,
        #[serde(default)]
        color: Option<String>,
        #[serde(default = "yes")]
        has_line: bool,
        #[serde(default)]
        has_markers: bool,
    },
    RefLine {
        orientation: Orientation,
        #[serde(deserialize_with = "nullable::num")]
        value: f64,
    },
    Points {
        #[serde(deserialize_with = "nullable::pairs")]
        offsets: Vec<[f64; 2]>,
        #[serde(default)]
        label: Option<String>,
        #[serde(default)]
        color: Option<String>,
    },
    Rectangle {
        #[serde(deserialize_with = "nullable::num")]
        x: f64,
        #[serde(deserialize_with = "nullable::num")]
        y: f64,
        #[serde(deserialize_with = "nullable::num")]
        width: f64,
        #[serde(deserialize_with = "nullable::num")]
        height: f64,
        #[serde(default)]
        label: Option<String>,
        #[serde(default)]
        color: Option<String>,
    },
    Wedge {
        #[serde(deserialize_with = "nullable::num")]
        theta1: f64,
        #[serde(deserialize_with = "nullable::num")]
        theta2: f64,
        #[serde(default)]
        label: Option<String>,
        #[serde(default)]
        color: Option<String>,
    },
    QuadMesh {
        #[serde(deserialize_with = "nullable::grid")]
        values: Vec<Vec<f64>>,
        #[serde(deserialize_with = "nullable::vec")]
        x_edges: Vec<f64>,
        #[serde(deserialize_with = "nullable::vec")]
        y_edges: Vec<f64>,
    },
    Image {
        #[serde(deserialize_with = "nullable::grid")]
        values: Vec<Vec<f64>>,
        /// left, right, bottom, top
        #[serde(deserialize_with = "nullable::quad")]
        extent: [f64; 4],
        #[serde(default)]
        origin: Option<String>,
    },
    Contour {
        #[serde(deserialize_with = "nullable::vec")]
        levels: Vec<f64>,
        #[serde(default)]
        filled: bool,
        /// One entry per level, each a list of polygons.
        #[serde(deserialize_with = "nullable::polys")]
        paths: Vec<Vec<Vec<[f64; 2]>>>,
    },
    Box(HostBox),
    Annotation {
        text: String,
        #[serde(deserialize_with = "nullable::pair")]
        position: [f64; 2],
    },
    Other {
        name: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Horizontal,
    Vertical,
}

impl HostFigure {
    pub fn from_json(text: &str) -> Result<HostFigure, AltTextError> {
        serde_json::from_str(text).map_err(|e| AltTextError::HostFormat(e.to_string()))
    }

    pub fn from_value(value: serde_json::Value) -> Result<HostFigure, AltTextError> {
        serde_json::from_value(value).map_err(|e| AltTextError::HostFormat(e.to_string()))
    }

    /// A figure holding a single axes.
    pub fn single(axes: HostAxes) -> HostFigure {
        HostFigure {
            suptitle: None,
            axes: vec![axes],
            dpi: 100.0,
            png: None,
        }
    }

    pub fn png_bytes(&self) -> Option<Vec<u8>> {
        use base64::Engine;
        let encoded = self.png.as_ref()?;
        base64::engine::general_purpose::STANDARD.decode(encoded).ok()
    }

    pub fn with_png(mut self, bytes: &[u8]) -> HostFigure {
        use base64::Engine;
        self.png = Some(base64::engine::general_purpose::STANDARD.encode(bytes));
        self
    }
}

impl HostAxis {
    /// Numeric axis with ticks placed at "nice" positions covering `lo..hi`.
    pub fn numeric(label: Option<&str>, lo: f64, hi: f64) -> HostAxis {
        let ticks = nice_ticks(lo, hi)
            .into_iter()
            .map(|p| HostTick {
                position: p,
                label: crate::heuristic::format_number(p),
            })
            .collect();
        HostAxis {
            label: label.map(str::to_string),
            limits: [lo, hi],
            scale: default_scale(),
            ticks,
            units: None,
        }
    }

    /// Category axis with one tick per label at positions 0, 1, 2, ...
    pub fn categories<S: AsRef<str>>(label: Option<&str>, names: &[S]) -> HostAxis {
        let n = names.len().max(1) as f64;
        HostAxis {
            label: label.map(str::to_string),
            limits: [-0.5, n - 0.5],
            scale: default_scale(),
            ticks: names
                .iter()
                .enumerate()
                .map(|(i, s)| HostTick {
                    position: i as f64,
                    label: s.as_ref().to_string(),
                })
                .collect(),
            units: Some("category".to_string()),
        }
    }
}

/// Round tick positions spanning `lo..hi` using a 1-2-5 step ladder, with the
/// outermost ticks allowed to fall just outside the interval.
pub fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    if !lo.is_finite() || !hi.is_finite() {
        return Vec::new();
    }
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let span = if hi > lo { hi - lo } else { lo.abs().max(1.0) };
    let raw = span / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| span / s <= 8.0)
        .unwrap_or(10.0 * mag);
    let start = (lo / step).floor();
    let end = (hi / step).ceil();
    let mut out = Vec::new();
    let mut k = start;
    while k <= end && out.len() < 64 {
        let v = k * step;
        // snap away floating noise such as 0.30000000000000004
        let snapped = (v / step).round() * step;
        out.push(if snapped == 0.0 { 0.0 } else { snapped });
        k += 1.0;
    }
    out
}

/// Mutable stand-in for the host plotting environment's figure registry.
///
/// Figures are appended as they are created; the most recent one is the
/// "current figure" that snapshotting reads.
#[derive(Debug, Default, Clone)]
pub struct HostEnvironment {
    figures: Vec<HostFigure>,
}

impl HostEnvironment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push_figure(&mut self, figure: HostFigure) {
        self.figures.push(figure);
    }

    pub fn current_figure(&self) -> Result<&HostFigure, AltTextError> {
        self.figures.last().ok_or(AltTextError::NoFigure)
    }

    pub fn current_figure_mut(&mut self) -> Result<&mut HostFigure, AltTextError> {
        self.figures.last_mut().ok_or(AltTextError::NoFigure)
    }

    pub fn close_all(&mut self) {
        self.figures.clear();
    }

    pub fn len(&self) -> usize {
        self.figures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.figures.is_empty()
    }
}
