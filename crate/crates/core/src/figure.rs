//! Normalized, immutable snapshot of a figure.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::chart_type::ChartType;
use crate::color::color_name;
use crate::error::Result;
use crate::host::{HostArtist, HostAxes, HostAxis, HostBox, HostEnvironment, HostFigure, Orientation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisName {
    X,
    Y,
    Z,
}

impl AxisName {
    pub fn symbol(self) -> &'static str {
        match self {
            AxisName::X => "x",
            AxisName::Y => "y",
            AxisName::Z => "z",
        }
    }
}

impl fmt::Display for AxisName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Log,
    Datetime,
    Categorical,
}

impl Scale {
    pub fn as_str(self) -> &'static str {
        match self {
            Scale::Linear => "linear",
            Scale::Log => "log",
            Scale::Datetime => "datetime",
            Scale::Categorical => "categorical",
        }
    }

    pub fn is_numeric(self) -> bool {
        matches!(self, Scale::Linear | Scale::Log)
    }
}

/// A coordinate that is either numeric or a category name.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Number(f64),
    Category(String),
}

impl Value {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            Value::Number(v) => Some(*v),
            Value::Category(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxisFacts {
    pub name: AxisName,
    pub label: Option<String>,
    pub min: Value,
    pub max: Value,
    pub scale: Scale,
    pub tick_labels: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MarkInventory {
    pub rectangles: usize,
    pub line_objects: usize,
    pub point_collections: usize,
    pub quadmeshes: usize,
    /// Raster images drawn from a 2-D array.
    pub images: usize,
    pub wedges: usize,
    pub contour_sets: usize,
    pub box_artists: usize,
    /// Rectangles share a common baseline or sit on a category axis.
    pub rectangles_aligned: bool,
    pub polar_flag: bool,
    /// (rows, cols) of the first 2-D array artist.
    pub grid_shape: Option<(usize, usize)>,
}

impl MarkInventory {
    pub fn total(&self) -> usize {
        self.rectangles
            + self.line_objects
            + self.point_collections
            + self.quadmeshes
            + self.images
            + self.wedges
            + self.contour_sets
            + self.box_artists
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    Line,
    Points,
    Bars,
    Slices,
    Box,
    Grid,
    Contour,
}

/// A 2-D array of values together with the coordinates used to report cell
/// locations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid {
    /// Row-major values, `values[row][col]`.
    pub values: Vec<Vec<f64>>,
    /// Location reported for each column.
    pub x_coords: Vec<f64>,
    /// Location reported for each row.
    pub y_coords: Vec<f64>,
    /// True when the array is drawn in the host's default pixel extent
    /// (cell centers at integer indices).
    pub pixel_extent: bool,
}

impl Grid {
    pub fn shape(&self) -> (usize, usize) {
        (self.values.len(), self.values.first().map_or(0, Vec::len))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxSummary {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub fliers: Vec<f64>,
    /// The series holds the raw samples rather than values rebuilt from
    /// the summary.
    pub from_samples: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContourFacts {
    pub levels: Vec<f64>,
    /// Polygons for each level, aligned with `levels`.
    pub paths: Vec<Vec<Vec<[f64; 2]>>>,
    pub filled: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesFacts {
    pub label: Option<String>,
    pub kind: SeriesKind,
    pub x_values: Vec<Value>,
    pub y_values: Vec<f64>,
    pub z_values: Option<Grid>,
    pub color_name: Option<String>,
    /// Axis along which `x_values` are laid out.
    pub independent: AxisName,
    /// Axis that carries `y_values`.
    pub dependent: AxisName,
    pub box_summary: Option<BoxSummary>,
    pub contour: Option<ContourFacts>,
}

impl SeriesFacts {
    /// A plain line series over numeric x values.
    pub fn line(label: Option<&str>, xs: &[f64], ys: &[f64]) -> SeriesFacts {
        SeriesFacts {
            label: label.map(str::to_string),
            kind: SeriesKind::Line,
            x_values: xs.iter().map(|&x| Value::Number(x)).collect(),
            y_values: ys.to_vec(),
            z_values: None,
            color_name: None,
            independent: AxisName::X,
            dependent: AxisName::Y,
            box_summary: None,
            contour: None,
        }
    }

    pub fn numeric_x(&self) -> Option<Vec<f64>> {
        self.x_values.iter().map(Value::as_number).collect()
    }

    pub fn len(&self) -> usize {
        self.y_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y_values.is_empty() && self.z_values.is_none() && self.contour.is_none()
    }
}

/// Label used for a series in generated text: the explicit label when
/// present, otherwise a positional name.
pub fn display_label(subplot: &SubplotFacts, index: usize, chart_type: ChartType) -> String {
    if let Some(label) = subplot.series.get(index).and_then(|s| s.label.as_ref()) {
        return label.clone();
    }
    match chart_type {
        ChartType::Strip => format!("strip {}", index + 1),
        ChartType::Boxplot => format!("boxplot {index}"),
        _ if subplot.series.len() == 1 => "the data".to_string(),
        _ => format!("series {}", index + 1),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Annotation {
    pub text: String,
    pub position: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefLine {
    pub orientation: Orientation,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubplotFacts {
    pub title: Option<String>,
    pub axes: Vec<AxisFacts>,
    pub marks: MarkInventory,
    pub series: Vec<SeriesFacts>,
    pub annotations: Vec<Annotation>,
    pub legend_entries: Vec<(String, String)>,
    pub ref_lines: Vec<RefLine>,
}

impl SubplotFacts {
    pub fn axis(&self, name: AxisName) -> Option<&AxisFacts> {
        self.axes.iter().find(|a| a.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureFacts {
    pub suptitle: Option<String>,
    pub subplots: Vec<SubplotFacts>,
    #[serde(skip)]
    pub image_bytes: Option<Vec<u8>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "warning", rename_all = "snake_case")]
pub enum SnapshotWarning {
    UnsupportedArtist { subplot: usize, name: String },
    MixedAxes { subplot: usize },
}

impl fmt::Display for SnapshotWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SnapshotWarning::UnsupportedArtist { subplot, name } => {
                write!(f, "subplot {}: unsupported artist {name} was skipped", subplot + 1)
            }
            SnapshotWarning::MixedAxes { subplot } => {
                write!(f, "subplot {}: overlaid axes were merged", subplot + 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub facts: FigureFacts,
    pub warnings: Vec<SnapshotWarning>,
}

/// Snapshots the environment's current figure.
pub fn snapshot_current(env: &HostEnvironment) -> Result<Snapshot> {
    Ok(snapshot_figure(env.current_figure()?))
}

/// Builds a [`FigureFacts`] mirroring `figure`. All data is copied.
pub fn snapshot_figure(figure: &HostFigure) -> Snapshot {
    let mut warnings = Vec::new();
    let mut groups: Vec<Vec<&HostAxes>> = Vec::new();
    let mut group_of: Vec<usize> = Vec::with_capacity(figure.axes.len());
    for (i, ax) in figure.axes.iter().enumerate() {
        match ax.twin_of.filter(|&j| j < i) {
            Some(j) => {
                let g = group_of[j];
                groups[g].push(ax);
                group_of.push(g);
            }
            None => {
                group_of.push(groups.len());
                groups.push(vec![ax]);
            }
        }
    }

    let mut subplots: Vec<SubplotFacts> = groups
        .iter()
        .enumerate()
        .map(|(k, group)| {
            if group.len() > 1 {
                warnings.push(SnapshotWarning::MixedAxes { subplot: k });
            }
            snapshot_axes(k, group, &mut warnings)
        })
        .collect();
    if subplots.is_empty() {
        subplots.push(snapshot_axes(0, &[&HostAxes::default()], &mut warnings));
    }

    Snapshot {
        facts: FigureFacts {
            suptitle: non_empty(figure.suptitle.as_deref()),
            subplots,
            image_bytes: figure.png_bytes(),
        },
        warnings,
    }
}

fn non_empty(s: Option<&str>) -> Option<String> {
    s.map(str::trim).filter(|s| !s.is_empty()).map(str::to_string)
}

fn snapshot_axes(index: usize, group: &[&HostAxes], warnings: &mut Vec<SnapshotWarning>) -> SubplotFacts {
    let primary = group[0];
    let mut marks = MarkInventory {
        polar_flag: primary.polar,
        ..MarkInventory::default()
    };
    let mut series = Vec::new();
    let mut annotations = Vec::new();
    let mut ref_lines = Vec::new();
    let mut image_extent = None;

    for ax in group {
        let mut bars: Vec<Bar> = Vec::new();
        let mut wedges: Vec<(f64, Option<String>)> = Vec::new();
        let mut boxes: Vec<&HostBox> = Vec::new();
        for artist in &ax.artists {
            match artist {
                HostArtist::Line {
                    x,
                    y,
                    x_categories,
                    label,
                    color,
                    has_line,
                    has_markers,
                } => {
                    let (xs, ys): (Vec<usize>, Vec<f64>) = y
                        .iter()
                        .enumerate()
                        .filter(|(i, v)| v.is_finite() && x.get(*i).is_some_and(|x| x.is_finite()))
                        .map(|(i, v)| (i, *v))
                        .unzip();
                    if ys.is_empty() {
                        continue;
                    }
                    let markers_only = !has_line && *has_markers;
                    if markers_only {
                        marks.point_collections += 1;
                    } else {
                        marks.line_objects += 1;
                    }
                    let x_values = match x_categories {
                        Some(cats) if cats.len() == x.len() => {
                            xs.iter().map(|&i| Value::Category(cats[i].clone())).collect()
                        }
                        _ => resolve_positions(&xs.iter().map(|&i| x[i]).collect::<Vec<_>>(), &ax.x_axis),
                    };
                    series.push(SeriesFacts {
                        label: non_empty(label.as_deref()),
                        kind: if markers_only {
                            SeriesKind::Points
                        } else {
                            SeriesKind::Line
                        },
                        x_values,
                        y_values: ys,
                        z_values: None,
                        color_name: color.as_deref().and_then(color_name),
                        independent: AxisName::X,
                        dependent: AxisName::Y,
                        box_summary: None,
                        contour: None,
                    });
                }
                HostArtist::Points { offsets, label, color } => {
                    let pts: Vec<[f64; 2]> = offsets
                        .iter()
                        .copied()
                        .filter(|p| p[0].is_finite() && p[1].is_finite())
                        .collect();
                    if pts.is_empty() {
                        continue;
                    }
                    marks.point_collections += 1;
                    series.push(SeriesFacts {
                        label: non_empty(label.as_deref()),
                        kind: SeriesKind::Points,
                        x_values: pts.iter().map(|p| Value::Number(p[0])).collect(),
                        y_values: pts.iter().map(|p| p[1]).collect(),
                        z_values: None,
                        color_name: color.as_deref().and_then(color_name),
                        independent: AxisName::X,
                        dependent: AxisName::Y,
                        box_summary: None,
                        contour: None,
                    });
                }
                HostArtist::Rectangle {
                    x,
                    y,
                    width,
                    height,
                    label,
                    color,
                } => {
                    if [x, y, width, height].iter().all(|v| v.is_finite()) {
                        marks.rectangles += 1;
                        bars.push((*x, *y, *width, *height, label.clone(), color.clone()));
                    }
                }
                HostArtist::Wedge {
                    theta1, theta2, label, ..
                } => {
                    if theta1.is_finite() && theta2.is_finite() {
                        marks.wedges += 1;
                        wedges.push((theta2 - theta1, label.clone()));
                    }
                }
                HostArtist::QuadMesh {
                    values,
                    x_edges,
                    y_edges,
                } => {
                    if values.is_empty() {
                        continue;
                    }
                    marks.quadmeshes += 1;
                    let grid = Grid {
                        values: values.clone(),
                        x_coords: x_edges.clone(),
                        y_coords: y_edges.clone(),
                        pixel_extent: false,
                    };
                    marks.grid_shape.get_or_insert(grid.shape());
                    series.push(grid_series(grid));
                }
                HostArtist::Image { values, extent, .. } => {
                    if values.is_empty() {
                        continue;
                    }
                    marks.images += 1;
                    let rows = values.len();
                    let cols = values[0].len();
                    let (r, c) = (rows as f64, cols as f64);
                    let [left, right, bottom, top] = *extent;
                    let pixel = close(left, -0.5)
                        && close(right, c - 0.5)
                        && ((close(bottom, r - 0.5) && close(top, -0.5))
                            || (close(bottom, -0.5) && close(top, r - 0.5)));
                    image_extent.get_or_insert(*extent);
                    let grid = Grid {
                        values: values.clone(),
                        x_coords: (0..cols).map(|i| i as f64).collect(),
                        y_coords: (0..rows).map(|i| i as f64).collect(),
                        pixel_extent: pixel,
                    };
                    marks.grid_shape.get_or_insert(grid.shape());
                    series.push(grid_series(grid));
                }
                HostArtist::Contour { levels, filled, paths } => {
                    marks.contour_sets += 1;
                    series.push(SeriesFacts {
                        label: None,
                        kind: SeriesKind::Contour,
                        x_values: Vec::new(),
                        y_values: Vec::new(),
                        z_values: None,
                        color_name: None,
                        independent: AxisName::X,
                        dependent: AxisName::Y,
                        box_summary: None,
                        contour: Some(ContourFacts {
                            levels: levels.clone(),
                            paths: paths.clone(),
                            filled: *filled,
                        }),
                    });
                }
                HostArtist::Box(b) => {
                    marks.box_artists += 1;
                    boxes.push(b);
                }
                HostArtist::Annotation { text, position } => {
                    if !text.trim().is_empty() {
                        annotations.push(Annotation {
                            text: text.clone(),
                            position: (position[0], position[1]),
                        });
                    }
                }
                HostArtist::RefLine { orientation, value } => ref_lines.push(RefLine {
                    orientation: *orientation,
                    value: *value,
                }),
                HostArtist::Other { name } => warnings.push(SnapshotWarning::UnsupportedArtist {
                    subplot: index,
                    name: name.clone(),
                }),
            }
        }
        if !bars.is_empty() {
            let (bar_facts, aligned) = bar_series(&bars, ax);
            marks.rectangles_aligned = aligned;
            series.extend(bar_facts);
        }
        if !wedges.is_empty() {
            series.push(pie_series(&wedges));
        }
        series.extend(boxes.iter().map(|b| box_series(b)));
    }

    assign_legend_labels(&mut series, &primary.legend_labels);

    let mut axes = vec![
        axis_facts(AxisName::X, &primary.x_axis, image_extent.map(|e| (e[0], e[1]))),
        axis_facts(AxisName::Y, &primary.y_axis, image_extent.map(|e| (e[2], e[3]))),
    ];
    if let Some(cb) = group.iter().find_map(|a| a.colorbar.as_ref()) {
        axes.push(AxisFacts {
            name: AxisName::Z,
            label: non_empty(cb.label.as_deref()),
            min: Value::Number(cb.vmin.min(cb.vmax)),
            max: Value::Number(cb.vmax.max(cb.vmin)),
            scale: if cb.scale == "log" { Scale::Log } else { Scale::Linear },
            tick_labels: Vec::new(),
        });
    }

    let legend_entries = series
        .iter()
        .filter_map(|s| Some((s.label.clone()?, s.color_name.clone()?)))
        .collect();

    SubplotFacts {
        title: non_empty(primary.title.as_deref()),
        axes,
        marks,
        series,
        annotations,
        legend_entries,
        ref_lines,
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

fn grid_series(grid: Grid) -> SeriesFacts {
    SeriesFacts {
        label: None,
        kind: SeriesKind::Grid,
        x_values: Vec::new(),
        y_values: Vec::new(),
        z_values: Some(grid),
        color_name: None,
        independent: AxisName::X,
        dependent: AxisName::Z,
        box_summary: None,
        contour: None,
    }
}

type Bar = (f64, f64, f64, f64, Option<String>, Option<String>);

fn bar_series(bars: &[Bar], ax: &HostAxes) -> (Vec<SeriesFacts>, bool) {
    let share = |f: fn(&Bar) -> f64| bars.iter().all(|b| close(f(b), f(&bars[0])));
    let same_bottom = share(|b| b.1);
    let same_left = share(|b| b.0);
    let y_is_category = ax.y_axis.units.as_deref() == Some("category");
    let x_is_category = ax.x_axis.units.as_deref() == Some("category");
    let horizontal = match (same_bottom, same_left) {
        (false, true) => true,
        (true, true) => y_is_category && !x_is_category,
        _ => false,
    };
    let aligned = same_bottom || same_left || x_is_category || y_is_category;

    // group by fill color, keeping first-appearance order
    let mut order: Vec<Option<String>> = Vec::new();
    let mut groups: BTreeMap<usize, Vec<&Bar>> = BTreeMap::new();
    for b in bars {
        let pos = match order.iter().position(|c| *c == b.5) {
            Some(p) => p,
            None => {
                order.push(b.5.clone());
                order.len() - 1
            }
        };
        groups.entry(pos).or_default().push(b);
    }

    let series = groups
        .into_iter()
        .map(|(pos, members)| {
            let (positions, values): (Vec<f64>, Vec<f64>) = members
                .iter()
                .map(|b| {
                    if horizontal {
                        (b.1 + b.3 / 2.0, b.2)
                    } else {
                        (b.0 + b.2 / 2.0, b.3)
                    }
                })
                .unzip();
            let axis = if horizontal { &ax.y_axis } else { &ax.x_axis };
            SeriesFacts {
                label: members.iter().find_map(|b| non_empty(b.4.as_deref())),
                kind: SeriesKind::Bars,
                x_values: resolve_positions(&positions, axis),
                y_values: values,
                z_values: None,
                color_name: order[pos].as_deref().and_then(color_name),
                independent: if horizontal { AxisName::Y } else { AxisName::X },
                dependent: if horizontal { AxisName::X } else { AxisName::Y },
                box_summary: None,
                contour: None,
            }
        })
        .collect();
    (series, aligned)
}

fn pie_series(wedges: &[(f64, Option<String>)]) -> SeriesFacts {
    let labels: Vec<Value> = wedges
        .iter()
        .enumerate()
        .map(|(i, (_, l))| Value::Category(non_empty(l.as_deref()).unwrap_or_else(|| format!("slice {}", i + 1))))
        .collect();
    SeriesFacts {
        label: None,
        kind: SeriesKind::Slices,
        x_values: labels,
        y_values: wedges.iter().map(|(span, _)| span / 360.0 * 100.0).collect(),
        z_values: None,
        color_name: None,
        independent: AxisName::X,
        dependent: AxisName::X,
        box_summary: None,
        contour: None,
    }
}

fn box_series(b: &HostBox) -> SeriesFacts {
    let (values, from_samples): (Vec<f64>, bool) = match &b.values {
        Some(v) if !v.is_empty() => (v.iter().copied().filter(|x| x.is_finite()).collect(), true),
        _ => {
            let mut v = vec![b.whisker_low, b.q1, b.median, b.q3, b.whisker_high];
            v.extend(&b.fliers);
            (v.into_iter().filter(|x| x.is_finite()).collect(), false)
        }
    };
    SeriesFacts {
        label: non_empty(b.label.as_deref()),
        kind: SeriesKind::Box,
        x_values: vec![Value::Number(b.position); values.len()],
        y_values: values,
        z_values: None,
        color_name: None,
        independent: if b.vertical { AxisName::X } else { AxisName::Y },
        dependent: if b.vertical { AxisName::Y } else { AxisName::X },
        box_summary: Some(BoxSummary {
            median: b.median,
            q1: b.q1,
            q3: b.q3,
            whisker_low: b.whisker_low,
            whisker_high: b.whisker_high,
            fliers: b.fliers.clone(),
            from_samples,
        }),
        contour: None,
    }
}

/// Gives unlabeled series the legend's labels when the legend has exactly one
/// entry per labelable series.
fn assign_legend_labels(series: &mut [SeriesFacts], legend: &[String]) {
    let idx: Vec<usize> = series
        .iter()
        .enumerate()
        .filter(|(_, s)| matches!(s.kind, SeriesKind::Line | SeriesKind::Points | SeriesKind::Bars))
        .map(|(i, _)| i)
        .collect();
    if legend.is_empty() || idx.len() != legend.len() {
        return;
    }
    if idx.iter().any(|&i| series[i].label.is_some()) {
        return;
    }
    for (i, label) in idx.into_iter().zip(legend) {
        series[i].label = non_empty(Some(label));
    }
}

/// Replaces the typographic minus used by tick formatters.
pub fn normalize_tick_label(label: &str) -> String {
    label.replace('\u{2212}', "-").trim().to_string()
}

/// Parses a tick label as a number, accepting thousands separators,
/// percent signs and simple mathtext powers such as `$\mathdefault{10^{2}}$`.
pub fn parse_tick_number(label: &str) -> Option<f64> {
    let s = normalize_tick_label(label);
    if s.is_empty() {
        return None;
    }
    if let Some(inner) = s.strip_prefix('$').and_then(|t| t.strip_suffix('$')) {
        let inner = inner
            .trim_start_matches("\\mathdefault{")
            .trim_end_matches('}')
            .replace(['{', '}'], "");
        let inner = inner.replace("\\times", "*");
        if let Some((base, exp)) = inner.split_once('^') {
            let base: f64 = base.rsplit('*').next()?.trim().parse().ok()?;
            let exp: f64 = exp.trim().parse().ok()?;
            return Some(base.powf(exp));
        }
        return inner.trim().parse().ok();
    }
    let cleaned: String = s.chars().filter(|c| *c != ',').collect();
    let cleaned = cleaned.trim_end_matches('%');
    cleaned.parse::<f64>().ok().filter(|v| v.is_finite())
}

const MONTHS: &[&str] = &[
    "jan",
    "january",
    "feb",
    "february",
    "mar",
    "march",
    "apr",
    "april",
    "may",
    "jun",
    "june",
    "jul",
    "july",
    "aug",
    "august",
    "sep",
    "sept",
    "september",
    "oct",
    "october",
    "nov",
    "november",
    "dec",
    "december",
];

/// True for month names and common calendar date spellings.
pub fn is_date_label(label: &str) -> bool {
    use std::sync::OnceLock;
    static DATE: OnceLock<regex::Regex> = OnceLock::new();
    let s = normalize_tick_label(label).to_lowercase();
    if s.is_empty() {
        return false;
    }
    let first = s.split([' ', '.', ',', '-', '\'']).next().unwrap_or("");
    if MONTHS.contains(&first) {
        return true;
    }
    let re = DATE.get_or_init(|| {
        regex::Regex::new(
            r"^(\d{4}-\d{1,2}(-\d{1,2})?([ t]\d{1,2}:\d{2}(:\d{2})?)?|\d{1,2}/\d{1,2}/\d{2,4}|\d{1,2}:\d{2}(:\d{2})?|\d{1,2} [a-z]{3,9}( \d{4})?)$",
        )
        .expect("date pattern")
    });
    re.is_match(&s)
}

fn detect_scale(axis: &HostAxis) -> Scale {
    let labels: Vec<&str> = axis
        .ticks
        .iter()
        .map(|t| t.label.as_str())
        .filter(|l| !l.trim().is_empty())
        .collect();
    if axis.units.as_deref() == Some("date") {
        return Scale::Datetime;
    }
    if !labels.is_empty() {
        let dates = labels.iter().filter(|l| is_date_label(l)).count();
        if dates * 3 >= labels.len() * 2 {
            return Scale::Datetime;
        }
        if labels.iter().any(|l| parse_tick_number(l).is_none()) {
            return Scale::Categorical;
        }
    } else if axis.units.as_deref() == Some("category") {
        return Scale::Categorical;
    }
    if axis.scale == "log" || axis.scale == "symlog" {
        Scale::Log
    } else {
        Scale::Linear
    }
}

fn axis_facts(name: AxisName, axis: &HostAxis, extent: Option<(f64, f64)>) -> AxisFacts {
    let scale = detect_scale(axis);
    let labels: Vec<&str> = axis
        .ticks
        .iter()
        .map(|t| t.label.as_str())
        .filter(|l| !l.trim().is_empty())
        .collect();
    let limits = |lo: f64, hi: f64| (Value::Number(lo.min(hi)), Value::Number(hi.max(lo)));
    let (min, max) = if let Some((a, b)) = extent {
        limits(a, b)
    } else if labels.is_empty() {
        limits(axis.limits[0], axis.limits[1])
    } else if scale.is_numeric() {
        let first = parse_tick_number(labels[0]).unwrap_or(axis.limits[0]);
        let last = parse_tick_number(labels[labels.len() - 1]).unwrap_or(axis.limits[1]);
        limits(first, last)
    } else {
        (
            Value::Category(normalize_tick_label(labels[0])),
            Value::Category(normalize_tick_label(labels[labels.len() - 1])),
        )
    };
    AxisFacts {
        name,
        label: non_empty(axis.label.as_deref()),
        min,
        max,
        scale,
        tick_labels: axis.ticks.iter().map(|t| t.label.clone()).collect(),
    }
}

/// Maps data positions to tick labels when the axis is labelled with
/// categories and every distinct position sits on a tick.
fn resolve_positions(positions: &[f64], axis: &HostAxis) -> Vec<Value> {
    let numbers = || positions.iter().map(|&p| Value::Number(p)).collect();
    let scale = detect_scale(axis);
    if scale.is_numeric() && axis.units.as_deref() != Some("category") {
        return numbers();
    }
    let ticks: Vec<(f64, &str)> = axis
        .ticks
        .iter()
        .filter(|t| t.position.is_finite() && !t.label.trim().is_empty())
        .map(|t| (t.position, t.label.as_str()))
        .collect();
    let lookup = |p: f64| ticks.iter().find(|(tp, _)| close(*tp, p)).map(|(_, l)| *l);
    if positions.iter().all(|&p| lookup(p).is_some()) {
        positions
            .iter()
            .map(|&p| Value::Category(normalize_tick_label(lookup(p).unwrap_or_default())))
            .collect()
    } else {
        numbers()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::host::HostTick;

    fn ticks(labels: &[&str]) -> HostAxis {
        HostAxis {
            ticks: labels
                .iter()
                .enumerate()
                .map(|(i, l)| HostTick {
                    position: i as f64,
                    label: l.to_string(),
                })
                .collect(),
            ..HostAxis::default()
        }
    }

    #[test]
    fn month_labels_are_datetime() {
        assert_eq!(detect_scale(&ticks(&["jan", "mar", "may", "jul"])), Scale::Datetime);
        assert_eq!(
            detect_scale(&ticks(&["2020-01-01", "2020-02-01", "x"])),
            Scale::Datetime
        );
        assert_eq!(
            detect_scale(&ticks(&["the blue dots", "the orange dots"])),
            Scale::Categorical
        );
        assert_eq!(detect_scale(&ticks(&["\u{2212}1", "0", "1"])), Scale::Linear);
    }

    #[test]
    fn log_axis_with_mathtext_labels() {
        let mut axis = ticks(&["$\\mathdefault{10^{0}}$", "$\\mathdefault{10^{2}}$"]);
        axis.scale = "log".into();
        assert_eq!(detect_scale(&axis), Scale::Log);
        assert_eq!(parse_tick_number("$\\mathdefault{10^{2}}$"), Some(100.0));
    }

    #[test]
    fn tick_numbers() {
        assert_eq!(parse_tick_number("\u{2212}0.06"), Some(-0.06));
        assert_eq!(parse_tick_number("250,000"), Some(250000.0));
        assert_eq!(parse_tick_number("jan"), None);
    }

    #[test]
    fn empty_figure_has_one_blank_subplot() {
        let snap = snapshot_figure(&HostFigure::default());
        assert_eq!(snap.facts.subplots.len(), 1);
        assert!(snap.facts.subplots[0].marks.is_empty());
    }

    #[test]
    fn positions_resolve_only_when_all_on_ticks() {
        let mut axis = ticks(&["a", "b", "c"]);
        axis.units = Some("category".into());
        assert_eq!(
            resolve_positions(&[0.0, 2.0], &axis),
            vec![Value::Category("a".into()), Value::Category("c".into())]
        );
        assert_eq!(resolve_positions(&[0.5], &axis), vec![Value::Number(0.5)]);
    }
}
