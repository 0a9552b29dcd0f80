//! Descriptive statistics, fits, outliers and trend summaries.

use std::fmt;

use serde::Serialize;

use crate::chart_type::ChartType;
use crate::error::{AltTextError, Result};
use crate::figure::{AxisName, ContourFacts, SeriesFacts, SeriesKind, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StatKind {
    NumPts,
    Min,
    Max,
    Mean,
    Median,
    Std,
    LinearFit,
    Correlation,
    Iqr,
    Outliers,
    MaxContourCenter,
    MinContourCenter,
    SlicePercentages,
    ContourLevels,
}

impl StatKind {
    pub const ALL: [StatKind; 14] = [
        StatKind::NumPts,
        StatKind::Min,
        StatKind::Max,
        StatKind::Mean,
        StatKind::Median,
        StatKind::Std,
        StatKind::LinearFit,
        StatKind::Correlation,
        StatKind::Iqr,
        StatKind::Outliers,
        StatKind::MaxContourCenter,
        StatKind::MinContourCenter,
        StatKind::SlicePercentages,
        StatKind::ContourLevels,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StatKind::NumPts => "num_pts",
            StatKind::Min => "min",
            StatKind::Max => "max",
            StatKind::Mean => "mean",
            StatKind::Median => "median",
            StatKind::Std => "std",
            StatKind::LinearFit => "linear_fit",
            StatKind::Correlation => "correlation",
            StatKind::Iqr => "iqr",
            StatKind::Outliers => "outliers",
            StatKind::MaxContourCenter => "max_contour_center",
            StatKind::MinContourCenter => "min_contour_center",
            StatKind::SlicePercentages => "slice_percentages",
            StatKind::ContourLevels => "contour_levels",
        }
    }

    pub fn parse(name: &str) -> Option<StatKind> {
        StatKind::ALL.into_iter().find(|k| k.as_str() == name)
    }
}

impl fmt::Display for StatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Location {
    At(Value),
    /// A point or grid cell given by both coordinates.
    Cell(f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum StatValue {
    Number(f64),
    Count(usize),
    Fit {
        slope: f64,
        intercept: f64,
    },
    Values(Vec<f64>),
    Point(f64, f64),
    /// One value per axis, e.g. the mean of each coordinate of a point cloud.
    PerAxis(Vec<(AxisName, f64)>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatResult {
    pub kind: StatKind,
    /// Axis the value is measured along.
    pub axis: AxisName,
    pub value: StatValue,
    pub locations: Vec<Location>,
}

// -- primitive statistics ----------------------------------------------------

pub fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

/// Population standard deviation (divides by n).
pub fn std_dev(values: &[f64]) -> Option<f64> {
    let m = mean(values)?;
    let var = values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / values.len() as f64;
    Some(var.sqrt())
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Quantile `q` in `[0, 1]`, linearly interpolating between order
/// statistics at rank `q * (n - 1)`.
pub fn quantile(values: &[f64], q: f64) -> Option<f64> {
    if values.is_empty() || !(0.0..=1.0).contains(&q) {
        return None;
    }
    let s = sorted(values);
    let rank = q * (s.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    let frac = rank - lo as f64;
    Some(s[lo] + (s[hi] - s[lo]) * frac)
}

pub fn median(values: &[f64]) -> Option<f64> {
    quantile(values, 0.5)
}

pub fn iqr(values: &[f64]) -> Option<f64> {
    Some(quantile(values, 0.75)? - quantile(values, 0.25)?)
}

/// Ordinary least squares fit `y = slope * x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(AltTextError::DegenerateFit(format!(
            "need at least two paired points, got {} x and {} y values",
            xs.len(),
            ys.len()
        )));
    }
    let mx = mean(xs).unwrap_or(0.0);
    let my = mean(ys).unwrap_or(0.0);
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(AltTextError::DegenerateFit("x values are constant".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Pearson correlation coefficient, clamped to `[-1, 1]`.
pub fn pearson_correlation(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(AltTextError::DegenerateFit(format!(
            "need two equal-length series of at least two values, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let ma = mean(a).unwrap_or(0.0);
    let mb = mean(b).unwrap_or(0.0);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(AltTextError::DegenerateFit("series has zero variance".into()));
    }
    Ok((sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0))
}

/// Values outside the Tukey fences `Q1 - 1.5 IQR` and `Q3 + 1.5 IQR`,
/// in ascending order. Fewer than four values never have outliers.
pub fn tukey_outliers(values: &[f64]) -> Vec<f64> {
    if values.len() < 4 {
        return Vec::new();
    }
    let (Some(q1), Some(q3)) = (quantile(values, 0.25), quantile(values, 0.75)) else {
        return Vec::new();
    };
    let spread = 1.5 * (q3 - q1);
    let (lo, hi) = (q1 - spread, q3 + spread);
    sorted(values).into_iter().filter(|v| *v < lo || *v > hi).collect()
}

/// Indices of points whose z-score exceeds 3 along either coordinate.
pub fn zscore_outliers(xs: &[f64], ys: &[f64]) -> Vec<usize> {
    let z = |values: &[f64]| -> Vec<f64> {
        match (mean(values), std_dev(values)) {
            (Some(m), Some(s)) if s > 0.0 => values.iter().map(|v| ((v - m) / s).abs()).collect(),
            _ => vec![0.0; values.len()],
        }
    };
    let (zx, zy) = (z(xs), z(ys));
    (0..xs.len().min(ys.len()))
        .filter(|&i| zx[i] > 3.0 || zy[i] > 3.0)
        .collect()
}

// -- series statistics -------------------------------------------------------

/// Statistics listed by default for each chart type.
pub fn default_statistics(chart_type: ChartType) -> Vec<StatKind> {
    use StatKind::*;
    match chart_type {
        ChartType::Scatter => vec![NumPts, Mean, LinearFit, Outliers],
        ChartType::Boxplot => vec![Median, Iqr, Outliers],
        ChartType::Contour => vec![ContourLevels, MaxContourCenter],
        ChartType::Bar => vec![NumPts, Min, Max, Mean],
        ChartType::Line | ChartType::RadialLine => vec![Min, Max, Mean],
        ChartType::Pie => vec![SlicePercentages, Std, Mean, Max, Min],
        ChartType::Strip => vec![NumPts, Median, Outliers],
        ChartType::Heatmap | ChartType::Image => vec![Min, Max, Mean],
        ChartType::Blank | ChartType::Unknown => Vec::new(),
    }
}

fn chart_type_for(series: &SeriesFacts) -> ChartType {
    match series.kind {
        SeriesKind::Line => ChartType::Line,
        SeriesKind::Points => ChartType::Scatter,
        SeriesKind::Bars => ChartType::Bar,
        SeriesKind::Slices => ChartType::Pie,
        SeriesKind::Box => ChartType::Boxplot,
        SeriesKind::Grid => ChartType::Heatmap,
        SeriesKind::Contour => ChartType::Contour,
    }
}

/// Computes `kind` for `series`, choosing rules from the series' own shape.
pub fn compute_statistic(series: &SeriesFacts, kind: StatKind) -> Result<StatResult> {
    compute_statistic_for(series, kind, chart_type_for(series))
}

/// Computes `kind` for `series` as drawn in a chart of `chart_type`.
pub fn compute_statistic_for(series: &SeriesFacts, kind: StatKind, chart_type: ChartType) -> Result<StatResult> {
    let na = |reason: &str| AltTextError::inapplicable(kind.as_str(), reason);
    let result = |value, locations| StatResult {
        kind,
        axis: series.dependent,
        value,
        locations,
    };

    if let Some(contour) = &series.contour {
        return match kind {
            StatKind::ContourLevels => Ok(result(StatValue::Values(contour.levels.clone()), Vec::new())),
            StatKind::MaxContourCenter | StatKind::MinContourCenter => {
                let (x, y) = contour_center(contour, kind == StatKind::MaxContourCenter)
                    .ok_or_else(|| na("no contour level has any path"))?;
                Ok(result(StatValue::Point(x, y), Vec::new()))
            }
            _ => Err(na("contour sets only support contour statistics")),
        };
    }
    if let Some(grid) = &series.z_values {
        let cells: Vec<(f64, usize, usize)> = grid
            .values
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, v)| (*v, r, c)))
            .filter(|(v, _, _)| v.is_finite())
            .collect();
        if cells.is_empty() {
            return Err(na("grid has no finite values"));
        }
        let at = |r: usize, c: usize| {
            Location::Cell(
                grid.x_coords.get(c).copied().unwrap_or(c as f64),
                grid.y_coords.get(r).copied().unwrap_or(r as f64),
            )
        };
        let values: Vec<f64> = cells.iter().map(|c| c.0).collect();
        return match kind {
            StatKind::Min | StatKind::Max => {
                let pick = cells
                    .iter()
                    .fold(None::<&(f64, usize, usize)>, |best, c| match best {
                        Some(b) if (kind == StatKind::Min && c.0 >= b.0) || (kind == StatKind::Max && c.0 <= b.0) => {
                            Some(b)
                        }
                        _ => Some(c),
                    })
                    .expect("non-empty");
                Ok(result(StatValue::Number(pick.0), vec![at(pick.1, pick.2)]))
            }
            StatKind::Mean => Ok(result(StatValue::Number(mean(&values).unwrap_or(0.0)), Vec::new())),
            StatKind::Median => Ok(result(StatValue::Number(median(&values).unwrap_or(0.0)), Vec::new())),
            StatKind::Std => Ok(result(StatValue::Number(std_dev(&values).unwrap_or(0.0)), Vec::new())),
            StatKind::Iqr => Ok(result(StatValue::Number(iqr(&values).unwrap_or(0.0)), Vec::new())),
            StatKind::NumPts => Ok(result(StatValue::Count(values.len()), Vec::new())),
            _ => Err(na("not defined for 2-D grids")),
        };
    }

    let ys = &series.y_values;
    if ys.is_empty() {
        return Err(na("series has no values"));
    }
    let location = |i: usize| Location::At(series.x_values.get(i).cloned().unwrap_or(Value::Number(i as f64)));

    match kind {
        StatKind::NumPts => Ok(result(StatValue::Count(ys.len()), Vec::new())),
        StatKind::Min | StatKind::Max => {
            let mut best = 0;
            for (i, v) in ys.iter().enumerate() {
                let better = if kind == StatKind::Min {
                    *v < ys[best]
                } else {
                    *v > ys[best]
                };
                if better {
                    best = i;
                }
            }
            Ok(result(StatValue::Number(ys[best]), vec![location(best)]))
        }
        StatKind::Mean => {
            if series.kind == SeriesKind::Points && chart_type == ChartType::Scatter {
                let xs = series.numeric_x().ok_or_else(|| na("x values are not numeric"))?;
                let mx = mean(&xs).unwrap_or(0.0);
                let my = mean(ys).unwrap_or(0.0);
                Ok(result(
                    StatValue::PerAxis(vec![(series.independent, mx), (series.dependent, my)]),
                    Vec::new(),
                ))
            } else {
                Ok(result(StatValue::Number(mean(ys).unwrap_or(0.0)), Vec::new()))
            }
        }
        StatKind::Median => {
            let m = match &series.box_summary {
                Some(b) if !b.from_samples && b.median.is_finite() => b.median,
                _ => median(ys).unwrap_or(0.0),
            };
            Ok(result(StatValue::Number(m), Vec::new()))
        }
        StatKind::Std => Ok(result(StatValue::Number(std_dev(ys).unwrap_or(0.0)), Vec::new())),
        StatKind::Iqr => {
            let v = match &series.box_summary {
                Some(b) if !b.from_samples => b.q3 - b.q1,
                _ => iqr(ys).unwrap_or(0.0),
            };
            Ok(result(StatValue::Number(v), Vec::new()))
        }
        StatKind::LinearFit => {
            if series.kind == SeriesKind::Box || series.kind == SeriesKind::Slices {
                return Err(na("no independent variable"));
            }
            let xs = series.numeric_x().ok_or_else(|| na("x values are not numeric"))?;
            let (slope, intercept) = linear_fit(&xs, ys)?;
            Ok(result(StatValue::Fit { slope, intercept }, Vec::new()))
        }
        StatKind::Correlation => Err(na("correlation needs two series")),
        StatKind::Outliers => Ok(detect_outliers(series, chart_type)),
        StatKind::SlicePercentages => {
            if series.kind != SeriesKind::Slices {
                return Err(na("only pie slices have percentages"));
            }
            let total: f64 = ys.iter().sum();
            let pct = ys.iter().map(|v| v / total * 100.0).collect();
            Ok(result(StatValue::Values(pct), (0..ys.len()).map(location).collect()))
        }
        StatKind::MaxContourCenter | StatKind::MinContourCenter | StatKind::ContourLevels => {
            Err(na("series is not a contour set"))
        }
    }
}

/// Outliers of `series`: Tukey fences on the dependent values for most
/// charts, per-axis z-scores for scatter plots.
pub fn detect_outliers(series: &SeriesFacts, chart_type: ChartType) -> StatResult {
    let ys = &series.y_values;
    let xs = series.numeric_x();
    if chart_type == ChartType::Scatter {
        if let Some(xs) = xs.filter(|xs| xs.len() == ys.len()) {
            let mut idx = zscore_outliers(&xs, ys);
            idx.sort_by(|&a, &b| ys[a].total_cmp(&ys[b]).then(xs[a].total_cmp(&xs[b])));
            return StatResult {
                kind: StatKind::Outliers,
                axis: series.dependent,
                value: StatValue::Values(idx.iter().map(|&i| ys[i]).collect()),
                locations: idx.iter().map(|&i| Location::Cell(xs[i], ys[i])).collect(),
            };
        }
    }
    let outliers = match &series.box_summary {
        Some(b) if !b.from_samples => sorted(&b.fliers),
        _ => tukey_outliers(ys),
    };
    StatResult {
        kind: StatKind::Outliers,
        axis: series.dependent,
        locations: Vec::new(),
        value: StatValue::Values(outliers),
    }
}

/// Area-weighted centroid of the largest polygon at the highest (or lowest)
/// level that has any path.
pub fn contour_center(contour: &ContourFacts, highest: bool) -> Option<(f64, f64)> {
    let mut levels: Vec<usize> = (0..contour.levels.len().min(contour.paths.len()))
        .filter(|&i| contour.paths[i].iter().any(|p| !p.is_empty()))
        .collect();
    if highest {
        levels.reverse();
    }
    let level = *levels.first()?;
    let poly = contour.paths[level]
        .iter()
        .filter(|p| !p.is_empty())
        .max_by(|a, b| signed_area(a).abs().total_cmp(&signed_area(b).abs()))?;
    Some(centroid(poly))
}

fn signed_area(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (p, q) = (poly[i], poly[(i + 1) % n]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum::<f64>()
        / 2.0
}

fn centroid(poly: &[[f64; 2]]) -> (f64, f64) {
    let a = signed_area(poly);
    let n = poly.len();
    if a.abs() < 1e-12 {
        let (sx, sy) = poly.iter().fold((0.0, 0.0), |(sx, sy), p| (sx + p[0], sy + p[1]));
        return (sx / n as f64, sy / n as f64);
    }
    let (mut cx, mut cy) = (0.0, 0.0);
    for i in 0..n {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        let cross = p[0] * q[1] - q[0] * p[1];
        cx += (p[0] + q[0]) * cross;
        cy += (p[1] + q[1]) * cross;
    }
    (cx / (6.0 * a), cy / (6.0 * a))
}

// -- trends ------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increase,
    Decrease,
    Flat,
}

impl Direction {
    pub fn reversed(self) -> Direction {
        match self {
            Direction::Increase => Direction::Decrease,
            Direction::Decrease => Direction::Increase,
            Direction::Flat => Direction::Flat,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Strict,
    General,
    Fluctuating,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendSummary {
    /// Sign of the overall change from first to last point.
    pub direction: Direction,
    pub stability: Stability,
    /// Direction of the segment leading to the pivot extremum.
    pub lead: Direction,
    /// Independent coordinate of the pivot (global max for increasing
    /// leads, global min for decreasing ones).
    pub peak_location: Location,
    pub peak_index: usize,
    pub post_peak: Option<(Stability, Direction)>,
    pub direction_changes: usize,
    pub overall_change: f64,
    /// Value at the pivot.
    pub peak_value: f64,
}

impl TrendSummary {
    pub fn is_at_end(&self, len: usize) -> bool {
        self.peak_index + 1 == len
    }
}

/// Fraction of `diffs` with the sign of `dir`.
fn agreement(diffs: &[f64], dir: Direction) -> f64 {
    if diffs.is_empty() {
        return 0.0;
    }
    let hits = diffs
        .iter()
        .filter(|d| match dir {
            Direction::Increase => **d > 0.0,
            Direction::Decrease => **d < 0.0,
            Direction::Flat => **d == 0.0,
        })
        .count();
    hits as f64 / diffs.len() as f64
}

fn stability_of(frac: f64) -> Stability {
    if frac >= 1.0 {
        Stability::Strict
    } else if frac >= 0.75 {
        Stability::General
    } else {
        Stability::Fluctuating
    }
}

/// Whether a run moving in `dir` begins at its own opposite extreme, e.g. an
/// increase that starts at the run's minimum.
fn starts_at_opposite(run: &[f64], dir: Direction) -> bool {
    let first = run[0];
    match dir {
        Direction::Increase => run.iter().all(|v| *v >= first),
        Direction::Decrease => run.iter().all(|v| *v <= first),
        Direction::Flat => true,
    }
}

/// Number of sign flips between consecutive non-zero first differences.
pub fn direction_changes(diffs: &[f64]) -> usize {
    let signs: Vec<bool> = diffs.iter().filter(|d| **d != 0.0).map(|d| *d > 0.0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Orders the series along its independent axis.
fn ordered_points(series: &SeriesFacts) -> Result<(Vec<Value>, Vec<f64>)> {
    let na = |reason: &str| AltTextError::inapplicable("trend", reason);
    match series.kind {
        SeriesKind::Line | SeriesKind::Bars | SeriesKind::Slices => {}
        _ => return Err(na("series is not one-dimensional over an ordered axis")),
    }
    if series.y_values.len() < 2 {
        return Err(na("need at least two points"));
    }
    if series.x_values.len() != series.y_values.len() {
        return Err(na("x and y lengths differ"));
    }
    match series.numeric_x() {
        Some(xs) => {
            let mut idx: Vec<usize> = (0..xs.len()).collect();
            idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
            if idx.windows(2).any(|w| xs[w[0]] == xs[w[1]]) {
                return Err(na("independent values repeat"));
            }
            Ok((
                idx.iter().map(|&i| series.x_values[i].clone()).collect(),
                idx.iter().map(|&i| series.y_values[i]).collect(),
            ))
        }
        None => {
            let mut seen = std::collections::HashSet::new();
            let unique = series.x_values.iter().all(|v| match v {
                Value::Category(c) => seen.insert(c.clone()),
                Value::Number(_) => false,
            });
            if !unique {
                return Err(na("categories repeat"));
            }
            Ok((series.x_values.clone(), series.y_values.clone()))
        }
    }
}

/// Summarizes the shape of a one-dimensional series.
pub fn detect_trend(series: &SeriesFacts) -> Result<TrendSummary> {
    let (xs, ys) = ordered_points(series)?;
    let diffs: Vec<f64> = ys.windows(2).map(|w| w[1] - w[0]).collect();
    let overall = ys[ys.len() - 1] - ys[0];
    let direction = if overall > 0.0 {
        Direction::Increase
    } else if overall < 0.0 {
        Direction::Decrease
    } else {
        Direction::Flat
    };
    let changes = direction_changes(&diffs);
    let location = |i: usize| {
        if series.kind == SeriesKind::Slices {
            Location::At(Value::Number(ys[i]))
        } else {
            Location::At(xs[i].clone())
        }
    };

    if diffs.iter().all(|d| *d == 0.0) {
        return Ok(TrendSummary {
            direction: Direction::Flat,
            stability: Stability::Strict,
            lead: Direction::Flat,
            peak_location: location(0),
            peak_index: 0,
            post_peak: None,
            direction_changes: 0,
            overall_change: 0.0,
            peak_value: ys[0],
        });
    }

    let first_extreme =
        |better: fn(f64, f64) -> bool| (0..ys.len()).fold(0, |best, i| if better(ys[i], ys[best]) { i } else { best });
    let imax = first_extreme(|a, b| a > b);
    let imin = first_extreme(|a, b| a < b);

    // candidate pivots scored by agreeing steps; must be at least generally stable
    let mut best: Option<(f64, Direction, usize, f64)> = None;
    for (dir, pivot) in [(Direction::Increase, imax), (Direction::Decrease, imin)] {
        if pivot == 0 {
            continue;
        }
        let frac = agreement(&diffs[..pivot], dir);
        if frac < 0.75 || !starts_at_opposite(&ys[..=pivot], dir) {
            continue;
        }
        let score = frac * pivot as f64;
        if best.is_none_or(|b| score > b.0) {
            best = Some((score, dir, pivot, frac));
        }
    }

    let Some((_, lead, pivot, frac)) = best else {
        let pivot = if direction == Direction::Decrease { imin } else { imax };
        return Ok(TrendSummary {
            direction,
            stability: Stability::Fluctuating,
            lead: direction,
            peak_location: location(pivot),
            peak_index: pivot,
            post_peak: None,
            direction_changes: changes,
            overall_change: overall,
            peak_value: ys[pivot],
        });
    };

    let post_peak = if pivot + 1 < ys.len() {
        let after = lead.reversed();
        let s = stability_of(agreement(&diffs[pivot..], after));
        let tail: Vec<f64> = ys[pivot..].iter().rev().copied().collect();
        (s != Stability::Fluctuating && starts_at_opposite(&tail, lead)).then_some((s, after))
    } else {
        None
    };

    Ok(TrendSummary {
        direction,
        stability: stability_of(frac),
        lead,
        peak_location: location(pivot),
        peak_index: pivot,
        post_peak,
        direction_changes: changes,
        overall_change: overall,
        peak_value: ys[pivot],
    })
}
