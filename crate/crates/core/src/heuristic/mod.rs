//! Template-based L1–L3 descriptions and markdown data tables.

mod format;
mod table;

use serde::Serialize;

pub use format::{format_decimal, format_number, join_list, join_sentences, lower_first, sentence_case};
pub use table::render_data_table;

use crate::chart_type::{classify, ChartType};
use crate::error::{AltTextError, Result};
use crate::figure::{
    display_label, AxisFacts, AxisName, FigureFacts, Scale, SeriesFacts, SeriesKind, SubplotFacts, Value,
};
use crate::host::Orientation;
use crate::stats::{
    compute_statistic_for, default_statistics, detect_trend, pearson_correlation, Direction, Location, Stability,
    StatKind, StatResult, StatValue, TrendSummary,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescriptionOptions {
    /// Semantic level, 1 to 3.
    pub desc_level: u8,
    /// Statistics to report instead of the chart type's defaults.
    pub stats: Option<Vec<StatKind>>,
    /// Overrides whether trend sentences are emitted at level 3.
    pub trends: Option<bool>,
    pub include_table: bool,
    pub max_table_rows: usize,
    pub max_table_cols: usize,
    pub include_color_encodings: bool,
}

impl Default for DescriptionOptions {
    fn default() -> Self {
        DescriptionOptions {
            desc_level: 2,
            stats: None,
            trends: None,
            include_table: false,
            max_table_rows: 20,
            max_table_cols: 8,
            include_color_encodings: true,
        }
    }
}

impl DescriptionOptions {
    pub fn level(desc_level: u8) -> Self {
        DescriptionOptions {
            desc_level,
            ..Self::default()
        }
    }
}

/// Text generated for one subplot, split by semantic level.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub l1: String,
    pub l2: String,
    pub l3: String,
}

impl Segment {
    pub fn text(&self) -> String {
        join_sentences(&[&self.l1, &self.l2, &self.l3])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AltText {
    pub text: String,
    pub level: u8,
    /// Figure-level sentence preceding the segments of multi-subplot figures.
    pub header: Option<String>,
    pub segments: Vec<Segment>,
    pub table_markdown: Option<String>,
    pub chart_types: Vec<ChartType>,
    pub warnings: Vec<String>,
}

impl AltText {
    /// Wraps text produced elsewhere, such as a model response.
    pub fn plain(text: impl Into<String>, level: u8) -> AltText {
        let text = text.into();
        AltText {
            segments: vec![Segment {
                l1: text.clone(),
                ..Segment::default()
            }],
            text,
            level,
            header: None,
            table_markdown: None,
            chart_types: Vec::new(),
            warnings: Vec::new(),
        }
    }
}

/// Describes every subplot of `figure` at `options.desc_level`.
pub fn generate_alt_text(figure: &FigureFacts, options: &DescriptionOptions) -> Result<AltText> {
    if !(1..=3).contains(&options.desc_level) {
        return Err(AltTextError::InvalidLevel(options.desc_level));
    }
    let multi = figure.subplots.len() > 1;
    let header = multi.then(|| {
        let mut s = format!("A figure with {} subplots", figure.subplots.len());
        if let Some(t) = &figure.suptitle {
            s.push_str(&format!(" titled '{}'", t.to_lowercase()));
        }
        s.push('.');
        s
    });

    let mut segments = Vec::new();
    let mut chart_types = Vec::new();
    let mut warnings = Vec::new();
    let mut tables = Vec::new();
    for (k, raw) in figure.subplots.iter().enumerate() {
        let classification = classify(raw);
        let chart_type = classification.chart_type;
        if let Some(w) = classification.warning {
            warnings.push(format!("subplot {}: {w}", k + 1));
        }
        let mut subplot = oriented(raw, chart_type);
        if !multi && subplot.title.is_none() {
            subplot.title = figure.suptitle.clone();
        }

        let l1 = render_l1(&subplot, chart_type, options);
        let l1 = if multi {
            format!("subplot {}: {}", k + 1, lower_first(&l1))
        } else {
            l1
        };
        let l2 = if options.desc_level >= 2 {
            render_l2(&subplot, chart_type, options)
        } else {
            String::new()
        };
        let l3 = if options.desc_level >= 3 {
            render_l3(&subplot, chart_type, options)
        } else {
            String::new()
        };
        segments.push(Segment { l1, l2, l3 });
        chart_types.push(chart_type);

        if options.include_table {
            if let Ok(t) = render_data_table(&subplot, options.max_table_rows, options.max_table_cols) {
                tables.push(if multi { format!("subplot {}:\n\n{t}", k + 1) } else { t });
            }
        }
    }

    let mut parts: Vec<String> = header.iter().cloned().collect();
    parts.extend(segments.iter().map(Segment::text));
    Ok(AltText {
        text: join_sentences(&parts),
        level: options.desc_level,
        header,
        segments,
        table_markdown: (!tables.is_empty()).then(|| tables.join("\n\n")),
        chart_types,
        warnings,
    })
}

/// Strip plots whose categories run along y measure values along x; swap
/// the roles of the coordinates so statistics read the measured axis.
fn oriented(subplot: &SubplotFacts, chart_type: ChartType) -> SubplotFacts {
    let mut out = subplot.clone();
    if chart_type != ChartType::Strip {
        return out;
    }
    let x_categorical = subplot.axis(AxisName::X).is_some_and(|a| a.scale == Scale::Categorical);
    let y_categorical = subplot.axis(AxisName::Y).is_some_and(|a| a.scale == Scale::Categorical);
    let spread = |s: &SeriesFacts, along_y: bool| -> f64 {
        let vals: Vec<f64> = if along_y {
            s.y_values.clone()
        } else {
            s.x_values.iter().filter_map(Value::as_number).collect()
        };
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    };
    let values_along_x = if y_categorical != x_categorical {
        y_categorical
    } else {
        let sx: f64 = subplot.series.iter().map(|s| spread(s, false)).sum();
        let sy: f64 = subplot.series.iter().map(|s| spread(s, true)).sum();
        sx > sy
    };
    if values_along_x {
        for s in out.series.iter_mut().filter(|s| s.kind == SeriesKind::Points) {
            let xs: Vec<f64> = s.x_values.iter().filter_map(Value::as_number).collect();
            if xs.len() != s.y_values.len() {
                continue;
            }
            s.x_values = s.y_values.iter().map(|&y| Value::Number(y)).collect();
            s.y_values = xs;
            s.independent = AxisName::Y;
            s.dependent = AxisName::X;
        }
    }
    out
}

fn format_value(v: &Value) -> String {
    match v {
        Value::Number(x) => format_number(*x),
        Value::Category(c) => c.to_lowercase(),
    }
}

fn axis_phrase(axis: &AxisFacts) -> String {
    let range = format!("from {} to {}", format_value(&axis.min), format_value(&axis.max));
    match &axis.label {
        Some(label) => format!("{} is plotted on the {}-axis {range}", label.to_lowercase(), axis.name),
        None => format!("the {}-axis ranges {range}", axis.name),
    }
}

fn axes_sentence(subplot: &SubplotFacts) -> String {
    let axes: Vec<&AxisFacts> = [AxisName::X, AxisName::Y, AxisName::Z]
        .iter()
        .filter_map(|n| subplot.axis(*n))
        .collect();
    if axes.is_empty() {
        return String::new();
    }
    let shared = axes.iter().all(|a| a.scale == axes[0].scale);
    let body = if shared && axes.len() > 1 {
        let phrases: Vec<String> = axes.iter().map(|a| axis_phrase(a)).collect();
        let quantifier = if axes.len() == 2 { "both" } else { "all" };
        format!(
            "{}, {quantifier} using {} scales",
            join_list(&phrases),
            axes[0].scale.as_str()
        )
    } else {
        let phrases: Vec<String> = axes
            .iter()
            .map(|a| format!("{} using a {} scale", axis_phrase(a), a.scale.as_str()))
            .collect();
        join_list(&phrases)
    };
    format!("{body}.")
}

fn title_sentence(subplot: &SubplotFacts, chart_type: ChartType) -> String {
    let name = match (chart_type, subplot.marks.grid_shape) {
        (ChartType::Heatmap | ChartType::Image, Some((rows, cols))) => {
            format!("{cols}x{rows} {}", chart_type.display_name())
        }
        _ => chart_type.display_name().to_string(),
    };
    let article = if name.starts_with(['a', 'e', 'i', 'o', 'u']) {
        "an"
    } else {
        "a"
    };
    match &subplot.title {
        Some(t) => format!("{article} {name} titled '{}'.", t.to_lowercase()),
        None => format!("{article} {name}."),
    }
}

fn describes_colors(subplot: &SubplotFacts, chart_type: ChartType) -> bool {
    match chart_type {
        ChartType::Line | ChartType::RadialLine | ChartType::Scatter => true,
        ChartType::Bar => subplot.series.len() > 1,
        _ => false,
    }
}

fn color_sentence(subplot: &SubplotFacts, chart_type: ChartType) -> String {
    let colored: Vec<(usize, &str)> = subplot
        .series
        .iter()
        .enumerate()
        .filter_map(|(i, s)| s.color_name.as_deref().map(|c| (i, c)))
        .collect();
    if colored.is_empty() {
        return String::new();
    }
    if colored.len() == 1 && subplot.series.len() == 1 && subplot.series[0].label.is_none() {
        return format!("the data are plotted in {}.", colored[0].1);
    }
    let phrases: Vec<String> = colored
        .iter()
        .map(|(i, c)| {
            format!(
                "{} is plotted in {c}",
                display_label(subplot, *i, chart_type).to_lowercase()
            )
        })
        .collect();
    format!("{}.", join_list(&phrases))
}

fn slices_sentence(subplot: &SubplotFacts) -> String {
    let Some(series) = subplot.series.iter().find(|s| s.kind == SeriesKind::Slices) else {
        return String::new();
    };
    let total: f64 = series.y_values.iter().sum();
    let items: Vec<String> = series
        .x_values
        .iter()
        .zip(&series.y_values)
        .map(|(label, v)| format!("{} ({}%)", format_value(label), format_number(v / total * 100.0)))
        .collect();
    let n = items.len();
    if n == 1 {
        format!("there is 1 slice: {}.", items[0])
    } else {
        format!("there are {n} slices: {}.", join_list(&items))
    }
}

/// Chart type, title, axes, color encodings, reference lines and annotations.
pub fn render_l1(subplot: &SubplotFacts, chart_type: ChartType, options: &DescriptionOptions) -> String {
    let mut parts = vec![title_sentence(subplot, chart_type)];
    if chart_type == ChartType::Pie {
        parts.push(slices_sentence(subplot));
    } else {
        parts.push(axes_sentence(subplot));
    }
    if options.include_color_encodings && describes_colors(subplot, chart_type) {
        parts.push(color_sentence(subplot, chart_type));
    }
    for r in &subplot.ref_lines {
        let (kind, axis) = match r.orientation {
            Orientation::Horizontal => ("horizontal", "y"),
            Orientation::Vertical => ("vertical", "x"),
        };
        parts.push(format!("there is a {kind} line at {axis}={}.", format_decimal(r.value)));
    }
    for a in &subplot.annotations {
        parts.push(format!("an annotation reads '{}'.", a.text.to_lowercase()));
    }
    sentence_case(&join_sentences(&parts))
}

fn location_text(loc: &Location, independent: AxisName) -> String {
    match loc {
        Location::At(v) => format!("{independent}={}", format_value(v)),
        Location::Cell(x, y) => format!("({}, {})", format_number(*x), format_number(*y)),
    }
}

fn stat_phrases(result: &StatResult, series: &SeriesFacts, chart_type: ChartType) -> Vec<String> {
    let dep = result.axis;
    let ind = series.independent;
    let with_axis = |v: f64| format!("{dep}={}", format_number(v));
    let at = || {
        if chart_type == ChartType::Pie {
            String::new()
        } else {
            result
                .locations
                .first()
                .map(|l| format!(" at {}", location_text(l, ind)))
                .unwrap_or_default()
        }
    };
    let bare = chart_type == ChartType::Boxplot;
    match (&result.kind, &result.value) {
        (StatKind::NumPts, StatValue::Count(n)) => {
            vec![if *n == 1 {
                "1 point".to_string()
            } else {
                format!("{n} points")
            }]
        }
        (StatKind::Min, StatValue::Number(v)) => vec![format!("a minimum value of {}{}", with_axis(*v), at())],
        (StatKind::Max, StatValue::Number(v)) => vec![format!("a maximum value of {}{}", with_axis(*v), at())],
        (StatKind::Mean, StatValue::Number(v)) => vec![format!("an average of {}", with_axis(*v))],
        (StatKind::Mean, StatValue::PerAxis(values)) => values
            .iter()
            .map(|(axis, v)| format!("an average of {axis}={}", format_number(*v)))
            .collect(),
        (StatKind::Median, StatValue::Number(v)) if bare => vec![format!("a median of {}", format_number(*v))],
        (StatKind::Median, StatValue::Number(v)) => vec![format!("a median of {}", with_axis(*v))],
        (StatKind::Std, StatValue::Number(v)) => vec![format!("a standard deviation of {}", with_axis(*v))],
        (StatKind::Iqr, StatValue::Number(v)) if bare => {
            vec![format!("an interquartile range of {}", format_number(*v))]
        }
        (StatKind::Iqr, StatValue::Number(v)) => vec![format!("an interquartile range of {}", with_axis(*v))],
        (StatKind::LinearFit, StatValue::Fit { slope, intercept }) => {
            let sign = if *intercept < 0.0 { '-' } else { '+' };
            vec![format!(
                "a linear fit of {dep}={}{ind}{sign}{}",
                format_number(*slope),
                format_number(intercept.abs())
            )]
        }
        (StatKind::Outliers, StatValue::Values(values)) => vec![match values.len() {
            0 => "no outliers".to_string(),
            1 => match result.locations.first() {
                Some(Location::Cell(x, y)) => format!("1 outlier at ({}, {})", format_number(*x), format_number(*y)),
                _ => format!("1 outlier at {}", with_axis(values[0])),
            },
            n => format!("{n} outliers"),
        }],
        _ => Vec::new(),
    }
}

fn contour_sentences(series: &SeriesFacts, stats: &[StatKind], chart_type: ChartType) -> Vec<String> {
    let mut out = Vec::new();
    for kind in stats {
        let Ok(result) = compute_statistic_for(series, *kind, chart_type) else {
            continue;
        };
        match (kind, &result.value) {
            (StatKind::ContourLevels, StatValue::Values(levels)) => {
                let values: Vec<String> = levels.iter().map(|v| format_number(*v)).collect();
                let n = values.len();
                out.push(if n == 1 {
                    format!("1 contour line is plotted with value {}.", values[0])
                } else {
                    format!("{n} contour lines are plotted with values {}.", join_list(&values))
                });
            }
            (StatKind::MaxContourCenter | StatKind::MinContourCenter, StatValue::Point(x, y)) => {
                let which = if *kind == StatKind::MaxContourCenter {
                    "max"
                } else {
                    "min"
                };
                out.push(format!(
                    "the {which} contour is centered around ({}, {}).",
                    format_number(*x),
                    format_number(*y)
                ));
            }
            _ => {}
        }
    }
    out
}

fn correlation_sentence(subplot: &SubplotFacts, chart_type: ChartType) -> Option<String> {
    if !matches!(chart_type, ChartType::Line | ChartType::RadialLine) {
        return None;
    }
    let lines: Vec<(usize, &SeriesFacts)> = subplot
        .series
        .iter()
        .enumerate()
        .filter(|(_, s)| s.kind == SeriesKind::Line)
        .collect();
    let [(ia, a), (ib, b)] = lines.as_slice() else {
        return None;
    };
    if a.x_values != b.x_values {
        return None;
    }
    let r = pearson_correlation(&a.y_values, &b.y_values).ok()?;
    Some(format!(
        "{} and {} have a correlation of {}.",
        display_label(subplot, *ia, chart_type).to_lowercase(),
        display_label(subplot, *ib, chart_type).to_lowercase(),
        format_number(r)
    ))
}

/// Statistics sentences, one per series.
pub fn render_l2(subplot: &SubplotFacts, chart_type: ChartType, options: &DescriptionOptions) -> String {
    let explicit = options.stats.is_some();
    let stats = options.stats.clone().unwrap_or_else(|| default_statistics(chart_type));
    let mut parts = Vec::new();
    for (i, series) in subplot.series.iter().enumerate() {
        if series.is_empty() {
            continue;
        }
        if series.kind == SeriesKind::Contour {
            parts.extend(contour_sentences(series, &stats, chart_type));
            continue;
        }
        let phrases: Vec<String> = stats
            .iter()
            .filter(|k| !matches!(k, StatKind::SlicePercentages | StatKind::Correlation))
            .filter_map(|k| compute_statistic_for(series, *k, chart_type).ok())
            .flat_map(|r| stat_phrases(&r, series, chart_type))
            .collect();
        if phrases.is_empty() {
            continue;
        }
        parts.push(format!(
            "{} has {}.",
            display_label(subplot, i, chart_type).to_lowercase(),
            join_list(&phrases)
        ));
    }
    if explicit && stats.contains(&StatKind::Correlation) {
        parts.extend(correlation_sentence(subplot, chart_type));
    }
    sentence_case(&join_sentences(&parts))
}

/// `None` when the series has no clear direction.
fn trend_sentence(label: &str, trend: &TrendSummary, series: &SeriesFacts, len: usize) -> Option<String> {
    let ind = series.independent;
    let dep = series.dependent;
    let adverb = |s: Stability| match s {
        Stability::Strict => "strictly",
        _ => "generally",
    };
    let sentence = match (trend.stability, trend.lead) {
        (_, Direction::Flat) => format!("{label} remain constant at {dep}={}.", format_number(trend.peak_value)),
        (Stability::Fluctuating, _) => return None,
        (stability, lead) => {
            let (verb, extreme) = match lead {
                Direction::Increase => ("increase", "max"),
                _ => ("decrease", "min"),
            };
            let at = location_text(&trend.peak_location, ind);
            if trend.is_at_end(len) {
                format!("{label} {} {verb} to a {extreme} at {at}.", adverb(stability))
            } else {
                let lead_in = if lead == Direction::Increase { "up" } else { "down" };
                let mut s = format!(
                    "{label} {} {verb} {lead_in} to their {extreme} at {at}",
                    adverb(stability)
                );
                if let Some((post, dir)) = trend.post_peak {
                    let after = if dir == Direction::Increase {
                        "increase"
                    } else {
                        "decrease"
                    };
                    s.push_str(&format!(", then {} {after}", adverb(post)));
                }
                s.push('.');
                s
            }
        }
    };
    Some(sentence)
}

/// Trend sentences for chart types with an ordered independent axis,
/// followed by the correlation between paired series.
pub fn render_l3(subplot: &SubplotFacts, chart_type: ChartType, options: &DescriptionOptions) -> String {
    let mut parts: Vec<String> = Vec::new();
    if options.trends.unwrap_or(chart_type.has_trends()) {
        parts.extend(subplot.series.iter().enumerate().filter_map(|(i, s)| {
            let trend = detect_trend(s).ok()?;
            let label = display_label(subplot, i, chart_type).to_lowercase();
            trend_sentence(&label, &trend, s, s.len())
        }));
    }
    if options.stats.is_none() {
        parts.extend(correlation_sentence(subplot, chart_type));
    }
    sentence_case(&join_sentences(&parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::figure::snapshot_figure;
    use crate::host::{HostArtist, HostAxes, HostAxis, HostFigure};

    fn line_figure(ys: &[f64]) -> FigureFacts {
        let xs: Vec<f64> = (0..ys.len()).map(|i| i as f64).collect();
        let axes = HostAxes {
            x_axis: HostAxis::numeric(None, 0.0, ys.len() as f64),
            y_axis: HostAxis::numeric(None, 0.0, 10.0),
            artists: vec![HostArtist::Line {
                x: xs,
                y: ys.to_vec(),
                x_categories: None,
                label: None,
                color: Some("#1f77b4".into()),
                has_line: true,
                has_markers: false,
            }],
            ..HostAxes::default()
        };
        snapshot_figure(&HostFigure::single(axes)).facts
    }

    #[test]
    fn decreasing_series_wording() {
        let fig = line_figure(&[9.0, 7.0, 4.0]);
        let l3 = render_l3(&fig.subplots[0], ChartType::Line, &DescriptionOptions::level(3));
        assert_eq!(l3, "The data strictly decrease to a min at x=2.");
    }

    #[test]
    fn single_stat_sentence() {
        let fig = line_figure(&[5.0]);
        let opts = DescriptionOptions {
            stats: Some(vec![StatKind::Min]),
            ..DescriptionOptions::level(2)
        };
        assert_eq!(
            render_l2(&fig.subplots[0], ChartType::Line, &opts),
            "The data has a minimum value of y=5 at x=0."
        );
    }

    #[test]
    fn rejects_level_four() {
        let fig = line_figure(&[1.0, 2.0]);
        assert!(matches!(
            generate_alt_text(&fig, &DescriptionOptions::level(4)),
            Err(AltTextError::InvalidLevel(4))
        ));
    }

    #[test]
    fn levels_extend_each_other() {
        let fig = line_figure(&[1.0, 3.0, 2.0, 4.0, 5.0, 6.0]);
        let texts: Vec<String> = (1..=3)
            .map(|l| generate_alt_text(&fig, &DescriptionOptions::level(l)).unwrap().text)
            .collect();
        assert!(texts[1].starts_with(&texts[0]));
        assert!(texts[2].starts_with(&texts[1]));
        assert!(texts[2].len() > texts[1].len());
    }
}
