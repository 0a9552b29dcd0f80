//! Chart-type classification from a subplot's mark inventory.

use std::fmt;

use serde::Serialize;

use crate::figure::{AxisName, Scale, SeriesKind, SubplotFacts};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartType {
    Line,
    Bar,
    Scatter,
    RadialLine,
    Pie,
    Strip,
    Contour,
    Heatmap,
    Image,
    Boxplot,
    Blank,
    Unknown,
}

impl ChartType {
    pub const ALL: [ChartType; 12] = [
        ChartType::Line,
        ChartType::Bar,
        ChartType::Scatter,
        ChartType::RadialLine,
        ChartType::Pie,
        ChartType::Strip,
        ChartType::Contour,
        ChartType::Heatmap,
        ChartType::Image,
        ChartType::Boxplot,
        ChartType::Blank,
        ChartType::Unknown,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ChartType::Line => "line",
            ChartType::Bar => "bar",
            ChartType::Scatter => "scatter",
            ChartType::RadialLine => "radial_line",
            ChartType::Pie => "pie",
            ChartType::Strip => "strip",
            ChartType::Contour => "contour",
            ChartType::Heatmap => "heatmap",
            ChartType::Image => "image",
            ChartType::Boxplot => "boxplot",
            ChartType::Blank => "blank",
            ChartType::Unknown => "unknown",
        }
    }

    /// Noun phrase used in descriptions, without article.
    pub fn display_name(self) -> &'static str {
        match self {
            ChartType::Line => "line plot",
            ChartType::Bar => "bar chart",
            ChartType::Scatter => "scatter plot",
            ChartType::RadialLine => "radial line plot",
            ChartType::Pie => "pie chart",
            ChartType::Strip => "strip plot",
            ChartType::Contour => "contour plot",
            ChartType::Heatmap => "heatmap",
            ChartType::Image => "image",
            ChartType::Boxplot => "boxplot",
            ChartType::Blank => "blank plot",
            ChartType::Unknown => "plot",
        }
    }

    /// Whether trend sentences are generated for this type.
    pub fn has_trends(self) -> bool {
        matches!(
            self,
            ChartType::Line | ChartType::Bar | ChartType::RadialLine | ChartType::Pie
        )
    }
}

impl fmt::Display for ChartType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MixedTypeWarning {
    pub chosen: ChartType,
    pub also_present: Vec<ChartType>,
}

impl fmt::Display for MixedTypeWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let others: Vec<&str> = self.also_present.iter().map(|t| t.as_str()).collect();
        write!(
            f,
            "subplot mixes chart types; described as {} (also found {})",
            self.chosen,
            others.join(", ")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub chart_type: ChartType,
    pub warning: Option<MixedTypeWarning>,
}

/// Classifies `subplot`. Total and deterministic.
pub fn infer_chart_type(subplot: &SubplotFacts) -> ChartType {
    classify(subplot).chart_type
}

/// Classifies `subplot` and reports other chart families present in it.
pub fn classify(subplot: &SubplotFacts) -> Classification {
    let matches = matching_types(subplot);
    let chart_type = matches.first().copied().unwrap_or(ChartType::Unknown);
    let also: Vec<ChartType> = matches.iter().skip(1).copied().collect();
    Classification {
        chart_type,
        warning: (!also.is_empty()).then_some(MixedTypeWarning {
            chosen: chart_type,
            also_present: also,
        }),
    }
}

/// Every rule of the decision table that fires, in priority order.
fn matching_types(subplot: &SubplotFacts) -> Vec<ChartType> {
    let m = &subplot.marks;
    if m.is_empty() {
        return vec![ChartType::Blank];
    }
    let mut out = Vec::new();
    if m.box_artists > 0 {
        out.push(ChartType::Boxplot);
    }
    if m.wedges > 0 {
        out.push(ChartType::Pie);
    }
    if m.contour_sets > 0 {
        out.push(ChartType::Contour);
    }
    if m.quadmeshes + m.images > 0 {
        out.push(grid_type(subplot));
    }
    if is_bar(subplot) {
        out.push(ChartType::Bar);
    }
    if m.polar_flag && m.line_objects > 0 {
        out.push(ChartType::RadialLine);
    } else if m.point_collections > 0 && m.line_objects == 0 {
        out.push(if is_strip(subplot) {
            ChartType::Strip
        } else {
            ChartType::Scatter
        });
    } else if m.line_objects > 0 {
        out.push(ChartType::Line);
    }
    out
}

fn grid_type(subplot: &SubplotFacts) -> ChartType {
    let grid = subplot.series.iter().find_map(|s| s.z_values.as_ref());
    if grid.is_some_and(|g| g.pixel_extent) {
        return ChartType::Image;
    }
    if subplot.axis(AxisName::Z).is_some() {
        ChartType::Heatmap
    } else {
        ChartType::Image
    }
}

fn is_bar(subplot: &SubplotFacts) -> bool {
    subplot.marks.rectangles >= 2 && subplot.marks.rectangles_aligned
}

fn is_strip(subplot: &SubplotFacts) -> bool {
    let categorical = |name| {
        subplot
            .axis(name)
            .is_some_and(|a| matches!(a.scale, Scale::Categorical))
    };
    if categorical(AxisName::X) || categorical(AxisName::Y) {
        return true;
    }
    let collections: Vec<_> = subplot.series.iter().filter(|s| s.kind == SeriesKind::Points).collect();
    if collections.len() < 2 {
        return false;
    }
    let band = |values: &mut dyn Iterator<Item = f64>| {
        let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        (lo, hi)
    };
    // degenerate along y: every collection occupies a narrow horizontal band
    let degenerate = |use_y: bool| {
        let all: Vec<(f64, f64)> = collections
            .iter()
            .map(|s| {
                if use_y {
                    band(&mut s.y_values.iter().copied())
                } else {
                    band(&mut s.x_values.iter().filter_map(|v| v.as_number()))
                }
            })
            .collect();
        let lo = all.iter().map(|b| b.0).fold(f64::INFINITY, f64::min);
        let hi = all.iter().map(|b| b.1).fold(f64::NEG_INFINITY, f64::max);
        let span = hi - lo;
        span > 0.0 && all.iter().all(|(a, b)| b - a <= 0.1 * span)
    };
    degenerate(true) || degenerate(false)
}
