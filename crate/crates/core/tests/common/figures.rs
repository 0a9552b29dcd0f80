//! Random host figures covering every chart type.

use alttext_core::host::{HostArtist, HostAxes, HostAxis, HostBox, HostColorbar, HostFigure, HostTick};
use alttext_core::stats;
use alttext_core::ChartType;
use proptest::prelude::*;

fn axis(label: Option<String>, lo: f64, hi: f64) -> HostAxis {
    let ticks = (0..5)
        .map(|i| {
            let position = lo + (hi - lo) * i as f64 / 4.0;
            HostTick {
                position,
                label: format!("{}", (position * 100.0).round() / 100.0),
            }
        })
        .collect();
    HostAxis {
        label,
        limits: [lo, hi],
        ticks,
        ..HostAxis::default()
    }
}

fn category_axis(label: Option<String>, names: &[String]) -> HostAxis {
    HostAxis {
        label,
        limits: [-0.5, names.len() as f64 - 0.5],
        ticks: names
            .iter()
            .enumerate()
            .map(|(i, n)| HostTick {
                position: i as f64,
                label: n.clone(),
            })
            .collect(),
        ..HostAxis::default()
    }
}

fn bounds(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .into_iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo.is_finite() && hi > lo {
        (lo, hi)
    } else {
        (lo.min(0.0) - 1.0, hi.max(0.0) + 1.0)
    }
}

fn label() -> impl Strategy<Value = Option<String>> {
    prop::option::of("[a-z]{3,8}( [a-z]{2,6})?")
}

fn values(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((-1000..1000i32).prop_map(|v| v as f64 / 10.0), len)
}

pub fn line_axes() -> impl Strategy<Value = HostAxes> {
    (2usize..15, 1usize..4, label(), label(), label()).prop_flat_map(|(n, k, title, xl, yl)| {
        (
            prop::collection::vec((values(n..n + 1), label()), k),
            Just((n, title, xl, yl)),
        )
            .prop_map(|(series, (n, title, xl, yl))| {
                let xs: Vec<f64> = (0..n).map(|i| i as f64).collect();
                let (lo, hi) = bounds(series.iter().flat_map(|(ys, _)| ys.iter().copied()));
                HostAxes {
                    title,
                    x_axis: axis(xl, 0.0, (n - 1) as f64),
                    y_axis: axis(yl, lo, hi),
                    artists: series
                        .into_iter()
                        .map(|(y, label)| HostArtist::Line {
                            x: xs.clone(),
                            y,
                            x_categories: None,
                            label,
                            color: None,
                            has_line: true,
                            has_markers: false,
                        })
                        .collect(),
                    ..HostAxes::default()
                }
            })
    })
}

pub fn bar_axes() -> impl Strategy<Value = HostAxes> {
    (prop::collection::vec(1..5000i32, 2..13), label(), label()).prop_map(|(heights, title, yl)| {
        let names: Vec<String> = (0..heights.len()).map(|i| format!("c{i}")).collect();
        let top = heights.iter().copied().max().unwrap_or(1) as f64 / 10.0;
        HostAxes {
            title,
            x_axis: category_axis(None, &names),
            y_axis: axis(yl, 0.0, top * 1.05),
            artists: heights
                .iter()
                .enumerate()
                .map(|(i, h)| HostArtist::Rectangle {
                    x: i as f64 - 0.4,
                    y: 0.0,
                    width: 0.8,
                    height: *h as f64 / 10.0,
                    label: None,
                    color: Some("#1f77b4".into()),
                })
                .collect(),
            ..HostAxes::default()
        }
    })
}

pub fn scatter_axes() -> impl Strategy<Value = HostAxes> {
    (
        prop::collection::vec(prop::collection::vec((-500..500i32, -500..500i32), 3..60), 1..3),
        label(),
    )
        .prop_map(|(groups, title)| {
            let groups: Vec<Vec<[f64; 2]>> = groups
                .into_iter()
                .map(|g| g.into_iter().map(|(x, y)| [x as f64 / 10.0, y as f64 / 10.0]).collect())
                .collect();
            let (xlo, xhi) = bounds(groups.iter().flatten().map(|p| p[0]));
            let (ylo, yhi) = bounds(groups.iter().flatten().map(|p| p[1]));
            HostAxes {
                title,
                x_axis: axis(None, xlo, xhi),
                y_axis: axis(None, ylo, yhi),
                artists: groups
                    .into_iter()
                    .map(|offsets| HostArtist::Points {
                        offsets,
                        label: None,
                        color: Some("#ff7f0e".into()),
                    })
                    .collect(),
                ..HostAxes::default()
            }
        })
}

pub fn radial_axes() -> impl Strategy<Value = HostAxes> {
    (prop::collection::vec(0..3000i32, 3..13), label()).prop_map(|(rs, title)| {
        let n = rs.len();
        let x: Vec<f64> = (0..n).map(|i| i as f64 * std::f64::consts::TAU / n as f64).collect();
        let y: Vec<f64> = rs.iter().map(|r| *r as f64 / 10.0).collect();
        let top = y.iter().copied().fold(1.0, f64::max);
        HostAxes {
            title,
            x_axis: axis(None, 0.0, std::f64::consts::TAU),
            y_axis: axis(None, 0.0, top),
            polar: true,
            artists: vec![HostArtist::Line {
                x,
                y,
                x_categories: None,
                label: Some("radius".into()),
                color: None,
                has_line: true,
                has_markers: false,
            }],
            ..HostAxes::default()
        }
    })
}

pub fn pie_axes() -> impl Strategy<Value = HostAxes> {
    (prop::collection::vec(1..100u32, 2..9), label()).prop_map(|(parts, title)| {
        let total: u32 = parts.iter().sum();
        let mut start = 0.0;
        let artists = parts
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let sweep = 360.0 * *p as f64 / total as f64;
                let wedge = HostArtist::Wedge {
                    theta1: start,
                    theta2: start + sweep,
                    label: Some(format!("part {i}")),
                    color: None,
                };
                start += sweep;
                wedge
            })
            .collect();
        HostAxes {
            title,
            x_axis: HostAxis {
                limits: [-1.25, 1.25],
                ..HostAxis::default()
            },
            y_axis: HostAxis {
                limits: [-1.25, 1.25],
                ..HostAxis::default()
            },
            artists,
            ..HostAxes::default()
        }
    })
}

pub fn strip_axes() -> impl Strategy<Value = HostAxes> {
    (
        prop::collection::vec(prop::collection::vec((-800..800i32, -30..30i32), 4..40), 2..4),
        label(),
    )
        .prop_map(|(groups, xl)| {
            let names: Vec<String> = (0..groups.len()).map(|i| format!("group {i}")).collect();
            let groups: Vec<Vec<[f64; 2]>> = groups
                .into_iter()
                .enumerate()
                .map(|(k, g)| {
                    g.into_iter()
                        .map(|(x, j)| [x as f64 / 100.0, k as f64 + j as f64 / 100.0])
                        .collect()
                })
                .collect();
            let (lo, hi) = bounds(groups.iter().flatten().map(|p| p[0]));
            HostAxes {
                title: None,
                x_axis: axis(xl, lo, hi),
                y_axis: category_axis(None, &names),
                artists: groups
                    .into_iter()
                    .map(|offsets| HostArtist::Points {
                        offsets,
                        label: None,
                        color: None,
                    })
                    .collect(),
                ..HostAxes::default()
            }
        })
}

fn grid() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (2usize..7, 2usize..7).prop_flat_map(|(rows, cols)| {
        prop::collection::vec(prop::collection::vec((0..60u32).prop_map(f64::from), cols), rows)
    })
}

pub fn heatmap_axes() -> impl Strategy<Value = HostAxes> {
    (grid(), label()).prop_map(|(values, title)| {
        let (rows, cols) = (values.len(), values[0].len());
        let vmax = values.iter().flatten().copied().fold(0.0, f64::max);
        HostAxes {
            title,
            x_axis: axis(None, 0.0, cols as f64 * 2.0),
            y_axis: axis(None, 0.0, rows as f64 * 2.0),
            artists: vec![HostArtist::QuadMesh {
                values,
                x_edges: (0..=cols).map(|i| i as f64 * 2.0).collect(),
                y_edges: (0..=rows).map(|i| i as f64 * 2.0).collect(),
            }],
            colorbar: Some(HostColorbar {
                label: Some("count".into()),
                vmin: 0.0,
                vmax,
                scale: "linear".into(),
            }),
            ..HostAxes::default()
        }
    })
}

pub fn image_axes() -> impl Strategy<Value = HostAxes> {
    (grid(), label()).prop_map(|(values, title)| {
        let (rows, cols) = (values.len() as f64, values[0].len() as f64);
        HostAxes {
            title,
            x_axis: axis(None, -0.5, cols - 0.5),
            y_axis: axis(None, rows - 0.5, -0.5),
            artists: vec![HostArtist::Image {
                values,
                extent: [-0.5, cols - 0.5, rows - 0.5, -0.5],
                origin: Some("upper".into()),
            }],
            ..HostAxes::default()
        }
    })
}

pub fn contour_axes() -> impl Strategy<Value = HostAxes> {
    (2usize..7, -50..50i32, -50..50i32, label()).prop_map(|(n, cx, cy, title)| {
        let (cx, cy) = (cx as f64 / 10.0, cy as f64 / 10.0);
        let levels: Vec<f64> = (0..n).map(|i| i as f64 * 5.0).collect();
        let paths = (0..n)
            .map(|i| {
                let r = (n - i) as f64;
                vec![vec![
                    [cx - r, cy - r],
                    [cx + r, cy - r],
                    [cx + r, cy + r],
                    [cx - r, cy + r],
                    [cx - r, cy - r],
                ]]
            })
            .collect();
        HostAxes {
            title,
            x_axis: axis(None, cx - 8.0, cx + 8.0),
            y_axis: axis(None, cy - 8.0, cy + 8.0),
            artists: vec![HostArtist::Contour {
                levels,
                filled: false,
                paths,
            }],
            ..HostAxes::default()
        }
    })
}

fn host_box(position: f64, values: Vec<f64>) -> HostBox {
    let q1 = stats::quantile(&values, 0.25).unwrap();
    let q3 = stats::quantile(&values, 0.75).unwrap();
    let fliers = stats::tukey_outliers(&values);
    let inside: Vec<f64> = values.iter().copied().filter(|v| !fliers.contains(v)).collect();
    let (whisker_low, whisker_high) = bounds(inside);
    HostBox {
        position,
        label: None,
        median: stats::median(&values).unwrap(),
        q1,
        q3,
        whisker_low,
        whisker_high,
        fliers,
        values: Some(values),
        vertical: true,
    }
}

pub fn boxplot_axes() -> impl Strategy<Value = HostAxes> {
    (prop::collection::vec(values(5..20), 1..5), label()).prop_map(|(groups, title)| {
        let (lo, hi) = bounds(groups.iter().flatten().copied());
        let names: Vec<String> = (0..groups.len()).map(|i| i.to_string()).collect();
        HostAxes {
            title,
            x_axis: category_axis(None, &names),
            y_axis: axis(None, lo, hi),
            artists: groups
                .into_iter()
                .enumerate()
                .map(|(i, v)| HostArtist::Box(host_box(i as f64, v)))
                .collect(),
            ..HostAxes::default()
        }
    })
}

pub fn blank_axes() -> impl Strategy<Value = HostAxes> {
    (label(), label()).prop_map(|(title, xl)| HostAxes {
        title,
        x_axis: axis(xl, -0.06, 0.06),
        y_axis: axis(None, -0.06, 0.06),
        ..HostAxes::default()
    })
}

pub fn any_axes() -> impl Strategy<Value = HostAxes> {
    prop_oneof![
        line_axes(),
        bar_axes(),
        scatter_axes(),
        radial_axes(),
        pie_axes(),
        strip_axes(),
        heatmap_axes(),
        image_axes(),
        contour_axes(),
        boxplot_axes(),
        blank_axes(),
    ]
}

pub fn any_figure() -> impl Strategy<Value = HostFigure> {
    (prop::collection::vec(any_axes(), 1..4), label()).prop_map(|(axes, suptitle)| HostFigure {
        suptitle,
        axes,
        dpi: 100.0,
        png: None,
    })
}

/// One generator per chart type, labeled with the type it should produce.
pub fn per_type() -> Vec<(ChartType, BoxedStrategy<HostAxes>)> {
    vec![
        (ChartType::Line, line_axes().boxed()),
        (ChartType::Bar, bar_axes().boxed()),
        (ChartType::Scatter, scatter_axes().boxed()),
        (ChartType::RadialLine, radial_axes().boxed()),
        (ChartType::Pie, pie_axes().boxed()),
        (ChartType::Strip, strip_axes().boxed()),
        (ChartType::Heatmap, heatmap_axes().boxed()),
        (ChartType::Image, image_axes().boxed()),
        (ChartType::Contour, contour_axes().boxed()),
        (ChartType::Boxplot, boxplot_axes().boxed()),
        (ChartType::Blank, blank_axes().boxed()),
    ]
}
