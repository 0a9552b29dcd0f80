//! Fixtures, oracles and property checks shared by the integration tests
//! and the acceptance runner.
#![allow(dead_code)]

pub mod figures;

use std::collections::BTreeMap;
use std::path::PathBuf;

use alttext_core::figure::SeriesFacts;
use alttext_core::heuristic::{generate_alt_text, DescriptionOptions};
use alttext_core::host::HostFigure;
use alttext_core::stats::{self, detect_trend, Direction};
use alttext_core::vlm::{build_prompt, system_text, Augmentation, PromptRequest};
use alttext_core::{snapshot_figure, ChartType, FigureFacts};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use serde::Deserialize;

pub fn fixtures_dir() -> PathBuf {
    let here = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let own = here.join("tests/fixtures");
    if own.join("gallery").is_dir() {
        own
    } else {
        here.join("../core/tests/fixtures")
    }
}

pub fn fixture(path: &str) -> String {
    let full = fixtures_dir().join(path);
    std::fs::read_to_string(&full).unwrap_or_else(|e| panic!("{}: {e}", full.display()))
}

pub const GALLERY: [(&str, ChartType); 12] = [
    ("bar", ChartType::Bar),
    ("line", ChartType::Line),
    ("pie", ChartType::Pie),
    ("radial", ChartType::RadialLine),
    ("scatter", ChartType::Scatter),
    ("strip", ChartType::Strip),
    ("heatmap", ChartType::Heatmap),
    ("contour", ChartType::Contour),
    ("subplots", ChartType::Line),
    ("boxplot", ChartType::Boxplot),
    ("image", ChartType::Image),
    ("blank", ChartType::Blank),
];

pub fn gallery_host(name: &str) -> HostFigure {
    HostFigure::from_json(&fixture(&format!("gallery/{name}.json"))).unwrap()
}

pub fn gallery_figure(name: &str) -> FigureFacts {
    snapshot_figure(&gallery_host(name)).facts
}

#[derive(Deserialize)]
pub struct PublishedCaption {
    pub plot_type: String,
    pub caption: String,
    pub tokens: usize,
}

/// Published gallery captions keyed by plot type.
pub fn published() -> BTreeMap<String, PublishedCaption> {
    let rows: Vec<PublishedCaption> = serde_json::from_str(&fixture("lengths/gallery.json")).unwrap();
    rows.into_iter().map(|r| (r.plot_type.clone(), r)).collect()
}

pub const ANSCOMBE_X: [f64; 11] = [10.0, 8.0, 13.0, 9.0, 11.0, 14.0, 6.0, 4.0, 12.0, 7.0, 5.0];
pub const ANSCOMBE_X4: [f64; 11] = [8.0, 8.0, 8.0, 8.0, 8.0, 8.0, 8.0, 19.0, 8.0, 8.0, 8.0];
pub const ANSCOMBE_Y: [[f64; 11]; 4] = [
    [8.04, 6.95, 7.58, 8.81, 8.33, 9.96, 7.24, 4.26, 10.84, 4.82, 5.68],
    [9.14, 8.14, 8.74, 8.77, 9.26, 8.10, 6.13, 3.10, 9.13, 7.26, 4.74],
    [7.46, 6.77, 12.74, 7.11, 7.81, 8.84, 6.08, 5.39, 8.15, 6.42, 5.73],
    [6.58, 5.76, 7.71, 8.84, 8.47, 7.04, 5.25, 12.50, 5.56, 7.91, 6.89],
];

// -- statistics oracles ------------------------------------------------------

/// Quantile from the piecewise-linear curve through `(i / (n - 1), s[i])`,
/// found by scanning segments in exact integer arithmetic for `q = k / 4`.
pub fn quantile_oracle(values: &[i64], k: i64) -> f64 {
    let mut s = values.to_vec();
    s.sort_unstable();
    let d = s.len() as i64 - 1;
    if d == 0 {
        return s[0] as f64;
    }
    for i in 0..d {
        // segment i covers q in [i/d, (i+1)/d], i.e. 4i <= k*d <= 4(i+1)
        if 4 * i <= k * d && k * d <= 4 * (i + 1) {
            let t = (k * d - 4 * i) as f64 / 4.0;
            let (a, b) = (s[i as usize] as f64, s[i as usize + 1] as f64);
            return a + t * (b - a);
        }
    }
    unreachable!("q lies in [0, 1]")
}

/// Every sequence of length 1 to `max_len` over `grid`.
pub fn all_series(grid: &[i64], max_len: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|prefix| {
                grid.iter().map(move |g| {
                    let mut v = prefix.clone();
                    v.push(*g);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Compares quantiles and Tukey outlier counts with the oracle for one
/// integer series.
pub fn check_quantiles(series: &[i64]) -> Result<(), TestCaseError> {
    let values: Vec<f64> = series.iter().map(|v| *v as f64).collect();
    for k in 0..=4 {
        let got = stats::quantile(&values, k as f64 / 4.0).unwrap();
        let want = quantile_oracle(series, k);
        prop_assert!(
            (got - want).abs() < 1e-12,
            "{:?} q={}/4: {} vs {}",
            series,
            k,
            got,
            want
        );
    }
    let (q1, q3) = (quantile_oracle(series, 1), quantile_oracle(series, 3));
    let spread = 1.5 * (q3 - q1);
    let expected = if series.len() < 4 {
        0
    } else {
        values.iter().filter(|v| **v < q1 - spread || **v > q3 + spread).count()
    };
    prop_assert_eq!(stats::tukey_outliers(&values).len(), expected, "{:?}", series);
    Ok(())
}

pub fn paired(len: std::ops::Range<usize>) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    len.prop_flat_map(|n| {
        (
            prop::collection::vec(-1e3..1e3f64, n),
            prop::collection::vec(-1e3..1e3f64, n),
        )
    })
}

pub fn check_pearson_symmetry(a: &[f64], b: &[f64]) -> Result<(), TestCaseError> {
    if let (Ok(ab), Ok(ba)) = (stats::pearson_correlation(a, b), stats::pearson_correlation(b, a)) {
        prop_assert!((ab - ba).abs() < 1e-12);
        prop_assert!((-1.0..=1.0).contains(&ab));
    }
    Ok(())
}

pub fn check_pearson_affine(a: &[f64], b: &[f64], scale: f64, shift: f64) -> Result<(), TestCaseError> {
    let scaled: Vec<f64> = a.iter().map(|v| scale * v + shift).collect();
    if let (Ok(r), Ok(rs)) = (stats::pearson_correlation(a, b), stats::pearson_correlation(&scaled, b)) {
        prop_assert!((rs - scale.signum() * r).abs() < 1e-9, "{} vs {}", r, rs);
    }
    Ok(())
}

/// Residuals of the fit must satisfy both normal equations to 1e-9
/// relative to the magnitude of the terms involved.
pub fn check_normal_equations(xs: &[f64], ys: &[f64]) -> Result<(), TestCaseError> {
    let Ok((slope, intercept)) = stats::linear_fit(xs, ys) else {
        return Ok(());
    };
    let residuals: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| y - (slope * x + intercept)).collect();
    let sum_e: f64 = residuals.iter().sum();
    let sum_xe: f64 = xs.iter().zip(&residuals).map(|(x, e)| x * e).sum();
    let scale_e: f64 = ys.iter().map(|y| y.abs()).sum::<f64>() + 1.0;
    let scale_xe: f64 = xs.iter().zip(ys).map(|(x, y)| (x * y).abs()).sum::<f64>()
        + xs.iter().map(|x| x * x).sum::<f64>() * slope.abs()
        + 1.0;
    prop_assert!(sum_e.abs() <= 1e-9 * scale_e, "sum e = {}", sum_e);
    prop_assert!(sum_xe.abs() <= 1e-9 * scale_xe, "sum xe = {}", sum_xe);
    Ok(())
}

/// Negating a series mirrors its trend summary.
pub fn check_trend_negation(ys: &[i32]) -> Result<(), TestCaseError> {
    let xs: Vec<f64> = (0..ys.len()).map(|i| i as f64).collect();
    let up: Vec<f64> = ys.iter().map(|v| *v as f64).collect();
    let down: Vec<f64> = up.iter().map(|v| -v).collect();
    let a = detect_trend(&SeriesFacts::line(None, &xs, &up)).unwrap();
    let b = detect_trend(&SeriesFacts::line(None, &xs, &down)).unwrap();
    prop_assert_eq!(a.direction, b.direction.reversed());
    prop_assert_eq!(a.stability, b.stability);
    prop_assert_eq!(a.direction_changes, b.direction_changes);
    if a.lead != Direction::Flat || b.lead != Direction::Flat {
        prop_assert_eq!(a.peak_index, b.peak_index);
        prop_assert_eq!(a.lead, b.lead.reversed());
        prop_assert_eq!(a.post_peak.map(|(s, d)| (s, d.reversed())), b.post_peak);
    }
    Ok(())
}

// -- description levels ------------------------------------------------------

fn data_rows(table: &str) -> Vec<&str> {
    table.lines().skip(2).filter(|l| l.starts_with('|')).collect()
}

/// Level 1 text is a prefix of level 2, which is a prefix of level 3
/// (per subplot when there are several); tables respect their caps; a
/// second run gives the same result.
pub fn check_levels(fig: &HostFigure, rows: usize, cols: usize) -> Result<(), TestCaseError> {
    let facts = snapshot_figure(fig).facts;
    let at = |level: u8| {
        let opts = DescriptionOptions {
            include_table: true,
            max_table_rows: rows,
            max_table_cols: cols,
            ..DescriptionOptions::level(level)
        };
        generate_alt_text(&facts, &opts).unwrap()
    };
    let (l1, l2, l3) = (at(1), at(2), at(3));
    prop_assert!(!l1.text.is_empty());
    if facts.subplots.len() == 1 {
        prop_assert!(l2.text.starts_with(&l1.text), "{:?}\n{:?}", l1.text, l2.text);
        prop_assert!(l3.text.starts_with(&l2.text), "{:?}\n{:?}", l2.text, l3.text);
    } else {
        prop_assert_eq!(&l1.header, &l2.header);
        prop_assert_eq!(&l2.header, &l3.header);
        for ((a, b), c) in l1.segments.iter().zip(&l2.segments).zip(&l3.segments) {
            prop_assert!(b.text().starts_with(&a.text()));
            prop_assert!(c.text().starts_with(&b.text()));
        }
    }

    if let Some(table) = &l3.table_markdown {
        let blocks: Vec<&str> = if facts.subplots.len() > 1 {
            table.split("subplot ").filter(|b| !b.trim().is_empty()).collect()
        } else {
            vec![table.as_str()]
        };
        for block in blocks {
            let body = block.trim_start_matches(|c: char| c != '|');
            let shown = data_rows(body).iter().filter(|r| !r.starts_with("| …")).count();
            prop_assert!(shown <= rows, "{} rows > {}\n{}", shown, rows, body);
            for line in body.lines().filter(|l| l.starts_with('|')) {
                let cells = line.matches('|').count() - 1;
                prop_assert!(cells <= cols.max(2) + 1, "{} cells\n{}", cells, body);
            }
        }
    }

    prop_assert_eq!(&at(3), &l3);
    prop_assert!(
        l3.chart_types.iter().all(|t| *t != ChartType::Unknown),
        "{:?}",
        l3.chart_types
    );
    Ok(())
}

// -- prompts -----------------------------------------------------------------

#[derive(Deserialize)]
pub struct PromptCase {
    pub level: u8,
    pub augmentation: String,
    pub heuristic: Option<String>,
    pub text: String,
}

pub fn prompt_cases() -> Vec<PromptCase> {
    serde_json::from_str(&fixture("prompts/prompts.json")).unwrap()
}

/// Builds the prompt for one reference case and compares it byte for byte.
pub fn check_prompt_case(case: &PromptCase) -> Result<(), String> {
    let request = PromptRequest {
        desc_level: case.level,
        augmentation: Augmentation::parse(&case.augmentation).ok_or("unknown augmentation")?,
        heuristic_text: case.heuristic.as_deref(),
        include_visual_attrs: false,
        ..PromptRequest::default()
    };
    let label = format!("L{} {}", case.level, case.augmentation);
    let text = system_text(&request).map_err(|e| format!("{label}: {e}"))?;
    if text != case.text {
        return Err(format!(
            "{label}: system text differs\n want {:?}\n got  {:?}",
            case.text, text
        ));
    }
    let bundle = build_prompt(&request, vec![0x89, b'P']).map_err(|e| format!("{label}: {e}"))?;
    if bundle.system_text != case.text || bundle.user_parts.len() != 1 {
        return Err(format!("{label}: bundle differs from system text"));
    }
    Ok(())
}
