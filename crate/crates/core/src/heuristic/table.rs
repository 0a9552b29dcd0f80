use super::format_number;
use crate::error::{AltTextError, Result};
use crate::figure::{AxisName, SeriesFacts, SeriesKind, SubplotFacts, Value};

const ELLIPSIS: &str = "…";

/// Renders the data underlying `subplot` as a markdown table, keeping at
/// most `max_rows` data rows and `max_cols` columns (the index column
/// included). Dropped rows and columns are marked with an ellipsis.
pub fn render_data_table(subplot: &SubplotFacts, max_rows: usize, max_cols: usize) -> Result<String> {
    let series: Vec<&SeriesFacts> = subplot.series.iter().filter(|s| !s.is_empty()).collect();
    if series.is_empty() {
        return Err(AltTextError::NoTabularData);
    }
    let (header, rows) = if let Some(grid) = series.iter().find_map(|s| s.z_values.as_ref()) {
        let mut header = vec!["y \\ x".to_string()];
        header.extend(grid.x_coords.iter().map(|x| format_number(*x)));
        let rows = grid
            .values
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let y = grid.y_coords.get(r).copied().unwrap_or(r as f64);
                std::iter::once(format_number(y))
                    .chain(row.iter().map(|v| format_number(*v)))
                    .collect()
            })
            .collect();
        (header, rows)
    } else if let Some(contour) = series.iter().find_map(|s| s.contour.as_ref()) {
        let header = vec!["level".to_string(), "paths".to_string()];
        let rows = contour
            .levels
            .iter()
            .enumerate()
            .map(|(i, l)| vec![format_number(*l), contour.paths.get(i).map_or(0, Vec::len).to_string()])
            .collect();
        (header, rows)
    } else if series
        .iter()
        .all(|s| matches!(s.kind, SeriesKind::Line | SeriesKind::Bars | SeriesKind::Slices))
    {
        shared_x_table(subplot, &series)
    } else {
        columns_table(&series)
    };
    Ok(to_markdown(header, rows, max_rows, max_cols))
}

fn column_name(series: &SeriesFacts, index: usize, total: usize) -> String {
    match &series.label {
        Some(l) => l.to_lowercase(),
        None if total == 1 => series.dependent.to_string(),
        None => format!("series {}", index + 1),
    }
}

/// One row per distinct x value, one column per series.
fn shared_x_table(subplot: &SubplotFacts, series: &[&SeriesFacts]) -> (Vec<String>, Vec<Vec<String>>) {
    let mut keys: Vec<Value> = Vec::new();
    for s in series {
        for x in &s.x_values {
            if !keys.contains(x) {
                keys.push(x.clone());
            }
        }
    }
    let independent = series[0].independent;
    let index_name = subplot
        .axis(independent)
        .and_then(|a| a.label.as_ref())
        .map(|l| l.to_lowercase())
        .unwrap_or_else(|| independent.to_string());
    let unit = subplot
        .axis(series[0].dependent)
        .and_then(|a| a.label.as_ref())
        .map(|l| l.to_lowercase());
    let mut header = vec![index_name];
    header.extend(series.iter().enumerate().map(|(i, s)| match (&s.label, &unit) {
        (Some(label), Some(unit)) => format!("{} ({unit})", label.to_lowercase()),
        _ => column_name(s, i, series.len()),
    }));
    let rows = keys
        .iter()
        .enumerate()
        .map(|(r, key)| {
            let first = match key {
                Value::Category(c) => c.to_lowercase(),
                Value::Number(_) => r.to_string(),
            };
            std::iter::once(first)
                .chain(series.iter().map(|s| {
                    s.x_values
                        .iter()
                        .position(|x| x == key)
                        .and_then(|i| s.y_values.get(i))
                        .map(|v| format_number(*v))
                        .unwrap_or_default()
                }))
                .collect()
        })
        .collect();
    (header, rows)
}

/// Series without a shared independent axis: values listed side by side.
/// Point clouds contribute one column per coordinate.
fn columns_table(series: &[&SeriesFacts]) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header = vec![String::new()];
    let mut columns: Vec<Vec<String>> = Vec::new();
    for (i, s) in series.iter().enumerate() {
        let name = column_name(s, i, series.len());
        let dependent: Vec<String> = match &s.box_summary {
            Some(b) if !b.from_samples => vec![b.whisker_low, b.q1, b.median, b.q3, b.whisker_high]
                .into_iter()
                .map(format_number)
                .collect(),
            _ => s.y_values.iter().map(|v| format_number(*v)).collect(),
        };
        if s.kind == SeriesKind::Points {
            let independent: Vec<String> = s
                .x_values
                .iter()
                .map(|v| match v {
                    Value::Number(n) => format_number(*n),
                    Value::Category(c) => c.to_lowercase(),
                })
                .collect();
            let (x_col, y_col) = if s.dependent == AxisName::X {
                (dependent, independent)
            } else {
                (independent, dependent)
            };
            let prefix = if series.len() == 1 && s.label.is_none() {
                String::new()
            } else {
                format!("{name} ")
            };
            header.push(format!("{prefix}x"));
            columns.push(x_col);
            header.push(format!("{prefix}y"));
            columns.push(y_col);
        } else {
            header.push(name);
            columns.push(dependent);
        }
    }
    let n = columns.iter().map(Vec::len).max().unwrap_or(0);
    let rows = (0..n)
        .map(|r| {
            std::iter::once(r.to_string())
                .chain(columns.iter().map(|c| c.get(r).cloned().unwrap_or_default()))
                .collect()
        })
        .collect();
    (header, rows)
}

fn to_markdown(mut header: Vec<String>, mut rows: Vec<Vec<String>>, max_rows: usize, max_cols: usize) -> String {
    let max_cols = max_cols.max(2);
    if header.len() > max_cols {
        header.truncate(max_cols);
        header.push(ELLIPSIS.to_string());
        for row in &mut rows {
            row.truncate(max_cols);
            row.push(ELLIPSIS.to_string());
        }
    }
    if rows.len() > max_rows {
        rows.truncate(max_rows);
        rows.push(vec![ELLIPSIS.to_string(); header.len()]);
    }
    let line = |cells: &[String]| format!("| {} |", cells.join(" | "));
    let mut out = vec![line(&header), line(&vec!["---".to_string(); header.len()])];
    out.extend(rows.iter().map(|r| line(r)));
    out.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::figure::SeriesFacts;

    fn subplot(series: Vec<SeriesFacts>) -> SubplotFacts {
        SubplotFacts {
            title: None,
            axes: Vec::new(),
            marks: Default::default(),
            series,
            annotations: Vec::new(),
            legend_entries: Vec::new(),
            ref_lines: Vec::new(),
        }
    }

    #[test]
    fn caps_rows_and_columns() {
        let xs: Vec<f64> = (0..30).map(f64::from).collect();
        let series: Vec<SeriesFacts> = (0..10)
            .map(|k| SeriesFacts::line(None, &xs, &xs.iter().map(|x| x * k as f64).collect::<Vec<_>>()))
            .collect();
        let table = render_data_table(&subplot(series), 5, 4).unwrap();
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 2 + 5 + 1);
        assert_eq!(lines[0], "| x | series 1 | series 2 | series 3 | … |");
        assert_eq!(lines[7], "| … | … | … | … | … |");
    }

    #[test]
    fn empty_subplot_has_no_table() {
        assert!(matches!(
            render_data_table(&subplot(vec![]), 5, 5),
            Err(AltTextError::NoTabularData)
        ));
    }
}
