//! Executing notebooks and embedding alt text for every figure they draw.

mod document;
mod executor;

use std::path::{Path, PathBuf};

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use serde::Serialize;
use serde_json::{json, Map, Value};

pub use document::{parse_notebook, write_notebook, Cell, NotebookDocument, Source};
pub use executor::{CellError, CellExecutor, CellRun, PythonExecutor, DRIVER_SOURCE, PYTHON_ENV};

use crate::error::{AltTextError, Result};
use crate::figure::snapshot_figure;
use crate::heuristic::{generate_alt_text, DescriptionOptions};
use crate::surfacing::{add_alt_text, api_alt_text_or_fallback, SurfaceContext, SurfaceMethod, METADATA_KEY};
use crate::vlm::{ApiConfig, ApiOptions, ChatBackend};

/// Model settings for runs that describe figures with a remote model.
pub struct ApiSettings<'a> {
    pub options: ApiOptions,
    pub config: ApiConfig,
    pub backend: &'a dyn ChatBackend,
}

pub struct RunOptions<'a> {
    pub description: DescriptionOptions,
    pub methods: Vec<SurfaceMethod>,
    /// When set, figures are described by the model, with heuristic text
    /// as the fallback.
    pub api: Option<ApiSettings<'a>>,
    /// Abort on the first failing cell instead of recording it.
    pub strict: bool,
    /// Directory for img_file and txt_file exports.
    pub out_dir: PathBuf,
}

impl RunOptions<'_> {
    fn desc_level(&self) -> u8 {
        self.api
            .as_ref()
            .map_or(self.description.desc_level, |a| a.options.desc_level)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CellRecord {
    pub cell_index: usize,
    pub figures_found: usize,
    pub methods_applied: Vec<SurfaceMethod>,
    pub warnings: Vec<String>,
    pub errors: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RunTotals {
    pub cells_executed: usize,
    pub figures_found: usize,
    pub alt_texts_embedded: usize,
    pub warnings: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub cells: Vec<CellRecord>,
    pub totals: RunTotals,
    pub files: Vec<PathBuf>,
}

impl RunReport {
    fn push(&mut self, record: CellRecord, embedded: usize) {
        self.totals.cells_executed += 1;
        self.totals.figures_found += record.figures_found;
        self.totals.alt_texts_embedded += embedded;
        self.totals.warnings += record.warnings.len();
        self.totals.errors += record.errors.len();
        self.cells.push(record);
    }

    /// Human-readable summary, one line per cell with figures or problems.
    pub fn render(&self) -> String {
        let mut lines = Vec::new();
        for c in &self.cells {
            if c.figures_found == 0 && c.warnings.is_empty() && c.errors.is_empty() {
                continue;
            }
            let methods: Vec<&str> = c.methods_applied.iter().map(|m| m.as_str()).collect();
            lines.push(format!(
                "cell {}: {} figure(s), methods [{}]",
                c.cell_index,
                c.figures_found,
                methods.join(", ")
            ));
            lines.extend(c.warnings.iter().map(|w| format!("  warning: {w}")));
            lines.extend(c.errors.iter().map(|e| format!("  error: {e}")));
        }
        let t = &self.totals;
        lines.push(format!(
            "{} cells executed, {} figures found, {} alt texts embedded, {} warnings, {} errors",
            t.cells_executed, t.figures_found, t.alt_texts_embedded, t.warnings, t.errors
        ));
        lines.join("\n")
    }
}

fn is_generated(cell: &Cell) -> bool {
    cell.metadata
        .get(METADATA_KEY)
        .and_then(|m| m.get("generated"))
        .and_then(Value::as_bool)
        .unwrap_or(false)
}

fn stream_output(name: &str, text: &str) -> Value {
    json!({"name": name, "output_type": "stream", "text": text})
}

fn display_output(data: Map<String, Value>, figure_number: usize) -> Value {
    json!({
        "data": data,
        "metadata": {METADATA_KEY: {"figure": figure_number}},
        "output_type": "display_data",
    })
}

/// Runs every code cell of `input` through `executor` and returns the
/// annotated notebook. Cells generated by an earlier run are dropped
/// first, so running on its own output reproduces that output.
pub fn alttextify_document(
    input: &NotebookDocument,
    executor: &mut dyn CellExecutor,
    options: &RunOptions<'_>,
) -> Result<(NotebookDocument, RunReport)> {
    let level = options.desc_level();
    let max_level = if options.api.is_some() { 4 } else { 3 };
    if !(1..=max_level).contains(&level) {
        return Err(AltTextError::InvalidLevel(level));
    }

    let mut doc = input.clone();
    doc.cells.retain(|c| !is_generated(c));
    let mut report = RunReport::default();
    let mut cells = Vec::with_capacity(doc.cells.len());
    let mut figure_number = 0;
    let mut execution_count = 0;

    for (cell_index, mut cell) in std::mem::take(&mut doc.cells).into_iter().enumerate() {
        if !cell.is_code() {
            cells.push(cell);
            continue;
        }
        execution_count += 1;
        let mut record = CellRecord {
            cell_index,
            ..CellRecord::default()
        };
        let run = executor.execute(&cell.source.text())?;
        if let Some(err) = &run.error {
            if options.strict {
                return Err(AltTextError::CellExecution {
                    cell: cell_index,
                    ename: err.ename.clone(),
                    evalue: err.evalue.clone(),
                });
            }
            record.errors.push(format!("{}: {}", err.ename, err.evalue));
            report.push(record, 0);
            cells.push(cell);
            continue;
        }
        if run.figures.is_empty() {
            report.push(record, 0);
            cells.push(cell);
            continue;
        }

        let mut outputs = Vec::new();
        if !run.stdout.is_empty() {
            outputs.push(stream_output("stdout", &run.stdout));
        }
        if !run.stderr.is_empty() {
            outputs.push(stream_output("stderr", &run.stderr));
        }
        let mut new_cells = Vec::new();
        let mut embedded = 0;
        for figure in &run.figures {
            let host = match figure {
                Ok(f) => f,
                Err(e) => {
                    record.errors.push(format!("figure could not be captured: {e}"));
                    continue;
                }
            };
            figure_number += 1;
            record.figures_found += 1;
            let snapshot = snapshot_figure(host);
            record
                .warnings
                .extend(snapshot.warnings.iter().map(|w| format!("figure {figure_number}: {w}")));
            let facts = snapshot.facts;
            let alt = match &options.api {
                Some(api) => {
                    let (alt, fallback) = api_alt_text_or_fallback(&facts, &api.options, api.backend, &api.config)?;
                    if fallback {
                        record.warnings.extend(alt.warnings.iter().cloned());
                    }
                    alt
                }
                None => generate_alt_text(&facts, &options.description)?,
            };
            let context = SurfaceContext {
                in_notebook: true,
                output_dir: Some(options.out_dir.clone()),
                figure_number,
            };
            let result = add_alt_text(&facts, &alt, &options.methods, &context);
            for (method, err) in &result.errors {
                record.errors.push(format!("figure {figure_number}: {method}: {err}"));
            }
            let applied = result.applied();
            if !applied.is_empty() {
                embedded += 1;
            }
            for m in applied {
                if !record.methods_applied.contains(&m) {
                    record.methods_applied.push(m);
                }
            }
            report.files.extend(result.files.iter().cloned());

            let png = facts.image_bytes.as_deref().map(|b| STANDARD.encode(b));
            let mut data = Map::new();
            if let Some(html) = &result.html {
                data.insert("text/html".into(), Value::String(html.clone()));
            } else if let Some(png) = png {
                data.insert("image/png".into(), Value::String(png));
            }
            data.insert("text/plain".into(), Value::String(format!("<Figure {figure_number}>")));
            outputs.push(display_output(data, figure_number));
            if let Some(md) = &result.markdown {
                let mut data = Map::new();
                data.insert("text/markdown".into(), Value::String(md.clone()));
                outputs.push(display_output(data, figure_number));
            }
            if let Some(nc) = &result.new_cell {
                let metadata = nc.metadata.as_object().cloned().unwrap_or_default();
                new_cells.push(Cell::code(&nc.source, metadata));
            }
        }
        cell.set_outputs(outputs);
        cell.set_execution_count(Some(execution_count));
        report.push(record, embedded);
        cells.push(cell);
        cells.extend(new_cells);
    }
    doc.cells = cells;

    let methods: Vec<&str> = options.methods.iter().map(|m| m.as_str()).collect();
    doc.metadata.insert(
        METADATA_KEY.into(),
        json!({
            "desc_level": level,
            "generator": format!("alttextify {}", env!("CARGO_PKG_VERSION")),
            "methods": methods,
            "use_api": options.api.is_some(),
        }),
    );
    Ok((doc, report))
}

/// Parses `input`, executes it with Python in the notebook's directory and
/// writes the annotated notebook to `output`. Nothing is written when the
/// input does not parse.
pub fn alttextify(input: &Path, output: &Path, options: &RunOptions<'_>) -> Result<RunReport> {
    let doc = parse_notebook(input)?;
    let workdir = input
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut executor = PythonExecutor::spawn(workdir)?;
    let (annotated, report) = alttextify_document(&doc, &mut executor, options)?;
    write_notebook(&annotated, output)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::host::{HostArtist, HostAxes, HostAxis, HostFigure};

    /// Replays canned results: one figure for cells containing "plot", an
    /// error for cells containing "raise".
    struct FakeExecutor;

    fn figure() -> HostFigure {
        HostFigure::single(HostAxes {
            x_axis: HostAxis::numeric(None, 0.0, 2.0),
            y_axis: HostAxis::numeric(None, 0.0, 2.0),
            artists: vec![HostArtist::Line {
                x: vec![0.0, 1.0, 2.0],
                y: vec![0.0, 1.0, 2.0],
                x_categories: None,
                label: None,
                color: None,
                has_line: true,
                has_markers: false,
            }],
            ..HostAxes::default()
        })
        .with_png(&[0x89, b'P', b'N', b'G'])
    }

    impl CellExecutor for FakeExecutor {
        fn execute(&mut self, code: &str) -> Result<CellRun> {
            Ok(CellRun {
                stdout: String::new(),
                stderr: String::new(),
                error: code.contains("raise").then(|| CellError {
                    ename: "ValueError".into(),
                    evalue: "boom".into(),
                    traceback: Vec::new(),
                }),
                figures: if code.contains("plot") {
                    vec![Ok(figure())]
                } else {
                    Vec::new()
                },
            })
        }
    }

    fn notebook(sources: &[&str]) -> NotebookDocument {
        NotebookDocument {
            nbformat: 4,
            nbformat_minor: 5,
            metadata: Map::new(),
            cells: sources.iter().map(|s| Cell::code(s, Map::new())).collect(),
            rest: Map::new(),
        }
    }

    fn options(methods: Vec<SurfaceMethod>, strict: bool) -> RunOptions<'static> {
        RunOptions {
            description: DescriptionOptions::level(2),
            methods,
            api: None,
            strict,
            out_dir: std::env::temp_dir(),
        }
    }

    #[test]
    fn new_cells_are_replaced_on_rerun() {
        let nb = notebook(&["x = 1", "plot()", "plot()"]);
        let opts = options(vec![SurfaceMethod::Html, SurfaceMethod::NewCell], false);
        let (once, report) = alttextify_document(&nb, &mut FakeExecutor, &opts).unwrap();
        assert_eq!(report.totals.figures_found, 2);
        assert_eq!(once.cells.len(), 5);
        let (twice, _) = alttextify_document(&once, &mut FakeExecutor, &opts).unwrap();
        assert_eq!(once.to_json(), twice.to_json());
    }

    #[test]
    fn failing_cells_are_recorded_or_abort() {
        let nb = notebook(&["raise ValueError()", "plot()"]);
        let (out, report) =
            alttextify_document(&nb, &mut FakeExecutor, &options(vec![SurfaceMethod::Html], false)).unwrap();
        assert_eq!(report.totals.errors, 1);
        assert_eq!(out.cells[0], nb.cells[0]);
        let strict = alttextify_document(&nb, &mut FakeExecutor, &options(vec![SurfaceMethod::Html], true));
        assert!(matches!(strict, Err(AltTextError::CellExecution { cell: 0, .. })));
    }

    #[test]
    fn level_four_needs_a_model() {
        let mut opts = options(vec![SurfaceMethod::Html], false);
        opts.description.desc_level = 4;
        assert!(matches!(
            alttextify_document(&notebook(&[]), &mut FakeExecutor, &opts),
            Err(AltTextError::InvalidLevel(4))
        ));
    }
}
