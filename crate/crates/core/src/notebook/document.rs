use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{AltTextError, Result};

/// Cell source, stored either as one string or as a list of lines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Source {
    Text(String),
    Lines(Vec<String>),
}

impl Source {
    pub fn text(&self) -> String {
        match self {
            Source::Text(t) => t.clone(),
            Source::Lines(lines) => lines.concat(),
        }
    }

    /// Splits `text` into lines that keep their trailing newline.
    pub fn from_text(text: &str) -> Source {
        Source::Lines(text.split_inclusive('\n').map(str::to_string).collect())
    }
}

impl Default for Source {
    fn default() -> Self {
        Source::Lines(Vec::new())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub cell_type: String,
    #[serde(default)]
    pub source: Source,
    #[serde(default)]
    pub metadata: Map<String, Value>,
    /// Everything else (outputs, execution_count, id, attachments, ...).
    #[serde(flatten)]
    pub rest: Map<String, Value>,
}

impl Cell {
    pub fn code(source: &str, metadata: Map<String, Value>) -> Cell {
        let mut rest = Map::new();
        rest.insert("execution_count".into(), Value::Null);
        rest.insert("outputs".into(), Value::Array(Vec::new()));
        Cell {
            cell_type: "code".into(),
            source: Source::from_text(source),
            metadata,
            rest,
        }
    }

    pub fn is_code(&self) -> bool {
        self.cell_type == "code"
    }

    pub fn outputs(&self) -> &[Value] {
        self.rest
            .get("outputs")
            .and_then(Value::as_array)
            .map_or(&[], Vec::as_slice)
    }

    pub fn set_outputs(&mut self, outputs: Vec<Value>) {
        self.rest.insert("outputs".into(), Value::Array(outputs));
    }

    pub fn set_execution_count(&mut self, count: Option<u64>) {
        self.rest
            .insert("execution_count".into(), count.map_or(Value::Null, Value::from));
    }
}

/// A notebook in the v4 JSON format. Unknown keys are kept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NotebookDocument {
    pub nbformat: u32,
    pub nbformat_minor: u32,
    #[serde(default)]
    pub metadata: Map<String, Value>,
    pub cells: Vec<Cell>,
    #[serde(flatten)]
    pub rest: Map<String, Value>,
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let start: usize = text.split_inclusive('\n').take(line - 1).map(str::len).sum();
    (start + column.saturating_sub(1)).min(text.len())
}

impl NotebookDocument {
    pub fn from_json(text: &str, path: &Path) -> Result<NotebookDocument> {
        let parse_error = |e: serde_json::Error| AltTextError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
            offset: byte_offset(text, e.line(), e.column()),
        };
        let doc: NotebookDocument = serde_json::from_str(text).map_err(parse_error)?;
        if doc.nbformat != 4 {
            return Err(AltTextError::Parse {
                path: path.to_path_buf(),
                message: format!("unsupported notebook format version {}", doc.nbformat),
                offset: 0,
            });
        }
        Ok(doc)
    }

    /// Serializes with sorted keys, one-space indentation and a trailing
    /// newline, the layout Jupyter itself writes.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("notebook values are plain JSON");
        let mut buf = Vec::new();
        let formatter = serde_json::ser::PrettyFormatter::with_indent(b" ");
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, formatter);
        value.serialize(&mut ser).expect("writing to a Vec cannot fail");
        let mut text = String::from_utf8(buf).expect("serde_json emits UTF-8");
        text.push('\n');
        text
    }

    pub fn code_cells(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| c.is_code())
    }
}

pub fn parse_notebook(path: &Path) -> Result<NotebookDocument> {
    let text = std::fs::read_to_string(path).map_err(|e| AltTextError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
        offset: 0,
    })?;
    NotebookDocument::from_json(&text, path)
}

pub fn write_notebook(doc: &NotebookDocument, path: &Path) -> Result<()> {
    std::fs::write(path, doc.to_json()).map_err(|source| AltTextError::Write {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r##"{
 "cells": [
  {
   "cell_type": "markdown",
   "id": "a1",
   "metadata": {},
   "source": "# Title"
  },
  {
   "cell_type": "code",
   "execution_count": 3,
   "metadata": {
    "custom": {
     "keep": [
      1,
      2
     ]
    }
   },
   "outputs": [],
   "source": [
    "x = 1\n",
    "print(x)"
   ]
  }
 ],
 "metadata": {
  "kernelspec": {
   "name": "python3"
  },
  "zzz_unknown": true
 },
 "nbformat": 4,
 "nbformat_minor": 5
}
"##;

    #[test]
    fn round_trip_is_byte_stable() {
        let doc = NotebookDocument::from_json(SAMPLE, Path::new("x.ipynb")).unwrap();
        assert_eq!(doc.to_json(), SAMPLE);
        assert_eq!(doc.cells[1].source.text(), "x = 1\nprint(x)");
    }

    #[test]
    fn truncated_json_reports_offset() {
        let cut = &SAMPLE[..120];
        match NotebookDocument::from_json(cut, Path::new("x.ipynb")) {
            Err(AltTextError::Parse { offset, .. }) => assert!(offset > 0 && offset <= cut.len()),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn source_lines_keep_newlines() {
        assert_eq!(
            Source::from_text("a\nb"),
            Source::Lines(vec!["a\n".to_string(), "b".to_string()])
        );
    }
}
