//! Attaching generated alt text to notebook output and exported files.

mod png;

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use serde::Serialize;
use serde_json::{json, Value};

pub use png::{embed_alt_text, read_alt_text, ALT_KEYWORD};

use crate::error::{AltTextError, Result};
use crate::figure::{snapshot_current, FigureFacts};
use crate::heuristic::{generate_alt_text, AltText, DescriptionOptions};
use crate::host::HostEnvironment;
use crate::vlm::{generate_api_alt_text, ApiConfig, ApiOptions, ChatBackend};

/// Key under which generated cells and notebooks are marked in metadata.
pub const METADATA_KEY: &str = "alttextify";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceMethod {
    #[default]
    Html,
    Markdown,
    NewCell,
    ImgFile,
    TxtFile,
}

impl SurfaceMethod {
    pub const ALL: [SurfaceMethod; 5] = [
        SurfaceMethod::Html,
        SurfaceMethod::Markdown,
        SurfaceMethod::NewCell,
        SurfaceMethod::ImgFile,
        SurfaceMethod::TxtFile,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SurfaceMethod::Html => "html",
            SurfaceMethod::Markdown => "markdown",
            SurfaceMethod::NewCell => "new_cell",
            SurfaceMethod::ImgFile => "img_file",
            SurfaceMethod::TxtFile => "txt_file",
        }
    }

    /// Methods that write into the notebook itself.
    pub fn needs_notebook(self) -> bool {
        matches!(self, SurfaceMethod::Markdown | SurfaceMethod::NewCell)
    }
}

impl fmt::Display for SurfaceMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SurfaceMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        SurfaceMethod::ALL.into_iter().find(|m| m.as_str() == s).ok_or_else(|| {
            format!("unknown surface method '{s}' (expected one of html, markdown, new_cell, img_file, txt_file)")
        })
    }
}

/// Where surfaced output goes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceContext {
    /// Whether notebook-only methods (markdown, new_cell) are available.
    pub in_notebook: bool,
    /// Directory for exported files; the working directory when unset.
    pub output_dir: Option<PathBuf>,
    /// 1-based number used in exported file names.
    pub figure_number: usize,
}

impl Default for SurfaceContext {
    fn default() -> Self {
        SurfaceContext {
            in_notebook: true,
            output_dir: None,
            figure_number: 1,
        }
    }
}

/// A code cell to insert after the current one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NewCell {
    pub source: String,
    pub metadata: Value,
}

#[derive(Debug, Default, Serialize)]
pub struct SurfaceResult {
    /// The text that was surfaced.
    pub alt_text: String,
    pub html: Option<String>,
    pub markdown: Option<String>,
    pub new_cell: Option<NewCell>,
    pub files: Vec<PathBuf>,
    #[serde(serialize_with = "errors_as_strings")]
    pub errors: Vec<(SurfaceMethod, AltTextError)>,
    pub warnings: Vec<String>,
    /// Set when model text was requested but heuristic text was used.
    pub fallback: bool,
}

fn errors_as_strings<S: serde::Serializer>(
    errors: &[(SurfaceMethod, AltTextError)],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(errors.len()))?;
    for (m, e) in errors {
        seq.serialize_element(&(m.as_str(), e.to_string()))?;
    }
    seq.end()
}

impl SurfaceResult {
    pub fn applied(&self) -> Vec<SurfaceMethod> {
        let failed: BTreeSet<SurfaceMethod> = self.errors.iter().map(|(m, _)| *m).collect();
        let mut out = Vec::new();
        if self.html.is_some() {
            out.push(SurfaceMethod::Html);
        }
        if self.markdown.is_some() {
            out.push(SurfaceMethod::Markdown);
        }
        if self.new_cell.is_some() {
            out.push(SurfaceMethod::NewCell);
        }
        for m in [SurfaceMethod::ImgFile, SurfaceMethod::TxtFile] {
            let ext = if m == SurfaceMethod::ImgFile { "png" } else { "txt" };
            if !failed.contains(&m) && self.files.iter().any(|p| p.extension().is_some_and(|e| e == ext)) {
                out.push(m);
            }
        }
        out
    }
}

/// Escapes `text` for use inside a double-quoted HTML attribute.
pub fn escape_attribute(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            c => out.push(c),
        }
    }
    out
}

/// Inverse of [`escape_attribute`].
pub fn unescape_attribute(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(i) = rest.find('&') {
        out.push_str(&rest[..i]);
        rest = &rest[i..];
        let mut matched = false;
        for (entity, c) in [
            ("&amp;", '&'),
            ("&quot;", '"'),
            ("&#39;", '\''),
            ("&lt;", '<'),
            ("&gt;", '>'),
        ] {
            if let Some(after) = rest.strip_prefix(entity) {
                out.push(c);
                rest = after;
                matched = true;
                break;
            }
        }
        if !matched {
            out.push('&');
            rest = &rest[1..];
        }
    }
    out.push_str(rest);
    out
}

/// Inline image element carrying `alt` as its alt attribute.
pub fn html_image(png: &[u8], alt: &str) -> String {
    format!(
        "<img src=\"data:image/png;base64,{}\" alt=\"{}\"/>",
        STANDARD.encode(png),
        escape_attribute(alt)
    )
}

/// Alt attributes of every `<img>` element in `html`, unescaped.
pub fn extract_alt_attributes(html: &str) -> Vec<String> {
    let mut out = Vec::new();
    for tag in html.split("<img").skip(1) {
        let tag = tag.split('>').next().unwrap_or("");
        if let Some(start) = tag.find(" alt=\"") {
            let value = &tag[start + 6..];
            if let Some(end) = value.find('"') {
                out.push(unescape_attribute(&value[..end]));
            }
        }
    }
    out
}

/// Source of the code cell created by the new_cell method: the text as a
/// string assignment, preceded by a comment naming the figure.
pub fn new_cell_source(alt: &str, figure_number: usize) -> String {
    let literal = serde_json::to_string(alt).expect("strings always serialize");
    format!("# alt text for figure {figure_number}\nalt_text = {literal}")
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|source| AltTextError::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Surfaces `alt` for `figure` through each of `methods`. Failures are
/// reported per method; the remaining methods still run.
pub fn add_alt_text(
    figure: &FigureFacts,
    alt: &AltText,
    methods: &[SurfaceMethod],
    context: &SurfaceContext,
) -> SurfaceResult {
    let mut result = SurfaceResult {
        alt_text: alt.text.clone(),
        warnings: alt.warnings.clone(),
        ..SurfaceResult::default()
    };
    let dir = context.output_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    let stem = format!("figure_{}", context.figure_number);
    let unique: BTreeSet<SurfaceMethod> = methods.iter().copied().collect();
    for method in unique {
        if method.needs_notebook() && !context.in_notebook {
            result.errors.push((
                method,
                AltTextError::Environment {
                    method: method.to_string(),
                },
            ));
            continue;
        }
        let outcome: Result<()> = match method {
            SurfaceMethod::Html => match &figure.image_bytes {
                Some(png) => {
                    result.html = Some(html_image(png, &alt.text));
                    Ok(())
                }
                None => Err(AltTextError::MissingImage),
            },
            SurfaceMethod::Markdown => {
                let mut md = alt.text.clone();
                if let Some(t) = &alt.table_markdown {
                    md.push_str("\n\n");
                    md.push_str(t);
                }
                result.markdown = Some(md);
                Ok(())
            }
            SurfaceMethod::NewCell => {
                result.new_cell = Some(NewCell {
                    source: new_cell_source(&alt.text, context.figure_number),
                    metadata: json!({ METADATA_KEY: { "generated": true, "figure": context.figure_number } }),
                });
                Ok(())
            }
            SurfaceMethod::ImgFile => figure
                .image_bytes
                .as_deref()
                .ok_or(AltTextError::MissingImage)
                .and_then(|png| embed_alt_text(png, &alt.text))
                .and_then(|tagged| {
                    let path = dir.join(format!("{stem}.png"));
                    write_file(&path, &tagged)?;
                    result.files.push(path);
                    Ok(())
                }),
            SurfaceMethod::TxtFile => {
                let path = dir.join(format!("{stem}.txt"));
                write_file(&path, alt.text.as_bytes()).map(|()| result.files.push(path))
            }
        };
        if let Err(e) = outcome {
            result.errors.push((method, e));
        }
    }
    result
}

/// Describes the current figure of `env` with templates and surfaces the
/// text. Stands in for the host's show call.
pub fn show_with_alt(
    env: &HostEnvironment,
    options: &DescriptionOptions,
    methods: &[SurfaceMethod],
    context: &SurfaceContext,
) -> Result<SurfaceResult> {
    let snapshot = snapshot_current(env)?;
    let mut alt = generate_alt_text(&snapshot.facts, options)?;
    alt.warnings.extend(snapshot.warnings.iter().map(ToString::to_string));
    Ok(add_alt_text(&snapshot.facts, &alt, methods, context))
}

/// Model text for `figure`, or heuristic text with a warning when the
/// model call fails. The flag is true when the fallback was used.
pub fn api_alt_text_or_fallback(
    figure: &FigureFacts,
    options: &ApiOptions,
    backend: &dyn ChatBackend,
    config: &ApiConfig,
) -> Result<(AltText, bool)> {
    match generate_api_alt_text(figure, options, backend, config) {
        Ok(alt) => Ok((alt, false)),
        Err(AltTextError::Api(e)) => {
            let heuristic_options = DescriptionOptions {
                desc_level: options.desc_level.min(3),
                ..options.heuristic.clone()
            };
            let mut alt = generate_alt_text(figure, &heuristic_options)?;
            alt.warnings
                .push(format!("model request failed, using heuristic alt text: {e}"));
            Ok((alt, true))
        }
        Err(e) => Err(e),
    }
}

/// As [`show_with_alt`], but with model-generated text.
pub fn show_with_api_alt(
    env: &HostEnvironment,
    options: &ApiOptions,
    backend: &dyn ChatBackend,
    config: &ApiConfig,
    methods: &[SurfaceMethod],
    context: &SurfaceContext,
) -> Result<SurfaceResult> {
    let snapshot = snapshot_current(env)?;
    let (alt, fallback) = api_alt_text_or_fallback(&snapshot.facts, options, backend, config)?;
    let mut result = add_alt_text(&snapshot.facts, &alt, methods, context);
    result.fallback = fallback;
    Ok(result)
}
