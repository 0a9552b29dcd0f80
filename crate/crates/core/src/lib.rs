//! Alt text generation for plotted figures.
//!
//! A figure is captured from the plotting host as a [`host::HostFigure`],
//! reduced to [`figure::FigureFacts`], classified, and described either by
//! templates ([`heuristic`]) or by a vision-language model ([`vlm`]). The
//! [`surfacing`] and [`notebook`] modules attach the text to notebook
//! outputs and exported files.

pub mod chart_type;
pub mod color;
pub mod error;
pub mod eval;
pub mod figure;
pub mod heuristic;
pub mod host;
pub mod notebook;
pub mod stats;
pub mod surfacing;
pub mod vlm;

pub use chart_type::{classify, infer_chart_type, ChartType};
pub use error::{AltTextError, Result};
pub use figure::{snapshot_current, snapshot_figure, FigureFacts};
pub use heuristic::{generate_alt_text, AltText, DescriptionOptions};
pub use vlm::{generate_api_alt_text, ApiConfig, ApiError, ApiOptions, Augmentation};
