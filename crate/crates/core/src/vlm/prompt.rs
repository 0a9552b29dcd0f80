use serde::Serialize;

use crate::error::{AltTextError, Result};

pub const DEFAULT_MAX_TOKENS: u32 = 225;

const PREAMBLE: &str = "You are a helpful assistant that describes figures. Here are two example descriptions:";

/// Sentences of the first example description, each tagged with the
/// lowest level that includes it.
const EXAMPLE_BARS: &[(u8, &str)] = &[
    (1, "This is a vertical bar chart entitled 'COVID-19 mortality rate by age' that plots Mortality rate by Age. Mortality rate is plotted on the vertical y-axis from 0 to 15%. Age is plotted on the horizontal x-axis in bins: 10-19, 20-29, 30-39, 40-49, 50-59, 60-69, 70-79, 80+."),
    (2, " The highest COVID-19 mortality rate is in the 80+ age range, while the lowest mortality rate is in 10-19, 20-29, 30-39, sharing the same rate. COVID-19 mortality rate does not linearly correspond to the demographic age."),
    (3, " The mortality rate increases with age, especially around 40-49 years and upwards."),
    (4, " This relates to people\u{2019}s decrease in their immunity and the increase of co-morbidity with age."),
    (3, " The mortality rate increases exponentially with older people."),
];

const EXAMPLE_LINES: &[(u8, &str)] = &[
    (1, "This is a line chart titled 'Big Tech Stock Prices' that plots price by date. The corporations include AAPL (Apple), AMZN (Amazon), GOOG (Google), IBM (IBM), and MSFT (Microsoft). The years are plotted on the horizontal x-axis from 2000 to 2010 with an increment of 2 years. The prices are plotted on the vertical y-axis from 0 to 800 with an increment of 200."),
    (2, " GOOG has the greatest price over time. MSFT has the lowest price over time."),
    (3, " Prices of particular Big Tech corporations seem to fluctuate but nevertheless increase over time. Years 2008-2009 are exceptions as we can see an extreme drop in prices of all given corporations."),
    (4, " The big drop in prices was caused by financial crisis of 2007-2008. The crisis culminated with the bankruptcy of Lehman Brothers on September 15, 2008 and an international banking crisis."),
];

const CONTENT_L1: &str = "Only include information about the chart type, title, axis ranges, and labels.";
const CONTENT_BASE: &str = "Include information about the chart type, title, axis ranges, and labels.";
const CONTENT_L2: &str =
    "If possible, describe statistics, extrema, outliers, correlations, and point-wise comparisons between variables.";
const CONTENT_L3: &str = "If possible, describe statistics, extrema, outliers, correlations, point-wise comparisons, and trends for each plotted variable.";
const CONTENT_L4: &str = "If possible, briefly explain domain-specific insights, current events, and socio-political context that explain the data.";
const VISUAL_ATTRS: &str = "If possible, also describe colors, sizes, textures.";

/// Extra context given to the model alongside the image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Augmentation {
    None,
    Heuristic,
    Table,
    HeuristicAndTable,
}

impl Augmentation {
    pub fn uses_heuristic(self) -> bool {
        matches!(self, Augmentation::Heuristic | Augmentation::HeuristicAndTable)
    }

    pub fn uses_table(self) -> bool {
        matches!(self, Augmentation::Table | Augmentation::HeuristicAndTable)
    }

    pub fn parse(name: &str) -> Option<Augmentation> {
        match name.replace('-', "_").as_str() {
            "none" => Some(Augmentation::None),
            "heuristic" => Some(Augmentation::Heuristic),
            "table" => Some(Augmentation::Table),
            "heuristic_and_table" | "table_and_heuristic" | "both" => Some(Augmentation::HeuristicAndTable),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum UserPart {
    /// PNG bytes, base64-encoded on the wire.
    Image {
        #[serde(skip)]
        png: Vec<u8>,
    },
    Text {
        text: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PromptBundle {
    pub system_text: String,
    pub user_parts: Vec<UserPart>,
    pub max_tokens: u32,
    pub desc_level: u8,
    pub include_visual_attrs: bool,
}

impl PromptBundle {
    pub fn image(&self) -> Option<&[u8]> {
        self.user_parts.iter().find_map(|p| match p {
            UserPart::Image { png } => Some(png.as_slice()),
            UserPart::Text { .. } => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PromptRequest<'a> {
    pub desc_level: u8,
    pub max_tokens: u32,
    pub augmentation: Augmentation,
    pub heuristic_text: Option<&'a str>,
    pub table_markdown: Option<&'a str>,
    pub include_visual_attrs: bool,
}

impl Default for PromptRequest<'_> {
    fn default() -> Self {
        PromptRequest {
            desc_level: 2,
            max_tokens: DEFAULT_MAX_TOKENS,
            augmentation: Augmentation::None,
            heuristic_text: None,
            table_markdown: None,
            include_visual_attrs: true,
        }
    }
}

fn example(sentences: &[(u8, &str)], level: u8) -> String {
    sentences
        .iter()
        .filter(|(min, _)| *min <= level)
        .map(|(_, s)| *s)
        .collect()
}

fn instruction(level: u8, max_tokens: u32, visual_attrs: bool) -> String {
    let mut parts = match level {
        1 => vec![CONTENT_L1],
        2 => vec![CONTENT_BASE, CONTENT_L2],
        3 => vec![CONTENT_BASE, CONTENT_L3],
        _ => vec![CONTENT_BASE, CONTENT_L3, CONTENT_L4],
    };
    if visual_attrs {
        parts.push(VISUAL_ATTRS);
    }
    let limit = format!("Be concise and limit your response to {max_tokens} tokens.");
    parts.push(&limit);
    parts.join(" ")
}

/// System prompt for `request`, without the image.
pub fn system_text(request: &PromptRequest<'_>) -> Result<String> {
    let level = request.desc_level;
    if !(1..=4).contains(&level) {
        return Err(AltTextError::InvalidLevel(level));
    }
    let known = match request.augmentation {
        Augmentation::None => None,
        aug => {
            let heuristic = aug
                .uses_heuristic()
                .then(|| {
                    request
                        .heuristic_text
                        .ok_or(AltTextError::MissingAugmentation("heuristic"))
                })
                .transpose()?;
            let table = aug
                .uses_table()
                .then(|| request.table_markdown.ok_or(AltTextError::MissingAugmentation("table")))
                .transpose()?;
            let body = match (heuristic, table) {
                (Some(h), Some(t)) => format!("{h}\n\n{t}"),
                (Some(h), None) => h.to_string(),
                (None, Some(t)) => t.to_string(),
                (None, None) => String::new(),
            };
            Some(format!(
                "You already know the following information about this figure and its data: '{body}'."
            ))
        }
    };
    let mut lines = vec![
        PREAMBLE.to_string(),
        format!("1. '{}'", example(EXAMPLE_BARS, level)),
        format!("2. '{}'", example(EXAMPLE_LINES, level)),
    ];
    lines.extend(known);
    lines.push(instruction(level, request.max_tokens, request.include_visual_attrs));
    Ok(lines.join("\n"))
}

/// Full prompt: the system text plus a single image part.
pub fn build_prompt(request: &PromptRequest<'_>, png: Vec<u8>) -> Result<PromptBundle> {
    Ok(PromptBundle {
        system_text: system_text(request)?,
        user_parts: vec![UserPart::Image { png }],
        max_tokens: request.max_tokens,
        desc_level: request.desc_level,
        include_visual_attrs: request.include_visual_attrs,
    })
}
