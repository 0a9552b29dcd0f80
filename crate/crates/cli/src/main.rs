//! `alttextify`: execute a notebook and embed alt text for every figure it
//! draws.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use alttext_core::heuristic::DescriptionOptions;
use alttext_core::notebook::{alttextify, ApiSettings, RunOptions};
use alttext_core::surfacing::SurfaceMethod;
use alttext_core::vlm::{ApiConfig, ApiOptions, Augmentation, HttpBackend, Provider, Secret, DEFAULT_MAX_TOKENS};
use alttext_core::AltTextError;
use clap::{Parser, ValueEnum};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProviderArg {
    Openai,
    Azure,
}

#[derive(Debug, Parser)]
#[command(
    name = "alttextify",
    version,
    about = "Add alt text to every figure in a Jupyter notebook"
)]
struct Cli {
    /// Notebook to execute.
    input: PathBuf,

    /// Where to write the annotated notebook.
    output: PathBuf,

    /// Description level: 1 (encodings), 2 (statistics), 3 (trends), 4 (context; needs --use-api).
    #[arg(short = 'l', long = "level", default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=4))]
    level: u8,

    /// How to surface the text: html, markdown, new_cell, img_file, txt_file.
    #[arg(short = 's', long = "surface", num_args = 1.., default_value = "html")]
    methods: Vec<SurfaceMethod>,

    /// Describe figures with a vision-language model instead of templates.
    #[arg(long)]
    use_api: bool,

    /// API key (defaults to the ALT_API_KEY environment variable).
    #[arg(long, env = "ALT_API_KEY", hide_env_values = true)]
    api_key: Option<String>,

    /// Model name sent with each request.
    #[arg(long, default_value = "gpt-4-turbo")]
    model: String,

    /// Chat-completions endpoint.
    #[arg(long, default_value = "https://api.openai.com/v1/chat/completions")]
    endpoint: String,

    #[arg(long, value_enum, default_value = "openai")]
    provider: ProviderArg,

    /// Context added to the model prompt: none, heuristic, table, heuristic_and_table.
    #[arg(long, default_value = "none", value_parser = parse_augmentation)]
    augment: Augmentation,

    /// Token limit stated in the model prompt.
    #[arg(long, default_value_t = DEFAULT_MAX_TOKENS)]
    max_tokens: u32,

    /// Leave the "colors, sizes, textures" request out of the model prompt.
    #[arg(long)]
    no_visual_attrs: bool,

    /// Seconds to wait for each model request.
    #[arg(long, default_value_t = 60)]
    timeout: u64,

    /// Append a markdown data table where the figure's data allows it.
    #[arg(long)]
    include_table: bool,

    #[arg(long, default_value_t = 20)]
    max_rows: usize,

    #[arg(long, default_value_t = 8)]
    max_cols: usize,

    /// Stop at the first cell that raises.
    #[arg(long)]
    strict: bool,

    /// Do not warn about executing the notebook's code.
    #[arg(long)]
    trust: bool,

    /// Directory for img_file and txt_file exports (default: next to the output notebook).
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn parse_augmentation(s: &str) -> Result<Augmentation, String> {
    Augmentation::parse(s)
        .ok_or_else(|| format!("unknown augmentation '{s}' (expected none, heuristic, table or heuristic_and_table)"))
}

fn default_out_dir(output: &Path) -> PathBuf {
    match output.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    }
}

fn exit_code(err: &AltTextError) -> u8 {
    match err {
        AltTextError::CellExecution { .. } => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<(), AltTextError> {
    if cli.level == 4 && !cli.use_api {
        return Err(AltTextError::InvalidLevel(4));
    }
    if !cli.trust {
        eprintln!(
            "warning: alttextify runs every code cell in {}; only use it on notebooks you trust (--trust hides this warning)",
            cli.input.display()
        );
    }

    let description = DescriptionOptions {
        desc_level: cli.level.min(3),
        include_table: cli.include_table,
        max_table_rows: cli.max_rows,
        max_table_cols: cli.max_cols,
        ..DescriptionOptions::default()
    };
    let backend = HttpBackend::new();
    let api = cli.use_api.then(|| {
        let config = ApiConfig {
            endpoint_url: cli.endpoint.clone(),
            api_key: cli.api_key.clone().map(Secret::new),
            model_name: cli.model.clone(),
            provider: match cli.provider {
                ProviderArg::Openai => Provider::OpenAi,
                ProviderArg::Azure => Provider::Azure,
            },
            timeout: Duration::from_secs(cli.timeout),
            ..ApiConfig::default()
        };
        if config.resolved_key().is_none() {
            log::warn!("no API key given; figures will fall back to heuristic alt text");
        }
        ApiSettings {
            options: ApiOptions {
                desc_level: cli.level,
                augmentation: cli.augment,
                max_tokens: cli.max_tokens,
                include_visual_attrs: !cli.no_visual_attrs,
                heuristic: description.clone(),
            },
            config,
            backend: &backend,
        }
    });

    let options = RunOptions {
        description,
        methods: cli.methods.clone(),
        api,
        strict: cli.strict,
        out_dir: cli.out_dir.clone().unwrap_or_else(|| default_out_dir(&cli.output)),
    };
    let report = alttextify(&cli.input, &cli.output, &options)?;
    println!("{}", report.render());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
