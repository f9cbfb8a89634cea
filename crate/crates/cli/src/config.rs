//! Command-line flags and the flat TOML config file that mirrors them.

use std::path::{Path, PathBuf};

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use kgforge_core::metrics::ReportFormat;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "kgforge",
    version,
    about = "Build a product knowledge graph from product descriptions with an LLM agent"
)]
pub struct Cli {
    #[command(flatten)]
    pub options: Options,
    /// Log more detail to stderr (-v info, -vv debug).
    #[arg(short, long, action = ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ontology creation and refinement.
    #[command(subcommand)]
    Ontology(OntologyCommand),
    /// Populate the knowledge graph from the corpus.
    Populate {
        /// Use this ontology file instead of the one in the run directory.
        #[arg(long)]
        ontology: Option<PathBuf>,
    },
    /// Recompute and print metrics from a run directory.
    Report,
    /// Check a Turtle file: syntax, ontology consistency, or instance
    /// conformance when an ontology is given.
    Validate {
        file: PathBuf,
        #[arg(long)]
        ontology: Option<PathBuf>,
    },
    /// Build, refine, populate and report in one go.
    RunAll,
}

#[derive(Debug, Subcommand)]
pub enum OntologyCommand {
    /// Bootstrap and iteratively expand the ontology from sampled products.
    Build,
    /// Ask the agent to refine the ontology of a run.
    Refine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendChoice {
    Http,
    Replay,
    Record,
}

/// Every setting, from either a flag or the config file. Config keys use
/// the flag names with underscores.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// TOML config file; flags override its values.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Run directory to create or read; defaults to a new or the latest
    /// timestamped directory under the output directory.
    #[arg(long, global = true)]
    pub run_dir: Option<PathBuf>,
    /// Parent of timestamped run directories [default: runs].
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
    /// Product corpus in JSON Lines.
    #[arg(long, global = true)]
    pub corpus: Option<PathBuf>,
    /// Product category to build the ontology for.
    #[arg(long, global = true)]
    pub category: Option<String>,
    /// Namespace for ontology terms.
    #[arg(long, global = true)]
    pub namespace: Option<String>,
    /// Base IRI for product subjects.
    #[arg(long, global = true)]
    pub product_base: Option<String>,
    /// Agent backend: live HTTP, replay recorded responses, or record them [default: http].
    #[arg(long, global = true)]
    pub backend: Option<BackendChoice>,
    /// Directory of recorded agent responses.
    #[arg(long, global = true)]
    pub fixtures_dir: Option<PathBuf>,
    /// Chat-completions API base URL.
    #[arg(long, global = true)]
    pub base_url: Option<String>,
    /// Model name sent to the HTTP backend.
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// Environment variable holding the API key [default: KGFORGE_API_KEY].
    #[arg(long, global = true)]
    pub key_env: Option<String>,
    /// Products per expansion batch [default: 5].
    #[arg(long, global = true)]
    pub batch_size: Option<usize>,
    /// Products sampled for ontology building [default: 30].
    #[arg(long, global = true)]
    pub sample_budget: Option<usize>,
    /// Consecutive low-yield iterations that stop expansion [default: 2].
    #[arg(long, global = true)]
    pub plateau_window: Option<usize>,
    /// An iteration adding fewer elements than this is low-yield [default: 2].
    #[arg(long, global = true)]
    pub plateau_threshold: Option<usize>,
    /// Seed for product sampling [default: 42].
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Attempts per agent call, including the first [default: 3].
    #[arg(long, global = true)]
    pub max_attempts: Option<u32>,
    /// Products populated concurrently [default: 4].
    #[arg(long, global = true)]
    pub max_inflight: Option<usize>,
    /// One attempt per call, no feedback retries.
    #[arg(long, global = true, num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub paper_mode: Option<bool>,
    /// Report conformance problems as errors and drop those triples.
    #[arg(long, global = true, num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub strict: Option<bool>,
    /// Accept refinements that remove elements without a mapping.
    #[arg(long, global = true, num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub allow_drops: Option<bool>,
    /// Report format: text or json.
    #[arg(long, global = true)]
    pub format: Option<ReportFormat>,
    /// Directory with bootstrap.txt, expand.txt, refine.txt and populate.txt.
    #[arg(long, global = true)]
    pub prompts_dir: Option<PathBuf>,
    /// Sampling temperature [default: 0].
    #[arg(long, global = true)]
    pub temperature: Option<f64>,
    /// Output token limit per agent call [default: 8192].
    #[arg(long, global = true)]
    pub max_tokens: Option<u32>,
    /// Per-request timeout for the HTTP backend.
    #[arg(long, global = true)]
    pub timeout_secs: Option<u64>,
}

macro_rules! overlay {
    ($cli:ident, $file:ident; $($field:ident),*; paths: $($path:ident),*) => {
        Options {
            config: $cli.config,
            $($field: $cli.$field.or($file.$field),)*
            $($path: $cli.$path.or($file.$path),)*
        }
    };
}

impl Options {
    /// Reads the config file named by `--config`, if any, and lets the
    /// flags override it. Relative paths in the file resolve against the
    /// file's directory.
    pub fn resolve(self) -> Result<Options, CliError> {
        let Some(path) = self.config.clone() else { return Ok(self) };
        let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
        let mut file: Options =
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in
            [&mut file.run_dir, &mut file.output_dir, &mut file.corpus, &mut file.fixtures_dir, &mut file.prompts_dir]
                .into_iter()
                .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        let cli = self;
        Ok(overlay!(cli, file;
            category, namespace, product_base, backend, base_url, model, key_env, batch_size,
            sample_budget, plateau_window, plateau_threshold, seed, max_attempts, max_inflight,
            paper_mode, strict, allow_drops, format, temperature, max_tokens, timeout_secs;
            paths: run_dir, output_dir, corpus, fixtures_dir, prompts_dir))
    }
}
