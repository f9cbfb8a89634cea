use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use kgforge_core::agent::{
    Backend, FixtureStore, Gateway, HttpBackend, HttpConfig, RecordBackend, ReplayBackend, SamplingParams, TemplateSet,
};
use kgforge_core::corpus::{load_corpus, Corpus};
use kgforge_core::metrics::{render_report, run_summary, ReportFormat};
use kgforge_core::ontology::{
    ontology_from_graph, ontology_to_graph, validate_ontology, Ontology, OntologyIssue, Severity, DEFAULT_NAMESPACE,
};
use kgforge_core::rdf::{parse_turtle, serialize_turtle, vocab, Graph, Iri};
use kgforge_core::stages::{
    expansion_loop, populate_corpus, refine_ontology, validate_triples, ConformanceMode, ExpansionConfig,
    OntologyStageOptions, PopulationConfig, PopulationContext, PopulationResult, RefineOptions, RefinementReport,
};

use crate::config::{BackendChoice, Options};
use crate::error::CliError;
use crate::rundir;

const DEFAULT_KEY_ENV: &str = "KGFORGE_API_KEY";
const DEFAULT_BASE_URL: &str = "https://api.openai.com/v1";

/// Resolved settings plus the agent backend, built on first use.
pub struct Session<'a> {
    pub opts: Options,
    agent: Option<Box<dyn Backend>>,
    gateway: Option<Gateway>,
    pub out: &'a mut dyn Write,
}

impl<'a> Session<'a> {
    pub fn new(opts: Options, agent: Option<Box<dyn Backend>>, out: &'a mut dyn Write) -> Self {
        Session { opts, agent, gateway: None, out }
    }

    fn say(&mut self, text: &str) -> Result<(), CliError> {
        self.out.write_all(text.as_bytes()).map_err(|e| CliError::io(Path::new("<stdout>"), e))
    }

    fn max_attempts(&self) -> Result<u32, CliError> {
        if self.opts.paper_mode == Some(true) {
            return Ok(1);
        }
        match self.opts.max_attempts.unwrap_or(3) {
            0 => Err(CliError::Config("max_attempts must be at least 1".into())),
            n => Ok(n),
        }
    }

    fn namespace(&self) -> Result<Iri, CliError> {
        let ns = self.opts.namespace.as_deref().unwrap_or(DEFAULT_NAMESPACE);
        if !ns.ends_with(['/', '#']) {
            return Err(CliError::Config(format!("namespace {ns:?} must end with '/' or '#'")));
        }
        Iri::new(ns).map_err(|e| CliError::Config(e.to_string()))
    }

    fn mode(&self) -> ConformanceMode {
        if self.opts.strict == Some(true) {
            ConformanceMode::Strict
        } else {
            ConformanceMode::Lenient
        }
    }

    fn format(&self) -> ReportFormat {
        self.opts.format.unwrap_or_default()
    }

    fn templates(&self) -> Result<TemplateSet, CliError> {
        match &self.opts.prompts_dir {
            Some(dir) => TemplateSet::load_dir(dir).map_err(|e| CliError::Config(e.to_string())),
            None => Ok(TemplateSet::builtin()),
        }
    }

    fn corpus(&self) -> Result<Corpus, CliError> {
        let path =
            self.opts.corpus.as_ref().ok_or_else(|| CliError::Config("no corpus configured (--corpus)".into()))?;
        load_corpus(path).map_err(|e| match e {
            e @ kgforge_core::corpus::CorpusError::Io { .. } => CliError::Config(e.to_string()),
            other => CliError::Config(format!("{}: {other}", path.display())),
        })
    }

    /// The configured category, or the only category in the corpus.
    fn category(&self, c: &Corpus) -> Result<String, CliError> {
        if let Some(cat) = &self.opts.category {
            return Ok(cat.clone());
        }
        let cats: Vec<&str> = c.categories().collect();
        match cats.as_slice() {
            [only] => Ok(only.to_string()),
            [] => Err(CliError::Config("the corpus is empty and no category is configured".into())),
            _ => Err(CliError::Config(format!("the corpus has {} categories; choose one with --category", cats.len()))),
        }
    }

    fn http_config(&self) -> Result<HttpConfig, CliError> {
        let key_env = self.opts.key_env.as_deref().unwrap_or(DEFAULT_KEY_ENV);
        let key = std::env::var(key_env)
            .ok()
            .filter(|k| !k.is_empty())
            .ok_or_else(|| CliError::Config(format!("the HTTP backend needs an API key in ${key_env}")))?;
        let model = self.opts.model.clone().ok_or_else(|| CliError::Config("the HTTP backend needs --model".into()))?;
        let mut cfg = HttpConfig::new(self.opts.base_url.as_deref().unwrap_or(DEFAULT_BASE_URL), model, key);
        if let Some(secs) = self.opts.timeout_secs {
            cfg.timeout = Duration::from_secs(secs);
        }
        if let Some(n) = self.opts.max_inflight {
            cfg.max_inflight = n.max(1);
        }
        Ok(cfg)
    }

    fn live_backend(&mut self) -> Result<Box<dyn Backend>, CliError> {
        match self.agent.take() {
            Some(agent) => Ok(agent),
            None => Ok(Box::new(HttpBackend::new(self.http_config()?))),
        }
    }

    fn fixtures_dir(&self) -> Result<PathBuf, CliError> {
        self.opts.fixtures_dir.clone().ok_or_else(|| CliError::Config("this backend needs --fixtures-dir".into()))
    }

    fn gateway(&mut self) -> Result<&Gateway, CliError> {
        if self.gateway.is_none() {
            let backend: Box<dyn Backend> = match self.opts.backend.unwrap_or(BackendChoice::Http) {
                BackendChoice::Http => self.live_backend()?,
                BackendChoice::Replay => {
                    let dir = self.fixtures_dir()?;
                    if !dir.is_dir() {
                        return Err(CliError::Config(format!("fixtures directory {} does not exist", dir.display())));
                    }
                    Box::new(ReplayBackend::new(FixtureStore::new(dir)))
                }
                BackendChoice::Record => {
                    let dir = self.fixtures_dir()?;
                    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
                    Box::new(RecordBackend::new(self.live_backend()?, FixtureStore::new(dir)))
                }
            };
            let defaults = SamplingParams::default();
            let params = SamplingParams {
                temperature: self.opts.temperature.unwrap_or(defaults.temperature),
                max_output_tokens: self.opts.max_tokens.unwrap_or(defaults.max_output_tokens),
            };
            self.gateway = Some(Gateway::new(backend).with_params(params));
        }
        Ok(self.gateway.as_ref().expect("gateway initialized"))
    }

    pub fn ontology_build(&mut self) -> Result<PathBuf, CliError> {
        let corpus = self.corpus()?;
        let category = self.category(&corpus)?;
        let defaults = ExpansionConfig::default();
        let cfg = ExpansionConfig {
            batch_size: self.opts.batch_size.unwrap_or(defaults.batch_size),
            sample_budget: self.opts.sample_budget.unwrap_or(defaults.sample_budget),
            plateau_window: self.opts.plateau_window.unwrap_or(defaults.plateau_window),
            plateau_threshold: self.opts.plateau_threshold.unwrap_or(defaults.plateau_threshold),
            seed: self.opts.seed.unwrap_or(defaults.seed),
            sampling: defaults.sampling,
        };
        cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
        let stage = OntologyStageOptions { namespace: self.namespace()?, category, max_attempts: self.max_attempts()? };
        let templates = self.templates()?;
        let dir = rundir::create(&self.opts)?;
        let gw = self.gateway()?;
        let (ontology, trace) = expansion_loop(&corpus, &cfg, gw, &templates, &stage)?;
        rundir::write(&dir, rundir::ONTOLOGY, &ontology_text(&ontology))?;
        rundir::write_json(&dir, rundir::TRACE, &trace)?;
        let summary = format!(
            "run directory: {}\nontology: {} classes, {} properties after {} iteration(s), stopped by {}\n",
            dir.display(),
            ontology.classes.len(),
            ontology.properties.len(),
            trace.iterations.len(),
            trace.stop_reason
        );
        self.say(&summary)?;
        Ok(dir)
    }

    pub fn ontology_refine(&mut self, dir: &Path) -> Result<RefinementReport, CliError> {
        let ontology = read_ontology(&dir.join(rundir::ONTOLOGY))?;
        let opts = RefineOptions {
            max_attempts: self.max_attempts()?,
            allow_drops: self.opts.allow_drops == Some(true),
            ..Default::default()
        };
        let templates = self.templates()?;
        let gw = self.gateway()?;
        let (refined, report) = refine_ontology(&ontology, gw, &templates, &opts)?;
        rundir::write_json(dir, rundir::REFINEMENT, &report)?;
        if report.accepted {
            rundir::write(dir, rundir::REFINED, &ontology_text(&refined))?;
            let d = &report.diff;
            let text = format!(
                "refinement accepted: {} added, {} removed, {} changed, {} renamed\n",
                d.added_count(),
                d.removed_count(),
                d.changed_classes.len() + d.changed_properties.len(),
                report.rename_map.len()
            );
            self.say(&text)?;
        } else {
            let stale = dir.join(rundir::REFINED);
            if stale.exists() {
                std::fs::remove_file(&stale).map_err(|e| CliError::io(&stale, e))?;
            }
        }
        Ok(report)
    }

    /// Runs population and writes kg.ttl, results.json and report.json.
    pub fn populate(&mut self, dir: &Path, ontology: &Ontology) -> Result<(), CliError> {
        let corpus = self.corpus()?;
        let corpus = match &self.opts.category {
            Some(cat) => Corpus::from_records(corpus.category(cat).cloned().collect())
                .map_err(|e| CliError::Config(e.to_string()))?,
            None => corpus,
        };
        let defaults = PopulationConfig::default();
        let product_base = match &self.opts.product_base {
            Some(b) => Iri::new(b.as_str()).map_err(|e| CliError::Config(e.to_string()))?,
            None => defaults.product_base.clone(),
        };
        let cfg = PopulationConfig {
            max_attempts: self.max_attempts()?,
            mode: self.mode(),
            max_inflight: self.opts.max_inflight.unwrap_or(defaults.max_inflight),
            product_base,
        };
        let templates = self.templates()?;
        let ctx = PopulationContext::new(ontology, &templates, cfg).map_err(|e| CliError::Config(e.to_string()))?;
        let gw = self.gateway()?;
        let (kg, results) = populate_corpus(&corpus, &ctx, gw);
        rundir::write(dir, rundir::KG, &serialize_turtle(&kg))?;
        rundir::write_json(dir, rundir::RESULTS, &results)?;
        let metrics = run_summary(&results, &kg, ontology);
        rundir::write(dir, rundir::REPORT, &render_report(&metrics, ReportFormat::Json))?;
        let shown = render_report(&metrics, self.format());
        self.say(&shown)?;
        if !corpus.is_empty() && metrics.products_succeeded == 0 {
            return Err(CliError::Invalid(format!("none of the {} products was populated", corpus.len())));
        }
        Ok(())
    }

    pub fn report(&mut self, dir: &Path) -> Result<(), CliError> {
        let ontology = read_ontology(&run_ontology_path(dir)?)?;
        let kg = read_graph(&dir.join(rundir::KG))?;
        let results_path = dir.join(rundir::RESULTS);
        let results: Vec<PopulationResult> = serde_json::from_str(&rundir::read(dir, rundir::RESULTS)?)
            .map_err(|e| CliError::Config(format!("{}: {e}", results_path.display())))?;
        let metrics = run_summary(&results, &kg, &ontology);
        let text = render_report(&metrics, self.format());
        self.say(&text)
    }

    pub fn validate(&mut self, file: &Path, ontology: Option<&Path>) -> Result<(), CliError> {
        let text = std::fs::read_to_string(file).map_err(|e| CliError::io(file, e))?;
        let graph = parse_turtle(&text)
            .map_err(|e| CliError::Invalid(format!("{}:{}:{}: {}", file.display(), e.line, e.column, e.message)))?;
        let json = self.format() == ReportFormat::Json;
        let (lines, errors) = match ontology {
            Some(path) => {
                let o = read_ontology(path)?;
                let triples: Vec<_> = graph.iter().cloned().collect();
                let issues = validate_triples(&triples, &o, self.mode());
                let errors = issues.iter().filter(|i| i.severity == Severity::Error).count();
                let lines = if json {
                    vec![serde_json::to_string_pretty(&issues).expect("issues serialize")]
                } else {
                    issues.iter().map(|i| format!("{:?} {:?}: {}", i.severity, i.code, i.triple)).collect()
                };
                (lines, errors)
            }
            None if declares_schema(&graph) => {
                let (o, mut issues) = ontology_from_graph(&graph).map_err(|e| CliError::Invalid(e.to_string()))?;
                issues.extend(validate_ontology(&o));
                issues.sort();
                issues.dedup();
                let errors = issues.iter().filter(|i| i.severity == Severity::Error).count();
                let lines = if json {
                    vec![serde_json::to_string_pretty(&issues).expect("issues serialize")]
                } else {
                    issues.iter().map(format_issue).collect()
                };
                (lines, errors)
            }
            None => (if json { vec!["[]".to_string()] } else { vec![] }, 0),
        };
        let mut out = String::new();
        for line in &lines {
            out.push_str(line);
            out.push('\n');
        }
        if !json {
            out.push_str(&format!(
                "{}: {} triples, {} error(s), {} issue(s)\n",
                file.display(),
                graph.len(),
                errors,
                lines.len()
            ));
        }
        self.say(&out)?;
        if errors > 0 {
            return Err(CliError::Invalid(format!("{}: {errors} error(s)", file.display())));
        }
        Ok(())
    }
}

fn format_issue(i: &OntologyIssue) -> String {
    format!("{:?} {:?} {}: {}", i.severity, i.code, i.subject, i.message)
}

fn declares_schema(g: &Graph) -> bool {
    g.iter().any(|t| {
        t.predicate.as_str() == vocab::RDF_TYPE
            && t.object.as_iri().is_some_and(|o| {
                matches!(o.as_str(), vocab::OWL_CLASS | vocab::OWL_DATATYPE_PROPERTY | vocab::OWL_OBJECT_PROPERTY)
            })
    })
}

pub fn ontology_text(o: &Ontology) -> String {
    serialize_turtle(&ontology_to_graph(o))
}

pub fn read_graph(path: &Path) -> Result<Graph, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_turtle(&text).map_err(|e| CliError::Config(format!("{}:{e}", path.display())))
}

pub fn read_ontology(path: &Path) -> Result<Ontology, CliError> {
    let graph = read_graph(path)?;
    let (o, _) = ontology_from_graph(&graph).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok(o)
}

/// The refined ontology when the run has one, otherwise the built one.
pub fn run_ontology_path(dir: &Path) -> Result<PathBuf, CliError> {
    [rundir::REFINED, rundir::ONTOLOGY]
        .iter()
        .map(|name| dir.join(name))
        .find(|p| p.is_file())
        .ok_or_else(|| CliError::Config(format!("no ontology in {}", dir.display())))
}
