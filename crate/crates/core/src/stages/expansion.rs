use serde::{Deserialize, Serialize};

use super::{error_issues, ontology_call, render_descriptions, OntologyStageOptions, Rejection, StageError};
use crate::agent::{Gateway, Stage, TemplateSet};
use crate::corpus::{sample_products, Corpus, CorpusError, ProductRecord, SamplingStrategy};
use crate::ontology::{ontology_merge, ontology_to_graph, MergeReport, Ontology, OntologyIssue};
use crate::rdf::serialize_turtle;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionConfig {
    pub batch_size: usize,
    pub sample_budget: usize,
    /// Consecutive low-yield iterations required to stop. Zero disables
    /// plateau stopping.
    pub plateau_window: usize,
    /// An iteration is low-yield when it adds fewer than this many classes
    /// and properties combined.
    pub plateau_threshold: usize,
    pub seed: u64,
    pub sampling: SamplingStrategy,
}

impl Default for ExpansionConfig {
    fn default() -> Self {
        ExpansionConfig {
            batch_size: 5,
            sample_budget: 30,
            plateau_window: 2,
            plateau_threshold: 2,
            seed: 42,
            sampling: SamplingStrategy::Uniform,
        }
    }
}

impl ExpansionConfig {
    pub fn validate(&self) -> Result<(), StageError> {
        if self.batch_size == 0 {
            return Err(StageError::Config("batch_size must be at least 1".into()));
        }
        if self.sample_budget < self.batch_size {
            return Err(StageError::Config("sample_budget must be at least batch_size".into()));
        }
        Ok(())
    }

    /// Upper bound on the number of iterations.
    pub fn max_iterations(&self) -> usize {
        self.sample_budget.div_ceil(self.batch_size.max(1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionIteration {
    pub iteration: usize,
    pub batch_ids: Vec<String>,
    pub new_classes: usize,
    pub new_properties: usize,
    pub merge_report: MergeReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Plateau,
    BudgetExhausted,
    CategoryExhausted,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StopReason::Plateau => "plateau",
            StopReason::BudgetExhausted => "sample budget exhausted",
            StopReason::CategoryExhausted => "category exhausted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionTrace {
    pub iterations: Vec<ExpansionIteration>,
    pub stop_reason: StopReason,
}

impl ExpansionTrace {
    /// Elements added per iteration, failed iterations included as zero.
    pub fn yields(&self) -> Vec<usize> {
        self.iterations.iter().map(|i| i.new_classes + i.new_properties).collect()
    }
}

/// True when each of the last `window` yields is below `threshold`.
pub fn plateau_reached(yields: &[usize], window: usize, threshold: usize) -> bool {
    window > 0 && yields.len() >= window && yields[yields.len() - window..].iter().all(|&y| y < threshold)
}

/// Asks the agent for an initial ontology from a batch of descriptions.
pub fn bootstrap_ontology(
    batch: &[ProductRecord],
    gw: &Gateway,
    templates: &TemplateSet,
    opts: &OntologyStageOptions,
) -> Result<(Ontology, Vec<OntologyIssue>), StageError> {
    if batch.is_empty() {
        return Err(StageError::EmptyBatch);
    }
    let prompt = templates.render(
        Stage::Bootstrap,
        &[
            ("category", &opts.category),
            ("namespace", opts.namespace.as_str()),
            ("descriptions", &render_descriptions(batch)),
        ],
    )?;
    let mut empty = false;
    let result = ontology_call(gw, gw.request(Stage::Bootstrap, prompt), opts.max_attempts, |reply| {
        if let Some(errors) = error_issues(&reply.issues) {
            return Err(Rejection::Structure(errors));
        }
        if reply.ontology.classes.is_empty() {
            empty = true;
            return Err(Rejection::Structure("the ontology declares no classes".into()));
        }
        empty = false;
        let mut ontology = reply.ontology;
        ontology.namespace = opts.namespace.clone();
        Ok((ontology, reply.issues))
    });
    match result {
        Err(StageError::InvalidOntology { .. }) if empty => Err(StageError::EmptyOntology),
        other => other,
    }
}

/// One expansion step: the agent sees the current ontology and a new batch,
/// and whatever it returns is merged in without touching existing elements.
pub fn expand_once(
    current: &Ontology,
    batch: &[ProductRecord],
    gw: &Gateway,
    templates: &TemplateSet,
    opts: &OntologyStageOptions,
) -> Result<(Ontology, MergeReport), StageError> {
    if batch.is_empty() {
        return Err(StageError::EmptyBatch);
    }
    let prompt = templates.render(
        Stage::Expand,
        &[
            ("category", &opts.category),
            ("namespace", opts.namespace.as_str()),
            ("ontology", serialize_turtle(&ontology_to_graph(current)).trim_end()),
            ("descriptions", &render_descriptions(batch)),
        ],
    )?;
    let baseline = error_issues(&crate::ontology::validate_ontology(current));
    ontology_call(gw, gw.request(Stage::Expand, prompt), opts.max_attempts, |reply| {
        let (merged, report) = ontology_merge(current, &reply.ontology);
        let errors = error_issues(&crate::ontology::validate_ontology(&merged));
        if errors.is_some() && errors != baseline {
            return Err(Rejection::Structure(errors.unwrap_or_default()));
        }
        Ok((merged, report))
    })
}

/// Bootstrap followed by expansion over fresh seeded batches until the
/// sample budget is spent or the yield plateaus.
pub fn expansion_loop(
    c: &Corpus,
    cfg: &ExpansionConfig,
    gw: &Gateway,
    templates: &TemplateSet,
    opts: &OntologyStageOptions,
) -> Result<(Ontology, ExpansionTrace), StageError> {
    cfg.validate()?;
    if c.category_len(&opts.category) == 0 {
        return Err(CorpusError::UnknownCategory(opts.category.clone()).into());
    }
    let sample = sample_products(c, &opts.category, cfg.sample_budget, cfg.seed)?;
    let batches: Vec<&[ProductRecord]> = sample.chunks(cfg.batch_size).collect();

    let (first, rest) = batches.split_first().expect("category is non-empty");
    let (boot, _) = bootstrap_ontology(first, gw, templates, opts)?;
    let (mut ontology, report) = ontology_merge(&Ontology::new(opts.namespace.clone()), &boot);
    let mut iterations = vec![iteration(1, first, report, None)];
    let mut yields = vec![iterations[0].new_classes + iterations[0].new_properties];
    tracing::info!(iteration = 1, added = yields[0], "bootstrap complete");

    let mut stop_reason = None;
    if plateau_reached(&yields, cfg.plateau_window, cfg.plateau_threshold) {
        stop_reason = Some(StopReason::Plateau);
    }
    for (i, batch) in rest.iter().enumerate() {
        if stop_reason.is_some() {
            break;
        }
        let n = i + 2;
        match expand_once(&ontology, batch, gw, templates, opts) {
            Ok((next, report)) => {
                let it = iteration(n, batch, report, None);
                yields.push(it.new_classes + it.new_properties);
                tracing::info!(iteration = n, added = it.new_classes + it.new_properties, "expansion step");
                iterations.push(it);
                ontology = next;
                if plateau_reached(&yields, cfg.plateau_window, cfg.plateau_threshold) {
                    stop_reason = Some(StopReason::Plateau);
                }
            }
            Err(e) => {
                tracing::warn!(iteration = n, error = %e, "expansion step failed; keeping current ontology");
                iterations.push(iteration(n, batch, MergeReport::default(), Some(e.to_string())));
            }
        }
    }
    let stop_reason = stop_reason.unwrap_or(if sample.len() < cfg.sample_budget {
        StopReason::CategoryExhausted
    } else {
        StopReason::BudgetExhausted
    });
    Ok((ontology, ExpansionTrace { iterations, stop_reason }))
}

fn iteration(n: usize, batch: &[ProductRecord], report: MergeReport, error: Option<String>) -> ExpansionIteration {
    ExpansionIteration {
        iteration: n,
        batch_ids: batch.iter().map(|p| p.id.clone()).collect(),
        new_classes: report.added_classes.len(),
        new_properties: report.added_properties.len(),
        merge_report: report,
        error,
    }
}
