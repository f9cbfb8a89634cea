//! The three pipeline stages: ontology creation with iterative expansion,
//! zero-shot refinement, and per-product graph population.

mod conformance;
mod expansion;
pub mod extract;
mod population;
mod refine;

use thiserror::Error;

use crate::agent::{AgentRequest, Gateway, GatewayError, TemplateError};
use crate::corpus::{CorpusError, ProductRecord};
use crate::ontology::{ontology_from_graph, Ontology, OntologyIssue, Severity};
use crate::rdf::{parse_turtle, Graph, Iri};

pub use conformance::{subject_types, validate_triples, ConformanceCode, ConformanceIssue, ConformanceMode};
pub use expansion::{
    bootstrap_ontology, expand_once, expansion_loop, plateau_reached, ExpansionConfig, ExpansionIteration,
    ExpansionTrace, StopReason,
};
pub use population::{
    mint_subject_iri, populate_corpus, populate_product, FailureCause, PopulationConfig, PopulationContext,
    PopulationOutcome, PopulationResult,
};
pub use refine::{parse_mapping, refine_ontology, RefineOptions, RefinementReport};

#[derive(Debug, Error)]
pub enum StageError {
    #[error("agent output was not valid RDF after {attempts} attempt(s): {last_error}")]
    InvalidRdf { attempts: u32, last_error: String },
    #[error("agent ontology was inconsistent after {attempts} attempt(s): {last_error}")]
    InvalidOntology { attempts: u32, last_error: String },
    #[error("agent returned an ontology without classes")]
    EmptyOntology,
    #[error("batch of product descriptions is empty")]
    EmptyBatch,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Agent(#[from] GatewayError),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

/// Settings shared by the ontology-producing stages.
#[derive(Debug, Clone, PartialEq)]
pub struct OntologyStageOptions {
    /// Namespace new schema terms are minted in.
    pub namespace: Iri,
    pub category: String,
    pub max_attempts: u32,
}

pub(crate) fn render_descriptions(batch: &[ProductRecord]) -> String {
    batch.iter().map(|p| format!("Product {}:\n{}\n", p.id, p.description.trim())).collect::<Vec<_>>().join("\n")
}

pub(crate) fn feedback(error: &str) -> String {
    format!("\n\nYour previous response was rejected: {error}\nReturn the corrected output in the required format.")
}

/// Why an ontology-producing attempt was refused.
pub(crate) enum Rejection {
    Syntax(String),
    Structure(String),
}

/// Parsed agent output: the graph plus the ontology lifted from it.
pub(crate) struct OntologyReply {
    pub graph: Graph,
    pub ontology: Ontology,
    pub issues: Vec<OntologyIssue>,
    pub text: String,
}

pub(crate) fn error_issues(issues: &[OntologyIssue]) -> Option<String> {
    let errors: Vec<String> = issues
        .iter()
        .filter(|i| i.severity == Severity::Error)
        .map(|i| format!("{} {:?}: {}", i.subject, i.code, i.message))
        .collect();
    (!errors.is_empty()).then(|| errors.join("; "))
}

/// Invokes the agent until `accept` takes a parsed ontology, feeding the
/// latest rejection back into the prompt.
pub(crate) fn ontology_call<T>(
    gw: &Gateway,
    base: AgentRequest,
    max_attempts: u32,
    mut accept: impl FnMut(OntologyReply) -> Result<T, Rejection>,
) -> Result<T, StageError> {
    let attempts = max_attempts.max(1);
    let mut last = Rejection::Syntax(String::new());
    for attempt in 1..=attempts {
        let req = match &last {
            _ if attempt == 1 => base.clone(),
            Rejection::Syntax(e) | Rejection::Structure(e) => base.with_appended(&feedback(e)),
        };
        let text = gw.invoke(&req)?.text;
        let graph = match parse_turtle(extract::extract_turtle(&text)) {
            Ok(g) => g,
            Err(e) => {
                tracing::warn!(attempt, error = %e, "agent returned invalid Turtle");
                last = Rejection::Syntax(e.to_string());
                continue;
            }
        };
        let (ontology, issues) = match ontology_from_graph(&graph) {
            Ok(v) => v,
            Err(e) => {
                last = Rejection::Structure(e.to_string());
                continue;
            }
        };
        match accept(OntologyReply { graph, ontology, issues, text }) {
            Ok(v) => return Ok(v),
            Err(r) => last = r,
        }
    }
    Err(match last {
        Rejection::Syntax(last_error) => StageError::InvalidRdf { attempts, last_error },
        Rejection::Structure(last_error) => StageError::InvalidOntology { attempts, last_error },
    })
}
