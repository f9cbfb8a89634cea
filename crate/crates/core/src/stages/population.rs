use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{extract, feedback, validate_triples, ConformanceIssue, ConformanceMode, StageError};
use crate::agent::{Gateway, GatewayError, Stage, TemplateSet};
use crate::corpus::{Corpus, ProductRecord};
use crate::ontology::{ontology_to_graph, Ontology, Severity};
use crate::rdf::{parse_turtle, serialize_turtle, vocab, BlankNode, Graph, Iri, Subject, Term, Triple};

/// Base IRI for minted product subjects when none is configured.
pub const DEFAULT_PRODUCT_BASE: &str = "http://example.org/product/";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationConfig {
    pub max_attempts: u32,
    pub mode: ConformanceMode,
    pub max_inflight: usize,
    pub product_base: Iri,
}

impl Default for PopulationConfig {
    fn default() -> Self {
        PopulationConfig {
            max_attempts: 3,
            mode: ConformanceMode::Lenient,
            max_inflight: 4,
            product_base: Iri::new(DEFAULT_PRODUCT_BASE).expect("valid default base"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureCause {
    InvalidRdf,
    AgentError,
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PopulationOutcome {
    Success {
        triples: Vec<Triple>,
        conformance: Vec<ConformanceIssue>,
        /// Triples removed in strict mode because they carried an error.
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        dropped: Vec<Triple>,
        attempts: u32,
    },
    Failure {
        attempts: u32,
        cause: FailureCause,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PopulationResult {
    pub product_id: String,
    pub subject: Iri,
    #[serde(flatten)]
    pub outcome: PopulationOutcome,
}

impl PopulationResult {
    pub fn is_success(&self) -> bool {
        matches!(self.outcome, PopulationOutcome::Success { .. })
    }

    /// Kept triples; empty for failures.
    pub fn triples(&self) -> &[Triple] {
        match &self.outcome {
            PopulationOutcome::Success { triples, .. } => triples,
            PopulationOutcome::Failure { .. } => &[],
        }
    }
}

/// Everything population needs that stays fixed across products.
pub struct PopulationContext<'a> {
    ontology: &'a Ontology,
    ontology_text: String,
    templates: &'a TemplateSet,
    config: PopulationConfig,
}

impl<'a> PopulationContext<'a> {
    pub fn new(
        ontology: &'a Ontology,
        templates: &'a TemplateSet,
        config: PopulationConfig,
    ) -> Result<Self, StageError> {
        if config.max_attempts == 0 {
            return Err(StageError::Config("max_attempts must be at least 1".into()));
        }
        if config.max_inflight == 0 {
            return Err(StageError::Config("max_inflight must be at least 1".into()));
        }
        let ontology_text = serialize_turtle(&ontology_to_graph(ontology)).trim_end().to_string();
        Ok(PopulationContext { ontology, ontology_text, templates, config })
    }

    pub fn config(&self) -> &PopulationConfig {
        &self.config
    }
}

fn slug(id: &str) -> String {
    let mut out = String::new();
    for ch in id.chars() {
        if ch.is_ascii_alphanumeric() {
            out.push(ch.to_ascii_lowercase());
        } else if !out.is_empty() && !out.ends_with('-') {
            out.push('-');
        }
    }
    out.trim_end_matches('-').to_string()
}

/// Stable subject IRI for a product: the base followed by a slug of the id.
/// Products whose id has no ASCII letters or digits are named after a hash
/// of their description instead.
pub fn mint_subject_iri(p: &ProductRecord, base: &Iri) -> Iri {
    let mut name = slug(&p.id);
    if name.is_empty() {
        name = hex::encode(&Sha256::digest(p.description.as_bytes())[..8]);
    }
    let sep = if base.as_str().ends_with(['/', '#']) { "" } else { "/" };
    Iri::new(format!("{}{sep}{name}", base.as_str())).expect("slug keeps the IRI valid")
}

/// Runs one product through the agent, retrying on unparseable output.
pub fn populate_product(p: &ProductRecord, ctx: &PopulationContext<'_>, gw: &Gateway) -> PopulationResult {
    let subject = mint_subject_iri(p, &ctx.config.product_base);
    let done = |outcome| PopulationResult { product_id: p.id.clone(), subject: subject.clone(), outcome };
    let prompt = match ctx.templates.render(
        Stage::Populate,
        &[
            ("ontology", &ctx.ontology_text),
            ("product_id", &p.id),
            ("subject_iri", subject.as_str()),
            ("description", p.description.trim()),
        ],
    ) {
        Ok(prompt) => prompt,
        Err(e) => {
            return done(PopulationOutcome::Failure {
                attempts: 0,
                cause: FailureCause::AgentError,
                message: e.to_string(),
            })
        }
    };
    let base = gw.request(Stage::Populate, prompt);
    let blank_prefix = slug(subject.local_name()).replace('-', "_");
    let mut last_error = String::new();
    for attempt in 1..=ctx.config.max_attempts {
        let req = if attempt == 1 { base.clone() } else { base.with_appended(&feedback(&last_error)) };
        let text = match gw.invoke(&req) {
            Ok(resp) => resp.text,
            Err(e) => {
                let cause = match e {
                    GatewayError::Timeout { .. } => FailureCause::Timeout,
                    _ => FailureCause::AgentError,
                };
                return done(PopulationOutcome::Failure { attempts: attempt, cause, message: e.to_string() });
            }
        };
        let graph = match parse_turtle(extract::extract_turtle(&text)) {
            Ok(g) => g,
            Err(e) => {
                tracing::debug!(product = %p.id, attempt, error = %e, "unparseable population output");
                last_error = e.to_string();
                continue;
            }
        };
        let root = Subject::Iri(subject.clone());
        if !graph.is_empty() && !graph.iter().any(|t| t.subject == root) {
            last_error = format!("no triple describes the subject <{}>", subject.as_str());
            continue;
        }
        let triples: Vec<Triple> = graph.iter().map(|t| relabel(t, &blank_prefix)).collect();
        let conformance = validate_triples(&triples, ctx.ontology, ctx.config.mode);
        let (kept, dropped) = match ctx.config.mode {
            ConformanceMode::Lenient => (triples, Vec::new()),
            ConformanceMode::Strict => {
                let bad: Vec<&Triple> =
                    conformance.iter().filter(|i| i.severity == Severity::Error).map(|i| &i.triple).collect();
                triples.into_iter().partition(|t| !bad.contains(&t))
            }
        };
        for t in &dropped {
            tracing::info!(product = %p.id, triple = %t, "dropped non-conforming triple");
        }
        return done(PopulationOutcome::Success { triples: kept, conformance, dropped, attempts: attempt });
    }
    done(PopulationOutcome::Failure {
        attempts: ctx.config.max_attempts,
        cause: FailureCause::InvalidRdf,
        message: last_error,
    })
}

/// Blank node labels are only unique within one response, so each product
/// gets its own label space.
fn relabel(t: &Triple, prefix: &str) -> Triple {
    let fresh = |b: &BlankNode| BlankNode::new(format!("{prefix}_{}", b.label())).expect("label stays valid");
    let subject = match &t.subject {
        Subject::Blank(b) => Subject::Blank(fresh(b)),
        s => s.clone(),
    };
    let object = match &t.object {
        Term::Blank(b) => Term::Blank(fresh(b)),
        o => o.clone(),
    };
    Triple { subject, predicate: t.predicate.clone(), object }
}

/// Populates every product in corpus order and unions the successful
/// triples into one graph. Up to `max_inflight` products run at once.
pub fn populate_corpus(c: &Corpus, ctx: &PopulationContext<'_>, gw: &Gateway) -> (Graph, Vec<PopulationResult>) {
    let records = c.records();
    let slots: Vec<Mutex<Option<PopulationResult>>> = records.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = ctx.config.max_inflight.min(records.len());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(p) = records.get(i) else { break };
                let result = populate_product(p, ctx, gw);
                *slots[i].lock().expect("slot lock") = Some(result);
            });
        }
    });
    let results: Vec<PopulationResult> =
        slots.into_iter().map(|s| s.into_inner().expect("slot lock").expect("every product processed")).collect();

    let mut graph = Graph::new();
    for r in &results {
        for t in r.triples() {
            graph.insert(t.clone());
        }
    }
    if !graph.is_empty() {
        graph.set_prefix("ex", ctx.ontology.namespace.clone());
        graph.set_prefix("prod", ctx.config.product_base.clone());
        for (label, ns) in vocab::standard_prefixes() {
            graph.set_prefix(label, Iri::new(ns).expect("standard namespace"));
        }
    }
    (graph, results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::test_support::small;
    use crate::stages::test_support::{queued, turtle};
    use crate::stages::ConformanceCode;

    fn product(id: &str) -> ProductRecord {
        ProductRecord {
            id: id.into(),
            category: "air conditioners".into(),
            description: "Acme split unit, 9000 BTU, SEER 18.5.".into(),
            source: None,
        }
    }

    fn base() -> Iri {
        Iri::new("http://example.org/product/").unwrap()
    }

    #[test]
    fn slug_rules() {
        assert_eq!(mint_subject_iri(&product("AC-123"), &base()).as_str(), "http://example.org/product/ac-123");
        assert_eq!(
            mint_subject_iri(&product("  Split Unit #7 "), &base()).as_str(),
            "http://example.org/product/split-unit-7"
        );
        let no_slash = Iri::new("http://example.org/p").unwrap();
        assert_eq!(mint_subject_iri(&product("x"), &no_slash).as_str(), "http://example.org/p/x");
    }

    #[test]
    fn empty_slug_uses_description_hash() {
        let p = ProductRecord { id: "##".into(), ..product("") };
        let full = hex::encode(Sha256::digest(p.description.as_bytes()));
        assert_eq!(&full[..16], mint_subject_iri(&p, &base()).local_name());
    }

    fn ctx_for<'a>(o: &'a Ontology, t: &'a TemplateSet, attempts: u32, mode: ConformanceMode) -> PopulationContext<'a> {
        PopulationContext::new(o, t, PopulationConfig { max_attempts: attempts, mode, ..Default::default() }).unwrap()
    }

    const GOOD: &str = "@prefix p: <http://example.org/product/> .\n\
        p:ac-1 a ex:SplitAirConditioner ; ex:coolingCapacity 9000 ; ex:seer 18.5 ; ex:hasBrand p:ac-1-brand .\n\
        p:ac-1-brand a ex:Brand .";

    #[test]
    fn success_with_clean_conformance() {
        let o = small();
        let t = TemplateSet::builtin();
        let (gw, log) = queued(vec![&turtle(GOOD)]);
        let r = populate_product(&product("AC-1"), &ctx_for(&o, &t, 3, ConformanceMode::Lenient), &gw);
        match &r.outcome {
            PopulationOutcome::Success { triples, conformance, attempts, .. } => {
                assert_eq!((triples.len(), conformance.len(), *attempts), (5, 0, 1));
            }
            other => panic!("{other:?}"),
        }
        let prompt = log.lock().unwrap()[0].rendered_prompt().to_string();
        assert!(prompt.contains("Subject IRI: <http://example.org/product/ac-1>"));
        assert!(prompt.contains("Translate values into English"));
        assert!(prompt.contains("ex:seer a owl:DatatypeProperty"));
    }

    #[test]
    fn prose_fails_with_one_attempt() {
        let o = small();
        let t = TemplateSet::builtin();
        let (gw, _) = queued(vec!["I could not find any facts."]);
        let r = populate_product(&product("AC-1"), &ctx_for(&o, &t, 1, ConformanceMode::Lenient), &gw);
        assert!(matches!(r.outcome, PopulationOutcome::Failure { attempts: 1, cause: FailureCause::InvalidRdf, .. }));
        assert!(r.triples().is_empty());
    }

    #[test]
    fn retry_appends_parser_error() {
        let o = small();
        let t = TemplateSet::builtin();
        let (gw, log) = queued(vec!["ex:x ex:y", &turtle(GOOD)]);
        let r = populate_product(&product("AC-1"), &ctx_for(&o, &t, 3, ConformanceMode::Lenient), &gw);
        assert!(matches!(r.outcome, PopulationOutcome::Success { attempts: 2, .. }));
        assert!(log.lock().unwrap()[1].rendered_prompt().contains("line 1"));
    }

    #[test]
    fn unknown_predicate_lenient_vs_strict() {
        let body = format!("{GOOD}\np:ac-1 ex:colour \"white\" .");
        let o = small();
        let t = TemplateSet::builtin();
        let (gw, _) = queued(vec![&turtle(&body), &turtle(&body)]);
        let lenient = populate_product(&product("AC-1"), &ctx_for(&o, &t, 1, ConformanceMode::Lenient), &gw);
        let PopulationOutcome::Success { triples, conformance, .. } = &lenient.outcome else { panic!() };
        assert_eq!(triples.len(), 6);
        assert_eq!(conformance.len(), 1);
        assert_eq!(
            (conformance[0].code, conformance[0].severity),
            (ConformanceCode::UnknownPredicate, Severity::Warning)
        );

        let strict = populate_product(&product("AC-1"), &ctx_for(&o, &t, 1, ConformanceMode::Strict), &gw);
        let PopulationOutcome::Success { triples, dropped, .. } = &strict.outcome else { panic!() };
        assert_eq!((triples.len(), dropped.len()), (5, 1));
    }

    #[test]
    fn wrong_subject_is_retried() {
        let o = small();
        let t = TemplateSet::builtin();
        let other = "@prefix p: <http://example.org/product/> .\np:elsewhere a ex:Brand .";
        let (gw, _) = queued(vec![&turtle(other)]);
        let r = populate_product(&product("AC-1"), &ctx_for(&o, &t, 1, ConformanceMode::Lenient), &gw);
        let PopulationOutcome::Failure { message, .. } = &r.outcome else { panic!() };
        assert!(message.contains("ac-1"));
    }

    #[test]
    fn agent_errors_become_failures() {
        let o = small();
        let t = TemplateSet::builtin();
        let gw = Gateway::scripted(|_| Err(GatewayError::Timeout { after: std::time::Duration::from_secs(1) }));
        let r = populate_product(&product("AC-1"), &ctx_for(&o, &t, 3, ConformanceMode::Lenient), &gw);
        assert!(matches!(r.outcome, PopulationOutcome::Failure { attempts: 1, cause: FailureCause::Timeout, .. }));
    }

    #[test]
    fn corpus_order_and_isolation() {
        let o = small();
        let t = TemplateSet::builtin();
        let ids: Vec<String> = (0..12).map(|i| format!("AC-{i}")).collect();
        let c = Corpus::from_records(ids.iter().map(|id| product(id)).collect()).unwrap();
        let gw = Gateway::scripted(|req| {
            let prompt = req.rendered_prompt();
            let id = prompt.split("Product id: ").nth(1).unwrap().lines().next().unwrap().to_lowercase();
            if id.ends_with('3') {
                return Ok("no facts".into());
            }
            std::thread::sleep(std::time::Duration::from_millis((12 - id[3..].parse::<u64>().unwrap()) * 2));
            Ok(format!(
                "```turtle\n@prefix ex: <http://example.org/ac#> .\n<http://example.org/product/{id}> a ex:AirConditioner ; ex:coolingCapacity 9000 ; ex:hasBrand _:b .\n_:b a ex:Brand .\n```"
            ))
        });
        let ctx = ctx_for(&o, &t, 1, ConformanceMode::Lenient);
        let (graph, results) = populate_corpus(&c, &ctx, &gw);
        assert_eq!(results.iter().map(|r| r.product_id.clone()).collect::<Vec<_>>(), ids);
        assert_eq!(results.iter().filter(|r| !r.is_success()).count(), 1);
        let sum: usize = results.iter().map(|r| r.triples().len()).sum();
        assert_eq!(sum, 11 * 4);
        assert_eq!(graph.len(), sum);
        let failed = results.iter().find(|r| !r.is_success()).unwrap();
        assert!(graph.iter().all(|t| t.subject != Subject::Iri(failed.subject.clone())));
    }

    #[test]
    fn empty_corpus() {
        let o = small();
        let t = TemplateSet::builtin();
        let (gw, _) = queued(vec![]);
        let (graph, results) = populate_corpus(&Corpus::default(), &ctx_for(&o, &t, 1, ConformanceMode::Lenient), &gw);
        assert!(graph.is_empty() && results.is_empty() && graph.prefixes().is_empty());
    }

    #[test]
    fn results_round_trip_through_json() {
        let o = small();
        let t = TemplateSet::builtin();
        let (gw, _) = queued(vec![&turtle(GOOD)]);
        let r = populate_product(&product("AC-1"), &ctx_for(&o, &t, 1, ConformanceMode::Lenient), &gw);
        let json = serde_json::to_string_pretty(&r).unwrap();
        assert!(json.contains("\"status\": \"success\""));
        assert_eq!(serde_json::from_str::<PopulationResult>(&json).unwrap(), r);
    }
}
