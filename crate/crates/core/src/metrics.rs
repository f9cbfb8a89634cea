//! Run measurements: failure accounting, triple counts and property
//! coverage, with JSON and plain-text renderings.

use std::collections::BTreeSet;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::ontology::{ontology_stats, Ontology, OntologyStats, Severity};
use crate::rdf::{vocab, Graph, Iri};
use crate::stages::{PopulationOutcome, PopulationResult};

/// How many ontology properties occur as a predicate in a graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coverage {
    pub instantiated: usize,
    pub total: usize,
    pub ratio: f64,
    /// Set when the ontology has no properties, in which case `ratio` is 0.
    pub undefined: bool,
}

pub fn property_coverage(kg: &Graph, o: &Ontology) -> Coverage {
    let used: BTreeSet<&Iri> = kg.iter().map(|t| &t.predicate).filter(|p| p.as_str() != vocab::RDF_TYPE).collect();
    let instantiated = o.properties.keys().filter(|p| used.contains(p)).count();
    let total = o.properties.len();
    Coverage { instantiated, total, ratio: ratio(instantiated, total), undefined: total == 0 }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// `num / den` as a percentage with one decimal, rounded half-up using
/// integer arithmetic. Returns `"n/a"` when `den` is zero.
pub fn format_percent(num: usize, den: usize) -> String {
    if den == 0 {
        return "n/a".to_string();
    }
    let (num, den) = (num as u128, den as u128);
    let tenths = (2 * num * 1000 + den) / (2 * den);
    format!("{}.{}%", tenths / 10, tenths % 10)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub products_total: usize,
    pub products_succeeded: usize,
    pub products_failed: usize,
    pub failure_rate: f64,
    pub failure_rate_undefined: bool,
    pub triples_total: usize,
    pub properties_total: usize,
    pub properties_instantiated: usize,
    pub property_coverage: f64,
    pub property_coverage_undefined: bool,
    pub ontology_stats: OntologyStats,
    pub conformance_errors: usize,
    pub conformance_warnings: usize,
}

pub fn run_summary(results: &[PopulationResult], kg: &Graph, o: &Ontology) -> RunMetrics {
    let total = results.len();
    let succeeded = results.iter().filter(|r| r.is_success()).count();
    let failed = total - succeeded;
    let (mut errors, mut warnings) = (0, 0);
    for r in results {
        if let PopulationOutcome::Success { conformance, .. } = &r.outcome {
            for issue in conformance {
                match issue.severity {
                    Severity::Error => errors += 1,
                    Severity::Warning => warnings += 1,
                }
            }
        }
    }
    let coverage = property_coverage(kg, o);
    RunMetrics {
        products_total: total,
        products_succeeded: succeeded,
        products_failed: failed,
        failure_rate: ratio(failed, total),
        failure_rate_undefined: total == 0,
        triples_total: kg.len(),
        properties_total: coverage.total,
        properties_instantiated: coverage.instantiated,
        property_coverage: coverage.ratio,
        property_coverage_undefined: coverage.undefined,
        ontology_stats: ontology_stats(o),
        conformance_errors: errors,
        conformance_warnings: warnings,
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown report format {other:?} (expected text or json)")),
        }
    }
}

/// Renders metrics. JSON keys are sorted; both forms end with a newline.
pub fn render_report(m: &RunMetrics, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let value = serde_json::to_value(m).expect("metrics serialize");
            let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
            out.push('\n');
            out
        }
        ReportFormat::Text => {
            let s = &m.ontology_stats;
            let mut out = String::new();
            let _ = writeln!(
                out,
                "products: {}/{} succeeded, {} failed (failure rate: {})",
                m.products_succeeded,
                m.products_total,
                m.products_failed,
                format_percent(m.products_failed, m.products_total)
            );
            let _ = writeln!(out, "triples: {}", m.triples_total);
            let _ = writeln!(
                out,
                "coverage: {} ({}/{} properties instantiated)",
                format_percent(m.properties_instantiated, m.properties_total),
                m.properties_instantiated,
                m.properties_total
            );
            let _ = writeln!(
                out,
                "ontology: {} classes, {} properties ({} datatype, {} object)",
                s.classes, s.properties, s.datatype_properties, s.object_properties
            );
            let _ = writeln!(out, "conformance: {} errors, {} warnings", m.conformance_errors, m.conformance_warnings);
            out
        }
    }
}
