use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::tokens::{jaccard, token_set};
use super::{Ontology, PropertyKind};
use crate::rdf::{vocab, Iri};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IssueCode {
    MissingDomain,
    MissingRange,
    MissingComment,
    DanglingReference,
    SubclassCycle,
    DuplicateLabel,
    NearDuplicateProperty,
}

impl IssueCode {
    pub fn severity(self) -> Severity {
        match self {
            IssueCode::DanglingReference | IssueCode::SubclassCycle => Severity::Error,
            _ => Severity::Warning,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OntologyIssue {
    pub severity: Severity,
    pub subject: Iri,
    pub code: IssueCode,
    pub message: String,
}

impl OntologyIssue {
    fn new(subject: &Iri, code: IssueCode, message: String) -> Self {
        OntologyIssue { severity: code.severity(), subject: subject.clone(), code, message }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationConfig {
    /// Token-set Jaccard similarity at which two property names count as
    /// near duplicates.
    pub near_duplicate_threshold: f64,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        ValidationConfig { near_duplicate_threshold: 0.8 }
    }
}

pub fn validate_ontology(o: &Ontology) -> Vec<OntologyIssue> {
    validate_ontology_with(o, &ValidationConfig::default())
}

/// Mechanical quality checks. The result is sorted by severity, then subject,
/// so it does not depend on how the ontology was assembled.
pub fn validate_ontology_with(o: &Ontology, cfg: &ValidationConfig) -> Vec<OntologyIssue> {
    let mut issues = Vec::new();

    if let Some(cycle) = o.find_subclass_cycle() {
        let path: Vec<&str> = cycle.iter().map(Iri::as_str).collect();
        issues.push(OntologyIssue::new(
            &cycle[0],
            IssueCode::SubclassCycle,
            format!("subclass cycle: {}", path.join(" -> ")),
        ));
    }

    let known_class = |iri: &Iri| o.classes.contains_key(iri) || vocab::is_builtin(iri.as_str());

    for class in o.classes.values() {
        if is_blank(class.comment.as_deref()) {
            issues.push(OntologyIssue::new(&class.iri, IssueCode::MissingComment, "class has no rdfs:comment".into()));
        }
        for parent in &class.parents {
            if !known_class(parent) {
                issues.push(OntologyIssue::new(
                    &class.iri,
                    IssueCode::DanglingReference,
                    format!("parent {parent} is not a declared class"),
                ));
            }
        }
    }

    for p in o.properties.values() {
        match &p.domain {
            None => {
                issues.push(OntologyIssue::new(&p.iri, IssueCode::MissingDomain, "property has no rdfs:domain".into()))
            }
            Some(d) if !known_class(d) => issues.push(OntologyIssue::new(
                &p.iri,
                IssueCode::DanglingReference,
                format!("domain {d} is not a declared class"),
            )),
            Some(_) => {}
        }
        match (&p.range, p.kind) {
            (None, _) => {
                issues.push(OntologyIssue::new(&p.iri, IssueCode::MissingRange, "property has no rdfs:range".into()))
            }
            (Some(r), PropertyKind::Datatype) if !(vocab::is_xsd(r.as_str()) || r.as_str() == vocab::RDFS_LITERAL) => {
                issues.push(OntologyIssue::new(
                    &p.iri,
                    IssueCode::DanglingReference,
                    format!("datatype property range {r} is not an xsd datatype"),
                ))
            }
            (Some(r), PropertyKind::Object) if !known_class(r) => issues.push(OntologyIssue::new(
                &p.iri,
                IssueCode::DanglingReference,
                format!("range {r} is not a declared class"),
            )),
            _ => {}
        }
        if is_blank(p.comment.as_deref()) {
            issues.push(OntologyIssue::new(&p.iri, IssueCode::MissingComment, "property has no rdfs:comment".into()));
        }
    }

    let mut labels: BTreeMap<String, Vec<&Iri>> = BTreeMap::new();
    let labeled = o
        .classes
        .values()
        .map(|c| (&c.iri, c.label.as_deref()))
        .chain(o.properties.values().map(|p| (&p.iri, p.label.as_deref())));
    for (iri, label) in labeled {
        if let Some(label) = label.filter(|l| !l.trim().is_empty()) {
            labels.entry(label.trim().to_lowercase()).or_default().push(iri);
        }
    }
    for (label, mut iris) in labels {
        iris.sort();
        for dup in iris.iter().skip(1) {
            issues.push(OntologyIssue::new(
                dup,
                IssueCode::DuplicateLabel,
                format!("label {label:?} is also used by {}", iris[0]),
            ));
        }
    }

    let names: Vec<(&Iri, _)> = o.properties.keys().map(|iri| (iri, token_set(iri.local_name()))).collect();
    for (i, (a, ta)) in names.iter().enumerate() {
        for (b, tb) in &names[i + 1..] {
            let sim = jaccard(ta, tb);
            if sim >= cfg.near_duplicate_threshold {
                issues.push(OntologyIssue::new(
                    b,
                    IssueCode::NearDuplicateProperty,
                    format!("name overlaps {a} (token similarity {sim:.2})"),
                ));
            }
        }
    }

    issues.sort();
    issues
}

fn is_blank(text: Option<&str>) -> bool {
    text.is_none_or(|t| t.trim().is_empty())
}
