use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::ontology::{Ontology, PropertyKind, Severity};
use crate::rdf::{vocab, Iri, Subject, Term, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConformanceCode {
    UnknownPredicate,
    DomainViolation,
    RangeViolation,
    DatatypeMismatch,
    UntypedSubject,
}

/// Lenient keeps offending triples and reports warnings; strict reports
/// errors, which population then drops.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConformanceMode {
    #[default]
    Lenient,
    Strict,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConformanceIssue {
    pub triple: Triple,
    pub code: ConformanceCode,
    pub severity: Severity,
}

/// The `rdf:type` objects asserted for each subject within `ts`.
pub fn subject_types(ts: &[Triple]) -> BTreeMap<Subject, BTreeSet<Iri>> {
    let mut types: BTreeMap<Subject, BTreeSet<Iri>> = BTreeMap::new();
    for t in ts {
        if t.predicate.as_str() == vocab::RDF_TYPE {
            if let Term::Iri(class) = &t.object {
                types.entry(t.subject.clone()).or_default().insert(class.clone());
            }
        }
    }
    types
}

/// Checks instance triples against the ontology's declared predicates,
/// domains and ranges. Issues come back in input order.
pub fn validate_triples(ts: &[Triple], o: &Ontology, mode: ConformanceMode) -> Vec<ConformanceIssue> {
    let types = subject_types(ts);
    let strictness = match mode {
        ConformanceMode::Lenient => Severity::Warning,
        ConformanceMode::Strict => Severity::Error,
    };
    let mut reported_untyped = BTreeSet::new();
    let mut issues = Vec::new();
    let mut push = |t: &Triple, code, severity| issues.push(ConformanceIssue { triple: t.clone(), code, severity });

    for t in ts {
        if t.predicate.as_str() == vocab::RDF_TYPE {
            continue;
        }
        let subject_classes = types.get(&t.subject);
        if subject_classes.is_none() && reported_untyped.insert(t.subject.clone()) {
            push(t, ConformanceCode::UntypedSubject, Severity::Warning);
        }
        let Some(prop) = o.properties.get(&t.predicate) else {
            push(t, ConformanceCode::UnknownPredicate, strictness);
            continue;
        };
        if let (Some(domain), Some(classes)) = (&prop.domain, subject_classes) {
            if !classes.iter().any(|c| class_satisfies(o, c, domain)) {
                push(t, ConformanceCode::DomainViolation, strictness);
            }
        }
        match prop.kind {
            PropertyKind::Object => {
                let Some(object) = t.object.as_subject() else {
                    push(t, ConformanceCode::RangeViolation, strictness);
                    continue;
                };
                if let (Some(range), Some(classes)) = (&prop.range, types.get(&object)) {
                    if !classes.iter().any(|c| class_satisfies(o, c, range)) {
                        push(t, ConformanceCode::RangeViolation, strictness);
                    }
                }
            }
            PropertyKind::Datatype => {
                let Some(literal) = t.object.as_literal() else {
                    push(t, ConformanceCode::RangeViolation, strictness);
                    continue;
                };
                if let Some(range) = &prop.range {
                    if !datatype_satisfies(literal.datatype().as_str(), range.as_str()) {
                        push(t, ConformanceCode::DatatypeMismatch, strictness);
                    }
                }
            }
        }
    }
    issues
}

fn class_satisfies(o: &Ontology, class: &Iri, required: &Iri) -> bool {
    matches!(required.as_str(), vocab::OWL_THING | vocab::RDFS_RESOURCE) || o.is_subclass_of(class, required)
}

fn datatype_satisfies(actual: &str, range: &str) -> bool {
    actual == range
        || range == vocab::RDFS_LITERAL
        || (actual == vocab::XSD_INTEGER && range == vocab::XSD_DECIMAL)
        || (actual == vocab::RDF_LANG_STRING && range == vocab::XSD_STRING)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::test_support::{iri, small};
    use crate::rdf::{parse_turtle, Literal};

    fn triples(body: &str) -> Vec<Triple> {
        let doc = format!(
            "@prefix ex: <http://example.org/ac#> .\n@prefix p: <http://example.org/product/> .\n\
             @prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n{body}"
        );
        parse_turtle(&doc).unwrap().iter().cloned().collect()
    }

    fn codes(issues: &[ConformanceIssue]) -> Vec<ConformanceCode> {
        issues.iter().map(|i| i.code).collect()
    }

    #[test]
    fn conforming_triples_are_clean() {
        let ts = triples("p:x a ex:AirConditioner ; ex:coolingCapacity 9000 .");
        assert!(validate_triples(&ts, &small(), ConformanceMode::Strict).is_empty());
    }

    #[test]
    fn datatype_property_with_iri_object() {
        let ts = triples("p:x a ex:AirConditioner ; ex:coolingCapacity p:y .");
        assert_eq!(
            codes(&validate_triples(&ts, &small(), ConformanceMode::Lenient)),
            [ConformanceCode::RangeViolation]
        );
    }

    #[test]
    fn domain_uses_subclass_closure() {
        // hasBrand has domain Product; SplitAirConditioner is two levels down.
        let ts = triples("p:x a ex:SplitAirConditioner ; ex:hasBrand p:b .\np:b a ex:Brand .");
        assert!(validate_triples(&ts, &small(), ConformanceMode::Strict).is_empty());
        let ts = triples("p:x a ex:Brand ; ex:coolingCapacity 9000 .");
        assert_eq!(
            codes(&validate_triples(&ts, &small(), ConformanceMode::Strict)),
            [ConformanceCode::DomainViolation]
        );
    }

    #[test]
    fn unknown_predicate_severity_follows_mode() {
        let ts = triples("p:x a ex:AirConditioner ; ex:colour \"white\" .");
        let lenient = validate_triples(&ts, &small(), ConformanceMode::Lenient);
        assert_eq!(codes(&lenient), [ConformanceCode::UnknownPredicate]);
        assert_eq!(lenient[0].severity, Severity::Warning);
        let strict = validate_triples(&ts, &small(), ConformanceMode::Strict);
        assert_eq!(strict[0].severity, Severity::Error);
    }

    #[test]
    fn datatype_mismatch_and_promotion() {
        let ts = triples("p:x a ex:AirConditioner ; ex:seer 18 ; ex:coolingCapacity \"9000\" .");
        let issues = validate_triples(&ts, &small(), ConformanceMode::Lenient);
        assert_eq!(codes(&issues), [ConformanceCode::DatatypeMismatch]);
        assert_eq!(issues[0].triple.predicate, iri("coolingCapacity"));
    }

    #[test]
    fn object_range_checked_only_for_typed_objects() {
        let ts = triples("p:x a ex:AirConditioner ; ex:hasBrand p:b .");
        assert!(validate_triples(&ts, &small(), ConformanceMode::Strict).is_empty());
        let ts = triples("p:x a ex:AirConditioner ; ex:hasBrand p:b .\np:b a ex:Product .");
        assert_eq!(codes(&validate_triples(&ts, &small(), ConformanceMode::Strict)), [ConformanceCode::RangeViolation]);
        let ts = triples("p:x a ex:AirConditioner ; ex:hasBrand \"Acme\" .");
        assert_eq!(codes(&validate_triples(&ts, &small(), ConformanceMode::Strict)), [ConformanceCode::RangeViolation]);
    }

    #[test]
    fn untyped_subject_is_always_a_warning_reported_once() {
        let ts = triples("p:x ex:coolingCapacity 9000 ; ex:seer 18.5 .");
        let issues = validate_triples(&ts, &small(), ConformanceMode::Strict);
        assert_eq!(codes(&issues), [ConformanceCode::UntypedSubject]);
        assert_eq!(issues[0].severity, Severity::Warning);
    }

    #[test]
    fn issues_round_trip_through_json() {
        let t = Triple::new(iri("x"), iri("seer"), Literal::string("fast \"and\" quiet"));
        let issue = ConformanceIssue { triple: t, code: ConformanceCode::DatatypeMismatch, severity: Severity::Error };
        let json = serde_json::to_string(&issue).unwrap();
        assert_eq!(serde_json::from_str::<ConformanceIssue>(&json).unwrap(), issue);
    }
}
