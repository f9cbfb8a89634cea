use std::collections::{BTreeMap, BTreeSet};

use super::{
    validate_ontology, Ontology, OntologyClass, OntologyIssue, OntologyProperty, PropertyKind, StructureError,
};
use crate::rdf::{vocab, Graph, Iri, Literal, Subject, Term, Triple};

/// Namespace used when nothing in the graph suggests one.
pub const DEFAULT_NAMESPACE: &str = "http://example.org/ontology#";

/// Prefix label used for the ontology namespace in serialized output.
const SCHEMA_PREFIX: &str = "ex";

/// Lifts the schema declarations of `g` into an [`Ontology`].
///
/// Classes are subjects typed `rdfs:Class` or `owl:Class`; properties are
/// subjects typed `rdf:Property`, `owl:DatatypeProperty` or
/// `owl:ObjectProperty`. Instance data in the graph is ignored.
pub fn ontology_from_graph(g: &Graph) -> Result<(Ontology, Vec<OntologyIssue>), StructureError> {
    let mut types: BTreeMap<&Iri, BTreeSet<&str>> = BTreeMap::new();
    for t in g {
        if t.predicate.as_str() == vocab::RDF_TYPE {
            if let (Subject::Iri(s), Term::Iri(o)) = (&t.subject, &t.object) {
                types.entry(s).or_default().insert(o.as_str());
            }
        }
    }

    let mut classes = BTreeMap::new();
    let mut properties = BTreeMap::new();
    for (iri, kinds) in &types {
        let subject = Subject::Iri((*iri).clone());
        if kinds.contains(vocab::RDFS_CLASS) || kinds.contains(vocab::OWL_CLASS) {
            let class = OntologyClass {
                iri: (*iri).clone(),
                label: first_literal(g, &subject, vocab::RDFS_LABEL),
                comment: first_literal(g, &subject, vocab::RDFS_COMMENT),
                parents: g.objects(&subject, vocab::RDFS_SUBCLASS_OF).filter_map(Term::as_iri).cloned().collect(),
            };
            classes.insert(class.iri.clone(), class);
        }
        let is_dt = kinds.contains(vocab::OWL_DATATYPE_PROPERTY);
        let is_obj = kinds.contains(vocab::OWL_OBJECT_PROPERTY);
        if is_dt || is_obj || kinds.contains(vocab::RDF_PROPERTY) {
            let range = first_iri(g, &subject, vocab::RDFS_RANGE);
            let kind = match (is_dt, is_obj) {
                (true, false) => PropertyKind::Datatype,
                (false, true) => PropertyKind::Object,
                _ => infer_kind(range.as_ref()),
            };
            let property = OntologyProperty {
                iri: (*iri).clone(),
                kind,
                domain: first_iri(g, &subject, vocab::RDFS_DOMAIN),
                range,
                label: first_literal(g, &subject, vocab::RDFS_LABEL),
                comment: first_literal(g, &subject, vocab::RDFS_COMMENT),
            };
            properties.insert(property.iri.clone(), property);
        }
    }

    let namespace = infer_namespace(g, classes.keys().chain(properties.keys()));
    let ontology = Ontology { namespace, classes, properties };
    ontology.check_structure()?;
    let issues = validate_ontology(&ontology);
    Ok((ontology, issues))
}

/// Range in the xsd namespace (or `rdfs:Literal`) means datatype; anything
/// else, including a missing range, means object.
fn infer_kind(range: Option<&Iri>) -> PropertyKind {
    match range {
        Some(r) if vocab::is_xsd(r.as_str()) || r.as_str() == vocab::RDFS_LITERAL => PropertyKind::Datatype,
        _ => PropertyKind::Object,
    }
}

fn first_literal(g: &Graph, subject: &Subject, predicate: &str) -> Option<String> {
    g.objects(subject, predicate).filter_map(Term::as_literal).map(|l| l.lexical().to_string()).next()
}

fn first_iri(g: &Graph, subject: &Subject, predicate: &str) -> Option<Iri> {
    g.objects(subject, predicate).filter_map(Term::as_iri).next().cloned()
}

fn infer_namespace<'a>(g: &Graph, terms: impl Iterator<Item = &'a Iri>) -> Iri {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for iri in terms {
        if !iri.namespace().is_empty() {
            *counts.entry(iri.namespace()).or_default() += 1;
        }
    }
    let best =
        counts.iter().max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0))).and_then(|(ns, _)| Iri::new(*ns).ok());
    best.or_else(|| g.prefix(SCHEMA_PREFIX).cloned())
        .or_else(|| g.prefix("").cloned())
        .unwrap_or_else(|| Iri::new(DEFAULT_NAMESPACE).expect("valid default namespace"))
}

/// Writes the ontology back out as schema triples.
///
/// The namespace is declared under the `ex` prefix alongside the standard
/// vocabularies, so an empty ontology yields a graph with prefixes only.
pub fn ontology_to_graph(o: &Ontology) -> Graph {
    let mut g = Graph::new();
    for (label, ns) in vocab::standard_prefixes() {
        g.set_prefix(label, Iri::new(ns).expect("vocabulary namespace"));
    }
    g.set_prefix(SCHEMA_PREFIX, o.namespace.clone());

    let iri = |s: &str| Iri::new(s).expect("vocabulary term");
    for class in o.classes.values() {
        let s = Subject::Iri(class.iri.clone());
        g.insert(Triple::new(s.clone(), iri(vocab::RDF_TYPE), iri(vocab::OWL_CLASS)));
        for parent in &class.parents {
            g.insert(Triple::new(s.clone(), iri(vocab::RDFS_SUBCLASS_OF), parent.clone()));
        }
        annotate(&mut g, &s, class.label.as_deref(), class.comment.as_deref());
    }
    for property in o.properties.values() {
        let s = Subject::Iri(property.iri.clone());
        let kind = match property.kind {
            PropertyKind::Datatype => vocab::OWL_DATATYPE_PROPERTY,
            PropertyKind::Object => vocab::OWL_OBJECT_PROPERTY,
        };
        g.insert(Triple::new(s.clone(), iri(vocab::RDF_TYPE), iri(kind)));
        if let Some(domain) = &property.domain {
            g.insert(Triple::new(s.clone(), iri(vocab::RDFS_DOMAIN), domain.clone()));
        }
        if let Some(range) = &property.range {
            g.insert(Triple::new(s.clone(), iri(vocab::RDFS_RANGE), range.clone()));
        }
        annotate(&mut g, &s, property.label.as_deref(), property.comment.as_deref());
    }
    g
}

fn annotate(g: &mut Graph, s: &Subject, label: Option<&str>, comment: Option<&str>) {
    if let Some(label) = label {
        g.insert(Triple::new(s.clone(), Iri::new(vocab::RDFS_LABEL).unwrap(), Literal::string(label)));
    }
    if let Some(comment) = comment {
        g.insert(Triple::new(s.clone(), Iri::new(vocab::RDFS_COMMENT).unwrap(), Literal::string(comment)));
    }
}
