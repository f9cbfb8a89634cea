//! Compact builders for hand-written ontologies.

use kgforge_core::ontology::{Ontology, OntologyClass, OntologyProperty, PropertyKind};
use kgforge_core::rdf::Iri;

const XSD: &str = "http://www.w3.org/2001/XMLSchema#";

pub struct SchemaBuilder {
    ontology: Ontology,
}

impl SchemaBuilder {
    pub fn new(namespace: &str) -> Self {
        SchemaBuilder { ontology: Ontology::new(Iri::new(namespace).expect("valid namespace")) }
    }

    pub fn iri(&self, local: &str) -> Iri {
        term(&self.ontology, local)
    }

    pub fn class(mut self, local: &str, parents: &[&str], comment: &str) -> Self {
        let mut c = OntologyClass::new(self.iri(local));
        c.parents = parents.iter().map(|p| self.iri(p)).collect();
        c.comment = Some(comment.to_string());
        self.ontology.add_class(c);
        self
    }

    /// A datatype property; `xsd` is the local name of the range datatype.
    pub fn datatype(mut self, local: &str, domain: &str, xsd: &str, comment: &str) -> Self {
        let mut p = OntologyProperty::new(self.iri(local), PropertyKind::Datatype);
        p.domain = Some(self.iri(domain));
        p.range = Some(Iri::new(format!("{XSD}{xsd}")).expect("xsd datatype"));
        p.comment = Some(comment.to_string());
        self.ontology.add_property(p);
        self
    }

    pub fn object(mut self, local: &str, domain: &str, range: &str, comment: &str) -> Self {
        let mut p = OntologyProperty::new(self.iri(local), PropertyKind::Object);
        p.domain = Some(self.iri(domain));
        p.range = Some(self.iri(range));
        p.comment = Some(comment.to_string());
        self.ontology.add_property(p);
        self
    }

    pub fn build(self) -> Ontology {
        self.ontology
    }
}

/// The IRI of `local` in the ontology's namespace.
pub fn term(o: &Ontology, local: &str) -> Iri {
    Iri::new(format!("{}{local}", o.namespace.as_str())).expect("valid local name")
}
