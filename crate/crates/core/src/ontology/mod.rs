//! Typed view of the product ontology: classes and properties with their
//! hierarchy, domains, ranges and annotations.

mod diff;
mod lift;
mod merge;
mod stats;
pub mod tokens;
mod validate;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rdf::Iri;

pub use diff::{ontology_diff, DiffReport, ElementChange, FieldChange};
pub use lift::{ontology_from_graph, ontology_to_graph, DEFAULT_NAMESPACE};
pub use merge::{ontology_merge, AnnotationUpdate, MergeConflict, MergeReport};
pub use stats::{ontology_stats, OntologyStats};
pub use validate::{validate_ontology, validate_ontology_with, IssueCode, OntologyIssue, Severity, ValidationConfig};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OntologyClass {
    pub iri: Iri,
    pub label: Option<String>,
    pub comment: Option<String>,
    pub parents: BTreeSet<Iri>,
}

impl OntologyClass {
    pub fn new(iri: Iri) -> Self {
        OntologyClass { iri, label: None, comment: None, parents: BTreeSet::new() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PropertyKind {
    Datatype,
    Object,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OntologyProperty {
    pub iri: Iri,
    pub kind: PropertyKind,
    pub domain: Option<Iri>,
    pub range: Option<Iri>,
    pub label: Option<String>,
    /// Expected value format and units.
    pub comment: Option<String>,
}

impl OntologyProperty {
    pub fn new(iri: Iri, kind: PropertyKind) -> Self {
        OntologyProperty { iri, kind, domain: None, range: None, label: None, comment: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ontology {
    pub namespace: Iri,
    pub classes: BTreeMap<Iri, OntologyClass>,
    pub properties: BTreeMap<Iri, OntologyProperty>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("subclass cycle through {}", .0.iter().map(Iri::as_str).collect::<Vec<_>>().join(" -> "))]
    SubclassCycle(Vec<Iri>),
}

impl Ontology {
    pub fn new(namespace: Iri) -> Self {
        Ontology { namespace, classes: BTreeMap::new(), properties: BTreeMap::new() }
    }

    pub fn add_class(&mut self, class: OntologyClass) {
        self.classes.insert(class.iri.clone(), class);
    }

    pub fn add_property(&mut self, property: OntologyProperty) {
        self.properties.insert(property.iri.clone(), property);
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty() && self.properties.is_empty()
    }

    /// Number of classes plus properties.
    pub fn element_count(&self) -> usize {
        self.classes.len() + self.properties.len()
    }

    pub fn contains(&self, iri: &Iri) -> bool {
        self.classes.contains_key(iri) || self.properties.contains_key(iri)
    }

    /// `class` and all of its declared ancestors.
    pub fn ancestors_or_self(&self, class: &Iri) -> BTreeSet<Iri> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![class.clone()];
        while let Some(c) = stack.pop() {
            if !seen.insert(c.clone()) {
                continue;
            }
            if let Some(decl) = self.classes.get(&c) {
                stack.extend(decl.parents.iter().cloned());
            }
        }
        seen
    }

    /// True when `class` equals `ancestor` or reaches it via subclass links.
    pub fn is_subclass_of(&self, class: &Iri, ancestor: &Iri) -> bool {
        self.ancestors_or_self(class).contains(ancestor)
    }

    /// Finds a subclass cycle among declared classes, if any.
    pub fn find_subclass_cycle(&self) -> Option<Vec<Iri>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Active,
            Done,
        }
        fn visit(o: &Ontology, node: &Iri, marks: &mut BTreeMap<Iri, Mark>, path: &mut Vec<Iri>) -> Option<Vec<Iri>> {
            match marks.get(node) {
                Some(Mark::Done) => return None,
                Some(Mark::Active) => {
                    let start = path.iter().position(|p| p == node).expect("active node on path");
                    let mut cycle = path[start..].to_vec();
                    cycle.push(node.clone());
                    return Some(cycle);
                }
                None => {}
            }
            marks.insert(node.clone(), Mark::Active);
            path.push(node.clone());
            if let Some(class) = o.classes.get(node) {
                for parent in &class.parents {
                    if o.classes.contains_key(parent) {
                        if let Some(cycle) = visit(o, parent, marks, path) {
                            return Some(cycle);
                        }
                    }
                }
            }
            path.pop();
            marks.insert(node.clone(), Mark::Done);
            None
        }

        let mut marks = BTreeMap::new();
        for iri in self.classes.keys() {
            let mut path = Vec::new();
            if let Some(cycle) = visit(self, iri, &mut marks, &mut path) {
                return Some(cycle);
            }
        }
        None
    }

    pub fn check_structure(&self) -> Result<(), StructureError> {
        match self.find_subclass_cycle() {
            Some(cycle) => Err(StructureError::SubclassCycle(cycle)),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    pub fn iri(local: &str) -> Iri {
        Iri::new(format!("http://example.org/ac#{local}")).unwrap()
    }

    pub fn class(local: &str, parents: &[&str]) -> OntologyClass {
        OntologyClass {
            iri: iri(local),
            label: None,
            comment: Some(format!("The {local} class.")),
            parents: parents.iter().map(|p| iri(p)).collect(),
        }
    }

    pub fn prop(local: &str, kind: PropertyKind, domain: &str, range: &str) -> OntologyProperty {
        let range = match range.strip_prefix("xsd:") {
            Some(local) => Iri::new(format!("{}{local}", crate::rdf::vocab::XSD)).unwrap(),
            None => iri(range),
        };
        OntologyProperty {
            iri: iri(local),
            kind,
            domain: Some(iri(domain)),
            range: Some(range),
            label: None,
            comment: Some(format!("Value of {local}.")),
        }
    }

    pub fn empty() -> Ontology {
        Ontology::new(Iri::new("http://example.org/ac#").unwrap())
    }

    /// Product > AirConditioner > SplitAirConditioner, Brand, 3 properties.
    pub fn small() -> Ontology {
        let mut o = empty();
        o.add_class(class("Product", &[]));
        o.add_class(class("AirConditioner", &["Product"]));
        o.add_class(class("SplitAirConditioner", &["AirConditioner"]));
        o.add_class(class("Brand", &[]));
        o.add_property(prop("coolingCapacity", PropertyKind::Datatype, "AirConditioner", "xsd:integer"));
        o.add_property(prop("seer", PropertyKind::Datatype, "AirConditioner", "xsd:decimal"));
        o.add_property(prop("hasBrand", PropertyKind::Object, "Product", "Brand"));
        o
    }
}
