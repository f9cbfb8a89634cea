use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Ontology, OntologyClass, OntologyProperty, PropertyKind};
use crate::rdf::Iri;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldChange {
    pub field: String,
    pub old: Option<String>,
    pub new: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementChange {
    pub iri: Iri,
    pub changes: Vec<FieldChange>,
}

/// Element-level comparison of two ontologies. Every element of either side
/// lands in exactly one of added, removed, changed or unchanged.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffReport {
    pub added_classes: Vec<Iri>,
    pub removed_classes: Vec<Iri>,
    pub changed_classes: Vec<ElementChange>,
    pub unchanged_classes: Vec<Iri>,
    pub added_properties: Vec<Iri>,
    pub removed_properties: Vec<Iri>,
    pub changed_properties: Vec<ElementChange>,
    pub unchanged_properties: Vec<Iri>,
}

impl DiffReport {
    /// True when nothing was added, removed or changed.
    pub fn is_empty(&self) -> bool {
        self.added_classes.is_empty()
            && self.removed_classes.is_empty()
            && self.changed_classes.is_empty()
            && self.added_properties.is_empty()
            && self.removed_properties.is_empty()
            && self.changed_properties.is_empty()
    }

    pub fn added_count(&self) -> usize {
        self.added_classes.len() + self.added_properties.len()
    }

    pub fn removed_count(&self) -> usize {
        self.removed_classes.len() + self.removed_properties.len()
    }

    /// The diff with old and new swapped.
    pub fn reversed(&self) -> DiffReport {
        let flip = |changes: &[ElementChange]| -> Vec<ElementChange> {
            changes
                .iter()
                .map(|c| ElementChange {
                    iri: c.iri.clone(),
                    changes: c
                        .changes
                        .iter()
                        .map(|f| FieldChange { field: f.field.clone(), old: f.new.clone(), new: f.old.clone() })
                        .collect(),
                })
                .collect()
        };
        DiffReport {
            added_classes: self.removed_classes.clone(),
            removed_classes: self.added_classes.clone(),
            changed_classes: flip(&self.changed_classes),
            unchanged_classes: self.unchanged_classes.clone(),
            added_properties: self.removed_properties.clone(),
            removed_properties: self.added_properties.clone(),
            changed_properties: flip(&self.changed_properties),
            unchanged_properties: self.unchanged_properties.clone(),
        }
    }
}

fn field(changes: &mut Vec<FieldChange>, name: &str, old: Option<String>, new: Option<String>) {
    if old != new {
        changes.push(FieldChange { field: name.into(), old, new });
    }
}

fn iri_str(i: &Option<Iri>) -> Option<String> {
    i.as_ref().map(|i| i.as_str().to_string())
}

fn class_changes(a: &OntologyClass, b: &OntologyClass) -> Vec<FieldChange> {
    let parents = |c: &OntologyClass| {
        (!c.parents.is_empty()).then(|| c.parents.iter().map(Iri::as_str).collect::<Vec<_>>().join(" "))
    };
    let mut out = Vec::new();
    field(&mut out, "parents", parents(a), parents(b));
    field(&mut out, "label", a.label.clone(), b.label.clone());
    field(&mut out, "comment", a.comment.clone(), b.comment.clone());
    out
}

fn property_changes(a: &OntologyProperty, b: &OntologyProperty) -> Vec<FieldChange> {
    let kind = |p: &OntologyProperty| {
        Some(match p.kind {
            PropertyKind::Datatype => "datatype".to_string(),
            PropertyKind::Object => "object".to_string(),
        })
    };
    let mut out = Vec::new();
    field(&mut out, "kind", kind(a), kind(b));
    field(&mut out, "domain", iri_str(&a.domain), iri_str(&b.domain));
    field(&mut out, "range", iri_str(&a.range), iri_str(&b.range));
    field(&mut out, "label", a.label.clone(), b.label.clone());
    field(&mut out, "comment", a.comment.clone(), b.comment.clone());
    out
}

struct Buckets {
    added: Vec<Iri>,
    removed: Vec<Iri>,
    changed: Vec<ElementChange>,
    unchanged: Vec<Iri>,
}

fn bucket<T>(old: &BTreeMap<Iri, T>, new: &BTreeMap<Iri, T>, compare: impl Fn(&T, &T) -> Vec<FieldChange>) -> Buckets {
    let mut b = Buckets { added: vec![], removed: vec![], changed: vec![], unchanged: vec![] };
    for (iri, o) in old {
        match new.get(iri) {
            None => b.removed.push(iri.clone()),
            Some(n) => {
                let changes = compare(o, n);
                if changes.is_empty() {
                    b.unchanged.push(iri.clone());
                } else {
                    b.changed.push(ElementChange { iri: iri.clone(), changes });
                }
            }
        }
    }
    b.added = new.keys().filter(|k| !old.contains_key(*k)).cloned().collect();
    b
}

pub fn ontology_diff(old: &Ontology, new: &Ontology) -> DiffReport {
    let c = bucket(&old.classes, &new.classes, class_changes);
    let p = bucket(&old.properties, &new.properties, property_changes);
    DiffReport {
        added_classes: c.added,
        removed_classes: c.removed,
        changed_classes: c.changed,
        unchanged_classes: c.unchanged,
        added_properties: p.added,
        removed_properties: p.removed,
        changed_properties: p.changed,
        unchanged_properties: p.unchanged,
    }
}
