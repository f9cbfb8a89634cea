use serde::{Deserialize, Serialize};

use super::{Ontology, PropertyKind};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OntologyStats {
    pub classes: usize,
    pub properties: usize,
    pub datatype_properties: usize,
    pub object_properties: usize,
    /// Share of classes and properties that carry a non-empty comment.
    pub annotated_fraction: f64,
}

pub fn ontology_stats(o: &Ontology) -> OntologyStats {
    let datatype = o.properties.values().filter(|p| p.kind == PropertyKind::Datatype).count();
    let commented = |c: &Option<String>| c.as_deref().is_some_and(|s| !s.trim().is_empty());
    let annotated = o.classes.values().filter(|c| commented(&c.comment)).count()
        + o.properties.values().filter(|p| commented(&p.comment)).count();
    let total = o.element_count();
    OntologyStats {
        classes: o.classes.len(),
        properties: o.properties.len(),
        datatype_properties: datatype,
        object_properties: o.properties.len() - datatype,
        annotated_fraction: if total == 0 { 0.0 } else { annotated as f64 / total as f64 },
    }
}
