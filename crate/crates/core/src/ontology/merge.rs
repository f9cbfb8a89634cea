use serde::{Deserialize, Serialize};

use super::{Ontology, PropertyKind};
use crate::rdf::Iri;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationUpdate {
    pub iri: Iri,
    pub field: String,
    pub old: Option<String>,
    pub new: String,
}

/// A structural change proposed by the delta and refused.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeConflict {
    pub iri: Iri,
    pub field: String,
    pub base: Option<String>,
    pub delta: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeReport {
    pub added_classes: Vec<Iri>,
    pub added_properties: Vec<Iri>,
    pub annotation_updates: Vec<AnnotationUpdate>,
    /// Existing elements whose structure the delta tried to change.
    pub rejected_removals: Vec<Iri>,
    pub conflicts: Vec<MergeConflict>,
}

impl MergeReport {
    pub fn is_empty(&self) -> bool {
        self.added_classes.is_empty()
            && self.added_properties.is_empty()
            && self.annotation_updates.is_empty()
            && self.rejected_removals.is_empty()
            && self.conflicts.is_empty()
    }

    /// New classes plus new properties.
    pub fn added_count(&self) -> usize {
        self.added_classes.len() + self.added_properties.len()
    }

    fn conflict(&mut self, iri: &Iri, field: &str, base: Option<String>, delta: Option<String>) {
        self.conflicts.push(MergeConflict { iri: iri.clone(), field: field.into(), base, delta });
        if self.rejected_removals.last() != Some(iri) {
            self.rejected_removals.push(iri.clone());
        }
    }
}

fn kind_name(kind: PropertyKind) -> String {
    match kind {
        PropertyKind::Datatype => "datatype".into(),
        PropertyKind::Object => "object".into(),
    }
}

fn fill(report: &mut MergeReport, iri: &Iri, field: &str, base: &mut Option<String>, delta: &Option<String>) {
    let base_empty = base.as_deref().is_none_or(|s| s.trim().is_empty());
    if let Some(new) = delta.as_ref().filter(|s| !s.trim().is_empty()) {
        if base_empty {
            report.annotation_updates.push(AnnotationUpdate {
                iri: iri.clone(),
                field: field.into(),
                old: base.clone(),
                new: new.clone(),
            });
            *base = Some(new.clone());
        }
    }
}

/// Adds the delta's new elements to `base` without removing or restructuring
/// anything already there.
///
/// For elements present on both sides the base keeps its kind, domain, range
/// and parents; a delta that specifies different values is reported as a
/// conflict. Empty base labels and comments are filled from the delta.
pub fn ontology_merge(base: &Ontology, delta: &Ontology) -> (Ontology, MergeReport) {
    let mut out = base.clone();
    let mut report = MergeReport::default();

    for (iri, dc) in &delta.classes {
        if base.properties.contains_key(iri) {
            report.conflict(iri, "element", Some("property".into()), Some("class".into()));
            continue;
        }
        let Some(bc) = out.classes.get_mut(iri) else {
            out.classes.insert(iri.clone(), dc.clone());
            report.added_classes.push(iri.clone());
            continue;
        };
        if !dc.parents.is_empty() && dc.parents != bc.parents {
            let render = |s: &std::collections::BTreeSet<Iri>| s.iter().map(Iri::as_str).collect::<Vec<_>>().join(" ");
            report.conflict(iri, "parents", Some(render(&bc.parents)), Some(render(&dc.parents)));
        }
        fill(&mut report, iri, "label", &mut bc.label, &dc.label);
        fill(&mut report, iri, "comment", &mut bc.comment, &dc.comment);
    }

    for (iri, dp) in &delta.properties {
        if base.classes.contains_key(iri) {
            report.conflict(iri, "element", Some("class".into()), Some("property".into()));
            continue;
        }
        let Some(bp) = out.properties.get_mut(iri) else {
            out.properties.insert(iri.clone(), dp.clone());
            report.added_properties.push(iri.clone());
            continue;
        };
        if dp.kind != bp.kind {
            report.conflict(iri, "kind", Some(kind_name(bp.kind)), Some(kind_name(dp.kind)));
        }
        if dp.domain.is_some() && dp.domain != bp.domain {
            report.conflict(
                iri,
                "domain",
                bp.domain.as_ref().map(|d| d.as_str().into()),
                dp.domain.as_ref().map(|d| d.as_str().into()),
            );
        }
        if dp.range.is_some() && dp.range != bp.range {
            report.conflict(
                iri,
                "range",
                bp.range.as_ref().map(|d| d.as_str().into()),
                dp.range.as_ref().map(|d| d.as_str().into()),
            );
        }
        fill(&mut report, iri, "label", &mut bp.label, &dp.label);
        fill(&mut report, iri, "comment", &mut bp.comment, &dp.comment);
    }

    (out, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::test_support::*;
    use crate::ontology::{ontology_diff, OntologyProperty};

    #[test]
    fn identity_and_idempotence() {
        let o = small();
        let (m, r) = ontology_merge(&o, &empty());
        assert_eq!((m, r.is_empty()), (o.clone(), true));
        let (m, r) = ontology_merge(&o, &o);
        assert_eq!(m, o);
        assert!(r.is_empty(), "{r:?}");
    }

    #[test]
    fn adds_only_new_elements() {
        let mut base = empty();
        for i in 0..42 {
            base.add_class(class(&format!("C{i}"), &[]));
        }
        let mut delta = empty();
        delta.add_class(class("C7", &[]));
        delta.add_class(class("Compressor", &[]));
        let (m, r) = ontology_merge(&base, &delta);
        assert_eq!(m.classes.len(), 43);
        assert_eq!(r.added_classes, vec![iri("Compressor")]);
        assert!(r.added_properties.is_empty());
    }

    #[test]
    fn base_structure_wins() {
        let base = small();
        let mut delta = empty();
        delta.add_property(prop("seer", PropertyKind::Datatype, "Product", "xsd:decimal"));
        let (m, r) = ontology_merge(&base, &delta);
        assert_eq!(m.properties[&iri("seer")], base.properties[&iri("seer")]);
        assert_eq!(r.rejected_removals, vec![iri("seer")]);
        assert_eq!(r.conflicts.len(), 1);
        assert_eq!(r.conflicts[0].field, "domain");
        assert!(ontology_diff(&base, &m).is_empty());
    }

    #[test]
    fn fills_empty_annotations() {
        let mut base = small();
        base.properties.get_mut(&iri("seer")).unwrap().comment = None;
        let mut delta = empty();
        let mut p = OntologyProperty::new(iri("seer"), PropertyKind::Datatype);
        p.comment = Some("SEER rating, decimal".into());
        p.label = Some("SEER".into());
        delta.add_property(p);
        let (m, r) = ontology_merge(&base, &delta);
        assert_eq!(m.properties[&iri("seer")].comment.as_deref(), Some("SEER rating, decimal"));
        assert_eq!(r.annotation_updates.len(), 2);
        assert!(r.conflicts.is_empty());
    }

    #[test]
    fn silent_delta_is_not_a_conflict() {
        let base = small();
        let mut delta = empty();
        delta.add_class(crate::ontology::OntologyClass::new(iri("SplitAirConditioner")));
        delta.add_property(OntologyProperty::new(iri("hasBrand"), PropertyKind::Object));
        let (m, r) = ontology_merge(&base, &delta);
        assert_eq!(m, base);
        assert!(r.is_empty(), "{r:?}");
    }

    #[test]
    fn cross_kind_collision_rejected() {
        let base = small();
        let mut delta = empty();
        delta.add_class(class("seer", &[]));
        let (m, r) = ontology_merge(&base, &delta);
        assert_eq!(m, base);
        assert_eq!(r.rejected_removals, vec![iri("seer")]);
        assert!(r.added_classes.is_empty());
    }
}
