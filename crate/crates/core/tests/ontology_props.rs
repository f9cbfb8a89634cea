use std::collections::BTreeSet;

use proptest::prelude::*;

use kgforge_core::ontology::{
    ontology_diff, ontology_from_graph, ontology_merge, ontology_to_graph, validate_ontology, Ontology, OntologyClass,
    OntologyProperty, PropertyKind,
};
use kgforge_core::rdf::{parse_turtle, serialize_turtle, vocab, Iri};

const NS: &str = "http://example.org/ac#";
const CLASS_NAMES: &[&str] = &["Product", "AirConditioner", "Split", "Brand", "Compressor", "Filter", "Mode", "Unit"];
const PROP_NAMES: &[&str] =
    &["capacity", "seer", "hasBrand", "noise", "weight", "hasMode", "hasFilter", "color", "price", "width"];

fn iri(local: &str) -> Iri {
    Iri::new(format!("{NS}{local}")).unwrap()
}

fn arb_text() -> impl Strategy<Value = Option<String>> {
    prop::option::of("[a-zA-Z0-9 ,/\"]{1,12}")
}

/// Random acyclic ontology over a shared name pool: a class may only have
/// parents that come earlier in the pool.
fn arb_ontology() -> impl Strategy<Value = Ontology> {
    let classes = prop::collection::btree_set(0..CLASS_NAMES.len(), 0..CLASS_NAMES.len());
    let props = prop::collection::btree_set(0..PROP_NAMES.len(), 0..PROP_NAMES.len());
    (classes, props).prop_flat_map(|(cs, ps)| {
        let cs: Vec<usize> = cs.into_iter().collect();
        let ps: Vec<usize> = ps.into_iter().collect();
        let nc = cs.len();
        let class_parts = prop::collection::vec(
            (arb_text(), arb_text(), prop::collection::vec(any::<prop::sample::Index>(), 0..2)),
            nc,
        );
        let prop_parts = prop::collection::vec(
            (
                any::<bool>(),
                prop::option::of(any::<prop::sample::Index>()),
                prop::option::of(any::<prop::sample::Index>()),
                arb_text(),
                arb_text(),
            ),
            ps.len(),
        );
        (Just(cs), Just(ps), class_parts, prop_parts).prop_map(|(cs, ps, class_parts, prop_parts)| {
            let mut o = Ontology::new(Iri::new(NS).unwrap());
            for (pos, (&ci, (label, comment, parents))) in cs.iter().zip(class_parts).enumerate() {
                let mut c = OntologyClass::new(iri(CLASS_NAMES[ci]));
                c.label = label;
                c.comment = comment;
                if pos > 0 {
                    c.parents = parents.iter().map(|ix| iri(CLASS_NAMES[cs[ix.index(pos)]])).collect::<BTreeSet<_>>();
                }
                o.add_class(c);
            }
            for (&pi, (datatype, domain, range, label, comment)) in ps.iter().zip(prop_parts) {
                let kind = if datatype { PropertyKind::Datatype } else { PropertyKind::Object };
                let mut p = OntologyProperty::new(iri(PROP_NAMES[pi]), kind);
                if !cs.is_empty() {
                    p.domain = domain.map(|ix| iri(CLASS_NAMES[cs[ix.index(cs.len())]]));
                    p.range = match kind {
                        PropertyKind::Datatype => range.map(|_| Iri::new(vocab::XSD_DECIMAL).unwrap()),
                        PropertyKind::Object => range.map(|ix| iri(CLASS_NAMES[cs[ix.index(cs.len())]])),
                    };
                } else if kind == PropertyKind::Datatype {
                    p.range = Some(Iri::new(vocab::XSD_STRING).unwrap());
                }
                p.label = label;
                p.comment = comment;
                o.add_property(p);
            }
            o
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn merge_is_monotone(base in arb_ontology(), delta in arb_ontology()) {
        let (merged, report) = ontology_merge(&base, &delta);
        for (iri, c) in &base.classes {
            prop_assert_eq!(&merged.classes[iri].parents, &c.parents);
        }
        for (iri, p) in &base.properties {
            let m = &merged.properties[iri];
            prop_assert_eq!((m.kind, &m.domain, &m.range), (p.kind, &p.domain, &p.range));
        }
        prop_assert!(merged.properties.len() <= base.properties.len() + delta.properties.len());
        prop_assert!(ontology_diff(&base, &merged).removed_count() == 0);
        for r in &report.rejected_removals {
            prop_assert!(!report.added_classes.contains(r) && !report.added_properties.contains(r));
        }
        prop_assert_eq!(merged.classes.len(), base.classes.len() + report.added_classes.len());
    }

    #[test]
    fn merge_is_idempotent(o in arb_ontology()) {
        let (merged, report) = ontology_merge(&o, &o);
        prop_assert_eq!(merged, o);
        prop_assert!(report.is_empty());
    }

    #[test]
    fn graph_round_trip(o in arb_ontology()) {
        let text = serialize_turtle(&ontology_to_graph(&o));
        let (back, _) = ontology_from_graph(&parse_turtle(&text).unwrap()).unwrap();
        prop_assert_eq!(back, o);
    }

    #[test]
    fn diff_partitions_and_reverses(a in arb_ontology(), b in arb_ontology()) {
        let d = ontology_diff(&a, &b);
        prop_assert_eq!(ontology_diff(&b, &a), d.reversed());
        let seen_old = d.removed_classes.len() + d.changed_classes.len() + d.unchanged_classes.len();
        prop_assert_eq!(seen_old, a.classes.len());
        let seen_new = d.added_properties.len() + d.changed_properties.len() + d.unchanged_properties.len();
        prop_assert_eq!(seen_new, b.properties.len());
        prop_assert!(ontology_diff(&a, &a).is_empty());
    }

    #[test]
    fn validation_ignores_construction_order(o in arb_ontology()) {
        let mut rebuilt = Ontology::new(o.namespace.clone());
        for c in o.classes.values().rev() {
            rebuilt.add_class(c.clone());
        }
        for p in o.properties.values().rev() {
            rebuilt.add_property(p.clone());
        }
        prop_assert_eq!(validate_ontology(&rebuilt), validate_ontology(&o));
    }
}
