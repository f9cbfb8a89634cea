//! Random graphs and ontologies for the property suites.

use kgforge_core::ontology::{Ontology, OntologyClass, OntologyProperty, PropertyKind};
use kgforge_core::rdf::{vocab, BlankNode, Graph, Iri, Literal, Subject, Term, Triple};
use rand::seq::IndexedRandom;
use rand::Rng;

const NAMESPACES: [&str; 4] =
    ["http://example.org/ns#", "http://example.com/data/", "https://shop.example/items/", "urn:example:"];

/// Local names chosen to stress prefixed-name rendering: some are valid
/// local parts, some force the full IRI form.
const LOCALS: [&str; 16] = [
    "Product",
    "air-conditioner",
    "x.y",
    "seer",
    "_hidden",
    "007",
    "a",
    "hasBrand",
    "café",
    "dot.",
    "with space",
    "hash#inside",
    "",
    "über",
    "v1.2.3",
    "Z",
];

const STRINGS: [&str; 10] = [
    "",
    "plain",
    "with \"quotes\"",
    "back\\slash",
    "line\nbreak",
    "tab\there",
    "unicode é 中文 🚀",
    "'single'",
    "trailing space ",
    "carriage\rreturn",
];

fn random_iri(rng: &mut impl Rng) -> Iri {
    let ns = *NAMESPACES.choose(rng).expect("namespaces");
    let local = *LOCALS.choose(rng).expect("locals");
    let local: String = local.chars().map(|c| if c == ' ' { '_' } else { c }).collect();
    Iri::new(format!("{ns}{local}")).unwrap_or_else(|_| Iri::new(format!("{ns}fallback")).expect("valid IRI"))
}

fn random_literal(rng: &mut impl Rng) -> Literal {
    let typed = |lex: String, dt: &str| Literal::typed(lex, Iri::new(dt).expect("datatype"));
    match rng.random_range(0..7) {
        0 => Literal::string(*STRINGS.choose(rng).expect("strings")),
        1 => Literal::lang(*STRINGS.choose(rng).expect("strings"), *["en", "de-CH", "fr"].choose(rng).expect("tags"))
            .expect("valid tag"),
        2 => Literal::integer(rng.random_range(-1_000_000..1_000_000)),
        3 => typed((*["0", "+5", "007", "-12"].choose(rng).expect("integers")).to_string(), vocab::XSD_INTEGER),
        4 => typed(
            (*["1.5", "-0.25", ".5", "12.50", "+3.0"].choose(rng).expect("decimals")).to_string(),
            vocab::XSD_DECIMAL,
        ),
        5 => typed((*["true", "false"].choose(rng).expect("booleans")).to_string(), vocab::XSD_BOOLEAN),
        _ => Literal::typed(format!("{}", rng.random_range(0..100)), random_iri(rng)),
    }
}

fn random_blank(rng: &mut impl Rng) -> BlankNode {
    BlankNode::new(format!("b{}", rng.random_range(0..6))).expect("valid label")
}

/// A graph of up to 40 triples over a small vocabulary, with a random set
/// of prefix declarations.
pub fn random_graph(rng: &mut impl Rng) -> Graph {
    let mut g = Graph::new();
    let labels = ["ex", "data", "shop", "u", ""];
    for (label, ns) in labels.iter().zip(NAMESPACES) {
        if rng.random_bool(0.6) {
            g.set_prefix(*label, Iri::new(ns).expect("namespace"));
        }
    }
    if rng.random_bool(0.5) {
        g.set_prefix("rdf", Iri::new(vocab::RDF).expect("namespace"));
    }
    for _ in 0..rng.random_range(0..40) {
        let subject =
            if rng.random_bool(0.8) { Subject::Iri(random_iri(rng)) } else { Subject::Blank(random_blank(rng)) };
        let predicate =
            if rng.random_bool(0.2) { Iri::new(vocab::RDF_TYPE).expect("rdf:type") } else { random_iri(rng) };
        let object = match rng.random_range(0..4) {
            0 => Term::Iri(random_iri(rng)),
            1 => Term::Blank(random_blank(rng)),
            _ => Term::Literal(random_literal(rng)),
        };
        g.insert(Triple::new(subject, predicate, object));
    }
    g
}

const NAMES: [&str; 12] = [
    "Product",
    "AirConditioner",
    "Brand",
    "Compressor",
    "Filter",
    "Remote",
    "seer",
    "weight",
    "hasBrand",
    "coolingCapacity",
    "colour",
    "hasFilter",
];

fn maybe_text(rng: &mut impl Rng, pool: &[&str]) -> Option<String> {
    rng.random_bool(0.5).then(|| pool.choose(rng).expect("pool").to_string())
}

/// An ontology drawn from a shared name pool, so two draws overlap and
/// disagree on structure and annotations. Subclass links only point to
/// earlier names, which keeps the hierarchy acyclic.
pub fn random_ontology(rng: &mut impl Rng) -> Ontology {
    let ns = "http://example.org/ac#";
    let iri = |local: &str| Iri::new(format!("{ns}{local}")).expect("valid");
    let mut o = Ontology::new(Iri::new(ns).expect("namespace"));
    let comments = ["a thing", "value in kg", "BTU/h"];
    let labels = ["Product", "air conditioner", "brand"];
    for (i, name) in NAMES.iter().enumerate() {
        match rng.random_range(0..3) {
            0 => {
                let mut c = OntologyClass::new(iri(&format!("C{name}")));
                for _ in 0..rng.random_range(0..3) {
                    if i > 0 {
                        c.parents.insert(iri(&format!("C{}", NAMES[rng.random_range(0..i)])));
                    }
                }
                c.label = maybe_text(rng, &labels);
                c.comment = maybe_text(rng, &comments);
                o.add_class(c);
            }
            1 => {
                let kind = if rng.random_bool(0.5) { PropertyKind::Datatype } else { PropertyKind::Object };
                let mut p = OntologyProperty::new(iri(&format!("p{name}")), kind);
                p.domain = rng.random_bool(0.7).then(|| iri(&format!("C{}", NAMES.choose(rng).expect("names"))));
                p.range = rng.random_bool(0.7).then(|| match kind {
                    PropertyKind::Datatype => {
                        Iri::new(*[vocab::XSD_STRING, vocab::XSD_DECIMAL].choose(rng).expect("xsd")).expect("xsd")
                    }
                    PropertyKind::Object => iri(&format!("C{}", NAMES.choose(rng).expect("names"))),
                });
                p.label = maybe_text(rng, &labels);
                p.comment = maybe_text(rng, &comments);
                o.add_property(p);
            }
            _ => {}
        }
    }
    o
}
