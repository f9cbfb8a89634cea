use proptest::prelude::*;

use super::*;
use crate::rdf::{vocab, BlankNode, Graph, Iri, Literal, Subject, Term, Triple};

fn ex(local: &str) -> Iri {
    Iri::new(format!("http://example.org/{local}")).unwrap()
}

#[test]
fn minimal_document() {
    let g = parse_turtle("@prefix ex: <http://example.org/> . ex:s ex:p ex:o .").unwrap();
    assert_eq!(g.len(), 1);
    assert_eq!(g.prefixes().len(), 1);
    assert!(g.contains(&Triple::new(ex("s"), ex("p"), ex("o"))));
}

#[test]
fn empty_document() {
    let g = parse_turtle("").unwrap();
    assert!(g.is_empty());
    assert!(parse_turtle("  # only a comment\n\n").unwrap().is_empty());
}

#[test]
fn undefined_prefix_reported_on_line_one() {
    let err = parse_turtle("ex:s ex:p").unwrap_err();
    assert_eq!(err.line, 1);
    assert_eq!(err.column, 1);
    assert!(err.message.contains("undefined prefix"), "{err}");
}

#[test]
fn missing_terminator() {
    let err = parse_turtle("@prefix ex: <http://example.org/> .\nex:s ex:p ex:o").unwrap_err();
    assert_eq!(err.line, 2);
    assert!(err.message.contains("unterminated"), "{err}");
}

#[test]
fn shorthand_forms() {
    let doc = r#"
@prefix ex: <http://example.org/> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
ex:ac1 a ex:AirConditioner ;
    ex:capacity "12000"^^xsd:integer , 9000 ;
    ex:seer 6.1 ;
    ex:inverter true ;
    ex:name "Split \"Pro\""@en ;
    ex:notes """two
lines""" .
"#;
    let g = parse_turtle(doc).unwrap();
    assert_eq!(g.len(), 7);
    let s = ex("ac1");
    let int = |v: &str| Term::Literal(Literal::typed(v, Iri::new(vocab::XSD_INTEGER).unwrap()));
    assert!(g.contains(&Triple::new(s.clone(), Iri::new(vocab::RDF_TYPE).unwrap(), ex("AirConditioner"))));
    assert!(g.contains(&Triple::new(s.clone(), ex("capacity"), int("12000"))));
    assert!(g.contains(&Triple::new(s.clone(), ex("capacity"), int("9000"))));
    assert!(g.contains(&Triple::new(
        s.clone(),
        ex("seer"),
        Literal::typed("6.1", Iri::new(vocab::XSD_DECIMAL).unwrap())
    )));
    assert!(g.contains(&Triple::new(
        s.clone(),
        ex("inverter"),
        Literal::typed("true", Iri::new(vocab::XSD_BOOLEAN).unwrap())
    )));
    assert!(g.contains(&Triple::new(s.clone(), ex("name"), Literal::lang("Split \"Pro\"", "en").unwrap())));
    assert!(g.contains(&Triple::new(s, ex("notes"), Literal::string("two\nlines"))));
}

#[test]
fn trailing_semicolon_and_dot_after_name() {
    let g = parse_turtle("@prefix ex: <http://example.org/> .\nex:s ex:p ex:o ;.\nex:s ex:q 5.").unwrap();
    assert_eq!(g.len(), 2);
    assert!(g.contains(&Triple::new(ex("s"), ex("q"), Literal::integer(5))));
}

#[test]
fn rejects_excluded_forms() {
    let pre = "@prefix ex: <http://example.org/> .\n";
    for body in [
        "ex:s ex:p [ ex:q 1 ] .",
        "ex:s ex:p ( 1 2 ) .",
        "<rel> ex:p ex:o .",
        "@base <http://example.org/> .",
        "PREFIX ex: <http://example.org/>",
        "ex:s ex:p 1.5e3 .",
        "\"lit\" ex:p ex:o .",
        "ex:s ex:p \"unterminated .",
        "ex:s ex:p \"bad\\q\" .",
        "ex:s ex:p ex:o ex:extra .",
        "ex:s ex:p \"x\"@ .",
        "ex:s ex:p _:bad-label .",
        "ex:s ex:p ex:o",
        "ex:s ex:p maybe .",
        "ex:s ex:p ex:a%20b .",
        "ex:s <http://ex.org/a b> ex:o .",
        "ex:s ex:p \"a\nb\" .",
    ] {
        assert!(parse_turtle(&format!("{pre}{body}")).is_err(), "accepted: {body}");
    }
}

#[test]
fn error_rejects_whole_document() {
    let doc = "@prefix ex: <http://example.org/> .\nex:a ex:p ex:o .\nex:b ex:p .\n";
    let err = parse_turtle(doc).unwrap_err();
    assert_eq!(err.line, 3);
}

#[test]
fn blank_nodes_and_unicode_escapes() {
    let g = parse_turtle("_:b1 <http://example.org/p> \"caf\\u00E9 \\U0001F600\" .").unwrap();
    let t = g.iter().next().unwrap();
    assert_eq!(t.subject, Subject::Blank(BlankNode::new("b1").unwrap()));
    assert_eq!(t.object, Term::Literal(Literal::string("café 😀")));
}

#[test]
fn long_string_with_embedded_quotes() {
    let g = parse_turtle("<http://e.org/s> <http://e.org/p> \"\"\"say \"hi\"\"\"\" .").unwrap();
    assert_eq!(g.iter().next().unwrap().object, Term::Literal(Literal::string("say \"hi\"")));
    let g = parse_turtle("<http://e.org/s> <http://e.org/p> '''it's''' .").unwrap();
    assert_eq!(g.iter().next().unwrap().object, Term::Literal(Literal::string("it's")));
}

#[test]
fn empty_graph_serializes_to_prefixes_only() {
    assert_eq!(serialize_turtle(&Graph::new()), "");
    let mut g = Graph::new();
    g.set_prefix("ex", ex(""));
    assert_eq!(serialize_turtle(&g), "@prefix ex: <http://example.org/> .\n");
}

#[test]
fn shared_subject_uses_semicolon_block() {
    let mut g = Graph::new();
    g.set_prefix("ex", ex(""));
    g.insert(Triple::new(ex("s"), ex("q"), Literal::integer(42)));
    g.insert(Triple::new(ex("s"), ex("p"), ex("o")));
    let text = serialize_turtle(&g);
    assert_eq!(text, "@prefix ex: <http://example.org/> .\n\nex:s ex:p ex:o ;\n    ex:q 42 .\n");
    assert_eq!(parse_turtle(&text).unwrap(), g);
}

#[test]
fn serializer_escapes_and_falls_back_to_full_iris() {
    let mut g = Graph::new();
    g.set_prefix("ex", ex(""));
    g.insert(Triple::new(ex("a b".replace(' ', "%20").as_str()), ex("p"), Literal::string("q\"\\\n\t")));
    g.insert(Triple::new(ex("s"), ex("p"), Literal::typed("abc", Iri::new(vocab::XSD_INTEGER).unwrap())));
    g.insert(Triple::new(ex("s"), ex("p"), Literal::typed("1.", Iri::new(vocab::XSD_DECIMAL).unwrap())));
    g.insert(Triple::new(ex("s"), ex("p."), ex("o")));
    let text = serialize_turtle(&g);
    assert!(text.contains("<http://example.org/a%20b>"), "{text}");
    assert!(text.contains("<http://example.org/p.>"), "{text}");
    assert_eq!(parse_turtle(&text).unwrap(), g);
}

#[test]
fn serialization_is_deterministic_across_insertion_order() {
    let triples = vec![
        Triple::new(ex("b"), ex("p"), ex("o")),
        Triple::new(ex("a"), ex("p"), Literal::string("x")),
        Triple::new(ex("a"), ex("p"), Literal::string("w")),
    ];
    let g1: Graph = triples.iter().cloned().collect();
    let g2: Graph = triples.into_iter().rev().collect();
    assert_eq!(serialize_turtle(&g1), serialize_turtle(&g2));
}

fn arb_iri() -> impl Strategy<Value = Iri> {
    prop_oneof![
        "[a-zA-Z_][a-zA-Z0-9_.-]{0,8}".prop_map(|l| format!("http://example.org/{l}")),
        "[a-z0-9]{1,6}".prop_map(|l| format!("http://www.w3.org/2001/XMLSchema#{l}")),
        "[a-zA-Z0-9%~!$&*+=;/.-]{0,10}".prop_map(|l| format!("urn:x-test:{l}")),
        "[a-z]{1,5}".prop_map(|l| format!("http://other.example/ns#{l}")),
    ]
    .prop_map(|s| Iri::new(s).unwrap())
}

fn arb_blank() -> impl Strategy<Value = BlankNode> {
    "[A-Za-z0-9_]{1,6}".prop_map(|l| BlankNode::new(l).unwrap())
}

fn arb_literal() -> impl Strategy<Value = Literal> {
    prop_oneof![
        any::<String>().prop_map(Literal::string),
        (any::<String>(), "[a-z]{1,3}(-[A-Za-z0-9]{1,4})?").prop_map(|(s, t)| Literal::lang(s, t).unwrap()),
        (any::<String>(), arb_iri()).prop_map(|(s, d)| Literal::typed(s, d)),
        any::<i64>().prop_map(Literal::integer),
        "[+-]?[0-9]{0,4}\\.[0-9]{1,4}".prop_map(|s| Literal::typed(s, Iri::new(vocab::XSD_DECIMAL).unwrap())),
        any::<bool>().prop_map(|b| Literal::typed(b.to_string(), Iri::new(vocab::XSD_BOOLEAN).unwrap())),
    ]
}

fn arb_triple() -> impl Strategy<Value = Triple> {
    let subject = prop_oneof![arb_iri().prop_map(Subject::Iri), arb_blank().prop_map(Subject::Blank)];
    let object = prop_oneof![
        arb_iri().prop_map(Term::Iri),
        arb_blank().prop_map(Term::Blank),
        arb_literal().prop_map(Term::Literal),
    ];
    (subject, arb_iri(), object).prop_map(|(s, p, o)| Triple::new(s, p, o))
}

fn arb_graph() -> impl Strategy<Value = Graph> {
    (prop::collection::vec(arb_triple(), 0..20), any::<bool>(), any::<bool>()).prop_map(|(ts, ex_prefix, xsd)| {
        let mut g: Graph = ts.into_iter().collect();
        if ex_prefix {
            g.set_prefix("ex", Iri::new("http://example.org/").unwrap());
            g.set_prefix("", Iri::new("http://other.example/ns#").unwrap());
        }
        if xsd {
            g.set_prefix("xsd", Iri::new(vocab::XSD).unwrap());
        }
        g
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn round_trip(g in arb_graph()) {
        let text = serialize_turtle(&g);
        let back = parse_turtle(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(serialize_turtle(&back), text);
    }

    #[test]
    fn union_laws(a in arb_graph(), b in arb_graph(), c in arb_graph()) {
        prop_assert_eq!(a.union(&b), b.union(&a));
        prop_assert_eq!(a.union(&b).union(&c), a.union(&b.union(&c)));
        prop_assert_eq!(a.union(&a), a.clone());
    }

    #[test]
    fn parser_never_panics(s in "\\PC{0,80}") {
        let _ = parse_turtle(&s);
    }
}
