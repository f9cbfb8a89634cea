//! Compares the parser against triples frozen from an independent Turtle
//! implementation (see tools/turtle_golden.py).

use std::fs;
use std::path::PathBuf;

use kgforge_core::rdf::{parse_turtle, serialize_turtle, Subject, Term};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/turtle")
}

fn canonical_subject(s: &Subject) -> String {
    match s {
        Subject::Iri(i) => format!("I|{}", i.as_str()),
        Subject::Blank(_) => "B|".to_string(),
    }
}

fn canonical_term(t: &Term) -> String {
    match t {
        Term::Iri(i) => format!("I|{}", i.as_str()),
        Term::Blank(_) => "B|".to_string(),
        Term::Literal(l) => format!(
            "L|{}|{}|{}",
            serde_json::to_string(l.lexical()).unwrap(),
            l.datatype().as_str(),
            l.language().unwrap_or("")
        ),
    }
}

#[test]
fn parser_matches_reference_goldens() {
    let mut checked = 0;
    for entry in fs::read_dir(fixtures()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("ttl") {
            continue;
        }
        let text = fs::read_to_string(&path).unwrap();
        let graph = parse_turtle(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let mut lines: Vec<String> = graph
            .iter()
            .map(|t| {
                format!("{}\tI|{}\t{}", canonical_subject(&t.subject), t.predicate.as_str(), canonical_term(&t.object))
            })
            .collect();
        lines.sort();
        let golden = fs::read_to_string(path.with_extension("golden")).unwrap();
        let expected: Vec<&str> = golden.lines().collect();
        assert_eq!(lines, expected, "{}", path.display());

        let again = parse_turtle(&serialize_turtle(&graph)).unwrap();
        assert_eq!(again, graph);
        checked += 1;
    }
    assert_eq!(checked, 3);
}

#[test]
fn numeric_tokens_keep_their_lexical_form() {
    let g = parse_turtle("<http://e.org/s> <http://e.org/p> +5, 007, .5 .").unwrap();
    let mut lexicals: Vec<&str> = g.iter().filter_map(|t| t.object.as_literal()).map(|l| l.lexical()).collect();
    lexicals.sort();
    assert_eq!(lexicals, ["+5", ".5", "007"]);
}
