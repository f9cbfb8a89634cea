use std::collections::BTreeMap;
use std::fmt::Write;

use crate::rdf::term::{escape_string, Iri, Literal, Subject, Term};
use crate::rdf::{vocab, Graph};

/// Deterministic Turtle rendering.
///
/// Prefixes come first sorted by label, then one block per subject. Subjects,
/// predicates within a subject and objects within a predicate are each sorted
/// by their rendered form, so equal graphs with equal prefix maps produce
/// identical bytes.
pub fn serialize_turtle(graph: &Graph) -> String {
    let prefixes: Vec<(&str, &str)> = graph
        .prefixes()
        .iter()
        .filter(|(label, _)| is_prefix_label(label))
        .map(|(label, ns)| (label.as_str(), ns.as_str()))
        .collect();
    let writer = TermWriter { prefixes: &prefixes };

    let mut out = String::new();
    for (label, ns) in &prefixes {
        let _ = writeln!(out, "@prefix {label}: <{ns}> .");
    }

    let mut blocks: BTreeMap<String, BTreeMap<String, Vec<String>>> = BTreeMap::new();
    for t in graph {
        let predicate =
            if t.predicate.as_str() == vocab::RDF_TYPE { "a".to_string() } else { writer.iri(&t.predicate) };
        blocks
            .entry(writer.subject(&t.subject))
            .or_default()
            .entry(predicate)
            .or_default()
            .push(writer.term(&t.object));
    }

    for (subject, predicates) in blocks {
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str(&subject);
        let count = predicates.len();
        for (i, (predicate, mut objects)) in predicates.into_iter().enumerate() {
            objects.sort();
            let sep = if i == 0 { " " } else { "    " };
            let end = if i + 1 == count { " .\n" } else { " ;\n" };
            let _ = write!(out, "{sep}{predicate} {}{end}", objects.join(", "));
        }
    }
    out
}

struct TermWriter<'a> {
    prefixes: &'a [(&'a str, &'a str)],
}

impl TermWriter<'_> {
    fn iri(&self, iri: &Iri) -> String {
        let value = iri.as_str();
        let best = self
            .prefixes
            .iter()
            .filter(|(_, ns)| value.starts_with(ns) && is_local_name(&value[ns.len()..]))
            .max_by(|a, b| a.1.len().cmp(&b.1.len()).then_with(|| b.0.cmp(a.0)));
        match best {
            Some((label, ns)) => format!("{label}:{}", &value[ns.len()..]),
            None => format!("<{value}>"),
        }
    }

    fn subject(&self, s: &Subject) -> String {
        match s {
            Subject::Iri(iri) => self.iri(iri),
            Subject::Blank(b) => b.to_string(),
        }
    }

    fn term(&self, t: &Term) -> String {
        match t {
            Term::Iri(iri) => self.iri(iri),
            Term::Blank(b) => b.to_string(),
            Term::Literal(l) => self.literal(l),
        }
    }

    fn literal(&self, l: &Literal) -> String {
        let lexical = l.lexical();
        if let Some(tag) = l.language() {
            return format!("\"{}\"@{tag}", escape_string(lexical));
        }
        match l.datatype().as_str() {
            vocab::XSD_STRING => format!("\"{}\"", escape_string(lexical)),
            vocab::XSD_INTEGER if is_integer(lexical) => lexical.to_string(),
            vocab::XSD_DECIMAL if is_decimal(lexical) => lexical.to_string(),
            vocab::XSD_BOOLEAN if lexical == "true" || lexical == "false" => lexical.to_string(),
            _ => format!("\"{}\"^^{}", escape_string(lexical), self.iri(l.datatype())),
        }
    }
}

fn is_prefix_label(label: &str) -> bool {
    if label.is_empty() {
        return true;
    }
    let mut chars = label.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
        && !label.ends_with('.')
}

/// Local parts the parser reads back unchanged.
fn is_local_name(local: &str) -> bool {
    if local.is_empty() {
        return true;
    }
    let mut chars = local.chars();
    chars.next().is_some_and(|c| c.is_alphanumeric() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'))
        && !local.ends_with('.')
}

fn is_integer(s: &str) -> bool {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit())
}

fn is_decimal(s: &str) -> bool {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    match body.split_once('.') {
        Some((int, frac)) => {
            int.chars().all(|c| c.is_ascii_digit()) && !frac.is_empty() && frac.chars().all(|c| c.is_ascii_digit())
        }
        None => false,
    }
}
