use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::vocab;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("invalid IRI {0:?}: {1}")]
    InvalidIri(String, &'static str),
    #[error("invalid blank node label {0:?}")]
    InvalidBlankLabel(String),
    #[error("invalid language tag {0:?}")]
    InvalidLanguageTag(String),
}

/// An absolute IRI.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, TermError> {
        let value = value.into();
        if value.is_empty() {
            return Err(TermError::InvalidIri(value, "empty"));
        }
        if value.chars().any(|c| {
            c.is_whitespace()
                || c == '<'
                || c == '>'
                || c == '"'
                || c == '{'
                || c == '}'
                || c == '|'
                || c == '\\'
                || c == '^'
                || c == '`'
        }) {
            return Err(TermError::InvalidIri(value, "contains a forbidden character"));
        }
        match value.find(':') {
            Some(idx) if idx > 0 && is_scheme(&value[..idx]) => Ok(Iri(value)),
            _ => Err(TermError::InvalidIri(value, "missing scheme")),
        }
    }

    /// Builds an IRI from a constant known to be valid.
    pub(crate) fn from_static(value: &'static str) -> Self {
        debug_assert!(Iri::new(value).is_ok(), "{value}");
        Iri(value.to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The part after the last `#` or `/`.
    pub fn local_name(&self) -> &str {
        let cut =
            self.0.rfind(['#', '/']).map(|i| i + 1).unwrap_or_else(|| self.0.find(':').map(|i| i + 1).unwrap_or(0));
        &self.0[cut..]
    }

    /// Everything up to and including the last `#` or `/`.
    pub fn namespace(&self) -> &str {
        let local = self.local_name().len();
        &self.0[..self.0.len() - local]
    }
}

fn is_scheme(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl TryFrom<String> for Iri {
    type Error = TermError;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        Iri::new(value)
    }
}

impl From<Iri> for String {
    fn from(value: Iri) -> Self {
        value.0
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// A labeled blank node. Labels are compared literally.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlankNode(String);

impl BlankNode {
    pub fn new(label: impl Into<String>) -> Result<Self, TermError> {
        let label = label.into();
        if !label.is_empty() && label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            Ok(BlankNode(label))
        } else {
            Err(TermError::InvalidBlankLabel(label))
        }
    }

    pub fn label(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for BlankNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "_:{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: String,
    datatype: Iri,
    language: Option<String>,
}

impl Literal {
    /// A plain `xsd:string` literal.
    pub fn string(lexical: impl Into<String>) -> Self {
        Literal { lexical: lexical.into(), datatype: Iri::from_static(vocab::XSD_STRING), language: None }
    }

    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        Literal { lexical: lexical.into(), datatype, language: None }
    }

    /// A language-tagged string; the datatype is always `rdf:langString`.
    pub fn lang(lexical: impl Into<String>, tag: impl Into<String>) -> Result<Self, TermError> {
        let tag = tag.into();
        if !is_language_tag(&tag) {
            return Err(TermError::InvalidLanguageTag(tag));
        }
        Ok(Literal { lexical: lexical.into(), datatype: Iri::from_static(vocab::RDF_LANG_STRING), language: Some(tag) })
    }

    pub fn integer(value: i64) -> Self {
        Literal::typed(value.to_string(), Iri::from_static(vocab::XSD_INTEGER))
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }
}

/// `[a-zA-Z]+ ('-' [a-zA-Z0-9]+)*`
pub fn is_language_tag(tag: &str) -> bool {
    let mut parts = tag.split('-');
    let first_ok = parts.next().is_some_and(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_alphabetic()));
    first_ok && parts.all(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_alphanumeric()))
}

/// The subject position of a triple: never a literal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subject {
    Iri(Iri),
    Blank(BlankNode),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Blank(BlankNode),
    Literal(Literal),
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(l) => Some(l),
            _ => None,
        }
    }

    /// The term as a subject, if it can be one.
    pub fn as_subject(&self) -> Option<Subject> {
        match self {
            Term::Iri(iri) => Some(Subject::Iri(iri.clone())),
            Term::Blank(b) => Some(Subject::Blank(b.clone())),
            Term::Literal(_) => None,
        }
    }
}

impl Subject {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Subject::Iri(iri) => Some(iri),
            Subject::Blank(_) => None,
        }
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<BlankNode> for Term {
    fn from(b: BlankNode) -> Self {
        Term::Blank(b)
    }
}

impl From<Literal> for Term {
    fn from(l: Literal) -> Self {
        Term::Literal(l)
    }
}

impl From<Subject> for Term {
    fn from(s: Subject) -> Self {
        match s {
            Subject::Iri(iri) => Term::Iri(iri),
            Subject::Blank(b) => Term::Blank(b),
        }
    }
}

impl From<Iri> for Subject {
    fn from(iri: Iri) -> Self {
        Subject::Iri(iri)
    }
}

impl From<BlankNode> for Subject {
    fn from(b: BlankNode) -> Self {
        Subject::Blank(b)
    }
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Iri(i) => i.fmt(f),
            Subject::Blank(b) => b.fmt(f),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("\"")?;
        f.write_str(&escape_string(&self.lexical))?;
        f.write_str("\"")?;
        match &self.language {
            Some(tag) => write!(f, "@{tag}"),
            None if self.datatype.as_str() == vocab::XSD_STRING => Ok(()),
            None => write!(f, "^^{}", self.datatype),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(i) => i.fmt(f),
            Term::Blank(b) => b.fmt(f),
            Term::Literal(l) => l.fmt(f),
        }
    }
}

/// Escapes a string body for a double-quoted, single-line literal.
pub fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            '\u{8}' => out.push_str("\\b"),
            '\u{c}' => out.push_str("\\f"),
            c if (c as u32) < 0x20 || c == '\u{7f}' => out.push_str(&format!("\\u{:04X}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Subject,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: impl Into<Subject>, predicate: Iri, object: impl Into<Term>) -> Self {
        Triple { subject: subject.into(), predicate, object: object.into() }
    }
}

/// N-Triples style rendering, one line without the trailing newline.
impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// Triples serialize as their one-line N-Triples form.
impl Serialize for Triple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Triple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let line = String::deserialize(d)?;
        let graph = super::parse_turtle(&line).map_err(D::Error::custom)?;
        let mut iter = graph.iter();
        match (iter.next(), iter.next()) {
            (Some(t), None) => Ok(t.clone()),
            _ => Err(D::Error::custom(format!("expected exactly one triple in {line:?}"))),
        }
    }
}
