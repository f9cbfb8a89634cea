//! Structured product facts and the prose descriptions rendered from them.

use kgforge_core::corpus::ProductRecord;
use kgforge_core::rdf::{vocab, Iri, Literal};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    /// Decimal lexical form, kept as written.
    Dec(String),
    Str(String),
    Bool(bool),
}

impl Value {
    pub fn literal(&self) -> Literal {
        let typed = |lex: String, dt: &str| Literal::typed(lex, Iri::new(dt).expect("xsd datatype"));
        match self {
            Value::Int(v) => Literal::integer(*v),
            Value::Dec(v) => typed(v.clone(), vocab::XSD_DECIMAL),
            Value::Str(v) => Literal::string(v.clone()),
            Value::Bool(v) => typed(v.to_string(), vocab::XSD_BOOLEAN),
        }
    }
}

/// A secondary entity the product refers to, such as its brand.
#[derive(Debug, Clone, PartialEq)]
pub struct Entity {
    /// Appended to the product subject IRI after a hyphen.
    pub suffix: String,
    pub class: String,
    pub values: Vec<(String, Value)>,
}

/// What a careful reader could extract from one description. Property and
/// class names are local names in the scenario's namespace.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductFacts {
    pub record: ProductRecord,
    pub class: String,
    pub values: Vec<(String, Value)>,
    pub links: Vec<(String, Entity)>,
}

impl ProductFacts {
    /// Every property the facts use, including those of linked entities.
    pub fn properties(&self) -> impl Iterator<Item = &str> {
        self.values.iter().map(|(p, _)| p.as_str()).chain(
            self.links
                .iter()
                .flat_map(|(p, e)| std::iter::once(p.as_str()).chain(e.values.iter().map(|(q, _)| q.as_str()))),
        )
    }
}
