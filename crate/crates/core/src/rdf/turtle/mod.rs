//! The supported Turtle subset: `@prefix`, absolute IRIs, prefixed names,
//! `a`, predicate and object lists, labeled blank nodes, short and long
//! string literals with language tags or datatypes, and bare
//! integer/decimal/boolean tokens. See `docs/turtle-subset.md`.

mod parser;
mod serializer;

use thiserror::Error;

pub use parser::parse_turtle;
pub use serializer::serialize_turtle;

/// Position is 1-based; columns count Unicode scalar values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at line {line}, column {column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[cfg(test)]
mod tests;
