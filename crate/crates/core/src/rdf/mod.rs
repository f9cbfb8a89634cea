//! RDF graph model and the Turtle subset reader/writer.

mod graph;
mod term;
pub mod turtle;
pub mod vocab;

pub use graph::Graph;
pub use term::{escape_string, BlankNode, Iri, Literal, Subject, Term, TermError, Triple};
pub use turtle::{parse_turtle, serialize_turtle, SyntaxError};
