//! Product knowledge graph construction from unstructured product
//! descriptions.
//!
//! The pipeline has three agent-driven stages: ontology creation with
//! iterative expansion, zero-shot ontology refinement, and per-product graph
//! population. Every stage talks to the language model through
//! [`agent::Gateway`], which can replay recorded exchanges so whole runs are
//! reproducible offline.

pub mod agent;
pub mod corpus;
pub mod metrics;
pub mod ontology;
pub mod rdf;
pub mod stages;
