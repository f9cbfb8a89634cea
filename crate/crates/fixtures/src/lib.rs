//! Test fixtures for kgforge: a deterministic stand-in for the language
//! model, the scenarios it is scripted for, and random generators used by
//! the property suites.

pub mod agent;
pub mod catalog;
pub mod generate;
pub mod paper_scale;
pub mod random;
pub mod scenarios;
pub mod schema;

pub use agent::{RefinePlan, SyntheticAgent};
pub use catalog::{Entity, ProductFacts, Value};
