//! A scripted model that answers every pipeline prompt from structured facts.
//!
//! It reads only what a real model would see: the stage, the product ids and
//! the ontology embedded in the prompt. Its answers are well-formed unless a
//! product is listed as malformed, so recorded runs exercise the same parsing
//! and validation paths as live ones.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use kgforge_core::agent::{AgentRequest, Backend, Gateway, GatewayError, ScriptedBackend, Stage};
use kgforge_core::ontology::{ontology_from_graph, ontology_to_graph, Ontology};
use kgforge_core::rdf::{parse_turtle, serialize_turtle, vocab, Graph, Iri, Subject, Triple};
use kgforge_core::stages::extract::extract_turtle;

use crate::catalog::ProductFacts;
use crate::schema::term;

/// How the agent revises an ontology when asked to refine it. The plan only
/// applies when every element of `remove` is present; otherwise the agent
/// returns the ontology unchanged.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RefinePlan {
    pub remove: Vec<String>,
    /// Properties taken from the agent's schema.
    pub add: Vec<String>,
    /// Mapping lines to report, as (old, new) local names.
    pub mapping: Vec<(String, Vec<String>)>,
}

#[derive(Debug, Clone)]
pub struct SyntheticAgent {
    /// Every element the agent knows how to describe.
    pub schema: Ontology,
    pub products: BTreeMap<String, ProductFacts>,
    /// Product ids whose population response is broken Turtle.
    pub malformed: BTreeSet<String>,
    /// Properties the agent only introduces during refinement.
    pub refine_only: BTreeSet<String>,
    pub refine: RefinePlan,
}

impl SyntheticAgent {
    pub fn new(schema: Ontology, products: Vec<ProductFacts>) -> Self {
        SyntheticAgent {
            schema,
            products: products.into_iter().map(|p| (p.record.id.clone(), p)).collect(),
            malformed: BTreeSet::new(),
            refine_only: BTreeSet::new(),
            refine: RefinePlan::default(),
        }
    }

    pub fn respond(&self, req: &AgentRequest) -> Result<String, GatewayError> {
        let prompt = req.rendered_prompt();
        match req.template_id() {
            id if id == Stage::Bootstrap.id() || id == Stage::Expand.id() => Ok(self.schema_for(prompt)),
            id if id == Stage::Refine.id() => self.refined(prompt),
            id if id == Stage::Populate.id() => self.populated(prompt),
            other => Err(GatewayError::Script(format!("no script for template {other:?}"))),
        }
    }

    pub fn backend(self) -> Box<dyn Backend> {
        let agent = Arc::new(self);
        Box::new(ScriptedBackend::new(move |req| agent.respond(req)))
    }

    pub fn gateway(self) -> Gateway {
        Gateway::new(self.backend())
    }

    /// Ontology elements revealed by the products named in the prompt.
    fn schema_for(&self, prompt: &str) -> String {
        let section = prompt.split_once("Product descriptions:").map_or(prompt, |(_, rest)| rest);
        let mut subset = Ontology::new(self.schema.namespace.clone());
        for line in section.lines() {
            let Some(id) = line.strip_prefix("Product ").and_then(|l| l.strip_suffix(':')) else { continue };
            let Some(facts) = self.products.get(id) else { continue };
            self.include_class(&mut subset, &facts.class);
            for (property, entity) in &facts.links {
                self.include_property(&mut subset, property);
                self.include_class(&mut subset, &entity.class);
            }
            for property in facts.properties() {
                self.include_property(&mut subset, property);
            }
        }
        fenced("Here is the ontology.", &serialize_turtle(&ontology_to_graph(&subset)))
    }

    fn include_class(&self, subset: &mut Ontology, local: &str) {
        for iri in self.schema.ancestors_or_self(&term(&self.schema, local)) {
            if let Some(c) = self.schema.classes.get(&iri) {
                subset.add_class(c.clone());
            }
        }
    }

    fn include_property(&self, subset: &mut Ontology, local: &str) {
        if self.refine_only.contains(local) {
            return;
        }
        let Some(p) = self.schema.properties.get(&term(&self.schema, local)) else { return };
        for class in p.domain.iter().chain(p.range.iter()) {
            if self.schema.classes.contains_key(class) {
                self.include_class(subset, class.local_name());
            }
        }
        subset.add_property(p.clone());
    }

    fn refined(&self, prompt: &str) -> Result<String, GatewayError> {
        let mut o = prompt_ontology(prompt)?;
        let plan = &self.refine;
        let applies = !plan.remove.is_empty() && plan.remove.iter().all(|l| o.contains(&term(&o, l)));
        let mut mapping = String::new();
        if applies {
            for local in &plan.remove {
                let iri = term(&o, local);
                o.properties.remove(&iri);
                o.classes.remove(&iri);
            }
            for local in &plan.add {
                if let Some(p) = self.schema.properties.get(&term(&self.schema, local)) {
                    o.add_property(p.clone());
                }
            }
            for (old, new) in &plan.mapping {
                let targets: Vec<String> = new.iter().map(|n| format!("ex:{n}")).collect();
                mapping.push_str(&format!("ex:{old} -> {}\n", targets.join(", ")));
            }
        }
        let mut out = fenced("Revised ontology:", &serialize_turtle(&ontology_to_graph(&o)));
        if !mapping.is_empty() {
            out.push_str(&format!("\nMapping of replaced terms:\n```mapping\n{mapping}```\n"));
        }
        Ok(out)
    }

    fn populated(&self, prompt: &str) -> Result<String, GatewayError> {
        let id = field(prompt, "Product id: ").ok_or_else(|| GatewayError::Script("no product id in prompt".into()))?;
        let subject = field(prompt, "Subject IRI: <")
            .and_then(|s| s.strip_suffix('>'))
            .ok_or_else(|| GatewayError::Script("no subject IRI in prompt".into()))?;
        let facts = self.products.get(id).ok_or_else(|| GatewayError::Script(format!("unknown product {id}")))?;
        let o = prompt_ontology(prompt)?;
        let ns = o.namespace.as_str();
        if self.malformed.contains(id) {
            return Ok(format!(
                "```turtle\n@prefix ex: <{ns}> .\n<{subject}> a ex:{} ;\n    ex:{} \"unterminated .\n```\n",
                facts.class,
                facts.values.first().map_or("name", |(p, _)| p.as_str())
            ));
        }

        let iri = |s: String| Iri::new(s).expect("valid IRI");
        let rdf_type = iri(vocab::RDF_TYPE.to_string());
        let root = Subject::Iri(iri(subject.to_string()));
        let mut g = Graph::new();
        g.set_prefix("ex", o.namespace.clone());
        g.set_prefix("xsd", iri(vocab::XSD.to_string()));
        g.insert(Triple::new(root.clone(), rdf_type.clone(), term(&o, &facts.class)));
        for (property, value) in &facts.values {
            let p = term(&o, property);
            if o.properties.contains_key(&p) {
                g.insert(Triple::new(root.clone(), p, value.literal()));
            }
        }
        for (property, entity) in &facts.links {
            let p = term(&o, property);
            if !o.properties.contains_key(&p) {
                continue;
            }
            let target = iri(format!("{subject}-{}", entity.suffix));
            g.insert(Triple::new(root.clone(), p, target.clone()));
            g.insert(Triple::new(target.clone(), rdf_type.clone(), term(&o, &entity.class)));
            for (q, value) in &entity.values {
                let q = term(&o, q);
                if o.properties.contains_key(&q) {
                    g.insert(Triple::new(target.clone(), q, value.literal()));
                }
            }
        }
        Ok(fenced(&format!("Triples for {id}:"), &serialize_turtle(&g)))
    }
}

fn fenced(intro: &str, turtle: &str) -> String {
    format!("{intro}\n\n```turtle\n{turtle}```\n")
}

fn field<'a>(prompt: &'a str, key: &str) -> Option<&'a str> {
    prompt.lines().find_map(|l| l.strip_prefix(key)).map(str::trim)
}

fn prompt_ontology(prompt: &str) -> Result<Ontology, GatewayError> {
    let graph = parse_turtle(extract_turtle(prompt)).map_err(|e| GatewayError::Script(e.to_string()))?;
    let (o, _) = ontology_from_graph(&graph).map_err(|e| GatewayError::Script(e.to_string()))?;
    Ok(o)
}
