use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{error_issues, extract, ontology_call, Rejection, StageError};
use crate::agent::{Gateway, Stage, TemplateSet};
use crate::ontology::tokens::{jaccard, token_set};
use crate::ontology::{ontology_diff, ontology_to_graph, validate_ontology, DiffReport, Ontology};
use crate::rdf::{serialize_turtle, Graph, Iri};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefineOptions {
    pub max_attempts: u32,
    /// Accept refinements that remove elements without a replacement.
    pub allow_drops: bool,
    /// Minimum label-token Jaccard score for pairing a removed element with
    /// an added one when the agent gave no mapping for it.
    pub similarity_threshold: f64,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions { max_attempts: 3, allow_drops: false, similarity_threshold: 0.8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementReport {
    pub diff: DiffReport,
    pub rename_map: BTreeMap<Iri, Vec<Iri>>,
    pub unmapped_removals: Vec<Iri>,
    pub accepted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl RefinementReport {
    fn rejected(error: String) -> Self {
        RefinementReport {
            diff: DiffReport::default(),
            rename_map: BTreeMap::new(),
            unmapped_removals: Vec::new(),
            accepted: false,
            error: Some(error),
        }
    }
}

/// Parses mapping lines of the form `ex:old -> ex:new1, ex:new2`.
///
/// Names resolve against the prefixes of `graph`; `<...>` IRIs are taken as
/// written. Blank lines and lines starting with `#` are ignored. An empty
/// right-hand side records a deliberate drop.
pub fn parse_mapping(text: &str, graph: &Graph) -> Result<BTreeMap<Iri, Vec<Iri>>, String> {
    let resolve = |name: &str, line: usize| -> Result<Iri, String> {
        let name = name.trim();
        let resolved = if let Some(inner) = name.strip_prefix('<').and_then(|n| n.strip_suffix('>')) {
            Iri::new(inner)
        } else {
            let (prefix, local) =
                name.split_once(':').ok_or_else(|| format!("mapping line {line}: {name:?} is not a prefixed name"))?;
            let ns = graph.prefix(prefix).ok_or_else(|| format!("mapping line {line}: unknown prefix {prefix:?}"))?;
            Iri::new(format!("{}{local}", ns.as_str()))
        };
        resolved.map_err(|e| format!("mapping line {line}: {e}"))
    };
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (old, new) = line.split_once("->").ok_or_else(|| format!("mapping line {}: missing '->'", i + 1))?;
        let targets = new
            .split(',')
            .filter(|n| !n.trim().is_empty())
            .map(|n| resolve(n, i + 1))
            .collect::<Result<Vec<_>, _>>()?;
        map.insert(resolve(old, i + 1)?, targets);
    }
    Ok(map)
}

/// Asks the agent for a revised ontology and reconciles it with `o`.
///
/// The original ontology comes back unchanged whenever the refinement is not
/// accepted, including when the agent never produced valid output.
pub fn refine_ontology(
    o: &Ontology,
    gw: &Gateway,
    templates: &TemplateSet,
    opts: &RefineOptions,
) -> Result<(Ontology, RefinementReport), StageError> {
    let prompt = templates.render(
        Stage::Refine,
        &[("namespace", o.namespace.as_str()), ("ontology", serialize_turtle(&ontology_to_graph(o)).trim_end())],
    )?;
    let outcome = ontology_call(gw, gw.request(Stage::Refine, prompt), opts.max_attempts, |reply| {
        if let Some(errors) = error_issues(&validate_ontology(&reply.ontology)) {
            return Err(Rejection::Structure(errors));
        }
        if reply.ontology.classes.is_empty() {
            return Err(Rejection::Structure("the revised ontology declares no classes".into()));
        }
        let mapping = match extract::extract_tagged_block(&reply.text, "mapping") {
            Some(block) => parse_mapping(block, &reply.graph).map_err(Rejection::Syntax)?,
            None => BTreeMap::new(),
        };
        Ok((reply.ontology, mapping))
    });
    let (mut revised, mapping) = match outcome {
        Ok(v) => v,
        Err(e @ (StageError::InvalidRdf { .. } | StageError::InvalidOntology { .. } | StageError::Agent(_))) => {
            tracing::warn!(error = %e, "refinement failed; keeping the input ontology");
            return Ok((o.clone(), RefinementReport::rejected(e.to_string())));
        }
        Err(e) => return Err(e),
    };
    revised.namespace = o.namespace.clone();

    let diff = ontology_diff(o, &revised);
    let (rename_map, unmapped_removals) = reconcile(o, &revised, &diff, &mapping, opts.similarity_threshold);
    let accepted = opts.allow_drops || unmapped_removals.is_empty();
    let error = (!accepted).then(|| format!("{} element(s) removed without a mapping", unmapped_removals.len()));
    let report = RefinementReport { diff, rename_map, unmapped_removals, accepted, error };
    Ok((if accepted { revised } else { o.clone() }, report))
}

fn reconcile(
    old: &Ontology,
    new: &Ontology,
    diff: &DiffReport,
    mapping: &BTreeMap<Iri, Vec<Iri>>,
    threshold: f64,
) -> (BTreeMap<Iri, Vec<Iri>>, Vec<Iri>) {
    let mut rename_map = BTreeMap::new();
    let mut unmapped = Vec::new();
    let groups = [(&diff.removed_classes, &diff.added_classes), (&diff.removed_properties, &diff.added_properties)];
    for (removed, added) in groups {
        let mut claimed = BTreeSet::new();
        let mut pending = Vec::new();
        for iri in removed {
            let targets: Vec<Iri> =
                mapping.get(iri).map(|ts| ts.iter().filter(|t| new.contains(t)).cloned().collect()).unwrap_or_default();
            if targets.is_empty() {
                pending.push(iri);
            } else {
                claimed.extend(targets.iter().cloned());
                rename_map.insert(iri.clone(), targets);
            }
        }
        for iri in pending {
            let tokens = label_tokens(old, iri);
            let best = added
                .iter()
                .filter(|a| !claimed.contains(*a))
                .map(|a| (jaccard(&tokens, &label_tokens(new, a)), a))
                .filter(|(score, _)| *score >= threshold)
                .fold(None::<(f64, &Iri)>, |best, cand| match best {
                    Some(b) if b.0 >= cand.0 => Some(b),
                    _ => Some(cand),
                });
            match best {
                Some((_, target)) => {
                    claimed.insert(target.clone());
                    rename_map.insert(iri.clone(), vec![target.clone()]);
                }
                None => unmapped.push(iri.clone()),
            }
        }
    }
    (rename_map, unmapped)
}

/// Tokens of the element's label, or of its local name when unlabeled.
fn label_tokens(o: &Ontology, iri: &Iri) -> BTreeSet<String> {
    let label = o
        .classes
        .get(iri)
        .and_then(|c| c.label.as_deref())
        .or_else(|| o.properties.get(iri).and_then(|p| p.label.as_deref()));
    token_set(label.unwrap_or_else(|| iri.local_name()))
}
