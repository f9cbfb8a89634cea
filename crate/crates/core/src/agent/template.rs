use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TemplateError {
    #[error("missing template variable {name:?}")]
    MissingVariable { name: String },
    #[error("unterminated placeholder in template {id:?}")]
    Unterminated { id: String },
    #[error("template {id:?} does not reference required placeholder {name:?}")]
    MissingPlaceholder { id: String, name: String },
    #[error("cannot read template {path}: {reason}")]
    Io { path: String, reason: String },
}

/// The four agent stages and the placeholders each template must use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Bootstrap,
    Expand,
    Refine,
    Populate,
}

impl Stage {
    pub const ALL: [Stage; 4] = [Stage::Bootstrap, Stage::Expand, Stage::Refine, Stage::Populate];

    pub fn id(self) -> &'static str {
        match self {
            Stage::Bootstrap => "bootstrap",
            Stage::Expand => "expand",
            Stage::Refine => "refine",
            Stage::Populate => "populate",
        }
    }

    pub fn required_placeholders(self) -> &'static [&'static str] {
        match self {
            Stage::Bootstrap => &["category", "namespace", "descriptions"],
            Stage::Expand => &["category", "namespace", "ontology", "descriptions"],
            Stage::Refine => &["namespace", "ontology"],
            Stage::Populate => &["ontology", "product_id", "subject_iri", "description"],
        }
    }

    fn builtin_body(self) -> &'static str {
        match self {
            Stage::Bootstrap => include_str!("../../prompts/bootstrap.txt"),
            Stage::Expand => include_str!("../../prompts/expand.txt"),
            Stage::Refine => include_str!("../../prompts/refine.txt"),
            Stage::Populate => include_str!("../../prompts/populate.txt"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptTemplate {
    pub id: String,
    pub body: String,
}

impl PromptTemplate {
    pub fn new(id: impl Into<String>, body: impl Into<String>) -> Self {
        PromptTemplate { id: id.into(), body: body.into() }
    }

    /// Placeholder names in order of first appearance.
    pub fn placeholders(&self) -> Result<Vec<String>, TemplateError> {
        let mut names = Vec::new();
        for segment in segments(&self.body).map_err(|()| TemplateError::Unterminated { id: self.id.clone() })? {
            if let Segment::Var(name) = segment {
                if !names.iter().any(|n| n == name) {
                    names.push(name.to_string());
                }
            }
        }
        Ok(names)
    }
}

enum Segment<'a> {
    Text(&'a str),
    Var(&'a str),
}

fn segments(body: &str) -> Result<Vec<Segment<'_>>, ()> {
    let mut out = Vec::new();
    let mut rest = body;
    while let Some(start) = rest.find("{{") {
        out.push(Segment::Text(&rest[..start]));
        let after = &rest[start + 2..];
        let end = after.find("}}").ok_or(())?;
        out.push(Segment::Var(after[..end].trim()));
        rest = &after[end + 2..];
    }
    out.push(Segment::Text(rest));
    Ok(out)
}

/// Replaces every `{{name}}` with `vars[name]` in one pass; substituted text
/// is never rescanned. Variables the template does not use are ignored with
/// a warning.
pub fn render_prompt(t: &PromptTemplate, vars: &BTreeMap<String, String>) -> Result<String, TemplateError> {
    let parts = segments(&t.body).map_err(|()| TemplateError::Unterminated { id: t.id.clone() })?;
    let mut out = String::with_capacity(t.body.len());
    let mut used = Vec::new();
    for part in parts {
        match part {
            Segment::Text(s) => out.push_str(s),
            Segment::Var(name) => {
                let value = vars.get(name).ok_or_else(|| TemplateError::MissingVariable { name: name.to_string() })?;
                out.push_str(value);
                used.push(name);
            }
        }
    }
    for name in vars.keys().filter(|k| !used.contains(&k.as_str())) {
        tracing::warn!(template = %t.id, variable = %name, "unused template variable");
    }
    Ok(out)
}

/// One template per stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateSet {
    templates: BTreeMap<Stage, PromptTemplate>,
}

impl TemplateSet {
    /// The templates compiled into the crate (`prompts/<id>.txt`).
    pub fn builtin() -> Self {
        let templates = Stage::ALL.into_iter().map(|s| (s, PromptTemplate::new(s.id(), s.builtin_body()))).collect();
        TemplateSet { templates }
    }

    /// Loads `<dir>/<id>.txt` for every stage.
    pub fn load_dir(dir: &Path) -> Result<Self, TemplateError> {
        let mut templates = BTreeMap::new();
        for stage in Stage::ALL {
            let path = dir.join(format!("{}.txt", stage.id()));
            let body = fs::read_to_string(&path)
                .map_err(|e| TemplateError::Io { path: path.display().to_string(), reason: e.to_string() })?;
            templates.insert(stage, PromptTemplate::new(stage.id(), body));
        }
        Self::from_templates(templates)
    }

    pub fn from_templates(templates: BTreeMap<Stage, PromptTemplate>) -> Result<Self, TemplateError> {
        for stage in Stage::ALL {
            let t = templates
                .get(&stage)
                .ok_or_else(|| TemplateError::Io { path: stage.id().to_string(), reason: "template missing".into() })?;
            let present = t.placeholders()?;
            for name in stage.required_placeholders() {
                if !present.iter().any(|p| p == name) {
                    return Err(TemplateError::MissingPlaceholder { id: t.id.clone(), name: name.to_string() });
                }
            }
        }
        Ok(TemplateSet { templates })
    }

    pub fn get(&self, stage: Stage) -> &PromptTemplate {
        &self.templates[&stage]
    }

    pub fn render(&self, stage: Stage, vars: &[(&str, &str)]) -> Result<String, TemplateError> {
        let vars = vars.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        render_prompt(self.get(stage), &vars)
    }
}
