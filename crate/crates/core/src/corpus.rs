//! Product description corpus: JSON Lines ingestion and seeded sampling.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductRecord {
    pub id: String,
    pub category: String,
    pub description: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read corpus {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {reason}")]
    Ingest { line: usize, reason: String },
    #[error("unknown category {0:?}")]
    UnknownCategory(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    records: Vec<ProductRecord>,
    categories: BTreeMap<String, Vec<usize>>,
}

impl Corpus {
    /// Builds a corpus, enforcing unique ids and non-empty descriptions.
    pub fn from_records(records: Vec<ProductRecord>) -> Result<Self, CorpusError> {
        let mut corpus = Corpus::default();
        for (i, r) in records.into_iter().enumerate() {
            corpus.push(r, i + 1)?;
        }
        Ok(corpus)
    }

    fn push(&mut self, record: ProductRecord, line: usize) -> Result<(), CorpusError> {
        if record.id.trim().is_empty() {
            return Err(CorpusError::Ingest { line, reason: "empty id".into() });
        }
        if record.description.trim().is_empty() {
            return Err(CorpusError::Ingest { line, reason: "empty description".into() });
        }
        if self.records.iter().any(|r| r.id == record.id) {
            return Err(CorpusError::Ingest { line, reason: format!("duplicate-id {:?}", record.id) });
        }
        self.categories.entry(record.category.clone()).or_default().push(self.records.len());
        self.records.push(record);
        Ok(())
    }

    /// Parses JSON Lines text. Blank lines are skipped but still counted.
    pub fn parse_jsonl(text: &str) -> Result<Self, CorpusError> {
        #[derive(Deserialize)]
        struct Line {
            id: Option<String>,
            category: Option<String>,
            description: Option<String>,
            source: Option<String>,
        }
        let mut corpus = Corpus::default();
        let mut seen = HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let parsed: Line = serde_json::from_str(raw)
                .map_err(|e| CorpusError::Ingest { line, reason: format!("malformed JSON: {e}") })?;
            let missing =
                |field: &str| CorpusError::Ingest { line, reason: format!("missing required field {field:?}") };
            let record = ProductRecord {
                id: parsed.id.ok_or_else(|| missing("id"))?,
                category: parsed.category.ok_or_else(|| missing("category"))?,
                description: parsed.description.ok_or_else(|| missing("description"))?,
                source: parsed.source,
            };
            if !seen.insert(record.id.clone()) {
                return Err(CorpusError::Ingest { line, reason: format!("duplicate-id {:?}", record.id) });
            }
            corpus.push(record, line)?;
        }
        Ok(corpus)
    }

    pub fn records(&self) -> &[ProductRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Category names in lexical order.
    pub fn categories(&self) -> impl Iterator<Item = &str> {
        self.categories.keys().map(String::as_str)
    }

    pub fn category(&self, name: &str) -> impl Iterator<Item = &ProductRecord> {
        self.categories.get(name).into_iter().flatten().map(|&i| &self.records[i])
    }

    pub fn category_len(&self, name: &str) -> usize {
        self.categories.get(name).map_or(0, Vec::len)
    }

    pub fn to_jsonl(&self) -> String {
        self.records.iter().map(|r| serde_json::to_string(r).expect("record serializes") + "\n").collect()
    }
}

pub fn load_corpus(path: &Path) -> Result<Corpus, CorpusError> {
    let text =
        fs::read_to_string(path).map_err(|source| CorpusError::Io { path: path.display().to_string(), source })?;
    Corpus::parse_jsonl(&text)
}

/// How records are drawn for ontology expansion.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingStrategy {
    #[default]
    Uniform,
}

/// Draws `min(n, |category|)` distinct records of `category` by a seeded
/// permutation. The same inputs always give the same list.
pub fn sample_products(c: &Corpus, category: &str, n: usize, seed: u64) -> Result<Vec<ProductRecord>, CorpusError> {
    let Some(indices) = c.categories.get(category) else {
        if c.is_empty() {
            return Ok(Vec::new());
        }
        return Err(CorpusError::UnknownCategory(category.to_string()));
    };
    let mut order = indices.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    Ok(order.into_iter().take(n).map(|i| c.records[i].clone()).collect())
}
