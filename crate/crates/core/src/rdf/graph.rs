use std::collections::{btree_set, BTreeMap, BTreeSet};

use super::term::{Iri, Subject, Term, Triple};

/// A set of triples plus cosmetic prefix declarations.
///
/// Equality compares triples only; prefixes never affect meaning because
/// triples store full IRIs.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    triples: BTreeSet<Triple>,
    prefixes: BTreeMap<String, Iri>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.triples == other.triples
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false when the triple was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(triple)
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        self.triples.remove(triple)
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> btree_set::Iter<'_, Triple> {
        self.triples.iter()
    }

    /// Declares a prefix, replacing any previous namespace for the label.
    pub fn set_prefix(&mut self, label: impl Into<String>, namespace: Iri) {
        self.prefixes.insert(label.into(), namespace);
    }

    pub fn prefixes(&self) -> &BTreeMap<String, Iri> {
        &self.prefixes
    }

    pub fn prefix(&self, label: &str) -> Option<&Iri> {
        self.prefixes.get(label)
    }

    /// Triples whose subject is `subject`.
    pub fn triples_for<'a>(&'a self, subject: &'a Subject) -> impl Iterator<Item = &'a Triple> + 'a {
        self.triples.iter().filter(move |t| &t.subject == subject)
    }

    /// Objects of `(subject, predicate, ?)`.
    pub fn objects<'a>(&'a self, subject: &'a Subject, predicate: &'a str) -> impl Iterator<Item = &'a Term> + 'a {
        self.triples_for(subject).filter(move |t| t.predicate.as_str() == predicate).map(|t| &t.object)
    }

    /// Set union of triples. Prefix conflicts (same label, different
    /// namespace) rename `other`'s label with the first free numeric suffix.
    pub fn union(&self, other: &Graph) -> Graph {
        let mut out = self.clone();
        out.absorb(other);
        out
    }

    /// In-place form of [`Graph::union`].
    pub fn absorb(&mut self, other: &Graph) {
        self.triples.extend(other.triples.iter().cloned());
        for (label, ns) in &other.prefixes {
            match self.prefixes.get(label) {
                None => {
                    self.prefixes.insert(label.clone(), ns.clone());
                }
                Some(existing) if existing == ns => {}
                Some(_) => {
                    if self.prefixes.values().any(|v| v == ns) {
                        continue;
                    }
                    let fresh = (2..)
                        .map(|n| format!("{label}{n}"))
                        .find(|l| !self.prefixes.contains_key(l))
                        .expect("unbounded suffix search");
                    self.prefixes.insert(fresh, ns.clone());
                }
            }
        }
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<T: IntoIterator<Item = Triple>>(iter: T) -> Self {
        Graph { triples: iter.into_iter().collect(), prefixes: BTreeMap::new() }
    }
}

impl Extend<Triple> for Graph {
    fn extend<T: IntoIterator<Item = Triple>>(&mut self, iter: T) {
        self.triples.extend(iter)
    }
}

impl<'a> IntoIterator for &'a Graph {
    type Item = &'a Triple;
    type IntoIter = btree_set::Iter<'a, Triple>;
    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

impl IntoIterator for Graph {
    type Item = Triple;
    type IntoIter = btree_set::IntoIter<Triple>;
    fn into_iter(self) -> Self::IntoIter {
        self.triples.into_iter()
    }
}
