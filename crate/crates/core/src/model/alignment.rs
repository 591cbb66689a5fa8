use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::BitSet;
use crate::error::{Error, Result};

/// Kind of correspondence between a source (first ontology) and a target
/// (second ontology) class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Relation {
    /// `source ≡ target`
    #[serde(rename = "=")]
    Equivalent,
    /// `source ⊑ target`
    #[serde(rename = "<")]
    SubsumedBy,
    /// `source ⊒ target`
    #[serde(rename = ">")]
    Subsumes,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Equivalent => "=",
            Relation::SubsumedBy => "<",
            Relation::Subsumes => ">",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        match s {
            "=" => Some(Relation::Equivalent),
            "<" => Some(Relation::SubsumedBy),
            ">" => Some(Relation::Subsumes),
            _ => None,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Identity of a mapping, ignoring its confidence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MappingKey {
    pub source: String,
    pub target: String,
    pub relation: Relation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mapping {
    pub source: String,
    pub target: String,
    pub relation: Relation,
    pub confidence: f64,
}

impl Mapping {
    pub fn new(source: impl Into<String>, target: impl Into<String>, relation: Relation, confidence: f64) -> Self {
        Mapping {
            source: source.into(),
            target: target.into(),
            relation,
            confidence,
        }
    }

    pub fn key(&self) -> MappingKey {
        MappingKey {
            source: self.source.clone(),
            target: self.target.clone(),
            relation: self.relation,
        }
    }

    /// Canonical order: source, then target, then relation.
    pub fn canonical_cmp(&self, other: &Mapping) -> Ordering {
        (self.source.as_str(), self.target.as_str(), self.relation).cmp(&(
            other.source.as_str(),
            other.target.as_str(),
            other.relation,
        ))
    }
}

impl fmt::Display for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} ({})",
            self.source, self.relation, self.target, self.confidence
        )
    }
}

/// Position of a mapping inside its [`Alignment`]. Because alignments keep
/// mappings in canonical order, comparing ids compares canonical identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MappingId(pub u32);

impl MappingId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A set of mappings with unique identities, held in canonical order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Alignment {
    mappings: Vec<Mapping>,
}

impl Alignment {
    pub fn new(mut mappings: Vec<Mapping>) -> Result<Self> {
        for m in &mappings {
            if !(0.0..=1.0).contains(&m.confidence) {
                return Err(Error::ConfidenceOutOfRange(m.confidence));
            }
        }
        mappings.sort_by(Mapping::canonical_cmp);
        if let Some(w) = mappings
            .windows(2)
            .find(|w| w[0].canonical_cmp(&w[1]) == Ordering::Equal)
        {
            return Err(Error::DuplicateMapping {
                from: w[0].source.clone(),
                to: w[0].target.clone(),
                relation: w[0].relation.symbol(),
            });
        }
        Ok(Alignment { mappings })
    }

    pub fn empty() -> Self {
        Alignment::default()
    }

    pub fn len(&self) -> usize {
        self.mappings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mappings.is_empty()
    }

    pub fn get(&self, id: MappingId) -> &Mapping {
        &self.mappings[id.index()]
    }

    pub fn confidence(&self, id: MappingId) -> f64 {
        self.mappings[id.index()].confidence
    }

    pub fn mappings(&self) -> &[Mapping] {
        &self.mappings
    }

    pub fn ids(&self) -> impl Iterator<Item = MappingId> {
        (0..self.mappings.len() as u32).map(MappingId)
    }

    pub fn iter(&self) -> impl Iterator<Item = (MappingId, &Mapping)> {
        self.mappings.iter().enumerate().map(|(i, m)| (MappingId(i as u32), m))
    }

    pub fn find(&self, source: &str, target: &str, relation: Relation) -> Option<MappingId> {
        self.mappings
            .binary_search_by(|m| (m.source.as_str(), m.target.as_str(), m.relation).cmp(&(source, target, relation)))
            .ok()
            .map(|i| MappingId(i as u32))
    }

    pub fn contains_key(&self, key: &MappingKey) -> bool {
        self.find(&key.source, &key.target, key.relation).is_some()
    }

    /// The mappings selected by `subset`, as a new alignment. Ids are
    /// renumbered.
    pub fn restrict(&self, subset: &MappingSet) -> Alignment {
        Alignment {
            mappings: self
                .iter()
                .filter(|(id, _)| subset.contains(*id))
                .map(|(_, m)| m.clone())
                .collect(),
        }
    }

    pub fn all(&self) -> MappingSet {
        MappingSet::full(self.len())
    }
}

/// A subset of an alignment's mappings, addressed by [`MappingId`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MappingSet(BitSet);

impl MappingSet {
    pub fn empty(universe: usize) -> Self {
        MappingSet(BitSet::new(universe))
    }

    pub fn full(universe: usize) -> Self {
        MappingSet(BitSet::full(universe))
    }

    pub fn from_ids(universe: usize, ids: impl IntoIterator<Item = MappingId>) -> Self {
        let mut s = Self::empty(universe);
        for id in ids {
            s.insert(id);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn insert(&mut self, id: MappingId) {
        self.0.insert(id.index());
    }

    pub fn remove(&mut self, id: MappingId) {
        self.0.remove(id.index());
    }

    #[inline]
    pub fn contains(&self, id: MappingId) -> bool {
        self.0.contains(id.index())
    }

    pub fn len(&self) -> usize {
        self.0.count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = MappingId> + '_ {
        self.0.iter().map(|i| MappingId(i as u32))
    }
}
