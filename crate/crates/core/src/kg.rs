//! Triple ingestion, vocabularies, filter sets and entity name dictionaries.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// A triple in its on-disk string form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RawTriple {
    pub head: String,
    pub relation: String,
    pub tail: String,
}

impl RawTriple {
    pub fn new(
        head: impl Into<String>,
        relation: impl Into<String>,
        tail: impl Into<String>,
    ) -> Self {
        RawTriple {
            head: head.into(),
            relation: relation.into(),
            tail: tail.into(),
        }
    }
}

/// An integer-coded (head, relation, tail) fact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub head: usize,
    pub relation: usize,
    pub tail: usize,
}

impl Triple {
    pub fn new(head: usize, relation: usize, tail: usize) -> Self {
        Triple {
            head,
            relation,
            tail,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Split {
    Train,
    Valid,
    Test,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Valid => "valid",
            Split::Test => "test",
        })
    }
}

/// Result of reading one triple file.
#[derive(Clone, Debug, Default)]
pub struct LoadedTriples {
    pub triples: Vec<RawTriple>,
    pub duplicates_dropped: usize,
}

/// Reads a tab-separated head/relation/tail file. Blank lines are skipped and
/// repeated lines are dropped (first occurrence wins).
pub fn load_triples(path: impl AsRef<Path>) -> Result<LoadedTriples> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_triples(&text, path)
}

pub(crate) fn parse_triples(text: &str, path: &Path) -> Result<LoadedTriples> {
    let mut seen = HashSet::new();
    let mut out = LoadedTriples::default();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 || fields.iter().any(|f| f.is_empty()) {
            return Err(Error::parse(
                path,
                lineno + 1,
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            ));
        }
        let triple = RawTriple::new(fields[0], fields[1], fields[2]);
        if seen.insert(triple.clone()) {
            out.triples.push(triple);
        } else {
            out.duplicates_dropped += 1;
        }
    }
    if out.duplicates_dropped > 0 {
        log::warn!(
            "{}: dropped {} duplicate triple(s)",
            path.display(),
            out.duplicates_dropped
        );
    }
    Ok(out)
}

/// Dense entity and relation indices, assigned in order of first appearance.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocab {
    entity_to_index: HashMap<String, usize>,
    relation_to_index: HashMap<String, usize>,
    entities: Vec<String>,
    relations: Vec<String>,
}

impl Vocab {
    /// Heads are visited before tails within each triple.
    pub fn build<'a>(triples: impl IntoIterator<Item = &'a RawTriple>) -> Self {
        let mut vocab = Vocab::default();
        for t in triples {
            vocab.intern_entity(&t.head);
            vocab.intern_relation(&t.relation);
            vocab.intern_entity(&t.tail);
        }
        vocab
    }

    fn intern_entity(&mut self, name: &str) -> usize {
        if let Some(&i) = self.entity_to_index.get(name) {
            return i;
        }
        let i = self.entities.len();
        self.entities.push(name.to_owned());
        self.entity_to_index.insert(name.to_owned(), i);
        i
    }

    fn intern_relation(&mut self, name: &str) -> usize {
        if let Some(&i) = self.relation_to_index.get(name) {
            return i;
        }
        let i = self.relations.len();
        self.relations.push(name.to_owned());
        self.relation_to_index.insert(name.to_owned(), i);
        i
    }

    pub fn num_entities(&self) -> usize {
        self.entities.len()
    }

    pub fn num_relations(&self) -> usize {
        self.relations.len()
    }

    pub fn entity_index(&self, name: &str) -> Option<usize> {
        self.entity_to_index.get(name).copied()
    }

    pub fn relation_index(&self, name: &str) -> Option<usize> {
        self.relation_to_index.get(name).copied()
    }

    pub fn entity_name(&self, index: usize) -> Option<&str> {
        self.entities.get(index).map(String::as_str)
    }

    pub fn relation_name(&self, index: usize) -> Option<&str> {
        self.relations.get(index).map(String::as_str)
    }

    pub fn entities(&self) -> &[String] {
        &self.entities
    }

    pub fn relations(&self) -> &[String] {
        &self.relations
    }

    pub fn encode(&self, t: &RawTriple) -> Option<Triple> {
        Some(Triple::new(
            self.entity_index(&t.head)?,
            self.relation_index(&t.relation)?,
            self.entity_index(&t.tail)?,
        ))
    }

    pub fn check(&self, t: &Triple) -> Result<()> {
        if t.head >= self.num_entities() {
            return Err(Error::IndexOutOfRange {
                what: "entity",
                index: t.head,
                size: self.num_entities(),
            });
        }
        if t.tail >= self.num_entities() {
            return Err(Error::IndexOutOfRange {
                what: "entity",
                index: t.tail,
                size: self.num_entities(),
            });
        }
        if t.relation >= self.num_relations() {
            return Err(Error::IndexOutOfRange {
                what: "relation",
                index: t.relation,
                size: self.num_relations(),
            });
        }
        Ok(())
    }
}

/// All encoded triples with their split tags. A triple appears at most once
/// per split but may repeat across splits.
#[derive(Clone, Debug, Default)]
pub struct TripleStore {
    triples: Vec<Triple>,
    splits: Vec<Split>,
    seen: HashSet<(Triple, SplitKey)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct SplitKey(u8);

impl From<Split> for SplitKey {
    fn from(s: Split) -> Self {
        SplitKey(s as u8)
    }
}

impl TripleStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false if the triple was already present in this split.
    pub fn push(&mut self, triple: Triple, split: Split) -> bool {
        if !self.seen.insert((triple, split.into())) {
            return false;
        }
        self.triples.push(triple);
        self.splits.push(split);
        true
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Triple, Split)> + '_ {
        self.triples
            .iter()
            .copied()
            .zip(self.splits.iter().copied())
    }

    pub fn split(&self, split: Split) -> Vec<Triple> {
        self.iter()
            .filter(|&(_, s)| s == split)
            .map(|(t, _)| t)
            .collect()
    }

    pub fn train(&self) -> Vec<Triple> {
        self.split(Split::Train)
    }

    pub fn test(&self) -> Vec<Triple> {
        self.split(Split::Test)
    }
}

/// Triple files for each split, loaded and encoded against one vocabulary
/// built from their union (train, then valid, then test).
#[derive(Clone, Debug)]
pub struct Dataset {
    pub vocab: Vocab,
    pub store: TripleStore,
}

impl Dataset {
    pub fn from_raw(splits: &[(Split, &[RawTriple])]) -> Self {
        let vocab = Vocab::build(splits.iter().flat_map(|(_, ts)| ts.iter()));
        let mut store = TripleStore::new();
        for (split, triples) in splits {
            for t in triples.iter() {
                let encoded = vocab.encode(t).expect("vocabulary covers every split");
                store.push(encoded, *split);
            }
        }
        Dataset { vocab, store }
    }

    pub fn load(train: &Path, valid: Option<&Path>, test: Option<&Path>) -> Result<Self> {
        let train = load_triples(train)?.triples;
        let valid = valid.map(load_triples).transpose()?.map(|l| l.triples);
        let test = test.map(load_triples).transpose()?.map(|l| l.triples);
        let mut splits: Vec<(Split, &[RawTriple])> = vec![(Split::Train, &train)];
        if let Some(v) = &valid {
            splits.push((Split::Valid, v));
        }
        if let Some(t) = &test {
            splits.push((Split::Test, t));
        }
        Ok(Self::from_raw(&splits))
    }
}

/// Every known fact across all splits, with per-query indices for filtered
/// ranking.
#[derive(Clone, Debug, Default)]
pub struct FilterSet {
    known: HashSet<Triple>,
    tails: HashMap<(usize, usize), Vec<usize>>,
    heads: HashMap<(usize, usize), Vec<usize>>,
}

impl FilterSet {
    pub fn from_triples(triples: impl IntoIterator<Item = Triple>) -> Self {
        let mut set = FilterSet::default();
        for t in triples {
            set.insert(t);
        }
        set
    }

    pub fn insert(&mut self, t: Triple) -> bool {
        if !self.known.insert(t) {
            return false;
        }
        self.tails
            .entry((t.head, t.relation))
            .or_default()
            .push(t.tail);
        self.heads
            .entry((t.relation, t.tail))
            .or_default()
            .push(t.head);
        true
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.known.contains(t)
    }

    pub fn len(&self) -> usize {
        self.known.len()
    }

    pub fn is_empty(&self) -> bool {
        self.known.is_empty()
    }

    /// Known tails for `(head, relation, ?)`.
    pub fn tails_of(&self, head: usize, relation: usize) -> &[usize] {
        self.tails
            .get(&(head, relation))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Known heads for `(?, relation, tail)`.
    pub fn heads_of(&self, relation: usize, tail: usize) -> &[usize] {
        self.heads
            .get(&(relation, tail))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

pub fn build_filter_set(store: &TripleStore) -> FilterSet {
    FilterSet::from_triples(store.iter().map(|(t, _)| t))
}

/// Entity ID to surface names. Repeated IDs accumulate aliases.
#[derive(Clone, Debug, Default)]
pub struct NameMap {
    names: HashMap<String, Vec<String>>,
}

impl NameMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: impl Into<String>, alias: impl Into<String>) {
        let alias = alias.into();
        if alias.trim().is_empty() {
            return;
        }
        self.names.entry(id.into()).or_default().push(alias);
    }

    /// `None` for unknown IDs; known IDs always have at least one alias.
    pub fn get(&self, id: &str) -> Option<&[String]> {
        self.names.get(id).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut map = NameMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            let Some((id, alias)) = line.split_once('\t') else {
                return Err(Error::parse(path, lineno + 1, "expected <id>\\t<alias>"));
            };
            map.insert(id, alias);
        }
        Ok(map)
    }
}

/// Graph and corpus size summary.
#[derive(Clone, Debug, PartialEq)]
pub struct CorpusStats {
    pub kg_triples: usize,
    pub kg_entities: usize,
    pub kg_relations: usize,
    pub corpus_triples: u64,
    pub corpus_entities: u64,
    /// `None` when the corpus has no entities.
    pub triple_entity_ratio: Option<f64>,
}

pub const UNDEFINED_MARKER: &str = "NA";

pub fn corpus_stats(store: &TripleStore, corpus_triples: u64, corpus_entities: u64) -> CorpusStats {
    let mut entities = BTreeSet::new();
    let mut relations = BTreeSet::new();
    let mut distinct = HashSet::new();
    for (t, _) in store.iter() {
        entities.insert(t.head);
        entities.insert(t.tail);
        relations.insert(t.relation);
        distinct.insert(t);
    }
    let triple_entity_ratio = if corpus_entities == 0 {
        None
    } else {
        Some(corpus_triples as f64 / corpus_entities as f64)
    };
    CorpusStats {
        kg_triples: distinct.len(),
        kg_entities: entities.len(),
        kg_relations: relations.len(),
        corpus_triples,
        corpus_entities,
        triple_entity_ratio,
    }
}

impl CorpusStats {
    pub const HEADER: &'static str =
        "#triples(C)\t#triples(G)\t#entities(C)\t#entities(G)\t#rel(G)\tCT/CE";

    pub fn to_tsv(&self) -> String {
        let ratio = match self.triple_entity_ratio {
            Some(r) => format!("{r:.2}"),
            None => UNDEFINED_MARKER.to_owned(),
        };
        format!(
            "{}\n{}\t{}\t{}\t{}\t{}\t{}\n",
            Self::HEADER,
            self.corpus_triples,
            self.kg_triples,
            self.corpus_entities,
            self.kg_entities,
            self.kg_relations,
            ratio
        )
    }
}
