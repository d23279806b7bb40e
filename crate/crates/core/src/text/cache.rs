use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::kg::{Triple, Vocab};
use crate::par::{map_collect, Parallelism};

use super::{
    bidirectional_gain, rank_similarity, CooccurrenceMatrix, EntityDocument, EntityWordSpace,
    TfidfIndex, WordVectorTable,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CacheKind {
    Cooccurrence,
    RwmdGain,
    Tfidf,
    Rank,
}

impl CacheKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CacheKind::Cooccurrence => "cooccurrence",
            CacheKind::RwmdGain => "rwmd",
            CacheKind::Tfidf => "tfidf",
            CacheKind::Rank => "rank",
        }
    }
}

impl fmt::Display for CacheKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CacheKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cooccurrence" => Ok(CacheKind::Cooccurrence),
            "rwmd" | "rwmd_gain" => Ok(CacheKind::RwmdGain),
            "tfidf" => Ok(CacheKind::Tfidf),
            "rank" => Ok(CacheKind::Rank),
            other => Err(Error::Config(format!("unknown cache kind '{other}'"))),
        }
    }
}

/// Precomputed scalar per unordered entity pair.
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityCache {
    kind: CacheKind,
    params: String,
    values: BTreeMap<(usize, usize), f64>,
}

fn key(i: usize, j: usize) -> (usize, usize) {
    if i <= j {
        (i, j)
    } else {
        (j, i)
    }
}

const MAGIC: &str = "# texreg-cache";
const COLUMNS: &str = "entity_i\tentity_j\tvalue";

impl SimilarityCache {
    pub fn new(kind: CacheKind, params: impl Into<String>) -> Self {
        SimilarityCache {
            kind,
            params: params.into(),
            values: BTreeMap::new(),
        }
    }

    pub fn kind(&self) -> CacheKind {
        self.kind
    }

    pub fn params(&self) -> &str {
        &self.params
    }

    /// Non-finite values are rejected.
    pub fn insert(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::Invalid(format!(
                "non-finite cache value for pair ({i}, {j})"
            )));
        }
        self.values.insert(key(i, j), value);
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.values.get(&key(i, j)).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }

    /// Min-max rescaled copy with every value in `[0, 1]`. A constant cache
    /// maps to all ones.
    pub fn rescaled(&self) -> SimilarityCache {
        let min = self.values.values().copied().fold(f64::INFINITY, f64::min);
        let max = self
            .values
            .values()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let span = max - min;
        let values = self
            .values
            .iter()
            .map(|(&k, &v)| (k, if span > 0.0 { (v - min) / span } else { 1.0 }))
            .collect();
        SimilarityCache {
            kind: self.kind,
            params: self.params.clone(),
            values,
        }
    }

    /// TSV with a kind/params header, entity IDs in columns one and two
    /// (lower index first) and a round-trip exact value.
    pub fn to_tsv(&self, vocab: &Vocab) -> Result<String> {
        let mut out = format!("{MAGIC} kind={}", self.kind);
        if !self.params.is_empty() {
            out.push(' ');
            out.push_str(&self.params);
        }
        out.push('\n');
        out.push_str(COLUMNS);
        out.push('\n');
        for (&(i, j), v) in &self.values {
            let name = |e| {
                vocab.entity_name(e).ok_or(Error::IndexOutOfRange {
                    what: "entity",
                    index: e,
                    size: vocab.num_entities(),
                })
            };
            out.push_str(&format!("{}\t{}\t{v:?}\n", name(i)?, name(j)?));
        }
        Ok(out)
    }

    pub fn write(&self, path: impl AsRef<Path>, vocab: &Vocab) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_tsv(vocab)?).map_err(|e| Error::io(path, e))
    }

    pub fn parse(text: &str, vocab: &Vocab, path: &Path) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let header = lines
            .next()
            .map(|(_, l)| l)
            .ok_or_else(|| Error::parse(path, 1, "empty cache file"))?;
        let rest = header
            .strip_prefix(MAGIC)
            .ok_or_else(|| Error::parse(path, 1, "missing cache header"))?
            .trim();
        let (kind_field, params) = rest.split_once(' ').unwrap_or((rest, ""));
        let kind = kind_field
            .strip_prefix("kind=")
            .ok_or_else(|| Error::parse(path, 1, "missing kind= in header"))?
            .parse::<CacheKind>()?;
        let mut cache = SimilarityCache::new(kind, params.trim());
        match lines.next() {
            Some((_, l)) if l == COLUMNS => {}
            _ => return Err(Error::parse(path, 2, "missing column header")),
        }
        for (lineno, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(Error::parse(
                    path,
                    lineno + 1,
                    "expected 3 tab-separated fields",
                ));
            }
            let entity = |name: &str| {
                vocab.entity_index(name).ok_or_else(|| {
                    Error::parse(path, lineno + 1, format!("unknown entity '{name}'"))
                })
            };
            let (i, j) = (entity(fields[0])?, entity(fields[1])?);
            let v: f64 = fields[2].parse().map_err(|e: std::num::ParseFloatError| {
                Error::parse(path, lineno + 1, e.to_string())
            })?;
            cache
                .insert(i, j, v)
                .map_err(|e| Error::parse(path, lineno + 1, e.to_string()))?;
        }
        Ok(cache)
    }

    pub fn read(path: impl AsRef<Path>, vocab: &Vocab) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, vocab, path)
    }
}

/// Inputs needed to fill a cache of a given kind.
#[derive(Clone, Copy, Debug)]
pub enum CacheResources<'a> {
    Cooccurrence(&'a CooccurrenceMatrix),
    RwmdGain {
        documents: &'a [Option<EntityDocument>],
        word_vectors: &'a WordVectorTable,
    },
    Tfidf(&'a TfidfIndex),
    Rank {
        space: &'a EntityWordSpace,
        top_n: usize,
    },
}

impl CacheResources<'_> {
    pub fn kind(&self) -> CacheKind {
        match self {
            CacheResources::Cooccurrence(_) => CacheKind::Cooccurrence,
            CacheResources::RwmdGain { .. } => CacheKind::RwmdGain,
            CacheResources::Tfidf(_) => CacheKind::Tfidf,
            CacheResources::Rank { .. } => CacheKind::Rank,
        }
    }

    fn params(&self) -> String {
        match self {
            CacheResources::Cooccurrence(_) => String::new(),
            CacheResources::RwmdGain { word_vectors, .. } => {
                format!("normalized={}", word_vectors.is_normalized())
            }
            CacheResources::Tfidf(index) => format!("cosine={}", index.is_normalized()),
            CacheResources::Rank { top_n, .. } => format!("top_n={top_n}"),
        }
    }

    fn value(&self, i: usize, j: usize) -> Option<f64> {
        match *self {
            CacheResources::Cooccurrence(x) => Some(x.get(i, j)).filter(|&v| v > 0.0),
            CacheResources::RwmdGain {
                documents,
                word_vectors,
            } => {
                let a = documents.get(i)?.as_ref()?;
                let b = documents.get(j)?.as_ref()?;
                bidirectional_gain(a, b, word_vectors)
            }
            CacheResources::Tfidf(index) => index.similarity(i, j).ok(),
            CacheResources::Rank { space, top_n } => {
                Some(rank_similarity(space.get(i)?, space.get(j)?, top_n))
            }
        }
    }
}

/// Distinct unordered pairs `(min, max)` of different entities connected by
/// at least one of `triples`, in ascending order.
pub fn connected_pairs(triples: &[Triple]) -> Vec<(usize, usize)> {
    triples
        .iter()
        .filter(|t| t.head != t.tail)
        .map(|t| key(t.head, t.tail))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// One value per connected training pair where the resources define one.
pub fn precompute_cache(
    train: &[Triple],
    resources: CacheResources<'_>,
    parallelism: Parallelism,
) -> SimilarityCache {
    let pairs = connected_pairs(train);
    let values = map_collect(&pairs, parallelism, |&(i, j)| {
        resources.value(i, j).filter(|v| v.is_finite())
    });
    let mut cache = SimilarityCache::new(resources.kind(), resources.params());
    for (&(i, j), v) in pairs.iter().zip(values) {
        if let Some(v) = v {
            cache.values.insert((i, j), v);
        }
    }
    cache
}
