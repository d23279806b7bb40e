use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::embed::l2_norm;
use crate::error::{Error, Result};
use crate::kg::{NameMap, Vocab};

use super::name_tokens;

/// Pretrained word vectors of one fixed dimension.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WordVectorTable {
    dim: usize,
    index: HashMap<String, usize>,
    words: Vec<String>,
    data: Vec<f64>,
    normalized: bool,
    duplicates_dropped: usize,
}

impl WordVectorTable {
    /// Builds a table from `(word, vector)` pairs. Later duplicates are
    /// ignored.
    pub fn from_pairs<I, S>(pairs: I, normalize: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: Into<String>,
    {
        let mut table = WordVectorTable {
            normalized: normalize,
            ..Default::default()
        };
        for (k, (word, v)) in pairs.into_iter().enumerate() {
            if table.words.is_empty() {
                table.dim = v.len();
            } else if v.len() != table.dim {
                return Err(Error::Invalid(format!(
                    "word vector {} has dimension {}, expected {}",
                    k + 1,
                    v.len(),
                    table.dim
                )));
            }
            table.push(word.into(), v);
        }
        Ok(table)
    }

    fn push(&mut self, word: String, mut v: Vec<f64>) {
        if self.index.contains_key(&word) {
            self.duplicates_dropped += 1;
            return;
        }
        if self.normalized {
            let n = l2_norm(&v);
            if n > 0.0 {
                v.iter_mut().for_each(|x| *x /= n);
            }
        }
        self.index.insert(word.clone(), self.words.len());
        self.words.push(word);
        self.data.extend_from_slice(&v);
    }

    /// Reads the whitespace-separated text format `word v1 ... vd`, one word
    /// per line. A leading `<count> <dim>` header line is skipped.
    pub fn load(path: impl AsRef<Path>, normalize: bool) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut table = WordVectorTable {
            normalized: normalize,
            ..Default::default()
        };
        for (lineno, line) in text.lines().enumerate() {
            let mut fields = line.split_whitespace();
            let Some(word) = fields.next() else { continue };
            let rest: Vec<&str> = fields.collect();
            if lineno == 0
                && rest.len() == 1
                && word.parse::<usize>().is_ok()
                && rest[0].parse::<usize>().is_ok()
            {
                continue;
            }
            let v = rest
                .iter()
                .map(|f| f.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::parse(path, lineno + 1, e.to_string()))?;
            if v.is_empty() {
                return Err(Error::parse(path, lineno + 1, "word without a vector"));
            }
            if table.words.is_empty() {
                table.dim = v.len();
            } else if v.len() != table.dim {
                return Err(Error::parse(
                    path,
                    lineno + 1,
                    format!("dimension {} differs from {}", v.len(), table.dim),
                ));
            }
            table.push(word.to_owned(), v);
        }
        if table.duplicates_dropped > 0 {
            log::warn!(
                "{}: ignored {} duplicate word(s)",
                path.display(),
                table.duplicates_dropped
            );
        }
        Ok(table)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn duplicates_dropped(&self) -> usize {
        self.duplicates_dropped
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.index
            .get(word)
            .map(|&i| &self.data[i * self.dim..(i + 1) * self.dim])
    }
}

/// Mean of the in-vocabulary word vectors over all tokens of all aliases of
/// `entity_id`; `None` if the entity is unnamed or no token is known.
pub fn entity_word_embedding(
    names: &NameMap,
    wvt: &WordVectorTable,
    entity_id: &str,
) -> Option<Vec<f64>> {
    let aliases = names.get(entity_id)?;
    let mut sum = vec![0.0; wvt.dim()];
    let mut count = 0usize;
    for token in aliases.iter().flat_map(|a| name_tokens(a)) {
        if let Some(v) = wvt.get(&token) {
            sum.iter_mut().zip(v).for_each(|(s, x)| *s += x);
            count += 1;
        }
    }
    if count == 0 {
        return None;
    }
    sum.iter_mut().for_each(|s| *s /= count as f64);
    Some(sum)
}

/// Word-space vector for every entity of a vocabulary, where one exists.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EntityWordSpace {
    dim: usize,
    vectors: Vec<Option<Vec<f64>>>,
}

impl EntityWordSpace {
    pub fn build(vocab: &Vocab, names: &NameMap, wvt: &WordVectorTable) -> Self {
        EntityWordSpace {
            dim: wvt.dim(),
            vectors: vocab
                .entities()
                .iter()
                .map(|id| entity_word_embedding(names, wvt, id))
                .collect(),
        }
    }

    pub fn from_vectors(dim: usize, vectors: Vec<Option<Vec<f64>>>) -> Self {
        debug_assert!(vectors.iter().flatten().all(|v| v.len() == dim));
        EntityWordSpace { dim, vectors }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, entity: usize) -> Option<&[f64]> {
        self.vectors.get(entity).and_then(|v| v.as_deref())
    }

    pub fn coverage(&self) -> usize {
        self.vectors.iter().filter(|v| v.is_some()).count()
    }
}
