use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};

use super::EntityDocument;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TfidfOptions {
    /// Scale every non-zero document vector to unit L2 norm.
    pub cosine_normalize: bool,
}

impl Default for TfidfOptions {
    fn default() -> Self {
        TfidfOptions {
            cosine_normalize: true,
        }
    }
}

/// Sparse `tf * ln(N / df)` vectors keyed by entity.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TfidfIndex {
    terms: HashMap<String, usize>,
    df: Vec<usize>,
    num_docs: usize,
    normalized: bool,
    /// Per entity: (term id, weight) sorted by term id, zero weights omitted.
    vectors: BTreeMap<usize, Vec<(usize, f64)>>,
    empty: Vec<usize>,
}

pub fn build_tfidf(docs: &[EntityDocument], options: TfidfOptions) -> TfidfIndex {
    let mut index = TfidfIndex {
        num_docs: docs.len(),
        normalized: options.cosine_normalize,
        ..Default::default()
    };
    for doc in docs {
        for word in doc.counts().keys() {
            let next = index.terms.len();
            let id = *index.terms.entry(word.clone()).or_insert(next);
            if id == index.df.len() {
                index.df.push(0);
            }
            index.df[id] += 1;
        }
    }
    let n = docs.len() as f64;
    for doc in docs {
        if doc.is_empty() {
            index.empty.push(doc.entity);
        }
        let mut v: Vec<(usize, f64)> = doc
            .counts()
            .iter()
            .map(|(w, &tf)| {
                let id = index.terms[w];
                (id, tf as f64 * (n / index.df[id] as f64).ln())
            })
            .filter(|&(_, w)| w != 0.0)
            .collect();
        v.sort_unstable_by_key(|&(id, _)| id);
        if options.cosine_normalize {
            let norm = v.iter().map(|&(_, w)| w * w).sum::<f64>().sqrt();
            if norm > 0.0 {
                v.iter_mut().for_each(|(_, w)| *w /= norm);
            }
        }
        index.vectors.insert(doc.entity, v);
    }
    index
}

impl TfidfIndex {
    pub fn num_docs(&self) -> usize {
        self.num_docs
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn contains(&self, entity: usize) -> bool {
        self.vectors.contains_key(&entity)
    }

    /// Number of documents containing `word`.
    pub fn df(&self, word: &str) -> usize {
        self.terms.get(word).map_or(0, |&id| self.df[id])
    }

    /// Weight of `word` in the document of `entity`; zero if absent.
    pub fn weight(&self, entity: usize, word: &str) -> f64 {
        let (Some(v), Some(&id)) = (self.vectors.get(&entity), self.terms.get(word)) else {
            return 0.0;
        };
        v.binary_search_by_key(&id, |&(t, _)| t)
            .map_or(0.0, |k| v[k].1)
    }

    /// Documents that had no tokens at all.
    pub fn empty_documents(&self) -> &[usize] {
        &self.empty
    }

    /// Dot product of the two stored document vectors.
    pub fn similarity(&self, x: usize, y: usize) -> Result<f64> {
        let missing = |e| Error::Invalid(format!("entity {e} has no document in the TF-IDF index"));
        let a = self.vectors.get(&x).ok_or_else(|| missing(x))?;
        let b = self.vectors.get(&y).ok_or_else(|| missing(y))?;
        let (mut i, mut j, mut sum) = (0, 0, 0.0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    sum += a[i].1 * b[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(sum)
    }
}
