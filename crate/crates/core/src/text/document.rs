use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::kg::Vocab;

use super::tokenize;

/// Tokenized text attached to one entity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntityDocument {
    pub entity: usize,
    tokens: Vec<String>,
    counts: BTreeMap<String, usize>,
}

impl EntityDocument {
    pub fn new(entity: usize, tokens: Vec<String>) -> Self {
        let mut counts = BTreeMap::new();
        for t in &tokens {
            *counts.entry(t.clone()).or_insert(0) += 1;
        }
        EntityDocument {
            entity,
            tokens,
            counts,
        }
    }

    pub fn from_text(entity: usize, text: &str) -> Self {
        Self::new(entity, tokenize(text))
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    /// Raw count per distinct token, in lexical order.
    pub fn counts(&self) -> &BTreeMap<String, usize> {
        &self.counts
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Normalized frequency `c_i` of each distinct token accepted by `keep`.
    /// The retained frequencies sum to one; empty if nothing is retained.
    pub fn frequencies<F: Fn(&str) -> bool>(&self, keep: F) -> Vec<(&str, f64)> {
        let kept: Vec<(&str, usize)> = self
            .counts
            .iter()
            .filter(|(w, _)| keep(w))
            .map(|(w, &c)| (w.as_str(), c))
            .collect();
        let total: usize = kept.iter().map(|&(_, c)| c).sum();
        if total == 0 {
            return Vec::new();
        }
        kept.into_iter()
            .map(|(w, c)| (w, c as f64 / total as f64))
            .collect()
    }
}

/// File name used for an entity's document: the ID with `/` replaced by `_`.
pub fn document_file_name(entity_id: &str) -> String {
    entity_id.replace('/', "_")
}

/// Reads one document per vocabulary entity from `dir`. Entities without a
/// file get `None`.
pub fn load_documents(dir: impl AsRef<Path>, vocab: &Vocab) -> Result<Vec<Option<EntityDocument>>> {
    let dir = dir.as_ref();
    if !dir.is_dir() {
        return Err(Error::io(
            dir,
            std::io::Error::new(std::io::ErrorKind::NotFound, "document directory not found"),
        ));
    }
    vocab
        .entities()
        .iter()
        .enumerate()
        .map(|(i, id)| {
            let path = dir.join(document_file_name(id));
            if !path.is_file() {
                return Ok(None);
            }
            let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            Ok(Some(EntityDocument::from_text(i, &text)))
        })
        .collect()
}
