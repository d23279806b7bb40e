use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use regex::Regex;

use crate::error::{Error, Result};
use crate::kg::Vocab;

/// One entity mention inside a sentence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mention {
    pub entity_id: String,
    /// Token position; a whole mention occupies a single position.
    pub position: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TaggedSentence {
    pub mentions: Vec<Mention>,
    pub len: usize,
}

fn mention_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"<e:([^>]+)>(.*?)</e>").expect("valid regex"))
}

/// Parses a sentence with inline `<e:ENTITY_ID>surface</e>` mentions.
pub fn parse_tagged_sentence(line: &str) -> TaggedSentence {
    let mut sentence = TaggedSentence::default();
    let mut last = 0;
    for cap in mention_pattern().captures_iter(line) {
        let whole = cap.get(0).expect("group 0");
        sentence.len += line[last..whole.start()].split_whitespace().count();
        sentence.mentions.push(Mention {
            entity_id: cap[1].trim().to_owned(),
            position: sentence.len,
        });
        sentence.len += 1;
        last = whole.end();
    }
    sentence.len += line[last..].split_whitespace().count();
    sentence
}

/// One sentence per line.
pub fn read_tagged_corpus(path: impl AsRef<Path>) -> Result<Vec<TaggedSentence>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(parse_tagged_sentence)
        .collect())
}

/// What counts as "in the context of" another mention.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Context {
    #[default]
    Sentence,
    /// Mentions at most this many token positions apart.
    Window(usize),
}

/// Symmetric sparse entity co-occurrence counts; absent pairs are zero.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CooccurrenceMatrix {
    counts: BTreeMap<(usize, usize), f64>,
}

impl CooccurrenceMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.counts.get(&(i, j)).copied().unwrap_or(0.0)
    }

    /// Number of stored (ordered) entries.
    pub fn nnz(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }

    fn bump(&mut self, a: usize, b: usize) {
        *self.counts.entry((a, b)).or_insert(0.0) += 1.0;
        *self.counts.entry((b, a)).or_insert(0.0) += 1.0;
    }
}

#[derive(Clone, Debug, Default)]
pub struct CooccurrenceBuild {
    pub matrix: CooccurrenceMatrix,
    pub unknown_mentions: usize,
}

/// Counts every pair of mentions of distinct entities sharing a context.
/// Mentions of entities outside `vocab` are skipped and counted.
pub fn build_cooccurrence(
    corpus: &[TaggedSentence],
    vocab: &Vocab,
    context: Context,
) -> CooccurrenceBuild {
    let mut out = CooccurrenceBuild::default();
    for sentence in corpus {
        let known: Vec<(usize, usize)> = sentence
            .mentions
            .iter()
            .filter_map(|m| match vocab.entity_index(&m.entity_id) {
                Some(i) => Some((i, m.position)),
                None => {
                    out.unknown_mentions += 1;
                    None
                }
            })
            .collect();
        for (p, &(a, pa)) in known.iter().enumerate() {
            for &(b, pb) in &known[p + 1..] {
                if a == b {
                    continue;
                }
                if let Context::Window(w) = context {
                    if pa.abs_diff(pb) > w {
                        continue;
                    }
                }
                out.matrix.bump(a, b);
            }
        }
    }
    if out.unknown_mentions > 0 {
        log::warn!(
            "skipped {} mention(s) of unknown entities",
            out.unknown_mentions
        );
    }
    out
}
