//! Text-side resources consumed by the regularizers.

mod cache;
mod cooccurrence;
mod document;
mod rank;
mod rwmd;
mod tfidf;
mod word_vectors;

pub use cache::{connected_pairs, precompute_cache, CacheKind, CacheResources, SimilarityCache};
pub use cooccurrence::{
    build_cooccurrence, parse_tagged_sentence, read_tagged_corpus, Context, CooccurrenceBuild,
    CooccurrenceMatrix, Mention, TaggedSentence,
};
pub use document::{document_file_name, load_documents, EntityDocument};
pub use rank::{rank_similarity, DEFAULT_TOP_N};
pub use rwmd::{bidirectional_gain, rwmd_gain};
pub use tfidf::{build_tfidf, TfidfIndex, TfidfOptions};
pub use word_vectors::{entity_word_embedding, EntityWordSpace, WordVectorTable};

/// Lowercases and splits on Unicode whitespace, stripping leading and
/// trailing punctuation from each piece. Pieces that are all punctuation are
/// dropped.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|w| w.trim_matches(|c: char| !c.is_alphanumeric()))
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Name tokenizer: lowercases and splits on anything that is not
/// alphanumeric, so "Obama,_Barack" yields ["obama", "barack"].
pub fn name_tokens(name: &str) -> Vec<String> {
    name.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect()
}
