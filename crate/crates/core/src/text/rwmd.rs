use crate::embed::dot;

use super::{EntityDocument, WordVectorTable};

/// Directed relaxed word-mover gain: every in-vocabulary word of `a`, weighted
/// by its normalized frequency, takes its best dot-product match among the
/// in-vocabulary words of `b`.
///
/// Returns `None` when either document has no in-vocabulary words.
pub fn rwmd_gain(a: &EntityDocument, b: &EntityDocument, wvt: &WordVectorTable) -> Option<f64> {
    let source = a.frequencies(|w| wvt.contains(w));
    if source.is_empty() {
        return None;
    }
    let targets: Vec<&[f64]> = b.counts().keys().filter_map(|w| wvt.get(w)).collect();
    if targets.is_empty() {
        return None;
    }
    let gain = source
        .iter()
        .map(|&(word, c)| {
            let wi = wvt.get(word).expect("filtered to vocabulary");
            let best = targets
                .iter()
                .map(|wj| dot(wi, wj))
                .fold(f64::NEG_INFINITY, f64::max);
            c * best
        })
        .sum();
    Some(gain)
}

/// `rwmd_gain(a, b) + rwmd_gain(b, a)`.
pub fn bidirectional_gain(
    a: &EntityDocument,
    b: &EntityDocument,
    wvt: &WordVectorTable,
) -> Option<f64> {
    Some(rwmd_gain(a, b, wvt)? + rwmd_gain(b, a, wvt)?)
}
