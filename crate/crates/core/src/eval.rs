//! Link-prediction ranking and Hits@K / MRR in raw and filtered settings.

use std::fmt;
use std::str::FromStr;

use crate::embed::{score_unchecked, EmbeddingTable, NormOrder};
use crate::error::{Error, Result};
use crate::kg::{FilterSet, Triple};
use crate::par::{map_collect, Parallelism};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Head,
    Tail,
}

/// How candidates scoring exactly like the true entity are ranked.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieMode {
    /// Rank = 1 + number of strictly better candidates.
    #[default]
    Optimistic,
    /// Rank = 1 + number of candidates scoring better or equal.
    Pessimistic,
}

impl FromStr for TieMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "optimistic" => Ok(TieMode::Optimistic),
            "pessimistic" => Ok(TieMode::Pessimistic),
            other => Err(Error::Config(format!("unknown tie mode '{other}'"))),
        }
    }
}

impl fmt::Display for TieMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TieMode::Optimistic => "optimistic",
            TieMode::Pessimistic => "pessimistic",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvalOptions {
    pub norm: NormOrder,
    pub tie: TieMode,
    pub parallelism: Parallelism,
}

/// Raw and filtered rank of the true entity in one pass over the candidates.
fn ranks(
    emb: &EmbeddingTable,
    t: &Triple,
    side: Side,
    filter: Option<&FilterSet>,
    norm: NormOrder,
    tie: TieMode,
) -> (usize, usize) {
    let truth = match side {
        Side::Head => t.head,
        Side::Tail => t.tail,
    };
    let true_score = score_unchecked(emb, t.head, t.relation, t.tail, norm);
    let (mut raw, mut filtered) = (1, 1);
    for c in 0..emb.num_entities() {
        if c == truth {
            continue;
        }
        let candidate = match side {
            Side::Head => Triple::new(c, t.relation, t.tail),
            Side::Tail => Triple::new(t.head, t.relation, c),
        };
        let s = score_unchecked(
            emb,
            candidate.head,
            candidate.relation,
            candidate.tail,
            norm,
        );
        let beats = match tie {
            TieMode::Optimistic => s < true_score,
            TieMode::Pessimistic => s <= true_score,
        };
        if !beats {
            continue;
        }
        raw += 1;
        if !filter.is_some_and(|f| f.contains(&candidate)) {
            filtered += 1;
        }
    }
    (raw, filtered)
}

/// Rank (>= 1) of the true entity among all replacements on `side`. With a
/// filter, candidates forming another known triple are skipped.
pub fn rank_candidates(
    emb: &EmbeddingTable,
    t: &Triple,
    side: Side,
    filter: Option<&FilterSet>,
    norm: NormOrder,
    tie: TieMode,
) -> Result<usize> {
    emb.check(t)?;
    let (raw, filtered) = ranks(emb, t, side, filter, norm, tie);
    Ok(if filter.is_some() { filtered } else { raw })
}

/// Hits@1/3/10 and MRR over a set of ranks.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Metrics {
    pub hits1: f64,
    pub hits3: f64,
    pub hits10: f64,
    pub mrr: f64,
}

impl Metrics {
    pub fn from_ranks(ranks: &[usize]) -> Self {
        if ranks.is_empty() {
            return Metrics::default();
        }
        let n = ranks.len() as f64;
        let hits = |k| ranks.iter().filter(|&&r| r <= k).count() as f64 / n;
        Metrics {
            hits1: hits(1),
            hits3: hits(3),
            hits10: hits(10),
            mrr: ranks.iter().map(|&r| 1.0 / r as f64).sum::<f64>() / n,
        }
    }

    pub fn values(&self) -> [f64; 4] {
        [self.hits1, self.hits3, self.hits10, self.mrr]
    }
}

/// Head and tail replacement, averaged.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricsReport {
    pub raw: Metrics,
    pub filtered: Metrics,
    pub triples: usize,
    pub tie: TieMode,
}

impl MetricsReport {
    pub const HEADER: &'static str = "Hits@1\tHits@3\tHits@10\tMRR\tHits@1 Filtered\tHits@3 Filtered\tHits@10 Filtered\tMRR Filtered";

    /// A metadata comment line, the header row and one row of values.
    pub fn to_tsv(&self) -> String {
        let values: Vec<String> = self
            .raw
            .values()
            .iter()
            .chain(self.filtered.values().iter())
            .map(|v| format!("{v:.6}"))
            .collect();
        format!(
            "# side=both-averaged tie={} triples={}\n{}\n{}\n",
            self.tie,
            self.triples,
            Self::HEADER,
            values.join("\t")
        )
    }
}

/// Ranks every test triple on both sides, raw and filtered.
pub fn evaluate(
    emb: &EmbeddingTable,
    test: &[Triple],
    filter: &FilterSet,
    options: EvalOptions,
) -> Result<MetricsReport> {
    if test.is_empty() {
        return Err(Error::Invalid("empty test set".into()));
    }
    for t in test {
        emb.check(t)?;
    }
    let per_triple = map_collect(test, options.parallelism, |t| {
        let h = ranks(emb, t, Side::Head, Some(filter), options.norm, options.tie);
        let tl = ranks(emb, t, Side::Tail, Some(filter), options.norm, options.tie);
        (h, tl)
    });
    let mut raw = Vec::with_capacity(2 * test.len());
    let mut filtered = Vec::with_capacity(2 * test.len());
    for ((hr, hf), (tr, tf)) in per_triple {
        raw.extend([hr, tr]);
        filtered.extend([hf, tf]);
    }
    Ok(MetricsReport {
        raw: Metrics::from_ranks(&raw),
        filtered: Metrics::from_ranks(&filtered),
        triples: test.len(),
        tie: options.tie,
    })
}
