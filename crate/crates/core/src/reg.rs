//! Text regularizers and the joint objective.
//!
//! Every regularizer is evaluated on the (head, tail) pair of a training
//! triple. The pull-term family (`rwmd`, `tfidf`, `rank`) penalizes
//! `w * ||E_1 - E_2||^2` with a fixed, precomputed pair weight `w`; the
//! co-occurrence term fits `E_1 . E_2 + b_1 + b_2` to `ln(1 + X_12)`; the
//! cosine term aligns the embedding difference with a learned projection of
//! the word-space difference.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::embed::{dot, l2_norm, transe_gradients, EmbeddingTable, TrainConfig};
use crate::error::{Error, Result};
use crate::grad::{Gradients, ProjectionGrad};
use crate::kg::Triple;
use crate::par::map_collect;
use crate::text::{CacheKind, EntityWordSpace, SimilarityCache};

/// Norms below this are treated as zero by the cosine term.
pub const COSINE_EPS: f64 = 1e-8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum RegularizerKind {
    #[default]
    None,
    Cosine,
    Cooccurrence,
    Rwmd,
    Tfidf,
    Rank,
}

impl RegularizerKind {
    /// Cache kind this regularizer reads, if any.
    pub fn cache_kind(self) -> Option<CacheKind> {
        match self {
            RegularizerKind::None | RegularizerKind::Cosine => None,
            RegularizerKind::Cooccurrence => Some(CacheKind::Cooccurrence),
            RegularizerKind::Rwmd => Some(CacheKind::RwmdGain),
            RegularizerKind::Tfidf => Some(CacheKind::Tfidf),
            RegularizerKind::Rank => Some(CacheKind::Rank),
        }
    }
}

impl fmt::Display for RegularizerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegularizerKind::None => "none",
            RegularizerKind::Cosine => "cosine",
            RegularizerKind::Cooccurrence => "cooccurrence",
            RegularizerKind::Rwmd => "rwmd",
            RegularizerKind::Tfidf => "tfidf",
            RegularizerKind::Rank => "rank",
        })
    }
}

impl FromStr for RegularizerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(RegularizerKind::None),
            "cosine" => Ok(RegularizerKind::Cosine),
            "cooccurrence" => Ok(RegularizerKind::Cooccurrence),
            "rwmd" => Ok(RegularizerKind::Rwmd),
            "tfidf" => Ok(RegularizerKind::Tfidf),
            "rank" => Ok(RegularizerKind::Rank),
            other => Err(Error::Config(format!("unknown regularizer '{other}'"))),
        }
    }
}

/// Affine map from word space (`in_dim`) to entity space (`out_dim`).
#[derive(Clone, Debug, PartialEq)]
pub struct Projection {
    in_dim: usize,
    out_dim: usize,
    /// Row-major `out_dim x in_dim`.
    weight: Vec<f64>,
    bias: Vec<f64>,
}

impl Projection {
    pub fn new(in_dim: usize, out_dim: usize, weight: Vec<f64>, bias: Vec<f64>) -> Result<Self> {
        if weight.len() != in_dim * out_dim || bias.len() != out_dim {
            return Err(Error::Invalid(format!(
                "projection shape mismatch: {} weights and {} biases for {out_dim}x{in_dim}",
                weight.len(),
                bias.len()
            )));
        }
        Ok(Projection {
            in_dim,
            out_dim,
            weight,
            bias,
        })
    }

    /// Weights uniform in `[-1/sqrt(in_dim), 1/sqrt(in_dim)]`, zero bias.
    pub fn init<R: Rng + ?Sized>(in_dim: usize, out_dim: usize, rng: &mut R) -> Self {
        let bound = 1.0 / (in_dim.max(1) as f64).sqrt();
        Projection {
            in_dim,
            out_dim,
            weight: (0..in_dim * out_dim)
                .map(|_| rng.gen_range(-bound..=bound))
                .collect(),
            bias: vec![0.0; out_dim],
        }
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn weight(&self) -> &[f64] {
        &self.weight
    }

    pub fn weight_mut(&mut self) -> &mut [f64] {
        &mut self.weight
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    pub fn bias_mut(&mut self) -> &mut [f64] {
        &mut self.bias
    }

    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        self.weight
            .chunks(self.in_dim.max(1))
            .zip(&self.bias)
            .map(|(row, b)| dot(row, x) + b)
            .collect()
    }

    pub fn apply(&mut self, grad: &ProjectionGrad, lr: f64) {
        for (w, g) in self.weight.iter_mut().zip(&grad.weight) {
            *w -= lr * g;
        }
        for (b, g) in self.bias.iter_mut().zip(&grad.bias) {
            *b -= lr * g;
        }
    }
}

/// Loss of one regularizer evaluation and the gradients of the parameters it
/// touched.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RegOutput {
    pub loss: f64,
    pub grads: Gradients,
}

impl RegOutput {
    pub fn zero() -> Self {
        Self::default()
    }
}

fn difference(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `1 - cos(E_1 - E_2, P(w_1 - w_2))`.
pub fn reg_cosine(
    emb: &EmbeddingTable,
    proj: &Projection,
    e1: usize,
    e2: usize,
    space: &EntityWordSpace,
) -> RegOutput {
    let (Some(w1), Some(w2)) = (space.get(e1), space.get(e2)) else {
        return RegOutput::zero();
    };
    let a = difference(emb.entity(e1), emb.entity(e2));
    let u = difference(w1, w2);
    let p = proj.forward(&u);
    let (na, np) = (l2_norm(&a), l2_norm(&p));
    if na < COSINE_EPS || np < COSINE_EPS {
        return RegOutput::zero();
    }
    let cos = dot(&a, &p) / (na * np);
    // d(1 - cos)/da and d(1 - cos)/dp.
    let grad_a: Vec<f64> = a
        .iter()
        .zip(&p)
        .map(|(ai, pi)| -(pi / (na * np) - cos * ai / (na * na)))
        .collect();
    let grad_p: Vec<f64> = a
        .iter()
        .zip(&p)
        .map(|(ai, pi)| -(ai / (na * np) - cos * pi / (np * np)))
        .collect();
    let grad_w: Vec<f64> = grad_p
        .iter()
        .flat_map(|gp| u.iter().map(move |uj| gp * uj))
        .collect();

    let mut grads = Gradients::new();
    grads.add_entity(e1, 1.0, &grad_a);
    grads.add_entity(e2, -1.0, &grad_a);
    grads.add_projection(1.0, &grad_w, &grad_p);
    RegOutput {
        loss: 1.0 - cos,
        grads,
    }
}

/// `(E_1 . E_2 + b_1 + b_2 - ln(1 + X_12))^2`; zero when `X_12` is not
/// cached.
pub fn reg_cooccurrence(
    emb: &EmbeddingTable,
    e1: usize,
    e2: usize,
    x: &SimilarityCache,
) -> RegOutput {
    if e1 == e2 {
        return RegOutput::zero();
    }
    let Some(count) = x.get(e1, e2) else {
        return RegOutput::zero();
    };
    let (v1, v2) = (emb.entity(e1), emb.entity(e2));
    let residual = dot(v1, v2) + emb.bias(e1) + emb.bias(e2) - count.ln_1p();
    let mut grads = Gradients::new();
    grads.add_entity(e1, 2.0 * residual, v2);
    grads.add_entity(e2, 2.0 * residual, v1);
    grads.add_bias(e1, 2.0 * residual);
    grads.add_bias(e2, 2.0 * residual);
    RegOutput {
        loss: residual * residual,
        grads,
    }
}

/// `weight * ||E_1 - E_2||^2` with the weight held constant.
pub fn pull_term(emb: &EmbeddingTable, e1: usize, e2: usize, weight: f64) -> RegOutput {
    if weight == 0.0 || e1 == e2 {
        return RegOutput::zero();
    }
    let diff = difference(emb.entity(e1), emb.entity(e2));
    let mut grads = Gradients::new();
    grads.add_entity(e1, 2.0 * weight, &diff);
    grads.add_entity(e2, -2.0 * weight, &diff);
    RegOutput {
        loss: weight * dot(&diff, &diff),
        grads,
    }
}

/// Pull term weighted by `ln(1 + max(0, Gain))`.
pub fn reg_rwmd(emb: &EmbeddingTable, e1: usize, e2: usize, gain: &SimilarityCache) -> RegOutput {
    match gain.get(e1, e2) {
        Some(g) => pull_term(emb, e1, e2, g.max(0.0).ln_1p()),
        None => RegOutput::zero(),
    }
}

/// Pull term weighted by the cached TF-IDF similarity.
pub fn reg_tfidf(emb: &EmbeddingTable, e1: usize, e2: usize, sim: &SimilarityCache) -> RegOutput {
    match sim.get(e1, e2) {
        Some(s) => pull_term(emb, e1, e2, s.max(0.0)),
        None => RegOutput::zero(),
    }
}

/// Pull term weighted by a rank similarity already rescaled to `[0, 1]`
/// (see [`SimilarityCache::rescaled`]).
pub fn reg_rank(
    emb: &EmbeddingTable,
    e1: usize,
    e2: usize,
    rescaled: &SimilarityCache,
) -> RegOutput {
    match rescaled.get(e1, e2) {
        Some(s) => pull_term(emb, e1, e2, s),
        None => RegOutput::zero(),
    }
}

/// The selected text regularizer together with the resources it reads.
#[derive(Clone, Debug, Default)]
pub enum TextRegularizer {
    #[default]
    None,
    Cosine {
        space: EntityWordSpace,
        projection: Projection,
    },
    Cooccurrence(SimilarityCache),
    Rwmd(SimilarityCache),
    Tfidf(SimilarityCache),
    /// Holds the min-max rescaled cache.
    Rank(SimilarityCache),
}

impl TextRegularizer {
    pub fn cosine(space: EntityWordSpace, projection: Projection) -> Result<Self> {
        if projection.in_dim() != space.dim() {
            return Err(Error::Config(format!(
                "projection expects word dimension {}, word vectors have {}",
                projection.in_dim(),
                space.dim()
            )));
        }
        Ok(TextRegularizer::Cosine { space, projection })
    }

    /// Wraps a cache for the regularizer `kind`, checking that the cache was
    /// built for it.
    pub fn from_cache(kind: RegularizerKind, cache: SimilarityCache) -> Result<Self> {
        let Some(expected) = kind.cache_kind() else {
            return Err(Error::Config(format!(
                "regularizer '{kind}' does not use a cache"
            )));
        };
        if cache.kind() != expected {
            return Err(Error::Config(format!(
                "regularizer '{kind}' needs a '{expected}' cache, got '{}'",
                cache.kind()
            )));
        }
        Ok(match kind {
            RegularizerKind::Cooccurrence => TextRegularizer::Cooccurrence(cache),
            RegularizerKind::Rwmd => TextRegularizer::Rwmd(cache),
            RegularizerKind::Tfidf => TextRegularizer::Tfidf(cache),
            RegularizerKind::Rank => TextRegularizer::Rank(cache.rescaled()),
            RegularizerKind::None | RegularizerKind::Cosine => unreachable!("no cache kind"),
        })
    }

    pub fn kind(&self) -> RegularizerKind {
        match self {
            TextRegularizer::None => RegularizerKind::None,
            TextRegularizer::Cosine { .. } => RegularizerKind::Cosine,
            TextRegularizer::Cooccurrence(_) => RegularizerKind::Cooccurrence,
            TextRegularizer::Rwmd(_) => RegularizerKind::Rwmd,
            TextRegularizer::Tfidf(_) => RegularizerKind::Tfidf,
            TextRegularizer::Rank(_) => RegularizerKind::Rank,
        }
    }

    pub fn projection(&self) -> Option<&Projection> {
        match self {
            TextRegularizer::Cosine { projection, .. } => Some(projection),
            _ => None,
        }
    }

    pub fn projection_mut(&mut self) -> Option<&mut Projection> {
        match self {
            TextRegularizer::Cosine { projection, .. } => Some(projection),
            _ => None,
        }
    }

    pub fn evaluate(&self, emb: &EmbeddingTable, e1: usize, e2: usize) -> RegOutput {
        match self {
            TextRegularizer::None => RegOutput::zero(),
            TextRegularizer::Cosine { space, projection } => {
                reg_cosine(emb, projection, e1, e2, space)
            }
            TextRegularizer::Cooccurrence(x) => reg_cooccurrence(emb, e1, e2, x),
            TextRegularizer::Rwmd(c) => reg_rwmd(emb, e1, e2, c),
            TextRegularizer::Tfidf(c) => reg_tfidf(emb, e1, e2, c),
            TextRegularizer::Rank(c) => reg_rank(emb, e1, e2, c),
        }
    }
}

/// A positive training triple and its corruptions.
#[derive(Clone, Debug, PartialEq)]
pub struct BatchItem {
    pub positive: Triple,
    pub negatives: Vec<Triple>,
}

/// Value of the joint objective over one batch.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CombinedLoss {
    /// `lambda_kg * kg_part + lambda_text * text_part`.
    pub total: f64,
    /// Sum of margin losses over all (positive, negative) pairs.
    pub kg_part: f64,
    /// Sum of regularizer losses over the positives' (head, tail) pairs.
    pub text_part: f64,
    /// Gradient of `total`.
    pub grads: Gradients,
}

/// Joint objective over a batch. The per-item terms are computed in
/// `config.parallelism` mode and merged in batch order, so the result does
/// not depend on the mode.
pub fn combined_loss(
    emb: &EmbeddingTable,
    reg: &TextRegularizer,
    batch: &[BatchItem],
    config: &TrainConfig,
) -> CombinedLoss {
    let want_text_grads = config.lambda_text != 0.0;
    let parts = map_collect(batch, config.parallelism, |item| {
        let mut kg_loss = 0.0;
        let mut kg_grads = Gradients::new();
        for neg in &item.negatives {
            let (loss, g) = transe_gradients(emb, &item.positive, neg, config.margin, config.norm);
            kg_loss += loss;
            kg_grads.merge(&g, 1.0);
        }
        let text = reg.evaluate(emb, item.positive.head, item.positive.tail);
        (kg_loss, kg_grads, text)
    });

    let mut out = CombinedLoss::default();
    for (kg_loss, kg_grads, text) in parts {
        out.kg_part += kg_loss;
        out.text_part += text.loss;
        out.grads.merge(&kg_grads, config.lambda_kg);
        if want_text_grads {
            out.grads.merge(&text.grads, config.lambda_text);
        }
    }
    out.total = config.lambda_kg * out.kg_part + config.lambda_text * out.text_part;
    out
}
