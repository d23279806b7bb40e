//! Mini-batch SGD over the joint objective.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::embed::{sample_negative, EmbeddingTable, TrainConfig};
use crate::error::{Error, Result};
use crate::kg::{FilterSet, Triple};
use crate::reg::{combined_loss, BatchItem, TextRegularizer};

/// Attempts per negative before accepting a corruption that is a known
/// triple.
const MAX_RESAMPLE: usize = 64;

/// Generator for everything drawn during initialization and training.
pub fn training_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Separate stream for the cosine projection, so that enabling it does not
/// shift the embedding initialization or the sampling sequence.
pub fn projection_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpochStats {
    /// Mean margin loss per (positive, negative) pair.
    pub mean_kg_loss: f64,
    /// Mean unweighted regularizer loss per positive.
    pub mean_text_loss: f64,
}

/// One pass over `train` in shuffled mini-batches, followed by
/// renormalization of every entity row that moved.
pub fn train_epoch(
    emb: &mut EmbeddingTable,
    reg: &mut TextRegularizer,
    train: &[Triple],
    config: &TrainConfig,
    filter: Option<&FilterSet>,
    rng: &mut ChaCha8Rng,
) -> Result<EpochStats> {
    if train.is_empty() {
        return Err(Error::Invalid("no training triples".into()));
    }
    if reg.kind() != config.regularizer {
        return Err(Error::Config(format!(
            "configured regularizer '{}' but resources are for '{}'",
            config.regularizer,
            reg.kind()
        )));
    }
    let num_entities = emb.num_entities();
    let mut order = train.to_vec();
    order.shuffle(rng);

    let (mut kg_sum, mut text_sum) = (0.0, 0.0);
    let mut changed = vec![false; num_entities];
    for chunk in order.chunks(config.batch_size) {
        let mut batch = Vec::with_capacity(chunk.len());
        for &positive in chunk {
            let mut negatives = Vec::with_capacity(config.negatives);
            for _ in 0..config.negatives {
                negatives.push(draw_negative(&positive, num_entities, filter, config, rng)?);
            }
            batch.push(BatchItem {
                positive,
                negatives,
            });
        }
        let loss = combined_loss(emb, reg, &batch, config);
        kg_sum += loss.kg_part;
        text_sum += loss.text_part;
        emb.apply_tracked(&loss.grads, config.learning_rate, Some(&mut changed));
        if let (Some(p), Some(g)) = (reg.projection_mut(), &loss.grads.projection) {
            p.apply(g, config.learning_rate);
        }
    }
    // Rows that did not move are still unit-norm from the previous pass.
    emb.normalize_rows((0..num_entities).filter(|&i| changed[i]));

    let n = train.len() as f64;
    Ok(EpochStats {
        mean_kg_loss: kg_sum / (n * config.negatives as f64),
        mean_text_loss: text_sum / n,
    })
}

fn draw_negative(
    positive: &Triple,
    num_entities: usize,
    filter: Option<&FilterSet>,
    config: &TrainConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Triple> {
    let mut neg = sample_negative(positive, num_entities, rng)?;
    if let (true, Some(known)) = (config.filter_negatives, filter) {
        for _ in 0..MAX_RESAMPLE {
            if !known.contains(&neg) {
                break;
            }
            neg = sample_negative(positive, num_entities, rng)?;
        }
    }
    Ok(neg)
}

/// Embeddings, regularizer state and generator for a full training run.
#[derive(Clone, Debug)]
pub struct Trainer {
    pub config: TrainConfig,
    pub embeddings: EmbeddingTable,
    pub regularizer: TextRegularizer,
    rng: ChaCha8Rng,
}

impl Trainer {
    /// Validates the configuration and draws the initial embeddings.
    pub fn new(
        num_entities: usize,
        num_relations: usize,
        config: TrainConfig,
        regularizer: TextRegularizer,
    ) -> Result<Self> {
        config.validate()?;
        if regularizer.kind() != config.regularizer {
            return Err(Error::Config(format!(
                "configured regularizer '{}' but resources are for '{}'",
                config.regularizer,
                regularizer.kind()
            )));
        }
        if let Some(p) = regularizer.projection() {
            if p.out_dim() != config.dim {
                return Err(Error::Config(format!(
                    "projection maps to dimension {}, embeddings have {}",
                    p.out_dim(),
                    config.dim
                )));
            }
        }
        let mut rng = training_rng(config.seed);
        let embeddings = EmbeddingTable::init(num_entities, num_relations, config.dim, &mut rng);
        Ok(Trainer {
            config,
            embeddings,
            regularizer,
            rng,
        })
    }

    pub fn epoch(&mut self, train: &[Triple], filter: Option<&FilterSet>) -> Result<EpochStats> {
        train_epoch(
            &mut self.embeddings,
            &mut self.regularizer,
            train,
            &self.config,
            filter,
            &mut self.rng,
        )
    }

    /// Runs `config.epochs` epochs, calling `on_epoch` after each.
    pub fn fit<F>(
        &mut self,
        train: &[Triple],
        filter: Option<&FilterSet>,
        mut on_epoch: F,
    ) -> Result<Vec<EpochStats>>
    where
        F: FnMut(usize, &EpochStats),
    {
        let mut history = Vec::with_capacity(self.config.epochs);
        for epoch in 0..self.config.epochs {
            let stats = self.epoch(train, filter)?;
            on_epoch(epoch + 1, &stats);
            history.push(stats);
        }
        Ok(history)
    }
}
