//! TransE scoring, margin ranking loss, corruption sampling and gradients.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::grad::Gradients;
use crate::kg::Triple;
use crate::par::Parallelism;
use crate::reg::RegularizerKind;

/// Norm used for the translation residual `h + r - t`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NormOrder {
    L1,
    #[default]
    L2,
}

impl FromStr for NormOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" | "1" => Ok(NormOrder::L1),
            "l2" | "2" => Ok(NormOrder::L2),
            other => Err(Error::Config(format!("unknown norm order '{other}'"))),
        }
    }
}

impl fmt::Display for NormOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormOrder::L1 => "l1",
            NormOrder::L2 => "l2",
        })
    }
}

/// Hyper-parameters for joint training.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub dim: usize,
    pub margin: f64,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    /// Weight on the TransE margin loss.
    pub lambda_kg: f64,
    /// Weight on the text regularizer.
    pub lambda_text: f64,
    pub negatives: usize,
    pub seed: u64,
    pub norm: NormOrder,
    pub regularizer: RegularizerKind,
    /// Resample corruptions that happen to be known triples.
    pub filter_negatives: bool,
    pub parallelism: Parallelism,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            dim: 50,
            margin: 1.0,
            learning_rate: 0.01,
            epochs: 100,
            batch_size: 128,
            lambda_kg: 1.0,
            lambda_text: 0.1,
            negatives: 1,
            seed: 0,
            norm: NormOrder::L2,
            regularizer: RegularizerKind::None,
            filter_negatives: false,
            parallelism: Parallelism::Sequential,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_owned()));
        if self.dim == 0 {
            return bad("dim must be >= 1");
        }
        if !(self.margin >= 0.0 && self.margin.is_finite()) {
            return bad("margin must be finite and >= 0");
        }
        // Zero is accepted: it freezes the parameters while still reporting losses.
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return bad("learning_rate must be finite and >= 0");
        }
        if !(self.lambda_kg >= 0.0 && self.lambda_kg.is_finite()) {
            return bad("lambda1 must be finite and >= 0");
        }
        if !(self.lambda_text >= 0.0 && self.lambda_text.is_finite()) {
            return bad("lambda2 must be finite and >= 0");
        }
        if self.batch_size == 0 {
            return bad("batch_size must be >= 1");
        }
        if self.negatives == 0 {
            return bad("negatives must be >= 1");
        }
        Ok(())
    }
}

/// Entity and relation vectors plus per-entity biases, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    entities: Vec<f64>,
    relations: Vec<f64>,
    bias: Vec<f64>,
}

impl EmbeddingTable {
    pub fn zeros(num_entities: usize, num_relations: usize, dim: usize) -> Self {
        EmbeddingTable {
            dim,
            entities: vec![0.0; num_entities * dim],
            relations: vec![0.0; num_relations * dim],
            bias: vec![0.0; num_entities],
        }
    }

    /// Uniform draws in `[-6/sqrt(d), 6/sqrt(d)]`, entities first, then
    /// relations; entity rows are unit-normalized afterwards.
    pub fn init<R: Rng + ?Sized>(
        num_entities: usize,
        num_relations: usize,
        dim: usize,
        rng: &mut R,
    ) -> Self {
        let bound = 6.0 / (dim as f64).sqrt();
        let mut table = Self::zeros(num_entities, num_relations, dim);
        for x in table.entities.iter_mut().chain(table.relations.iter_mut()) {
            *x = rng.gen_range(-bound..=bound);
        }
        table.normalize_entities();
        table
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_entities(&self) -> usize {
        self.bias.len()
    }

    pub fn num_relations(&self) -> usize {
        self.relations.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn entity(&self, i: usize) -> &[f64] {
        &self.entities[i * self.dim..(i + 1) * self.dim]
    }

    pub fn entity_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.entities[i * self.dim..(i + 1) * self.dim]
    }

    pub fn relation(&self, i: usize) -> &[f64] {
        &self.relations[i * self.dim..(i + 1) * self.dim]
    }

    pub fn relation_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.relations[i * self.dim..(i + 1) * self.dim]
    }

    pub fn bias(&self, i: usize) -> f64 {
        self.bias[i]
    }

    pub fn bias_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.bias[i]
    }

    pub fn is_finite(&self) -> bool {
        self.entities
            .iter()
            .chain(&self.relations)
            .chain(&self.bias)
            .all(|x| x.is_finite())
    }

    /// Rescales every non-zero entity row to unit L2 norm.
    pub fn normalize_entities(&mut self) {
        if self.dim == 0 {
            return;
        }
        for row in self.entities.chunks_mut(self.dim) {
            let n = l2_norm(row);
            if n > 0.0 {
                row.iter_mut().for_each(|x| *x /= n);
            }
        }
    }

    /// Rescales the listed entity rows to unit L2 norm.
    pub fn normalize_rows(&mut self, rows: impl IntoIterator<Item = usize>) {
        for i in rows {
            let row = self.entity_mut(i);
            let n = l2_norm(row);
            if n > 0.0 {
                row.iter_mut().for_each(|x| *x /= n);
            }
        }
    }

    /// Plain SGD step: `param -= lr * grad` for every touched embedding
    /// parameter. Projection gradients are applied by the owner of the
    /// projection.
    pub fn apply(&mut self, grads: &Gradients, lr: f64) {
        self.apply_tracked(grads, lr, None);
    }

    /// Like [`apply`](Self::apply), additionally flagging in `changed` every
    /// entity row whose values moved.
    pub fn apply_tracked(&mut self, grads: &Gradients, lr: f64, mut changed: Option<&mut [bool]>) {
        for (&i, g) in &grads.entity {
            let mut moved = false;
            for (x, gx) in self.entity_mut(i).iter_mut().zip(g) {
                let next = *x - lr * gx;
                moved |= next != *x;
                *x = next;
            }
            if let (true, Some(c)) = (moved, changed.as_deref_mut()) {
                c[i] = true;
            }
        }
        for (&i, g) in &grads.relation {
            for (x, gx) in self.relation_mut(i).iter_mut().zip(g) {
                *x -= lr * gx;
            }
        }
        for (&i, &g) in &grads.bias {
            self.bias[i] -= lr * g;
        }
    }

    fn check_entity(&self, i: usize) -> Result<()> {
        if i >= self.num_entities() {
            return Err(Error::IndexOutOfRange {
                what: "entity",
                index: i,
                size: self.num_entities(),
            });
        }
        Ok(())
    }

    pub fn check(&self, t: &Triple) -> Result<()> {
        self.check_entity(t.head)?;
        self.check_entity(t.tail)?;
        if t.relation >= self.num_relations() {
            return Err(Error::IndexOutOfRange {
                what: "relation",
                index: t.relation,
                size: self.num_relations(),
            });
        }
        Ok(())
    }
}

pub(crate) fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn residual(emb: &EmbeddingTable, t: &Triple) -> Vec<f64> {
    let (h, r, tl) = (
        emb.entity(t.head),
        emb.relation(t.relation),
        emb.entity(t.tail),
    );
    h.iter()
        .zip(r)
        .zip(tl)
        .map(|((h, r), t)| h + r - t)
        .collect()
}

fn norm_of(v: &[f64], norm: NormOrder) -> f64 {
    match norm {
        NormOrder::L1 => v.iter().map(|x| x.abs()).sum(),
        NormOrder::L2 => l2_norm(v),
    }
}

/// `||h + r - t||` under the given norm; lower is better.
pub fn score_triple(emb: &EmbeddingTable, t: &Triple, norm: NormOrder) -> Result<f64> {
    emb.check(t)?;
    Ok(score_unchecked(emb, t.head, t.relation, t.tail, norm))
}

/// Hot-path scorer for evaluation; indices must be valid.
pub(crate) fn score_unchecked(
    emb: &EmbeddingTable,
    head: usize,
    relation: usize,
    tail: usize,
    norm: NormOrder,
) -> f64 {
    let (h, r, t) = (emb.entity(head), emb.relation(relation), emb.entity(tail));
    let it = h.iter().zip(r).zip(t).map(|((h, r), t)| h + r - t);
    match norm {
        NormOrder::L1 => it.map(f64::abs).sum(),
        NormOrder::L2 => it.map(|x| x * x).sum::<f64>().sqrt(),
    }
}

pub fn margin_loss(pos: f64, neg: f64, margin: f64) -> f64 {
    (margin + pos - neg).max(0.0)
}

/// Corrupts the head or the tail (each with probability 1/2) with a
/// uniformly drawn different entity.
pub fn sample_negative<R: Rng + ?Sized>(
    t: &Triple,
    num_entities: usize,
    rng: &mut R,
) -> Result<Triple> {
    if num_entities < 2 {
        return Err(Error::Invalid(format!(
            "negative sampling needs at least 2 entities, have {num_entities}"
        )));
    }
    let corrupt_head = rng.gen_bool(0.5);
    let original = if corrupt_head { t.head } else { t.tail };
    let mut replacement = rng.gen_range(0..num_entities - 1);
    if replacement >= original {
        replacement += 1;
    }
    Ok(if corrupt_head {
        Triple::new(replacement, t.relation, t.tail)
    } else {
        Triple::new(t.head, t.relation, replacement)
    })
}

/// Derivative of the residual norm with respect to the residual.
fn norm_gradient(v: &[f64], norm: NormOrder) -> Vec<f64> {
    match norm {
        NormOrder::L2 => {
            let n = l2_norm(v);
            if n == 0.0 {
                vec![0.0; v.len()]
            } else {
                v.iter().map(|x| x / n).collect()
            }
        }
        NormOrder::L1 => v
            .iter()
            .map(|&x| {
                if x > 0.0 {
                    1.0
                } else if x < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            })
            .collect(),
    }
}

/// Margin loss of a (positive, negative) pair and its gradient with respect to
/// the touched head, tail and relation vectors. The gradient is empty when the
/// margin is satisfied.
pub fn transe_gradients(
    emb: &EmbeddingTable,
    pos: &Triple,
    neg: &Triple,
    margin: f64,
    norm: NormOrder,
) -> (f64, Gradients) {
    let vp = residual(emb, pos);
    let vn = residual(emb, neg);
    let loss = margin_loss(norm_of(&vp, norm), norm_of(&vn, norm), margin);
    let mut grads = Gradients::new();
    if loss <= 0.0 {
        return (loss, grads);
    }
    let gp = norm_gradient(&vp, norm);
    let gn = norm_gradient(&vn, norm);
    grads.add_entity(pos.head, 1.0, &gp);
    grads.add_relation(pos.relation, 1.0, &gp);
    grads.add_entity(pos.tail, -1.0, &gp);
    grads.add_entity(neg.head, -1.0, &gn);
    grads.add_relation(neg.relation, -1.0, &gn);
    grads.add_entity(neg.tail, 1.0, &gn);
    (loss, grads)
}
