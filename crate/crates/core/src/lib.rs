//! Knowledge-graph embeddings trained with a TransE margin loss jointly with
//! text-derived similarity regularizers, plus raw and filtered link-prediction
//! evaluation.
//!
//! The crate is organized bottom-up:
//!
//! - [`kg`]: triple files, vocabularies, filter sets, name dictionaries.
//! - [`embed`]: embedding tables, TransE scoring, margin loss, corruption
//!   sampling and analytic gradients.
//! - [`text`]: word vectors, entity documents, co-occurrence counts, TF-IDF,
//!   relaxed word-mover gain, rank similarity and pair caches.
//! - [`reg`]: regularizer losses with gradients and the joint objective.
//! - [`train`]: mini-batch SGD.
//! - [`eval`]: ranks, Hits@K and MRR.
//!
//! Batch-level loops (evaluation, cache precomputation, per-batch gradient
//! computation) run on rayon when the `parallel` feature is enabled and
//! [`Parallelism::Parallel`] is requested; both modes give identical results.

pub mod checkpoint;
pub mod embed;
pub mod error;
pub mod eval;
pub mod grad;
pub mod kg;
pub mod par;
pub mod reg;
pub mod synthetic;
pub mod text;
pub mod train;

pub use embed::{EmbeddingTable, NormOrder, TrainConfig};
pub use error::{Error, Result};
pub use eval::{evaluate, EvalOptions, Metrics, MetricsReport, TieMode};
pub use kg::{Dataset, FilterSet, Triple, Vocab};
pub use par::Parallelism;
pub use reg::{RegularizerKind, TextRegularizer};
pub use train::Trainer;
