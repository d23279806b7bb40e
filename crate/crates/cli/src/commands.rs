use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use texreg_core::checkpoint;
use texreg_core::eval::{evaluate, EvalOptions};
use texreg_core::kg::{build_filter_set, corpus_stats, Dataset, NameMap};
use texreg_core::reg::Projection;
use texreg_core::text::{
    build_cooccurrence, build_tfidf, connected_pairs, load_documents, precompute_cache,
    read_tagged_corpus, CacheKind, CacheResources, EntityWordSpace, SimilarityCache, TfidfOptions,
    WordVectorTable,
};
use texreg_core::train::projection_rng;
use texreg_core::{Parallelism, RegularizerKind, TextRegularizer, Trainer};

use crate::config::RunConfig;
use crate::CliError;

fn load_dataset(config: &RunConfig) -> Result<Dataset, CliError> {
    let train = config.input("train", &config.train)?;
    let valid = config.optional_input("valid", &config.valid)?;
    let test = config.optional_input("test", &config.test)?;
    Ok(Dataset::load(train, valid, test)?)
}

fn write_output(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Runtime(anyhow::anyhow!("{}: {e}", path.display())))
}

fn word_space(config: &RunConfig, ds: &Dataset) -> Result<EntityWordSpace, CliError> {
    let names = NameMap::load(config.input("names", &config.names)?)?;
    let wvt = WordVectorTable::load(
        config.input("word_vectors", &config.word_vectors)?,
        config.normalize_word_vectors,
    )?;
    let space = EntityWordSpace::build(&ds.vocab, &names, &wvt);
    if space.coverage() == 0 {
        log::warn!("no entity has an in-vocabulary name");
    }
    Ok(space)
}

pub fn prep(kind: CacheKind, config: &RunConfig, deterministic: bool) -> Result<(), CliError> {
    let ds = load_dataset(config)?;
    let out = config.output("cache", &config.cache)?;
    let train = ds.store.train();
    let parallelism = if deterministic {
        Parallelism::Sequential
    } else {
        Parallelism::Parallel
    };
    let cache = match kind {
        CacheKind::Cooccurrence => {
            let corpus = read_tagged_corpus(config.input("corpus", &config.corpus)?)?;
            let x = build_cooccurrence(&corpus, &ds.vocab, config.context).matrix;
            precompute_cache(&train, CacheResources::Cooccurrence(&x), parallelism)
        }
        CacheKind::RwmdGain => {
            let docs = load_documents(config.input("docs_dir", &config.docs_dir)?, &ds.vocab)?;
            let wvt = WordVectorTable::load(
                config.input("word_vectors", &config.word_vectors)?,
                config.normalize_word_vectors,
            )?;
            precompute_cache(
                &train,
                CacheResources::RwmdGain {
                    documents: &docs,
                    word_vectors: &wvt,
                },
                parallelism,
            )
        }
        CacheKind::Tfidf => {
            let docs: Vec<_> =
                load_documents(config.input("docs_dir", &config.docs_dir)?, &ds.vocab)?
                    .into_iter()
                    .flatten()
                    .collect();
            let index = build_tfidf(
                &docs,
                TfidfOptions {
                    cosine_normalize: config.tfidf_cosine,
                },
            );
            precompute_cache(&train, CacheResources::Tfidf(&index), parallelism)
        }
        CacheKind::Rank => {
            let space = word_space(config, &ds)?;
            precompute_cache(
                &train,
                CacheResources::Rank {
                    space: &space,
                    top_n: config.top_n,
                },
                parallelism,
            )
        }
    };
    cache.write(out, &ds.vocab)?;

    let pairs = connected_pairs(&train).len();
    let coverage = if pairs == 0 {
        0.0
    } else {
        cache.len() as f64 / pairs as f64
    };
    if cache.is_empty() {
        log::warn!("{kind} cache is empty: no training pair has the required text resources");
    }
    println!("kind\tpairs\ttrain_pairs\tcoverage");
    println!("{kind}\t{}\t{pairs}\t{coverage:.4}", cache.len());
    Ok(())
}

fn regularizer(config: &RunConfig, ds: &Dataset) -> Result<TextRegularizer, CliError> {
    let kind = config.train_config.regularizer;
    match kind {
        RegularizerKind::None => Ok(TextRegularizer::None),
        RegularizerKind::Cosine => {
            let space = word_space(config, ds)?;
            let mut rng = projection_rng(config.train_config.seed);
            let projection = Projection::init(space.dim(), config.train_config.dim, &mut rng);
            Ok(TextRegularizer::cosine(space, projection)?)
        }
        _ => {
            let path = config.input("cache", &config.cache)?;
            let cache = SimilarityCache::read(path, &ds.vocab).map_err(|e| match e {
                texreg_core::Error::Parse { .. } => CliError::config(e.to_string()),
                other => other.into(),
            })?;
            Ok(TextRegularizer::from_cache(kind, cache)?)
        }
    }
}

pub fn train(config: &RunConfig, deterministic: bool) -> Result<(), CliError> {
    let mut train_config = config.train_config.clone();
    train_config.parallelism = if deterministic {
        Parallelism::Sequential
    } else {
        Parallelism::Parallel
    };
    train_config.validate()?;
    let ds = load_dataset(config)?;
    let train = ds.store.train();
    if train.is_empty() {
        return Err(CliError::config("training split is empty"));
    }
    let checkpoint_path = config.output("checkpoint", &config.checkpoint)?;
    let reg = regularizer(config, &ds)?;
    let filter = train_config
        .filter_negatives
        .then(|| build_filter_set(&ds.store));

    let mut trainer = Trainer::new(
        ds.vocab.num_entities(),
        ds.vocab.num_relations(),
        train_config,
        reg,
    )?;
    let mut log = String::from("epoch\tkg_loss\ttext_loss\n");
    trainer.fit(&train, filter.as_ref(), |epoch, stats| {
        writeln!(
            log,
            "{epoch}\t{:?}\t{:?}",
            stats.mean_kg_loss, stats.mean_text_loss
        )
        .expect("write to String");
        log::info!(
            "epoch {epoch}: kg {:.6} text {:.6}",
            stats.mean_kg_loss,
            stats.mean_text_loss
        );
    })?;
    if !trainer.embeddings.is_finite() {
        return Err(CliError::Runtime(anyhow::anyhow!(
            "training diverged: non-finite embeddings"
        )));
    }
    checkpoint::write(&trainer.embeddings, checkpoint_path)?;
    if let Some(path) = &config.loss_log {
        write_output(path, &log)?;
    }
    Ok(())
}

pub fn eval(config: &RunConfig, deterministic: bool) -> Result<(), CliError> {
    let ds = load_dataset(config)?;
    config.input("test", &config.test)?;
    let test = ds.store.test();
    if test.is_empty() {
        return Err(CliError::config("test split is empty"));
    }
    let emb = checkpoint::read(config.input("checkpoint", &config.checkpoint)?)?;
    if emb.num_entities() != ds.vocab.num_entities()
        || emb.num_relations() != ds.vocab.num_relations()
    {
        return Err(CliError::config(format!(
            "checkpoint has |E|={} |R|={}, vocabulary has |E|={} |R|={}",
            emb.num_entities(),
            emb.num_relations(),
            ds.vocab.num_entities(),
            ds.vocab.num_relations()
        )));
    }
    let filter = build_filter_set(&ds.store);
    let options = EvalOptions {
        norm: config.train_config.norm,
        tie: config.tie,
        parallelism: if deterministic {
            Parallelism::Sequential
        } else {
            Parallelism::Parallel
        },
    };
    let report = evaluate(&emb, &test, &filter, options)?;
    let tsv = report.to_tsv();
    if let Some(path) = &config.metrics {
        write_output(path, &tsv)?;
    }
    print!("{tsv}");
    Ok(())
}

pub fn stats(config: &RunConfig) -> Result<(), CliError> {
    let ds = load_dataset(config)?;
    let s = corpus_stats(&ds.store, config.corpus_triples, config.corpus_entities);
    let tsv = s.to_tsv();
    if let Some(path) = &config.stats {
        write_output(path, &tsv)?;
    }
    print!("{tsv}");
    Ok(())
}
