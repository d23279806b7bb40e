//! Flat `key = value` run configuration.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use texreg_core::eval::TieMode;
use texreg_core::text::{Context, DEFAULT_TOP_N};
use texreg_core::{NormOrder, RegularizerKind, TrainConfig};

use crate::CliError;

/// Everything a command may need. Paths are resolved against the directory
/// of the config file.
#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    pub train: Option<PathBuf>,
    pub valid: Option<PathBuf>,
    pub test: Option<PathBuf>,
    pub names: Option<PathBuf>,
    pub word_vectors: Option<PathBuf>,
    pub corpus: Option<PathBuf>,
    pub docs_dir: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
    pub loss_log: Option<PathBuf>,
    pub metrics: Option<PathBuf>,
    pub stats: Option<PathBuf>,

    pub train_config: TrainConfig,
    pub normalize_word_vectors: bool,
    pub tfidf_cosine: bool,
    pub context: Context,
    pub top_n: usize,
    pub tie: TieMode,
    pub corpus_triples: u64,
    pub corpus_entities: u64,
}

const PATH_KEYS: &[&str] = &[
    "train",
    "valid",
    "test",
    "names",
    "word_vectors",
    "corpus",
    "docs_dir",
    "cache",
    "checkpoint",
    "loss_log",
    "metrics",
    "stats",
];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::config(format!("line {}: expected key = value", lineno + 1))
        })?;
        out.insert(k.trim().to_owned(), v.trim().to_owned());
    }
    Ok(out)
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| CliError::config(format!("{key}: cannot parse '{value}': {e}")))
}

fn parse_context(value: &str) -> Result<Context, CliError> {
    if value == "sentence" {
        return Ok(Context::Sentence);
    }
    value
        .strip_prefix("window:")
        .and_then(|w| w.parse().ok())
        .map(Context::Window)
        .ok_or_else(|| {
            CliError::config(format!(
                "context: expected 'sentence' or 'window:<n>', got '{value}'"
            ))
        })
}

impl RunConfig {
    pub fn new() -> Self {
        RunConfig {
            normalize_word_vectors: true,
            tfidf_cosine: true,
            top_n: DEFAULT_TOP_N,
            ..Default::default()
        }
    }

    /// Reads `path` (if any), then applies `overrides` in order.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self, CliError> {
        let mut config = RunConfig::new();
        let base = match path {
            Some(p) => {
                let text = fs::read_to_string(p)
                    .map_err(|e| CliError::config(format!("{}: {e}", p.display())))?;
                let base = p.parent().map(Path::to_path_buf).unwrap_or_default();
                for (k, v) in parse_pairs(&text)? {
                    config.set(&k, &v, &base)?;
                }
                base
            }
            None => PathBuf::new(),
        };
        for o in overrides {
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| CliError::config(format!("--set expects key=value, got '{o}'")))?;
            config.set(k.trim(), v.trim(), &base)?;
        }
        Ok(config)
    }

    pub fn set(&mut self, key: &str, value: &str, base: &Path) -> Result<(), CliError> {
        if PATH_KEYS.contains(&key) {
            let p = Path::new(value);
            let resolved = if p.is_absolute() {
                p.to_path_buf()
            } else {
                base.join(p)
            };
            let slot = match key {
                "train" => &mut self.train,
                "valid" => &mut self.valid,
                "test" => &mut self.test,
                "names" => &mut self.names,
                "word_vectors" => &mut self.word_vectors,
                "corpus" => &mut self.corpus,
                "docs_dir" => &mut self.docs_dir,
                "cache" => &mut self.cache,
                "checkpoint" => &mut self.checkpoint,
                "loss_log" => &mut self.loss_log,
                "metrics" => &mut self.metrics,
                _ => &mut self.stats,
            };
            *slot = Some(resolved);
            return Ok(());
        }
        let tc = &mut self.train_config;
        match key {
            "dim" => tc.dim = parse_value(key, value)?,
            "margin" => tc.margin = parse_value(key, value)?,
            "learning_rate" => tc.learning_rate = parse_value(key, value)?,
            "epochs" => tc.epochs = parse_value(key, value)?,
            "batch_size" => tc.batch_size = parse_value(key, value)?,
            "lambda1" => tc.lambda_kg = parse_value(key, value)?,
            "lambda2" => tc.lambda_text = parse_value(key, value)?,
            "negatives" => tc.negatives = parse_value(key, value)?,
            "seed" => tc.seed = parse_value(key, value)?,
            "norm" => tc.norm = parse_value::<NormOrder>(key, value)?,
            "regularizer" => tc.regularizer = parse_value::<RegularizerKind>(key, value)?,
            "filter_negatives" => tc.filter_negatives = parse_value(key, value)?,
            "normalize_word_vectors" => self.normalize_word_vectors = parse_value(key, value)?,
            "tfidf_cosine" => self.tfidf_cosine = parse_value(key, value)?,
            "context" => self.context = parse_context(value)?,
            "top_n" => self.top_n = parse_value(key, value)?,
            "tie" => self.tie = parse_value(key, value)?,
            "corpus_triples" => self.corpus_triples = parse_value(key, value)?,
            "corpus_entities" => self.corpus_entities = parse_value(key, value)?,
            other => return Err(CliError::config(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// The path configured under `key`, which must exist.
    pub fn input<'a>(&self, key: &str, value: &'a Option<PathBuf>) -> Result<&'a Path, CliError> {
        let p = value
            .as_deref()
            .ok_or_else(|| CliError::config(format!("missing required setting '{key}'")))?;
        if !p.exists() {
            return Err(CliError::config(format!(
                "{key}: {} does not exist",
                p.display()
            )));
        }
        Ok(p)
    }

    /// Optional input: if configured it must exist.
    pub fn optional_input<'a>(
        &self,
        key: &str,
        value: &'a Option<PathBuf>,
    ) -> Result<Option<&'a Path>, CliError> {
        match value {
            Some(_) => self.input(key, value).map(Some),
            None => Ok(None),
        }
    }

    pub fn output<'a>(&self, key: &str, value: &'a Option<PathBuf>) -> Result<&'a Path, CliError> {
        value
            .as_deref()
            .ok_or_else(|| CliError::config(format!("missing required setting '{key}'")))
    }
}
