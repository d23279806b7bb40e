#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

pub const TRAIN: &str = "\
/m/paris\tlocated_in\t/m/france
/m/lyon\tlocated_in\t/m/france
/m/berlin\tlocated_in\t/m/germany
/m/munich\tlocated_in\t/m/germany
/m/france\tborders\t/m/germany
/m/paris\tsister_city\t/m/berlin
/m/rome\tlocated_in\t/m/italy
/m/milan\tlocated_in\t/m/italy
/m/italy\tborders\t/m/france
";

pub const TEST: &str = "\
/m/lyon\tsister_city\t/m/munich
/m/rome\tsister_city\t/m/paris
";

const NAMES: &str = "\
/m/paris\tParis
/m/paris\tCity of Light
/m/lyon\tLyon
/m/berlin\tBerlin
/m/munich\tMunich
/m/france\tFrance
/m/germany\tGermany
/m/rome\tRome
/m/italy\tItaly
";

const VECTORS: &str = "\
paris 0.9 0.1 0.0 0.2
city 0.5 0.5 0.1 0.0
light 0.1 0.2 0.9 0.0
lyon 0.8 0.2 0.1 0.1
berlin 0.1 0.9 0.0 0.2
munich 0.2 0.8 0.1 0.1
france 0.9 0.0 0.3 0.0
germany 0.0 0.9 0.3 0.1
rome 0.3 0.3 0.0 0.9
italy 0.2 0.2 0.1 0.9
capital 0.4 0.4 0.4 0.4
river 0.1 0.1 0.8 0.3
";

const CORPUS: &str = "\
<e:/m/paris>Paris</e> is the capital of <e:/m/france>France</e> .
<e:/m/berlin>Berlin</e> and <e:/m/paris>Paris</e> signed a partnership .
<e:/m/munich>Munich</e> lies in southern <e:/m/germany>Germany</e> .
<e:/m/france>France</e> borders <e:/m/germany>Germany</e> and <e:/m/italy>Italy</e> .
<e:/m/rome>Rome</e> is the capital of <e:/m/italy>Italy</e> , not <e:/m/unknown>Atlantis</e> .
";

const DOCS: &[(&str, &str)] = &[
    (
        "/m/paris",
        "Paris is the capital of France, on the river Seine.",
    ),
    ("/m/lyon", "Lyon is a city in France on the river Rhone."),
    (
        "/m/berlin",
        "Berlin is the capital of Germany, on the river Spree.",
    ),
    ("/m/munich", "Munich is a city in Germany near the Alps."),
    ("/m/france", "France is a country; its capital is Paris."),
    ("/m/germany", "Germany is a country; its capital is Berlin."),
    (
        "/m/rome",
        "Rome is the capital of Italy, on the river Tiber.",
    ),
    ("/m/italy", "Italy is a country; its capital is Rome."),
];

/// A toy dataset with every resource the commands read, and a config file
/// referring to it with relative paths.
pub struct Fixture {
    pub dir: TempDir,
}

impl Fixture {
    pub fn new(extra_config: &str) -> Self {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path();
        fs::write(root.join("train.tsv"), TRAIN).unwrap();
        fs::write(root.join("test.tsv"), TEST).unwrap();
        fs::write(root.join("names.tsv"), NAMES).unwrap();
        fs::write(root.join("vectors.txt"), VECTORS).unwrap();
        fs::write(root.join("corpus.txt"), CORPUS).unwrap();
        fs::create_dir(root.join("docs")).unwrap();
        for (id, text) in DOCS {
            fs::write(root.join("docs").join(id.replace('/', "_")), text).unwrap();
        }
        fs::create_dir(root.join("empty_docs")).unwrap();
        let config = format!(
            "# toy run\n\
             train = train.tsv\n\
             test = test.tsv\n\
             names = names.tsv\n\
             word_vectors = vectors.txt\n\
             corpus = corpus.txt\n\
             docs_dir = docs\n\
             cache = cache.tsv\n\
             checkpoint = model.ckpt\n\
             loss_log = loss.tsv\n\
             metrics = metrics.tsv\n\
             stats = stats.tsv\n\
             dim = 4\n\
             epochs = 30\n\
             batch_size = 4\n\
             learning_rate = 0.05\n\
             seed = 7\n\
             {extra_config}\n"
        );
        fs::write(root.join("run.conf"), config).unwrap();
        Fixture { dir }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    pub fn config(&self) -> PathBuf {
        self.path("run.conf")
    }

    pub fn read(&self, name: &str) -> Vec<u8> {
        fs::read(self.path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
    }

    /// Runs `texreg --config run.conf <args>`.
    pub fn run(&self, args: &[&str]) -> Output {
        texreg(&self.config(), args)
    }
}

pub fn texreg(config: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_texreg"))
        .arg("--config")
        .arg(config)
        .args(args)
        .output()
        .expect("spawn texreg")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}
