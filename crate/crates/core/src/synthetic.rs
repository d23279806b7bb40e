//! Planted-community graphs with correlated entity documents, for
//! experiments and benchmarks.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::kg::RawTriple;

#[derive(Clone, Debug, PartialEq)]
pub struct CommunityGraphSpec {
    pub entities: usize,
    pub relations: usize,
    pub communities: usize,
    /// Outgoing edges drawn per entity (duplicates collapse).
    pub edges_per_entity: usize,
    /// Probability that an edge stays inside the head's community.
    pub intra_probability: f64,
    pub test_fraction: f64,
    /// Words per community-specific pool, and in the shared pool.
    pub pool_size: usize,
    pub document_length: usize,
    /// Probability that a document token comes from the entity's own
    /// community pool rather than the shared pool.
    pub document_purity: f64,
    pub seed: u64,
}

impl Default for CommunityGraphSpec {
    fn default() -> Self {
        CommunityGraphSpec {
            entities: 200,
            relations: 2,
            communities: 2,
            edges_per_entity: 5,
            intra_probability: 0.9,
            test_fraction: 0.2,
            pool_size: 40,
            document_length: 30,
            document_purity: 0.7,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CommunityGraph {
    pub train: Vec<RawTriple>,
    pub test: Vec<RawTriple>,
    /// `(entity id, document text)` for every entity.
    pub documents: Vec<(String, String)>,
    pub community: Vec<usize>,
}

pub fn entity_id(i: usize) -> String {
    format!("e{i}")
}

pub fn generate(spec: &CommunityGraphSpec) -> CommunityGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let community: Vec<usize> = (0..spec.entities).map(|i| i % spec.communities).collect();
    let members: Vec<Vec<usize>> = (0..spec.communities)
        .map(|c| (0..spec.entities).filter(|&i| community[i] == c).collect())
        .collect();

    let mut seen = HashSet::new();
    let mut triples = Vec::new();
    for (head, &own) in community.iter().enumerate() {
        for _ in 0..spec.edges_per_entity {
            let target = if spec.communities == 1 || rng.gen_bool(spec.intra_probability) {
                own
            } else {
                let mut c = rng.gen_range(0..spec.communities - 1);
                if c >= own {
                    c += 1;
                }
                c
            };
            let tail = *members[target]
                .choose(&mut rng)
                .expect("non-empty community");
            if tail == head {
                continue;
            }
            let relation = rng.gen_range(0..spec.relations);
            if seen.insert((head, relation, tail)) {
                triples.push((head, relation, tail));
            }
        }
    }
    triples.shuffle(&mut rng);
    let n_test = (triples.len() as f64 * spec.test_fraction).round() as usize;
    let to_raw = |&(h, r, t): &(usize, usize, usize)| {
        RawTriple::new(entity_id(h), format!("r{r}"), entity_id(t))
    };
    let test = triples[..n_test].iter().map(to_raw).collect();
    let train = triples[n_test..].iter().map(to_raw).collect();

    let documents = (0..spec.entities)
        .map(|i| {
            let words: Vec<String> = (0..spec.document_length)
                .map(|_| {
                    let w = rng.gen_range(0..spec.pool_size);
                    if rng.gen_bool(spec.document_purity) {
                        format!("c{}w{w}", community[i])
                    } else {
                        format!("shared{w}")
                    }
                })
                .collect();
            (entity_id(i), words.join(" "))
        })
        .collect();

    CommunityGraph {
        train,
        test,
        documents,
        community,
    }
}
