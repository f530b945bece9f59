//! Deterministic generators. Every generator draws from a `ChaCha8Rng` seeded with
//! `seed` and switched to stream `stream`, so batch item `i` of a run uses stream `i`
//! and items can be produced in any order.

mod basic;
mod decomposable;
mod small;
mod spec;
mod ten_set;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::patterns::{self, Pattern, PatternError};

pub use basic::synthesize_basic;
pub use decomposable::synthesize_totally_decomposable;
pub use small::{enumerate_small, enumerate_small_unlabelled, isomorphic, SmallGraphs, ENUMERATE_MAX_N};
pub use spec::{GenMode, GenSpec, SpecParseError};
pub use ten_set::synthesize_ten_set;

use crate::decomp::{DecompositionTree, KPartition};
use crate::pipelines::{BasicStructure, TenSetPartition};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("enumeration supports at most {max} vertices, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("infeasible spec: {0}")]
    Infeasible(String),
    #[error("spec has mode {found}, expected {expected}")]
    WrongMode { expected: &'static str, found: &'static str },
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Inserts edges in random order, each with probability `density`, and undoes any
/// insertion that creates one of the patterns.
pub fn random_free(spec: &GenSpec) -> Result<Graph, GenError> {
    let GenMode::RandomFree { n, patterns: names, density } = &spec.mode else {
        return Err(GenError::WrongMode { expected: "random-free", found: spec.mode.name() });
    };
    let pats = names.iter().map(|s| Pattern::named(s)).collect::<Result<Vec<_>, _>>()?;
    let mut rng = spec.rng();
    let mut pairs: Vec<(usize, usize)> = (0..*n).flat_map(|u| (u + 1..*n).map(move |v| (u, v))).collect();
    pairs.shuffle(&mut rng);
    let mut edges = Vec::new();
    for pair in pairs {
        if !rng.gen_bool(density.clamp(0.0, 1.0)) {
            continue;
        }
        edges.push(pair);
        let g = Graph::new(*n, &edges)?;
        if !patterns::is_free(&g, &pats).is_free() {
            edges.pop();
        }
    }
    Ok(Graph::new(*n, &edges)?)
}

/// A generator's output with whatever witness it planted.
#[derive(Debug, Clone)]
pub enum Generated {
    Plain(Graph),
    Basic(Graph, BasicStructure),
    TenSet(Graph, TenSetPartition),
    Decomposable(Graph, KPartition, DecompositionTree),
}

impl Generated {
    pub fn graph(&self) -> &Graph {
        match self {
            Generated::Plain(g) | Generated::Basic(g, _) | Generated::TenSet(g, _) | Generated::Decomposable(g, ..) => g,
        }
    }
}

pub fn generate(spec: &GenSpec) -> Result<Generated, GenError> {
    Ok(match spec.mode {
        GenMode::RandomFree { .. } => Generated::Plain(random_free(spec)?),
        GenMode::Basic { .. } => {
            let (g, b) = synthesize_basic(spec)?;
            Generated::Basic(g, b)
        }
        GenMode::TenSet { .. } => {
            let (g, p) = synthesize_ten_set(spec)?;
            Generated::TenSet(g, p)
        }
        GenMode::TotallyKDecomposable { .. } => {
            let (g, p, t) = synthesize_totally_decomposable(spec)?;
            Generated::Decomposable(g, p, t)
        }
    })
}

#[cfg(test)]
mod test {
    use super::*;

    fn free_spec(seed: u64, n: usize, pats: &[&str], density: f64) -> GenSpec {
        GenSpec {
            seed,
            stream: 0,
            mode: GenMode::RandomFree { n, patterns: pats.iter().map(|s| s.to_string()).collect(), density },
        }
    }

    #[test]
    fn random_free_is_free_and_deterministic() {
        for seed in 0..20 {
            let spec = free_spec(seed, 12, &["diamond", "P1+2P2"], 0.7);
            let g = random_free(&spec).unwrap();
            assert!(patterns::is_free_named(&g, &["diamond", "P1+2P2"]).unwrap().is_free());
            assert_eq!(g, random_free(&spec).unwrap());
        }
        assert_eq!(random_free(&free_spec(1, 1, &["K3"], 1.0)).unwrap(), Graph::empty(1));
    }

    #[test]
    fn streams_differ() {
        let mut a = free_spec(5, 14, &["K3"], 1.0);
        let first = random_free(&a).unwrap();
        a.stream = 1;
        assert_ne!(first, random_free(&a).unwrap());
    }

    #[test]
    fn wrong_mode() {
        let spec = GenSpec { seed: 0, stream: 0, mode: GenMode::TotallyKDecomposable { k: 2, n: 4 } };
        assert!(matches!(random_free(&spec), Err(GenError::WrongMode { .. })));
    }
}
