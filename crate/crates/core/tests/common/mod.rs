#![allow(dead_code)]

use cluster_posterior::synth::{generate, Experiment};
use cluster_posterior::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn dataset(n: usize, d: usize, kind: DataKind, seed: u64) -> Dataset {
    let k = (n / 3).max(1);
    generate(Experiment::Custom { n, k, d, kind }, seed)
        .unwrap()
        .data
}

pub fn default_model(kind: DataKind) -> ModelSpec {
    match kind {
        DataKind::Binary => ModelSpec::BetaBinomial(BetaBinomialHyper::default()),
        DataKind::Continuous => ModelSpec::GammaNormal(GammaNormalHyper::default()),
    }
}

pub fn priors() -> Vec<PriorSpec> {
    vec![
        PriorSpec::uniform_k(),
        PriorSpec::uniform_partitions(),
        PriorSpec::dirichlet_process(1.0).unwrap(),
        PriorSpec::dirichlet_process(2.5).unwrap(),
    ]
}

/// Log table with `f(∅) = −∞` and uniform random values elsewhere.
pub fn random_table(n: usize, spread: f64, seed: u64) -> SubsetTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SubsetTable::from_fn(n, |m| {
        if m.is_empty() {
            f64::NEG_INFINITY
        } else {
            rng.random_range(-spread..spread)
        }
    })
    .unwrap()
}

/// Cluster scores from the prior alone (a flat likelihood).
pub fn flat_table(n: usize, prior: &PriorSpec) -> SubsetTable {
    SubsetTable::from_fn(n, |m| {
        if m.is_empty() {
            f64::NEG_INFINITY
        } else {
            prior.log_f_prior(m.len()).unwrap()
        }
    })
    .unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| if x == y { 0.0 } else { (x - y).abs() })
        .fold(0.0, f64::max)
}

/// `log p(partition | y)` scored directly from the table.
pub fn log_posterior_of(
    f: &SubsetTable,
    prior: &PriorSpec,
    log_evidence: f64,
    clusters: &[SubsetMask],
) -> f64 {
    let n = f.n();
    let k = clusters.len();
    let tables = LogNumberTable::build(n).unwrap();
    let lw = prior.log_weight(k, n, &tables).unwrap();
    let score: f64 = clusters.iter().map(|&c| f.get(c)).sum();
    tables.ln_factorial(k).unwrap() + lw + score - log_evidence
}

pub fn assert_structure(summary: &PosteriorSummary, cooc: Option<&CooccurrenceMatrix>) {
    let total: f64 = summary.posterior_k.iter().sum();
    assert!((total - 1.0).abs() <= 1e-9, "posterior_k sums to {total}");
    assert!(summary.posterior_k.iter().all(|p| *p >= 0.0));
    if let Some(c) = cooc {
        let n = c.n();
        for i in 0..n {
            assert_eq!(c.get(i, i), 1.0);
            for j in 0..n {
                let v = c.get(i, j);
                assert!((-1e-9..=1.0 + 1e-9).contains(&v), "entry ({i},{j}) = {v}");
                assert_eq!(v, c.get(j, i));
            }
        }
    }
}
