//! Shared fixtures for the benchmarks.

use cluster_posterior::synth::{generate, Experiment};
use cluster_posterior::{
    build_f_table, DataKind, Dataset, GammaNormalHyper, ModelSpec, PriorSpec, SubsetTable,
};

/// Two-feature continuous data with `n` items in three clusters.
pub fn normal_data(n: usize, seed: u64) -> Dataset {
    generate(
        Experiment::Custom {
            n,
            k: 3.min(n),
            d: 2,
            kind: DataKind::Continuous,
        },
        seed,
    )
    .expect("valid experiment")
    .data
}

pub fn normal_model() -> ModelSpec {
    ModelSpec::GammaNormal(GammaNormalHyper::default())
}

/// Cluster score table for [`normal_data`] under the uniform prior on `k`.
pub fn likelihood_table(n: usize, seed: u64) -> SubsetTable {
    build_f_table(
        &normal_data(n, seed),
        &normal_model(),
        &PriorSpec::uniform_k(),
    )
    .expect("table builds")
}
