//! Exact posterior summaries for Bayesian clustering of a small number of
//! items.
//!
//! Under a product partition model the posterior probability of an ordered
//! `k`-partition is proportional to `w_k · Π_j f(S_j)`, where `f` combines a
//! per-cluster prior factor with the cluster's marginal likelihood. Summing
//! such products over all ordered `k`-partitions of a set is a `k`-fold
//! subset convolution of `f` with itself, so the posterior over the number
//! of clusters, the pairwise co-occurrence matrix and the best partition of
//! each size come out of `O(n 3^n)` table operations instead of an
//! enumeration of all `B_n` partitions.
//!
//! The pipeline is:
//!
//! 1. [`likelihood::build_f_table`] tabulates `log f(X)` for every subset.
//! 2. [`posterior::posterior_k`], [`posterior::cooccurrence`] and
//!    [`posterior::mode_partitions`] run the convolution engines from
//!    [`subset`].
//! 3. [`oracle`] recomputes the same quantities by brute-force enumeration
//!    for small `n`.

pub mod combinatorics;
mod error;
pub mod io;
pub mod likelihood;
pub mod logspace;
pub mod oracle;
pub mod posterior;
pub mod prior;
pub mod subset;
pub mod synth;

pub use combinatorics::LogNumberTable;
pub use error::{Error, Result};
pub use likelihood::{
    build_f_table, BetaBinomialHyper, ClusterStats, DataKind, Dataset, GammaNormalHyper, ModelSpec,
};
pub use logspace::{LogValue, LOG_ONE, LOG_ZERO};
pub use posterior::{
    cooccurrence, mode_partitions, posterior_k, Analysis, CooccurrenceMatrix, Partition,
    PosteriorSummary,
};
pub use prior::{PriorKind, PriorSpec};
pub use subset::{Engine, SubsetMask, SubsetTable};
