//! Synthetic datasets drawn from the generative models behind the
//! likelihoods, with the generating partition.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Bernoulli, Beta, Distribution, Gamma, Normal};

use crate::error::{Error, Result};
use crate::likelihood::{BetaBinomialHyper, DataKind, Dataset, GammaNormalHyper};
use crate::subset::{SubsetMask, MAX_ITEMS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    /// 18 items in 3 clusters of 6, two normal features.
    Normal18,
    /// 20 items in a random 5-partition, 30 binary features.
    Binary20,
    /// `n` items in a random `k`-partition with `d` features.
    Custom {
        n: usize,
        k: usize,
        d: usize,
        kind: DataKind,
    },
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Normal18 => "normal-18",
            Experiment::Binary20 => "binary-20",
            Experiment::Custom { .. } => "custom",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Synthetic {
    pub data: Dataset,
    /// Generating clusters, sorted by smallest member.
    pub clusters: Vec<SubsetMask>,
}

impl Synthetic {
    /// 0-based generating cluster of every item.
    pub fn labels(&self) -> Vec<usize> {
        let mut out = vec![0; self.data.n()];
        for (j, c) in self.clusters.iter().enumerate() {
            for i in c.items() {
                out[i] = j;
            }
        }
        out
    }
}

/// Draws a dataset; the output depends only on `experiment` and `seed`.
pub fn generate(experiment: Experiment, seed: u64) -> Result<Synthetic> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match experiment {
        Experiment::Normal18 => {
            let labels: Vec<usize> = (0..18).map(|i| i / 6).collect();
            normal_data(&mut rng, &labels, 3, 2, &GammaNormalHyper::default())
        }
        Experiment::Binary20 => {
            let labels = random_k_partition(&mut rng, 20, 5);
            binary_data(&mut rng, &labels, 5, 30, &BetaBinomialHyper::default())
        }
        Experiment::Custom { n, k, d, kind } => {
            if n == 0 || n > MAX_ITEMS || k == 0 || k > n || d == 0 {
                return Err(Error::Domain(format!(
                    "custom experiment needs 1 <= k <= n <= {MAX_ITEMS} and d >= 1, got n={n}, k={k}, d={d}"
                )));
            }
            let labels = random_k_partition(&mut rng, n, k);
            match kind {
                DataKind::Continuous => {
                    normal_data(&mut rng, &labels, k, d, &GammaNormalHyper::default())
                }
                DataKind::Binary => {
                    binary_data(&mut rng, &labels, k, d, &BetaBinomialHyper::default())
                }
            }
        }
    }
}

/// Uniform over unordered `k`-partitions: uniform labelings are rejected
/// until every label is used, then relabeled by first appearance.
fn random_k_partition(rng: &mut impl Rng, n: usize, k: usize) -> Vec<usize> {
    loop {
        let raw: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
        let mut seen = vec![None; k];
        let mut next = 0;
        let labels: Vec<usize> = raw
            .iter()
            .map(|&r| {
                *seen[r].get_or_insert_with(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect();
        if next == k {
            return labels;
        }
    }
}

fn clusters_of(labels: &[usize], k: usize) -> Vec<SubsetMask> {
    let mut clusters = vec![SubsetMask::EMPTY; k];
    for (i, &l) in labels.iter().enumerate() {
        clusters[l] = clusters[l] | SubsetMask::singleton(i);
    }
    clusters.sort_by_key(|c| c.first());
    clusters
}

fn dist_err(e: impl std::fmt::Display) -> Error {
    Error::Domain(format!("invalid sampling distribution: {e}"))
}

fn normal_data(
    rng: &mut impl Rng,
    labels: &[usize],
    k: usize,
    d: usize,
    h: &GammaNormalHyper,
) -> Result<Synthetic> {
    let precision = Gamma::new(h.alpha, 1.0 / h.beta).map_err(dist_err)?;
    // Per cluster and feature: precision r, then mean m | r.
    let mut params = Vec::with_capacity(k * d);
    for _ in 0..k * d {
        let r: f64 = precision.sample(rng);
        let m = Normal::new(h.mu, (h.tau * r).recip().sqrt())
            .map_err(dist_err)?
            .sample(rng);
        params.push((m, r));
    }
    let mut values = Vec::with_capacity(labels.len() * d);
    for &l in labels {
        for f in 0..d {
            let (m, r) = params[l * d + f];
            values.push(
                Normal::new(m, r.recip().sqrt())
                    .map_err(dist_err)?
                    .sample(rng),
            );
        }
    }
    Ok(Synthetic {
        data: Dataset::new(labels.len(), d, DataKind::Continuous, values)?,
        clusters: clusters_of(labels, k),
    })
}

fn binary_data(
    rng: &mut impl Rng,
    labels: &[usize],
    k: usize,
    d: usize,
    h: &BetaBinomialHyper,
) -> Result<Synthetic> {
    let prior = Beta::new(h.alpha, h.beta).map_err(dist_err)?;
    let means: Vec<f64> = (0..k * d).map(|_| prior.sample(rng)).collect();
    let mut values = Vec::with_capacity(labels.len() * d);
    for &l in labels {
        for f in 0..d {
            let y = Bernoulli::new(means[l * d + f])
                .map_err(dist_err)?
                .sample(rng);
            values.push(if y { 1.0 } else { 0.0 });
        }
    }
    Ok(Synthetic {
        data: Dataset::new(labels.len(), d, DataKind::Binary, values)?,
        clusters: clusters_of(labels, k),
    })
}
