//! Exact posterior over the number of clusters, pairwise co-occurrence
//! probabilities and best partitions of each size.
//!
//! With `f^(k)` the `k`-fold subset convolution of the cluster score table,
//!
//! * `p(k | y) ∝ w_k · f^(k)(U)`,
//! * `p(i ~ j | y) ∝ Σ_k k·w_k Σ_{S ∋ i,j} f(S) · f^(k-1)(U∖S)`,
//! * the best `k`-partition comes from the same recursion over the
//!   max-product semiring.

use rayon::prelude::*;

use crate::combinatorics::LogNumberTable;
use crate::error::{Error, Result};
use crate::logspace::{log_sum_exp, LogAccumulator, LogValue, LOG_ZERO};
use crate::prior::PriorSpec;
use crate::subset::{
    iterate_convolutions, max_convolve, submasks, Engine, SubsetMask, SubsetTable,
};

/// Posterior and prior over the number of clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorSummary {
    pub n: usize,
    /// `log p(y)`.
    pub log_evidence: f64,
    /// `posterior_k[k-1] = p(k | y)`.
    pub posterior_k: Vec<f64>,
    /// `prior_k[k-1] = p(k)`.
    pub prior_k: Vec<f64>,
}

/// Symmetric matrix of `p(i and j share a cluster | y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CooccurrenceMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl CooccurrenceMatrix {
    pub fn from_entries(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Domain(format!(
                "{n}x{n} matrix needs {} entries",
                n * n
            )));
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks(self.n.max(1))
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &CooccurrenceMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(
                if self.n == other.n {
                    0.0
                } else {
                    f64::INFINITY
                },
                f64::max,
            )
    }

    /// Relabels items: entry `(i, j)` moves to `(perm[i], perm[j])`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut entries = vec![0.0; self.entries.len()];
        for i in 0..self.n {
            for j in 0..self.n {
                entries[perm[i] * self.n + perm[j]] = self.get(i, j);
            }
        }
        Self { n: self.n, entries }
    }
}

/// An unordered partition of the items with its posterior log probability.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    /// Disjoint nonempty clusters, sorted by smallest member.
    pub clusters: Vec<SubsetMask>,
    pub log_posterior: f64,
}

impl Partition {
    /// Canonicalizes the cluster order. Fails unless the clusters are
    /// nonempty, disjoint and cover `0..n`.
    pub fn new(n: usize, mut clusters: Vec<SubsetMask>, log_posterior: f64) -> Result<Self> {
        let mut union = SubsetMask::EMPTY;
        for &c in &clusters {
            if c.is_empty() || !c.is_disjoint(union) {
                return Err(Error::Domain(
                    "clusters must be nonempty and disjoint".into(),
                ));
            }
            union = union | c;
        }
        if union != SubsetMask::full(n) {
            return Err(Error::Domain(format!(
                "clusters do not cover all {n} items"
            )));
        }
        clusters.sort_by_key(|c| c.first());
        Ok(Self {
            clusters,
            log_posterior,
        })
    }

    pub fn k(&self) -> usize {
        self.clusters.len()
    }

    pub fn posterior(&self) -> f64 {
        self.log_posterior.exp()
    }

    /// 1-based member lists.
    pub fn labels(&self) -> Vec<Vec<usize>> {
        self.clusters.iter().map(|c| c.labels()).collect()
    }

    /// 0-based cluster index of every item.
    pub fn assignment(&self) -> Vec<usize> {
        let n = self.clusters.iter().map(|c| c.len()).sum();
        let mut out = vec![0; n];
        for (j, c) in self.clusters.iter().enumerate() {
            for i in c.items() {
                out[i] = j;
            }
        }
        out
    }
}

/// Which outputs to compute, and with which convolution engine.
#[derive(Debug, Clone, Copy)]
pub struct Request {
    pub cooccurrence: bool,
    pub modes: bool,
    pub engine: Engine,
}

impl Default for Request {
    fn default() -> Self {
        Self {
            cooccurrence: true,
            modes: true,
            engine: Engine::Direct,
        }
    }
}

/// Everything computed from one pass over the convolution powers.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub summary: PosteriorSummary,
    pub cooccurrence: Option<CooccurrenceMatrix>,
    /// Best partition for each `k` that has one, ascending in `k`.
    pub modes: Option<Vec<Partition>>,
}

impl Analysis {
    /// The most probable partition overall; ties go to the smaller `k`.
    pub fn global_mode(&self) -> Option<&Partition> {
        self.modes.as_deref().and_then(global_mode)
    }
}

pub fn global_mode(modes: &[Partition]) -> Option<&Partition> {
    modes
        .iter()
        .fold(None, |best: Option<&Partition>, p| match best {
            Some(b) if b.log_posterior >= p.log_posterior => Some(b),
            _ => Some(p),
        })
}

fn check_f(f: &SubsetTable, tables: &LogNumberTable) -> Result<()> {
    if f.n() == 0 {
        return Err(Error::out_of_range("n", 0, ">= 1"));
    }
    if f.entries()[0] != LOG_ZERO {
        return Err(Error::Domain(
            "f(∅) must be zero: clusters are nonempty".into(),
        ));
    }
    if tables.n_max() < f.n() {
        return Err(Error::out_of_range(
            "n",
            f.n(),
            format!("<= {} (counting table size)", tables.n_max()),
        ));
    }
    Ok(())
}

/// Runs the sum-product iteration once and derives every requested output.
pub fn analyze(
    f: &SubsetTable,
    prior: &PriorSpec,
    tables: &LogNumberTable,
    request: &Request,
) -> Result<Analysis> {
    check_f(f, tables)?;
    let n = f.n();
    let log_w = prior.log_weights(n, tables)?;
    let full = f.full_mask();

    // g(S) = log Σ_k k·w_k·f^(k-1)(U∖S); k = 1 uses f^(0) = δ_∅.
    let mut aggregate: Vec<LogAccumulator> = if request.cooccurrence {
        let mut acc = vec![LogAccumulator::new(); 1 << n];
        acc[full as usize].push(log_w[0]);
        acc
    } else {
        Vec::new()
    };

    let powers = iterate_convolutions(f, n, request.engine, |k, power| {
        if request.cooccurrence && k < n {
            let coef = ((k + 1) as f64).ln() + log_w[k];
            let pe = power.entries();
            aggregate.par_iter_mut().enumerate().for_each(|(s, acc)| {
                let rest = pe[(full ^ s as u32) as usize];
                if rest != LOG_ZERO {
                    acc.push(coef + rest);
                }
            });
        }
        Ok(())
    })?;

    let summary = summarize(n, &powers, &log_w, prior, tables)?;

    let cooccurrence = request
        .cooccurrence
        .then(|| {
            let g: Vec<f64> = aggregate.iter().map(LogAccumulator::value).collect();
            pairwise(f, &g, summary.log_evidence)
        })
        .transpose()?;

    let modes = request
        .modes
        .then(|| best_partitions(f, &log_w, tables, summary.log_evidence))
        .transpose()?;

    Ok(Analysis {
        summary,
        cooccurrence,
        modes,
    })
}

fn summarize(
    n: usize,
    powers: &[LogValue],
    log_w: &[LogValue],
    prior: &PriorSpec,
    tables: &LogNumberTable,
) -> Result<PosteriorSummary> {
    let unnormalized: Vec<f64> = powers.iter().zip(log_w).map(|(p, w)| p + w).collect();
    let log_evidence = log_sum_exp(&unnormalized);
    if log_evidence == LOG_ZERO || !log_evidence.is_finite() {
        return Err(Error::EvidenceZero);
    }
    Ok(PosteriorSummary {
        n,
        log_evidence,
        posterior_k: unnormalized
            .iter()
            .map(|u| (u - log_evidence).exp())
            .collect(),
        prior_k: prior.prior_k(n, tables)?,
    })
}

/// `p(i ~ j) = exp(log Σ_{S ⊇ {i,j}} f(S)·g(S) − log p(y))`.
fn pairwise(f: &SubsetTable, g: &[f64], log_evidence: f64) -> Result<CooccurrenceMatrix> {
    let n = f.n();
    let full = f.full_mask();
    let fe = f.entries();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let values: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let both = (1u32 << i) | (1u32 << j);
            let mut acc = LogAccumulator::new();
            for rest in submasks(full & !both) {
                let s = (rest | both) as usize;
                if fe[s] != LOG_ZERO && g[s] != LOG_ZERO {
                    acc.push(fe[s] + g[s]);
                }
            }
            (acc.value() - log_evidence).exp()
        })
        .collect();

    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        entries[i * n + i] = 1.0;
    }
    for (&(i, j), &v) in pairs.iter().zip(&values) {
        entries[i * n + j] = v;
        entries[j * n + i] = v;
    }
    CooccurrenceMatrix::from_entries(n, entries)
}

/// Max-product recursion `m^(k) = max_convolve(f, m^(k-1))` with argmax
/// tables for backtracking.
fn best_partitions(
    f: &SubsetTable,
    log_w: &[LogValue],
    tables: &LogNumberTable,
    log_evidence: f64,
) -> Result<Vec<Partition>> {
    let n = f.n();
    let full = f.full_mask();
    let mut best_at_full = vec![f.at_full()];
    // argmax[k-2] belongs to m^(k).
    let mut argmax: Vec<Vec<u32>> = Vec::with_capacity(n.saturating_sub(1));
    let mut current: Option<SubsetTable> = None;
    for _k in 2..=n {
        let step = max_convolve(f, current.as_ref().unwrap_or(f), true)?;
        best_at_full.push(step.table.at_full());
        argmax.push(step.argmax.expect("argmax requested"));
        current = Some(step.table);
    }
    drop(current);

    let mut out = Vec::new();
    for k in 1..=n {
        let best = best_at_full[k - 1];
        if best == LOG_ZERO {
            continue;
        }
        let mut clusters = Vec::with_capacity(k);
        let mut rest = full;
        for j in (2..=k).rev() {
            let a = argmax[j - 2][rest as usize];
            clusters.push(SubsetMask(a));
            rest &= !a;
        }
        clusters.push(SubsetMask(rest));
        let log_posterior = tables.ln_factorial(k)? + log_w[k - 1] + best - log_evidence;
        out.push(Partition::new(n, clusters, log_posterior)?);
    }
    Ok(out)
}

/// Posterior over the number of clusters.
pub fn posterior_k(
    f: &SubsetTable,
    prior: &PriorSpec,
    tables: &LogNumberTable,
    engine: Engine,
) -> Result<PosteriorSummary> {
    let request = Request {
        cooccurrence: false,
        modes: false,
        engine,
    };
    Ok(analyze(f, prior, tables, &request)?.summary)
}

/// Pairwise co-occurrence matrix.
pub fn cooccurrence(
    f: &SubsetTable,
    prior: &PriorSpec,
    tables: &LogNumberTable,
    engine: Engine,
) -> Result<CooccurrenceMatrix> {
    let request = Request {
        cooccurrence: true,
        modes: false,
        engine,
    };
    analyze(f, prior, tables, &request)?
        .cooccurrence
        .ok_or_else(|| Error::Internal("co-occurrence not computed".into()))
}

/// Best unordered partition for every `k = 1..=n`.
pub fn mode_partitions(
    f: &SubsetTable,
    prior: &PriorSpec,
    tables: &LogNumberTable,
    engine: Engine,
) -> Result<Vec<Partition>> {
    let request = Request {
        cooccurrence: false,
        modes: true,
        engine,
    };
    analyze(f, prior, tables, &request)?
        .modes
        .ok_or_else(|| Error::Internal("modes not computed".into()))
}
