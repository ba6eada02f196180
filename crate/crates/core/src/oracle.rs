//! Brute-force reference: every unordered partition is visited once, as a
//! restricted growth string, and each output is accumulated directly.
//! Feasible only for small `n`.

use crate::combinatorics::LogNumberTable;
use crate::error::{Error, Result};
use crate::likelihood::{cluster_log_f, Dataset, ModelSpec};
use crate::logspace::{LogAccumulator, LogValue, LOG_ZERO};
use crate::posterior::{CooccurrenceMatrix, Partition, PosteriorSummary};
use crate::prior::PriorSpec;
use crate::subset::{SubsetMask, SubsetTable};

/// B_13 ≈ 2.8·10^7 partitions; B_14 ≈ 1.9·10^8 is past the time budget.
pub const MAX_ORACLE_ITEMS: usize = 13;

/// `a[0] = 0`, `a[i+1] <= 1 + max(a[0..=i])`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrowthString {
    assignment: Vec<usize>,
}

impl GrowthString {
    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn k(&self) -> usize {
        self.assignment.iter().max().map_or(0, |m| m + 1)
    }

    /// Cluster masks in label order (which is also smallest-member order).
    pub fn blocks(&self) -> Vec<SubsetMask> {
        let mut blocks = vec![SubsetMask::EMPTY; self.k()];
        for (i, &a) in self.assignment.iter().enumerate() {
            blocks[a] = blocks[a] | SubsetMask::singleton(i);
        }
        blocks
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ORACLE_ITEMS {
        return Err(Error::out_of_range(
            "n",
            n,
            format!("1..={MAX_ORACLE_ITEMS}; exhaustive enumeration beyond that takes too long"),
        ));
    }
    Ok(())
}

/// Visits every partition of `n` items in lexicographic growth-string order
/// and returns how many were visited.
pub fn enumerate(n: usize, mut visitor: impl FnMut(&GrowthString)) -> Result<u64> {
    check_n(n)?;
    let mut rgs = GrowthString {
        assignment: vec![0; n],
    };
    // prefix_max[i] = max(a[0..=i])
    let mut prefix_max = vec![0usize; n];
    let mut count = 0u64;
    loop {
        visitor(&rgs);
        count += 1;
        let a = &mut rgs.assignment;
        let Some(i) = (1..n).rev().find(|&i| a[i] <= prefix_max[i - 1]) else {
            return Ok(count);
        };
        a[i] += 1;
        prefix_max[i] = prefix_max[i - 1].max(a[i]);
        for j in i + 1..n {
            a[j] = 0;
            prefix_max[j] = prefix_max[i];
        }
    }
}

/// Outputs of an exhaustive enumeration.
#[derive(Debug, Clone)]
pub struct BruteResult {
    pub summary: PosteriorSummary,
    pub cooccurrence: CooccurrenceMatrix,
    /// Most probable partition; among ties, the first in enumeration order.
    pub mode: Partition,
    /// Most probable partition of each size `k = 1..=n`.
    pub modes_by_k: Vec<Partition>,
}

/// Exhaustive posteriors for a dataset. Cluster scores are recomputed from
/// the data for each subset, independently of the tabulated `f`.
pub fn brute_posteriors(
    data: &Dataset,
    model: &ModelSpec,
    prior: &PriorSpec,
) -> Result<BruteResult> {
    check_n(data.n())?;
    if data.kind() != model.kind() {
        return Err(Error::ModelMismatch(format!(
            "{:?} data with the {} model",
            data.kind(),
            model.name()
        )));
    }
    let n = data.n();
    let scores = (0..1u32 << n)
        .map(|m| cluster_log_f(data, model, prior, SubsetMask(m)))
        .collect::<Result<Vec<_>>>()?;
    brute_from_scores(n, &scores, prior)
}

/// Exhaustive posteriors from an explicit cluster score table.
pub fn brute_from_table(f: &SubsetTable, prior: &PriorSpec) -> Result<BruteResult> {
    check_n(f.n())?;
    brute_from_scores(f.n(), f.entries(), prior)
}

fn brute_from_scores(n: usize, scores: &[LogValue], prior: &PriorSpec) -> Result<BruteResult> {
    let tables = LogNumberTable::build(n)?;
    // log of k!·w_k: the weight of one unordered k-partition before scores.
    let log_mult: Vec<f64> = (1..=n)
        .map(|k| Ok(tables.ln_factorial(k)? + prior.log_weight(k, n, &tables)?))
        .collect::<Result<_>>()?;
    let log_weight = |rgs: &GrowthString| -> f64 {
        let blocks = rgs.blocks();
        let body: f64 = blocks.iter().map(|b| scores[b.0 as usize]).sum();
        log_mult[blocks.len() - 1] + body
    };

    // Pass 1: per-k totals, best partition overall and per k.
    let mut per_k = vec![LogAccumulator::new(); n];
    let mut best: Option<(f64, GrowthString)> = None;
    let mut best_by_k: Vec<Option<(f64, GrowthString)>> = vec![None; n];
    enumerate(n, |rgs| {
        let lw = log_weight(rgs);
        per_k[rgs.k() - 1].push(lw);
        if best.as_ref().is_none_or(|(b, _)| lw > *b) {
            best = Some((lw, rgs.clone()));
        }
        let slot = &mut best_by_k[rgs.k() - 1];
        if slot.as_ref().is_none_or(|(b, _)| lw > *b) {
            *slot = Some((lw, rgs.clone()));
        }
    })?;
    let per_k: Vec<f64> = per_k.iter().map(LogAccumulator::value).collect();
    let log_evidence = crate::logspace::log_sum_exp(&per_k);
    if log_evidence == LOG_ZERO || !log_evidence.is_finite() {
        return Err(Error::EvidenceZero);
    }
    let (best_lw, _) = best.clone().ok_or(Error::EvidenceZero)?;

    // Pass 2: pairwise sums relative to the best weight.
    let mut pair_sums = vec![0.0f64; n * n];
    enumerate(n, |rgs| {
        let rel = (log_weight(rgs) - best_lw).exp();
        if rel == 0.0 {
            return;
        }
        let a = rgs.assignment();
        for i in 0..n {
            for j in i + 1..n {
                if a[i] == a[j] {
                    pair_sums[i * n + j] += rel;
                }
            }
        }
    })?;
    let scale = (best_lw - log_evidence).exp();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        entries[i * n + i] = 1.0;
        for j in i + 1..n {
            let p = pair_sums[i * n + j] * scale;
            entries[i * n + j] = p;
            entries[j * n + i] = p;
        }
    }

    let to_partition =
        |(lw, rgs): (f64, GrowthString)| Partition::new(n, rgs.blocks(), lw - log_evidence);
    let mode = to_partition(best.ok_or(Error::EvidenceZero)?)?;
    let modes_by_k = best_by_k
        .into_iter()
        .flatten()
        .filter(|(lw, _)| *lw != LOG_ZERO)
        .map(to_partition)
        .collect::<Result<Vec<_>>>()?;

    Ok(BruteResult {
        summary: PosteriorSummary {
            n,
            log_evidence,
            posterior_k: per_k.iter().map(|v| (v - log_evidence).exp()).collect(),
            prior_k: prior.prior_k(n, &tables)?,
        },
        cooccurrence: CooccurrenceMatrix::from_entries(n, entries)?,
        mode,
        modes_by_k,
    })
}
