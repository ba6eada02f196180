//! Conjugate cluster marginal likelihoods and the tabulated cluster score
//! `log f(X) = log f_prior(X) + Σ_d log p(y_{X,d})` over every subset.

use std::f64::consts::PI;
use std::ops::Add;

use crate::combinatorics::log_gamma;
use crate::error::{Error, Result};
use crate::logspace::{LogValue, LOG_ZERO};
use crate::prior::PriorSpec;
use crate::subset::{SubsetMask, SubsetTable, MAX_ITEMS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataKind {
    Binary,
    Continuous,
}

/// `n` items by `d` features, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    n: usize,
    d: usize,
    kind: DataKind,
    values: Vec<f64>,
}

impl Dataset {
    pub fn new(n: usize, d: usize, kind: DataKind, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * d {
            return Err(Error::Domain(format!(
                "{n} items x {d} features needs {} values, got {}",
                n * d,
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite value at item {}, feature {}",
                pos / d.max(1) + 1,
                pos % d.max(1) + 1
            )));
        }
        if kind == DataKind::Binary {
            if let Some(pos) = values.iter().position(|&v| v != 0.0 && v != 1.0) {
                return Err(Error::Domain(format!(
                    "binary data must be 0/1; item {}, feature {} is {}",
                    pos / d + 1,
                    pos % d + 1,
                    values[pos]
                )));
            }
        }
        Ok(Self { n, d, kind, values })
    }

    pub fn from_rows(rows: &[Vec<f64>], kind: DataKind) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::Domain("rows have different lengths".into()));
        }
        Self::new(rows.len(), d, kind, rows.concat())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> DataKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn row(&self, item: usize) -> &[f64] {
        &self.values[item * self.d..(item + 1) * self.d]
    }

    /// Feature columns `range` of every row.
    pub fn select_features(&self, range: std::ops::Range<usize>) -> Result<Self> {
        if range.end > self.d || range.start > range.end {
            return Err(Error::out_of_range(
                "feature range",
                format!("{range:?}"),
                format!("0..{}", self.d),
            ));
        }
        let values = (0..self.n)
            .flat_map(|i| self.row(i)[range.clone()].to_vec())
            .collect();
        Self::new(self.n, range.len(), self.kind, values)
    }

    /// Rows reordered so that row `perm[i]` of the result is row `i` here.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: perm.len(),
            });
        }
        let mut values = vec![0.0; self.values.len()];
        for (i, &dest) in perm.iter().enumerate() {
            values[dest * self.d..(dest + 1) * self.d].copy_from_slice(self.row(i));
        }
        Self::new(self.n, self.d, self.kind, values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaBinomialHyper {
    pub alpha: f64,
    pub beta: f64,
}

impl Default for BetaBinomialHyper {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
        }
    }
}

impl BetaBinomialHyper {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        positive("alpha", alpha)?;
        positive("beta", beta)?;
        Ok(Self { alpha, beta })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaNormalHyper {
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub tau: f64,
}

impl Default for GammaNormalHyper {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
            mu: 0.0,
            tau: 1.0,
        }
    }
}

impl GammaNormalHyper {
    pub fn new(alpha: f64, beta: f64, mu: f64, tau: f64) -> Result<Self> {
        positive("alpha", alpha)?;
        positive("beta", beta)?;
        positive("tau", tau)?;
        if !mu.is_finite() {
            return Err(Error::Domain(format!("mu must be finite, got {mu}")));
        }
        Ok(Self {
            alpha,
            beta,
            mu,
            tau,
        })
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} must be a finite positive number, got {v}"
        )))
    }
}

/// Likelihood family with its hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelSpec {
    /// Bernoulli features with a Beta prior on each cluster mean.
    BetaBinomial(BetaBinomialHyper),
    /// Normal features with a normal-gamma prior on cluster mean and
    /// precision.
    GammaNormal(GammaNormalHyper),
}

impl ModelSpec {
    pub fn kind(&self) -> DataKind {
        match self {
            ModelSpec::BetaBinomial(_) => DataKind::Binary,
            ModelSpec::GammaNormal(_) => DataKind::Continuous,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::BetaBinomial(_) => "binary",
            ModelSpec::GammaNormal(_) => "normal",
        }
    }

    /// `log f_lik` of one cluster from its sufficient statistics.
    pub fn log_ml(&self, stats: &ClusterStats) -> Result<LogValue> {
        let mut total = 0.0;
        for d in 0..stats.sums.len() {
            total += match self {
                ModelSpec::BetaBinomial(h) => {
                    let s = stats.sums[d];
                    if s.fract() != 0.0 {
                        return Err(Error::Domain(format!("binary count {s} is not an integer")));
                    }
                    beta_binomial_log_ml(stats.count, s as usize, h)?
                }
                ModelSpec::GammaNormal(h) => {
                    gamma_normal_from_centered(stats.count, stats.sums[d], stats.centered[d], h)?
                }
            };
        }
        Ok(total)
    }
}

/// `log[Γ(α+s) Γ(β+c−s) Γ(α+β) / (Γ(α+β+c) Γ(α) Γ(β))]`.
pub fn beta_binomial_log_ml(c: usize, s: usize, h: &BetaBinomialHyper) -> Result<LogValue> {
    if s > c {
        return Err(Error::Domain(format!("{s} ones among {c} items")));
    }
    let (c, s) = (c as f64, s as f64);
    Ok(
        log_gamma(h.alpha + s)? + log_gamma(h.beta + c - s)? + log_gamma(h.alpha + h.beta)?
            - log_gamma(h.alpha + h.beta + c)?
            - log_gamma(h.alpha)?
            - log_gamma(h.beta)?,
    )
}

/// Normal-gamma marginal likelihood of `c` observations with sum `s` and sum
/// of squares `q`.
pub fn gamma_normal_log_ml(c: usize, s: f64, q: f64, h: &GammaNormalHyper) -> Result<LogValue> {
    if c == 0 {
        return Ok(0.0);
    }
    // q - s²/c can go slightly negative through rounding.
    let centered = (q - s * s / c as f64).max(0.0);
    gamma_normal_from_centered(c, s, centered, h)
}

fn gamma_normal_from_centered(
    c: usize,
    s: f64,
    centered: f64,
    h: &GammaNormalHyper,
) -> Result<LogValue> {
    if c == 0 {
        return Ok(0.0);
    }
    let cf = c as f64;
    let alpha_c = h.alpha + cf / 2.0;
    let tau_c = h.tau + cf;
    let dev = s - cf * h.mu;
    let beta_c = h.beta + centered / 2.0 + h.tau * dev * dev / (2.0 * cf * tau_c);
    if beta_c.is_nan() || beta_c <= 0.0 {
        return Err(Error::Internal(format!(
            "posterior rate {beta_c} is not positive"
        )));
    }
    Ok(
        log_gamma(alpha_c)? - log_gamma(h.alpha)? + h.alpha * h.beta.ln() - alpha_c * beta_c.ln()
            + 0.5 * (h.tau / tau_c).ln()
            - cf / 2.0 * (2.0 * PI).ln(),
    )
}

/// Per-feature sufficient statistics of a cluster.
///
/// Sums of squares are kept centered (`Σ (y − ȳ)²`) and combined with the
/// parallel-variance update, which avoids the cancellation in `q − s²/c`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterStats {
    pub count: usize,
    pub sums: Vec<f64>,
    pub centered: Vec<f64>,
}

impl ClusterStats {
    pub fn empty(d: usize) -> Self {
        Self {
            count: 0,
            sums: vec![0.0; d],
            centered: vec![0.0; d],
        }
    }

    pub fn of(data: &Dataset, cluster: SubsetMask) -> Self {
        let mut stats = Self::empty(data.d());
        for i in cluster.items() {
            stats.push(data.row(i));
        }
        stats
    }

    /// Adds one item.
    pub fn push(&mut self, row: &[f64]) {
        let c_old = self.count as f64;
        self.count += 1;
        let c_new = self.count as f64;
        for ((s, m2), &y) in self.sums.iter_mut().zip(self.centered.iter_mut()).zip(row) {
            let mean_old = if c_old > 0.0 { *s / c_old } else { 0.0 };
            *s += y;
            let mean_new = *s / c_new;
            *m2 += (y - mean_old) * (y - mean_new);
        }
    }

    /// Sum of squares `Σ y²` per feature.
    pub fn sum_squares(&self) -> Vec<f64> {
        self.sums
            .iter()
            .zip(&self.centered)
            .map(|(s, m2)| {
                if self.count == 0 {
                    0.0
                } else {
                    m2 + s * s / self.count as f64
                }
            })
            .collect()
    }
}

impl Add for &ClusterStats {
    type Output = ClusterStats;

    fn add(self, other: &ClusterStats) -> ClusterStats {
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        let mut out = ClusterStats::empty(self.sums.len());
        out.count = self.count + other.count;
        for d in 0..self.sums.len() {
            out.sums[d] = self.sums[d] + other.sums[d];
            out.centered[d] = self.centered[d] + other.centered[d];
            if na > 0.0 && nb > 0.0 {
                let delta = other.sums[d] / nb - self.sums[d] / na;
                out.centered[d] += delta * delta * na * nb / n;
            }
        }
        out
    }
}

/// `log f(X)` for one nonempty cluster, recomputed from the data.
pub fn cluster_log_f(
    data: &Dataset,
    model: &ModelSpec,
    prior: &PriorSpec,
    cluster: SubsetMask,
) -> Result<LogValue> {
    if cluster.is_empty() {
        return Ok(LOG_ZERO);
    }
    Ok(prior.log_f_prior(cluster.len())? + model.log_ml(&ClusterStats::of(data, cluster))?)
}

/// Tabulates `log f(X)` for all `2^n` subsets, with `f(∅)` set to zero.
///
/// Statistics are built by a depth-first walk that extends each subset by
/// items above its largest member, so every subset costs `O(D)` on top of
/// its parent and memory stays `O(n·D)`.
pub fn build_f_table(data: &Dataset, model: &ModelSpec, prior: &PriorSpec) -> Result<SubsetTable> {
    if data.kind() != model.kind() {
        return Err(Error::ModelMismatch(format!(
            "{:?} data cannot be scored with the {} model",
            data.kind(),
            model.name()
        )));
    }
    let n = data.n();
    if n > MAX_ITEMS {
        return Err(Error::out_of_range("n", n, format!("1..={MAX_ITEMS}")));
    }
    let scorer = Scorer::new(n, model, prior)?;
    let mut entries = vec![LOG_ZERO; 1 << n];
    let mut stack: Vec<ClusterStats> = (0..=n).map(|_| ClusterStats::empty(data.d())).collect();
    extend(data, &scorer, &mut stack, 0, 0, 0, &mut entries)?;
    SubsetTable::from_entries(n, entries)
}

/// Visits every superset of `mask` obtained by adding items `>= next`.
fn extend(
    data: &Dataset,
    scorer: &Scorer,
    stack: &mut [ClusterStats],
    depth: usize,
    mask: u32,
    next: usize,
    out: &mut [f64],
) -> Result<()> {
    for item in next..data.n() {
        let child = mask | (1 << item);
        let (parent, rest) = stack.split_at_mut(depth + 1);
        let stats = &mut rest[0];
        stats.clone_from(&parent[depth]);
        stats.push(data.row(item));
        out[child as usize] = scorer.score(stats)?;
        extend(data, scorer, stack, depth + 1, child, item + 1, out)?;
    }
    Ok(())
}

/// Cluster scoring with the size-only terms precomputed.
struct Scorer {
    model: ModelSpec,
    /// `log f_prior` plus size-dependent likelihood constants, by cluster size.
    by_size: Vec<f64>,
    /// Beta-binomial per-feature term indexed `[c][s]`.
    binary: Vec<Vec<f64>>,
}

impl Scorer {
    fn new(n: usize, model: &ModelSpec, prior: &PriorSpec) -> Result<Self> {
        let mut by_size = vec![0.0];
        for c in 1..=n {
            by_size.push(prior.log_f_prior(c)?);
        }
        let mut binary = Vec::new();
        match model {
            ModelSpec::BetaBinomial(h) => {
                binary = (0..=n)
                    .map(|c| {
                        (0..=c)
                            .map(|s| beta_binomial_log_ml(c, s, h))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
            }
            ModelSpec::GammaNormal(_) => {}
        }
        Ok(Self {
            model: *model,
            by_size,
            binary,
        })
    }

    fn score(&self, stats: &ClusterStats) -> Result<f64> {
        let c = stats.count;
        let lik = match &self.model {
            ModelSpec::BetaBinomial(_) => {
                let row = &self.binary[c];
                stats.sums.iter().map(|&s| row[s as usize]).sum::<f64>()
            }
            ModelSpec::GammaNormal(h) => {
                let mut total = 0.0;
                for (&s, &m2) in stats.sums.iter().zip(&stats.centered) {
                    total += gamma_normal_from_centered(c, s, m2, h)?;
                }
                total
            }
        };
        Ok(self.by_size[c] + lik)
    }
}
