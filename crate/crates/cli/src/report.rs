//! The JSON and CSV result formats.

use std::fs;
use std::io::Write;
use std::path::Path;

use cluster_posterior::oracle::BruteResult;
use cluster_posterior::{
    Analysis, CooccurrenceMatrix, ModelSpec, Partition, PosteriorSummary, PriorSpec,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Significant digits kept for probabilities.
pub const PROBABILITY_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub n: usize,
    pub d: usize,
    pub model: String,
    pub hyperparameters: Hyperparameters,
    pub prior: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dp_weight: Option<String>,
    pub log_evidence: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub posterior_k: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior_k: Option<Vec<f64>>,
    /// Row-major, rows in input order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cooccurrence: Option<Vec<Vec<f64>>>,
    /// Best partition for each k, ascending.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modes: Option<Vec<Mode>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub global_mode: Option<Mode>,
    pub engine: EngineInfo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperparameters {
    pub alpha: f64,
    pub beta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub k: usize,
    /// 1-based item indices.
    pub clusters: Vec<Vec<usize>>,
    pub posterior_prob: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineInfo {
    pub variant: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale_bits: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_seconds: Option<f64>,
}

/// Which sections a report carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sections {
    pub posterior_k: bool,
    pub cooccurrence: bool,
    pub modes: bool,
}

impl Sections {
    pub const ALL: Sections = Sections {
        posterior_k: true,
        cooccurrence: true,
        modes: true,
    };
}

/// Rounds to [`PROBABILITY_DIGITS`] significant digits.
pub fn round_probability(p: f64) -> f64 {
    if p == 0.0 || !p.is_finite() {
        return p;
    }
    format!("{:.*e}", PROBABILITY_DIGITS - 1, p)
        .parse()
        .unwrap_or(p)
}

fn rounded(v: &[f64]) -> Vec<f64> {
    v.iter().copied().map(round_probability).collect()
}

fn mode(p: &Partition) -> Mode {
    Mode {
        k: p.k(),
        clusters: p.labels(),
        posterior_prob: round_probability(p.posterior()),
    }
}

fn matrix(c: &CooccurrenceMatrix) -> Vec<Vec<f64>> {
    c.rows().map(rounded).collect()
}

impl Report {
    fn skeleton(
        d: usize,
        model: &ModelSpec,
        prior: &PriorSpec,
        summary: &PosteriorSummary,
        engine: EngineInfo,
    ) -> Self {
        let hyperparameters = match model {
            ModelSpec::BetaBinomial(h) => Hyperparameters {
                alpha: h.alpha,
                beta: h.beta,
                mu: None,
                tau: None,
            },
            ModelSpec::GammaNormal(h) => Hyperparameters {
                alpha: h.alpha,
                beta: h.beta,
                mu: Some(h.mu),
                tau: Some(h.tau),
            },
        };
        Self {
            n: summary.n,
            d,
            model: model.name().to_string(),
            hyperparameters,
            prior: prior.name().to_string(),
            theta: prior.theta(),
            dp_weight: prior.theta().map(|_| prior.dp_weight.name().to_string()),
            log_evidence: summary.log_evidence,
            posterior_k: None,
            prior_k: None,
            cooccurrence: None,
            modes: None,
            global_mode: None,
            engine,
        }
    }

    pub fn from_analysis(
        d: usize,
        model: &ModelSpec,
        prior: &PriorSpec,
        analysis: &Analysis,
        sections: Sections,
        engine: EngineInfo,
    ) -> Self {
        let summary = &analysis.summary;
        let mut r = Self::skeleton(d, model, prior, summary, engine);
        if sections.posterior_k {
            r.posterior_k = Some(rounded(&summary.posterior_k));
            r.prior_k = Some(rounded(&summary.prior_k));
        }
        if sections.cooccurrence {
            r.cooccurrence = analysis.cooccurrence.as_ref().map(matrix);
        }
        if sections.modes {
            r.modes = analysis
                .modes
                .as_ref()
                .map(|m| m.iter().map(mode).collect());
            r.global_mode = analysis.global_mode().map(mode);
        }
        r
    }

    pub fn from_enumeration(
        d: usize,
        model: &ModelSpec,
        prior: &PriorSpec,
        brute: &BruteResult,
    ) -> Self {
        let engine = EngineInfo {
            variant: "enumeration".into(),
            scale_bits: None,
            wall_time_seconds: None,
        };
        let mut r = Self::skeleton(d, model, prior, &brute.summary, engine);
        r.posterior_k = Some(rounded(&brute.summary.posterior_k));
        r.prior_k = Some(rounded(&brute.summary.prior_k));
        r.cooccurrence = Some(matrix(&brute.cooccurrence));
        r.modes = Some(brute.modes_by_k.iter().map(mode).collect());
        r.global_mode = Some(mode(&brute.mode));
        r
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Writes the JSON document to `path`, or to stdout for `-`.
    pub fn write_json(&self, path: &Path) -> CliResult<()> {
        let text = self.to_json();
        if path == Path::new("-") {
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::failure(format!("stdout: {e}")))
        } else {
            fs::write(path, text).map_err(|e| CliError::failure(format!("{}: {e}", path.display())))
        }
    }

    /// Writes `summary.csv` plus one file per section into directory `dir`.
    pub fn write_csv(&self, dir: &Path) -> CliResult<()> {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::failure(format!("{}: {e}", dir.display())))?;
        let put = |name: &str, body: String| {
            let path = dir.join(name);
            fs::write(&path, body)
                .map_err(|e| CliError::failure(format!("{}: {e}", path.display())))
        };

        let mut summary = String::from("key,value\n");
        let mut field = |k: &str, v: String| summary.push_str(&format!("{k},{v}\n"));
        field("n", self.n.to_string());
        field("d", self.d.to_string());
        field("model", self.model.clone());
        field("alpha", self.hyperparameters.alpha.to_string());
        field("beta", self.hyperparameters.beta.to_string());
        if let Some(mu) = self.hyperparameters.mu {
            field("mu", mu.to_string());
        }
        if let Some(tau) = self.hyperparameters.tau {
            field("tau", tau.to_string());
        }
        field("prior", self.prior.clone());
        if let Some(theta) = self.theta {
            field("theta", theta.to_string());
        }
        if let Some(w) = &self.dp_weight {
            field("dp_weight", w.clone());
        }
        field("log_evidence", self.log_evidence.to_string());
        field("engine", self.engine.variant.clone());
        if let Some(b) = self.engine.scale_bits {
            field("scale_bits", b.to_string());
        }
        if let Some(t) = self.engine.wall_time_seconds {
            field("wall_time_seconds", t.to_string());
        }
        put("summary.csv", summary)?;

        if let (Some(post), Some(prior)) = (&self.posterior_k, &self.prior_k) {
            let mut body = String::from("k,posterior,prior\n");
            for (k, (p, q)) in post.iter().zip(prior).enumerate() {
                body.push_str(&format!("{},{p},{q}\n", k + 1));
            }
            put("posterior_k.csv", body)?;
        }
        if let Some(rows) = &self.cooccurrence {
            let mut body = String::new();
            for row in rows {
                let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                body.push_str(&cells.join(","));
                body.push('\n');
            }
            put("cooccurrence.csv", body)?;
        }
        if let Some(modes) = &self.modes {
            let global = self.global_mode.as_ref().map(|m| m.k);
            let mut body = String::from("k,posterior_prob,global,clusters\n");
            for m in modes {
                let clusters: Vec<String> = m
                    .clusters
                    .iter()
                    .map(|c| {
                        c.iter()
                            .map(|i| i.to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    })
                    .collect();
                body.push_str(&format!(
                    "{},{},{},{}\n",
                    m.k,
                    m.posterior_prob,
                    Some(m.k) == global,
                    clusters.join("|")
                ));
            }
            put("modes.csv", body)?;
        }
        Ok(())
    }
}
