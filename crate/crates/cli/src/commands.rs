use std::fmt::Write as _;
use std::fs;
use std::time::Instant;

use cluster_posterior::io::{load_csv, save_csv};
use cluster_posterior::likelihood::cluster_log_f;
use cluster_posterior::oracle::{brute_posteriors, BruteResult, MAX_ORACLE_ITEMS};
use cluster_posterior::posterior::{analyze, Request};
use cluster_posterior::prior::DpWeight;
use cluster_posterior::synth::{self, Experiment};
use cluster_posterior::{
    build_f_table, Analysis, BetaBinomialHyper, CooccurrenceMatrix, DataKind, Dataset, Engine,
    GammaNormalHyper, LogNumberTable, ModelSpec, Partition, PriorSpec, SubsetTable,
};

use crate::args::{
    DpWeightMode, EngineArgs, EngineName, ExperimentName, Format, GenerateArgs, KindName,
    ModelKind, Output, PriorName, ProblemArgs, RunArgs, VerifyArgs,
};
use crate::error::{CliError, CliResult};
use crate::report::{EngineInfo, Report, Sections};

/// A loaded dataset with its model and prior.
#[derive(Debug, Clone)]
pub struct Problem {
    pub data: Dataset,
    pub model: ModelSpec,
    pub prior: PriorSpec,
}

pub fn model_spec(p: &ProblemArgs) -> CliResult<ModelSpec> {
    let alpha = p.alpha.unwrap_or(1.0);
    let beta = p.beta.unwrap_or(1.0);
    let invalid = |e: cluster_posterior::Error| CliError::usage(e.to_string());
    match p.model {
        ModelKind::Binary => {
            if p.mu.is_some() || p.tau.is_some() {
                return Err(CliError::usage(
                    "--mu and --tau apply only to the normal model",
                ));
            }
            Ok(ModelSpec::BetaBinomial(
                BetaBinomialHyper::new(alpha, beta).map_err(invalid)?,
            ))
        }
        ModelKind::Normal => Ok(ModelSpec::GammaNormal(
            GammaNormalHyper::new(alpha, beta, p.mu.unwrap_or(0.0), p.tau.unwrap_or(1.0))
                .map_err(invalid)?,
        )),
    }
}

pub fn prior_spec(p: &ProblemArgs) -> CliResult<PriorSpec> {
    Ok(match p.prior {
        PriorName::UniformK => PriorSpec::uniform_k(),
        PriorName::UniformPartitions => PriorSpec::uniform_partitions(),
        PriorName::Dp => {
            let weight = match p.dp_weight {
                DpWeightMode::WithThetaPower => DpWeight::Normalized,
                DpWeightMode::WithoutThetaPower => DpWeight::WithoutThetaPower,
            };
            PriorSpec::dirichlet_process(p.theta)
                .map_err(|e| CliError::usage(e.to_string()))?
                .with_dp_weight(weight)
        }
    })
}

pub fn load_problem(p: &ProblemArgs) -> CliResult<Problem> {
    let model = model_spec(p)?;
    let prior = prior_spec(p)?;
    let data = load_csv(&p.data, model.kind(), p.header)?;
    Ok(Problem { data, model, prior })
}

pub fn engine(e: &EngineArgs) -> Engine {
    match e.engine {
        EngineName::Direct => Engine::Direct,
        EngineName::FastExact => Engine::FastExact {
            scale_bits: e.scale_bits,
        },
    }
}

fn engine_info(e: &EngineArgs, wall_time_seconds: Option<f64>) -> EngineInfo {
    let engine = engine(e);
    EngineInfo {
        variant: engine.name().to_string(),
        scale_bits: match engine {
            Engine::FastExact { scale_bits } => Some(scale_bits),
            Engine::Direct => None,
        },
        wall_time_seconds,
    }
}

/// Runs `f` on a pool of `threads` workers, or on the global pool.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(CliError::usage("--threads must be at least 1")),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CliError::failure(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// Cluster scores handed to the engine. With `inject_fault`, every singleton
/// score is shifted by half a nat.
pub fn score_table(problem: &Problem, inject_fault: bool) -> CliResult<SubsetTable> {
    let f = build_f_table(&problem.data, &problem.model, &problem.prior)?;
    if !inject_fault {
        return Ok(f);
    }
    Ok(SubsetTable::from_fn(f.n(), |m| {
        let v = f.get(m);
        if m.len() == 1 {
            v + 0.5
        } else {
            v
        }
    })?)
}

fn compute(problem: &Problem, e: &EngineArgs, request: Request) -> CliResult<Analysis> {
    with_threads(e.threads, || -> CliResult<Analysis> {
        let f = score_table(problem, e.inject_fault)?;
        let tables = LogNumberTable::build(f.n())?;
        Ok(analyze(&f, &problem.prior, &tables, &request)?)
    })?
}

pub fn run(args: &RunArgs) -> CliResult<Report> {
    let problem = load_problem(&args.problem)?;
    let sections = Sections {
        posterior_k: args.outputs.contains(&Output::PosteriorK),
        cooccurrence: args.outputs.contains(&Output::Cooccurrence),
        modes: args.outputs.contains(&Output::Modes),
    };
    let request = Request {
        cooccurrence: sections.cooccurrence,
        modes: sections.modes,
        engine: engine(&args.engine),
    };
    let start = Instant::now();
    let analysis = compute(&problem, &args.engine, request)?;
    let elapsed = start.elapsed().as_secs_f64();
    let report = Report::from_analysis(
        problem.data.d(),
        &problem.model,
        &problem.prior,
        &analysis,
        sections,
        engine_info(&args.engine, (!args.omit_timing).then_some(elapsed)),
    );
    match args.format {
        Format::Json => report.write_json(&args.out)?,
        Format::Csv => report.write_csv(&args.out)?,
    }
    Ok(report)
}

pub fn experiment(args: &GenerateArgs) -> CliResult<Experiment> {
    let custom = [
        args.n.is_some(),
        args.k.is_some(),
        args.d.is_some(),
        args.kind.is_some(),
    ];
    match args.experiment {
        ExperimentName::Normal18 | ExperimentName::Binary20 if custom.iter().any(|c| *c) => Err(
            CliError::usage("--n, --k, --d and --kind apply only to --experiment custom"),
        ),
        ExperimentName::Normal18 => Ok(Experiment::Normal18),
        ExperimentName::Binary20 => Ok(Experiment::Binary20),
        ExperimentName::Custom => match (args.n, args.k, args.d, args.kind) {
            (Some(n), Some(k), Some(d), Some(kind)) => Ok(Experiment::Custom {
                n,
                k,
                d,
                kind: match kind {
                    KindName::Binary => DataKind::Binary,
                    KindName::Continuous => DataKind::Continuous,
                },
            }),
            _ => Err(CliError::usage(
                "--experiment custom needs --n, --k, --d and --kind",
            )),
        },
    }
}

pub fn generate(args: &GenerateArgs) -> CliResult<()> {
    let experiment = experiment(args)?;
    let s = synth::generate(experiment, args.seed).map_err(|e| CliError::usage(e.to_string()))?;
    save_csv(&s.data, &args.out).map_err(|e| CliError::failure(e.to_string()))?;
    if let Some(path) = &args.labels_out {
        let body: String = s.labels().iter().map(|l| format!("{}\n", l + 1)).collect();
        fs::write(path, body).map_err(|e| CliError::failure(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

/// Largest difference found for each compared quantity.
#[derive(Debug, Clone)]
pub struct Verification {
    pub tolerance: f64,
    pub rows: Vec<(&'static str, f64)>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|(_, d)| *d <= self.tolerance)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (name, d) in &self.rows {
            let verdict = if *d <= self.tolerance {
                "ok"
            } else {
                "MISMATCH"
            };
            let _ = writeln!(out, "{name:<14} max |diff| = {d:.3e}  {verdict}");
        }
        let _ = writeln!(
            out,
            "{} (tolerance {:e})",
            if self.passed() {
                "engine agrees with enumeration"
            } else {
                "engine disagrees with enumeration"
            },
            self.tolerance
        );
        out
    }
}

fn abs_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else if a.is_nan() || b.is_nan() {
        f64::INFINITY
    } else {
        (a - b).abs()
    }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| abs_diff(*x, *y))
        .fold(0.0, f64::max)
}

/// Log posterior of a partition scored from the data, as the enumeration
/// scores it.
fn rescore(problem: &Problem, brute: &BruteResult, p: &Partition) -> CliResult<f64> {
    let n = problem.data.n();
    let tables = LogNumberTable::build(n)?;
    let k = p.k();
    let mut lp = tables.ln_factorial(k)? + problem.prior.log_weight(k, n, &tables)?
        - brute.summary.log_evidence;
    for &c in &p.clusters {
        lp += cluster_log_f(&problem.data, &problem.model, &problem.prior, c)?;
    }
    Ok(lp)
}

/// Difference in log posterior between two optimal partitions; distinct
/// partitions count only if they are not tied under the data.
fn mode_diff(
    problem: &Problem,
    brute: &BruteResult,
    mine: &Partition,
    theirs: &Partition,
) -> CliResult<f64> {
    let mut d = abs_diff(mine.log_posterior, theirs.log_posterior);
    if mine.clusters != theirs.clusters {
        d = d.max(abs_diff(
            rescore(problem, brute, mine)?,
            theirs.log_posterior,
        ));
    }
    Ok(d)
}

pub fn verify(args: &VerifyArgs) -> CliResult<Verification> {
    let problem = load_problem(&args.problem)?;
    let n = problem.data.n();
    if n > MAX_ORACLE_ITEMS {
        return Err(CliError::usage(format!(
            "verify enumerates every partition and accepts at most {MAX_ORACLE_ITEMS} items, got {n}"
        )));
    }
    let analysis = compute(
        &problem,
        &args.engine,
        Request {
            engine: engine(&args.engine),
            ..Request::default()
        },
    )?;
    let brute = brute_posteriors(&problem.data, &problem.model, &problem.prior)?;
    if let Some(path) = &args.oracle_out {
        Report::from_enumeration(problem.data.d(), &problem.model, &problem.prior, &brute)
            .write_json(path)?;
    }

    let summary = &analysis.summary;
    let cooc: &CooccurrenceMatrix = analysis
        .cooccurrence
        .as_ref()
        .ok_or_else(|| CliError::failure("co-occurrence missing"))?;
    let modes = analysis
        .modes
        .as_deref()
        .ok_or_else(|| CliError::failure("modes missing"))?;
    let mut modes_by_k = if modes.len() == brute.modes_by_k.len() {
        0.0
    } else {
        f64::INFINITY
    };
    for (mine, theirs) in modes.iter().zip(&brute.modes_by_k) {
        modes_by_k = f64::max(modes_by_k, mode_diff(&problem, &brute, mine, theirs)?);
    }
    let global = match analysis.global_mode() {
        Some(m) => mode_diff(&problem, &brute, m, &brute.mode)?,
        None => f64::INFINITY,
    };
    Ok(Verification {
        tolerance: args.tolerance,
        rows: vec![
            (
                "log_evidence",
                abs_diff(summary.log_evidence, brute.summary.log_evidence),
            ),
            (
                "posterior_k",
                max_diff(&summary.posterior_k, &brute.summary.posterior_k),
            ),
            (
                "prior_k",
                max_diff(&summary.prior_k, &brute.summary.prior_k),
            ),
            (
                "cooccurrence",
                max_diff(cooc.entries(), brute.cooccurrence.entries()),
            ),
            ("modes_by_k", modes_by_k),
            ("global_mode", global),
        ],
    })
}
