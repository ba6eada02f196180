mod common;

use cluster_posterior::oracle::{brute_from_table, brute_posteriors, BruteResult};
use cluster_posterior::posterior::{analyze, Request};
use cluster_posterior::*;
use common::*;

fn check(f: &SubsetTable, prior: &PriorSpec, brute: &BruteResult, engine: Engine, tol: f64) {
    let tables = LogNumberTable::build(f.n()).unwrap();
    let request = Request {
        engine,
        ..Request::default()
    };
    let got = analyze(f, prior, &tables, &request).unwrap();
    let cooc = got.cooccurrence.as_ref().unwrap();
    assert_structure(&got.summary, Some(cooc));

    assert!((got.summary.log_evidence - brute.summary.log_evidence).abs() <= tol);
    assert!(max_abs_diff(&got.summary.posterior_k, &brute.summary.posterior_k) <= tol);
    assert!(max_abs_diff(&got.summary.prior_k, &brute.summary.prior_k) <= tol);
    assert!(cooc.max_abs_diff(&brute.cooccurrence) <= tol);

    let modes = got.modes.as_ref().unwrap();
    assert_eq!(modes.len(), brute.modes_by_k.len());
    for (mine, theirs) in modes.iter().zip(&brute.modes_by_k) {
        assert_same_mode(f, prior, &got.summary, mine, theirs, tol);
    }
    let mode = got.global_mode().unwrap();
    assert_same_mode(f, prior, &got.summary, mode, &brute.mode, tol);
}

/// Same partition, or a different one that scores identically.
fn assert_same_mode(
    f: &SubsetTable,
    prior: &PriorSpec,
    summary: &PosteriorSummary,
    mine: &Partition,
    theirs: &Partition,
    tol: f64,
) {
    assert_eq!(mine.k(), theirs.k());
    assert!(
        (mine.log_posterior - theirs.log_posterior).abs() <= tol,
        "mode log posterior {} vs {}",
        mine.log_posterior,
        theirs.log_posterior
    );
    let rescored = log_posterior_of(f, prior, summary.log_evidence, &mine.clusters);
    assert!((rescored - mine.log_posterior).abs() <= tol);
    if mine.clusters != theirs.clusters {
        let other = log_posterior_of(f, prior, summary.log_evidence, &theirs.clusters);
        assert!(
            (rescored - other).abs() <= tol,
            "modes differ without a tie"
        );
    }
}

#[test]
fn continuous_data_all_priors() {
    for n in 5..=10 {
        let data = dataset(n, 2, DataKind::Continuous, 10 + n as u64);
        let model = default_model(DataKind::Continuous);
        for prior in priors() {
            let f = build_f_table(&data, &model, &prior).unwrap();
            let brute = brute_posteriors(&data, &model, &prior).unwrap();
            check(&f, &prior, &brute, Engine::Direct, 1e-10);
        }
    }
}

#[test]
fn binary_data_all_priors() {
    for n in 5..=10 {
        let data = dataset(n, 3, DataKind::Binary, 20 + n as u64);
        let model = default_model(DataKind::Binary);
        for prior in priors() {
            let f = build_f_table(&data, &model, &prior).unwrap();
            let brute = brute_posteriors(&data, &model, &prior).unwrap();
            check(&f, &prior, &brute, Engine::Direct, 1e-10);
        }
    }
}

#[test]
fn fast_exact_engine() {
    for (n, kind) in [(7, DataKind::Binary), (9, DataKind::Continuous)] {
        let data = dataset(n, 4, kind, 99);
        let model = default_model(kind);
        let prior = PriorSpec::dirichlet_process(1.0).unwrap();
        let f = build_f_table(&data, &model, &prior).unwrap();
        let brute = brute_posteriors(&data, &model, &prior).unwrap();
        check(&f, &prior, &brute, Engine::fast_exact(), 1e-10);
    }
}

#[test]
fn nondefault_hyperparameters() {
    let data = dataset(8, 2, DataKind::Continuous, 5);
    let model = ModelSpec::GammaNormal(GammaNormalHyper::new(2.0, 0.5, 1.5, 0.3).unwrap());
    let prior = PriorSpec::uniform_k();
    let f = build_f_table(&data, &model, &prior).unwrap();
    check(
        &f,
        &prior,
        &brute_posteriors(&data, &model, &prior).unwrap(),
        Engine::Direct,
        1e-10,
    );

    let data = dataset(8, 5, DataKind::Binary, 6);
    let model = ModelSpec::BetaBinomial(BetaBinomialHyper::new(0.5, 3.0).unwrap());
    let f = build_f_table(&data, &model, &prior).unwrap();
    check(
        &f,
        &prior,
        &brute_posteriors(&data, &model, &prior).unwrap(),
        Engine::Direct,
        1e-10,
    );
}

#[test]
fn arbitrary_tables() {
    for seed in 0..5 {
        let f = random_table(8, 4.0, seed);
        for prior in priors() {
            let brute = brute_from_table(&f, &prior).unwrap();
            check(&f, &prior, &brute, Engine::Direct, 1e-10);
        }
    }
}

#[test]
fn single_item() {
    let data = Dataset::from_rows(&[vec![0.3, -1.0]], DataKind::Continuous).unwrap();
    let model = default_model(DataKind::Continuous);
    for prior in priors() {
        let f = build_f_table(&data, &model, &prior).unwrap();
        let brute = brute_posteriors(&data, &model, &prior).unwrap();
        check(&f, &prior, &brute, Engine::Direct, 1e-12);
        assert_eq!(brute.summary.posterior_k, vec![1.0]);
    }
}
