mod common;

use cluster_posterior::io::{load_csv, save_csv};
use cluster_posterior::synth::{generate, Experiment};
use cluster_posterior::*;

#[test]
fn generated_data_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    for (experiment, kind) in [
        (Experiment::Normal18, DataKind::Continuous),
        (Experiment::Binary20, DataKind::Binary),
    ] {
        let s = generate(experiment, 42).unwrap();
        let path = dir.path().join(format!("{}.csv", experiment.name()));
        save_csv(&s.data, &path).unwrap();
        let back = load_csv(&path, kind, false).unwrap();
        let bits = |d: &Dataset| d.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&back), bits(&s.data));
        assert_eq!((back.n(), back.d()), (s.data.n(), s.data.d()));
    }
}

#[test]
fn experiment_shapes() {
    for seed in [0, 1, 2] {
        let normal = generate(Experiment::Normal18, seed).unwrap();
        assert_eq!((normal.data.n(), normal.data.d()), (18, 2));
        let mut sizes: Vec<usize> = normal.clusters.iter().map(|c| c.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![6, 6, 6]);

        let binary = generate(Experiment::Binary20, seed).unwrap();
        assert_eq!((binary.data.n(), binary.data.d()), (20, 30));
        assert_eq!(binary.clusters.len(), 5);
        assert!(binary.data.values().iter().all(|v| *v == 0.0 || *v == 1.0));
    }
    let a = generate(Experiment::Binary20, 9).unwrap();
    let b = generate(Experiment::Binary20, 9).unwrap();
    assert_eq!(a.data, b.data);
    assert_eq!(a.clusters, b.clusters);
}

#[test]
fn missing_file_is_an_io_error() {
    let err = load_csv("/nonexistent/dir/data.csv", DataKind::Binary, false).unwrap_err();
    assert!(matches!(err, Error::Io(_)));
}
