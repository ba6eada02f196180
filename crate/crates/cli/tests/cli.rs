mod support;

use std::fs;

use serde_json::Value;
use support::*;

fn read_json(path: &std::path::Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn golden_report_is_reproduced_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let golden = fs::read(fixture("nine_items.golden.json")).unwrap();
    for threads in ["1", "2", "4"] {
        let out = dir.path().join(format!("t{threads}.json"));
        let mut args = golden_args(out.to_str().unwrap());
        args.extend(["--threads".to_string(), threads.to_string()]);
        let run = cli(&args.iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
        assert_eq!(fs::read(&out).unwrap(), golden, "threads={threads}");
    }
}

#[test]
fn golden_report_matches_enumeration() {
    let mut engine = read_json(&fixture("nine_items.golden.json"));
    let mut oracle = read_json(&fixture("nine_items.oracle.json"));
    engine.as_object_mut().unwrap().remove("engine");
    oracle.as_object_mut().unwrap().remove("engine");
    assert!(numeric_diff(&engine, &oracle) <= 1e-10);
}

#[test]
fn reports_follow_the_schema() {
    let schema = schema();
    for name in ["nine_items.golden.json", "nine_items.oracle.json"] {
        validate(&read_json(&fixture(name)), &schema).unwrap();
    }
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("b.csv");
    fs::write(&data, "0,1\n1,1\n0,0\n1,0\n1,1\n").unwrap();
    let out = dir.path().join("r.json");
    let run = cli(&[
        "run",
        "--data",
        data.to_str().unwrap(),
        "--model",
        "binary",
        "--prior",
        "uniform-partitions",
        "--engine",
        "fast-exact",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 0);
    let report = read_json(&out);
    validate(&report, &schema).unwrap();
    assert_eq!(report["engine"]["variant"], "fast-exact");
    assert_eq!(report["engine"]["scale_bits"], 96);
    assert!(report["engine"]["wall_time_seconds"].as_f64().unwrap() >= 0.0);

    let broken: Value = serde_json::json!({"n": 0, "d": 1});
    assert!(validate(&broken, &schema).is_err());
}

#[test]
fn single_item_run() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("one.csv");
    fs::write(&data, "0.25\n").unwrap();
    let out = dir.path().join("r.json");
    let run = cli(&[
        "run",
        "--data",
        data.to_str().unwrap(),
        "--model",
        "normal",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 0);
    let r = read_json(&out);
    assert_eq!(r["posterior_k"], serde_json::json!([1.0]));
    assert_eq!(r["cooccurrence"], serde_json::json!([[1.0]]));
    assert_eq!(r["global_mode"]["clusters"], serde_json::json!([[1]]));
    assert_eq!(r["global_mode"]["posterior_prob"], 1.0);
}

#[test]
fn selected_outputs_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let mut args = golden_args(out.to_str().unwrap());
    args.extend(["--outputs".into(), "posterior-k".into()]);
    let run = cli(&args.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(code(&run), 0);
    let r = read_json(&out);
    assert!(r.get("posterior_k").is_some());
    assert!(r.get("cooccurrence").is_none());
    assert!(r.get("modes").is_none());
    let golden = read_json(&fixture("nine_items.golden.json"));
    assert_eq!(r["posterior_k"], golden["posterior_k"]);
}

#[test]
fn csv_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("csv");
    let mut args = golden_args(out.to_str().unwrap());
    args.extend(["--format".into(), "csv".into()]);
    let run = cli(&args.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let golden = read_json(&fixture("nine_items.golden.json"));

    let post = fs::read_to_string(out.join("posterior_k.csv")).unwrap();
    let lines: Vec<&str> = post.lines().collect();
    assert_eq!(lines[0], "k,posterior,prior");
    assert_eq!(lines.len(), 10);
    let p1: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(p1, golden["posterior_k"][0].as_f64().unwrap());

    let cooc = fs::read_to_string(out.join("cooccurrence.csv")).unwrap();
    let rows: Vec<Vec<f64>> = cooc
        .lines()
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(serde_json::to_value(&rows).unwrap(), golden["cooccurrence"]);

    let modes = fs::read_to_string(out.join("modes.csv")).unwrap();
    assert_eq!(modes.lines().count(), 10);
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert!(summary.contains("prior,dp\n"));
    assert!(summary.contains("engine,direct\n"));
}

#[test]
fn json_to_stdout() {
    let run = cli(&golden_args("-")
        .iter()
        .map(String::as_str)
        .collect::<Vec<_>>());
    assert_eq!(code(&run), 0);
    assert_eq!(
        run.stdout,
        fs::read(fixture("nine_items.golden.json")).unwrap()
    );
}

#[test]
fn verify_passes_and_detects_faults() {
    let data = fixture("nine_items.csv");
    let base = [
        "verify",
        "--data",
        data.to_str().unwrap(),
        "--model",
        "normal",
    ];
    for prior in ["uniform-k", "uniform-partitions", "dp"] {
        let mut args = base.to_vec();
        args.extend(["--prior", prior]);
        let ok = cli(&args);
        assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stdout));
        args.push("--inject-fault");
        assert_eq!(code(&cli(&args)), 4);
    }
    let mut args = base.to_vec();
    args.extend(["--engine", "fast-exact"]);
    assert_eq!(code(&cli(&args)), 0);
}

#[test]
fn oracle_report_regenerates() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("oracle.json");
    let data = fixture("nine_items.csv");
    let run = cli(&[
        "verify",
        "--data",
        data.to_str().unwrap(),
        "--model",
        "normal",
        "--prior",
        "dp",
        "--oracle-out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 0);
    assert_eq!(
        fs::read(&out).unwrap(),
        fs::read(fixture("nine_items.oracle.json")).unwrap()
    );
}

#[test]
fn usage_errors_exit_2() {
    let data = fixture("nine_items.csv");
    let d = data.to_str().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["run", "--data", d, "--model", "normal"],
        vec!["run", "--data", d, "--model", "poisson", "--out", "-"],
        vec![
            "run", "--data", d, "--model", "normal", "--prior", "dp", "--theta", "0", "--out", "-",
        ],
        vec![
            "run", "--data", d, "--model", "normal", "--alpha", "-1", "--out", "-",
        ],
        vec![
            "run",
            "--data",
            d,
            "--model",
            "normal",
            "--threads",
            "0",
            "--out",
            "-",
        ],
        vec![
            "run",
            "--data",
            d,
            "--model",
            "normal",
            "--engine",
            "fast-exact",
            "--scale-bits",
            "0",
            "--out",
            "-",
        ],
        vec![
            "generate",
            "--experiment",
            "custom",
            "--seed",
            "1",
            "--out",
            "/dev/null",
        ],
        vec![
            "generate",
            "--experiment",
            "normal-18",
            "--n",
            "4",
            "--seed",
            "1",
            "--out",
            "/dev/null",
        ],
        vec!["frobnicate"],
    ];
    for args in cases {
        assert_eq!(code(&cli(&args)), 2, "{args:?}");
    }
}

#[test]
fn precision_shortfall_names_required_bits() {
    let data = fixture("nine_items.csv");
    let run = cli(&[
        "run",
        "--data",
        data.to_str().unwrap(),
        "--model",
        "normal",
        "--engine",
        "fast-exact",
        "--scale-bits",
        "8",
        "--out",
        "-",
    ]);
    assert_eq!(code(&run), 2);
    let err = String::from_utf8_lossy(&run.stderr);
    assert!(err.contains("bits are required"), "{err}");
}

#[test]
fn verify_refuses_large_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("big.csv");
    let run = cli(&[
        "generate",
        "--experiment",
        "normal-18",
        "--seed",
        "3",
        "--out",
        data.to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 0);
    let run = cli(&[
        "verify",
        "--data",
        data.to_str().unwrap(),
        "--model",
        "normal",
    ]);
    assert_eq!(code(&run), 2);
}

#[test]
fn data_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        fs::write(&p, body).unwrap();
        p
    };
    let missing = write("missing.csv", "1,2\n3,\n5,6\n");
    let ragged = write("ragged.csv", "1,2\n3\n");
    let text = write("text.csv", "1,2\n3,abc\n");
    let nonbinary = write("nonbinary.csv", "0,1\n0.5,1\n");
    for (path, model) in [
        (&missing, "normal"),
        (&ragged, "normal"),
        (&text, "normal"),
        (&nonbinary, "binary"),
    ] {
        let run = cli(&[
            "run",
            "--data",
            path.to_str().unwrap(),
            "--model",
            model,
            "--out",
            "-",
        ]);
        assert_eq!(code(&run), 3, "{}", path.display());
    }
    let run = cli(&[
        "run",
        "--data",
        missing.to_str().unwrap(),
        "--model",
        "normal",
        "--out",
        "-",
    ]);
    let err = String::from_utf8_lossy(&run.stderr);
    assert!(err.contains("row 2") && err.contains("column 2"), "{err}");
    let run = cli(&[
        "run",
        "--data",
        "/no/such/file.csv",
        "--model",
        "normal",
        "--out",
        "-",
    ]);
    assert_eq!(code(&run), 3);
}

#[test]
fn header_row() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("h.csv");
    fs::write(&data, "x,y\n0,1\n1,1\n").unwrap();
    let run = cli(&[
        "run",
        "--data",
        data.to_str().unwrap(),
        "--model",
        "binary",
        "--header",
        "--out",
        "-",
    ]);
    assert_eq!(code(&run), 0);
    let r: Value = serde_json::from_slice(&run.stdout).unwrap();
    assert_eq!(r["n"], 2);
    let run = cli(&[
        "run",
        "--data",
        data.to_str().unwrap(),
        "--model",
        "binary",
        "--out",
        "-",
    ]);
    assert_eq!(code(&run), 3);
}

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = (0..2)
        .map(|i| dir.path().join(format!("g{i}.csv")))
        .collect();
    for p in &paths {
        let run = cli(&[
            "generate",
            "--experiment",
            "binary-20",
            "--seed",
            "11",
            "--out",
            p.to_str().unwrap(),
            "--labels-out",
            dir.path().join("labels.txt").to_str().unwrap(),
        ]);
        assert_eq!(code(&run), 0);
    }
    let a = fs::read_to_string(&paths[0]).unwrap();
    assert_eq!(a, fs::read_to_string(&paths[1]).unwrap());
    assert_eq!(a.lines().count(), 20);
    assert!(a.lines().all(|l| l.split(',').count() == 30));
    let labels = fs::read_to_string(dir.path().join("labels.txt")).unwrap();
    let mut distinct: Vec<&str> = labels.lines().collect();
    distinct.sort();
    distinct.dedup();
    assert_eq!(distinct.len(), 5);
}

#[test]
fn engines_agree_through_the_cli() {
    let data = fixture("nine_items.csv");
    let run = |engine: &str| {
        let out = cli(&[
            "run",
            "--data",
            data.to_str().unwrap(),
            "--model",
            "normal",
            "--engine",
            engine,
            "--omit-timing",
            "--out",
            "-",
        ]);
        assert_eq!(code(&out), 0);
        let mut v: Value = serde_json::from_slice(&out.stdout).unwrap();
        v.as_object_mut().unwrap().remove("engine");
        v
    };
    assert!(numeric_diff(&run("direct"), &run("fast-exact")) <= 1e-10);
}
