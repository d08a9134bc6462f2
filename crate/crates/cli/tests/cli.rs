use std::path::PathBuf;
use std::process::{Command, Output};

fn blockmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blockmap"))
        .args(args)
        .output()
        .expect("run the binary")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("blockmap-cli-{}-{name}", std::process::id()))
}

#[test]
fn series_of_general_maps() {
    let o = blockmap(&["series", "--scheme", "2", "-u", "1", "-N", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "n,coefficient\n1,2\n2,9\n3,54\n4,378\n");
}

#[test]
fn weighted_series_at_a_fraction() {
    // [z^2] M = u + 8 u^2 at u = 1/2
    let o = blockmap(&["series", "--scheme", "2", "-u", "1/2", "-N", "2"]);
    assert!(stdout(&o).lines().any(|l| l == "2,5/2"), "{}", stdout(&o));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["series", "--scheme", "9", "-u", "1", "-N", "3"][..],
        &["series", "--scheme", "2", "-u", "0.5", "-N", "3"],
        &["series", "--scheme", "2", "-u", "0", "-N", "3"],
        &["sample", "--scheme", "2", "-u", "1", "-n", "40", "--seed", "1"],
        &["sample", "--scheme", "2", "-u", "1", "-n", "41"],
        &[
            "scaling", "--scheme", "2", "-u", "1", "--sizes", "100", "--reps", "10", "--seed", "1",
        ],
    ] {
        let o = blockmap(args);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn critical_weight_is_exact() {
    let o = blockmap(&["critical", "--scheme", "4"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["exact"], "36/11");
    assert_eq!(v["rational"], "36/11");
}

#[test]
fn transition_table() {
    let o = blockmap(&[
        "transition",
        "--scheme",
        "2",
        "--u-min",
        "1",
        "--u-max",
        "3",
        "--steps",
        "3",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("u,rho,y,E,regime"));
    let regimes: Vec<&str> = lines.map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(regimes.first(), Some(&"subcritical"));
    assert_eq!(regimes.last(), Some(&"supercritical"));
}

#[test]
fn sample_emits_a_valid_tree() {
    let o = blockmap(&[
        "sample",
        "--scheme",
        "8",
        "-u",
        "1",
        "-n",
        "41",
        "--seed",
        "5",
        "--emit-tree",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let degrees: Vec<i64> = v["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d.as_i64().unwrap())
        .collect();
    assert_eq!(degrees.len(), 41);
    let mut s = 0;
    for (i, d) in degrees.iter().enumerate() {
        s += d - 1;
        assert!(s >= 0 || i + 1 == degrees.len());
    }
    assert_eq!(s, -1);
}

#[test]
fn sample_is_reproducible() {
    let args = ["sample", "--scheme", "2", "-u", "9/5", "-n", "201", "--seed", "9"];
    assert_eq!(blockmap(&args).stdout, blockmap(&args).stdout);
}

#[test]
fn scaling_csv_and_thread_independence() {
    let args = [
        "scaling", "--scheme", "2", "-u", "1", "--sizes", "50,100", "--reps", "30", "--seed", "4",
    ];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_blockmap"))
            .env("BLOCKMAP_THREADS", threads)
            .args(args)
            .output()
            .unwrap()
    };
    let (a, b) = (run("1"), run("3"));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().next(), Some("n,rep,L1,L2,L3,map_size,blocks_total"));
    assert_eq!(text.lines().count(), 61);
    assert!(text.lines().nth(1).unwrap().starts_with("101,0,"));
}

#[test]
fn scaling_json_and_plots() {
    let svg = scratch("plot.svg");
    let fluct = scratch("fluct.svg");
    let o = blockmap(&[
        "scaling",
        "--scheme",
        "2",
        "-u",
        "1",
        "--sizes",
        "100,400",
        "--reps",
        "30",
        "--seed",
        "2",
        "--format",
        "json",
        "--svg",
        svg.to_str().unwrap(),
        "--fluctuation-svg",
        fluct.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["report"]["regime"], "subcritical");
    assert_eq!(v["report"]["fit"]["regime"], "subcritical");
    assert_eq!(v["report"]["rows"].as_array().unwrap().len(), 60);
    assert!(v["fixtures"]
        .as_array()
        .unwrap()
        .iter()
        .all(|f| f["validated_to"].as_u64().unwrap() >= 4));
    for path in [&svg, &fluct] {
        let text = std::fs::read_to_string(path).unwrap();
        std::fs::remove_file(path).ok();
        assert!(text.starts_with("<svg") && text.contains("polyline"));
    }
}

#[test]
fn config_file_supplies_flags() {
    let cfg = scratch("run.cfg");
    std::fs::write(&cfg, "# sample run\nscheme = 2\nu = 1\nseed = 5\nvertices = 21\n").unwrap();
    let o = blockmap(&["sample", "--config", cfg.to_str().unwrap(), "-n", "11"]);
    std::fs::remove_file(&cfg).ok();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["tree_vertices"], 11);
    assert_eq!(v["seed"], 5);
}

#[test]
fn oracle_counts() {
    let o = blockmap(&["oracle", "--family", "simple", "--max", "4"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["counts"], serde_json::json!([1, 2, 6, 23]));
}

#[test]
fn verify_one_scheme() {
    let o = blockmap(&["verify", "--scheme", "4", "--skip-oracle", "--skip-exponents"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"rho(1)") && names.contains(&"u_C"));
}

#[test]
fn output_flag_writes_a_file() {
    let path = scratch("series.csv");
    let o = blockmap(&[
        "series",
        "--scheme",
        "4",
        "-u",
        "1",
        "-N",
        "3",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(text.starts_with("n,coefficient\n1,1\n"));
}
