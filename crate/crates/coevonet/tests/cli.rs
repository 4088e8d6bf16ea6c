use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use coevonet::series::parse_series;
use coevonet::wave::{format_wave, parse_wave, SurveyWave};
use proptest::prelude::*;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_coevonet"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).arg("--quiet").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn config(horizon: usize, replicates: usize) -> String {
    format!(
        r#"{{"w": 5, "k_amp": 1.05, "c": 0.245, "alpha": 0.1, "beta": 0.15,
            "amp_domain": [[-1, 0], [1.5, 2]], "bounds": [-2, 2],
            "horizon": {horizon}, "replicates": {replicates}, "master_seed": 11}}"#
    )
}

const TWO_CLIQUES: &str = "[meta]\nlabel=2008.09\n[opinions]\n\
    1,2\n2,1\n3,1\n4,2\n5,0\n6,-1\n7,0\n8,0\n\
    [edges]\n\
    1,2\n2,1\n1,3\n3,1\n1,4\n4,1\n2,3\n3,2\n2,4\n4,2\n3,4\n4,3\n\
    5,6\n6,5\n5,7\n7,5\n5,8\n8,5\n6,7\n7,6\n6,8\n8,6\n7,8\n8,7\n\
    4,5\n5,4\n";

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn synth_is_deterministic_and_has_65_nodes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.wave");
    let b = dir.path().join("b.wave");
    assert_eq!(code(&run(&["synth", "--seed", "4", "--out", s(&a)])), 0);
    assert_eq!(code(&run(&["synth", "--seed", "4", "--out", s(&b)])), 0);
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert_eq!(parse_wave(&text).unwrap().opinions.len(), 65);
}

#[test]
fn synth_spec_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "bad.json",
        r#"{"opinion_counts": [[0, 5]], "cluster_sizes": [4, 4], "p_in": 0.5, "p_out": 0.01,
            "reciprocity_in": 0.8, "reciprocity_out": 0, "homophily": 0}"#,
    );
    assert_eq!(code(&run(&["synth", "--spec", s(&spec)])), 1);
    let spec = write(dir.path(), "syntax.json", "{");
    assert_eq!(code(&run(&["synth", "--spec", s(&spec)])), 1);
}

#[test]
fn simulate_writes_series_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", &config(0, 1));
    let wave = write(dir.path(), "init.wave", TWO_CLIQUES);
    let out = dir.path().join("out");
    let o = run(&["simulate", "--config", s(&cfg), "--wave", s(&wave), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let series = std::fs::read_to_string(out.join("series.csv")).unwrap();
    assert_eq!(series.lines().count(), 3);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["master_seed"], 11);
    assert_eq!(manifest["inputs"].as_array().unwrap().len(), 2);
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", &config(5, 2));
    let wave = write(dir.path(), "init.wave", TWO_CLIQUES);
    let out = dir.path().join("out");
    run(&["simulate", "--config", s(&cfg), "--wave", s(&wave), "--out", s(&out), "--seed", "99"]);
    let m = std::fs::read_to_string(out.join("manifest.json")).unwrap();
    assert!(m.contains("\"master_seed\": 99"));
}

#[test]
fn row_counts_follow_horizon_and_replicates() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", &config(50, 3));
    let wave = write(dir.path(), "init.wave", TWO_CLIQUES);
    let out = dir.path().join("out");
    assert_eq!(code(&run(&["simulate", "--config", s(&cfg), "--wave", s(&wave), "--out", s(&out)])), 0);
    let parsed = parse_series(&std::fs::read_to_string(out.join("series.csv")).unwrap()).unwrap();
    assert_eq!(parsed.replicates.len(), 3);
    assert!(parsed.replicates.iter().all(|r| r.len() == 51));
    assert_eq!(parsed.means.len(), 51);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", &config(2, 1));
    let wave = write(dir.path(), "init.wave", TWO_CLIQUES);
    let missing = dir.path().join("missing.wave");
    let out = dir.path().join("out");

    // Missing or invalid wave: data error.
    assert_eq!(code(&run(&["simulate", "--config", s(&cfg), "--wave", s(&missing), "--out", s(&out)])), 2);
    let bad_wave = write(dir.path(), "bad.wave", "[opinions]\n1,3\n");
    let o = run(&["cluster", "--wave", s(&bad_wave)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    // Config problems: missing field, out-of-range value, bad sweep spec, usage.
    let no_beta = write(dir.path(), "nobeta.json", &config(2, 1).replace("\"beta\": 0.15,", ""));
    let o = run(&["simulate", "--config", s(&no_beta), "--wave", s(&wave), "--out", s(&out)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("beta"));
    let bad_c = write(dir.path(), "badc.json", &config(2, 1).replace("0.245", "0.6"));
    assert_eq!(code(&run(&["simulate", "--config", s(&bad_c), "--wave", s(&wave), "--out", s(&out)])), 1);
    assert_eq!(
        code(&run(&["sweep", "--config", s(&cfg), "--wave", s(&wave), "--vary", "c=0,0.6", "--out", s(&out)])),
        1
    );
    assert_eq!(
        code(&run(&["sweep", "--config", s(&cfg), "--wave", s(&wave), "--vary", "gamma=1", "--out", s(&out)])),
        1
    );
    assert_eq!(code(&run(&["frobnicate"])), 1);

    // Unwritable output: I/O error.
    let blocker = write(dir.path(), "file", "");
    let o = run(&["simulate", "--config", s(&cfg), "--wave", s(&wave), "--out", s(&blocker.join("sub"))]);
    assert_eq!(code(&o), 3);
}

#[test]
fn cluster_lists_two_cliques() {
    let dir = tempfile::tempdir().unwrap();
    let wave = write(dir.path(), "w.wave", TWO_CLIQUES);
    let o = run(&["cluster", "--wave", s(&wave)]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "cluster,size,m,opinion,spread,connectivity,members");
    // Six internal edges and the bridge: m = 6/7.
    assert_eq!(lines[1], "0,4,0.8571428571428571,1.5,0.5,1,1 2 3 4");
    assert_eq!(lines[2], "1,4,0.8571428571428571,-0.25,0.375,1,5 6 7 8");
}

#[test]
fn cluster_edgeless_and_triangle() {
    let dir = tempfile::tempdir().unwrap();
    let w = write(dir.path(), "e.wave", "[opinions]\n1,0\n2,1\n3,2\n");
    let text = String::from_utf8(run(&["cluster", "--wave", s(&w)]).stdout).unwrap();
    assert!(text.contains("unclustered\n1 2 3\n"));
    assert!(text.ends_with(",,,,0\n"));
    let w = write(dir.path(), "t.wave", "[opinions]\n1,0\n2,1\n3,2\n[edges]\n1,2\n2,1\n2,3\n3,2\n1,3\n3,1\n");
    let text = String::from_utf8(run(&["cluster", "--wave", s(&w)]).stdout).unwrap();
    assert_eq!(text.lines().nth(1).unwrap(), "0,3,1,1,0.6666666666666666,1,1 2 3");
}

#[test]
fn validate_perfect_match_and_unmapped_label() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", &config(0, 1).replace("\"beta\": 0.15", "\"beta\": 0"));
    let wave = write(dir.path(), "init.wave", TWO_CLIQUES);
    let out = dir.path().join("out");
    run(&["simulate", "--config", s(&cfg), "--wave", s(&wave), "--out", s(&out)]);
    let series = out.join("series.csv");
    let o = run(&["validate", "--series", s(&series), "--wave", s(&wave), "--map", "2008.09=0"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    for line in text.lines().skip(1).take(4) {
        assert!(line.ends_with(",0"), "{line}");
    }
    let o = run(&["validate", "--series", s(&series), "--wave", s(&wave), "--map", "2009.04=0"]);
    assert_eq!(code(&o), 2);
    let o = run(&["validate", "--series", s(&series), "--wave", s(&wave), "--map", "2008.09=7"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn validate_reports_decreasing_spread_on_observed_waves() {
    let dir = tempfile::tempdir().unwrap();
    // Spread shrinks wave by wave inside two fixed, disjoint 4-cliques.
    let opinions = [[-2, 0, 1, 2], [-1, 0, 1, 2], [0, 0, 1, 2], [0, 1, 1, 2], [1, 1, 1, 2]];
    let labels = ["2008.09", "2008.10", "2008.12", "2009.03", "2009.04"];
    let mut args: Vec<String> = Vec::new();
    for (k, (ops, label)) in opinions.iter().zip(labels).enumerate() {
        let mut w = SurveyWave { label: label.into(), ..Default::default() };
        for base in [0u64, 4] {
            for (i, &o) in ops.iter().enumerate() {
                w.opinions.insert(base + i as u64, o);
            }
            for i in 0..4u64 {
                for j in 0..4u64 {
                    if i != j {
                        w.edges.push((base + i, base + j));
                    }
                }
            }
        }
        let p = write(dir.path(), &format!("w{k}.wave"), &format_wave(&w));
        args.push("--wave".into());
        args.push(s(&p).into());
    }
    let cfg = write(dir.path(), "cfg.json", &config(10, 1));
    let out = dir.path().join("out");
    run(&["simulate", "--config", s(&cfg), "--wave", &args[1], "--out", s(&out)]);
    let series = out.join("series.csv");
    let mut full = vec!["validate", "--series", s(&series), "--map", "2008.09=0,2008.10=1,2008.12=3,2009.03=6,2009.04=7"];
    full.extend(args.iter().map(String::as_str));
    let o = run(&full);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let row = text.lines().find(|l| l.starts_with("avg_opinion_spread,decreasing")).unwrap();
    let p: f64 = row.split(',').nth(4).unwrap().parse().unwrap();
    assert!(p < 0.01, "{row}");
}

#[test]
fn outputs_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let wave = dir.path().join("init.wave");
    run(&["synth", "--seed", "1", "--out", s(&wave)]);
    let cfg = write(dir.path(), "cfg.json", &config(15, 4));
    let mut dirs = Vec::new();
    for (k, threads) in ["1", "1", "3", "0"].iter().enumerate() {
        let out = dir.path().join(format!("sim{k}"));
        let o = run(&["simulate", "--config", s(&cfg), "--wave", s(&wave), "--out", s(&out), "--threads", threads]);
        assert_eq!(code(&o), 0);
        let sw = dir.path().join(format!("sweep{k}"));
        let o = run(&["sweep", "--config", s(&cfg), "--wave", s(&wave), "--vary", "w=1,5", "--out", s(&sw), "--threads", threads]);
        assert_eq!(code(&o), 0);
        dirs.push((out, sw));
    }
    let read = |p: PathBuf| std::fs::read(p).unwrap();
    for (out, sw) in &dirs[1..] {
        for f in ["series.csv", "manifest.json"] {
            assert_eq!(read(out.join(f)), read(dirs[0].0.join(f)), "{f}");
        }
        for f in ["series_w_1.csv", "series_w_5.csv", "manifest.json"] {
            assert_eq!(read(sw.join(f)), read(dirs[0].1.join(f)), "{f}");
        }
    }
}

fn wave_strategy() -> impl Strategy<Value = SurveyWave> {
    (prop::collection::btree_map(0u64..1000, -2i32..=2, 0..12), "[0-9]{4}\\.[0-9]{2}").prop_flat_map(|(ops, label)| {
        let ids: Vec<u64> = ops.keys().copied().collect();
        let pairs: Vec<(u64, u64)> = ids
            .iter()
            .flat_map(|&a| ids.iter().map(move |&b| (a, b)))
            .filter(|(a, b)| a != b)
            .collect();
        let k = pairs.len();
        (Just(ops), Just(label), prop::sample::subsequence(pairs, 0..=k))
    })
    .prop_map(|(opinions, label, edges)| SurveyWave { label, opinions, edges })
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn wave_round_trip(w in wave_strategy()) {
        prop_assert_eq!(parse_wave(&format_wave(&w)).unwrap(), w);
    }
}
