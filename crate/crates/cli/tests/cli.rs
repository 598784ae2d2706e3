use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_commentmap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn layout_matches_golden_file() {
    let input = fixture("small50.jsonl");
    let catalog = fixture("small50.catalog.jsonl");
    let out = run(&[
        "layout",
        "--in",
        path_str(&input),
        "--catalog",
        path_str(&catalog),
        "--song",
        "S1",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let golden = std::fs::read(fixture("golden/small50.S1.layout.json")).unwrap();
    assert!(out.stdout == golden, "layout drifted from the golden file");
}

#[test]
fn usage_errors_exit_with_two() {
    let input = fixture("songs13.jsonl");
    let input = path_str(&input);
    for args in [
        vec!["layout", "--bogus"],
        vec!["frobnicate"],
        vec!["layout", "--in", input],
        vec!["stats"],
        vec![
            "layout",
            "--in",
            input,
            "--song",
            "S1",
            "--max-error",
            "0.1",
            "--max-error-abs",
            "3",
        ],
        vec!["layout", "--in", input, "--song", "S1", "--eps", "1.5"],
        vec!["gen-fixture", "--songs", "0"],
    ] {
        let out = run(&args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn failures_exit_with_one_and_name_the_stage() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.jsonl");
    let out = run(&["stats", "--in", path_str(&missing)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ingest"));

    let input = fixture("small50.jsonl");
    let out = run(&["layout", "--in", path_str(&input), "--song", "S9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown song S9"));
}

#[test]
fn flag_beats_config_beats_default() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("small50.jsonl");
    let base = ["layout", "--in", path_str(&input), "--song", "S1"];
    let seed_of = |extra: &[&str]| {
        let mut args = base.to_vec();
        args.extend_from_slice(extra);
        let doc = stdout_json(&run(&args));
        (
            doc["meta"]["config"]["seed"].as_u64().unwrap(),
            doc["meta"]["config"]["ensemble"]["eps"].as_f64().unwrap(),
        )
    };
    assert_eq!(seed_of(&[]), (42, 0.7));

    let config = dir.path().join("cm.toml");
    std::fs::write(&config, "seed = 7\neps = 0.5\n").unwrap();
    let config = path_str(&config);
    assert_eq!(seed_of(&["--config", config]), (7, 0.5));
    assert_eq!(seed_of(&["--config", config, "--seed", "9"]), (9, 0.5));

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "sead = 7\n").unwrap();
    let out = run(&["layout", "--config", path_str(&bad), "--in", path_str(&input)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_file_can_name_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("cm.toml");
    let input = fixture("songs13.jsonl");
    std::fs::write(&config, format!("in = {:?}\nsong = \"S3\"\n", path_str(&input))).unwrap();
    let doc = stdout_json(&run(&["layout", "--config", path_str(&config)]));
    assert_eq!(doc["meta"]["song_id"], "S3");
    assert_eq!(doc["cells"].as_array().unwrap().len(), 50);
}

#[test]
fn ingest_normalizes_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("in.csv");
    std::fs::write(
        &csv,
        "id,song_id,text,timestamp,like_count\nb,S1,second,200,3\na,S1,\"first, with comma\",100,1\n",
    )
    .unwrap();
    let once = dir.path().join("once.jsonl");
    let out = run(&["ingest", "--in", path_str(&csv), "--out", path_str(&once)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&once).unwrap();
    let ids: Vec<String> = text
        .lines()
        .map(|l| {
            serde_json::from_str::<Value>(l).unwrap()["id"]
                .as_str()
                .unwrap()
                .to_string()
        })
        .collect();
    assert_eq!(ids, ["a", "b"]);

    let twice = dir.path().join("twice.jsonl");
    assert!(run(&["ingest", "--in", path_str(&once), "--out", path_str(&twice)])
        .status
        .success());
    assert_eq!(std::fs::read(&once).unwrap(), std::fs::read(&twice).unwrap());
}

#[test]
fn gen_fixture_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    let cat = dir.path().join("cat.jsonl");
    let args = |out: &Path| {
        run(&[
            "gen-fixture",
            "--comments",
            "600",
            "--topics",
            "3",
            "--songs",
            "1",
            "--seed",
            "42",
            "--out",
            path_str(out),
        ])
    };
    assert!(args(&a).status.success());
    assert!(args(&b).status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(
        std::fs::read(&a).unwrap(),
        std::fs::read(fixture("planted600.jsonl")).unwrap()
    );

    let out = run(&[
        "gen-fixture",
        "--comments",
        "26",
        "--songs",
        "13",
        "--out",
        path_str(&a),
        "--catalog",
        path_str(&cat),
    ]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(&a).unwrap().lines().count(), 26);
    assert_eq!(std::fs::read_to_string(&cat).unwrap().lines().count(), 13);
}

#[test]
fn stats_tags_and_analyze() {
    let input = fixture("songs13.jsonl");
    let catalog = fixture("songs13.catalog.jsonl");
    let stats = stdout_json(&run(&["stats", "--in", path_str(&input)]));
    for key in [
        "max_length",
        "avg_length",
        "vocabulary_size",
        "token_count",
        "sentence_count",
        "emoticon_sentence_count",
    ] {
        assert!(stats[key].is_number(), "{key}");
    }

    let tags = stdout_json(&run(&[
        "tags",
        "--in",
        path_str(&input),
        "--catalog",
        path_str(&catalog),
    ]));
    let tags = tags.as_array().unwrap();
    assert_eq!(tags.len(), 13);
    assert!(tags.iter().all(|t| t["tags"].as_array().unwrap().len() == 8));

    let out = run(&[
        "analyze",
        "--in",
        path_str(&fixture("small50.jsonl")),
        "--keywords",
        "2",
    ]);
    assert!(out.status.success());
    let rows: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 50);
    assert!(rows
        .iter()
        .all(|r| r["keywords"].as_array().unwrap().len() <= 2 && r["sentiment"]["label"].is_string()));
}

#[test]
fn sequential_flag_gives_the_same_bytes() {
    let input = fixture("small50.jsonl");
    let par = run(&["layout", "--in", path_str(&input), "--song", "S1"]);
    let seq = run(&["layout", "--sequential", "--in", path_str(&input), "--song", "S1"]);
    assert!(par.status.success() && seq.status.success());
    assert_eq!(par.stdout, seq.stdout);
}

#[test]
fn stats_on_two_comments() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("two.jsonl");
    std::fs::write(
        &input,
        concat!(
            "{\"id\":\"1\",\"song_id\":\"S\",\"text\":\"ab\",\"timestamp\":10,\"like_count\":0}\n",
            "{\"id\":\"2\",\"song_id\":\"S\",\"text\":\"abcd\",\"timestamp\":20,\"like_count\":0}\n"
        ),
    )
    .unwrap();
    let stats = stdout_json(&run(&["stats", "--in", path_str(&input)]));
    assert_eq!(stats["avg_length"], 3.0);
    assert_eq!(stats["max_length"], 4);
}
