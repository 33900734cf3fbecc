use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qoce(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qoce"))
        .args(args)
        .output()
        .expect("spawning qoce")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn planted_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.edges");
    let truth = dir.path().join("g.communities");
    let detected = dir.path().join("detected.txt");
    let profile = dir.path().join("profile.csv");

    stdout(&qoce(&[
        "gen-planted",
        "--cliques",
        "4",
        "--size",
        "8",
        "--bridges",
        "5",
        "--seed",
        "7",
        "--out-graph",
        path(&graph),
        "--out-truth",
        path(&truth),
    ]));
    assert_eq!(fs::read_to_string(&graph).unwrap().lines().count(), 117);

    stdout(&qoce(&[
        "detect",
        "--graph",
        path(&graph),
        "--output",
        path(&detected),
        "--profile-csv",
        path(&profile),
        "--workers",
        "2",
    ]));
    let communities = fs::read_to_string(&detected).unwrap();
    assert_eq!(communities.lines().count(), 4);
    assert!(fs::read_to_string(&profile)
        .unwrap()
        .starts_with("seed,k,conductance\n"));

    let score = stdout(&qoce(&[
        "eval",
        "--detected",
        path(&detected),
        "--truth",
        path(&truth),
    ]));
    assert_eq!(score.trim(), "1.0000");
}

#[test]
fn seeds_lists_filtered_cliques() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.edges");
    // K5 on a..e plus a triangle hanging off e.
    let mut lines = Vec::new();
    let k5 = ["a", "b", "c", "d", "e"];
    for (i, x) in k5.iter().enumerate() {
        for y in &k5[i + 1..] {
            lines.push(format!("{x} {y}"));
        }
    }
    lines.extend(["e f".into(), "f g".into(), "g e".into(), "# comment".into()]);
    fs::write(&graph, lines.join("\n")).unwrap();
    let out = stdout(&qoce(&["seeds", "--graph", path(&graph)]));
    assert_eq!(out, "a b c d e\n");
}

#[test]
fn sensitivity_prints_csv() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.edges");
    let truth = dir.path().join("g.communities");
    stdout(&qoce(&[
        "gen-planted",
        "--cliques",
        "2",
        "--size",
        "6",
        "--bridges",
        "1",
        "--out-graph",
        path(&graph),
        "--out-truth",
        path(&truth),
    ]));
    let out = stdout(&qoce(&[
        "sensitivity",
        "--graph",
        path(&graph),
        "--truth",
        path(&truth),
        "--param",
        "window",
        "--values",
        "3,4",
    ]));
    assert_eq!(out, "window,avg_f1,communities\n3,1.0000,2\n4,1.0000,2\n");
}

#[test]
fn malformed_input_fails() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("bad.edges");
    fs::write(&graph, "1 2\n3\n").unwrap();
    let out = qoce(&[
        "detect",
        "--graph",
        path(&graph),
        "--output",
        path(&dir.path().join("o")),
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let out = qoce(&["seeds", "--graph", path(&dir.path().join("missing.edges"))]);
    assert!(!out.status.success());

    let ok = dir.path().join("ok.edges");
    fs::write(&ok, "1 2\n").unwrap();
    let out = qoce(&[
        "detect",
        "--graph",
        path(&ok),
        "--output",
        path(&dir.path().join("o")),
        "--window",
        "0",
    ]);
    assert!(!out.status.success());
}
