use std::process::{Command, Output};

fn lensknot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lensknot"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn regression_exit_codes() {
    let cases: [(&[&str], i32); 12] = [
        (&["surgery", "torus", "3", "4", "--slope", "13/1"], 0),
        (&["homeo", "13", "3", "13", "9", "--oriented"], 0),
        (&["verify", "prop2_2", "--range", "1..20"], 0),
        (&["homeo", "5", "1", "5", "4", "--oriented"], 1),
        (
            &[
                "bqf", "prop31", "--a-min", "1", "--a-max", "1", "--bc-max", "10", "--n", "3..3",
            ],
            1,
        ),
        (&["surgery", "torus", "3", "4", "--slope", "13/x"], 2),
        (&["surgery", "torus", "2", "4", "--slope", "9/1"], 2),
        (&["dual", "2", "3"], 0),
        (&["bqf", "unit", "36"], 2),
        (&["identities", "--range", "50"], 0),
        (&["verify", "prop_caseSH", "--range", "2..5"], 2),
        (&["search", "--order-max", "40", "--bogus-flag"], 2),
    ];
    for (args, expected) in cases {
        let o = lensknot(args);
        assert_eq!(
            code(&o),
            expected,
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn surgery_output() {
    assert_eq!(
        stdout(&lensknot(&[
            "surgery", "torus", "3", "4", "--slope", "13/1"
        ])),
        "L(13,3)\n"
    );
    assert_eq!(
        stdout(&lensknot(&["surgery", "cable", "2", "3", "+1"])),
        "L(25,11)\n"
    );
    assert_eq!(
        stdout(&lensknot(&["surgery", "tangleHH", "1"])),
        "L(93,67)\n"
    );
    let o = lensknot(&["surgery", "torus", "2", "5", "--slope", "29/2"]);
    assert!(stdout(&o).starts_with("not a lens space (slope-condition-fails)"));
    assert_eq!(code(&o), 0);
    let o = lensknot(&["surgery", "torus", "3", "4"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--slope"));
}

#[test]
fn homeo_output() {
    assert_eq!(
        stdout(&lensknot(&["homeo", "13", "3", "13", "9", "--oriented"])),
        "oriented-homeomorphic\n"
    );
    assert_eq!(
        stdout(&lensknot(&["homeo", "5", "1", "5", "4"])),
        "homeomorphic\n"
    );
    assert_eq!(
        stdout(&lensknot(&["homeo", "91", "12", "91", "27"])),
        "not-homeomorphic\n"
    );
}

#[test]
fn verify_prints_one_line_per_index() {
    let o = lensknot(&["verify", "prop2_2", "--range", "1..20"]);
    let text = stdout(&o);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(
        lines
            .iter()
            .filter(|l| l.starts_with("PASS prop2_2 n="))
            .count(),
        20
    );
    assert_eq!(
        lines.last().unwrap(),
        &"SUMMARY prop2_2 checked=20 passed=20 failed=0"
    );
    assert!(lines[0].contains("witness=torus(3,4)&torus(2,7)@13/1"));
}

#[test]
fn jsonl_lines_parse_independently() {
    let runs: [&[&str]; 6] = [
        &[
            "--format", "jsonl", "surgery", "torus", "3", "4", "--slope", "13/1",
        ],
        &["--format", "jsonl", "verify", "thm1_2_1", "--range", "1..5"],
        &["--format", "jsonl", "search", "--order-max", "60"],
        &["--format", "jsonl", "bqf", "solve", "1", "-6", "1", "1"],
        &["--format", "jsonl", "dual", "5", "2"],
        &["--format", "jsonl", "identities", "--range", "20"],
    ];
    for args in runs {
        let text = stdout(&lensknot(args));
        assert!(!text.is_empty(), "{args:?}");
        for line in text.lines() {
            serde_json::from_str::<serde_json::Value>(line)
                .unwrap_or_else(|e| panic!("{args:?}: {line}: {e}"));
        }
    }
    let v: serde_json::Value = serde_json::from_str(stdout(&lensknot(runs[0])).trim()).unwrap();
    assert_eq!(v["slope"], "13/1");
    assert_eq!(v["lens"]["q"], 3);
    let v: serde_json::Value = serde_json::from_str(stdout(&lensknot(runs[3])).trim()).unwrap();
    assert_eq!(v["solutions"], serde_json::json!([[1, 0], [6, 1], [35, 6]]));
}

#[test]
fn search_writes_records_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("records.jsonl");
    let p = path.to_str().unwrap();
    let o = lensknot(&[
        "search",
        "--families",
        "torus,cable",
        "--order-max",
        "60",
        "--workers",
        "2",
        "--out",
        p,
    ]);
    assert_eq!(code(&o), 0);
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(!written.is_empty());
    for line in written.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["slope"].as_str().unwrap().contains('/'));
        assert!(v["members"].as_array().unwrap().len() >= 2);
    }
    assert!(stdout(&o)
        .lines()
        .last()
        .unwrap()
        .contains("max-multiplicity=2"));

    let again = dir.path().join("again.jsonl");
    let o = lensknot(&[
        "search",
        "--families",
        "torus,cable",
        "--order-max",
        "60",
        "--workers",
        "1",
        "--out",
        again.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read_to_string(&again).unwrap(), written);
}

#[test]
fn bqf_commands() {
    assert_eq!(stdout(&lensknot(&["bqf", "unit", "32"])), "u=3 v=1\n");
    assert_eq!(stdout(&lensknot(&["bqf", "unit", "5"])), "u=1 v=1\n");
    let text = stdout(&lensknot(&[
        "bqf", "solve", "1", "-6", "-1", "-1", "--count", "2",
    ]));
    assert!(text.contains("representatives: (0,1)"));
    assert!(text.contains("solutions: (0,1) (6,1)"));
    let o = lensknot(&["bqf", "prop31"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("counterexamples=0"));
}

#[test]
fn phi_timeout_is_reported() {
    // a scan of ~10^12 terms cannot finish within a second
    let o = lensknot(&["phi", "1000000000039", "3", "5", "--timeout", "1"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("timed out"));
}
