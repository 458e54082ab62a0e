use qhcat::cli::run;

fn qhcat(args: &str) -> qhcat::cli::Outcome {
    run(std::iter::once("qhcat").chain(args.split_whitespace()))
}

fn section<'a>(stdout: &'a str, title: &str) -> Vec<&'a str> {
    let header = format!("== {title}");
    stdout
        .lines()
        .skip_while(|l| !l.starts_with(&header))
        .skip(1)
        .take_while(|l| !l.is_empty())
        .collect()
}

fn row_tokens(line: &str) -> Vec<&str> {
    line.split_whitespace().collect()
}

#[test]
fn check_qh_on_the_ring_filtration_passes() {
    let out = qhcat("check-qh --family za-inf-inf --layers 5");
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.starts_with("qhcat check-qh : PASS"));
    assert!(out.stdout.contains("41 objects, 5 layers"));
}

#[test]
fn ideal_grid_matches_expected_cells() {
    let out = qhcat("ideal --family za-inf-inf --layer 4 --target E5_7");
    assert_eq!(out.code, 0, "{}", out.stderr);
    let grid = section(&out.stdout, "I_B4(-,(13,3))");
    let expected = [
        "K K K K K . . .",
        "K K K K K . .",
        "K K K K K K . .",
        "K K K K K . .",
        "K K K K K K . .",
        "K K K K K . .",
        "K K K K K . . .",
    ];
    let got: Vec<String> = grid.iter().map(|l| row_tokens(l).join(" ")).collect();
    assert_eq!(got, expected);
    let cover = section(&out.stdout, "cover [(12,4), (12,2)]");
    assert_eq!(
        row_tokens(cover[0]),
        ["K2", "K2", "K2", "K2", "K", ".", ".", "."]
    );
    assert_eq!(
        row_tokens(cover[3]),
        ["K2", "K2", "K2", "K2", "K2", ".", "."]
    );
    let kernel = section(&out.stdout, "kernel [(11,3)]");
    assert_eq!(
        row_tokens(kernel[2]),
        ["K", "K", "K", "K", "K", ".", ".", "."]
    );
    assert!(out
        .stdout
        .contains("presentation: [(11,3)] -> [(12,4), (12,2)]"));
}

#[test]
fn tilting_sweep_passes() {
    let out = qhcat("tilting --rows 6 --cols 8");
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("window-level"));
    assert!(out.stdout.contains("== T(3,1) =="));
}

#[test]
fn reports_are_byte_identical() {
    for args in [
        "check-qh --family zd-inf --layers 3 --emit json",
        "ideal --family za-inf-inf --layer 3 --target E4_5",
        "approx --family za-inf --layers 3 --target simple:E2_0",
    ] {
        let a = qhcat(args);
        let b = qhcat(args);
        assert_eq!(a, b, "{args}");
    }
}

#[test]
fn digest_depends_on_input() {
    let digest = |args: &str| {
        let out = qhcat(args);
        out.stdout.lines().nth(1).unwrap().to_string()
    };
    assert_ne!(
        digest("check-qh --family za-inf --layers 3"),
        digest("check-qh --family za-inf --layers 3 --field fp:3")
    );
}

#[test]
fn json_report_round_trips() {
    let out = qhcat("delta --family za-inf --layer 2 --layers 3 --emit json");
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["command"], "delta");
    assert_eq!(v["passed"], true);
    assert!(v["diagrams"].as_array().unwrap().len() >= 2);
    assert!(v.get("timing_ms").is_none());
    let timed = qhcat("delta --family za-inf --layer 2 --layers 3 --emit json --timing");
    let v: serde_json::Value = serde_json::from_str(&timed.stdout).unwrap();
    assert!(v["timing_ms"].is_u64());
}

#[test]
fn dot_output() {
    let out = qhcat("check-qh --family za-inf-inf --layers 2 --emit dot");
    assert!(out.stdout.starts_with("digraph"));
    let out = qhcat("trace --family za-inf-inf --layers 2 --target rep:E2_1 --emit dot");
    assert!(out.stdout.matches("digraph").count() >= 2);
}

#[test]
fn failing_filtration_exits_one() {
    for args in [
        "check-qh --family zd-inf --layers 4",
        "check-qh --family za-inf --filtration boxes --layers 4",
    ] {
        let out = qhcat(args);
        assert_eq!(out.code, 1, "{}{}", out.stdout, out.stderr);
        assert!(out.stdout.starts_with("qhcat check-qh : FAIL"));
        assert!(out.stdout.contains("counterexample"));
    }
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(qhcat("check-qh --family nope").code, 2);
    assert_eq!(qhcat("check-qh").code, 2);
    assert_eq!(qhcat("frobnicate").code, 2);
    assert_eq!(qhcat("delta --family za-inf --layer 9 --layers 3").code, 2);
    let out = qhcat("trace --family za-inf --layers 3 --target rep:E9_9");
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("E9_9"));
}

#[test]
fn spec_files() {
    let dir = std::env::temp_dir().join(format!("qhcat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(
        &bad,
        r#"{"family": {"name": "za-inf-inf", "colour": "red"}}"#,
    )
    .unwrap();
    let out = qhcat(&format!("check-qh --spec {}", bad.display()));
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("unknown field"));

    let a3 = dir.join("a3.json");
    std::fs::write(
        &a3,
        r#"{"field": "fp:7",
            "quiver": {"vertices": ["1", "2", "3"],
                       "arrows": [{"name": "a", "from": "1", "to": "2"},
                                  {"name": "b", "from": "2", "to": "3"}],
                       "relations": [[{"path": ["a", "b"]}]]},
            "layers": [["3"], ["2"], ["1"]]}"#,
    )
    .unwrap();
    let out = qhcat(&format!("check-qh --spec {}", a3.display()));
    assert_eq!(out.code, 0, "{}", out.stderr);
    let out = qhcat(&format!("tensor --left {} --right a2", a3.display()));
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("3 objects (x) 2 objects"));

    let family = dir.join("family.json");
    std::fs::write(
        &family,
        r#"{"family": {"name": "za-inf-inf", "layers": 3}}"#,
    )
    .unwrap();
    let a = qhcat(&format!("check-qh --spec {}", family.display()));
    let b = qhcat("check-qh --family za-inf-inf --layers 3");
    assert_eq!(a, b);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn tensor_of_linear_quivers() {
    let out = qhcat("tensor --left a2 --right a2 --field fp:32003");
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("chain of 5 ideals"));
}
