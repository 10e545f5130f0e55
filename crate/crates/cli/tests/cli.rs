//! End-to-end tests of the `barter` binary: exit codes, JSON output,
//! the worked paper tables, and deterministic plot emission.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn barter() -> Command {
    Command::new(env!("CARGO_BIN_EXE_barter"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    barter().args(args).output().expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(output.status.success(), "stderr: {}", String::from_utf8_lossy(&output.stderr));
    serde_json::from_slice(&output.stdout).expect("stdout is a single JSON document")
}

fn write_temp(dir: &tempfile::TempDir, name: &str, content: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, content).unwrap();
    path
}

const TABLE_POINTS: &str = r#"{"points": [
    {"u_x": 0, "u_y": 32}, {"u_x": 1, "u_y": 31.5}, {"u_x": 3, "u_y": 31},
    {"u_x": 5, "u_y": 30.5}, {"u_x": 6, "u_y": 30}, {"u_x": 7, "u_y": 29.5},
    {"u_x": 9, "u_y": 28}, {"u_x": 11, "u_y": 27}, {"u_x": 16, "u_y": 24},
    {"u_x": 21, "u_y": 21}, {"u_x": 27, "u_y": 17}, {"u_x": 34, "u_y": 9},
    {"u_x": 39, "u_y": 0}
]}"#;

#[test]
fn solve_reproduces_the_worked_table() {
    let dir = tempfile::tempdir().unwrap();
    let points = write_temp(&dir, "table.json", TABLE_POINTS);

    let output = run(&["--json", "solve", points.to_str().unwrap(), "--points"]);
    let doc = stdout_json(&output);
    assert_eq!(doc["no_trade"], serde_json::json!(false));
    let solutions = doc["solutions"].as_array().unwrap();
    assert_eq!(solutions.len(), 7);

    let by_name = |name: &str| -> &serde_json::Value {
        solutions
            .iter()
            .find(|s| s["algorithm"] == name)
            .unwrap_or_else(|| panic!("missing {name}"))
    };
    let nash = by_name("nash");
    assert_eq!(nash["chosen"][0]["u_x"], serde_json::json!(27));
    assert_eq!(nash["chosen"][0]["u_y"], serde_json::json!(17));
    assert_eq!(nash["objective"], serde_json::json!(459));
    assert_eq!(nash["tie_count"], serde_json::json!(1));

    let median = by_name("median");
    assert_eq!(median["chosen"][0]["u_x"], serde_json::json!(9));
    assert_eq!(median["chosen"][0]["u_y"], serde_json::json!(28));

    let hull = by_name("hull-nash");
    assert_eq!(hull["chosen"][0]["u_x"], serde_json::json!("105/4"));
    assert_eq!(hull["chosen"][0]["u_y"], serde_json::json!("35/2"));
    assert_eq!(hull["objective"], serde_json::json!("3675/8"));
    assert_eq!(hull["is_lottery"], serde_json::json!(true));

    assert_eq!(by_name("eq-sum")["chosen"][0]["u_x"], serde_json::json!(27));
    assert_eq!(by_name("eq-diagonal")["chosen"][0]["u_x"], serde_json::json!(21));
}

#[test]
fn solve_reports_no_trade_with_certificates_on_the_paper_tables() {
    let output = run(&["--json", "solve", data("dominance_table.json").to_str().unwrap()]);
    let doc = stdout_json(&output);
    assert_eq!(doc["no_trade"], serde_json::json!(true));
    assert_eq!(doc["certificate"]["kind"], serde_json::json!("mutual-dominance"));
    assert_eq!(doc["certificate"]["brute_force_verified"], serde_json::json!(true));
    assert_eq!(doc["certificate"]["exchanges_checked"], serde_json::json!(512));
    for s in doc["solutions"].as_array().unwrap() {
        assert_eq!(s["no_trade"], serde_json::json!(true));
    }

    let output = run(&["--json", "solve", data("compensation_table.json").to_str().unwrap()]);
    let doc = stdout_json(&output);
    assert_eq!(doc["certificate"]["kind"], serde_json::json!("insufficient-compensation-X"));
    let witness = doc["certificate"]["witness"].as_array().unwrap();
    assert_eq!(witness[0]["sum_of_others"], serde_json::json!(11));
    assert_eq!(witness[0]["min_own"], serde_json::json!(12));
}

#[test]
fn solve_single_algorithm_resolves_exchange_names() {
    let output = run(&[
        "--json",
        "solve",
        data("greedy_trap.json").to_str().unwrap(),
        "--algorithm",
        "nash",
    ]);
    let doc = stdout_json(&output);
    let solutions = doc["solutions"].as_array().unwrap();
    assert_eq!(solutions.len(), 1);
    assert_eq!(solutions[0]["exchanges"][0]["give_x"], serde_json::json!(["house"]));
    assert_eq!(solutions[0]["exchanges"][0]["give_y"], serde_json::json!(["boat", "car"]));
}

#[test]
fn enumerate_counts_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let two = write_temp(
        &dir,
        "two.json",
        r#"{"items":[
            {"name":"a","owner":"X","value_to_x":1,"value_to_y":5},
            {"name":"b","owner":"Y","value_to_x":5,"value_to_y":1}
        ]}"#,
    );
    let output = run(&["enumerate", two.to_str().unwrap()]);
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("4 exchanges, 4 distinct points"));
    assert!(text.contains("u_x,u_y,count,acceptable,on_periphery"));
    assert_eq!(text.lines().count(), 1 + 1 + 4);

    // the dominance table: 512 exchanges, none acceptable
    let output = run(&["--json", "enumerate", data("dominance_table.json").to_str().unwrap(), "--points-only"]);
    let doc = stdout_json(&output);
    assert_eq!(doc["total_exchanges"], serde_json::json!(512));
    assert_eq!(doc["acceptable_exchanges"], serde_json::json!(0));
    assert_eq!(doc["periphery_size"], serde_json::json!(0));
    assert!(doc["points"][0].get("exchanges").is_none(), "--points-only drops listings");

    // CSV lands in the file
    let csv_path = dir.path().join("out.csv");
    let output = run(&[
        "enumerate",
        two.to_str().unwrap(),
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("u_x,u_y,count,acceptable,on_periphery\n"));
    assert!(csv.contains("4,4,1,true,true"));
}

#[test]
fn enumerate_respects_the_limit_contract() {
    // 9 items over a limit of 8: exit 2 without --force
    let file = data("dominance_table.json");
    let output = run(&["--limit", "8", "enumerate", file.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("512"), "error names the exchange count: {stderr}");

    let output = run(&["--limit", "8", "--force", "enumerate", file.to_str().unwrap()]);
    assert!(output.status.success());

    // BARTER_LIMIT is the default; --limit wins over it
    let output = barter()
        .env("BARTER_LIMIT", "8")
        .args(["enumerate", file.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let output = barter()
        .env("BARTER_LIMIT", "8")
        .args(["--limit", "20", "enumerate", file.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(output.status.success());
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_temp(
        &dir,
        "bad.json",
        r#"{"items":[{"name":"a","owner":"Z","value_to_x":1,"value_to_y":1}]}"#,
    );
    let output = run(&["solve", bad.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("unknown owner"));

    let output = run(&["solve", "/nonexistent/nope.json"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn transform_scale_check_passes_and_translate_shifts_values() {
    let dir = tempfile::tempdir().unwrap();
    let bike_book = write_temp(
        &dir,
        "bike.json",
        r#"{"items":[
            {"name":"bike","owner":"X","value_to_x":8,"value_to_y":6},
            {"name":"book","owner":"X","value_to_x":2,"value_to_y":1},
            {"name":"lamp","owner":"Y","value_to_x":4,"value_to_y":3}
        ]}"#,
    );
    let output = run(&["transform", bike_book.to_str().unwrap(), "--scale", "X:2", "--check"]);
    assert!(output.status.success());
    assert!(String::from_utf8_lossy(&output.stdout).contains("check passed"));

    let output = run(&[
        "--json",
        "transform",
        bike_book.to_str().unwrap(),
        "--translate",
        "X:1000",
    ]);
    let doc = stdout_json(&output);
    let items = doc["instance"]["items"].as_array().unwrap();
    assert_eq!(items[0]["value_to_x"], serde_json::json!("1008"));
    assert_eq!(items[1]["value_to_x"], serde_json::json!("1002"));
    assert_eq!(items[0]["value_to_y"], serde_json::json!("6"));

    // non-positive scale factor is a usage error
    let output = run(&["transform", bike_book.to_str().unwrap(), "--scale", "X:0"]);
    assert_eq!(output.status.code(), Some(2));
    let output = run(&["transform", bike_book.to_str().unwrap(), "--scale", "X:-2"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn transform_find_flip_reports_the_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let flip = write_temp(
        &dir,
        "flip.json",
        r#"{"items":[
            {"name":"p","owner":"X","value_to_x":4,"value_to_y":9},
            {"name":"q","owner":"X","value_to_x":5,"value_to_y":8},
            {"name":"a","owner":"Y","value_to_x":10,"value_to_y":2}
        ]}"#,
    );
    let output = run(&["--json", "transform", flip.to_str().unwrap(), "--find-flip"]);
    let doc = stdout_json(&output);
    assert_eq!(doc["flip"]["translation_robust"], serde_json::json!(false));
    assert_eq!(doc["flip"]["threshold"], serde_json::json!(1));
    assert_eq!(doc["flip"]["player"], serde_json::json!("X"));

    // identical valuations have no acceptable trades at all
    let output = run(&[
        "--json",
        "transform",
        data("identical_30_34.json").to_str().unwrap(),
        "--find-flip",
    ]);
    let doc = stdout_json(&output);
    assert_eq!(doc["flip"]["translation_robust"], serde_json::json!(true));
}

#[test]
fn check_certifies_all_three_kinds_and_none() {
    for (file, kind) in [
        ("dominance_table.json", "mutual-dominance"),
        ("compensation_table.json", "insufficient-compensation-X"),
        ("identical_30_34.json", "identical-valuation"),
        ("no_certificate.json", "none"),
    ] {
        let output = run(&["--json", "check", data(file).to_str().unwrap()]);
        let doc = stdout_json(&output);
        assert_eq!(doc["kind"], serde_json::json!(kind), "{file}");
    }
}

#[test]
fn lab_gravity_matches_the_constant_sum_table() {
    let output = run(&["--json", "lab", "gravity"]);
    let doc = stdout_json(&output);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[5]["product"], serde_json::json!(25));
    assert_eq!(rows[4]["product"], serde_json::json!(24));
    assert_eq!(doc["argmax"], serde_json::json!([5]));
    let force = rows[5]["force"].as_f64().unwrap();
    assert!((force - 1.66e-11).abs() < 0.01e-11);
}

#[test]
fn lab_generate_is_seed_deterministic() {
    let a = run(&["--seed", "42", "lab", "generate", "--p", "4", "--q", "3"]);
    let b = run(&["--seed", "42", "lab", "generate", "--p", "4", "--q", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["--seed", "43", "lab", "generate", "--p", "4", "--q", "3"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn lab_compare_runs_and_emits_the_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("matrix.csv");
    let output = run(&[
        "--json",
        "--seed",
        "7",
        "lab",
        "compare",
        "--runs",
        "10",
        "--p",
        "3",
        "--q",
        "3",
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    let doc = stdout_json(&output);
    assert_eq!(doc["instances_run"], serde_json::json!(10));
    assert_eq!(doc["agreement"][0][0], serde_json::json!(10));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("algorithm,nash,sum,median,eq-sum,eq-diagonal,eq-arc,hull-nash"));
}

#[test]
fn lab_greedy_and_probe_median() {
    let output = run(&["--json", "lab", "greedy", data("greedy_trap.json").to_str().unwrap()]);
    let doc = stdout_json(&output);
    assert_eq!(doc["final_point"]["u_x"], serde_json::json!(0));
    assert_eq!(doc["steps"].as_array().unwrap().len(), 0);

    let output = run(&[
        "--json",
        "lab",
        "probe-median",
        data("skewed_periphery.json").to_str().unwrap(),
    ]);
    let doc = stdout_json(&output);
    assert_eq!(doc["all_pass"], serde_json::json!(true));
    assert_eq!(doc["entries"].as_array().unwrap().len(), 8);
}

#[test]
fn plot_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let points = write_temp(&dir, "table.json", TABLE_POINTS);
    let out_a = dir.path().join("a.svg");
    let out_b = dir.path().join("b.svg");
    for out in [&out_a, &out_b] {
        let output = run(&[
            "plot",
            points.to_str().unwrap(),
            "--points",
            "--hull",
            "--annotate",
            "-o",
            out.to_str().unwrap(),
        ]);
        assert!(output.status.success());
    }
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert_eq!(a, b, "same input and flags must give identical bytes");

    let svg = String::from_utf8(a).unwrap();
    assert_eq!(svg.matches("<circle").count(), 13 + 2, "13 table rows plus 2 markers");
    assert!(svg.contains("<polyline"));
    assert!(svg.contains("nash (27, 17)"));
    assert!(svg.contains("median (9, 28)"));
}

#[test]
fn plot_no_trade_instance_gets_a_caption() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cloud.svg");
    let output = run(&[
        "plot",
        data("dominance_table.json").to_str().unwrap(),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.contains("no trade: mutual-dominance"));

    // unwritable path: exit 2
    let output = run(&[
        "plot",
        data("dominance_table.json").to_str().unwrap(),
        "-o",
        "/nonexistent-dir/x.svg",
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn decimal_flag_renders_fixed_decimals() {
    let dir = tempfile::tempdir().unwrap();
    let points = write_temp(&dir, "table.json", TABLE_POINTS);
    let output = run(&["--json", "--decimal", "solve", points.to_str().unwrap(), "--points", "--algorithm", "hull-nash"]);
    let doc = stdout_json(&output);
    assert_eq!(doc["solutions"][0]["chosen"][0]["u_x"], serde_json::json!("26.250000"));
    assert_eq!(doc["solutions"][0]["chosen"][0]["u_y"], serde_json::json!("17.500000"));
}
