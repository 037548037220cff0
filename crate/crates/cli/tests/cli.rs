use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn choquet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_choquet")).args(args).env_remove("CHOQUET_BUDGET").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn temp(name: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name).display().to_string()
}

#[test]
fn integrate_prints_the_bare_value() {
    let out = choquet(&["integrate", "--capacity", &fixture("layer_cake.json"), "--function", &fixture("f_3_1.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "9/2\n");
}

#[test]
fn integrate_breakdown_lists_the_layers() {
    let out = choquet(&["integrate", "--capacity", &fixture("layer_cake.json"), "--function", &fixture("f_3_1.json"), "--breakdown"]);
    let v = json(&out);
    assert_eq!(v["value"], "9/2");
    assert_eq!(v["decimal"].as_f64(), Some(4.5));
    let layers = v["breakdown"].as_array().unwrap();
    assert_eq!(layers.len(), 2);
    assert_eq!(layers[0]["set"], serde_json::json!([0]));
    assert_eq!(layers[1]["capacity"], "5/2");
}

#[test]
fn strong_subadditivity_witness() {
    let out = choquet(&["capacity", "check", "--capacity", &fixture("not_submodular.json"), "--axiom", "strong-subadd"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["holds"], false);
    assert_eq!(v["witness"]["sets"], serde_json::json!([[0], [1]]));
}

#[test]
fn check_without_axiom_reports_all_of_them() {
    let out = choquet(&["capacity", "check", "--capacity", &fixture("layer_cake.json"), "--format", "table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("reports[0].axiom = empty-set"), "{text}");
    assert!(text.contains("reports[9].axiom = outer-regular"), "{text}");
}

#[test]
fn malformed_json_exits_2_with_location() {
    let out = choquet(&["integrate", "--capacity", &fixture("truncated.json"), "--function", &fixture("f_3_1.json")]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("truncated.json") && err.contains("line"), "{err}");
}

#[test]
fn invalid_values_name_their_json_path() {
    let out = choquet(&["capacity", "check", "--capacity", &fixture("negative.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("$.entries[1].value"), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(choquet(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(choquet(&["integrate", "--capacity"]).status.code(), Some(2));
    assert_eq!(choquet(&["--help"]).status.code(), Some(0));
}

#[test]
fn duality_gap_of_a_non_submodular_capacity() {
    let out = choquet(&["dual", "--capacity", &fixture("not_submodular.json"), "--function", &fixture("ones.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["gap"]["finite"], "1");
    assert_eq!(v["dual_value"]["exact"], "2");
    assert_eq!(v["dominated"], true);
}

#[test]
fn greedy_and_lp_agree_on_a_submodular_capacity() {
    let out = choquet(&["dual", "--capacity", &fixture("submodular3.json"), "--function", &fixture("f_3_1_0.json"), "--method", "both"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["agree"], true);
    assert_eq!(v["lp"]["gap"]["finite"], "0");
}

#[test]
fn nest_emits_both_chains_and_sums() {
    let out = choquet(&["nest", "--sets", &fixture("sets.json"), "--capacity", &fixture("submodular3.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["nested"], serde_json::json!([[], [2], [0, 1, 2], [0, 1, 2]]));
    assert_eq!(v["lemma"].as_array().unwrap().len(), 4);
    assert_eq!(v["sums"]["holds"], true);
    assert_eq!(v["failures"], serde_json::json!([]));
}

#[test]
fn hausdorff_cover_and_export_round_trip() {
    let export = temp("content.json");
    let out = choquet(&["hausdorff", "--dim", "1", "--depth", "3", "--beta", "1", "--cells", &fixture("cells_1d.json"), "--export", &export]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    // At β = 1 a cube costs its length, so three separate eighths are optimal.
    assert_eq!(v["cover"]["exact"], "3/8");
    assert_eq!(v["cover"]["cubes"].as_array().unwrap().len(), 3);
    assert_eq!(v["export"]["exact"], true);
    let check = choquet(&["capacity", "check", "--capacity", &export, "--axiom", "strong-subadd"]);
    assert_eq!(json(&check)["holds"], true);
}

#[test]
fn generated_and_transformed_capacities_load_back() {
    let generated = temp("generated.json");
    let out = choquet(&["capacity", "generate", "--kind", "bounded-threshold", "--n", "3", "--m", "1"]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::write(&generated, &out.stdout).unwrap();
    let regularized = choquet(&["capacity", "regularize", "--capacity", &generated]);
    assert_eq!(regularized.status.code(), Some(0));
    let path = temp("regularized.json");
    std::fs::write(&path, &regularized.stdout).unwrap();
    let semifinite = choquet(&["capacity", "check", "--capacity", &path, "--axiom", "semifinite"]);
    assert_eq!(json(&semifinite)["holds"], true);
    let contracted = choquet(&["capacity", "contract", "--capacity", &path, "--set", "0,2"]);
    assert_eq!(json(&contracted)["n"], 3);
}

#[test]
fn convergence_modes() {
    let h = fixture("submodular3.json");
    let seq = fixture("seq_stable.json");
    for mode in ["qu", "fatou", "dct", "countable"] {
        let out = choquet(&["converge", "--capacity", &h, "--sequence", &seq, "--mode", mode, "--tail", "2"]);
        assert_eq!(out.status.code(), Some(0), "{mode}: {}", stderr(&out));
    }
    let out = choquet(&["converge", "--capacity", &h, "--sequence", &seq, "--mode", "qu"]);
    let v = json(&out);
    assert_eq!(v["qu_verdict"], "insufficient-prefix");
    assert_eq!(v["minimal_bad_set"], serde_json::json!([0, 1]));
}

#[test]
fn refuted_quasi_uniform_convergence_names_a_point() {
    let out = choquet(&["converge", "--capacity", &fixture("layer_cake.json"), "--sequence", &fixture("seq_far.json"), "--mode", "qu"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["qu_verdict"], "refuted");
    assert_eq!(v["refutation"]["point"], 0);
}

#[test]
fn premise_and_hypothesis_failures_exit_2() {
    let out = choquet(&["converge", "--capacity", &fixture("layer_cake.json"), "--sequence", &fixture("seq_far.json"), "--mode", "converse"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("premise"), "{}", stderr(&out));

    let args = ["converge", "--capacity", &fixture("null_point.json"), "--sequence", &fixture("seq_fatou.json"), "--mode", "fatou"];
    assert_eq!(choquet(&args).status.code(), Some(2));
    let mut search = args.to_vec();
    search.push("--search");
    let out = choquet(&search);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["counterexample"]["null_set"], serde_json::json!([0]));
    assert_eq!(v["counterexample"]["limit_integral"], "2");
}

#[test]
fn budget_variable_caps_enumeration() {
    let out = Command::new(env!("CARGO_BIN_EXE_choquet"))
        .args(["capacity", "sublinear", "--capacity", &fixture("layer_cake.json")])
        .env("CHOQUET_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("budget"), "{}", stderr(&out));
    let out = choquet(&["capacity", "sublinear", "--capacity", &fixture("not_submodular.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["consistent"], true);
    assert_eq!(v["sublinear_on_grid"], false);
}

#[test]
fn suite_passes_and_counts_every_property() {
    let out = choquet(&["suite", "--seed", "7", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    let properties = v["properties"].as_array().unwrap();
    assert_eq!(properties.len(), 35);
    assert!(properties.iter().all(|p| p["failures"] == 0 && p["cases"].as_u64() > Some(0)));
    assert_eq!(v["failed_properties"], serde_json::json!([]));
}

#[test]
fn suite_output_does_not_depend_on_threads() {
    let run = |threads: &str| choquet(&["suite", "--seed", "3", "--n", "2", "--count", "20", "--threads", threads]).stdout;
    assert_eq!(run("1"), run("3"));
}
