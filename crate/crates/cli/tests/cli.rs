use std::process::Command;

use serde_json::Value;

fn nowicki(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_nowicki")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json_run(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.extend(["--json", "--no-timing"]);
    let (code, out, err) = nowicki(&a);
    assert!(code != 2, "usage error: {err}");
    (code, serde_json::from_str(&out).expect("json report"))
}

fn write_tmp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn kb3_at_n2_is_equal() {
    let (code, v) = json_run(&["verify", "poisson", "--claim", "kb3", "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["summary"]["all_equal"], true);
    let notes = v["summary"]["notes"].to_string();
    assert!(notes.contains("j<i,k-any"), "{notes}");
    for k in ["command", "version", "certificates", "summary", "elapsed_ms"] {
        assert!(v.get(k).is_some(), "missing {k}");
    }
}

#[test]
fn kb3_strict_range_is_a_finding() {
    let (code, v) = json_run(&["verify", "poisson", "--claim", "kb3-range", "--n", "2"]);
    assert_eq!(code, 1);
    assert_eq!(v["summary"]["all_equal"], false);
}

#[test]
fn nine_uv_relations_vanish() {
    let (code, v) = json_run(&["relations", "assoc", "--d", "3"]);
    assert_eq!(code, 0);
    let certs = v["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 9);
    assert!(certs.iter().all(|c| c["vanishes"] == true));
}

#[test]
fn s_typo_names_the_vanishing_reading() {
    let (code, v) = json_run(&["relations", "assoc", "--d", "3", "--claim", "s-typo"]);
    assert_eq!(code, 1);
    let notes = v["summary"]["notes"].as_array().unwrap();
    assert_eq!(notes[0], "S vanishes under: S-corrected,w-constant");
}

#[test]
fn poisson_b2_relations_vanish() {
    let (code, _) = json_run(&["relations", "poisson", "--n", "4"]);
    assert_eq!(code, 0);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(nowicki(&["prove", "poly"]).0, 2);
    assert_eq!(nowicki(&["verify", "octonion"]).0, 2);
    let (code, _, err) = nowicki(&["verify", "poisson", "--n", "5"]);
    assert_eq!(code, 2);
    assert!(err.contains("n <= 4"), "{err}");
    let (code, _, err) = nowicki(&["verify", "assoc", "--d", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("d <= 2"), "{err}");
    let (code, _, err) = nowicki(&["relations", "assoc", "--d", "6"]);
    assert_eq!(code, 2);
    assert!(err.contains("d <= 5"), "{err}");
}

#[test]
fn express_round_trip_of_u12_squared() {
    // (x1y2 - x2y1)^2 = x1²y2² - 2x1x2y1y2 + x2²y1²
    let dir = tempfile::tempdir().unwrap();
    let f = write_tmp(
        &dir,
        "f.json",
        r#"{"algebra":"poly","vars":{"x":2,"y":2},"terms":[
            {"c":"1","e":[2,0,0,2]},{"c":"-2/1","e":[1,1,1,1]},{"c":"2/2","e":[0,2,2,0]}]}"#,
    );
    let (code, v) = json_run(&["express", "poly", "--d", "2", "--input", &f]);
    assert_eq!(code, 0);
    let c = &v["certificates"][0];
    assert_eq!(c["round_trip"], true);
    assert_eq!(c["expression"]["text"], "(1)*u1,2^2");
}

#[test]
fn express_seeded_samples() {
    let (code, v) = json_run(&["express", "poly", "--d", "3", "--seed", "11", "--samples", "25"]);
    assert_eq!(code, 0);
    assert_eq!(v["certificates"].as_array().unwrap().len(), 25);
}

#[test]
fn express_rejects_non_constants() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_tmp(&dir, "f.json", r#"{"algebra":"poly","vars":{"x":1,"y":1},"terms":[{"c":"1","e":[0,1]}]}"#);
    let (code, v) = json_run(&["express", "poly", "--input", &f]);
    assert_eq!(code, 1);
    assert!(v["summary"]["findings"][0].as_str().unwrap().contains("not a constant"));
}

#[test]
fn load_normalizes_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_tmp(&dir, "f.json", r#"{"algebra":"poly","vars":{"x":2,"y":2},"terms":[{"c":"2/4","e":[1,0,0,1]}]}"#);
    let (code, v) = json_run(&["verify", "poly", "--input", &f]);
    // x1y2 is not a constant: δ(x1y2) = x1x2
    assert_eq!(code, 1);
    let el = &v["certificates"][0]["element"];
    assert_eq!(el["terms"][0]["c"], "1/2");
    assert_eq!(el["terms"][0]["e"], serde_json::json!([1, 0, 0, 1]));
}

#[test]
fn load_reports_context() {
    let dir = tempfile::tempdir().unwrap();
    let bad_json = write_tmp(&dir, "a.json", "{\n  \"algebra\": \"poly\",\n  oops\n}");
    let (code, _, err) = nowicki(&["verify", "poly", "--input", &bad_json]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");

    let bad_coeff =
        write_tmp(&dir, "b.json", r#"{"algebra":"poly","vars":{"x":1,"y":1},"terms":[{"c":"1/0","e":[1,0]}]}"#);
    let (code, _, err) = nowicki(&["verify", "poly", "--input", &bad_coeff]);
    assert_eq!(code, 2);
    assert!(err.contains("terms[0].c"), "{err}");

    let degenerate = write_tmp(
        &dir,
        "c.json",
        r#"{"algebra":"poisson","n":2,"terms":[{"c":"1","shape":"B3","bracket":[1,1],"factor":2}]}"#,
    );
    let (code, _, err) = nowicki(&["verify", "poisson", "--input", &degenerate]);
    assert_eq!(code, 2);
    assert!(err.contains("degenerate bracket"), "{err}");
}

#[test]
fn constancy_of_loaded_elements() {
    let dir = tempfile::tempdir().unwrap();
    // [x1, x2] in L' with n = 2 (letters: x1 = 1, x2 = 2, y1 = 3, y2 = 4)
    let lie = write_tmp(&dir, "l.json", r#"{"algebra":"lie","n":2,"terms":[{"c":"1","w":[2,1]}]}"#);
    assert_eq!(json_run(&["verify", "lie", "--input", &lie]).0, 0);
    // x2[x2,x1] with d = 1: δ gives x1[x2,x1]
    let assoc = write_tmp(&dir, "a.json", r#"{"algebra":"assoc","d":1,"terms":[{"c":"1","prefix":[0,1],"bracket":[2,1]}]}"#);
    assert_eq!(json_run(&["verify", "assoc", "--input", &assoc]).0, 1);
    let grass = write_tmp(&dir, "g.json", r#"{"algebra":"grassmann","d":1,"terms":[{"c":"1","prefix":[1,0],"chain":[1,2]}]}"#);
    assert_eq!(json_run(&["verify", "grassmann", "--input", &grass]).0, 0);
}

#[test]
fn json_output_is_byte_identical() {
    let args = ["verify", "grassmann", "--d", "2", "--maxdeg", "3", "--json", "--no-timing", "--jobs", "3"];
    let a = nowicki(&args).1;
    let b = nowicki(&args).1;
    assert_eq!(a, b);
    let mut one_job = args.to_vec();
    one_job[9] = "1";
    assert_eq!(a, nowicki(&one_job).1);
}

#[test]
fn certificates_sorted_by_key() {
    let (_, v) = json_run(&["verify", "lie", "--n", "2", "--maxdeg", "4"]);
    let keys: Vec<Vec<u64>> = v["certificates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["key"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect())
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn kernels_per_component() {
    let (code, v) = json_run(&["kernel", "lie", "--n", "1", "--maxdeg", "4"]);
    assert_eq!(code, 0);
    let dims: Vec<u64> = v["certificates"].as_array().unwrap().iter().map(|c| c["dim_kernel"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![1, 1, 1]);
    let (code, v) = json_run(&["kernel", "poisson", "--n", "1", "--multidegree", "1,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["certificates"][0]["key"], serde_json::json!([1, 1]));
}

#[test]
fn table_output_has_summary() {
    let (code, out, _) = nowicki(&["verify", "poly", "--d", "2", "--maxdeg", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("all equal: true"));
}
