use assert_cmd::Command;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::cargo_bin("posetoperad").unwrap();
    c.env_remove("POSETOPERAD_DIGITS");
    c
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn validator() -> jsonschema::Validator {
    let text = include_str!("../schema/report.v1.json");
    let schema: Value = serde_json::from_str(text).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

/// Parses every stdout line as JSON and checks it against the schema.
fn json_lines(args: &[&str]) -> (i32, Vec<Value>) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, out, err) = run(&full);
    let v = validator();
    let docs: Vec<Value> = out
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    for d in &docs {
        let errors: Vec<String> = v
            .iter_errors(d)
            .map(|e| format!("{e} at {}", e.instance_path()))
            .collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}\n{err}");
    }
    (code, docs)
}

#[test]
fn poly_n_poset() {
    let (code, out, _) = run(&["poly", "{x<y,z<y,z<w}"]);
    assert_eq!(code, 0);
    assert!(out.contains("d: [0, 1, 5, 5]"), "{out}");
    assert!(out.contains("5 x simplex[4], 5 x simplex[3], 1 x simplex[2]"));
    let (_, docs) = json_lines(&["poly", "{x<y,z<y,z<w}"]);
    assert_eq!(docs[0]["d"], serde_json::json!(["0", "1", "5", "5"]));
    let ids: Vec<&str> = docs[0]["discrepancies"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["id"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["n-poset-low-order-index", "n-poset-zeta-example"]);
}

#[test]
fn inverse_sums() {
    for (args, want) in [
        (vec!["inverse-sum", "A5", "--r", "2"], "1082"),
        (vec!["inverse-sum", "A5", "--r", "3"], "273/4"),
        (vec!["inverse-sum", "star", "--r", "5"], "115/512"),
        (vec!["inverse-sum", "star", "--r", "5", "--weak"], "575/512"),
    ] {
        let (code, out, _) = run(&args);
        assert_eq!((code, out.trim()), (0, want), "{args:?}");
        let (_, docs) = json_lines(&args);
        assert_eq!(docs[0]["value"], want);
    }
    let (code, _, err) = run(&["inverse-sum", "A2", "--r", "1/2"]);
    assert_eq!(code, 2);
    assert!(err.contains("|r| > 1"));
}

#[test]
fn zeta_identity_cube() {
    let (code, out, _) = run(&["zeta-identity", "A3"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("(zeta(2) - 5/4) - 6 (zeta(3) - 9/8) + 6 (zeta(4) - 17/16)"));
    assert!(out.contains("result: pass"));
    assert!(out.contains(" ± "));
    let (_, docs) = json_lines(&["zeta-identity", "A3"]);
    assert_eq!(docs[0]["pass"], true);
    assert_eq!(docs[0]["rhs"]["constant"], "-7/8");
}

#[test]
fn series_and_tables() {
    let (_, docs) = json_lines(&["series", "A3", "--weak"]);
    assert_eq!(
        docs[0]["closed_form"]["numerator"],
        serde_json::json!(["0", "1", "4", "1"])
    );
    let (_, docs) = json_lines(&["series", "N"]);
    assert_eq!(
        docs[0]["series"]["coeffs"],
        serde_json::json!({"2": "1", "3": "5", "4": "5"})
    );
    let (code, _, _) = run(&["series", "N", "--strict", "--weak"]);
    assert_eq!(code, 2);
    let (_, out, _) = run(&["tables", "--eulerian", "4"]);
    assert_eq!(out.lines().last(), Some("1 11 11 1"));
    let (_, docs) = json_lines(&["tables", "--stirling", "4"]);
    assert_eq!(
        docs[0]["rows"][4],
        serde_json::json!(["0", "1", "7", "6", "1"])
    );
    assert_eq!(run(&["tables"]).0, 2);
}

#[test]
fn eval_and_tropical() {
    let (_, docs) = json_lines(&["eval", "{x<y}", "--at", "4"]);
    assert_eq!(
        (docs[0]["strict"].as_str(), docs[0]["weak"].as_str()),
        (Some("6"), Some("10"))
    );
    let (code, out, _) = run(&["tropical", "N", "--lengths", "1,2,1,1"]);
    assert_eq!((code, out.trim()), (0, "3"));
    json_lines(&["tropical", "N", "--lengths", "3,1,1,5"]);
    let (code, _, err) = run(&["tropical", "N", "--lengths", "1,2"]);
    assert_eq!(code, 2);
    assert!(err.contains("arity"));
}

#[test]
fn parse_errors_echo_position() {
    let (code, _, err) = run(&["poly", "{x<y,}"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 1, column 6"), "{err}");
    assert!(err.contains("{x<y,}\n       ^"), "{err}");
    let (code, _, err) = run(&["poly", "N(C1, C2)"]);
    assert_eq!(code, 2);
    assert!(err.contains("takes 4 arguments, found 2"), "{err}");
}

#[test]
fn guard_and_usage_exit_codes() {
    assert_eq!(run(&["poly", "C13"]).0, 3);
    assert_eq!(run(&["--guard", "3", "poly", "A4"]).0, 3);
    assert_eq!(run(&["--guard", "4", "poly", "A4"]).0, 0);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["--tolerance", "0", "zeta", "2"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn stdin_batch() {
    let out = bin()
        .args(["--json", "poly", "-"])
        .write_stdin("C2\n\n# comment\nA2\n{x<y,}\n")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stdout).unwrap();
    let docs: Vec<Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(docs.len(), 2);
    assert_eq!(docs[1]["d"], serde_json::json!(["1", "2"]));
}

#[test]
fn digits_from_environment() {
    let out = bin()
        .env("POSETOPERAD_DIGITS", "20")
        .args(["--json", "zeta", "2"])
        .output()
        .unwrap();
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["digits"], 20);
    assert_eq!(doc["value"], "1.64493406684822643647");
    let (_, docs) = json_lines(&["--digits", "100", "zeta", "3", "--minus-one"]);
    assert!(docs[0]["value"]
        .as_str()
        .unwrap()
        .starts_with("0.2020569031595942853997381615114499907649862923404988817922715553"));
}

#[test]
fn verify_suite_is_deterministic() {
    let run_with = |threads: &str| {
        let out = bin()
            .env("RAYON_NUM_THREADS", threads)
            .args(["--json", "verify-suite"])
            .output()
            .unwrap();
        (out.status.code(), String::from_utf8(out.stdout).unwrap())
    };
    let (code, one) = run_with("1");
    let (_, four) = run_with("4");
    assert_eq!(code, Some(0));
    assert_eq!(one, four);
    let doc: Value = serde_json::from_str(&one).unwrap();
    assert!(validator().is_valid(&doc));
    assert_eq!(doc["schema"], "v1");
    assert_eq!(doc["summary"]["flagged"], 3);
    assert_eq!(doc["summary"]["fail"], 0);
    let ids: Vec<&str> = doc["cases"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    let (code, human, _) = run(&["verify-suite"]);
    assert_eq!(code, 0);
    assert!(human.contains("FLAGGED discrepancy/points-identity-sign"));
}
