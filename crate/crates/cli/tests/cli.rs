use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn pbspm(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pbspm"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("pbspm runs")
}

fn ok(args: &[&str], cwd: &Path) {
    let out = pbspm(args, cwd);
    assert!(
        out.status.success(),
        "pbspm {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn workdir(nodes: usize) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    ok(
        &[
            "synth",
            "--nodes",
            &nodes.to_string(),
            "--seed",
            "3",
            "--output",
            "g.tsv",
        ],
        dir.path(),
    );
    dir
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_path(path).unwrap();
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn schema() -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas/pbspm-output.schema.json");
    read_json(&path)
}

/// Validator for the keywords the output schema uses: `$ref` (local),
/// `oneOf`, `type`, `enum`, `required`, `properties`,
/// `additionalProperties: false`, `items`, `minItems`, `minimum`,
/// `maximum`, `exclusiveMinimum`.
fn check(root: &Value, schema: &Value, value: &Value, at: &str) -> Result<(), String> {
    if let Some(r) = schema.get("$ref").and_then(Value::as_str) {
        let target = root
            .pointer(r.trim_start_matches('#'))
            .ok_or_else(|| format!("bad $ref {r}"))?;
        return check(root, target, value, at);
    }
    if let Some(options) = schema.get("oneOf").and_then(Value::as_array) {
        let matched = options.iter().filter(|s| check(root, s, value, at).is_ok()).count();
        if matched != 1 {
            return Err(format!("{at}: matches {matched} oneOf branches"));
        }
    }
    if let Some(ty) = schema.get("type") {
        let types: Vec<&str> = match ty {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(Value::as_str).collect(),
            _ => return Err(format!("bad type at {at}")),
        };
        let fits = types.iter().any(|t| match *t {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "string" => value.is_string(),
            "boolean" => value.is_boolean(),
            "null" => value.is_null(),
            "number" => value.is_number(),
            "integer" => value.is_u64() || value.is_i64(),
            _ => false,
        });
        if !fits {
            return Err(format!("{at}: {value} is not {types:?}"));
        }
    }
    if let Some(options) = schema.get("enum").and_then(Value::as_array) {
        if !options.contains(value) {
            return Err(format!("{at}: {value} not in enum"));
        }
    }
    if let Some(x) = value.as_f64() {
        let bound = |k: &str| schema.get(k).and_then(Value::as_f64);
        if bound("minimum").is_some_and(|b| x < b)
            || bound("maximum").is_some_and(|b| x > b)
            || bound("exclusiveMinimum").is_some_and(|b| x <= b)
        {
            return Err(format!("{at}: {x} out of range"));
        }
    }
    if let Some(obj) = value.as_object() {
        let props = schema.get("properties").and_then(Value::as_object);
        for key in schema.get("required").and_then(Value::as_array).into_iter().flatten() {
            let key = key.as_str().unwrap();
            if !obj.contains_key(key) {
                return Err(format!("{at}: missing {key}"));
            }
        }
        for (key, v) in obj {
            match props.and_then(|p| p.get(key)) {
                Some(s) => check(root, s, v, &format!("{at}.{key}"))?,
                None if schema.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    return Err(format!("{at}: unexpected {key}"))
                }
                None => {}
            }
        }
    }
    if let Some(items) = value.as_array() {
        if let Some(min) = schema.get("minItems").and_then(Value::as_u64) {
            if (items.len() as u64) < min {
                return Err(format!("{at}: fewer than {min} items"));
            }
        }
        if let Some(s) = schema.get("items") {
            for (i, v) in items.iter().enumerate() {
                check(root, s, v, &format!("{at}[{i}]"))?;
            }
        }
    }
    Ok(())
}

fn validate(path: &Path) {
    let schema = schema();
    if let Err(e) = check(&schema, &schema, &read_json(path), "$") {
        panic!("{} fails schema: {e}", path.display());
    }
}

#[test]
fn schema_validator_rejects_bad_documents() {
    let schema = schema();
    let good = serde_json::json!({"dataset": "d", "n": 2, "gap_threshold": 0.05, "m": 1, "eigenvalues": [1.0, -1.0]});
    assert!(check(&schema, &schema, &good, "$").is_ok());
    let mut extra = good.clone();
    extra["surprise"] = Value::Bool(true);
    assert!(check(&schema, &schema, &extra, "$").is_err());
    let mut zero_m = good.clone();
    zero_m["m"] = Value::from(0);
    assert!(check(&schema, &schema, &zero_m, "$").is_err());
    let mut missing = good;
    missing.as_object_mut().unwrap().remove("eigenvalues");
    assert!(check(&schema, &schema, &missing, "$").is_err());
}

#[test]
fn predict_writes_one_row_per_method() {
    let dir = workdir(60);
    ok(
        &["predict", "--input", "g.tsv", "--method", "CN", "--out-dir", "one"],
        dir.path(),
    );
    let (header, rows) = read_csv(&dir.path().join("one/predict.csv"));
    assert_eq!(header[..3], ["dataset", "method", "alpha"]);
    assert!(header.contains(&"mean_precision".to_string()));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][1], "CN");

    ok(
        &[
            "predict",
            "--input",
            "g.tsv",
            "--method",
            "RA,SPM,PBSPM",
            "--realizations",
            "2",
            "--out-dir",
            "three",
        ],
        dir.path(),
    );
    let (_, rows) = read_csv(&dir.path().join("three/predict.csv"));
    let methods: Vec<_> = rows.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(methods, ["RA", "SPM", "PBSPM"]);
    validate(&dir.path().join("three/predict.json"));
}

#[test]
fn top_list_matches_reported_precision() {
    let dir = workdir(60);
    ok(
        &["predict", "--input", "g.tsv", "--method", "RA", "--out-dir", "out"],
        dir.path(),
    );
    let json = read_json(&dir.path().join("out/predict.json"));
    let report = &json["reports"][0];
    let l = report["l"].as_u64().unwrap() as usize;
    let text = std::fs::read_to_string(dir.path().join("out/top_RA.txt")).unwrap();
    let lines: Vec<Vec<&str>> = text.lines().map(|l| l.split('\t').collect()).collect();
    assert_eq!(lines.len(), l);
    for (k, fields) in lines.iter().enumerate() {
        assert_eq!(fields.len(), 5);
        assert_eq!(fields[0], (k + 1).to_string());
    }
    let hits = lines.iter().filter(|f| f[4] == "1").count();
    let precision = report["mean_precision"].as_f64().unwrap();
    assert!((hits as f64 / l as f64 - precision).abs() < 1e-12);
}

#[test]
fn csv_numbers_are_rounded_and_json_is_not() {
    let dir = workdir(60);
    ok(
        &["predict", "--input", "g.tsv", "--method", "AA", "--out-dir", "out"],
        dir.path(),
    );
    let (header, rows) = read_csv(&dir.path().join("out/predict.csv"));
    let col = header.iter().position(|h| h == "mean_precision").unwrap();
    let json = read_json(&dir.path().join("out/predict.json"));
    let exact = json["reports"][0]["mean_precision"].as_f64().unwrap();
    let shown: f64 = rows[0][col].parse().unwrap();
    assert_eq!(shown, format!("{exact:.5e}").parse::<f64>().unwrap());
}

#[test]
fn dataset_names_are_quoted_in_csv() {
    let dir = workdir(40);
    ok(
        &[
            "predict",
            "--input",
            "g.tsv",
            "--method",
            "CN",
            "--dataset",
            "a,\"b\"",
            "--out-dir",
            "out",
        ],
        dir.path(),
    );
    let raw = std::fs::read_to_string(dir.path().join("out/predict.csv")).unwrap();
    assert!(raw.lines().nth(1).unwrap().starts_with("\"a,\"\"b\"\"\",CN,"));
    assert!(!raw.contains('\r'));
}

#[test]
fn emit_selects_output_formats() {
    let dir = workdir(40);
    ok(
        &[
            "predict",
            "--input",
            "g.tsv",
            "--method",
            "CN",
            "--emit",
            "json",
            "--out-dir",
            "out",
        ],
        dir.path(),
    );
    assert!(dir.path().join("out/predict.json").exists());
    assert!(!dir.path().join("out/predict.csv").exists());
}

#[test]
fn manifest_values_are_overridden_by_flags() {
    let dir = workdir(40);
    std::fs::write(
        dir.path().join("run.toml"),
        "input = \"g.tsv\"\nmethods = [\"CN\"]\nL = 5\nout_dir = \"from_manifest\"\n",
    )
    .unwrap();
    ok(&["predict", "--manifest", "run.toml"], dir.path());
    let json = read_json(&dir.path().join("from_manifest/predict.json"));
    assert_eq!(json["reports"][0]["l"], 5);
    ok(
        &["predict", "--manifest", "run.toml", "--L", "7", "--out-dir", "flags"],
        dir.path(),
    );
    let json = read_json(&dir.path().join("flags/predict.json"));
    assert_eq!(json["reports"][0]["l"], 7);
}

#[test]
fn sweep_writes_curves() {
    let dir = workdir(40);
    ok(
        &[
            "sweep",
            "--input",
            "g.tsv",
            "--method",
            "PBSPM",
            "--alpha",
            "0:10:1",
            "--p-fresher",
            "0.05,0.1",
            "--m-grid",
            "all",
            "--realizations",
            "2",
            "--dataset",
            "g",
            "--out-dir",
            "out",
        ],
        dir.path(),
    );
    for tag in ["0.05", "0.1"] {
        let (header, rows) = read_csv(&dir.path().join(format!("out/sweep_g_pf{tag}.csv")));
        assert_eq!(header, ["alpha", "mean_precision", "std_precision"]);
        assert_eq!(rows.len(), 11);
    }
    let (header, rows) = read_csv(&dir.path().join("out/msweep_g.csv"));
    assert_eq!(header, ["m_over_n", "mean_precision"]);
    assert_eq!(rows.last().unwrap()[0], "1");

    let json = read_json(&dir.path().join("out/sweep_g.json"));
    validate(&dir.path().join("out/sweep_g.json"));
    let best = json["alpha_sweep"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|p| p["p_fresher"] == 0.05)
        .map(|p| p["report"]["mean_precision"].as_f64().unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    let full_m = json["m_sweep"].as_array().unwrap().last().unwrap()["report"]["mean_precision"]
        .as_f64()
        .unwrap();
    assert_eq!(full_m, best);
}

#[test]
fn sweep_needs_exactly_one_method() {
    let dir = workdir(40);
    let out = pbspm(&["sweep", "--input", "g.tsv", "--method", "SPM,PBSPM"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn spectrum_lists_every_eigenvalue() {
    let dir = workdir(40);
    let out = pbspm(
        &["spectrum", "--input", "g.tsv", "--dataset", "g", "--out-dir", "out"],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("selected m = "));
    let (header, rows) = read_csv(&dir.path().join("out/spectrum_g.csv"));
    assert_eq!(header, ["i", "lambda_i", "abs_lambda_i", "gap_i"]);
    let json = read_json(&dir.path().join("out/spectrum_g.json"));
    validate(&dir.path().join("out/spectrum_g.json"));
    assert_eq!(rows.len() as u64, json["n"].as_u64().unwrap());
    assert_eq!(rows.last().unwrap()[3], "");
    let abs: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!(abs.windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn diagnose_without_boost_has_zero_correlation_change() {
    let dir = workdir(40);
    ok(
        &[
            "diagnose",
            "--input",
            "g.tsv",
            "--method",
            "PBSPM",
            "--alpha",
            "0",
            "--realizations",
            "3",
            "--out-dir",
            "out",
        ],
        dir.path(),
    );
    let (header, rows) = read_csv(&dir.path().join("out/diagnose.csv"));
    assert_eq!(header, ["dataset", "mean_delta_lambda1", "delta_cc", "realizations"]);
    assert_eq!(rows[0][2], "0");
    validate(&dir.path().join("out/diagnose.json"));
}

#[test]
fn exit_codes() {
    let dir = workdir(40);
    let code = |args: &[&str]| pbspm(args, dir.path()).status.code();
    assert_eq!(code(&["--help"]), Some(0));
    assert_eq!(code(&["predict", "--input", "g.tsv", "--method", "Bogus"]), Some(1));
    assert_eq!(code(&["predict", "--input", "g.tsv", "--p-h", "1.5"]), Some(1));
    assert_eq!(code(&["predict"]), Some(1));
    assert_eq!(code(&["predict", "--input", "missing.tsv"]), Some(2));
    std::fs::write(dir.path().join("bad.tsv"), "1 2 noon\n").unwrap();
    assert_eq!(code(&["predict", "--input", "bad.tsv"]), Some(2));
    std::fs::write(dir.path().join("tiny.tsv"), "1 2 1\n2 3 2\n").unwrap();
    assert_eq!(code(&["predict", "--input", "tiny.tsv"]), Some(2));
    assert_eq!(
        code(&[
            "predict",
            "--input",
            "g.tsv",
            "--method",
            "Katz",
            "--katz-damping",
            "10"
        ]),
        Some(3)
    );
}

#[test]
fn fetch_rejects_unreachable_url() {
    let dir = tempfile::tempdir().unwrap();
    let out = pbspm(
        &[
            "fetch",
            "--url",
            "http://127.0.0.1:9/none",
            "--sha256",
            "00",
            "--output",
            "x.tsv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("x.tsv").exists());
}
