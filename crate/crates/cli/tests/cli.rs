use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use spectra_cli::config::{DioParams, FacesParams, KestenParams};
use spectra_cli::{load_config, load_measure, CliError, ExperimentConfig, Format};
use spectra_core::walkdio::WalkError;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spectra"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn spectra(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_out(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const HALF_TURN: &str = r#"[["3/5","-4/5","0"],["4/5","3/5","0"],["0","0","1"]]"#;
const HALF_TURN_INV: &str = r#"[["3/5","4/5","0"],["-4/5","3/5","0"],["0","0","1"]]"#;

fn measure_text(w1: &str, w2: &str, e00: &str) -> String {
    let first = HALF_TURN.replacen("\"3/5\"", &format!("\"{e00}\""), 1);
    format!(
        r#"{{"group":"SO3","symmetric":true,"atoms":[{{"matrix":{first},"weight":"{w1}"}},{{"matrix":{HALF_TURN_INV},"weight":"{w2}"}}]}}"#
    )
}

#[test]
fn kesten_two_generators() {
    let r = json_out(&spectra(&["kesten", "--generators", "2", "--nmax", "30"]));
    let s = &r["results"]["summary"];
    let theory = s["theory"].as_f64().unwrap();
    assert!((theory - 3f64.sqrt() / 2.0).abs() < 1e-12);
    assert!(s["relative_error"].as_f64().unwrap() < 0.02);
    assert_eq!(r["results"]["rows"][0]["return_probability"], 0.25);
}

#[test]
fn faces_verify_b_up_to_rank_four() {
    let r = json_out(&spectra(&["faces-verify", "--family", "B", "--max-rank", "4"]));
    let rows = r["results"]["rows"].as_array().unwrap();
    // 2^r − 1 faces for r = 2, 3, 4.
    assert_eq!(rows.len(), 3 + 7 + 15);
    assert!(rows.iter().all(|row| row["verdict"] == true));
    for key in ["support", "m", "omega_x", "intersection_size"] {
        assert!(rows[0].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn missing_measure_file_is_a_usage_error() {
    let out = spectra(&["harm-gap", "--measure", "/nonexistent/measure.json"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("cli::InvalidMeasureFile"), "{err}");
}

#[test]
fn run_with_missing_measure_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(&dir, "cfg.json", r#"{"command":"flatten","params":{"measure":"/nonexistent.json"},"seed":3}"#);
    let out = spectra(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("InvalidMeasureFile"));
}

#[test]
fn unknown_command_in_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(&dir, "cfg.json", r#"{"command":"frobnicate","seed":3}"#);
    assert!(matches!(load_config(&cfg), Err(CliError::UnknownCommand(c)) if c == "frobnicate"));
    let out = spectra(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cli::UnknownCommand"));
}

#[test]
fn usage_and_domain_exit_codes() {
    assert_eq!(spectra(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(spectra(&["kesten", "--generators", "many"]).status.code(), Some(1));
    let out = spectra(&["kesten", "--generators", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("walkdio::BadParameter"));
}

#[test]
fn symmetric_pair_loads() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "m.json", &measure_text("1/2", "1/2", "3/5"));
    let mu = load_measure(&p).unwrap();
    assert_eq!(mu.atoms.len(), 2);
    assert!(mu.symmetric);
}

#[test]
fn unnormalised_weights_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "m.json", &measure_text("1/2", "1/3", "3/5"));
    match load_measure(&p) {
        Err(CliError::InvalidMeasureFile { source_code: Some(("walkdio", "NotProbability")), .. }) => {}
        other => panic!("{other:?}"),
    }
}

#[test]
fn zero_denominator_reports_pointer() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "m.json", &measure_text("1/2", "1/2", "1/0"));
    match load_measure(&p) {
        Err(CliError::InvalidMeasureFile { detail, source_code: Some(("walkdio", "ParseError")), .. }) => {
            assert!(detail.contains("/atoms/0/matrix/0/0"), "{detail}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn declared_symmetric_without_inverse() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!(r#"{{"group":"SO3","symmetric":true,"atoms":[{{"matrix":{HALF_TURN},"weight":"1"}}]}}"#);
    let p = write(&dir, "m.json", &text);
    assert!(matches!(
        load_measure(&p),
        Err(CliError::InvalidMeasureFile { source_code: Some(("walkdio", "NotSymmetric")), .. })
    ));
}

#[test]
fn syntax_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "m.json", "{\n  \"group\": \"SO3\",\n  \"atoms\": [,]\n}");
    match load_measure(&p) {
        Err(CliError::InvalidMeasureFile { detail, source_code: None, .. }) => assert!(detail.contains("line 3"), "{detail}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn shipped_inputs_load() {
    for m in ["generic.json", "torus.json", "golden_su2.json"] {
        load_measure(&data(m)).unwrap_or_else(|e| panic!("{m}: {e}"));
    }
    spectra_cli::load_ensemble(&data("sanov.json")).unwrap();
    spectra_cli::load_ensemble(&data("stabilizing.json")).unwrap();
    spectra_cli::load_generators(&data("block4.json")).unwrap();
}

#[test]
fn config_round_trips() {
    let configs = [
        ExperimentConfig {
            command: spectra_cli::Command::Kesten(KestenParams { generators: 3, nmax: 12 }),
            seed: 9,
            output: None,
            format: Format::Csv,
        },
        ExperimentConfig {
            command: spectra_cli::Command::FacesVerify(FacesParams { family: Some("E".parse().unwrap()), max_rank: 6 }),
            seed: 0,
            output: Some("out.json".into()),
            format: Format::Json,
        },
        ExperimentConfig {
            command: spectra_cli::Command::DioProfile(DioParams {
                measure: "m.json".into(),
                c1: 0.1,
                nmin: 5,
                nmax: 40,
                samples: 1_000_000,
            }),
            seed: u64::MAX,
            output: None,
            format: Format::Json,
        },
    ];
    for c in configs {
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<ExperimentConfig>(&text).unwrap(), c);
    }
}

#[test]
fn reports_are_byte_identical() {
    let generic = data("generic.json");
    let m = generic.to_str().unwrap();
    let args: [&[&str]; 3] = [
        &["dio-profile", "--measure", m, "--samples", "5000", "--nmax", "12", "--seed", "11"],
        &["flatten", "--measure", m, "--samples", "3000", "--exponents", "3,4", "--seed", "11"],
        &["decay", "--samples", "4000", "--nmax", "6", "--exact-up-to", "6", "--seed", "11"],
    ];
    for a in args {
        let one = spectra(a);
        let two = bin().args(a).env("SPECTRA_THREADS", "3").output().unwrap();
        assert!(one.status.success());
        assert_eq!(one.stdout, two.stdout, "{a:?}");
    }
}

#[test]
fn report_embeds_version_config_and_seed() {
    let r = json_out(&spectra(&["kesten", "--seed", "42"]));
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["tool_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(r["seed"], 42);
    assert_eq!(r["config"]["command"], "kesten");
    assert_eq!(r["config"]["seed"], 42);
    assert!(r.get("timings").is_none());
    let timed = json_out(&spectra(&["kesten", "--timings"]));
    assert!(timed["timings"]["total"].as_f64().is_some());
}

#[test]
fn run_replays_the_echoed_config() {
    let dir = tempfile::tempdir().unwrap();
    let first = json_out(&spectra(&["parseval", "--functions", "3", "--pairs", "3", "--seed", "5"]));
    let cfg = write(&dir, "cfg.json", &first["config"].to_string());
    let again = json_out(&spectra(&["run", "--config", cfg.to_str().unwrap()]));
    assert_eq!(first, again);
}

#[test]
fn csv_projects_result_rows() {
    let out = spectra(&["kesten", "--nmax", "5", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "return_probability,steps");
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[1], "0.25,2");
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    let out = spectra(&["tilde-classify", "--max-rank", "3", "--output", p.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(r["results"]["summary"]["distinct_dual_types"], serde_json::json!(["A2", "A3"]));
}

#[test]
fn certificate_and_ledger_on_block_scenario() {
    let g = data("block4.json");
    let r = json_out(&spectra(&["cert", "--generators", g.to_str().unwrap(), "--ledger-nmax", "3"]));
    let s = &r["results"]["summary"];
    assert_eq!(s["found"], true);
    assert_eq!(s["verified"], true);
    assert_eq!(s["ledger"]["integral"], true);
    assert_eq!(s["ledger"]["within_bound"], true);
}

#[test]
fn stabilising_ensemble_always_hits() {
    let e = data("stabilizing.json");
    let r = json_out(&spectra(&["decay", "--ensemble", e.to_str().unwrap(), "--samples", "500", "--nmax", "8"]));
    for row in r["results"]["rows"].as_array().unwrap() {
        assert_eq!(row["probability"], 1.0);
    }
}

#[test]
fn walk_errors_keep_module_and_code() {
    use spectra_core::Diagnostic;
    let e = CliError::Walk(WalkError::EmptyMeasure);
    assert_eq!((e.module(), e.code(), e.exit_code()), ("walkdio", "EmptyMeasure", 2));
    assert!(e.render().starts_with("error[walkdio::EmptyMeasure]"));
}
