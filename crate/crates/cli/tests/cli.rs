use std::path::PathBuf;
use std::process::{Command, Output};

fn mtk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mtk")).args(args).env_remove("MTK_CACHE_DIR").output().expect("runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = mtk(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o).trim_end().to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mtk-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn documented_examples() {
    assert_eq!(ok(&["trace", "--family", "A", "--rank", "1", "--element", "s1"]), "-t");
    assert_eq!(ok(&["hochschild", "--family", "A", "--rank", "1", "--w", "1"]), "(v^-1 + v^2 t)/(1 - v^2)");
    assert_eq!(ok(&["homfly", "--braid", "1 1 1", "--strands", "2", "--vars", "az"]), "2a^-2 + a^-2 z^2 - a^-4");
}

#[test]
fn human_mode_uses_half_powers_of_q() {
    let out = ok(&["hochschild", "--family", "A", "--rank", "1", "--w", "1", "--human"]);
    assert_eq!(out, "(q^{-1/2} + q t)/(1 - q)");
}

#[test]
fn type_b_trace_and_character_formula_agree() {
    let solver = ok(&["trace", "--family", "B", "--rank", "2", "--element", "C' 1 2"]);
    let gomi = ok(&["gomi", "--family", "B", "--rank", "2", "--element", "C' 1 2"]);
    assert_eq!(solver, gomi);
}

#[test]
fn json_output_is_parseable() {
    let out = ok(&["trace", "--family", "A", "--rank", "2", "--element", "1 2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["type"], "A2");
    assert!(v["value"].is_object() || v["value"].is_array());
    let kl = ok(&["kl", "--family", "A", "--rank", "3", "--w", "2 1 3 2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&kl).unwrap();
    let rows = v["polynomials"].as_array().unwrap();
    let e = rows.iter().find(|r| r["x"] == "e").unwrap();
    assert_eq!(e["coeffs"], serde_json::json!([1, 1]));
}

#[test]
fn output_is_deterministic() {
    let args = ["solve-trace", "--family", "B", "--rank", "2"];
    assert_eq!(ok(&args), ok(&args));
}

#[test]
fn hochschild_cutoff_reports_positivity() {
    let out = ok(&["hochschild", "--family", "B", "--rank", "2", "--w", "1 2 1 2", "--cutoff", "8"]);
    assert!(out.ends_with("positivity: pass"), "{out}");
}

#[test]
fn exit_codes() {
    assert_eq!(mtk(&["--help"]).status.code(), Some(0));
    assert_eq!(mtk(&["bogus"]).status.code(), Some(1));
    assert_eq!(mtk(&["trace", "--family", "X", "--rank", "1", "--element", "1"]).status.code(), Some(1));
    assert_eq!(mtk(&["trace", "--family", "A", "--rank", "1", "--element", "1 +"]).status.code(), Some(1));
    assert_eq!(mtk(&["trace", "--family", "A", "--rank", "2", "--element", "3"]).status.code(), Some(1));
    let missing = mtk(&["gomi", "--family", "B", "--rank", "3", "--element", "e"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("Fourier"));
}

#[test]
fn selftest_quick_passes() {
    let out = ok(&["selftest", "--level", "quick"]);
    assert!(out.ends_with("11/11 criteria passed"), "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("[PASS]")).count(), 11);
}

#[test]
fn selftest_rejects_mutated_inverse_rule() {
    let o = mtk(&["selftest", "--criterion", "1", "--mutate-inverse"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("[FAIL]  1."));
}

#[test]
fn kl_cache_round_trip_and_tamper_detection() {
    let dir = scratch("kl");
    let path = dir.join("kl-A2.txt");
    let p = path.to_str().unwrap();
    let first = ok(&["kl", "--family", "A", "--rank", "2", "--kl-cache", p]);
    assert!(path.exists());
    assert_eq!(ok(&["kl", "--family", "A", "--rank", "2", "--kl-cache", p]), first);
    let text = std::fs::read_to_string(&path).unwrap().replacen("| 1", "| 2", 1);
    std::fs::write(&path, text).unwrap();
    let o = mtk(&["selftest", "--criterion", "10", "--kl-cache", p]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("failed validation"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn cache_dir_from_environment() {
    let dir = scratch("env");
    let o = Command::new(env!("CARGO_BIN_EXE_mtk"))
        .args(["trace", "--family", "A", "--rank", "2", "--element", "C' 1 2"])
        .env("MTK_CACHE_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.join("kl-A2.txt").exists());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn homfly_vt_view_and_unknot() {
    assert_eq!(ok(&["homfly", "--braid", "1 2", "--strands", "3"]), "1");
    let vt = ok(&["homfly", "--braid", "1 1 1", "--strands", "2", "--vars", "vt"]);
    assert!(vt.starts_with("a^-4 ("), "{vt}");
}
