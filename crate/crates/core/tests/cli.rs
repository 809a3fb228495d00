//! The `bexc` command line: exit codes, output shape and reproducibility.

use std::path::PathBuf;
use std::process::Command;

fn bexc(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bexc")).args(args).output().expect("bexc runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn body(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bexc-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn exit_codes() {
    assert_eq!(bexc(&["--help"]).0, 0);
    assert_eq!(bexc(&["spectrum", "--u0", "0", "--k", "3"]).0, 0);
    assert_eq!(bexc(&["spectrum", "--bogus"]).0, 2);
    assert_eq!(bexc(&["pdf"]).0, 2);
    // U0 = 0 lies outside the continued range
    let (code, _, err) = bexc(&["spectrum", "--u0", "0", "--mode", "continued"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("bexc: "));
    assert_eq!(bexc(&["pdf", "--u0", "1", "--method", "airy", "--grid", "0.5:2:3"]).0, 2);
    assert_eq!(bexc(&["levy-limit", "--u0", "0.5"]).0, 2);
}

#[test]
fn spectrum_output() {
    let (code, out, _) = bexc(&["spectrum", "--u0", "0", "--k", "3"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("# bexc "));
    let rows = body(&out);
    assert_eq!(rows.len(), 4);
    let first: Vec<&str> = rows[1].split(',').collect();
    assert!((first[1].parse::<f64>().unwrap() - 2.338_107_410_459_767).abs() < 1e-8);
}

#[test]
fn output_is_reproducible() {
    for args in [
        vec!["pdf", "--u0", "1.0", "--grid", "0.2:4:40"],
        vec!["mc", "--u0", "0.5", "--n", "300", "--seed", "17"],
        vec!["moments", "--u0-range", "-0.5:2:6"],
    ] {
        let (c1, a, _) = bexc(&args);
        let (c2, b, _) = bexc(&args);
        assert_eq!((c1, c2), (0, 0), "{args:?}");
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let args = ["mc", "--u0", "1", "--n", "300", "--seed", "5"];
    let (_, a, _) = bexc(&args);
    let mut one = vec!["--threads", "1"];
    one.extend_from_slice(&args);
    let (_, b, _) = bexc(&one);
    assert_eq!(body(&a), body(&b));
}

#[test]
fn partner_drifts_print_the_same_density() {
    let (_, a, _) = bexc(&["pdf", "--u0", "2.5", "--grid", "0.3:4:30"]);
    let (_, b, _) = bexc(&["pdf", "--u0", "-4.5", "--grid", "0.3:4:30"]);
    assert_eq!(body(&a), body(&b));
}

#[test]
fn contour_and_closed_form_agree() {
    let grid = ["--grid", "0.3:4:30"];
    let (_, a, _) = bexc(&[&["pdf", "--u0", "0", "--method", "talbot"][..], &grid].concat());
    let (_, b, _) = bexc(&[&["pdf", "--u0", "0", "--method", "airy"][..], &grid].concat());
    let col = |t: &str| -> Vec<f64> { body(t)[1..].iter().map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect() };
    let (x, y) = (col(&a), col(&b));
    assert_eq!(x.len(), 30);
    for (p, q) in x.iter().zip(&y) {
        assert!((p - q).abs() < 1e-6, "{p} vs {q}");
    }
}

#[test]
fn physical_columns() {
    let (_, out, _) = bexc(&["pdf", "--u0", "0", "--d", "2", "--t", "4", "--grid", "0.5:2:3", "--physical"]);
    let rows = body(&out);
    assert!(rows[0].starts_with("area,pdf"));
    let a0 = 2f64.sqrt() * 8.0;
    let first: f64 = rows[1].split(',').next().unwrap().parse().unwrap();
    assert!((first - 0.5 * a0).abs() < 1e-12);
}

#[test]
fn moments_outputs() {
    let (code, out, _) = bexc(&["moments", "--u0", "5"]);
    assert_eq!(code, 0);
    let json: serde_json::Value = serde_json::from_str(&body(&out).join("\n")).unwrap();
    let m = &json["moments"];
    assert!((m["m2"].as_f64().unwrap() - 64.0 / 27.0).abs() < 1e-6);
    let (_, out, _) = bexc(&["moments", "--u0", "5", "--physical"]);
    let json: serde_json::Value = serde_json::from_str(&body(&out).join("\n")).unwrap();
    assert!((json["moments"]["m2"].as_f64().unwrap() - 64.0 / 27.0 * 0.5).abs() < 1e-6);
    let (code, out, _) = bexc(&["moments", "--u0-range", "0:2:3"]);
    assert_eq!(code, 0);
    let rows = body(&out);
    assert_eq!(rows[0], "u0,m1,m2,m2_linear");
    assert_eq!(rows.len(), 4);
}

#[test]
fn files_and_manifest() {
    let path = scratch("levy.csv");
    let p = path.to_str().unwrap();
    let (code, out, _) = bexc(&["levy-limit", "--u0", "-2.99", "--s-grid", "0:4:5", "--out", p]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(body(&csv)[0], "s_hat,limit,full,rel_diff");
    assert_eq!(body(&csv).len(), 6);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{p}.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["subcommand"], "levy-limit");
    assert!(manifest["wall_time_s"].as_f64().unwrap() >= 0.0);
    let (_, _, err) = bexc(&["levy-limit", "--u0", "-2.5", "--s-grid", "0:1:2"]);
    assert!(err.contains("rough guide"));
    let _ = std::fs::remove_dir_all(path.parent().unwrap());
}

#[test]
fn library_entry_point() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = bessel_excursion::cli::run(["bexc", "spectrum", "--u0", "1", "--k", "2"], &mut out, &mut err);
    assert_eq!(code, 0);
    assert!(err.is_empty());
    assert_eq!(body(std::str::from_utf8(&out).unwrap()).len(), 3);
}
