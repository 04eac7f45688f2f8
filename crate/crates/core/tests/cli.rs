use std::path::PathBuf;

use uea_center::catalog::{catalog_get, KEYS};
use uea_center::cli::{run_args, Outcome};
use uea_center::presentation::{AlgebraPresentation, PresentationFile};

fn run(line: &str) -> Outcome {
    run_args(std::iter::once("uea-center").chain(line.split_whitespace()))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("uea-center-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_file(name: &str, text: &str) -> String {
    let path = scratch(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

/// sl2 with `[h, f] = +2f`, which breaks the Jacobi identity.
fn corrupted_sl2() -> String {
    let mut file = PresentationFile::from_presentation(&catalog_get("sl2", 0).unwrap());
    let rec = file
        .brackets
        .iter_mut()
        .find(|b| (b.i, b.j) == (2, 3))
        .expect("[h, f] record");
    rec.terms[0].c = "2".into();
    file.to_json()
}

#[test]
fn verify_heisenberg_passes() {
    let out = run("verify --catalog heisenberg3 --variant current --xdeg 0..2 --filt 3");
    assert_eq!(out.status, 0, "{}", out.stderr);
    assert_eq!(out.stdout.matches("PASS").count(), 3, "{}", out.stdout);
    assert!(!out.stdout.contains("FAIL"));
}

#[test]
fn verify_sl2_char_three_json() {
    let out = run("verify --catalog sl2 --char 3 --xdeg 0 --filt 3 --out json");
    assert_eq!(out.status, 0, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let r = &v[0];
    assert_eq!(r["verdict"], "PASS");
    assert_eq!(r["predicted_dim"], 4);
    assert_eq!(r["computed_dim"], 4);
    assert_eq!(r["field"], "GF(3)");
    assert_eq!(r["certificates"].as_array().unwrap().len(), 3);
    assert_eq!(r["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn corrupted_file_is_an_input_error() {
    let path = write_file("corrupt.json", &corrupted_sl2());
    let out = run(&format!("verify --file {path} --char 0"));
    assert_eq!(out.status, 2);
    assert!(out.stderr.contains("Jacobi"), "{}", out.stderr);
    // `validate` reports the same failure as a failed check.
    let out = run(&format!("validate --file {path}"));
    assert_eq!(out.status, 1);
    assert!(out.stdout.contains("super Jacobi fails"), "{}", out.stdout);
}

#[test]
fn division_by_zero_coefficient_is_a_parse_error() {
    let text = PresentationFile::from_presentation(&catalog_get("heisenberg3", 0).unwrap())
        .to_json()
        .replace("\"c\": \"1\"", "\"c\": \"1/0\"");
    let path = write_file("div0.json", &text);
    let out = run(&format!("validate --file {path}"));
    assert_eq!(out.status, 2);
    assert!(out.stderr.contains("brackets"), "{}", out.stderr);
}

#[test]
fn presentation_files_round_trip() {
    for key in KEYS {
        for ch in [0, 3] {
            let p = catalog_get(key, ch).unwrap();
            let path = write_file(&format!("{key}-{ch}.json"), &p.to_json());
            let loaded = AlgebraPresentation::load(&path).unwrap();
            assert_eq!(loaded, p);
            assert_eq!(
                AlgebraPresentation::from_json(&loaded.to_json()).unwrap(),
                p
            );
        }
    }
}

#[test]
fn file_and_catalog_sources_agree() {
    let p = catalog_get("gl11", 3).unwrap();
    let path = write_file("gl11.json", &p.to_json());
    let a = run("verify --catalog gl11 --char 3 --out json");
    let b = run(&format!("verify --file {path} --out json"));
    assert_eq!(a.status, 0);
    assert_eq!(a, b);
}

#[test]
fn reports_are_deterministic() {
    let args = "verify --catalog osp12 --char 3 --xdeg 0..2 --out json";
    let first = run(args);
    assert_eq!(first.status, 0, "{}", first.stderr);
    for _ in 0..3 {
        assert_eq!(run(args).stdout, first.stdout);
    }
}

#[test]
fn multiplication() {
    let out = run("mul --catalog sl2 f[0] e[0]");
    assert_eq!(out.status, 0);
    assert_eq!(out.stdout, "e[0] * f[0] - h[0]\n");
    let out = run("mul --catalog gl11 E21[0] E12[0]");
    assert_eq!(out.stdout, "-E12[0] * E21[0] + Z[0]\n");
    let out = run("mul --catalog sl2 --variant loop e[-1] f[1]");
    assert_eq!(out.status, 0);
    assert_eq!(out.stdout, "e[-1] * f[1]\n");
    let out = run("mul --catalog sl2 e[-1] f[1]");
    assert_eq!(out.status, 2);
}

#[test]
fn loop_verification_reports_truncation() {
    let out =
        run("verify --catalog sl2 --char 3 --variant loop --rrange -1..1 --len 3 --xdeg -3..3");
    assert_eq!(out.status, 0, "{}", out.stderr);
    assert_eq!(out.stdout.matches("truncated: loop slice").count(), 7);
    assert!(!out.stdout.contains("not certified"));
}

#[test]
fn loop_needs_rrange_and_current_rejects_it() {
    assert_eq!(run("verify --catalog sl2 --variant loop").status, 2);
    assert_eq!(run("verify --catalog sl2 --rrange -1..1").status, 2);
}

#[test]
fn center_predict_invariants_and_catalog() {
    let out = run("center --catalog heisenberg3");
    assert_eq!(out.status, 0);
    assert!(out.stdout.contains("dim C(L) = 1"), "{}", out.stdout);

    let out = run("predict --catalog gl11 --char 3 --xdeg 0..1");
    assert_eq!(out.status, 0);
    assert!(out.stdout.contains("H[1]^3 - H[3]"), "{}", out.stdout);
    assert!(!out.stdout.contains("NOT CERTIFIED"));

    let out = run("invariants --catalog sl2 --char 3 --xdeg 0 --filt 3 --smax 1");
    assert_eq!(out.status, 0, "{}", out.stdout);
    assert!(out.stdout.contains("PASS"));

    let out = run("catalog");
    for key in KEYS {
        assert!(out.stdout.contains(key));
    }
}

#[test]
fn adapt_and_output_file() {
    let out_path = scratch("adapted.json");
    let out = run(&format!(
        "adapt --catalog gl11 --output {}",
        out_path.display()
    ));
    assert_eq!(out.status, 0, "{}", out.stderr);
    assert!(out.stdout.is_empty());
    let adapted = AlgebraPresentation::load(&out_path).unwrap();
    assert!(adapted.validate().passed());
    assert_eq!(adapted.center_ids(), Some(&[0usize][..]));
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(run("verify --catalog nosuch").status, 2);
    assert_eq!(run("verify --catalog sl2 --xdeg 2..1").status, 2);
    assert_eq!(run("verify").status, 2);
    assert_eq!(run("frobnicate").status, 2);
    assert_eq!(
        run("verify --catalog sl2 --smax 1 --smax-policy paranoid").status,
        2
    );
}

#[test]
fn paranoid_flag_records_stability() {
    let out = run("verify --catalog gl11 --paranoid --out json");
    assert_eq!(out.status, 0, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    for r in v.as_array().unwrap() {
        assert_eq!(r["paranoid"]["stable"], true);
    }
}
