use std::path::PathBuf;
use std::process::Command;

use dalg_cli::{run, EXIT_ERROR, EXIT_NOT_FOUND, EXIT_OK, EXIT_USAGE};

fn golden(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden").join(name).display().to_string()
}

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv: Vec<&str> = std::iter::once("dalg").chain(args.iter().copied()).collect();
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn rank_and_unrank() {
    assert_eq!(call(&["rank", "--l", "2", "--tuple", "1,2"]), (EXIT_OK, "8\n".into(), String::new()));
    assert_eq!(call(&["rank", "--l", "2", "--index", "8"]).1, "1,2\n");
    assert_eq!(call(&["rank", "--l", "2", "--tuple", "1,2,3"]).0, EXIT_USAGE);
}

#[test]
fn uni_prints_sum_equation() {
    let (code, out, _) = call(&["uni", "-i", &golden("circle_exp_sum.dalg"), "--lho", "false"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "D[x,x](z)^2 - 2*D[x](z)*D[x,x](z) + 2*D[x](z)^2 - 2*z*D[x](z) + z^2 - 2 = 0\n");
}

#[test]
fn uni_json_and_warnings() {
    let (code, out, err) = call(&["uni", "-i", &golden("circle_exp_sum.dalg"), "--lho", "false", "--separants-zeros"]);
    assert_eq!(code, EXIT_OK);
    assert!(err.starts_with("warning:"), "{err}");
    assert!(out.ends_with("= 0\n"));
    let (code, out, _) = call(&["uni", "-i", &golden("circle_exp_sum.dalg"), "--diff-first", "--json"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("\"status\": \"ok\"") && out.contains("\"order\": 3"), "{out}");
}

#[test]
fn unary_needs_one_input() {
    assert_eq!(call(&["unary", "-i", &golden("kdv.dalg")]).0, EXIT_OK);
    assert_eq!(call(&["unary", "-i", &golden("circle_exp_sum.dalg")]).0, EXIT_USAGE);
}

#[test]
fn multi_outcomes() {
    let (code, out, _) = call(&["multi", "-i", &golden("order_jump.dalg")]);
    assert_eq!(code, EXIT_NOT_FOUND);
    assert!(out.starts_with("not found"), "{out}");
    let (code, out, _) = call(&["multi", "-i", &golden("order_jump.dalg"), "--json"]);
    assert_eq!(code, EXIT_NOT_FOUND);
    assert!(out.contains("\"not_found\""));
    let (code, out, _) = call(&["multi", "-i", &golden("sum_pde.dalg"), "--ordering", "lex"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("D[x1,x1,x1,x2](z)"), "{out}");
    assert_eq!(call(&["multi", "-i", &golden("sum_pde.dalg"), "--maxord", "3"]).0, EXIT_USAGE);
}

#[test]
fn errors_and_usage() {
    assert_eq!(call(&["uni"]).0, EXIT_USAGE);
    assert_eq!(call(&["uni", "-i", "x.dalg", "--lho", "maybe"]).0, EXIT_USAGE);
    assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
    let (code, _, err) = call(&["uni", "--text", "vars x; func y(x); D[x](y) = ; z = y;"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("1:"), "{err}");
    let (code, out, _) = call(&["uni", "-i", "/no/such/file", "--json"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(out.contains("\"error\""));
    assert_eq!(call(&["--help"]).0, EXIT_OK);
}

#[test]
fn verify_against_series() {
    let dir = tempfile::tempdir().unwrap();
    let result = dir.path().join("sum_ade.txt");
    let (_, out, _) = call(&["uni", "-i", &golden("circle_exp_sum.dalg"), "--lho", "false"]);
    std::fs::write(&result, out).unwrap();
    let r = result.display().to_string();
    let ex1 = golden("circle_exp_sum.dalg");
    let base = ["verify", "-i", ex1.as_str(), "--result", r.as_str(), "--trunc"];
    let with = |t: &str, s: &str| call(&[&base[..], &[t, "--series", s]].concat());
    assert_eq!(with("20", "cos(x) + exp(x)"), (EXIT_OK, "true\n".into(), String::new()));
    assert_eq!(with("20", "exp(x)").1, "false\n");
    assert_eq!(with("3", "cos(x) + exp(x)").0, EXIT_USAGE);

    let logistic = dir.path().join("logistic.txt");
    let (code, out, _) = call(&["multi", "-i", &golden("logistic.dalg")]);
    assert_eq!(code, EXIT_OK);
    std::fs::write(&logistic, out).unwrap();
    let (code, out, _) = call(&[
        "verify",
        "-i",
        &golden("logistic.dalg"),
        "--result",
        &logistic.display().to_string(),
        "--series",
        "1/(1 + exp(x1 + x2))",
        "--trunc",
        "10",
        "--param",
        "a=1",
        "--param",
        "b=1",
    ]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "true\n"));
}

#[test]
fn binary_output_is_deterministic() {
    let bin = env!("CARGO_BIN_EXE_dalg");
    for args in [
        vec!["uni", "-i", &golden("quotient_product.dalg")],
        vec!["multi", "-i", &golden("transport.dalg")],
        vec!["multi", "-i", &golden("order_jump.dalg")],
    ] {
        let a = Command::new(bin).args(&args).output().unwrap();
        let b = Command::new(bin).args(&args).output().unwrap();
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}
