mod common;

use std::sync::Arc;

use common::golden;
use dalg::diffalg::{DiffContext, DiffPoly};
use dalg::engine::{arithmetic_multi, arithmetic_uni, multi_inputs, uni_inputs, AdeResult, MultiOptions, MultiOutcome, UniOptions};
use dalg::frontend::{
    emit_error_json, emit_json, emit_not_found_json, parse_equation_in, parse_system, print_ade, print_diffpoly, FrontendError,
    PrintStyle,
};
use serde_json::Value;

const UNI: [&str; 5] = ["circle_exp_sum.dalg", "quotient_product.dalg", "kdv.dalg", "kdv_shift.dalg", "weierstrass.dalg"];
const MULTI: [&str; 5] = ["sum_pde.dalg", "transport.dalg", "logistic.dalg", "logistic2.dalg", "normal_square.dalg"];

fn uni(name: &str) -> AdeResult {
    let sys = golden(name);
    arithmetic_uni(&uni_inputs(&sys).unwrap(), &sys.target, &sys.target_name, &UniOptions::default()).unwrap()
}

fn multi(name: &str, opts: &MultiOptions) -> MultiOutcome {
    let sys = golden(name);
    arithmetic_multi(&multi_inputs(&sys).unwrap(), &sys.target, &sys.target_name, opts).unwrap()
}

fn one_var(name: &str) -> Arc<DiffContext> {
    let mut ctx = DiffContext::new(vec!["x".into()]).unwrap();
    ctx.add_indet(name, vec![0]).unwrap();
    Arc::new(ctx)
}

#[test]
fn airy_type_equation() {
    let sys = parse_system("vars x; func y(x); D[x,x](y) - x*y = 0; z = y;").unwrap();
    let ctx = &sys.ctx;
    let y2 = DiffPoly::deriv(ctx, 0, vec![2]);
    let xy = DiffPoly::indep(ctx, 0).mul(&DiffPoly::deriv(ctx, 0, vec![0]));
    assert_eq!(sys.equations[0].poly, y2.sub(&xy));
    assert!(sys.decl.params.is_empty());
}

#[test]
fn example_inputs_and_rational_target() {
    let sys = golden("quotient_product.dalg");
    let names: Vec<&str> = sys.ctx.indets().iter().map(|i| i.name.as_str()).collect();
    assert_eq!(names, ["y1", "y2", "y3"]);
    let y = |i| DiffPoly::deriv(&sys.ctx, i, vec![0]);
    let y1p = DiffPoly::deriv(&sys.ctx, 0, vec![1]);
    assert_eq!(sys.equations[0].poly, y1p.pow(2).add(&y(0).pow(2)).sub(&DiffPoly::one(&sys.ctx)));
    assert_eq!(sys.target.num, y(0).mul(&y(2)));
    assert_eq!(sys.target.den, y(1));
    assert_eq!(sys.target_name, "z");
}

#[test]
fn rational_inputs_record_cleared_denominator() {
    let sys = parse_system("vars x; func y(x); D[x](y) = y/x + 1/2; z = y;").unwrap();
    let eq = &sys.equations[0];
    assert!(eq.poly.involves_indet(0));
    assert!(!eq.cleared.is_constant());
    assert!(sys.decl.params.is_empty());
}

#[test]
fn undeclared_names_are_parameters() {
    let sys = parse_system("vars x; func y(x); D[x](y) - a*y = 0; z = c*y;").unwrap();
    assert_eq!(sys.decl.params, ["a", "c"]);
}

#[test]
fn errors_carry_positions() {
    type Check = fn(&FrontendError) -> bool;
    let cases: [(&str, Check); 5] = [
        ("vars x;\nfunc y(x);\nD[x](y) + * y = 0;\nz = y;", |e| matches!(e, FrontendError::Syntax { line: 3, .. })),
        ("vars x; func y(x); y^x = 0; z = y;", |e| matches!(e, FrontendError::NonIntegerExponent { line: 1, .. })),
        ("vars x; func y(x); y^2.5 = 0; z = y;", |e| matches!(e, FrontendError::NonIntegerExponent { line: 1, col: 22 })),
        ("vars x; func y(x);\nD[x](y) - y/0 = 0; z = y;", |e| matches!(e, FrontendError::DivisionByZero { line: 2, .. })),
        ("vars x; func y(x); D[x](x) - y = 0; z = y;", |e| matches!(e, FrontendError::IndependentAsFunction { .. })),
    ];
    for (text, check) in cases {
        let err = parse_system(text).unwrap_err();
        assert!(check(&err), "{text:?} gave {err:?}");
    }
    let msg = parse_system("vars x;\n  @").unwrap_err().to_string();
    assert!(msg.contains("2:3"), "{msg}");
}

#[test]
fn printing_rules() {
    let ctx = one_var("z");
    let p = parse_equation_in("z - 1 = 0", &ctx).unwrap().num;
    assert_eq!(format!("{} = 0", print_diffpoly(&p, PrintStyle::Ascii)), "z - 1 = 0");
    let mut ctx = DiffContext::new(vec!["x1".into(), "x2".into()]).unwrap();
    ctx.add_indet("z", vec![0, 1]).unwrap();
    let ctx = Arc::new(ctx);
    assert_eq!(print_diffpoly(&DiffPoly::deriv(&ctx, 0, vec![1, 1]), PrintStyle::Ascii), "D[x1,x2](z)");
    let latex = print_diffpoly(&DiffPoly::deriv(&ctx, 0, vec![1, 1]), PrintStyle::Latex);
    assert!(latex.contains("\\partial"), "{latex}");
}

#[test]
fn sum_equation_prints_canonically() {
    let sys = golden("circle_exp_sum.dalg");
    let opts = UniOptions { lho_mode: dalg::engine::LhoMode::ForceNonLho, ..Default::default() };
    let res = arithmetic_uni(&uni_inputs(&sys).unwrap(), &sys.target, &sys.target_name, &opts).unwrap();
    let text = print_ade(&res, PrintStyle::Ascii);
    assert_eq!(text, "D[x,x](z)^2 - 2*D[x](z)*D[x,x](z) + 2*D[x](z)^2 - 2*z*D[x](z) + z^2 - 2 = 0");
    let v: Value = serde_json::from_str(&emit_json(&res)).unwrap();
    assert_eq!(v["status"], "ok");
    assert_eq!(v["order"], 2);
    assert_eq!(v["degree"], 2);
    assert_eq!(v["poly"].as_str().unwrap(), text.trim_end_matches(" = 0"));
    assert_eq!(v["terms"].as_array().unwrap().len(), 6);
    assert_eq!(v["terms"][0]["monomial"][0][0], "D[x,x](z)");
    assert_eq!(v["options"]["lho"], "false");
    assert!(v["elapsed_ms"].is_u64());
}

#[test]
fn not_found_and_error_json() {
    let MultiOutcome::NotFound(nf) = multi("order_jump.dalg", &MultiOptions::default()) else { panic!("expected not found") };
    let v: Value = serde_json::from_str(&emit_not_found_json(&nf.bound, &nf.options, nf.elapsed.as_millis() as u64)).unwrap();
    assert_eq!(v["status"], "not_found");
    assert_eq!(v["bound"], serde_json::json!([3, 1]));
    let err = parse_system("vars x; = ;").unwrap_err();
    let v: Value = serde_json::from_str(&emit_error_json(&err.to_string())).unwrap();
    assert_eq!(v["status"], "error");
    assert!(v["message"].as_str().unwrap().contains("1:"));
}

fn round_trip(res: &AdeResult) {
    let text = print_ade(res, PrintStyle::Ascii);
    let back = parse_equation_in(&text, &res.ctx).unwrap();
    assert!(back.den.is_constant());
    assert_eq!(back.num, res.diff, "{text}");
}

#[test]
fn golden_results_round_trip() {
    for name in UNI {
        round_trip(&uni(name));
    }
    for name in MULTI {
        round_trip(&multi(name, &MultiOptions::default()).found().unwrap());
    }
    let raised = MultiOptions { maxord: Some(vec![4, 1]), ..Default::default() };
    round_trip(&multi("order_jump.dalg", &raised).found().unwrap());
}
