mod common;

use common::{golden, matches};
use dalg::engine::{arithmetic_uni, uni_inputs, AdeOrder, LhoMode, UniOptions};
use dalg::frontend::{print_ade, PrintStyle};
use dalg::groebner::ElimStrategy;

fn run(name: &str, opts: &UniOptions) -> dalg::engine::AdeResult {
    let sys = golden(name);
    let ades = uni_inputs(&sys).unwrap();
    arithmetic_uni(&ades, &sys.target, &sys.target_name, opts).unwrap()
}

#[test]
fn circle_exp_nonlho_is_second_order() {
    let opts = UniOptions { lho_mode: LhoMode::ForceNonLho, ..Default::default() };
    let res = run("circle_exp_sum.dalg", &opts);
    assert_eq!(res.order, AdeOrder::Ordinary(2));
    assert_eq!(
        print_ade(&res, PrintStyle::Ascii),
        "D[x,x](z)^2 - 2*D[x](z)*D[x,x](z) + 2*D[x](z)^2 - 2*z*D[x](z) + z^2 - 2 = 0"
    );
}

#[test]
fn circle_exp_diff_first_is_linear() {
    let opts = UniOptions { diff_first: true, ..Default::default() };
    let res = run("circle_exp_sum.dalg", &opts);
    assert!(matches(&res, "D[x,x,x](z) - D[x,x](z) + D[x](z) - z"), "{}", print_ade(&res, PrintStyle::Ascii));
}

#[test]
fn kdv_affine_transform() {
    let res = run("kdv.dalg", &UniOptions::default());
    assert!(matches(&res, "6*w*D[x](w) + (-c*C1 - 6*C2)*D[x](w) + C1*D[x,x,x](w)"), "{}", print_ade(&res, PrintStyle::Ascii));
}

#[test]
fn kdv_shift_transform() {
    let res = run("kdv_shift.dalg", &UniOptions::default());
    assert!(matches(&res, "6*w*D[x](w) - D[x,x,x](w)"), "{}", print_ade(&res, PrintStyle::Ascii));
}

#[test]
fn weierstrass_transform() {
    let res = run("weierstrass.dalg", &UniOptions::default());
    assert!(
        matches(&res, "216*v^3 - 108*c*v^2 + (18*c^2 - 216*g2)*v + 108*D[x](v)^2 - c^3 + 36*c*g2 + 432*g3"),
        "{}",
        print_ade(&res, PrintStyle::Ascii)
    );
}

#[test]
fn circle_exp_separants_zeros() {
    let opts = UniOptions { separants_zeros: true, lho_mode: LhoMode::ForceNonLho, ..Default::default() };
    let res = run("circle_exp_sum.dalg", &opts);
    assert!(!res.warnings.is_empty());
    let sum_ade = common::expected(&res, "D[x,x](z)^2 - 2*D[x](z)*D[x,x](z) + 2*D[x](z)^2 - 2*z*D[x](z) + z^2 - 2");
    let f1 = common::expected(&res, "D[x](z) - z + 1");
    let f2 = common::expected(&res, "D[x](z) - z - 1");
    for f in [&sum_ade, &f1, &f2] {
        assert!(res.diff.exact_divide(f).is_some(), "not divisible by {f}");
    }
    assert!(res.diff.exact_divide(&sum_ade.mul(&f1).mul(&f2)).is_some());
}

#[test]
fn quotient_product_quotient_product() {
    let opts = UniOptions { ordering: Some(ElimStrategy::LexDeg), ..Default::default() };
    let res = run("quotient_product.dalg", &opts);
    assert_eq!(res.order, AdeOrder::Ordinary(3));
    assert_eq!(res.degree, 2);
    assert!(
        matches(
            &res,
            "12*z^2 + 32*D[x](z)*z + 20*D[x,x](z)*z + 6*D[x,x,x](z)*z + 24*D[x](z)^2 + 30*D[x,x](z)*D[x](z) \
             + 10*D[x,x,x](z)*D[x](z) + 9*D[x,x](z)^2 + 6*D[x,x,x](z)*D[x,x](z) + D[x,x,x](z)^2"
        ),
        "{}",
        print_ade(&res, PrintStyle::Ascii)
    );
}
