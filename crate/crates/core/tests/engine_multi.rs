mod common;

use common::{golden, matches};
use dalg::engine::{arithmetic_multi, multi_inputs, AdeOrder, MultiOptions, MultiOutcome};
use dalg::frontend::{print_ade, PrintStyle};

fn run(name: &str, opts: &MultiOptions) -> MultiOutcome {
    let sys = golden(name);
    let ades = multi_inputs(&sys).unwrap();
    arithmetic_multi(&ades, &sys.target, &sys.target_name, opts).unwrap()
}

fn found(name: &str, opts: &MultiOptions) -> dalg::engine::AdeResult {
    match run(name, opts) {
        MultiOutcome::Found(r) => *r,
        MultiOutcome::NotFound(nf) => panic!("{name}: not found within {:?}", nf.bound),
    }
}

#[test]
fn bivariate_sum() {
    let res = found("sum_pde.dalg", &MultiOptions::default());
    assert!(
        matches(
            &res,
            "(x1^2*x2 + x1 + x2)*D[x1,x2](z) + (x1^2*x2^2 + x2^2 - 1)*D[x1,x1,x2](z) + (-x1*x2^2 - x2)*D[x1,x1,x1,x2](z)"
        ),
        "{}",
        print_ade(&res, PrintStyle::Ascii)
    );
    assert_eq!(res.order, AdeOrder::Partial(vec![3, 1]));
}

#[test]
fn transport_sum() {
    let res = found("transport.dalg", &MultiOptions::default());
    assert!(
        matches(
            &res,
            "D[x,x,y](T) - D[x,y,y](T) - D[x,x,z](T) + D[y,y,z](T) + D[x,z,z](T) - D[y,z,z](T)"
        ),
        "{}",
        print_ade(&res, PrintStyle::Ascii)
    );
}

#[test]
fn logistic() {
    let res = found("logistic.dalg", &MultiOptions::default());
    assert!(matches(&res, "b*z^2 - b*z - D[x2](z)"), "{}", print_ade(&res, PrintStyle::Ascii));
    let res = found("logistic2.dalg", &MultiOptions::default());
    assert!(matches(&res, "a*b*z + a*D[x2](z) - b*D[x1](z)"), "{}", print_ade(&res, PrintStyle::Ascii));
}

#[test]
fn normal_density_square() {
    let res = found("normal_square.dalg", &MultiOptions::default());
    assert!(
        matches(&res, "-z*D[x,mu](z)*sigma^2 + D[mu](z)*D[x](z)*sigma^2 + 2*z^2"),
        "{}",
        print_ade(&res, PrintStyle::Ascii)
    );
}

#[test]
fn order_jump_default_bound_not_found() {
    assert!(matches!(run("order_jump.dalg", &MultiOptions::default()), MultiOutcome::NotFound(_)));
}

#[test]
fn order_jump_at_raised_bound() {
    let opts = MultiOptions { maxord: Some(vec![4, 1]), ..Default::default() };
    let res = found("order_jump.dalg", &opts);
    assert_eq!(res.order, AdeOrder::Partial(vec![4, 1]));
    assert!(matches(&res, common::ORDER_JUMP_41), "{}", print_ade(&res, PrintStyle::Ascii));
}
