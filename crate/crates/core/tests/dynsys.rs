mod common;

use std::sync::Arc;

use common::{golden, proportional};
use dalg::diffalg::{DVar, DiffContext, DiffPoly, RatFunc};
use dalg::dynsys::{build_state_system, decompose_lho, system_polynomials, DynSystem, InputAde};
use dalg::engine::uni_inputs;
use dalg::frontend::parse_equation_in;
use dalg::polyring::Rational;
use proptest::prelude::*;

fn in_ctx(ctx: &Arc<DiffContext>, text: &str) -> DiffPoly {
    parse_equation_in(&format!("{text} = 0"), ctx).unwrap().num
}

fn system(name: &str) -> DynSystem {
    let sys = golden(name);
    build_state_system(&uni_inputs(&sys).unwrap(), &sys.target, &sys.target_name, true).unwrap()
}

fn y_ctx() -> Arc<DiffContext> {
    let mut ctx = DiffContext::new(vec!["x".into()]).unwrap();
    ctx.add_indet("y", vec![0]).unwrap();
    Arc::new(ctx)
}

#[test]
fn lho_decomposition() {
    let ctx = y_ctx();
    for (p, m, rest) in [
        ("D[x](y)^2 + y^2 - 1", 2, "y^2 - 1"),
        ("D[x](y) - y", 1, "-y"),
        ("D[x](y)^3 + D[x](y)^2 + 3", 3, "D[x](y)^2 + 3"),
    ] {
        let (deg, c, r) = decompose_lho(&in_ctx(&ctx, p)).unwrap();
        assert_eq!(deg, m, "{p}");
        assert_eq!(c.as_constant(), Some(Rational::from_integer(1.into())));
        assert_eq!(r, in_ctx(&ctx, rest));
    }
}

#[test]
fn circle_exp_state_system() {
    let s = system("circle_exp_sum.dalg");
    assert_eq!((s.dim, s.mu.clone()), (2, vec![2, 1]));
    assert_eq!(s.a, vec![in_ctx(&s.ctx, "1 - w1^2"), in_ctx(&s.ctx, "w2")]);
    assert!(s.e.iter().all(DiffPoly::is_zero));
    assert_eq!(s.b, in_ctx(&s.ctx, "w1 + w2"));
    assert!(s.q.is_constant());
    let want = ["D[x](w1)^2 + w1^2 - 1", "D[x](w2) - w2", "z - w1 - w2"];
    let got = system_polynomials(&s);
    assert_eq!(got.len(), 3);
    for (g, w) in got.iter().zip(want) {
        assert!(proportional(g, &in_ctx(&s.ctx, w)), "{g} vs {w}");
    }
}

#[test]
fn quotient_product_state_system() {
    let s = system("quotient_product.dalg");
    assert_eq!((s.dim, s.mu.clone()), (3, vec![2, 1, 3]));
    assert!(s.e[0].is_zero() && s.e[1].is_zero());
    assert_eq!(s.e[2], in_ctx(&s.ctx, "-D[x](w3)^2"));
    assert_eq!(s.b, in_ctx(&s.ctx, "w1*w3"));
    assert!(proportional(&s.q, &in_ctx(&s.ctx, "w2")));
    let want = ["D[x](w1)^2 + w1^2 - 1", "D[x](w2) - w2", "D[x](w3)^3 + D[x](w3)^2 + 3", "w2*z - w1*w3"];
    for (g, w) in system_polynomials(&s).iter().zip(want) {
        assert!(proportional(g, &in_ctx(&s.ctx, w)), "{g} vs {w}");
    }
}

#[test]
fn identity_wrapping() {
    let ctx = y_ctx();
    let ade = InputAde::new(in_ctx(&ctx, "D[x](y) - y")).unwrap();
    let r = RatFunc::poly(DiffPoly::deriv(&ctx, 0, vec![0]));
    let s = build_state_system(&[ade], &r, "z", true).unwrap();
    assert_eq!((s.dim, s.mu.clone()), (1, vec![1]));
    assert_eq!(s.b, in_ctx(&s.ctx, "w1"));
    assert!(s.q.is_constant() && s.h_factors.is_empty());
    let got = system_polynomials(&s);
    assert!(proportional(&got[0], &in_ctx(&s.ctx, "D[x](w1) - w1")));
    assert!(proportional(&got[1], &in_ctx(&s.ctx, "z - w1")));
}

/// Maps states back to derivatives of `y`.
fn reconstruct(s: &DynSystem, p: &DiffPoly, y: &Arc<DiffContext>) -> DiffPoly {
    p.map_vars(y, &|v: &DVar| match v {
        DVar::Deriv { indet, index } if *indet < s.dim => {
            let (_, j) = s.state_map[*indet];
            Some(DiffPoly::deriv(y, 0, vec![j + index[0]]))
        }
        _ => None,
    })
}

fn random_ade() -> impl Strategy<Value = (u32, Vec<(i64, u32, u32, u32)>)> {
    // (order, terms as (coefficient, exponent of y, exponent of a middle
    // derivative, exponent of the top derivative))
    (1u32..=3, prop::collection::vec((-3i64..=3, 0u32..=2, 0u32..=2, 0u32..=2), 1..5))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn top_relation_reconstructs_input((n, terms) in random_ade(), lead in 1i64..=3, top in 1u32..=3) {
        let y = y_ctx();
        let d = |k: u32| DiffPoly::deriv(&y, 0, vec![k]);
        let mut p = d(n).pow(top).scale(&Rational::from_integer(lead.into()));
        for (c, e0, e1, e2) in terms {
            let mono = d(0).pow(e0).mul(&d(n / 2).pow(e1)).mul(&d(n).pow(e2.min(top - 1)));
            p = p.add(&mono.scale(&Rational::from_integer(c.into())));
        }
        let ade = InputAde::new(p.clone()).unwrap();
        let s = build_state_system(&[ade], &RatFunc::poly(d(0)), "z", false).unwrap();
        prop_assert_eq!(s.dim, n as usize);
        for i in 0..s.dim {
            let back = reconstruct(&s, &s.state_relation(i), &y);
            if s.is_top(i) {
                prop_assert!(proportional(&back, &p), "{} vs {}", back, p);
            } else {
                prop_assert!(back.is_zero());
            }
        }
    }
}
