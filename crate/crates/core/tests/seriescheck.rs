mod common;

use std::collections::BTreeMap;

use common::{expected, golden};
use dalg::engine::{arithmetic_multi, arithmetic_uni, multi_inputs, uni_inputs, AdeResult, LhoMode, MultiOptions, UniOptions};
use dalg::polyring::Rational;
use dalg::seriescheck::{certify, certify_diff, parse_series, series_arith, SeriesError, SeriesOp, TruncSeries};
use num_traits::Zero;
use proptest::prelude::*;

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn sum_ade() -> AdeResult {
    let sys = golden("circle_exp_sum.dalg");
    let opts = UniOptions { lho_mode: LhoMode::ForceNonLho, ..Default::default() };
    arithmetic_uni(&uni_inputs(&sys).unwrap(), &sys.target, &sys.target_name, &opts).unwrap()
}

fn assign(res: &AdeResult, text: &str, params: &BTreeMap<String, Rational>, t: u32) -> BTreeMap<String, TruncSeries> {
    let s = parse_series(text, res.ctx.independents(), params, t).unwrap();
    BTreeMap::from([(res.target_name().to_string(), s)])
}

#[test]
fn circle_plus_exponential_is_annihilated() {
    let res = sum_ade();
    let none = BTreeMap::new();
    assert!(certify(&res, &assign(&res, "cos(x) + exp(x)", &none, 20), &none, 20).unwrap());
    assert!(certify(&res, &assign(&res, "sin(x) - 3*exp(x)", &none, 20), &none, 20).unwrap());
}

#[test]
fn exponential_alone_is_not_annihilated() {
    let res = sum_ade();
    let none = BTreeMap::new();
    assert!(!certify(&res, &assign(&res, "exp(x)", &none, 20), &none, 20).unwrap());
}

#[test]
fn residual_constant_term_by_hand() {
    // z = z' = z'' = e^x gives 1 - 2 + 2 - 2 + 1 - 2 = -2 at the origin.
    let res = sum_ade();
    let none = BTreeMap::new();
    let r = dalg::seriescheck::residual(&res.diff, &assign(&res, "exp(x)", &none, 20), &none, 20).unwrap();
    assert_eq!(r.constant_term(), q(-2));
}

#[test]
fn too_small_truncation_is_rejected() {
    let res = sum_ade();
    let none = BTreeMap::new();
    let a = assign(&res, "cos(x) + exp(x)", &none, 20);
    assert!(matches!(certify(&res, &a, &none, 4), Err(SeriesError::InsufficientTruncation { .. })));
    assert!(matches!(certify(&res, &a, &none, 5), Err(SeriesError::InsufficientTruncation { .. })));
    assert!(certify(&res, &a, &none, 7).unwrap());
}

#[test]
fn logistic_output_annihilates_logistic_function() {
    let sys = golden("logistic.dalg");
    let res = arithmetic_multi(&multi_inputs(&sys).unwrap(), &sys.target, &sys.target_name, &MultiOptions::default())
        .unwrap()
        .found()
        .unwrap();
    let params = BTreeMap::from([("a".to_string(), q(1)), ("b".to_string(), q(1))]);
    let a = assign(&res, "1/(1 + exp(x1 + x2))", &params, 10);
    assert!(certify(&res, &a, &params, 10).unwrap());
    let wrong = assign(&res, "1/(1 + exp(x1 + 2*x2))", &params, 10);
    assert!(!certify(&res, &wrong, &params, 10).unwrap());
    assert!(matches!(certify(&res, &a, &BTreeMap::new(), 10), Err(SeriesError::MissingParameter(_))));
}

/// Series given by dense coefficient arrays, multiplied the slow way.
fn dense(l: usize, t: u32, vals: &[i64]) -> (TruncSeries, BTreeMap<Vec<u32>, Rational>) {
    let idx = indices(l, t);
    let map: BTreeMap<Vec<u32>, Rational> = idx.into_iter().zip(vals.iter()).map(|(i, &v)| (i, q(v))).collect();
    (TruncSeries::from_terms(l, t, map.clone()), map)
}

fn indices(l: usize, t: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..l {
        out = out.into_iter().flat_map(|p| (0..=t).map(move |k| [p.clone(), vec![k]].concat())).collect();
    }
    out.retain(|i| i.iter().sum::<u32>() <= t);
    out
}

fn naive_mul(l: usize, t: u32, a: &BTreeMap<Vec<u32>, Rational>, b: &BTreeMap<Vec<u32>, Rational>) -> Vec<Rational> {
    indices(l, t)
        .into_iter()
        .map(|k| {
            let mut acc = q(0);
            for i in indices(l, t) {
                if i.iter().zip(&k).all(|(x, y)| x <= y) {
                    let j: Vec<u32> = k.iter().zip(&i).map(|(y, x)| y - x).collect();
                    acc += &a[&i] * &b[&j];
                }
            }
            acc
        })
        .collect()
}

fn shape() -> impl Strategy<Value = (usize, u32, Vec<i64>, Vec<i64>)> {
    (1usize..=2, 0u32..=8).prop_flat_map(|(l, t)| {
        let n = indices(l, t).len();
        (Just(l), Just(t), prop::collection::vec(-4i64..=4, n), prop::collection::vec(-4i64..=4, n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn arithmetic_matches_dense_convolution((l, t, va, vb) in shape()) {
        let (a, ma) = dense(l, t, &va);
        let (b, mb) = dense(l, t, &vb);
        let prod = series_arith(SeriesOp::Mul, &a, Some(&b)).unwrap();
        let sum = series_arith(SeriesOp::Add, &a, Some(&b)).unwrap();
        for (k, want) in indices(l, t).into_iter().zip(naive_mul(l, t, &ma, &mb)) {
            prop_assert_eq!(prod.coeff(&k), want);
            prop_assert_eq!(sum.coeff(&k), &ma[&k] + &mb[&k]);
        }
        if !a.constant_term().is_zero() {
            let r = series_arith(SeriesOp::Reciprocal, &a, None).unwrap();
            let one = r.mul(&a).unwrap();
            prop_assert_eq!(one, TruncSeries::constant(l, t, q(1)));
        }
        for axis in 0..l {
            let d = series_arith(SeriesOp::PartialDerive(axis), &a, None).unwrap();
            prop_assert_eq!(d.trusted(), t as i64 - 1);
            for k in indices(l, t) {
                let mut up = k.clone();
                up[axis] += 1;
                let want = ma.get(&up).map(|c| c * q(up[axis] as i64)).unwrap_or_else(|| q(0));
                prop_assert_eq!(d.coeff(&k), want);
            }
        }
    }

    /// Multiples of an annihilator stay annihilators and so do their sums.
    #[test]
    fn substitution_is_additive(u in prop::collection::vec(-3i64..=3, 3), v in prop::collection::vec(-3i64..=3, 3)) {
        let res = sum_ade();
        let none = BTreeMap::new();
        let a = assign(&res, "cos(x) + exp(x)", &none, 20);
        let mult = |w: &[i64]| expected(&res, &format!("{} + {}*z + {}*D[x](z)", w[0], w[1], w[2]));
        let (p, r) = (res.diff.mul(&mult(&u)), res.diff.mul(&mult(&v)));
        if !p.is_zero() && !r.is_zero() && !p.add(&r).is_zero() {
            prop_assert!(certify_diff(&p, &a, &none, 20).unwrap());
            prop_assert!(certify_diff(&r, &a, &none, 20).unwrap());
            prop_assert!(certify_diff(&p.add(&r), &a, &none, 20).unwrap());
        }
        let other = expected(&res, "D[x](z) - 2*z");
        let (rp, ro, rs) = (
            dalg::seriescheck::residual(&p, &a, &none, 20).unwrap(),
            dalg::seriescheck::residual(&other, &a, &none, 20).unwrap(),
            dalg::seriescheck::residual(&p.add(&other), &a, &none, 20).unwrap(),
        );
        prop_assert_eq!(rp.add(&ro).unwrap(), rs);
    }
}
