use std::sync::Arc;

use dalg::groebner::{
    eliminate, groebner_basis, ideal_member, is_groebner, saturate, ElimStrategy, Ideal,
};
use dalg::polyring::{int, rat, Monomial, MonomialOrder, Poly, VarDesc, VarTable};
use proptest::prelude::*;

fn table(names: &[&str]) -> Arc<VarTable> {
    let mut t = VarTable::with_indeterminates(names.iter().map(|s| s.to_string()).collect());
    for i in 0..names.len() {
        t.push(VarDesc::Deriv { indet: i, index: vec![0] }).unwrap();
    }
    Arc::new(t)
}

fn k(t: &Arc<VarTable>, n: i64) -> Poly {
    Poly::constant(t, int(n))
}

fn lex2() -> MonomialOrder {
    MonomialOrder::Lex(vec![0, 1])
}

fn contains(basis: &[Poly], p: &Poly, ord: &MonomialOrder) -> bool {
    let q = p.normalize(ord).unwrap();
    basis.contains(&q)
}

#[test]
fn circle_meets_diagonal() {
    let t = table(&["x", "y"]);
    let (x, y) = (Poly::var(&t, 0), Poly::var(&t, 1));
    let f = vec![x.pow(2).add(&y.pow(2)).sub(&k(&t, 1)), x.sub(&y)];
    let gb = groebner_basis(&f, &lex2()).unwrap();
    assert!(contains(&gb, &y.pow(2).scale(&int(2)).sub(&k(&t, 1)), &lex2()));
    assert!(contains(&gb, &x.sub(&y), &lex2()));
    assert!(is_groebner(&gb, &lex2()).unwrap());
}

#[test]
fn single_generator() {
    let t = table(&["x", "y"]);
    let x = Poly::var(&t, 0);
    for ord in [lex2(), MonomialOrder::DegRevLex(vec![1, 0])] {
        assert_eq!(groebner_basis(std::slice::from_ref(&x), &ord).unwrap(), vec![x.clone()]);
    }
}

#[test]
fn hyperbola_and_square_roots() {
    let t = table(&["x", "y"]);
    let (x, y) = (Poly::var(&t, 0), Poly::var(&t, 1));
    let f = vec![x.mul(&y).sub(&k(&t, 1)), y.pow(2).sub(&k(&t, 1))];
    let gb = groebner_basis(&f, &lex2()).unwrap();
    assert!(contains(&gb, &x.sub(&y), &lex2()));
    assert!(contains(&gb, &y.pow(2).sub(&k(&t, 1)), &lex2()));
}

#[test]
fn saturation_examples() {
    let t = table(&["x", "z"]);
    let (x, z) = (Poly::var(&t, 0), Poly::var(&t, 1));
    assert_eq!(saturate(&[x.mul(&z)], &x, &lex2()).unwrap(), vec![z.clone()]);
    assert_eq!(saturate(&[z.pow(2)], &z, &lex2()).unwrap(), vec![Poly::one(&t)]);
    assert_eq!(saturate(&[x.pow(2).sub(&x)], &x, &lex2()).unwrap(), vec![x.sub(&k(&t, 1))]);
}

#[test]
fn elimination_examples() {
    let t = table(&["x", "y"]);
    let (x, y) = (Poly::var(&t, 0), Poly::var(&t, 1));
    let f = vec![x.pow(2).add(&y.pow(2)).sub(&k(&t, 1)), x.sub(&y)];
    for s in [ElimStrategy::Lex, ElimStrategy::LexDeg] {
        let e = eliminate(&f, &[1], s, None).unwrap();
        assert_eq!(e, vec![y.pow(2).scale(&int(2)).sub(&k(&t, 1))]);
        assert_eq!(eliminate(&[x.sub(&y)], &[0, 1], s, None).unwrap(), vec![x.sub(&y)]);
    }
    let t3 = table(&["t", "x"]);
    let (tt, xx) = (Poly::var(&t3, 0), Poly::var(&t3, 1));
    let e = eliminate(&[tt.mul(&xx).sub(&k(&t3, 1))], &[1], ElimStrategy::Lex, None).unwrap();
    assert!(e.is_empty());
}

#[test]
fn elimination_rejects_dropping_parameters() {
    let mut t = VarTable::with_indeterminates(vec!["y".into()]);
    t.push(VarDesc::Deriv { indet: 0, index: vec![0] }).unwrap();
    t.push(VarDesc::Parameter("c".into())).unwrap();
    let t = Arc::new(t);
    let f = vec![Poly::var(&t, 0).sub(&Poly::var(&t, 1))];
    assert!(eliminate(&f, &[0], ElimStrategy::Lex, None).is_err());
}

#[test]
fn membership_examples() {
    let t = table(&["x", "y"]);
    let (x, y) = (Poly::var(&t, 0), Poly::var(&t, 1));
    let i = Ideal::new(vec![x.sub(&y)], lex2());
    assert!(ideal_member(&x.pow(2).sub(&y.pow(2)), &i).unwrap());
    assert!(!ideal_member(&x.add(&k(&t, 1)), &i).unwrap());
    let j = Ideal::new(vec![x.pow(2).add(&y.pow(2)).sub(&k(&t, 1)), x.sub(&y)], lex2());
    assert!(ideal_member(&y.pow(2).scale(&int(2)).sub(&k(&t, 1)), &j).unwrap());
}

#[test]
fn saturation_generators_are_quotient_members() {
    // <x^2 y - x y^2, x^3> saturated by x
    let t = table(&["x", "y"]);
    let (x, y) = (Poly::var(&t, 0), Poly::var(&t, 1));
    let f = vec![x.pow(2).mul(&y).sub(&x.mul(&y.pow(2))), x.pow(3).mul(&y).add(&y.pow(2))];
    let sat = saturate(&f, &x, &lex2()).unwrap();
    let base = Ideal::new(f.clone(), lex2());
    let back = Ideal::new(sat.clone(), lex2());
    for g in &sat {
        let maxdeg = g.total_degree().max(1);
        assert!((0..=2 * maxdeg).any(|e| ideal_member(&x.pow(e).mul(g), &base).unwrap()));
    }
    for p in &f {
        assert!(ideal_member(p, &back).unwrap());
    }
}

/// Textbook Buchberger over rationals: all pairs, no criteria.
fn naive_buchberger(f: &[Poly], ord: &MonomialOrder) -> Vec<Poly> {
    let c = ord.compile(ord.nvars()).unwrap();
    let mut g: Vec<Poly> = f.iter().filter(|p| !p.is_zero()).cloned().collect();
    let mut pairs: Vec<(usize, usize)> = (0..g.len()).flat_map(|i| (0..i).map(move |j| (j, i))).collect();
    while let Some((i, j)) = pairs.pop() {
        let (ci, mi) = g[i].leading_term(&c).unwrap();
        let (cj, mj) = g[j].leading_term(&c).unwrap();
        let l = mi.lcm(&mj);
        let s = g[i]
            .mul_monomial(&(ci.recip()), &l.div(&mi).unwrap())
            .sub(&g[j].mul_monomial(&(cj.recip()), &l.div(&mj).unwrap()));
        let (r, _) = s.reduce(&g, ord).unwrap();
        if !r.is_zero() {
            let n = g.len();
            pairs.extend((0..n).map(|a| (a, n)));
            g.push(r);
        }
    }
    g
}

fn small_poly(t: &Arc<VarTable>) -> impl Strategy<Value = Poly> {
    let t = t.clone();
    let nv = t.len();
    prop::collection::vec((-5i64..=5, prop::collection::vec(0u32..=3, nv)), 1..=4).prop_map(move |ts| {
        Poly::from_terms(
            &t,
            ts.into_iter().filter(|(_, e)| e.iter().sum::<u32>() <= 3).map(|(c, e)| (rat(c, 1), Monomial::from_dense(&e))),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn agrees_with_naive_oracle(fs in prop::collection::vec(small_poly(&table(&["a", "b", "c"])), 1..=3), drl in any::<bool>()) {
        let ord = if drl { MonomialOrder::DegRevLex(vec![0, 1, 2]) } else { MonomialOrder::Lex(vec![0, 1, 2]) };
        let fs: Vec<Poly> = fs.into_iter().filter(|p| !p.is_zero()).collect();
        prop_assume!(!fs.is_empty());
        let gb = match groebner_basis(&fs, &ord) {
            Ok(gb) => gb,
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert!(is_groebner(&gb, &ord).unwrap());
        let naive = naive_buchberger(&fs, &ord);
        for p in &naive {
            prop_assert!(p.reduce(&gb, &ord).unwrap().0.is_zero());
        }
        for p in &gb {
            prop_assert!(p.reduce(&naive, &ord).unwrap().0.is_zero());
        }
        for p in &fs {
            prop_assert!(p.reduce(&gb, &ord).unwrap().0.is_zero());
        }
    }
}
