use num_traits::Zero;

use crate::polyring::{Poly, Rational};

/// Dense coefficients of a polynomial in the single variable `v`, lowest
/// first, or `None` when other variables occur.
fn univariate(p: &Poly, v: usize) -> Option<Vec<Rational>> {
    if p.vars().iter().any(|&u| u != v) {
        return None;
    }
    let d = p.degree_in(v);
    Some((0..=d).map(|k| p.coeff_of(v, k).constant_term()).collect())
}

fn trim(a: &mut Vec<Rational>) {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
}

fn rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let lb = b.last().expect("nonzero divisor");
    while r.len() >= b.len() && !r.is_empty() {
        let q = r.last().unwrap() / lb;
        let shift = r.len() - b.len();
        for (k, c) in b.iter().enumerate() {
            r[shift + k] -= &q * c;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn coprime(a: &[Rational], b: &[Rational]) -> bool {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    a.len() == 1
}

/// Whether `f` is invertible modulo some univariate generator in its
/// variable, in which case saturating by it changes nothing.
fn is_unit_modulo(f: &Poly, gens: &[Poly]) -> bool {
    let vars = f.vars();
    let [v] = vars.as_slice() else { return false };
    let Some(fc) = univariate(f, *v) else { return false };
    gens.iter().filter_map(|g| univariate(g, *v)).any(|gc| gc.len() > 1 && coprime(&fc, &gc))
}

/// Simplifies an elimination problem without changing its answer: drops
/// saturating factors that are units, and substitutes away eliminated
/// variables that a generator solves with a constant coefficient.
pub(crate) fn simplify(mut gens: Vec<Poly>, mut sats: Vec<Poly>, eliminable: &dyn Fn(usize) -> bool) -> (Vec<Poly>, Vec<Poly>) {
    loop {
        let found = gens.iter().enumerate().find_map(|(i, g)| {
            g.vars().into_iter().filter(|&v| eliminable(v) && g.degree_in(v) == 1).find_map(|v| {
                let c = g.coeff_of(v, 1);
                c.is_constant().then(|| (i, v, c.constant_term()))
            })
        });
        let Some((i, v, c)) = found else { break };
        let g = gens.swap_remove(i);
        let x = Poly::var(g.table(), v);
        let value = x.scale(&c).sub(&g).scale(&(Rational::from_integer(1.into()) / c));
        for p in gens.iter_mut().chain(sats.iter_mut()) {
            if p.involves(v) {
                *p = p.substitute(v, &value);
            }
        }
        gens.retain(|p| !p.is_zero());
    }
    sats.retain(|s| !s.is_constant() || s.is_zero());
    let kept: Vec<Poly> = sats.iter().filter(|s| !is_unit_modulo(s, &gens)).cloned().collect();
    (gens, kept)
}
