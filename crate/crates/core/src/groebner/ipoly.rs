//! Fraction-free polynomials keyed by compiled order keys, the working
//! format of the Buchberger loop.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::coeff::Coeff;
use crate::polyring::{CompiledOrder, Monomial, Poly, Rational};

#[derive(Clone, Debug)]
pub(crate) struct Term<C> {
    pub key: Box<[i32]>,
    pub c: C,
}

/// Terms sorted strictly descending by key; coefficients nonzero.
#[derive(Clone, Debug)]
pub(crate) struct IPoly<C> {
    pub terms: Vec<Term<C>>,
}

impl<C> Default for IPoly<C> {
    fn default() -> Self {
        IPoly { terms: Vec::new() }
    }
}

impl<C: Coeff> IPoly<C> {
    /// Variables the order leaves unranked go into the coefficients.
    pub fn from_poly(p: &Poly, ord: &CompiledOrder) -> IPoly<C> {
        let mut groups: BTreeMap<Box<[i32]>, Vec<(BigInt, Monomial)>> = BTreeMap::new();
        for (c, m) in p.to_integer_terms() {
            let key = ord.key(&m).into_boxed_slice();
            let rest = Monomial::from_pairs(m.iter().filter(|(v, _)| !ord.is_ranked(*v)));
            groups.entry(key).or_default().push((c, rest));
        }
        let terms = groups
            .into_iter()
            .rev()
            .filter_map(|(key, parts)| {
                let mut c: Option<C> = None;
                for (k, m) in parts {
                    let t = C::from_entry(k, m);
                    c = Some(match c {
                        None => t,
                        Some(acc) => acc.add(&t),
                    });
                }
                c.filter(|c| !c.is_zero()).map(|c| Term { key, c })
            })
            .collect();
        let mut out = IPoly { terms };
        out.make_primitive();
        out
    }

    pub fn to_poly(&self, ord: &CompiledOrder, like: &Poly) -> Poly {
        let t = like.table();
        Poly::from_terms(
            t,
            self.terms.iter().flat_map(|tm| {
                let m = ord.monomial(&tm.key);
                tm.c.expand().into_iter().map(move |(c, cm)| (Rational::from_integer(c), m.mul(&cm)))
            }),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> &Term<C> {
        &self.terms[0]
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn content(&self) -> C {
        let mut g = self.terms[0].c.clone();
        for t in &self.terms[1..] {
            if g.is_one() {
                break;
            }
            g = g.gcd(&t.c);
        }
        g.gcd(&g)
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn make_primitive(&mut self) {
        if self.terms.is_empty() {
            return;
        }
        let mut g = self.content();
        if self.terms[0].c.is_negative() {
            g = g.neg();
        }
        if !g.is_one() {
            for t in &mut self.terms {
                t.c = t.c.div_exact(&g);
            }
        }
    }

    pub fn max_bits(&self) -> u64 {
        self.terms.iter().map(|t| t.c.bits()).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].key.iter().all(|&k| k == 0)
    }
}

pub(crate) fn add_keys(a: &[i32], b: &[i32]) -> Box<[i32]> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn sub_keys(a: &[i32], b: &[i32]) -> Box<[i32]> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `a*p - b*shift*q`, merged in descending key order.
pub(crate) fn lin_comb<C: Coeff>(p: &[Term<C>], a: &C, q: &[Term<C>], b: &C, shift: &[i32]) -> Vec<Term<C>> {
    let mut out = Vec::with_capacity(p.len() + q.len());
    let mut i = 0;
    let mut j = 0;
    let a_one = a.is_one();
    let mut qkey: Option<Box<[i32]>> = q.first().map(|t| add_keys(&t.key, shift));
    while i < p.len() || j < q.len() {
        let ord = match (&qkey, i < p.len()) {
            (None, _) => std::cmp::Ordering::Greater,
            (Some(_), false) => std::cmp::Ordering::Less,
            (Some(k), true) => p[i].key.as_ref().cmp(k.as_ref()),
        };
        match ord {
            std::cmp::Ordering::Greater => {
                let c = if a_one { p[i].c.clone() } else { p[i].c.mul(a) };
                out.push(Term { key: p[i].key.clone(), c });
                i += 1;
            }
            std::cmp::Ordering::Less => {
                let c = q[j].c.mul(b).neg();
                out.push(Term { key: qkey.take().unwrap(), c });
                j += 1;
                qkey = q.get(j).map(|t| add_keys(&t.key, shift));
            }
            std::cmp::Ordering::Equal => {
                let pc = if a_one { p[i].c.clone() } else { p[i].c.mul(a) };
                let c = pc.sub(&q[j].c.mul(b));
                if !c.is_zero() {
                    out.push(Term { key: qkey.take().unwrap(), c });
                }
                i += 1;
                j += 1;
                qkey = q.get(j).map(|t| add_keys(&t.key, shift));
            }
        }
    }
    out
}

/// S-polynomial of two primitive polynomials.
pub(crate) fn spoly<C: Coeff>(f: &IPoly<C>, g: &IPoly<C>, ord: &CompiledOrder) -> IPoly<C> {
    let l = ord.key_lcm(&f.lead().key, &g.lead().key);
    let sf = sub_keys(&l, &f.lead().key);
    let sg = sub_keys(&l, &g.lead().key);
    let gc = f.lead().c.gcd(&g.lead().c);
    let a = g.lead().c.div_exact(&gc);
    let b = f.lead().c.div_exact(&gc);
    let fs: Vec<Term<C>> = f.terms[1..].iter().map(|t| Term { key: add_keys(&t.key, &sf), c: t.c.clone() }).collect();
    IPoly { terms: lin_comb(&fs, &a, &g.terms[1..], &b, &sg) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(k: &[i32], c: i64) -> Term<BigInt> {
        Term { key: k.into(), c: BigInt::from(c) }
    }

    #[test]
    fn linear_combination_merges_and_cancels() {
        let p = vec![t(&[2], 1), t(&[1], 3), t(&[0], 1)];
        let q = vec![t(&[1], 1), t(&[0], 1)];
        // 2*p - 3*x*q = 2x^2 + 6x + 2 - 3x^2 - 3x
        let r = lin_comb(&p, &BigInt::from(2), &q, &BigInt::from(3), &[1]);
        let got: Vec<(i32, i64)> = r.iter().map(|t| (t.key[0], i64::try_from(&t.c).unwrap())).collect();
        assert_eq!(got, vec![(2, -1), (1, 3), (0, 2)]);
    }
}
