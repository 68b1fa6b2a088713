//! Coefficient domains for the Buchberger loop: the integers, and integer
//! polynomials in variables left out of the monomial order (so that the
//! basis is computed over their fraction field).

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::polyring::Monomial;

pub(crate) trait Coeff: Clone + Debug + PartialEq {
    fn from_entry(c: BigInt, m: Monomial) -> Self;
    fn expand(&self) -> Vec<(BigInt, Monomial)>;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Greatest common divisor with positive leading coefficient.
    fn gcd(&self, o: &Self) -> Self;
    /// `self / o`, which must be exact.
    fn div_exact(&self, o: &Self) -> Self;
    fn is_negative(&self) -> bool;
    fn bits(&self) -> u64;
}

impl Coeff for BigInt {
    fn from_entry(c: BigInt, m: Monomial) -> Self {
        debug_assert!(m.is_one());
        c
    }
    fn expand(&self) -> Vec<(BigInt, Monomial)> {
        vec![(self.clone(), Monomial::one())]
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn bits(&self) -> u64 {
        BigInt::bits(self)
    }
}

/// Lex on variable indices, the smallest index most significant.
fn lex(a: &Monomial, b: &Monomial) -> Ordering {
    let mut x = a.iter();
    let mut y = b.iter();
    loop {
        match (x.next(), y.next()) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some((va, ea)), Some((vb, eb))) => {
                if va != vb {
                    return vb.cmp(&va);
                }
                if ea != eb {
                    return ea.cmp(&eb);
                }
            }
        }
    }
}

/// A sparse integer polynomial, terms in descending lex order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub(crate) struct CPoly {
    terms: Vec<(Monomial, BigInt)>,
}

impl CPoly {
    fn constant(c: BigInt) -> CPoly {
        if Zero::is_zero(&c) {
            CPoly::default()
        } else {
            CPoly { terms: vec![(Monomial::one(), c)] }
        }
    }

    fn from_unsorted(mut terms: Vec<(Monomial, BigInt)>) -> CPoly {
        terms.sort_by(|a, b| lex(&b.0, &a.0));
        let mut out: Vec<(Monomial, BigInt)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !Zero::is_zero(c));
        CPoly { terms: out }
    }

    fn as_int(&self) -> Option<BigInt> {
        match self.terms.as_slice() {
            [] => Some(BigInt::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    fn scale(&self, c: &BigInt) -> CPoly {
        if Zero::is_zero(c) {
            return CPoly::default();
        }
        CPoly { terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect() }
    }

    fn int_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = Integer::gcd(&g, c);
            if One::is_one(&g) {
                break;
            }
        }
        g
    }

    fn normalized(&self) -> CPoly {
        match self.terms.first() {
            Some((_, c)) if Signed::is_negative(c) => self.neg(),
            _ => self.clone(),
        }
    }

    fn min_var(&self) -> Option<usize> {
        self.terms.iter().filter_map(|(m, _)| m.iter().next().map(|(v, _)| v)).min()
    }

    fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(v)).max().unwrap_or(0)
    }

    /// Coefficients of the powers of `v`, lowest first.
    fn univariate(&self, v: usize) -> Vec<CPoly> {
        let mut parts: Vec<Vec<(Monomial, BigInt)>> = vec![Vec::new(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            parts[e as usize].push((rest, c.clone()));
        }
        parts.into_iter().map(CPoly::from_unsorted).collect()
    }

    fn from_univariate(coeffs: &[CPoly], v: usize) -> CPoly {
        let mut terms = Vec::new();
        for (e, c) in coeffs.iter().enumerate() {
            let x = Monomial::var(v, e as u32);
            for (m, k) in &c.terms {
                terms.push((m.mul(&x), k.clone()));
            }
        }
        CPoly::from_unsorted(terms)
    }

    /// Exact quotient, if `d` divides `self`.
    fn try_div(&self, d: &CPoly) -> Option<CPoly> {
        let (dm, dc) = d.terms.first()?;
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.terms.first() {
            let qm = m.div(dm)?;
            let (qc, r) = c.div_rem(dc);
            if !Zero::is_zero(&r) {
                return None;
            }
            let t = CPoly { terms: vec![(qm.clone(), qc.clone())] };
            rem = rem.sub(&t.mul(d));
            quot.push((qm, qc));
        }
        Some(CPoly::from_unsorted(quot))
    }

    /// Gcd of the coefficients in `v`.
    fn content_in(&self, v: usize) -> CPoly {
        let mut g = CPoly::default();
        for c in self.univariate(v) {
            g = g.gcd(&c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn primitive_in(&self, v: usize) -> CPoly {
        let c = self.content_in(v);
        let p = self.div_exact(&c);
        p.normalized()
    }

    /// Pseudo-remainder of `a` by `b` as polynomials in `v`.
    fn prem(a: &CPoly, b: &CPoly, v: usize) -> CPoly {
        let bc = b.univariate(v);
        let db = bc.len() - 1;
        let lb = &bc[db];
        let mut r = a.univariate(v);
        while r.len() > db && !r.is_empty() {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            let shift = dr - db;
            for c in r.iter_mut() {
                *c = c.mul(lb);
            }
            for (k, c) in bc.iter().enumerate() {
                r[k + shift] = r[k + shift].sub(&c.mul(&lr));
            }
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        CPoly::from_univariate(&r, v)
    }
}

impl Coeff for CPoly {
    fn from_entry(c: BigInt, m: Monomial) -> Self {
        if Zero::is_zero(&c) {
            CPoly::default()
        } else {
            CPoly { terms: vec![(m, c)] }
        }
    }

    fn expand(&self) -> Vec<(BigInt, Monomial)> {
        self.terms.iter().map(|(m, c)| (c.clone(), m.clone())).collect()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn is_one(&self) -> bool {
        matches!(self.terms.as_slice(), [(m, c)] if m.is_one() && One::is_one(c))
    }

    fn add(&self, o: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < o.terms.len() {
            let ord = match (self.terms.get(i), o.terms.get(j)) {
                (Some(a), Some(b)) => lex(&a.0, &b.0),
                (Some(_), None) => Ordering::Greater,
                _ => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(o.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 + &o.terms[j].1;
                    if !Zero::is_zero(&c) {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        CPoly { terms: out }
    }

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn mul(&self, o: &Self) -> Self {
        if let Some(c) = o.as_int() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_int() {
            return o.scale(&c);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (a, c) in &self.terms {
            for (b, d) in &o.terms {
                terms.push((a.mul(b), c * d));
            }
        }
        CPoly::from_unsorted(terms)
    }

    fn neg(&self) -> Self {
        CPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    fn gcd(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.normalized();
        }
        if o.is_zero() {
            return self.normalized();
        }
        if self.as_int().is_some() || o.as_int().is_some() {
            return CPoly::constant(Integer::gcd(&self.int_content(), &o.int_content()));
        }
        if o.try_div(self).is_some() {
            return self.normalized();
        }
        if self.try_div(o).is_some() {
            return o.normalized();
        }
        let v = self.min_var().into_iter().chain(o.min_var()).min().expect("non-constant");
        let (da, db) = (self.degree_in(v), o.degree_in(v));
        if da == 0 {
            return self.gcd(&o.content_in(v));
        }
        if db == 0 {
            return o.gcd(&self.content_in(v));
        }
        let (ca, cb) = (self.content_in(v), o.content_in(v));
        let g = ca.gcd(&cb);
        let (mut a, mut b) = (self.div_exact(&ca), o.div_exact(&cb));
        if da < db {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            let r = CPoly::prem(&a, &b, v);
            if r.is_zero() {
                break;
            }
            if r.degree_in(v) == 0 {
                return g;
            }
            a = b;
            b = r.primitive_in(v);
        }
        g.mul(&b.primitive_in(v)).normalized()
    }

    fn div_exact(&self, o: &Self) -> Self {
        if o.is_one() {
            return self.clone();
        }
        if let Some(c) = o.as_int() {
            return CPoly { terms: self.terms.iter().map(|(m, d)| (m.clone(), d / &c)).collect() };
        }
        self.try_div(o).expect("exact division")
    }

    fn is_negative(&self) -> bool {
        self.terms.first().is_some_and(|(_, c)| Signed::is_negative(c))
    }

    fn bits(&self) -> u64 {
        self.terms.iter().map(|(_, c)| c.bits()).max().unwrap_or(0)
    }
}
