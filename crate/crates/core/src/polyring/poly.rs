use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{CompiledOrder, Monomial, MonomialOrder, PolyError, Rational, VarTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Sparse polynomial over the rationals. Terms are stored by monomial;
/// order-dependent views (leading term, sorted terms) take the order as an
/// argument.
#[derive(Clone, Debug)]
pub struct Poly {
    table: Arc<VarTable>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && same_table(&self.table, &other.table)
    }
}

impl Eq for Poly {}

fn same_table(a: &Arc<VarTable>, b: &Arc<VarTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub fn poly_arith(op: ArithOp, f: &Poly, g: &Poly) -> Result<Poly, PolyError> {
    if !same_table(&f.table, &g.table) {
        return Err(PolyError::TableMismatch);
    }
    Ok(match op {
        ArithOp::Add => f.add(g),
        ArithOp::Sub => f.sub(g),
        ArithOp::Mul => f.mul(g),
    })
}

impl Poly {
    pub fn zero(table: &Arc<VarTable>) -> Self {
        Poly { table: table.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(table: &Arc<VarTable>, c: Rational) -> Self {
        Poly::monomial(table, c, Monomial::one())
    }

    pub fn one(table: &Arc<VarTable>) -> Self {
        Poly::constant(table, Rational::one())
    }

    pub fn var(table: &Arc<VarTable>, index: usize) -> Self {
        Poly::monomial(table, Rational::one(), Monomial::var(index, 1))
    }

    pub fn monomial(table: &Arc<VarTable>, c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { table: table.clone(), terms }
    }

    pub fn from_terms(table: &Arc<VarTable>, terms: impl IntoIterator<Item = (Rational, Monomial)>) -> Self {
        let mut p = Poly::zero(table);
        for (c, m) in terms {
            p.add_term(c, m);
        }
        p
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    /// Moves the polynomial to another table that contains this one as a prefix.
    pub fn with_table(mut self, table: &Arc<VarTable>) -> Self {
        debug_assert!(self.table.descs().iter().zip(table.descs()).all(|(a, b)| a == b));
        self.table = table.clone();
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &Monomial)> {
        self.terms.iter().map(|(m, c)| (c, m))
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one())
    }

    pub fn add_term(&mut self, c: Rational, m: Monomial) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(c.clone(), m.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(-c.clone(), m.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(&self.table);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(c1 * c2, m1.mul(m2));
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.table);
        }
        Poly {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, c: &Rational, mono: &Monomial) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.table);
        }
        Poly {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, d)| (m.mul(mono), d * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.table);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    /// Total degree counting only the variables accepted by `pred`.
    pub fn degree_where(&self, pred: impl Fn(usize) -> bool) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().filter(|&(v, _)| pred(v)).map(|(_, e)| e).sum())
            .max()
            .unwrap_or(0)
    }

    /// Sorted indices of the variables that occur.
    pub fn vars(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.keys().flat_map(|m| m.iter().map(|(i, _)| i)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exponent(var) > 0)
    }

    /// Coefficient of `var^k`, as a polynomial free of `var`.
    pub fn coeff_of(&self, var: usize, k: u32) -> Poly {
        let mut out = Poly::zero(&self.table);
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(var);
            if e == k {
                out.add_term(c.clone(), rest);
            }
        }
        out
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero(&self.table);
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(var);
            if e > 0 {
                out.add_term(c * Rational::from_integer(BigInt::from(e)), rest.mul(&Monomial::var(var, e - 1)));
            }
        }
        out
    }

    /// Replaces `var` by `value`.
    pub fn substitute(&self, var: usize, value: &Poly) -> Poly {
        let mut powers: Vec<Poly> = vec![Poly::one(&self.table)];
        let mut out = Poly::zero(&self.table);
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(var);
            while powers.len() <= e as usize {
                let next = powers.last().unwrap().mul(value);
                powers.push(next);
            }
            out = out.add(&powers[e as usize].mul_monomial(c, &rest));
        }
        out
    }

    /// Relabels variables into `table` through the injective map `map`.
    pub fn remap(&self, table: &Arc<VarTable>, map: impl Fn(usize) -> usize) -> Poly {
        let mut out = Poly::zero(table);
        for (m, c) in &self.terms {
            out.add_term(c.clone(), m.remap(&map));
        }
        out
    }

    pub fn sorted_terms(&self, order: &CompiledOrder) -> Vec<(Rational, Monomial)> {
        let mut v: Vec<(Vec<i32>, Rational, Monomial)> =
            self.terms.iter().map(|(m, c)| (order.key(m), c.clone(), m.clone())).collect();
        v.sort_by(|a, b| b.0.cmp(&a.0));
        v.into_iter().map(|(_, c, m)| (c, m)).collect()
    }

    pub fn leading_term(&self, order: &CompiledOrder) -> Option<(Rational, Monomial)> {
        self.terms
            .iter()
            .max_by(|a, b| order.compare(a.0, b.0))
            .map(|(m, c)| (c.clone(), m.clone()))
    }

    /// Least common denominator over gcd of numerators.
    pub fn content(&self) -> Rational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        Rational::new(num, den)
    }

    /// Integer coefficients with content 1 and a positive leading coefficient.
    pub fn normalize(&self, order: &MonomialOrder) -> Result<Poly, PolyError> {
        let compiled = order.compile(self.table.len())?;
        self.normalize_compiled(&compiled)
    }

    pub fn normalize_compiled(&self, order: &CompiledOrder) -> Result<Poly, PolyError> {
        let (lc, _) = self.leading_term(order).ok_or(PolyError::ZeroPolynomial)?;
        let mut c = self.content();
        if lc.is_negative() {
            c = -c;
        }
        Ok(self.scale(&c.recip()))
    }

    /// Multivariate division of `self` by `divisors`; returns the remainder and
    /// whether any reduction step happened.
    pub fn reduce(&self, divisors: &[Poly], order: &MonomialOrder) -> Result<(Poly, bool), PolyError> {
        for g in divisors {
            if !same_table(&self.table, &g.table) {
                return Err(PolyError::TableMismatch);
            }
        }
        let ord = order.compile(self.table.len())?;
        let leads: Vec<(Rational, Monomial)> =
            divisors.iter().filter_map(|g| g.leading_term(&ord)).collect();
        let gs: Vec<&Poly> = divisors.iter().filter(|g| !g.is_zero()).collect();
        let mut p = self.clone();
        let mut rem = Poly::zero(&self.table);
        let mut reduced = false;
        while let Some((c, m)) = p.leading_term(&ord) {
            match leads.iter().position(|(_, lm)| lm.divides(&m)) {
                Some(i) => {
                    let (lc, lm) = &leads[i];
                    let q = m.div(lm).expect("divisible");
                    p = p.sub(&gs[i].mul_monomial(&(&c / lc), &q));
                    reduced = true;
                }
                None => {
                    p.terms.remove(&m);
                    rem.add_term(c, m);
                }
            }
        }
        Ok((rem, reduced))
    }

    /// `Some(q)` with `self = q * g` exactly, else `None`.
    pub fn exact_divide(&self, g: &Poly) -> Option<Poly> {
        if g.is_zero() {
            return None;
        }
        let n = self.table.len().max(g.table.len());
        let ord = MonomialOrder::Lex((0..n).collect()).compile(n).ok()?;
        let (gc, gm) = g.leading_term(&ord)?;
        let mut p = self.clone();
        let mut q = Poly::zero(&self.table);
        while let Some((c, m)) = p.leading_term(&ord) {
            let mono = m.div(&gm)?;
            let coef = &c / &gc;
            p = p.sub(&g.mul_monomial(&coef, &mono));
            q.add_term(coef, mono);
        }
        Some(q)
    }

    /// Integer-coefficient view: `(scale, integer terms)` with `self = terms / scale`.
    pub fn to_integer_terms(&self) -> Vec<(BigInt, Monomial)> {
        let den = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        self.terms
            .iter()
            .map(|(m, c)| ((c * Rational::from_integer(den.clone())).to_integer(), m.clone()))
            .collect()
    }

    /// Compares term sets under `order`, highest terms first.
    pub fn cmp_by(&self, other: &Poly, order: &CompiledOrder) -> Ordering {
        let a = self.sorted_terms(order);
        let b = other.sorted_terms(order);
        for (x, y) in a.iter().zip(&b) {
            let c = order.compare(&x.1, &y.1).then_with(|| x.0.cmp(&y.0));
            if c != Ordering::Equal {
                return c;
            }
        }
        a.len().cmp(&b.len())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !a.is_one() || m.is_one() {
                factors.push(a.to_string());
            }
            for (v, e) in m.iter() {
                let name = self.table.name(v);
                factors.push(if e == 1 { name } else { format!("{name}^{e}") });
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
