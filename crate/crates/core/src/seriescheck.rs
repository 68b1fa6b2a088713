//! Truncated multivariate Taylor series over Q, used to check that an
//! output equation really annihilates concrete solutions of the inputs.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::diffalg::{DVar, DiffPoly};
use crate::engine::AdeResult;
use crate::frontend::lexer::{lex, Tok, Token};
use crate::polyring::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("reciprocal of a series with zero constant term")]
    ZeroConstantTerm,
    #[error("series shapes differ: {0}")]
    Shape(String),
    #[error("{0} of a series with nonzero constant term has irrational coefficients")]
    IrrationalExpansion(&'static str),
    #[error("truncation {t} too small: {msg}")]
    InsufficientTruncation { t: u32, msg: String },
    #[error("no series assigned to {0}")]
    MissingAssignment(String),
    #[error("no value for parameter {0}")]
    MissingParameter(String),
    #[error("series syntax error at column {col}: {msg}")]
    Syntax { col: usize, msg: String },
}

/// A power series in `l` variables known through total degree `t`.
///
/// `trusted` is the largest degree whose coefficients are exact; it drops
/// by one per differentiation and may go negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    l: usize,
    t: u32,
    trusted: i64,
    coeffs: BTreeMap<Vec<u32>, Rational>,
}

fn total(idx: &[u32]) -> u32 {
    idx.iter().sum()
}

impl TruncSeries {
    pub fn zero(l: usize, t: u32) -> Self {
        TruncSeries { l, t, trusted: t as i64, coeffs: BTreeMap::new() }
    }

    pub fn constant(l: usize, t: u32, c: Rational) -> Self {
        let mut s = Self::zero(l, t);
        s.set(vec![0; l], c);
        s
    }

    /// The coordinate function `x_j`.
    pub fn var(l: usize, t: u32, j: usize) -> Self {
        let mut s = Self::zero(l, t);
        let mut idx = vec![0; l];
        idx[j] = 1;
        s.set(idx, Rational::one());
        s
    }

    /// Builds a series from coefficients; terms above degree `t` are dropped.
    pub fn from_terms(l: usize, t: u32, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut s = Self::zero(l, t);
        for (idx, c) in terms {
            assert_eq!(idx.len(), l, "multi-index length");
            let c = s.coeff(&idx) + c;
            s.set(idx, c);
        }
        s
    }

    fn set(&mut self, idx: Vec<u32>, c: Rational) {
        if total(&idx) > self.t || c.is_zero() {
            self.coeffs.remove(&idx);
        } else {
            self.coeffs.insert(idx, c);
        }
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn trusted(&self) -> i64 {
        self.trusted
    }

    pub fn coeff(&self, idx: &[u32]) -> Rational {
        self.coeffs.get(idx).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.coeffs.iter()
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.l])
    }

    /// Whether every coefficient up to the trusted degree vanishes.
    pub fn vanishes(&self) -> bool {
        self.coeffs.keys().all(|idx| total(idx) as i64 > self.trusted)
    }

    fn check(&self, o: &TruncSeries) -> Result<(), SeriesError> {
        if self.l != o.l || self.t != o.t {
            return Err(SeriesError::Shape(format!("(l={}, T={}) vs (l={}, T={})", self.l, self.t, o.l, o.t)));
        }
        Ok(())
    }

    pub fn add(&self, o: &TruncSeries) -> Result<TruncSeries, SeriesError> {
        self.check(o)?;
        let mut out = self.clone();
        out.trusted = self.trusted.min(o.trusted);
        for (idx, c) in &o.coeffs {
            let v = out.coeff(idx) + c;
            out.set(idx.clone(), v);
        }
        Ok(out)
    }

    pub fn neg(&self) -> TruncSeries {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, o: &TruncSeries) -> Result<TruncSeries, SeriesError> {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Rational) -> TruncSeries {
        let mut out = TruncSeries { coeffs: BTreeMap::new(), ..self.clone() };
        for (idx, v) in &self.coeffs {
            out.set(idx.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, o: &TruncSeries) -> Result<TruncSeries, SeriesError> {
        self.check(o)?;
        let mut acc: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (a, ca) in &self.coeffs {
            let da = total(a);
            for (b, cb) in &o.coeffs {
                if da + total(b) > self.t {
                    continue;
                }
                let idx: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                *acc.entry(idx).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(TruncSeries { l: self.l, t: self.t, trusted: self.trusted.min(o.trusted), coeffs: acc })
    }

    pub fn pow(&self, n: u32) -> TruncSeries {
        let mut out = Self::constant(self.l, self.t, Rational::one());
        out.trusted = self.trusted;
        for _ in 0..n {
            out = out.mul(self).expect("same shape");
        }
        out
    }

    /// `1/f`, expanded as a geometric series in the non-constant part.
    pub fn reciprocal(&self) -> Result<TruncSeries, SeriesError> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let inv = Rational::one() / &c0;
        // g = 1 - f/c0 has zero constant term, and 1/f = (1/c0) * sum g^k.
        let g = Self::constant(self.l, self.t, Rational::one()).sub(&self.scale(&inv))?;
        let mut sum = Self::constant(self.l, self.t, Rational::one());
        let mut power = sum.clone();
        for _ in 0..self.t {
            power = power.mul(&g)?;
            sum = sum.add(&power)?;
        }
        sum.trusted = self.trusted;
        Ok(sum.scale(&inv))
    }

    pub fn partial(&self, axis: usize) -> TruncSeries {
        let mut out = Self::zero(self.l, self.t);
        out.trusted = self.trusted - 1;
        for (idx, c) in &self.coeffs {
            if idx[axis] == 0 {
                continue;
            }
            let mut j = idx.clone();
            j[axis] -= 1;
            out.set(j, c * Rational::from_integer(BigInt::from(idx[axis])));
        }
        out
    }

    /// `sum_k a_k f^k` for a series with zero constant term.
    fn compose(&self, a: impl Fn(u32) -> Rational) -> TruncSeries {
        let mut sum = Self::zero(self.l, self.t);
        let mut power = Self::constant(self.l, self.t, Rational::one());
        for k in 0..=self.t {
            let ak = a(k);
            if !ak.is_zero() {
                sum = sum.add(&power.scale(&ak)).expect("same shape");
            }
            power = power.mul(self).expect("same shape");
        }
        sum.trusted = self.trusted;
        sum
    }

    fn transcendental(&self, name: &'static str, a: impl Fn(u32) -> Rational) -> Result<TruncSeries, SeriesError> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::IrrationalExpansion(name));
        }
        Ok(self.compose(a))
    }

    pub fn exp(&self) -> Result<TruncSeries, SeriesError> {
        self.transcendental("exp", |k| Rational::one() / factorial(k))
    }

    pub fn sin(&self) -> Result<TruncSeries, SeriesError> {
        self.transcendental("sin", |k| match k % 4 {
            1 => Rational::one() / factorial(k),
            3 => -Rational::one() / factorial(k),
            _ => Rational::zero(),
        })
    }

    pub fn cos(&self) -> Result<TruncSeries, SeriesError> {
        self.transcendental("cos", |k| match k % 4 {
            0 => Rational::one() / factorial(k),
            2 => -Rational::one() / factorial(k),
            _ => Rational::zero(),
        })
    }

    /// Keeps only the terms of degree at most `t`.
    pub fn truncate(&self, t: u32) -> TruncSeries {
        let t = t.min(self.t);
        let coeffs = self.coeffs.iter().filter(|(i, _)| total(i) <= t).map(|(i, c)| (i.clone(), c.clone())).collect();
        TruncSeries { l: self.l, t, trusted: self.trusted.min(t as i64), coeffs }
    }
}

fn factorial(k: u32) -> Rational {
    Rational::from_integer((1..=k).fold(BigInt::one(), |a, i| a * i))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    Reciprocal,
    PartialDerive(usize),
}

pub fn series_arith(op: SeriesOp, a: &TruncSeries, b: Option<&TruncSeries>) -> Result<TruncSeries, SeriesError> {
    let second = || b.ok_or_else(|| SeriesError::Shape("binary operation needs two series".into()));
    match op {
        SeriesOp::Add => a.add(second()?),
        SeriesOp::Mul => a.mul(second()?),
        SeriesOp::Reciprocal => a.reciprocal(),
        SeriesOp::PartialDerive(axis) if axis < a.l => Ok(a.partial(axis)),
        SeriesOp::PartialDerive(axis) => Err(SeriesError::Shape(format!("axis {axis} with l={}", a.l))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    Exp,
    Sin,
    Cos,
    Poly,
}

/// `c + sum_j a_j x_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub constant: Rational,
    pub coeffs: Vec<Rational>,
}

impl LinearForm {
    pub fn homogeneous(coeffs: Vec<Rational>) -> Self {
        LinearForm { constant: Rational::zero(), coeffs }
    }

    pub fn series(&self, t: u32) -> TruncSeries {
        let l = self.coeffs.len();
        let mut s = TruncSeries::constant(l, t, self.constant.clone());
        for (j, a) in self.coeffs.iter().enumerate() {
            s = s.add(&TruncSeries::var(l, t, j).scale(a)).expect("same shape");
        }
        s
    }
}

/// Taylor expansion at the origin of `kind(form)`. The transcendental kinds
/// need a form without constant term.
pub fn series_builtin(kind: SeriesKind, form: &LinearForm, t: u32) -> Result<TruncSeries, SeriesError> {
    let s = form.series(t);
    match kind {
        SeriesKind::Exp => s.exp(),
        SeriesKind::Sin => s.sin(),
        SeriesKind::Cos => s.cos(),
        SeriesKind::Poly => Ok(s),
    }
}

/// Substitutes series for the indeterminates (with all needed partials),
/// coordinates for the independents and rationals for the parameters.
pub fn residual(
    p: &DiffPoly,
    assignment: &BTreeMap<String, TruncSeries>,
    params: &BTreeMap<String, Rational>,
    t: u32,
) -> Result<TruncSeries, SeriesError> {
    let ctx = p.context();
    let l = ctx.l();
    let mut cache: BTreeMap<DVar, TruncSeries> = BTreeMap::new();
    let mut value = |v: &DVar| -> Result<TruncSeries, SeriesError> {
        if let Some(s) = cache.get(v) {
            return Ok(s.clone());
        }
        let s = match v {
            DVar::Indep(j) => TruncSeries::var(l, t, *j),
            DVar::Param(i) => {
                let name = &ctx.params()[*i];
                let c = params.get(name).ok_or_else(|| SeriesError::MissingParameter(name.clone()))?;
                TruncSeries::constant(l, t, c.clone())
            }
            DVar::Deriv { indet, index } => {
                let name = &ctx.indet(*indet).name;
                let base = assignment.get(name).ok_or_else(|| SeriesError::MissingAssignment(name.clone()))?;
                if base.l != l || base.t < t {
                    return Err(SeriesError::Shape(format!("series for {name} has l={}, T={}", base.l, base.t)));
                }
                let mut s = base.truncate(t);
                for (axis, &k) in index.iter().enumerate() {
                    for _ in 0..k {
                        s = s.partial(axis);
                    }
                }
                s
            }
        };
        cache.insert(v.clone(), s.clone());
        Ok(s)
    };
    let mut sum = TruncSeries::zero(l, t);
    for (c, mono) in p.terms() {
        let mut term = TruncSeries::constant(l, t, c.clone());
        for (v, e) in mono {
            term = term.mul(&value(v)?.pow(*e))?;
        }
        sum = sum.add(&term)?;
    }
    Ok(sum)
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Whether `p` vanishes on the assigned series up to the trusted degree.
pub fn certify_diff(
    p: &DiffPoly,
    assignment: &BTreeMap<String, TruncSeries>,
    params: &BTreeMap<String, Rational>,
    t: u32,
) -> Result<bool, SeriesError> {
    let ctx = p.context();
    let degree = p
        .terms()
        .map(|(_, m)| m.iter().filter(|(v, _)| matches!(v, DVar::Deriv { .. })).map(|(_, e)| e).sum::<u32>())
        .max()
        .unwrap_or(0);
    for i in 0..ctx.indets().len() {
        if let Some(order) = p.order_of(i) {
            if let Some(&bad) = order.iter().find(|&&n| t <= n + degree) {
                return Err(SeriesError::InsufficientTruncation {
                    t,
                    msg: format!("need T > order {bad} + degree {degree}"),
                });
            }
        }
    }
    let max_total = p.derivs().iter().map(|(_, idx)| total(idx)).max().unwrap_or(0);
    let trusted = t as i64 - max_total as i64;
    let checked = if trusted < 0 { 0 } else { binomial(trusted as u64 + ctx.l() as u64, ctx.l() as u64) };
    if checked < 5 {
        return Err(SeriesError::InsufficientTruncation { t, msg: format!("only {checked} coefficients would be checked") });
    }
    Ok(residual(p, assignment, params, t)?.vanishes())
}

pub fn certify(
    ade: &AdeResult,
    assignment: &BTreeMap<String, TruncSeries>,
    params: &BTreeMap<String, Rational>,
    t: u32,
) -> Result<bool, SeriesError> {
    certify_diff(&ade.diff, assignment, params, t)
}

/// Parses a closed-form series such as `cos(x) + exp(x)` or
/// `1/(1 + exp(x1 + x2))` over the given independents. Parameters are
/// replaced by their values.
pub fn parse_series(
    text: &str,
    independents: &[String],
    params: &BTreeMap<String, Rational>,
    t: u32,
) -> Result<TruncSeries, SeriesError> {
    let toks = lex(text).map_err(|e| SeriesError::Syntax { col: 0, msg: e.to_string() })?;
    let mut p = SeriesParser { toks, at: 0, independents, params, t };
    let s = p.expr()?;
    match p.peek() {
        Tok::Eof => Ok(s),
        other => p.fail(format!("unexpected {other:?}")),
    }
}

struct SeriesParser<'a> {
    toks: Vec<Token>,
    at: usize,
    independents: &'a [String],
    params: &'a BTreeMap<String, Rational>,
    t: u32,
}

impl SeriesParser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].tok.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, msg: String) -> Result<T, SeriesError> {
        Err(SeriesError::Syntax { col: self.toks[self.at].col, msg })
    }

    fn expect(&mut self, c: char) -> Result<(), SeriesError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<TruncSeries, SeriesError> {
        let mut s = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    s = s.add(&self.term()?)?;
                }
                Tok::Sym('-') => {
                    self.bump();
                    s = s.sub(&self.term()?)?;
                }
                _ => return Ok(s),
            }
        }
    }

    fn term(&mut self) -> Result<TruncSeries, SeriesError> {
        let mut s = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    s = s.mul(&self.unary()?)?;
                }
                Tok::Sym('/') => {
                    self.bump();
                    s = s.mul(&self.unary()?.reciprocal()?)?;
                }
                _ => return Ok(s),
            }
        }
    }

    fn unary(&mut self) -> Result<TruncSeries, SeriesError> {
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        let base = self.atom()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            Tok::Int(n) => match u32::try_from(n) {
                Ok(n) => Ok(base.pow(n)),
                Err(_) => self.fail("exponent too large".into()),
            },
            _ => self.fail("exponents must be nonnegative integers".into()),
        }
    }

    fn atom(&mut self) -> Result<TruncSeries, SeriesError> {
        let l = self.independents.len();
        match self.bump() {
            Tok::Int(n) => Ok(TruncSeries::constant(l, self.t, Rational::from_integer(n))),
            Tok::Sym('(') => {
                let s = self.expr()?;
                self.expect(')')?;
                Ok(s)
            }
            Tok::Ident(name) => {
                if *self.peek() == Tok::Sym('(') {
                    self.bump();
                    let arg = self.expr()?;
                    self.expect(')')?;
                    return match name.as_str() {
                        "exp" => arg.exp(),
                        "sin" => arg.sin(),
                        "cos" => arg.cos(),
                        _ => self.fail(format!("unknown function {name}")),
                    };
                }
                if let Some(j) = self.independents.iter().position(|v| *v == name) {
                    Ok(TruncSeries::var(l, self.t, j))
                } else if let Some(c) = self.params.get(&name) {
                    Ok(TruncSeries::constant(l, self.t, c.clone()))
                } else {
                    self.fail(format!("unknown name {name}"))
                }
            }
            other => self.fail(format!("unexpected {other:?}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn exp_squared_is_exp_of_double() {
        let e = series_builtin(SeriesKind::Exp, &LinearForm::homogeneous(vec![q(1, 1)]), 6).unwrap();
        let e2 = series_builtin(SeriesKind::Exp, &LinearForm::homogeneous(vec![q(2, 1)]), 6).unwrap();
        assert_eq!(e.mul(&e).unwrap(), e2);
    }

    #[test]
    fn geometric_reciprocal() {
        let f = TruncSeries::from_terms(1, 4, [(vec![0], q(1, 1)), (vec![1], q(1, 1))]);
        let r = series_arith(SeriesOp::Reciprocal, &f, None).unwrap();
        for k in 0..=4 {
            assert_eq!(r.coeff(&[k]), q(if k % 2 == 0 { 1 } else { -1 }, 1));
        }
        assert_eq!(series_arith(SeriesOp::Reciprocal, &TruncSeries::var(1, 4, 0), None), Err(SeriesError::ZeroConstantTerm));
    }

    #[test]
    fn derivative_of_exp_shifts() {
        let e = series_builtin(SeriesKind::Exp, &LinearForm::homogeneous(vec![q(1, 1)]), 8).unwrap();
        let d = series_arith(SeriesOp::PartialDerive(0), &e, None).unwrap();
        assert_eq!(d.trusted(), 7);
        for k in 0..=7 {
            assert_eq!(d.coeff(&[k]), e.coeff(&[k]));
        }
        assert!(d.coeff(&[8]).is_zero());
    }

    #[test]
    fn cos_expansion() {
        let c = series_builtin(SeriesKind::Cos, &LinearForm::homogeneous(vec![q(1, 1)]), 8).unwrap();
        let want = [(0, q(1, 1)), (2, q(-1, 2)), (4, q(1, 24)), (6, q(-1, 720)), (8, q(1, 40320))];
        assert_eq!(c.terms().count(), 5);
        for (k, v) in want {
            assert_eq!(c.coeff(&[k]), v);
        }
    }

    #[test]
    fn bivariate_exp_has_multinomial_coefficients() {
        let e = series_builtin(SeriesKind::Exp, &LinearForm::homogeneous(vec![q(1, 1), q(1, 1)]), 3).unwrap();
        for i in 0..=3u32 {
            for j in 0..=3 - i {
                assert_eq!(e.coeff(&[i, j]), Rational::one() / (factorial(i) * factorial(j)));
            }
        }
    }

    #[test]
    fn poly_kind_is_identity() {
        let form = LinearForm { constant: q(-3, 2), coeffs: vec![q(1, 1), q(-2, 1)] };
        let s = series_builtin(SeriesKind::Poly, &form, 5).unwrap();
        assert_eq!(s.terms().count(), 3);
        assert_eq!(s.coeff(&[0, 1]), q(-2, 1));
        assert!(series_builtin(SeriesKind::Exp, &form, 5).is_err());
    }

    #[test]
    fn parser_builds_logistic_series() {
        let vars = vec!["x1".to_string(), "x2".to_string()];
        let s = parse_series("1/(1+exp(x1+x2))", &vars, &BTreeMap::new(), 4).unwrap();
        assert_eq!(s.constant_term(), q(1, 2));
        assert_eq!(s.coeff(&[1, 0]), q(-1, 4));
        assert!(matches!(parse_series("log(x1)", &vars, &BTreeMap::new(), 4), Err(SeriesError::Syntax { .. })));
    }
}
