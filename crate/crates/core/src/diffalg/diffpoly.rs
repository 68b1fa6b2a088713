use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{DiffError, ThetaRank};
use crate::polyring::{Monomial, Poly, Rational, VarDesc, VarTable};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Indeterminate {
    pub name: String,
    /// Indices of the independent variables it depends on.
    pub deps: Vec<usize>,
}

/// Names of independent variables, parameters and differential
/// indeterminates shared by a family of differential polynomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffContext {
    independents: Vec<String>,
    params: Vec<String>,
    indets: Vec<Indeterminate>,
}

impl DiffContext {
    pub fn new(independents: Vec<String>) -> Result<Self, DiffError> {
        if independents.is_empty() {
            return Err(DiffError::NoIndependents);
        }
        Ok(DiffContext { independents, params: Vec::new(), indets: Vec::new() })
    }

    pub fn independents(&self) -> &[String] {
        &self.independents
    }

    pub fn l(&self) -> usize {
        self.independents.len()
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn indets(&self) -> &[Indeterminate] {
        &self.indets
    }

    pub fn indet(&self, i: usize) -> &Indeterminate {
        &self.indets[i]
    }

    pub fn theta(&self) -> ThetaRank {
        ThetaRank::new(self.l()).expect("context has independents")
    }

    fn taken(&self, name: &str) -> bool {
        self.independents.iter().any(|n| n == name)
            || self.params.iter().any(|n| n == name)
            || self.indets.iter().any(|d| d.name == name)
    }

    pub fn add_param(&mut self, name: &str) -> Result<usize, DiffError> {
        if let Some(i) = self.params.iter().position(|n| n == name) {
            return Ok(i);
        }
        if self.taken(name) {
            return Err(DiffError::NameClash(name.into()));
        }
        self.params.push(name.into());
        Ok(self.params.len() - 1)
    }

    pub fn add_indet(&mut self, name: &str, deps: Vec<usize>) -> Result<usize, DiffError> {
        if self.taken(name) {
            return Err(DiffError::NameClash(name.into()));
        }
        if deps.is_empty() || deps.iter().any(|&d| d >= self.l()) {
            return Err(DiffError::BadDependencies(name.into()));
        }
        let mut deps = deps;
        deps.sort_unstable();
        deps.dedup();
        self.indets.push(Indeterminate { name: name.into(), deps });
        Ok(self.indets.len() - 1)
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|n| n == name)
    }

    pub fn indep_index(&self, name: &str) -> Option<usize> {
        self.independents.iter().position(|n| n == name)
    }

    pub fn indet_index(&self, name: &str) -> Option<usize> {
        self.indets.iter().position(|d| d.name == name)
    }

    /// Whether `self` is `other` with possibly more names appended.
    pub fn extends(&self, other: &DiffContext) -> bool {
        self.independents == other.independents
            && self.params.starts_with(&other.params)
            && self.indets.starts_with(&other.indets)
    }

    pub fn describe(&self, v: &DVar) -> VarDesc {
        match v {
            DVar::Indep(i) => VarDesc::Independent(self.independents[*i].clone()),
            DVar::Param(i) => VarDesc::Parameter(self.params[*i].clone()),
            DVar::Deriv { indet, index } => VarDesc::Deriv { indet: *indet, index: index.clone() },
        }
    }

    pub fn var_of(&self, d: &VarDesc) -> Option<DVar> {
        match d {
            VarDesc::Independent(n) => self.indep_index(n).map(DVar::Indep),
            VarDesc::Parameter(n) => self.param_index(n).map(DVar::Param),
            VarDesc::Deriv { indet, index } => {
                (*indet < self.indets.len()).then(|| DVar::Deriv { indet: *indet, index: index.clone() })
            }
            VarDesc::Auxiliary(_) => None,
        }
    }

    pub fn var_name(&self, v: &DVar) -> String {
        match v {
            DVar::Indep(i) => self.independents[*i].clone(),
            DVar::Param(i) => self.params[*i].clone(),
            DVar::Deriv { indet, index } => {
                let name = &self.indets[*indet].name;
                if index.iter().all(|&k| k == 0) {
                    name.clone()
                } else {
                    let idx: Vec<String> = index.iter().map(|k| k.to_string()).collect();
                    format!("{name}[{}]", idx.join(","))
                }
            }
        }
    }

    pub fn indet_names(&self) -> Vec<String> {
        self.indets.iter().map(|d| d.name.clone()).collect()
    }
}

/// A variable of a differential polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DVar {
    Indep(usize),
    Param(usize),
    Deriv { indet: usize, index: Vec<u32> },
}

impl DVar {
    pub fn deriv(indet: usize, index: Vec<u32>) -> DVar {
        DVar::Deriv { indet, index }
    }
}

type DMono = Vec<(DVar, u32)>;

fn mono_mul(a: &DMono, b: &DMono) -> DMono {
    let mut out: DMono = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j].clone());
            j += 1;
        } else {
            out.push((a[i].0.clone(), a[i].1 + b[j].1));
            i += 1;
            j += 1;
        }
    }
    out
}

/// Polynomial in independent variables, parameters and derivatives of
/// differential indeterminates.
#[derive(Clone, Debug)]
pub struct DiffPoly {
    ctx: Arc<DiffContext>,
    terms: BTreeMap<DMono, Rational>,
}

impl PartialEq for DiffPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for DiffPoly {}

impl DiffPoly {
    pub fn zero(ctx: &Arc<DiffContext>) -> Self {
        DiffPoly { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ctx: &Arc<DiffContext>, c: Rational) -> Self {
        let mut p = DiffPoly::zero(ctx);
        p.add_term(c, Vec::new());
        p
    }

    pub fn one(ctx: &Arc<DiffContext>) -> Self {
        DiffPoly::constant(ctx, Rational::one())
    }

    pub fn var(ctx: &Arc<DiffContext>, v: DVar) -> Self {
        let mut p = DiffPoly::zero(ctx);
        p.add_term(Rational::one(), vec![(v, 1)]);
        p
    }

    pub fn indep(ctx: &Arc<DiffContext>, i: usize) -> Self {
        DiffPoly::var(ctx, DVar::Indep(i))
    }

    pub fn param(ctx: &Arc<DiffContext>, i: usize) -> Self {
        DiffPoly::var(ctx, DVar::Param(i))
    }

    /// The derivative of indeterminate `indet` with multi-index `index`;
    /// zero when the index differentiates along a variable outside its
    /// dependency set.
    pub fn deriv(ctx: &Arc<DiffContext>, indet: usize, index: Vec<u32>) -> Self {
        let deps = &ctx.indet(indet).deps;
        if index.iter().enumerate().any(|(j, &k)| k > 0 && !deps.contains(&j)) {
            return DiffPoly::zero(ctx);
        }
        DiffPoly::var(ctx, DVar::Deriv { indet, index })
    }

    pub fn context(&self) -> &Arc<DiffContext> {
        &self.ctx
    }

    /// Moves the polynomial into a context extending its own.
    pub fn rebase(&self, ctx: &Arc<DiffContext>) -> Result<DiffPoly, DiffError> {
        if !ctx.extends(&self.ctx) {
            return Err(DiffError::ContextMismatch);
        }
        Ok(DiffPoly { ctx: ctx.clone(), terms: self.terms.clone() })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &[(DVar, u32)])> {
        self.terms.iter().map(|(m, c)| (c, m.as_slice()))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_empty())
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.terms.get(&Vec::new()).cloned().unwrap_or_else(Rational::zero))
        } else {
            None
        }
    }

    pub fn add_term(&mut self, c: Rational, m: DMono) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(c.clone(), m.clone());
        }
        out
    }

    pub fn sub(&self, o: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(-c.clone(), m.clone());
        }
        out
    }

    pub fn neg(&self) -> DiffPoly {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> DiffPoly {
        let mut out = DiffPoly::zero(&self.ctx);
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect();
        }
        out
    }

    pub fn mul(&self, o: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero(&self.ctx);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(c1 * c2, mono_mul(m1, m2));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> DiffPoly {
        let mut acc = DiffPoly::one(&self.ctx);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Single partial derivative along independent variable `j`.
    pub fn partial(&self, j: usize) -> DiffPoly {
        let mut out = DiffPoly::zero(&self.ctx);
        for (m, c) in &self.terms {
            for (pos, (v, e)) in m.iter().enumerate() {
                let dv: Option<DiffPoly> = match v {
                    DVar::Indep(i) => (*i == j).then(|| DiffPoly::one(&self.ctx)),
                    DVar::Param(_) => None,
                    DVar::Deriv { indet, index } => {
                        if self.ctx.indet(*indet).deps.contains(&j) {
                            let mut idx = index.clone();
                            idx[j] += 1;
                            Some(DiffPoly::var(&self.ctx, DVar::Deriv { indet: *indet, index: idx }))
                        } else {
                            None
                        }
                    }
                };
                let Some(dv) = dv else { continue };
                let mut rest = m.clone();
                if *e == 1 {
                    rest.remove(pos);
                } else {
                    rest[pos].1 -= 1;
                }
                let coef = c * Rational::from_integer(BigInt::from(*e));
                for (dm, dc) in &dv.terms {
                    out.add_term(&coef * dc, mono_mul(&rest, dm));
                }
            }
        }
        out
    }

    /// Applies the composite partial derivative indexed by `index`.
    pub fn partial_multi(&self, index: &[u32]) -> DiffPoly {
        let mut p = self.clone();
        for (j, &n) in index.iter().enumerate() {
            for _ in 0..n {
                p = p.partial(j);
            }
        }
        p
    }

    /// `theta^k`: the composite partial of the `k`-th multi-index in the
    /// graded co-lex ranking.
    pub fn theta_derive(&self, k: u64) -> DiffPoly {
        let idx = self.ctx.theta().unrank(k);
        self.partial_multi(&idx)
    }

    pub fn total_derive(&self) -> Result<DiffPoly, DiffError> {
        if self.ctx.l() != 1 {
            return Err(DiffError::NotOrdinary(self.ctx.l()));
        }
        Ok(self.partial(0))
    }

    /// Derivatives occurring in the polynomial.
    pub fn derivs(&self) -> Vec<(usize, Vec<u32>)> {
        let mut out: Vec<(usize, Vec<u32>)> = self
            .terms
            .keys()
            .flat_map(|m| m.iter())
            .filter_map(|(v, _)| match v {
                DVar::Deriv { indet, index } => Some((*indet, index.clone())),
                _ => None,
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn vars(&self) -> Vec<DVar> {
        let mut out: Vec<DVar> = self.terms.keys().flat_map(|m| m.iter().map(|(v, _)| v.clone())).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn involves_indet(&self, indet: usize) -> bool {
        self.derivs().iter().any(|(i, _)| *i == indet)
    }

    /// Componentwise maximum of all derivative indices.
    pub fn diff_order(&self) -> Result<Vec<u32>, DiffError> {
        let ds = self.derivs();
        if ds.is_empty() {
            return Err(DiffError::NoDerivative);
        }
        let mut out = vec![0; self.ctx.l()];
        for (_, idx) in ds {
            for (o, k) in out.iter_mut().zip(idx) {
                *o = (*o).max(k);
            }
        }
        Ok(out)
    }

    /// Componentwise maximum of the derivative indices of one indeterminate.
    pub fn order_of(&self, indet: usize) -> Option<Vec<u32>> {
        let mut out: Option<Vec<u32>> = None;
        for (i, idx) in self.derivs() {
            if i != indet {
                continue;
            }
            match &mut out {
                None => out = Some(idx),
                Some(o) => o.iter_mut().zip(idx).for_each(|(a, b)| *a = (*a).max(b)),
            }
        }
        out
    }

    pub fn degree_in(&self, v: &DVar) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().find(|(w, _)| w == v).map_or(0, |(_, e)| *e))
            .max()
            .unwrap_or(0)
    }

    /// Coefficient of `v^k`, free of `v`.
    pub fn coeff_of(&self, v: &DVar, k: u32) -> DiffPoly {
        let mut out = DiffPoly::zero(&self.ctx);
        for (m, c) in &self.terms {
            let e = m.iter().find(|(w, _)| w == v).map_or(0, |(_, e)| *e);
            if e == k {
                out.add_term(c.clone(), m.iter().filter(|(w, _)| w != v).cloned().collect());
            }
        }
        out
    }

    /// Formal partial derivative with respect to the variable `v`.
    pub fn derivative_wrt(&self, v: &DVar) -> DiffPoly {
        let mut out = DiffPoly::zero(&self.ctx);
        for (m, c) in &self.terms {
            if let Some(pos) = m.iter().position(|(w, _)| w == v) {
                let e = m[pos].1;
                let mut rest = m.clone();
                if e == 1 {
                    rest.remove(pos);
                } else {
                    rest[pos].1 -= 1;
                }
                out.add_term(c * Rational::from_integer(BigInt::from(e)), rest);
            }
        }
        out
    }

    /// Substitutes every variable through `f` into the context `ctx`;
    /// variables mapped to `None` are kept (and must exist in `ctx`).
    pub fn map_vars(&self, ctx: &Arc<DiffContext>, f: &dyn Fn(&DVar) -> Option<DiffPoly>) -> DiffPoly {
        let mut cache: BTreeMap<DVar, DiffPoly> = BTreeMap::new();
        let mut out = DiffPoly::zero(ctx);
        for (m, c) in &self.terms {
            let mut t = DiffPoly::constant(ctx, c.clone());
            for (v, e) in m {
                let img = cache
                    .entry(v.clone())
                    .or_insert_with(|| f(v).unwrap_or_else(|| DiffPoly::var(ctx, v.clone())));
                t = t.mul(&img.pow(*e));
            }
            out = out.add(&t);
        }
        out
    }

    /// Exact quotient `self / g`, if it exists.
    pub fn exact_divide(&self, g: &DiffPoly) -> Option<DiffPoly> {
        let mut table = VarTable::with_indeterminates(self.ctx.indet_names());
        self.register(&mut table);
        g.register(&mut table);
        let table = Arc::new(table);
        let q = self.flatten(&table).ok()?.exact_divide(&g.flatten(&table).ok()?)?;
        DiffPoly::unflatten(&q, &self.ctx).ok()
    }

    /// Splits off the integer content and the monomial content. Returns the
    /// primitive cofactor, made sign-definite, and the variables dividing
    /// every term.
    pub fn split_content(&self) -> (DiffPoly, Vec<DVar>) {
        if self.is_zero() {
            return (self.clone(), Vec::new());
        }
        let mut common: Option<DMono> = None;
        for m in self.terms.keys() {
            common = Some(match common {
                None => m.clone(),
                Some(c) => c
                    .into_iter()
                    .filter_map(|(v, e)| m.iter().find(|(w, _)| *w == v).map(|(_, f)| (v, e.min(*f))))
                    .collect(),
            });
        }
        let common = common.unwrap_or_default();
        let mut out = DiffPoly::zero(&self.ctx);
        for (m, c) in &self.terms {
            let rest: DMono = m
                .iter()
                .filter_map(|(v, e)| {
                    let d = common.iter().find(|(w, _)| w == v).map_or(0, |(_, f)| *f);
                    (e > &d).then(|| (v.clone(), e - d))
                })
                .collect();
            out.add_term(c.clone(), rest);
        }
        (out.primitive(), common.into_iter().map(|(v, _)| v).collect())
    }

    /// Integer coefficients with content 1, the greatest stored term positive.
    pub fn primitive(&self) -> DiffPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num_integer::Integer::gcd(&num, c.numer());
            den = num_integer::Integer::lcm(&den, c.denom());
        }
        let mut content = Rational::new(num, den);
        if self.terms.values().next_back().is_some_and(|c| c.is_negative()) {
            content = -content;
        }
        self.scale(&content.recip())
    }

    /// Registers every variable in `table`.
    pub fn register(&self, table: &mut VarTable) {
        for v in self.vars() {
            table.intern(self.ctx.describe(&v));
        }
    }

    pub fn flatten(&self, table: &Arc<VarTable>) -> Result<Poly, DiffError> {
        let mut out = Poly::zero(table);
        for (m, c) in &self.terms {
            let mut pairs = Vec::with_capacity(m.len());
            for (v, e) in m {
                let d = self.ctx.describe(v);
                let i = table.index_of(&d).ok_or_else(|| DiffError::Unregistered(self.ctx.var_name(v)))?;
                pairs.push((i, *e));
            }
            out.add_term(c.clone(), Monomial::from_pairs(pairs));
        }
        Ok(out)
    }

    pub fn unflatten(p: &Poly, ctx: &Arc<DiffContext>) -> Result<DiffPoly, DiffError> {
        let table = p.table();
        let mut out = DiffPoly::zero(ctx);
        for (c, m) in p.terms() {
            let mut mono: DMono = Vec::new();
            for (i, e) in m.iter() {
                let v = ctx.var_of(table.desc(i)).ok_or_else(|| DiffError::Unregistered(table.name(i)))?;
                mono.push((v, e));
            }
            mono.sort();
            out.add_term(c.clone(), mono);
        }
        Ok(out)
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 && neg {
                write!(f, "-")?;
            } else if i > 0 {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let a = c.abs();
            let mut parts = Vec::new();
            if !a.is_one() || m.is_empty() {
                parts.push(a.to_string());
            }
            for (v, e) in m {
                let n = self.ctx.var_name(v);
                parts.push(if *e == 1 { n } else { format!("{n}^{e}") });
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}
