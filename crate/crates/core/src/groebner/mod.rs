//! Groebner bases by Buchberger's algorithm with the Gebauer-Moeller
//! criteria, plus saturation, elimination and ideal membership built on top.

mod buchberger;
mod coeff;
mod ipoly;

use std::sync::{Arc, OnceLock};
use std::time::Duration;

use thiserror::Error;

use num_bigint::BigInt;

use self::buchberger::Buchberger;
use self::coeff::{CPoly, Coeff};
use self::ipoly::{spoly, IPoly};
use crate::polyring::{
    CompiledOrder, InnerOrder, MonomialOrder, OrderBlock, Poly, PolyError, VarClass, VarDesc, VarTable,
};

/// Resource caps for one Groebner computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_pairs: u64,
    pub max_coeff_bits: u64,
    pub time_limit: Option<Duration>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Selection {
    /// Smallest lcm first.
    Normal,
    /// Smallest sugar degree first, lcm as tiebreak.
    #[default]
    Sugar,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GbOptions {
    pub budget: Budget,
    pub selection: Selection,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GbStats {
    pub pairs_processed: u64,
    pub pairs_pruned: u64,
    pub zero_reductions: u64,
    pub reduction_steps: u64,
    pub basis_size: usize,
    pub max_coeff_bits: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroebnerError {
    #[error("Groebner budget exceeded ({reason}) after {} pairs, basis size {}", stats.pairs_processed, stats.basis_size)]
    Budget { reason: String, stats: Box<GbStats> },
    #[error("saturating polynomial is zero")]
    ZeroSaturator,
    #[error("independent variables and parameters must be kept: {0}")]
    KeepMissing(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ElimStrategy {
    #[default]
    Lex,
    LexDeg,
}

#[derive(Clone, Debug)]
pub struct GroebnerResult {
    pub basis: Vec<Poly>,
    pub stats: GbStats,
}

fn check_tables(polys: &[Poly]) -> Result<Option<Arc<VarTable>>, PolyError> {
    let Some(first) = polys.first() else { return Ok(None) };
    let t = first.table().clone();
    if polys.iter().any(|p| !Arc::ptr_eq(p.table(), &t) && **p.table() != *t) {
        return Err(PolyError::TableMismatch);
    }
    Ok(Some(t))
}

pub fn groebner_basis(f: &[Poly], order: &MonomialOrder) -> Result<Vec<Poly>, GroebnerError> {
    Ok(groebner_basis_with(f, order, &GbOptions::default())?.basis)
}

/// Reduced Groebner basis, each element normalized, sorted by ascending
/// leading monomial. Variables the order does not rank are treated as
/// elements of the coefficient field.
pub fn groebner_basis_with(f: &[Poly], order: &MonomialOrder, opts: &GbOptions) -> Result<GroebnerResult, GroebnerError> {
    let Some(table) = check_tables(f)? else {
        return Ok(GroebnerResult { basis: Vec::new(), stats: GbStats::default() });
    };
    let ord = order.compile_partial(table.len())?;
    if ord.has_unranked() {
        gb_in::<CPoly>(f, &ord, opts)
    } else {
        gb_in::<BigInt>(f, &ord, opts)
    }
}

fn gb_in<C: Coeff>(f: &[Poly], ord: &CompiledOrder, opts: &GbOptions) -> Result<GroebnerResult, GroebnerError> {
    let inputs: Vec<IPoly<C>> = f.iter().filter(|p| !p.is_zero()).map(|p| IPoly::from_poly(p, ord)).collect();
    if inputs.is_empty() {
        return Ok(GroebnerResult { basis: Vec::new(), stats: GbStats::default() });
    }
    let like = Poly::zero(f[0].table());
    let (basis, stats) = Buchberger::new(ord, &opts.budget, opts.selection).run(inputs)?;
    Ok(GroebnerResult { basis: basis.iter().map(|p| p.to_poly(ord, &like)).collect(), stats })
}

/// Checks the Buchberger criterion directly: every S-polynomial of a pair
/// with non-coprime leading monomials reduces to zero.
pub fn is_groebner(basis: &[Poly], order: &MonomialOrder) -> Result<bool, GroebnerError> {
    let Some(table) = check_tables(basis)? else { return Ok(true) };
    let ord = order.compile_partial(table.len())?;
    if ord.has_unranked() {
        is_groebner_in::<CPoly>(basis, &ord)
    } else {
        is_groebner_in::<BigInt>(basis, &ord)
    }
}

fn is_groebner_in<C: Coeff>(basis: &[Poly], ord: &CompiledOrder) -> Result<bool, GroebnerError> {
    let gs: Vec<IPoly<C>> = basis.iter().filter(|p| !p.is_zero()).map(|p| IPoly::from_poly(p, ord)).collect();
    let budget = Budget::default();
    let mut red = Buchberger::new(ord, &budget, Selection::Normal);
    for g in &gs {
        red.install(g.clone());
    }
    for i in 0..gs.len() {
        for j in i + 1..gs.len() {
            if ord.key_coprime(&gs[i].lead().key, &gs[j].lead().key) {
                continue;
            }
            if !red.normal_form(spoly(&gs[i], &gs[j], ord))?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Remainder of `f` modulo `basis` under `order` (fraction-free, primitive).
pub fn normal_form(f: &Poly, basis: &[Poly], order: &MonomialOrder) -> Result<Poly, GroebnerError> {
    if basis.iter().any(|g| **g.table() != **f.table()) {
        return Err(PolyError::TableMismatch.into());
    }
    let ord = order.compile_partial(f.table().len())?;
    if ord.has_unranked() {
        normal_form_in::<CPoly>(f, basis, &ord)
    } else {
        normal_form_in::<BigInt>(f, basis, &ord)
    }
}

fn normal_form_in<C: Coeff>(f: &Poly, basis: &[Poly], ord: &CompiledOrder) -> Result<Poly, GroebnerError> {
    let budget = Budget::default();
    let mut red = Buchberger::new(ord, &budget, Selection::Normal);
    for g in basis.iter().filter(|g| !g.is_zero()) {
        red.install(IPoly::<C>::from_poly(g, ord));
    }
    if f.is_zero() {
        return Ok(f.clone());
    }
    Ok(red.normal_form(IPoly::from_poly(f, ord))?.to_poly(ord, f))
}

/// Variables ranked by class (auxiliary highest, parameters lowest), then by
/// table index.
pub fn default_ranking(table: &VarTable) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..table.len()).collect();
    idx.sort_by_key(|&i| (std::cmp::Reverse(table.class(i)), i));
    idx
}

fn extend_with_aux(table: &Arc<VarTable>, count: usize) -> (Arc<VarTable>, Vec<usize>) {
    let mut t = (**table).clone();
    let mut ids = Vec::new();
    let mut k = 0;
    while ids.len() < count {
        if let Ok(i) = t.push(VarDesc::Auxiliary(format!("sat{k}"))) {
            ids.push(i);
        }
        k += 1;
    }
    (Arc::new(t), ids)
}

fn prepend_block(order: &MonomialOrder, vars: Vec<usize>) -> MonomialOrder {
    let mut blocks = vec![OrderBlock { vars, inner: InnerOrder::Lex }];
    blocks.extend(order.blocks());
    MonomialOrder::Block(blocks)
}

pub fn saturate(f: &[Poly], h: &Poly, order: &MonomialOrder) -> Result<Vec<Poly>, GroebnerError> {
    saturate_with(f, h, order, &GbOptions::default())
}

/// Generators of `<f> : h^oo` via one auxiliary variable `t` and `1 - t*h`.
pub fn saturate_with(f: &[Poly], h: &Poly, order: &MonomialOrder, opts: &GbOptions) -> Result<Vec<Poly>, GroebnerError> {
    if h.is_zero() {
        return Err(GroebnerError::ZeroSaturator);
    }
    let table = h.table().clone();
    let (ext, aux) = extend_with_aux(&table, 1);
    let t = aux[0];
    let mut gens: Vec<Poly> = f.iter().map(|p| p.clone().with_table(&ext)).collect();
    let hh = h.clone().with_table(&ext);
    gens.push(Poly::one(&ext).sub(&Poly::var(&ext, t).mul(&hh)));
    let full = groebner_basis_with(&gens, &prepend_block(order, vec![t]), opts)?;
    Ok(full.basis.into_iter().filter(|g| !g.involves(t)).map(|g| g.with_table(&table)).collect())
}

fn elimination_order(ranking: &[usize], keep: &[usize], strategy: ElimStrategy) -> MonomialOrder {
    let elim: Vec<usize> = ranking.iter().copied().filter(|v| !keep.contains(v)).collect();
    let kept: Vec<usize> = ranking.iter().copied().filter(|v| keep.contains(v)).collect();
    match strategy {
        ElimStrategy::Lex => MonomialOrder::Lex(elim.into_iter().chain(kept).collect()),
        ElimStrategy::LexDeg => {
            let mut blocks = Vec::new();
            if !elim.is_empty() {
                blocks.push(OrderBlock { vars: elim, inner: InnerOrder::DegRevLex });
            }
            blocks.push(OrderBlock { vars: kept, inner: InnerOrder::DegRevLex });
            MonomialOrder::Block(blocks)
        }
    }
}

fn validate_keep(table: &VarTable, keep: &[usize]) -> Result<(), GroebnerError> {
    for i in 0..table.len() {
        if matches!(table.class(i), VarClass::Independent | VarClass::Parameter) && !keep.contains(&i) {
            return Err(GroebnerError::KeepMissing(table.name(i)));
        }
    }
    Ok(())
}

/// Generators of `<f>` intersected with the subring on `keep`. `ranking`
/// lists all variables highest first and fixes the order inside both the
/// eliminated and the kept block; `None` uses [`default_ranking`].
pub fn eliminate(f: &[Poly], keep: &[usize], strategy: ElimStrategy, ranking: Option<&[usize]>) -> Result<Vec<Poly>, GroebnerError> {
    Ok(eliminate_saturated(f, &[], keep, strategy, ranking, &GbOptions::default())?.generators)
}

/// Result of a combined saturation and elimination run.
#[derive(Clone, Debug)]
pub struct Elimination {
    /// Basis elements supported on the kept variables.
    pub generators: Vec<Poly>,
    /// The whole reduced basis, over `table`.
    pub basis: Vec<Poly>,
    pub order: MonomialOrder,
    /// Input table extended by the saturation variables.
    pub table: Arc<VarTable>,
    pub stats: GbStats,
}

/// Saturates `<f>` by the product of `saturators` and eliminates every
/// variable outside `keep` in one Groebner run. The auxiliary variable is
/// ranked above every eliminated variable, which computes the elimination
/// ideal of the saturation.
pub fn eliminate_saturated(
    f: &[Poly],
    saturators: &[Poly],
    keep: &[usize],
    strategy: ElimStrategy,
    ranking: Option<&[usize]>,
    opts: &GbOptions,
) -> Result<Elimination, GroebnerError> {
    let table = match check_tables(f)? {
        Some(t) => t,
        None => return Ok(Elimination {
            generators: Vec::new(),
            basis: Vec::new(),
            order: MonomialOrder::Lex(Vec::new()),
            table: Arc::new(VarTable::new()),
            stats: GbStats::default(),
        }),
    };
    validate_keep(&table, keep)?;
    let default;
    let ranking = match ranking {
        Some(r) => r,
        None => {
            default = default_ranking(&table);
            &default
        }
    };
    let mut h = Poly::one(&table);
    for s in saturators {
        if s.is_zero() {
            return Err(GroebnerError::ZeroSaturator);
        }
        h = h.mul(s);
    }
    let (ext, gens, full_ranking) = if h.is_constant() {
        (table.clone(), f.to_vec(), ranking.to_vec())
    } else {
        let (ext, aux) = extend_with_aux(&table, 1);
        let t = aux[0];
        let mut gens: Vec<Poly> = f.iter().map(|p| p.clone().with_table(&ext)).collect();
        gens.push(Poly::one(&ext).sub(&Poly::var(&ext, t).mul(&h.with_table(&ext))));
        let mut r = vec![t];
        r.extend_from_slice(ranking);
        (ext, gens, r)
    };
    let order = elimination_order(&full_ranking, keep, strategy);
    let res = groebner_basis_with(&gens, &order, opts)?;
    let generators = res
        .basis
        .iter()
        .filter(|g| g.vars().iter().all(|v| keep.contains(v)))
        .map(|g| g.clone().with_table(&table))
        .collect();
    Ok(Elimination { generators, basis: res.basis, order, table: ext, stats: res.stats })
}

/// A polynomial ideal with a lazily computed Groebner basis.
#[derive(Debug)]
pub struct Ideal {
    generators: Vec<Poly>,
    order: MonomialOrder,
    options: GbOptions,
    gb_cache: OnceLock<Vec<Poly>>,
}

impl Ideal {
    pub fn new(generators: Vec<Poly>, order: MonomialOrder) -> Self {
        Ideal::with_options(generators, order, GbOptions::default())
    }

    pub fn with_options(generators: Vec<Poly>, order: MonomialOrder, options: GbOptions) -> Self {
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal { generators, order, options, gb_cache: OnceLock::new() }
    }

    /// Wraps a known Groebner basis.
    pub fn from_basis(basis: Vec<Poly>, order: MonomialOrder) -> Self {
        let ideal = Ideal::new(basis.clone(), order);
        let _ = ideal.gb_cache.set(basis);
        ideal
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn basis(&self) -> Result<&[Poly], GroebnerError> {
        if let Some(b) = self.gb_cache.get() {
            return Ok(b);
        }
        let b = groebner_basis_with(&self.generators, &self.order, &self.options)?.basis;
        Ok(self.gb_cache.get_or_init(|| b))
    }
}

pub fn ideal_member(f: &Poly, ideal: &Ideal) -> Result<bool, GroebnerError> {
    if f.is_zero() {
        return Ok(true);
    }
    let basis = ideal.basis()?;
    if basis.is_empty() {
        return Ok(false);
    }
    Ok(normal_form(f, basis, ideal.order())?.is_zero())
}
