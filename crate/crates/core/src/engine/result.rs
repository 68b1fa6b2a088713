use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Duration;

use crate::diffalg::{DVar, DiffContext, DiffPoly};
use crate::groebner::GbStats;
use crate::polyring::{MonomialOrder, Poly, VarDesc, VarTable};

/// Differential order of an output equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdeOrder {
    Ordinary(u32),
    Partial(Vec<u32>),
}

/// An output equation `diff = 0` in the derivatives of the target.
#[derive(Clone, Debug)]
pub struct AdeResult {
    /// The equation over a table of target derivatives, independents and
    /// parameters.
    pub polynomial: Poly,
    /// The same polynomial as a differential polynomial in `ctx`.
    pub diff: DiffPoly,
    pub ctx: Arc<DiffContext>,
    pub order: AdeOrder,
    /// Total degree in the target derivatives.
    pub degree: u32,
    pub elapsed: Duration,
    pub options: BTreeMap<String, String>,
    pub warnings: Vec<String>,
    pub stats: GbStats,
    /// Outcome of the post hoc Buchberger criterion check, when requested.
    pub basis_verified: Option<bool>,
    /// Number of candidate equations in the elimination ideal.
    pub candidates: usize,
    /// Generators of the elimination ideal, in `ctx`.
    pub elimination: Vec<DiffPoly>,
}

impl AdeResult {
    pub fn target_name(&self) -> &str {
        &self.ctx.indet(0).name
    }
}

/// The lex order used for normalization and printing: target derivatives
/// by descending rank, then independents, then parameters.
pub fn canonical_ranking(table: &VarTable, ctx: &DiffContext) -> Vec<usize> {
    let theta = ctx.theta();
    let mut idx: Vec<usize> = (0..table.len()).collect();
    let key = |i: &usize| match table.desc(*i) {
        VarDesc::Deriv { indet, index } => (0u8, std::cmp::Reverse(theta.rank(index).unwrap_or(0)), *indet, 0usize),
        VarDesc::Independent(n) => (1, std::cmp::Reverse(0), 0, ctx.indep_index(n).unwrap_or(0)),
        VarDesc::Parameter(n) => (2, std::cmp::Reverse(0), 0, ctx.param_index(n).unwrap_or(0)),
        VarDesc::Auxiliary(_) => (3, std::cmp::Reverse(0), 0, *i),
    };
    idx.sort_by_key(key);
    idx
}

pub fn canonical_order(table: &VarTable, ctx: &DiffContext) -> MonomialOrder {
    MonomialOrder::Lex(canonical_ranking(table, ctx))
}

/// Builds the output context: the independents and parameters of `input`
/// and a single indeterminate `z_name` depending on `deps`.
pub fn output_context(input: &DiffContext, z_name: &str, deps: Vec<usize>) -> Arc<DiffContext> {
    let mut ctx = DiffContext::new(input.independents().to_vec()).expect("independents");
    for p in input.params() {
        ctx.add_param(p).expect("fresh parameter");
    }
    ctx.add_indet(z_name, deps).expect("fresh target name");
    Arc::new(ctx)
}

/// Wraps an eliminated polynomial in the output context, normalized.
#[allow(clippy::too_many_arguments)]
pub fn finish_result(
    p: &DiffPoly,
    ctx: &Arc<DiffContext>,
    ordinary: bool,
    elapsed: Duration,
    options: BTreeMap<String, String>,
    warnings: Vec<String>,
    stats: GbStats,
    candidates: usize,
) -> AdeResult {
    let mut table = VarTable::with_indeterminates(ctx.indet_names());
    p.register(&mut table);
    let table = Arc::new(table);
    let flat = p.flatten(&table).expect("registered");
    let order = canonical_order(&table, ctx);
    let polynomial = flat.normalize(&order).expect("nonzero output");
    let diff = DiffPoly::unflatten(&polynomial, ctx).expect("output variables");
    let multi = diff.order_of(0).unwrap_or_else(|| vec![0; ctx.l()]);
    let degree = diff
        .terms()
        .map(|(_, m)| m.iter().filter(|(v, _)| matches!(v, DVar::Deriv { .. })).map(|(_, e)| *e).sum::<u32>())
        .max()
        .unwrap_or(0);
    AdeResult {
        polynomial,
        diff,
        ctx: ctx.clone(),
        order: if ordinary { AdeOrder::Ordinary(multi[0]) } else { AdeOrder::Partial(multi) },
        degree,
        elapsed,
        options,
        warnings,
        stats,
        basis_verified: None,
        candidates,
        elimination: Vec::new(),
    }
}
