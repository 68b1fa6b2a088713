use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::diffalg::{flatten_family, DVar, DiffContext, DiffPoly, RatFunc};
use crate::dynsys::split_factors;
use crate::groebner::{eliminate_saturated, is_groebner, ElimStrategy, GbOptions, GbStats};
use crate::polyring::{Poly, VarDesc};

use super::result::{finish_result, output_context, AdeResult};
use super::prep::simplify;
use super::select::select_min_multi;
use super::EngineError;

/// An input PDE `p = 0` in a single indeterminate.
#[derive(Clone, Debug)]
pub struct InputPde {
    pub p: DiffPoly,
    pub indet: usize,
    /// Componentwise orders in the independents.
    pub order: Vec<u32>,
    /// Denominator cleared when the equation was read.
    pub cleared: DiffPoly,
}

impl InputPde {
    pub fn new(p: DiffPoly) -> Result<Self, EngineError> {
        let mut indets: Vec<usize> = p.derivs().into_iter().map(|(i, _)| i).collect();
        indets.dedup();
        if indets.len() != 1 {
            return Err(EngineError::InvalidInput(format!(
                "each input must involve exactly one unknown function, `{p}` involves {}",
                indets.len()
            )));
        }
        let indet = indets[0];
        let order = p.order_of(indet).expect("indeterminate occurs");
        let cleared = DiffPoly::one(p.context());
        Ok(InputPde { p, indet, order, cleared })
    }

    pub fn with_cleared(mut self, cleared: DiffPoly) -> Self {
        self.cleared = cleared;
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiOptions {
    /// Componentwise order bound; defaults to the sum of the input orders.
    pub maxord: Option<Vec<u32>>,
    pub ordering: Option<ElimStrategy>,
    pub gb: GbOptions,
    pub verify_basis: bool,
}

/// Search exhausted without finding an equation within the bound.
#[derive(Clone, Debug, PartialEq)]
pub struct NotFound {
    pub bound: Vec<u32>,
    /// The last number of input derivations tried.
    pub last_d: u64,
    pub elapsed: Duration,
    pub options: BTreeMap<String, String>,
}

#[derive(Clone, Debug)]
pub enum MultiOutcome {
    Found(Box<AdeResult>),
    NotFound(NotFound),
}

impl MultiOutcome {
    pub fn found(self) -> Option<AdeResult> {
        match self {
            MultiOutcome::Found(r) => Some(*r),
            MultiOutcome::NotFound(_) => None,
        }
    }
}

/// `theta^k R` for `k <= nu` whose multi-index lies below `bounds`.
pub fn seed_output_derivatives(r: &DiffPoly, bounds: &[u32], nu: u64) -> Vec<DiffPoly> {
    let theta = r.context().theta();
    (0..=nu)
        .filter(|&k| theta.unrank(k).iter().zip(bounds).all(|(a, b)| a <= b))
        .map(|k| r.theta_derive(k))
        .filter(|p| !p.is_zero())
        .collect()
}

/// `p, theta p, ..., theta^d p`.
pub fn seed_input_derivatives(p: &DiffPoly, d: u64) -> Vec<DiffPoly> {
    (0..=d).map(|k| p.theta_derive(k)).collect()
}

fn with_target(input: &DiffContext, z_name: &str, deps: Vec<usize>) -> Result<(Arc<DiffContext>, usize, String), EngineError> {
    let mut ctx = input.clone();
    let mut name = z_name.to_string();
    loop {
        match ctx.add_indet(&name, deps.clone()) {
            Ok(i) => return Ok((Arc::new(ctx), i, name)),
            Err(crate::diffalg::DiffError::NameClash(_)) => name.push('_'),
            Err(e) => return Err(e.into()),
        }
    }
}

/// Searches a PDE satisfied by `r(f_1, ..., f_N)` whose orders are bounded
/// componentwise, escalating the number of input derivations on failure.
pub fn arithmetic_multi(ades: &[InputPde], r: &RatFunc, z_name: &str, opts: &MultiOptions) -> Result<MultiOutcome, EngineError> {
    let start = Instant::now();
    if ades.is_empty() {
        return Err(EngineError::InvalidInput("at least one input equation is required".into()));
    }
    let input_ctx = r.num.context().clone();
    let l = input_ctx.l();
    let theta = input_ctx.theta();
    for a in ades {
        if !Arc::ptr_eq(a.p.context(), &input_ctx) && *a.p.context().as_ref() != *input_ctx {
            return Err(EngineError::InvalidInput("inputs and target live in different contexts".into()));
        }
    }
    let bounds = match &opts.maxord {
        Some(b) if b.len() != l => {
            return Err(EngineError::InvalidInput(format!("maxord has {} components, expected {l}", b.len())))
        }
        Some(b) => b.clone(),
        None => (0..l).map(|j| ades.iter().map(|a| a.order[j]).sum()).collect(),
    };
    let nu = theta.rank(&bounds)?;
    let m = ades.iter().map(|a| a.order.clone()).min_by_key(|o| theta.rank(o).unwrap_or(u64::MAX)).expect("nonempty");
    let diff: Vec<u32> = bounds.iter().zip(&m).map(|(a, b)| a.saturating_sub(*b)).collect();
    let d0 = theta.rank(&diff)?;

    // z depends on what r depends on
    let mut deps: Vec<usize> = Vec::new();
    for p in [&r.num, &r.den] {
        for (i, _) in p.derivs() {
            deps.extend(input_ctx.indet(i).deps.iter().copied());
        }
        for v in p.vars() {
            if let DVar::Indep(j) = v {
                deps.push(j);
            }
        }
    }
    deps.sort();
    deps.dedup();
    if deps.is_empty() {
        deps = (0..l).collect();
    }
    let (ctx, z, _) = with_target(&input_ctx, z_name, deps.clone())?;
    let lift = |p: &DiffPoly| p.rebase(&ctx);
    let num = lift(&r.num)?;
    let den = lift(&r.den)?;
    if den.is_zero() {
        return Err(EngineError::Dyn(crate::dynsys::DynError::DegenerateExpression));
    }
    let big_r = den.mul(&DiffPoly::deriv(&ctx, z, vec![0; l])).sub(&num);
    let seeds = seed_output_derivatives(&big_r, &bounds, nu);

    // only factors involving unknown functions; the rest are units
    let mut sat_src = Vec::new();
    if !den.is_constant() {
        sat_src.push(den.clone());
    }
    for a in ades {
        if !a.cleared.is_constant() {
            sat_src.push(lift(&a.cleared)?);
        }
    }
    let sats: Vec<DiffPoly> = split_factors(&sat_src).into_iter().filter(|f| !f.derivs().is_empty()).collect();
    let inputs: Vec<DiffPoly> = ades.iter().map(|a| lift(&a.p)).collect::<Result<_, _>>()?;
    let strategy = opts.ordering.unwrap_or(ElimStrategy::Lex);

    let mut options = BTreeMap::new();
    options.insert("maxord".to_string(), format!("{bounds:?}"));
    options.insert(
        "ordering".to_string(),
        match strategy {
            ElimStrategy::Lex => "lex",
            ElimStrategy::LexDeg => "lexdeg",
        }
        .to_string(),
    );

    let mut stats = GbStats::default();
    let mut d = d0;
    loop {
        let mut polys = seeds.clone();
        for p in &inputs {
            polys.extend(seed_input_derivatives(p, d));
        }
        polys.retain(|p| !p.is_zero());
        let n_gens = polys.len();
        polys.extend(sats.iter().cloned());
        let (table, flat) = flatten_family(&polys)?;
        let (gens, sat_polys) = flat.split_at(n_gens);

        let mut idx: Vec<usize> = (0..table.len()).collect();
        let key = |i: &usize| match table.desc(*i) {
            VarDesc::Deriv { indet, index } if *indet != z => {
                (0u8, std::cmp::Reverse(theta.rank(index).unwrap_or(0)), *indet)
            }
            VarDesc::Deriv { index, .. } => (1, std::cmp::Reverse(theta.rank(index).unwrap_or(0)), 0),
            VarDesc::Independent(_) => (2, std::cmp::Reverse(0), *i),
            VarDesc::Parameter(_) => (3, std::cmp::Reverse(0), *i),
            VarDesc::Auxiliary(_) => (0, std::cmp::Reverse(u64::MAX), *i),
        };
        // independents and parameters stay in the coefficient field
        idx.retain(|&i| matches!(table.desc(i), VarDesc::Deriv { .. }));
        idx.sort_by_key(key);
        let is_z = |v: usize| matches!(table.desc(v), VarDesc::Deriv { indet, .. } if *indet == z);
        let keep: Vec<usize> = (0..table.len())
            .filter(|&i| !matches!(table.desc(i), VarDesc::Deriv { .. }) || is_z(i))
            .collect();
        let (gens, sat_polys) = simplify(gens.to_vec(), sat_polys.to_vec(), &|v| !keep.contains(&v));
        let elim = eliminate_saturated(&gens, &sat_polys, &keep, strategy, Some(&idx), &opts.gb)?;
        accumulate(&mut stats, &elim.stats);
        let cands: Vec<_> = elim.generators.iter().filter(|g| g.vars().into_iter().any(is_z)).cloned().collect();
        if let Some(best) = select_min_multi(&cands, theta) {
            let out_ctx = output_context(&input_ctx, z_name, deps.clone());
            let to_output = |p: &Poly| -> Result<DiffPoly, EngineError> {
                Ok(DiffPoly::unflatten(p, &ctx)?.map_vars(&out_ctx, &|v: &DVar| match v {
                    DVar::Deriv { indet, index } if *indet == z => Some(DiffPoly::deriv(&out_ctx, 0, index.clone())),
                    _ => None,
                }))
            };
            let mapped = to_output(&best)?;
            options.insert("d".to_string(), d.to_string());
            let verified = if opts.verify_basis { Some(is_groebner(&elim.basis, &elim.order)?) } else { None };
            stats.basis_size = elim.stats.basis_size;
            let mut res = finish_result(&mapped, &out_ctx, false, start.elapsed(), options, Vec::new(), stats, cands.len());
            res.basis_verified = verified;
            res.elimination = elim.generators.iter().map(to_output).collect::<Result<_, _>>()?;
            return Ok(MultiOutcome::Found(Box::new(res)));
        }
        if d >= nu {
            return Ok(MultiOutcome::NotFound(NotFound { bound: bounds, last_d: d, elapsed: start.elapsed(), options }));
        }
        d += 1;
    }
}

fn accumulate(total: &mut GbStats, s: &GbStats) {
    total.pairs_processed += s.pairs_processed;
    total.pairs_pruned += s.pairs_pruned;
    total.zero_reductions += s.zero_reductions;
    total.reduction_steps += s.reduction_steps;
    total.max_coeff_bits = total.max_coeff_bits.max(s.max_coeff_bits);
    total.elapsed += s.elapsed;
}
