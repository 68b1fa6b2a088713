//! State-space construction: every input ADE of order `n` becomes a chain of
//! `n` first-order states whose top state carries the (radical-)rational
//! relation, and the target expression becomes `den(r) z - num(r)`.

use std::sync::Arc;

use thiserror::Error;

use crate::diffalg::{flatten_family, DVar, DiffContext, DiffError, DiffPoly, RatFunc};
use crate::groebner::{default_ranking, ideal_member, saturate, GroebnerError, Ideal};
use crate::polyring::MonomialOrder;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynError {
    #[error("input equation {0} has order 0; only differential equations are supported")]
    OrderZero(String),
    #[error("input equation involves {0} dependent variables, expected exactly one")]
    NotSingleIndeterminate(usize),
    #[error("state-space construction needs one independent variable, found {0}")]
    NotOrdinary(usize),
    #[error("two input equations constrain {0}")]
    DuplicateInput(String),
    #[error("expression uses {0}, which has no input equation")]
    UnknownIndeterminate(String),
    #[error("expression uses derivative of order {order} of {name}, but its equation has order {bound}")]
    OrderOutOfBound { name: String, order: u32, bound: u32 },
    #[error("denominator of the expression vanishes on the solutions")]
    DegenerateExpression,
    #[error(transparent)]
    Diff(#[from] DiffError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

/// An input equation `p = 0` in one indeterminate, written as
/// `c_m (y^(n))^m + rest`.
#[derive(Clone, Debug)]
pub struct InputAde {
    pub p: DiffPoly,
    pub indet: usize,
    pub order: u32,
    pub top_degree: u32,
    pub initial: DiffPoly,
    pub rest: DiffPoly,
    /// Denominator cleared when the equation was read; saturated away.
    pub cleared: DiffPoly,
}

impl InputAde {
    pub fn new(p: DiffPoly) -> Result<Self, DynError> {
        let ctx = p.context().clone();
        if ctx.l() != 1 {
            return Err(DynError::NotOrdinary(ctx.l()));
        }
        let mut indets: Vec<usize> = p.derivs().into_iter().map(|(i, _)| i).collect();
        indets.dedup();
        if indets.len() != 1 {
            return Err(DynError::NotSingleIndeterminate(indets.len()));
        }
        let indet = indets[0];
        let (m, initial, rest) = decompose_lho(&p)?;
        let order = p.order_of(indet).map(|o| o[0]).unwrap_or(0);
        let cleared = DiffPoly::one(&ctx);
        Ok(InputAde { p, indet, order, top_degree: m, initial, rest, cleared })
    }

    pub fn with_cleared(mut self, cleared: DiffPoly) -> Self {
        self.cleared = cleared;
        self
    }

    pub fn is_lho(&self) -> bool {
        self.top_degree == 1
    }

    pub fn name(&self) -> String {
        self.p.context().indet(self.indet).name.clone()
    }

    pub fn separant(&self) -> DiffPoly {
        self.p.derivative_wrt(&DVar::deriv(self.indet, vec![self.order]))
    }
}

/// `p = c_m (y^(n))^m + rest` with `deg_{y^(n)} rest < m`.
pub fn decompose_lho(p: &DiffPoly) -> Result<(u32, DiffPoly, DiffPoly), DynError> {
    let ds = p.derivs();
    let top = ds
        .iter()
        .filter(|(_, idx)| idx.iter().any(|&k| k > 0))
        .max_by_key(|(_, idx)| idx.iter().sum::<u32>());
    let Some((indet, idx)) = top else {
        return Err(DynError::OrderZero(p.to_string()));
    };
    let v = DVar::deriv(*indet, idx.clone());
    let m = p.degree_in(&v);
    let c = p.coeff_of(&v, m);
    let lead = c.mul(&DiffPoly::var(p.context(), v).pow(m));
    Ok((m, c, p.sub(&lead)))
}

/// The state-space model of a family of ordinary input ADEs and a target
/// expression. States `w_1..w_M` and the output `z` are indeterminates of
/// [`DynSystem::ctx`]; the numerators `a`, `e` solve each state equation as
/// `init_i (w_i')^mu_i = a_i + e_i`, `e_i` collecting the terms with `w_i'`.
#[derive(Clone, Debug)]
pub struct DynSystem {
    pub ctx: Arc<DiffContext>,
    pub dim: usize,
    pub mu: Vec<u32>,
    pub a: Vec<DiffPoly>,
    pub e: Vec<DiffPoly>,
    pub init: Vec<DiffPoly>,
    /// Least common multiple of the initials and the denominator of `r`.
    pub q: DiffPoly,
    pub b: DiffPoly,
    pub r_den: DiffPoly,
    /// Pairwise distinct primitive factors of `Q` and the separants.
    pub h_factors: Vec<DiffPoly>,
    /// Primitive factors of `Q` alone.
    pub q_factors: Vec<DiffPoly>,
    /// `(input index, derivative order)` carried by each state.
    pub state_map: Vec<(usize, u32)>,
    /// First state of each input block.
    pub block_start: Vec<usize>,
    pub all_lho: bool,
    /// Index of the output indeterminate in `ctx`.
    pub z: usize,
}

impl DynSystem {
    pub fn w(&self, i: usize) -> DiffPoly {
        DiffPoly::deriv(&self.ctx, i, vec![0])
    }

    pub fn w_prime(&self, i: usize) -> DiffPoly {
        DiffPoly::deriv(&self.ctx, i, vec![1])
    }

    pub fn z_var(&self) -> DiffPoly {
        DiffPoly::deriv(&self.ctx, self.z, vec![0])
    }

    /// Whether state `i` is the top of its block.
    pub fn is_top(&self, i: usize) -> bool {
        i + 1 == self.dim || self.block_start.contains(&(i + 1))
    }

    /// `init_i (w_i')^mu_i - a_i - e_i` for state `i`.
    pub fn state_relation(&self, i: usize) -> DiffPoly {
        self.init[i].mul(&self.w_prime(i).pow(self.mu[i])).sub(&self.a[i]).sub(&self.e[i])
    }

    pub fn output_relation(&self) -> DiffPoly {
        self.r_den.mul(&self.z_var()).sub(&self.b)
    }

    /// Separant of the relation of state `i`.
    pub fn separant(&self, i: usize) -> DiffPoly {
        self.state_relation(i).derivative_wrt(&DVar::deriv(i, vec![1]))
    }
}

/// Distinct primitive non-constant factors, splitting off variables that
/// divide every term.
pub fn split_factors(polys: &[DiffPoly]) -> Vec<DiffPoly> {
    let mut out: Vec<DiffPoly> = Vec::new();
    let push = |f: DiffPoly, out: &mut Vec<DiffPoly>| {
        if !f.is_constant() && !out.contains(&f) {
            out.push(f);
        }
    };
    for p in polys {
        if p.is_zero() {
            continue;
        }
        let (rest, vars) = p.split_content();
        for v in vars {
            push(DiffPoly::var(p.context(), v), &mut out);
        }
        push(rest, &mut out);
    }
    out
}

fn lcm_probe(f: &DiffPoly, g: &DiffPoly) -> DiffPoly {
    if g.is_constant() || f.exact_divide(g).is_some() {
        f.clone()
    } else if f.is_constant() || g.exact_divide(f).is_some() {
        g.clone()
    } else {
        f.mul(g)
    }
}

fn state_ctx(input: &DiffContext, dim: usize, z_name: &str) -> Result<(Arc<DiffContext>, usize), DynError> {
    let mut ctx = DiffContext::new(input.independents().to_vec())?;
    for p in input.params() {
        ctx.add_param(p)?;
    }
    for i in 0..dim {
        let mut name = format!("w{}", i + 1);
        while ctx.add_indet(&name, vec![0]).is_err() {
            name.push('_');
        }
    }
    let mut zn = z_name.to_string();
    while ctx.add_indet(&zn, vec![0]).is_err() {
        zn.push('_');
    }
    Ok((Arc::new(ctx), dim))
}

/// Builds the state-space model. `check_degenerate` tests the denominator of
/// `r` for membership in the saturated system ideal.
pub fn build_state_system(ades: &[InputAde], r: &RatFunc, z_name: &str, check_degenerate: bool) -> Result<DynSystem, DynError> {
    let input_ctx = r.num.context().clone();
    if input_ctx.l() != 1 {
        return Err(DynError::NotOrdinary(input_ctx.l()));
    }
    let mut block_start = Vec::new();
    let mut state_map = Vec::new();
    let mut start_of = vec![None; input_ctx.indets().len()];
    for (k, ade) in ades.iter().enumerate() {
        if ade.order == 0 {
            return Err(DynError::OrderZero(ade.p.to_string()));
        }
        if start_of[ade.indet].is_some() {
            return Err(DynError::DuplicateInput(ade.name()));
        }
        start_of[ade.indet] = Some((state_map.len(), ade.order));
        block_start.push(state_map.len());
        for j in 0..ade.order {
            state_map.push((k, j));
        }
    }
    let dim = state_map.len();
    let (ctx, z) = state_ctx(&input_ctx, dim, z_name)?;
    let params_ok = |i: usize| DiffPoly::param(&ctx, i);
    let indep = |i: usize| DiffPoly::indep(&ctx, i);

    // y_i^(j) -> w_{s+j} for j < n, y_i^(n) -> w_{s+n-1}'
    let map_ade = |p: &DiffPoly| -> Result<DiffPoly, DynError> {
        let mut err = None;
        let out = p.map_vars(&ctx, &|v: &DVar| match v {
            DVar::Deriv { indet, index } => match start_of[*indet] {
                Some((s, n)) if index[0] < n => Some(DiffPoly::deriv(&ctx, s + index[0] as usize, vec![0])),
                Some((s, n)) if index[0] == n => Some(DiffPoly::deriv(&ctx, s + n as usize - 1, vec![1])),
                _ => None,
            },
            DVar::Param(i) => Some(params_ok(*i)),
            DVar::Indep(i) => Some(indep(*i)),
        });
        for dv in p.derivs() {
            match start_of[dv.0] {
                None => err = Some(DynError::UnknownIndeterminate(input_ctx.indet(dv.0).name.clone())),
                Some((_, n)) if dv.1[0] > n => {
                    err = Some(DynError::OrderOutOfBound { name: input_ctx.indet(dv.0).name.clone(), order: dv.1[0], bound: n })
                }
                _ => {}
            }
        }
        err.map_or(Ok(out), Err)
    };
    let map_r = |p: &DiffPoly| -> Result<DiffPoly, DynError> {
        for (indet, idx) in p.derivs() {
            let name = input_ctx.indet(indet).name.clone();
            match start_of[indet] {
                None => return Err(DynError::UnknownIndeterminate(name)),
                Some((_, n)) if idx[0] >= n => return Err(DynError::OrderOutOfBound { name, order: idx[0], bound: n - 1 }),
                _ => {}
            }
        }
        map_ade(p)
    };

    let mut mu = Vec::with_capacity(dim);
    let mut a = Vec::with_capacity(dim);
    let mut e = Vec::with_capacity(dim);
    let mut init = Vec::with_capacity(dim);
    for (i, &(k, j)) in state_map.iter().enumerate() {
        let ade = &ades[k];
        if j + 1 < ade.order {
            mu.push(1);
            a.push(DiffPoly::deriv(&ctx, i + 1, vec![0]));
            e.push(DiffPoly::zero(&ctx));
            init.push(DiffPoly::one(&ctx));
            continue;
        }
        let wp = DVar::deriv(i, vec![1]);
        let rest = map_ade(&ade.rest)?.neg();
        let mut free = DiffPoly::zero(&ctx);
        let mut with = DiffPoly::zero(&ctx);
        for (c, m) in rest.terms() {
            let mut t = DiffPoly::zero(&ctx);
            t.add_term(c.clone(), m.to_vec());
            if m.iter().any(|(v, _)| *v == wp) {
                with = with.add(&t);
            } else {
                free = free.add(&t);
            }
        }
        mu.push(ade.top_degree);
        a.push(free);
        e.push(with);
        init.push(map_ade(&ade.initial)?);
    }
    let b = map_r(&r.num)?;
    let r_den = map_r(&r.den)?;
    if r_den.is_zero() {
        return Err(DynError::DegenerateExpression);
    }
    let all_lho = ades.iter().all(InputAde::is_lho);
    let mut q_sources: Vec<DiffPoly> = init.clone();
    q_sources.push(r_den.clone());
    for ade in ades {
        if !ade.cleared.is_constant() {
            q_sources.push(map_ade(&ade.cleared)?);
        }
    }
    let mut q = DiffPoly::one(&ctx);
    for c in &q_sources {
        q = lcm_probe(&q, c);
    }
    let q_factors = split_factors(&q_sources);
    let mut sys = DynSystem {
        ctx,
        dim,
        mu,
        a,
        e,
        init,
        q,
        b,
        r_den,
        h_factors: Vec::new(),
        q_factors: q_factors.clone(),
        state_map,
        block_start,
        all_lho,
        z,
    };
    let mut hs = q_factors;
    for i in 0..dim {
        if sys.is_top(i) && sys.mu[i] > 1 {
            hs.push(sys.separant(i));
        }
    }
    sys.h_factors = split_factors(&hs);
    if check_degenerate && !sys.r_den.is_constant() && den_vanishes(&sys)? {
        return Err(DynError::DegenerateExpression);
    }
    Ok(sys)
}

fn den_vanishes(sys: &DynSystem) -> Result<bool, DynError> {
    // saturate by the factors of H that do not come from r's denominator
    let mut h = DiffPoly::one(&sys.ctx);
    for f in sys.h_factors.iter().filter(|f| sys.r_den.exact_divide(f).is_none()) {
        h = h.mul(f);
    }
    let mut polys: Vec<DiffPoly> = (0..sys.dim).map(|i| sys.state_relation(i)).collect();
    polys.push(h);
    polys.push(sys.r_den.clone());
    let (table, flat) = flatten_family(&polys)?;
    let n = flat.len();
    let (gens, hh, den) = (&flat[..n - 2], &flat[n - 2], &flat[n - 1]);
    let order = MonomialOrder::DegRevLex(default_ranking(&table));
    let sat = if hh.is_constant() { gens.to_vec() } else { saturate(gens, hh, &order)? };
    Ok(ideal_member(den, &Ideal::new(sat, order))?)
}

/// The state relations followed by the output relation.
pub fn system_polynomials(sys: &DynSystem) -> Vec<DiffPoly> {
    let mut out: Vec<DiffPoly> = (0..sys.dim).map(|i| sys.state_relation(i)).collect();
    out.push(sys.output_relation());
    out
}
