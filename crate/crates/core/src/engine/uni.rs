use std::collections::BTreeMap;
use std::time::Instant;

use crate::diffalg::{flatten_family, DVar, DiffPoly, RatFunc};
use crate::dynsys::{build_state_system, system_polynomials, InputAde};
use crate::groebner::{eliminate_saturated, is_groebner, ElimStrategy, GbOptions};
use crate::polyring::{Poly, VarDesc};

use super::result::{finish_result, output_context, AdeResult};
use super::prep::simplify;
use super::select::select_min;
use super::EngineError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LhoMode {
    #[default]
    Auto,
    ForceLho,
    ForceNonLho,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UniOptions {
    pub lho_mode: LhoMode,
    /// `None` picks lex on the l.h.o. path and lexdeg on the separant path.
    pub ordering: Option<ElimStrategy>,
    pub separants_zeros: bool,
    pub diff_first: bool,
    pub gb: GbOptions,
    /// Re-check the Buchberger criterion on the final basis.
    pub verify_basis: bool,
    /// Skip the degenerate-denominator membership test.
    pub skip_degeneracy_check: bool,
}

fn strategy_name(s: ElimStrategy) -> &'static str {
    match s {
        ElimStrategy::Lex => "lex",
        ElimStrategy::LexDeg => "lexdeg",
    }
}

/// Finds an ODE satisfied by `r(f_1, ..., f_N)` for generic solutions `f_i`
/// of the inputs, of order at most the sum of the input orders.
pub fn arithmetic_uni(ades: &[InputAde], r: &RatFunc, z_name: &str, opts: &UniOptions) -> Result<AdeResult, EngineError> {
    let start = Instant::now();
    if ades.is_empty() {
        return Err(EngineError::InvalidInput("at least one input equation is required".into()));
    }
    let mut inputs: Vec<InputAde> = ades.to_vec();
    let differentiate = opts.diff_first || opts.lho_mode == LhoMode::ForceLho;
    if differentiate {
        for a in inputs.iter_mut() {
            if !a.is_lho() {
                let cleared = a.cleared.clone();
                *a = InputAde::new(a.p.total_derive()?)?.with_cleared(cleared);
            }
        }
    }
    let sys = build_state_system(&inputs, r, z_name, !opts.skip_degeneracy_check)?;
    let separant_path = match opts.lho_mode {
        LhoMode::Auto => !sys.all_lho,
        LhoMode::ForceLho => false,
        LhoMode::ForceNonLho => true,
    };
    let mut warnings = Vec::new();
    let h = if opts.separants_zeros {
        warnings.push("separants not saturated: the elimination ideal may be trivial and the output may carry extra factors".to_string());
        sys.q_factors.clone()
    } else if separant_path {
        sys.h_factors.clone()
    } else {
        sys.q_factors.clone()
    };
    let strategy = opts.ordering.unwrap_or(if separant_path { ElimStrategy::LexDeg } else { ElimStrategy::Lex });

    let m = sys.dim as u32;
    let mut polys: Vec<DiffPoly> = Vec::new();
    let base = system_polynomials(&sys);
    let (states, zrel) = base.split_at(base.len() - 1);
    for p in states {
        let mut d = p.clone();
        for _ in 0..m {
            polys.push(d.clone());
            d = d.total_derive()?;
        }
    }
    let mut d = zrel[0].clone();
    for _ in 0..=m {
        polys.push(d.clone());
        d = d.total_derive()?;
    }
    let n_gens = polys.len();
    polys.extend(h.iter().cloned());
    let (table, flat) = flatten_family(&polys)?;
    let (gens, sats) = flat.split_at(n_gens);

    // t > w^(k) by descending k, then state > z^(k) descending > x > params
    let mut idx: Vec<usize> = (0..table.len()).collect();
    let key = |i: &usize| match table.desc(*i) {
        VarDesc::Deriv { indet, index } if *indet != sys.z => (0u8, std::cmp::Reverse(index[0]), *indet),
        VarDesc::Deriv { index, .. } => (1, std::cmp::Reverse(index[0]), 0),
        VarDesc::Independent(_) => (2, std::cmp::Reverse(0), *i),
        VarDesc::Parameter(_) => (3, std::cmp::Reverse(0), *i),
        VarDesc::Auxiliary(_) => (0, std::cmp::Reverse(u32::MAX), *i),
    };
    // independents and parameters stay in the coefficient field
    idx.retain(|&i| matches!(table.desc(i), VarDesc::Deriv { .. }));
    idx.sort_by_key(key);
    let keep: Vec<usize> = (0..table.len())
        .filter(|&i| match table.desc(i) {
            VarDesc::Deriv { indet, .. } => *indet == sys.z,
            _ => true,
        })
        .collect();
    let (gens, sats) = simplify(gens.to_vec(), sats.to_vec(), &|v| !keep.contains(&v));
    let elim = eliminate_saturated(&gens, &sats, &keep, strategy, Some(&idx), &opts.gb)?;
    let is_z = |v: usize| matches!(table.desc(v), VarDesc::Deriv { indet, .. } if *indet == sys.z);
    let cands: Vec<_> = elim.generators.iter().filter(|g| g.vars().into_iter().any(is_z)).cloned().collect();
    let Some(best) = select_min(&cands) else {
        return Err(EngineError::NoAdeFound);
    };

    let out_ctx = output_context(r.num.context(), z_name, vec![0]);
    let z = sys.z;
    let to_output = |p: &Poly| -> Result<DiffPoly, EngineError> {
        Ok(DiffPoly::unflatten(p, &sys.ctx)?.map_vars(&out_ctx, &|v: &DVar| match v {
            DVar::Deriv { indet, index } if *indet == z => Some(DiffPoly::deriv(&out_ctx, 0, index.clone())),
            _ => None,
        }))
    };
    let mapped = to_output(&best)?;
    let mut options = BTreeMap::new();
    options.insert(
        "lho".to_string(),
        match opts.lho_mode {
            LhoMode::Auto => "auto",
            LhoMode::ForceLho => "true",
            LhoMode::ForceNonLho => "false",
        }
        .to_string(),
    );
    options.insert("path".into(), if separant_path { "separant" } else { "lho" }.into());
    options.insert("ordering".into(), strategy_name(strategy).into());
    options.insert("separants_zeros".into(), opts.separants_zeros.to_string());
    options.insert("diff_first".into(), opts.diff_first.to_string());
    let verified = if opts.verify_basis { Some(is_groebner(&elim.basis, &elim.order)?) } else { None };
    let mut res = finish_result(&mapped, &out_ctx, true, start.elapsed(), options, warnings, elim.stats, cands.len());
    res.basis_verified = verified;
    res.elimination = elim.generators.iter().map(to_output).collect::<Result<_, _>>()?;
    Ok(res)
}

/// The single-input specialization of [`arithmetic_uni`].
pub fn unary_uni(ade: &InputAde, r: &RatFunc, z_name: &str, opts: &UniOptions) -> Result<AdeResult, EngineError> {
    arithmetic_uni(std::slice::from_ref(ade), r, z_name, opts)
}
