//! Differential polynomials over a set of independent variables, the
//! graded co-lex ranking of derivative multi-indices, and flattening into
//! ordinary polynomials.

mod diffpoly;
mod rank;

pub use diffpoly::{DVar, DiffContext, DiffPoly, Indeterminate};
pub use rank::{sigma_rank, sigma_unrank, ThetaRank};


use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiffError {
    #[error("at least one independent variable is required")]
    NoIndependents,
    #[error("multi-index has {found} components, expected {expected}")]
    Arity { expected: usize, found: usize },
    #[error("total derivative needs one independent variable, context has {0}")]
    NotOrdinary(usize),
    #[error("polynomial involves no derivative of an indeterminate")]
    NoDerivative,
    #[error("variable {0} is not registered in the table")]
    Unregistered(String),
    #[error("differential polynomials live in incompatible contexts")]
    ContextMismatch,
    #[error("name {0} is already in use")]
    NameClash(String),
    #[error("invalid dependency list for {0}")]
    BadDependencies(String),
}

/// Componentwise maximum of the derivative indices in `p`.
pub fn diff_order(p: &DiffPoly) -> Result<Vec<u32>, DiffError> {
    p.diff_order()
}

pub fn theta_derive(p: &DiffPoly, k: u64) -> DiffPoly {
    p.theta_derive(k)
}

pub fn total_derive(p: &DiffPoly) -> Result<DiffPoly, DiffError> {
    p.total_derive()
}

/// A quotient of differential polynomials, `num / den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    pub num: DiffPoly,
    pub den: DiffPoly,
}

impl RatFunc {
    pub fn new(num: DiffPoly, den: DiffPoly) -> Self {
        RatFunc { num, den }
    }

    pub fn poly(p: DiffPoly) -> Self {
        let den = DiffPoly::one(p.context());
        RatFunc { num: p, den }
    }
}

/// Flattens a family of differential polynomials over one fresh table that
/// registers their variables in first-seen order.
pub fn flatten_family(polys: &[DiffPoly]) -> Result<(std::sync::Arc<crate::polyring::VarTable>, Vec<crate::polyring::Poly>), DiffError> {
    let names = polys.first().map(|p| p.context().indet_names()).unwrap_or_default();
    let mut table = crate::polyring::VarTable::with_indeterminates(names);
    for p in polys {
        p.register(&mut table);
    }
    let table = std::sync::Arc::new(table);
    let flat = polys.iter().map(|p| p.flatten(&table)).collect::<Result<Vec<_>, _>>()?;
    Ok((table, flat))
}
