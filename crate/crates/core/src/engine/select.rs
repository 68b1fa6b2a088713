use crate::diffalg::ThetaRank;
use crate::polyring::{Poly, VarDesc};

/// Highest derivative order (total, for several variables) of the target
/// derivatives in `p`, its degree in them, and the highest rank present.
fn profile(p: &Poly, theta: ThetaRank) -> (u32, u32, u64) {
    let t = p.table();
    let mut order = 0;
    let mut top_rank = 0;
    for v in p.vars() {
        if let VarDesc::Deriv { index, .. } = t.desc(v) {
            order = order.max(index.iter().sum());
            top_rank = top_rank.max(theta.rank(index).unwrap_or(0));
        }
    }
    let deg = p.degree_where(|v| matches!(t.desc(v), VarDesc::Deriv { .. }));
    (order, deg, top_rank)
}

/// Among candidates of minimal order, one of minimal degree in the target
/// derivatives; ties go to fewer terms, then to the smaller printed form.
pub fn select_min(g: &[Poly]) -> Option<Poly> {
    let theta = ThetaRank::new(1).expect("l = 1");
    g.iter()
        .min_by_key(|p| {
            let (o, d, _) = profile(p, theta);
            (o, d, p.len(), p.to_string())
        })
        .cloned()
}

/// Multivariate selection: minimal total order, then degree, then term
/// count; remaining ties prefer the candidate whose highest derivative has
/// the largest rank, then the smaller printed form.
pub fn select_min_multi(g: &[Poly], theta: ThetaRank) -> Option<Poly> {
    g.iter()
        .min_by_key(|p| {
            let (o, d, r) = profile(p, theta);
            (o, d, p.len(), std::cmp::Reverse(r), p.to_string())
        })
        .cloned()
}
