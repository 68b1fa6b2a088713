#![allow(dead_code)]

use std::path::PathBuf;

use dalg::diffalg::{flatten_family, DiffPoly};
use dalg::engine::AdeResult;
use dalg::frontend::{parse_equation_in, parse_system, ParsedSystem};
use dalg::polyring::Rational;

/// The bivariate equation found at order bound (4, 1) for the order_jump golden.
pub const ORDER_JUMP_41: &str = "(x1^12 + 2*x1^11 - x1^10*x2 + x1^10 - 2*x1^9*x2 - 4*x1^7*x2^2 - 5*x1^6*x2^2 - 10*x1^4*x2^3)*D[x1,x2](z) \
    + (x1^11*x2 - 3*x1^9*x2 + 4*x1^8*x2^2 - 2*x1^8*x2 + 9*x1^7*x2^2 + 10*x1^5*x2^3 - 2*x1^5*x2^2 + 30*x1^4*x2^3 + 10*x1^3*x2^3)*D[x1,x1,x2](z) \
    + (-2*x1^9*x2^2 - 3*x1^8*x2^2 - 3*x1^6*x2^3 + x1^6*x2^2 - 12*x1^5*x2^3 - 6*x1^4*x2^3 + 12*x1^3*x2^4 + x1^2*x2^4 + 2*x2^5)*D[x1,x1,x1,x2](z) \
    + (x1^7*x2^3 + 2*x1^6*x2^3 + x1^5*x2^3 - 2*x1^4*x2^4 - x1^3*x2^4 - 2*x1*x2^5)*D[x1,x1,x1,x1,x2](z)";


pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

pub fn golden(name: &str) -> ParsedSystem {
    let text = std::fs::read_to_string(golden_path(name)).expect("golden file");
    parse_system(&text).expect("golden file parses")
}

/// Parses `text` (an equation or a bare expression) in the result's context.
pub fn expected(res: &AdeResult, text: &str) -> DiffPoly {
    let eq = if text.contains('=') { text.to_string() } else { format!("{text} = 0") };
    parse_equation_in(&eq, &res.ctx).expect("expected polynomial parses").num
}

/// True when `a = c * b` for a nonzero rational `c`.
pub fn proportional(a: &DiffPoly, b: &DiffPoly) -> bool {
    if a.is_zero() || b.is_zero() {
        return a.is_zero() && b.is_zero();
    }
    let (_, flat) = flatten_family(&[a.clone(), b.clone()]).unwrap();
    let (fa, fb) = (&flat[0], &flat[1]);
    if fa.len() != fb.len() {
        return false;
    }
    let (ca, m) = fa.terms().next().map(|(c, m)| (c.clone(), m.clone())).unwrap();
    let cb = fb.coeff(&m);
    if cb == Rational::from_integer(0.into()) {
        return false;
    }
    let ratio: Rational = ca / cb;
    fa.sub(&fb.scale(&ratio)).is_zero()
}

pub fn matches(res: &AdeResult, text: &str) -> bool {
    proportional(&res.diff, &expected(res, text))
}
