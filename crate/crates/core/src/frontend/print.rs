use std::cmp::Ordering;

use num_traits::{One, Signed};

use crate::diffalg::{DVar, DiffContext, DiffPoly};
use crate::engine::AdeResult;
use crate::polyring::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PrintStyle {
    #[default]
    Ascii,
    Latex,
}

/// Sort key of a variable in the canonical order (smallest = highest rank).
fn var_key(ctx: &DiffContext, v: &DVar) -> (u8, std::cmp::Reverse<u64>, usize, usize) {
    match v {
        DVar::Deriv { indet, index } => (0, std::cmp::Reverse(ctx.theta().rank(index).unwrap_or(0)), *indet, 0),
        DVar::Indep(i) => (1, std::cmp::Reverse(0), 0, *i),
        DVar::Param(i) => (2, std::cmp::Reverse(0), 0, *i),
    }
}

/// Lex comparison of two monomials under the canonical variable order.
pub fn canonical_order(ctx: &DiffContext, a: &[(DVar, u32)], b: &[(DVar, u32)]) -> Ordering {
    let sorted = |m: &[(DVar, u32)]| {
        let mut v: Vec<(DVar, u32)> = m.to_vec();
        v.sort_by_key(|(x, _)| var_key(ctx, x));
        v
    };
    let (a, b) = (sorted(a), sorted(b));
    for (x, y) in a.iter().zip(&b) {
        let kx = var_key(ctx, &x.0);
        let ky = var_key(ctx, &y.0);
        if kx != ky {
            // the monomial holding the higher-ranked variable is larger
            return if kx < ky { Ordering::Greater } else { Ordering::Less };
        }
        if x.1 != y.1 {
            return x.1.cmp(&y.1);
        }
    }
    a.len().cmp(&b.len())
}

fn deriv_ascii(ctx: &DiffContext, indet: usize, index: &[u32]) -> String {
    let name = &ctx.indet(indet).name;
    if index.iter().all(|&k| k == 0) {
        return name.clone();
    }
    let mut vars = Vec::new();
    for (j, &k) in index.iter().enumerate() {
        for _ in 0..k {
            vars.push(ctx.independents()[j].as_str());
        }
    }
    format!("D[{}]({name})", vars.join(","))
}

fn latex_name(s: &str) -> String {
    let split = s.find(|c: char| c.is_ascii_digit());
    match split {
        Some(i) if i > 0 && s[i..].chars().all(|c| c.is_ascii_digit()) => format!("{}_{{{}}}", &s[..i], &s[i..]),
        _ if s.chars().count() > 1 => format!("\\mathit{{{s}}}"),
        _ => s.to_string(),
    }
}

fn deriv_latex(ctx: &DiffContext, indet: usize, index: &[u32]) -> String {
    let name = latex_name(&ctx.indet(indet).name);
    let total: u32 = index.iter().sum();
    if total == 0 {
        return name;
    }
    let mut den = Vec::new();
    for (j, &k) in index.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let x = latex_name(&ctx.independents()[j]);
        den.push(if k == 1 { format!("\\partial {x}") } else { format!("\\partial {x}^{{{k}}}") });
    }
    let top = if total == 1 { "\\partial".to_string() } else { format!("\\partial^{{{total}}}") };
    format!("\\frac{{{top} {name}}}{{{}}}", den.join(" "))
}

fn factor(ctx: &DiffContext, v: &DVar, e: u32, style: PrintStyle) -> String {
    let (base, compound) = match (v, style) {
        (DVar::Deriv { indet, index }, PrintStyle::Ascii) => (deriv_ascii(ctx, *indet, index), false),
        (DVar::Deriv { indet, index }, PrintStyle::Latex) => {
            let s = deriv_latex(ctx, *indet, index);
            let c = s.starts_with("\\frac");
            (s, c)
        }
        (_, PrintStyle::Ascii) => (ctx.var_name(v), false),
        (_, PrintStyle::Latex) => (latex_name(&ctx.var_name(v)), false),
    };
    if e == 1 {
        return base;
    }
    match style {
        PrintStyle::Ascii => format!("{base}^{e}"),
        PrintStyle::Latex if compound => format!("\\left({base}\\right)^{{{e}}}"),
        PrintStyle::Latex => format!("{base}^{{{e}}}"),
    }
}

/// Order of factors inside a term: independents and parameters first, then
/// derivatives by ascending rank.
fn factor_key(ctx: &DiffContext, v: &DVar) -> (u8, u64, usize) {
    match v {
        DVar::Indep(i) => (0, 0, *i),
        DVar::Param(i) => (1, 0, *i),
        DVar::Deriv { indet, index } => (2, ctx.theta().rank(index).unwrap_or(0), *indet),
    }
}

fn coeff_str(c: &Rational, style: PrintStyle) -> String {
    if c.is_integer() {
        return c.numer().to_string();
    }
    match style {
        PrintStyle::Ascii => format!("{}/{}", c.numer(), c.denom()),
        PrintStyle::Latex => format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom()),
    }
}

/// Prints a differential polynomial with terms in descending canonical order.
pub fn print_diffpoly(p: &DiffPoly, style: PrintStyle) -> String {
    let ctx = p.context();
    if p.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<(&Rational, &[(DVar, u32)])> = p.terms().collect();
    terms.sort_by(|a, b| canonical_order(ctx, b.1, a.1));
    let mul = match style {
        PrintStyle::Ascii => "*",
        PrintStyle::Latex => " ",
    };
    let mut out = String::new();
    for (i, (c, m)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        let mut fs: Vec<(DVar, u32)> = m.to_vec();
        fs.sort_by_key(|(v, _)| factor_key(ctx, v));
        let mut parts: Vec<String> = Vec::new();
        if !a.is_one() || fs.is_empty() {
            parts.push(coeff_str(&a, style));
        }
        for (v, e) in &fs {
            parts.push(factor(ctx, v, *e, style));
        }
        out.push_str(&parts.join(mul));
    }
    out
}

/// `"<polynomial> = 0"` in the requested style.
pub fn print_ade(res: &AdeResult, style: PrintStyle) -> String {
    format!("{} = 0", print_diffpoly(&res.diff, style))
}
