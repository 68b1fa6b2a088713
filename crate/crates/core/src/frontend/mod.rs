//! Text input and output: the equation-file grammar, canonical printing of
//! results and their JSON form.

mod json;
pub(crate) mod lexer;
mod parser;
mod print;

pub use json::{emit_error_json, emit_json, emit_not_found_json};
pub use print::{canonical_order, print_ade, print_diffpoly, PrintStyle};

use std::collections::HashSet;
use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use self::parser::{Decl, Expr, Parser, Pos};
use crate::diffalg::{DiffContext, DiffError, DiffPoly, RatFunc};
use crate::polyring::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: exponents must be nonnegative integers")]
    NonIntegerExponent { line: usize, col: usize },
    #[error("{line}:{col}: division by zero")]
    DivisionByZero { line: usize, col: usize },
    #[error("{line}:{col}: independent variable {name} used as a function")]
    IndependentAsFunction { name: String, line: usize, col: usize },
    #[error("{line}:{col}: {msg}")]
    Semantic { line: usize, col: usize, msg: String },
    #[error(transparent)]
    Diff(#[from] DiffError),
}

fn sem<T>(pos: Pos, msg: impl Into<String>) -> Result<T, FrontendError> {
    Err(FrontendError::Semantic { line: pos.line, col: pos.col, msg: msg.into() })
}

/// Names declared or inferred for one input file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SessionDecl {
    pub independents: Vec<String>,
    /// Dependent indeterminates with the indices of the variables they depend on.
    pub dependents: Vec<(String, Vec<usize>)>,
    pub params: Vec<String>,
}

/// An input equation `lhs = rhs` as the numerator of `lhs - rhs`.
#[derive(Clone, Debug)]
pub struct ParsedEquation {
    pub poly: DiffPoly,
    /// The denominator multiplied through (1 for polynomial input).
    pub cleared: DiffPoly,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct ParsedSystem {
    pub decl: SessionDecl,
    pub ctx: Arc<DiffContext>,
    pub equations: Vec<ParsedEquation>,
    pub target_name: String,
    pub target: RatFunc,
}

pub fn parse_system(text: &str) -> Result<ParsedSystem, FrontendError> {
    let toks = lexer::lex(text)?;
    let ast = Parser::new(toks).parse_program()?;
    if ast.stmts.len() < 2 {
        return Err(FrontendError::Syntax {
            line: 1,
            col: 1,
            msg: "expected at least one equation followed by a target 'z = expression;'".into(),
        });
    }
    let (eqs, target) = ast.stmts.split_at(ast.stmts.len() - 1);
    let target = &target[0];
    let target_name = match &target.lhs {
        Expr::Ident(n, _) => n.clone(),
        _ => return sem(target.pos, "the last statement must have the form 'name = expression;'"),
    };

    let mut plain: Vec<(String, Pos)> = Vec::new();
    let mut derivs: Vec<(Vec<String>, String, Pos)> = Vec::new();
    for s in &ast.stmts {
        if std::ptr::eq(s, target) {
            collect(&s.rhs, &mut plain, &mut derivs);
        } else {
            collect(&s.lhs, &mut plain, &mut derivs);
            collect(&s.rhs, &mut plain, &mut derivs);
        }
    }

    let mut independents: Vec<String> = Vec::new();
    let declared_vars = ast.decls.iter().any(|d| matches!(d, Decl::Vars(_)));
    let push_unique = |v: &mut Vec<String>, n: &str| {
        if !v.iter().any(|x| x == n) {
            v.push(n.to_string());
        }
    };
    if declared_vars {
        for d in &ast.decls {
            if let Decl::Vars(ns) = d {
                for n in ns {
                    push_unique(&mut independents, n);
                }
            }
        }
    } else {
        for d in &ast.decls {
            if let Decl::Func { args, .. } = d {
                for a in args {
                    push_unique(&mut independents, a);
                }
            }
        }
        for (vs, _, _) in &derivs {
            for v in vs {
                push_unique(&mut independents, v);
            }
        }
    }
    if independents.is_empty() {
        return sem(target.pos, "no independent variable: declare one with 'vars' or use D[...]");
    }

    let mut dependents: Vec<(String, Vec<usize>)> = Vec::new();
    for d in &ast.decls {
        if let Decl::Func { name, args, pos } = d {
            if independents.contains(name) {
                return Err(FrontendError::IndependentAsFunction { name: name.clone(), line: pos.line, col: pos.col });
            }
            if dependents.iter().any(|(n, _)| n == name) {
                return sem(*pos, format!("function {name} declared twice"));
            }
            let mut deps = Vec::new();
            for a in args {
                match independents.iter().position(|v| v == a) {
                    Some(i) => deps.push(i),
                    None => return sem(*pos, format!("{a} is not a declared independent variable")),
                }
            }
            dependents.push((name.clone(), deps));
        }
    }
    for (vs, f, pos) in &derivs {
        if independents.contains(f) {
            return Err(FrontendError::IndependentAsFunction { name: f.clone(), line: pos.line, col: pos.col });
        }
        for v in vs {
            if !independents.contains(v) {
                return sem(*pos, format!("{v} is not a declared independent variable"));
            }
        }
        if !dependents.iter().any(|(n, _)| n == f) {
            dependents.push((f.clone(), (0..independents.len()).collect()));
        }
    }
    if independents.contains(&target_name) || dependents.iter().any(|(n, _)| *n == target_name) {
        return sem(target.pos, format!("target name {target_name} is already a variable or function"));
    }
    let mut params: Vec<String> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for (n, pos) in &plain {
        if *n == target_name {
            return sem(*pos, format!("target {target_name} may only appear on the left of the last statement"));
        }
        if independents.contains(n) || dependents.iter().any(|(d, _)| d == n) {
            continue;
        }
        if seen.insert(n.clone()) {
            params.push(n.clone());
        }
    }

    let mut ctx = DiffContext::new(independents.clone())?;
    for p in &params {
        ctx.add_param(p)?;
    }
    for (n, deps) in &dependents {
        ctx.add_indet(n, deps.clone())?;
    }
    let ctx = Arc::new(ctx);
    let mut equations = Vec::new();
    for s in eqs {
        let lhs = eval(&s.lhs, &ctx)?;
        let rhs = eval(&s.rhs, &ctx)?;
        let diff = rat_sub(&lhs, &rhs);
        equations.push(ParsedEquation { poly: diff.num, cleared: diff.den, line: s.pos.line });
    }
    let target_expr = eval(&target.rhs, &ctx)?;
    Ok(ParsedSystem {
        decl: SessionDecl { independents, dependents, params },
        ctx,
        equations,
        target_name,
        target: target_expr,
    })
}

/// Parses one expression against a fixed context; unknown names are errors.
pub fn parse_expr_in(text: &str, ctx: &Arc<DiffContext>) -> Result<RatFunc, FrontendError> {
    let toks = lexer::lex(text)?;
    let mut p = Parser::new(toks);
    let e = p.parse_expr()?;
    eval(&e, ctx)
}

/// Parses `lhs = rhs` against a fixed context and returns `lhs - rhs`.
pub fn parse_equation_in(text: &str, ctx: &Arc<DiffContext>) -> Result<RatFunc, FrontendError> {
    let toks = lexer::lex(text)?;
    let mut p = Parser::new(toks);
    let s = p.parse_stmt()?;
    Ok(rat_sub(&eval(&s.lhs, ctx)?, &eval(&s.rhs, ctx)?))
}

fn collect(e: &Expr, plain: &mut Vec<(String, Pos)>, derivs: &mut Vec<(Vec<String>, String, Pos)>) {
    match e {
        Expr::Num(_) => {}
        Expr::Ident(n, p) => plain.push((n.clone(), *p)),
        Expr::Deriv { vars, func, pos } => derivs.push((vars.clone(), func.clone(), *pos)),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, _) => {
            collect(a, plain, derivs);
            collect(b, plain, derivs);
        }
        Expr::Pow(a, _) | Expr::Neg(a) => collect(a, plain, derivs),
    }
}

fn eval(e: &Expr, ctx: &Arc<DiffContext>) -> Result<RatFunc, FrontendError> {
    Ok(match e {
        Expr::Num(n) => RatFunc::poly(DiffPoly::constant(ctx, Rational::from_integer(n.clone()))),
        Expr::Ident(n, pos) => {
            if let Some(i) = ctx.indep_index(n) {
                RatFunc::poly(DiffPoly::indep(ctx, i))
            } else if let Some(i) = ctx.indet_index(n) {
                RatFunc::poly(DiffPoly::deriv(ctx, i, vec![0; ctx.l()]))
            } else if let Some(i) = ctx.param_index(n) {
                RatFunc::poly(DiffPoly::param(ctx, i))
            } else {
                return sem(*pos, format!("unknown name {n}"));
            }
        }
        Expr::Deriv { vars, func, pos } => {
            if ctx.indep_index(func).is_some() {
                return Err(FrontendError::IndependentAsFunction { name: func.clone(), line: pos.line, col: pos.col });
            }
            let Some(f) = ctx.indet_index(func) else {
                return sem(*pos, format!("{func} is not a function"));
            };
            let mut index = vec![0u32; ctx.l()];
            for v in vars {
                match ctx.indep_index(v) {
                    Some(j) => index[j] += 1,
                    None => return sem(*pos, format!("{v} is not an independent variable")),
                }
            }
            RatFunc::poly(DiffPoly::deriv(ctx, f, index))
        }
        Expr::Add(a, b) => rat_add(&eval(a, ctx)?, &eval(b, ctx)?),
        Expr::Sub(a, b) => rat_sub(&eval(a, ctx)?, &eval(b, ctx)?),
        Expr::Mul(a, b) => rat_mul(&eval(a, ctx)?, &eval(b, ctx)?),
        Expr::Div(a, b, pos) => {
            let d = eval(b, ctx)?;
            if d.num.is_zero() {
                return Err(FrontendError::DivisionByZero { line: pos.line, col: pos.col });
            }
            rat_mul(&eval(a, ctx)?, &RatFunc::new(d.den, d.num))
        }
        Expr::Pow(a, k) => {
            let b = eval(a, ctx)?;
            simplify(RatFunc::new(b.num.pow(*k), b.den.pow(*k)))
        }
        Expr::Neg(a) => {
            let b = eval(a, ctx)?;
            RatFunc::new(b.num.neg(), b.den)
        }
    })
}

fn rat_add(a: &RatFunc, b: &RatFunc) -> RatFunc {
    if a.den == b.den {
        return simplify(RatFunc::new(a.num.add(&b.num), a.den.clone()));
    }
    simplify(RatFunc::new(a.num.mul(&b.den).add(&b.num.mul(&a.den)), a.den.mul(&b.den)))
}

fn rat_sub(a: &RatFunc, b: &RatFunc) -> RatFunc {
    rat_add(a, &RatFunc::new(b.num.neg(), b.den.clone()))
}

fn rat_mul(a: &RatFunc, b: &RatFunc) -> RatFunc {
    simplify(RatFunc::new(a.num.mul(&b.num), a.den.mul(&b.den)))
}

/// Cancels common factors found by exact division and moves constant
/// denominators into the numerator.
fn simplify(r: RatFunc) -> RatFunc {
    let RatFunc { mut num, mut den } = r;
    if num.is_zero() {
        return RatFunc::poly(num);
    }
    if !den.is_constant() {
        if let Some(q) = num.exact_divide(&den) {
            num = q;
            den = DiffPoly::one(den.context());
        } else {
            for f in crate::dynsys::split_factors(&[den.clone()]) {
                while let (Some(n2), Some(d2)) = (num.exact_divide(&f), den.exact_divide(&f)) {
                    num = n2;
                    den = d2;
                }
            }
        }
    }
    if let Some(c) = den.as_constant() {
        let inv = c.recip();
        return RatFunc::poly(num.scale(&inv));
    }
    // keep the denominator primitive
    let p = den.primitive();
    if let Some(scale) = den.exact_divide(&p).and_then(|s| s.as_constant()) {
        if !scale.is_zero() {
            num = num.scale(&scale.recip());
            den = p;
        }
    }
    RatFunc::new(num, den)
}
