use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::lexer::{Tok, Token};
use super::FrontendError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug)]
pub(crate) enum Expr {
    Num(BigInt),
    Ident(String, Pos),
    Deriv { vars: Vec<String>, func: String, pos: Pos },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, Pos),
    Pow(Box<Expr>, u32),
    Neg(Box<Expr>),
}

#[derive(Clone, Debug)]
pub(crate) enum Decl {
    Vars(Vec<String>),
    Func { name: String, args: Vec<String>, pos: Pos },
}

#[derive(Clone, Debug)]
pub(crate) struct Stmt {
    pub lhs: Expr,
    pub rhs: Expr,
    pub pos: Pos,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Ast {
    pub decls: Vec<Decl>,
    pub stmts: Vec<Stmt>,
}

pub(crate) struct Parser {
    toks: Vec<Token>,
    at: usize,
}

impl Parser {
    pub fn new(toks: Vec<Token>) -> Self {
        Parser { toks, at: 0 }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        let t = &self.toks[self.at];
        Pos { line: t.line, col: t.col }
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].tok.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, FrontendError> {
        let p = self.pos();
        Err(FrontendError::Syntax { line: p.line, col: p.col, msg: msg.into() })
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Int(n) => format!("'{n}'"),
            Tok::Decimal(s) => format!("'{s}'"),
            Tok::Sym(c) => format!("'{c}'"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), FrontendError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected '{c}', found {}", self.describe()))
        }
    }

    fn ident(&mut self) -> Result<String, FrontendError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.err(format!("expected identifier, found {}", self.describe())),
        }
    }

    pub fn parse_program(&mut self) -> Result<Ast, FrontendError> {
        let mut ast = Ast::default();
        while *self.peek() != Tok::Eof {
            let is_kw = |s: &str| matches!(self.peek(), Tok::Ident(k) if k == s) && matches!(self.peek2(), Tok::Ident(_));
            if is_kw("vars") {
                self.bump();
                let mut names = Vec::new();
                while let Tok::Ident(_) = self.peek() {
                    names.push(self.ident()?);
                }
                self.expect(';')?;
                ast.decls.push(Decl::Vars(names));
            } else if is_kw("func") {
                self.bump();
                let pos = self.pos();
                let name = self.ident()?;
                self.expect('(')?;
                let mut args = vec![self.ident()?];
                while *self.peek() == Tok::Sym(',') {
                    self.bump();
                    args.push(self.ident()?);
                }
                self.expect(')')?;
                self.expect(';')?;
                ast.decls.push(Decl::Func { name, args, pos });
            } else {
                ast.stmts.push(self.parse_stmt()?);
            }
        }
        Ok(ast)
    }

    pub fn parse_stmt(&mut self) -> Result<Stmt, FrontendError> {
        let pos = self.pos();
        let lhs = self.parse_expr()?;
        self.expect('=')?;
        let rhs = self.parse_expr()?;
        if *self.peek() == Tok::Eof {
            return Ok(Stmt { lhs, rhs, pos });
        }
        self.expect(';')?;
        Ok(Stmt { lhs, rhs, pos })
    }

    pub fn parse_expr(&mut self) -> Result<Expr, FrontendError> {
        let mut e = self.parse_term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    e = Expr::Add(Box::new(e), Box::new(self.parse_term()?));
                }
                Tok::Sym('-') => {
                    self.bump();
                    e = Expr::Sub(Box::new(e), Box::new(self.parse_term()?));
                }
                _ => return Ok(e),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Expr, FrontendError> {
        let mut e = self.parse_factor()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    e = Expr::Mul(Box::new(e), Box::new(self.parse_factor()?));
                }
                Tok::Sym('/') => {
                    self.bump();
                    let pos = self.pos();
                    e = Expr::Div(Box::new(e), Box::new(self.parse_factor()?), pos);
                }
                _ => return Ok(e),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<Expr, FrontendError> {
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.parse_factor()?)));
        }
        let base = self.parse_atom()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        match self.bump() {
            Tok::Int(n) => match n.to_u32() {
                Some(k) => Ok(Expr::Pow(Box::new(base), k)),
                None => Err(FrontendError::Syntax { line: pos.line, col: pos.col, msg: "exponent too large".into() }),
            },
            _ => Err(FrontendError::NonIntegerExponent { line: pos.line, col: pos.col }),
        }
    }

    fn parse_atom(&mut self) -> Result<Expr, FrontendError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Num(n))
            }
            Tok::Decimal(s) => self.err(format!("decimal literal {s} is not supported; use a fraction")),
            Tok::Sym('(') => {
                self.bump();
                let e = self.parse_expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) if name == "D" && *self.peek2() == Tok::Sym('[') => {
                self.bump();
                self.bump();
                let mut vars = vec![self.ident()?];
                while *self.peek() == Tok::Sym(',') {
                    self.bump();
                    vars.push(self.ident()?);
                }
                self.expect(']')?;
                self.expect('(')?;
                let func = self.ident()?;
                self.expect(')')?;
                Ok(Expr::Deriv { vars, func, pos })
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() == Tok::Sym('(') {
                    return self.err(format!("'{name}(...)' is not an expression; write {name} for the function value"));
                }
                Ok(Expr::Ident(name, pos))
            }
            _ => self.err(format!("expected an expression, found {}", self.describe())),
        }
    }
}
