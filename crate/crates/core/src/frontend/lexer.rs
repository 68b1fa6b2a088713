use num_bigint::BigInt;

use super::FrontendError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(BigInt),
    /// A decimal literal; rejected by the parser with a position.
    Decimal(String),
    Sym(char),
    Eof,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub(crate) fn lex(text: &str) -> Result<Vec<Token>, FrontendError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (start_line, start_col, begin) = (line, col, i);
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let s = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[s..i].iter().collect())
        } else if c.is_ascii_digit() {
            let s = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                Tok::Decimal(chars[s..i].iter().collect())
            } else {
                let digits: String = chars[s..i].iter().collect();
                Tok::Int(digits.parse().expect("digits"))
            }
        } else if "+-*/^()[]=;,".contains(c) {
            i += 1;
            Tok::Sym(c)
        } else {
            return Err(FrontendError::Syntax { line, col, msg: format!("unexpected character '{c}'") });
        };
        out.push(Token { tok, line: start_line, col: start_col });
        col = start_col + (i - begin);
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}
