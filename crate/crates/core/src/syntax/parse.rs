//! Recursive-descent parser for the concrete syntax.
//!
//! ```text
//! prog     := datadecl* expr
//! datadecl := "data" Upper "=" con ("|" con)* ";"
//! con      := Upper nat?
//! expr     := ("letrec" | "let") binds "in" expr
//!           | "\" var+ "->" expr
//!           | "case" expr "of" "{" alt (";" alt)* "}"
//!           | "seq" aexpr aexpr
//!           | aexpr aexpr*
//! alt      := Upper var* "->" expr
//! binds    := var "=" expr ("," var "=" expr)*
//! aexpr    := var | Upper | nat | "(" expr ")"
//! ```
//!
//! A decimal literal `n` abbreviates the closed numeral `Succ (... Zero)`.

use std::collections::HashSet;

use super::decl::{DataDecl, DataEnv};
use super::expr::{Alt, Binding, Expr};
use super::name::{Name, Symbol};
use super::SyntaxError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Lower(String),
    Upper(String),
    Nat(u64),
    Kw(&'static str),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const KEYWORDS: [&str; 7] = ["letrec", "let", "in", "case", "of", "seq", "data"];

fn lex(text: &str) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut advance = |n: usize, i: &mut usize| {
            for _ in 0..n {
                if chars[*i] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                *i += 1;
            }
        };
        if c.is_whitespace() {
            advance(1, &mut i);
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                advance(1, &mut i);
            }
            continue;
        }
        let tok = if c == '-' && chars.get(i + 1) == Some(&'>') {
            advance(2, &mut i);
            Tok::Sym("->")
        } else if let Some(s) = ["\\", "=", ",", ";", "{", "}", "(", ")", "|"].iter().find(|s| s.starts_with(c)) {
            advance(1, &mut i);
            Tok::Sym(s)
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance(1, &mut i);
            }
            let s: String = chars[start..i].iter().collect();
            Tok::Nat(s.parse().map_err(|_| SyntaxError::Parse {
                line: l0,
                col: c0,
                msg: format!("numeral `{s}` too large"),
            })?)
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                advance(1, &mut i);
            }
            let s: String = chars[start..i].iter().collect();
            if let Some(k) = KEYWORDS.iter().find(|k| **k == s) {
                Tok::Kw(k)
            } else if c.is_uppercase() {
                Tok::Upper(s)
            } else {
                Tok::Lower(s)
            }
        } else {
            return Err(SyntaxError::Parse { line: l0, col: c0, msg: format!("unexpected character `{c}`") });
        };
        out.push(Token { tok, line: l0, col: c0 });
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    env: &'a DataEnv,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, SyntaxError> {
        let (line, col) = self.here();
        Err(SyntaxError::Parse { line, col, msg: msg.into() })
    }

    fn expect_sym(&mut self, s: &'static str) -> Result<(), SyntaxError> {
        if *self.peek() == Tok::Sym(s) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{s}`, found {}", describe(self.peek())))
        }
    }

    fn expect_kw(&mut self, k: &'static str) -> Result<(), SyntaxError> {
        if *self.peek() == Tok::Kw(k) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{k}`, found {}", describe(self.peek())))
        }
    }

    fn var(&mut self) -> Result<Name, SyntaxError> {
        match self.peek().clone() {
            Tok::Lower(s) => {
                self.bump();
                Ok(Name::new(&s))
            }
            t => self.error(format!("expected a variable, found {}", describe(&t))),
        }
    }

    fn datadecl(&mut self) -> Result<DataDecl, SyntaxError> {
        self.expect_kw("data")?;
        let tycon = match self.bump() {
            Tok::Upper(s) => s,
            t => return self.error(format!("expected a type name, found {}", describe(&t))),
        };
        self.expect_sym("=")?;
        let mut cons = Vec::new();
        loop {
            let c = match self.bump() {
                Tok::Upper(s) => s,
                t => return self.error(format!("expected a constructor, found {}", describe(&t))),
            };
            let arity = if let Tok::Nat(n) = *self.peek() {
                self.bump();
                n as usize
            } else {
                0
            };
            cons.push((Symbol::intern(&c), arity));
            if *self.peek() == Tok::Sym("|") {
                self.bump();
            } else {
                break;
            }
        }
        self.expect_sym(";")?;
        Ok(DataDecl { tycon: Symbol::intern(&tycon), constructors: cons })
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let (line, col) = self.here();
        match self.peek() {
            Tok::Kw("letrec") | Tok::Kw("let") => {
                self.bump();
                let mut bindings: Vec<Binding> = Vec::new();
                loop {
                    let (bl, bc) = self.here();
                    let x = self.var()?;
                    if bindings.iter().any(|b| b.var == x) {
                        return Err(SyntaxError::DuplicateBinder { name: x.to_string(), line: bl, col: bc });
                    }
                    // `f x y = e` abbreviates `f = \x y -> e`.
                    let mut params = Vec::new();
                    while let Tok::Lower(_) = self.peek() {
                        params.push(self.var()?);
                    }
                    self.expect_sym("=")?;
                    let rhs = params.into_iter().rev().fold(self.expr()?, |b, p| Expr::lam(p, b));
                    bindings.push(Binding { var: x, rhs });
                    if *self.peek() == Tok::Sym(",") {
                        self.bump();
                    } else {
                        break;
                    }
                }
                self.expect_kw("in")?;
                let body = self.expr()?;
                Ok(Expr::Letrec(bindings, Box::new(body)))
            }
            Tok::Sym("\\") => {
                self.bump();
                let mut params = vec![self.var()?];
                while let Tok::Lower(_) = self.peek() {
                    params.push(self.var()?);
                }
                self.expect_sym("->")?;
                let body = self.expr()?;
                Ok(params.into_iter().rev().fold(body, |b, p| Expr::lam(p, b)))
            }
            Tok::Kw("case") => {
                self.bump();
                let scrut = self.expr()?;
                self.expect_kw("of")?;
                self.expect_sym("{")?;
                let mut alts = Vec::new();
                loop {
                    if *self.peek() == Tok::Sym("}") && !alts.is_empty() {
                        break;
                    }
                    alts.push(self.alt()?);
                    if *self.peek() == Tok::Sym(";") {
                        self.bump();
                    } else {
                        break;
                    }
                }
                self.expect_sym("}")?;
                self.finish_case(scrut, alts, line, col)
            }
            Tok::Kw("seq") => {
                self.bump();
                let a = self.aexpr()?;
                let b = self.aexpr()?;
                Ok(Expr::seq(a, b))
            }
            _ => self.appexpr(),
        }
    }

    fn alt(&mut self) -> Result<(Alt, usize, usize), SyntaxError> {
        let (line, col) = self.here();
        let con = match self.bump() {
            Tok::Upper(s) => Symbol::intern(&s),
            t => return self.error(format!("expected a constructor pattern, found {}", describe(&t))),
        };
        let mut vars = Vec::new();
        while let Tok::Lower(_) = self.peek() {
            let v = self.var()?;
            if vars.contains(&v) {
                return Err(SyntaxError::DuplicateBinder { name: v.to_string(), line, col });
            }
            vars.push(v);
        }
        self.expect_sym("->")?;
        let rhs = self.expr()?;
        Ok((Alt { con, vars, rhs }, line, col))
    }

    fn finish_case(
        &self,
        scrut: Expr,
        alts: Vec<(Alt, usize, usize)>,
        line: usize,
        col: usize,
    ) -> Result<Expr, SyntaxError> {
        let (first, fl, fc) = &alts[0];
        let info = self
            .env
            .con(first.con)
            .ok_or_else(|| SyntaxError::UnknownConstructor { name: first.con.to_string(), line: *fl, col: *fc })?;
        let decl = self.env.decl(info.tycon).expect("constructor has a declaration");
        let mut slots: Vec<Option<Alt>> = vec![None; decl.constructors.len()];
        for (alt, l, c) in alts {
            let ci = self
                .env
                .con(alt.con)
                .ok_or_else(|| SyntaxError::UnknownConstructor { name: alt.con.to_string(), line: l, col: c })?;
            if ci.tycon != info.tycon {
                return Err(SyntaxError::CaseAlternatives {
                    line: l,
                    col: c,
                    msg: format!("`{}` is not a constructor of `{}`", alt.con, info.tycon),
                });
            }
            if alt.vars.len() != ci.arity {
                return Err(SyntaxError::Arity {
                    name: alt.con.to_string(),
                    expected: ci.arity,
                    found: alt.vars.len(),
                    line: l,
                    col: c,
                });
            }
            if slots[ci.tag].is_some() {
                return Err(SyntaxError::CaseAlternatives {
                    line: l,
                    col: c,
                    msg: format!("duplicate alternative for `{}`", alt.con),
                });
            }
            slots[ci.tag] = Some(alt);
        }
        if let Some(i) = slots.iter().position(Option::is_none) {
            return Err(SyntaxError::CaseAlternatives {
                line,
                col,
                msg: format!("missing alternative for `{}`", decl.constructors[i].0),
            });
        }
        Ok(Expr::Case(info.tycon, Box::new(scrut), slots.into_iter().map(Option::unwrap).collect()))
    }

    fn starts_aexpr(&self) -> bool {
        matches!(self.peek(), Tok::Lower(_) | Tok::Upper(_) | Tok::Nat(_) | Tok::Sym("("))
    }

    fn appexpr(&mut self) -> Result<Expr, SyntaxError> {
        let (line, col) = self.here();
        if let Tok::Upper(c) = self.peek().clone() {
            self.bump();
            let mut args = Vec::new();
            while self.starts_aexpr() {
                args.push(self.aexpr()?);
            }
            return self.constructor(&c, args, line, col);
        }
        if !self.starts_aexpr() {
            return self.error(format!("expected an expression, found {}", describe(self.peek())));
        }
        let mut e = self.aexpr()?;
        while self.starts_aexpr() {
            let a = self.aexpr()?;
            e = Expr::app(e, a);
        }
        Ok(e)
    }

    fn constructor(&self, c: &str, args: Vec<Expr>, line: usize, col: usize) -> Result<Expr, SyntaxError> {
        let sym = Symbol::intern(c);
        let arity = self
            .env
            .arity(sym)
            .ok_or_else(|| SyntaxError::UnknownConstructor { name: c.to_string(), line, col })?;
        if arity != args.len() {
            return Err(SyntaxError::Arity { name: c.to_string(), expected: arity, found: args.len(), line, col });
        }
        Ok(Expr::Con(sym, args))
    }

    fn aexpr(&mut self) -> Result<Expr, SyntaxError> {
        let (line, col) = self.here();
        match self.bump() {
            Tok::Lower(s) => Ok(Expr::Var(Name::new(&s))),
            Tok::Upper(c) => self.constructor(&c, Vec::new(), line, col),
            Tok::Nat(n) => {
                for c in ["Zero", "Succ"] {
                    if self.env.arity(Symbol::intern(c)).is_none() {
                        return Err(SyntaxError::UnknownConstructor { name: c.into(), line, col });
                    }
                }
                Ok(Expr::numeral(n))
            }
            Tok::Sym("(") => {
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            t => {
                self.pos -= 1;
                self.error(format!("expected an expression, found {}", describe(&t)))
            }
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Lower(s) | Tok::Upper(s) => format!("`{s}`"),
        Tok::Nat(n) => format!("`{n}`"),
        Tok::Kw(k) | Tok::Sym(k) => format!("`{k}`"),
        Tok::Eof => "end of input".into(),
    }
}

/// A parsed program: the data types in scope and the term.
#[derive(Clone, Debug)]
pub struct Program {
    pub decls: DataEnv,
    pub expr: Expr,
}

/// Parses `datadecl* expr` on top of `base` (usually [`DataEnv::prelude`]).
///
/// Returns the declarations found in the text together with the term.
pub fn parse(text: &str, base: &DataEnv) -> Result<(Vec<DataDecl>, Expr), SyntaxError> {
    let mut env = base.clone();
    let mut p = Parser { toks: lex(text)?, pos: 0, env: base };
    let mut decls = Vec::new();
    while *p.peek() == Tok::Kw("data") {
        let d = p.datadecl()?;
        env.add(d.clone())?;
        decls.push(d);
    }
    let toks = std::mem::take(&mut p.toks);
    let pos = p.pos;
    let mut p = Parser { toks, pos, env: &env };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {} after expression", describe(p.peek())));
    }
    Ok((decls, e))
}

/// Parses a program against the standard prelude.
pub fn parse_program(text: &str) -> Result<Program, SyntaxError> {
    let mut decls = DataEnv::prelude();
    let (new, expr) = parse(text, &decls)?;
    for d in new {
        decls.add(d)?;
    }
    Ok(Program { decls, expr })
}

/// Parses a single expression with the prelude types.
pub fn parse_expr(text: &str) -> Result<Expr, SyntaxError> {
    parse(text, &DataEnv::prelude()).map(|(_, e)| e)
}

/// Binder names that appear twice within one letrec, for validating
/// programmatically built terms.
pub fn duplicate_letrec_binders(e: &Expr) -> Vec<Name> {
    let mut out = Vec::new();
    if let Expr::Letrec(bs, _) = e {
        let mut seen = HashSet::new();
        for b in bs {
            if !seen.insert(b.var) {
                out.push(b.var);
            }
        }
    }
    for c in e.children() {
        out.extend(duplicate_letrec_binders(c));
    }
    out
}
