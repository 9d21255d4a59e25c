//! Concrete syntax tree and recursive-descent parser. Names are not
//! resolved here; see `elaborate`.

use crate::model::{ArithOp, CmpOp, FunKind, Span};

use super::lexer::{Tok, Token};
use super::ParseError;

#[derive(Clone, Debug)]
pub enum RawTerm {
    Nat(u32, Span),
    Var(String, Span),
    Abstract(String, Span),
    /// Identifier, possibly applied to arguments.
    App(String, Vec<RawTerm>, Span),
    Bin(Box<RawTerm>, ArithOp, Box<RawTerm>, Span),
}

impl RawTerm {
    pub fn span(&self) -> Span {
        match self {
            RawTerm::Nat(_, s) | RawTerm::Var(_, s) | RawTerm::Abstract(_, s) | RawTerm::App(_, _, s) => *s,
            RawTerm::Bin(_, _, _, s) => *s,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RawLit {
    pub neg: bool,
    pub lhs: RawTerm,
    pub rel: Option<(CmpOp, RawTerm)>,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub struct RawFunDecl {
    pub name: String,
    pub params: Vec<(String, Span)>,
    pub value: Option<(String, Span)>,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub enum Stmt {
    Sorts(Vec<(String, Vec<String>, Span)>),
    Funs(FunKind, Vec<RawFunDecl>),
    Mechanism { label: String, params: Vec<String>, head: RawLit, body: Vec<RawLit>, span: Span },
    ScenarioStart,
    Init(Vec<RawLit>, Span),
    Do { neg: bool, action: RawTerm, step: RawTerm, span: Span },
    Obs { fluent: RawTerm, value: RawTerm, step: RawTerm, span: Span },
    Fact(RawLit),
}

pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
    in_scenario: bool,
    pub errors: Vec<ParseError>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    pub fn new(toks: Vec<Token>) -> Parser {
        Parser { toks, pos: 0, in_scenario: false, errors: Vec::new() }
    }

    /// Start in scenario mode, for text that holds only scenario statements.
    pub fn scenario_only(mut self) -> Parser {
        self.in_scenario = true;
        self
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn prev_span(&self) -> Span {
        self.toks[self.pos.saturating_sub(1)].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn at_ident(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let found = self.peek().describe();
        let expected: Vec<String> = expected.iter().map(|s| s.to_string()).collect();
        ParseError {
            span: self.span(),
            message: format!("expected {}, found {found}", expected.join(" or ")),
            expected,
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<Span> {
        if *self.peek() == tok {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&[&tok.describe()]))
        }
    }

    fn ident(&mut self) -> PResult<(String, Span)> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let sp = self.bump().span;
                Ok((s, sp))
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    /// Skip past the next `.` so parsing can resume at a statement boundary.
    fn recover(&mut self) {
        loop {
            match self.peek() {
                Tok::Eof => return,
                Tok::Dot => {
                    self.bump();
                    return;
                }
                _ => {
                    self.bump();
                }
            }
        }
    }

    pub fn parse_file(&mut self) -> Vec<Stmt> {
        let mut out = Vec::new();
        while *self.peek() != Tok::Eof {
            match self.statement() {
                Ok(s) => out.push(s),
                Err(e) => {
                    self.errors.push(e);
                    self.recover();
                }
            }
        }
        out
    }

    fn statement(&mut self) -> PResult<Stmt> {
        let start = self.span();
        if let Tok::Ident(kw) = self.peek().clone() {
            match kw.as_str() {
                "sorts" if !self.in_scenario => {
                    self.bump();
                    return self.sorts();
                }
                "statics" if !self.in_scenario => {
                    self.bump();
                    let decls = self.fun_decls(true)?;
                    return Ok(Stmt::Funs(FunKind::Static, decls));
                }
                "fluents" if !self.in_scenario => {
                    self.bump();
                    let (k, _) = self.ident()?;
                    let kind = match k.as_str() {
                        "inertial" => FunKind::Inertial,
                        "transient" => FunKind::Transient,
                        "timeless" => FunKind::Timeless,
                        _ => {
                            self.pos -= 1;
                            return Err(self.unexpected(&["`inertial`", "`transient`", "`timeless`"]));
                        }
                    };
                    let decls = self.fun_decls(true)?;
                    return Ok(Stmt::Funs(kind, decls));
                }
                "actions" => {
                    self.bump();
                    let decls = self.fun_decls(false)?;
                    return Ok(Stmt::Funs(FunKind::Action, decls));
                }
                "mechanism" if !self.in_scenario => {
                    self.bump();
                    return self.mechanism(start);
                }
                "scenario" if !self.in_scenario => {
                    self.bump();
                    self.in_scenario = true;
                    return Ok(Stmt::ScenarioStart);
                }
                "init" if self.in_scenario => {
                    self.bump();
                    self.expect(Tok::LParen)?;
                    let mut items = vec![self.literal()?];
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        items.push(self.literal()?);
                    }
                    self.expect(Tok::RParen)?;
                    let end = self.expect(Tok::Dot)?;
                    return Ok(Stmt::Init(items, start.to(end)));
                }
                "do" if self.in_scenario => {
                    self.bump();
                    self.expect(Tok::LParen)?;
                    let neg = if self.at_ident("neg") {
                        self.bump();
                        true
                    } else {
                        false
                    };
                    let action = self.term()?;
                    self.expect(Tok::Comma)?;
                    let step = self.term()?;
                    self.expect(Tok::RParen)?;
                    let end = self.expect(Tok::Dot)?;
                    return Ok(Stmt::Do { neg, action, step, span: start.to(end) });
                }
                "obs" if self.in_scenario => {
                    self.bump();
                    self.expect(Tok::LParen)?;
                    let fluent = self.term()?;
                    self.expect(Tok::Comma)?;
                    let value = self.term()?;
                    self.expect(Tok::Comma)?;
                    let step = self.term()?;
                    self.expect(Tok::RParen)?;
                    let end = self.expect(Tok::Dot)?;
                    return Ok(Stmt::Obs { fluent, value, step, span: start.to(end) });
                }
                _ => {}
            }
        }
        if !self.in_scenario {
            return Err(self.unexpected(&[
                "`sorts`",
                "`statics`",
                "`fluents`",
                "`actions`",
                "`mechanism`",
                "`scenario`",
            ]));
        }
        let lit = self.literal()?;
        self.expect(Tok::Dot)?;
        Ok(Stmt::Fact(lit))
    }

    fn sorts(&mut self) -> PResult<Stmt> {
        let mut out = Vec::new();
        loop {
            let (name, sp) = self.ident()?;
            self.expect(Tok::Eq)?;
            self.expect(Tok::LBrace)?;
            let mut objs = vec![self.ident()?.0];
            while *self.peek() == Tok::Comma {
                self.bump();
                objs.push(self.ident()?.0);
            }
            let end = self.expect(Tok::RBrace)?;
            out.push((name, objs, sp.to(end)));
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                _ => break,
            }
        }
        self.expect(Tok::Dot)?;
        Ok(Stmt::Sorts(out))
    }

    fn fun_decls(&mut self, with_value: bool) -> PResult<Vec<RawFunDecl>> {
        let mut out = Vec::new();
        loop {
            let (name, sp) = self.ident()?;
            let mut params = Vec::new();
            if *self.peek() == Tok::LParen {
                self.bump();
                params.push(self.ident()?);
                while *self.peek() == Tok::Comma {
                    self.bump();
                    params.push(self.ident()?);
                }
                self.expect(Tok::RParen)?;
            }
            let value = if with_value {
                self.expect(Tok::Colon)?;
                Some(self.ident()?)
            } else {
                None
            };
            out.push(RawFunDecl { name, params, value, span: sp.to(self.prev_span()) });
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        self.expect(Tok::Dot)?;
        Ok(out)
    }

    fn mechanism(&mut self, start: Span) -> PResult<Stmt> {
        let (label, _) = self.ident()?;
        let mut params = Vec::new();
        if *self.peek() == Tok::LParen {
            self.bump();
            loop {
                match self.peek().clone() {
                    Tok::Var(v) => {
                        self.bump();
                        params.push(v);
                    }
                    _ => return Err(self.unexpected(&["variable"])),
                }
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
            self.expect(Tok::RParen)?;
        }
        self.expect(Tok::Colon)?;
        let head = self.literal()?;
        let mut body = Vec::new();
        if *self.peek() == Tok::Arrow {
            self.bump();
            body.push(self.literal()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                body.push(self.literal()?);
            }
        }
        let end = self.expect(Tok::Dot)?;
        Ok(Stmt::Mechanism { label, params, head, body, span: start.to(end) })
    }

    fn literal(&mut self) -> PResult<RawLit> {
        let start = self.span();
        let neg = if self.at_ident("neg") {
            self.bump();
            true
        } else {
            false
        };
        let lhs = self.term()?;
        let op = match self.peek() {
            Tok::Eq => Some(CmpOp::Eq),
            Tok::Ne => Some(CmpOp::Ne),
            Tok::Lt => Some(CmpOp::Lt),
            Tok::Le => Some(CmpOp::Le),
            Tok::Gt => Some(CmpOp::Gt),
            Tok::Ge => Some(CmpOp::Ge),
            _ => None,
        };
        let rel = match op {
            Some(op) if !neg => {
                self.bump();
                Some((op, self.term()?))
            }
            Some(_) => return Err(ParseError::new(self.span(), "`neg` cannot be combined with a relation")),
            None => None,
        };
        Ok(RawLit { neg, lhs, rel, span: start.to(self.prev_span()) })
    }

    pub fn term(&mut self) -> PResult<RawTerm> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.product()?;
            let sp = lhs.span().to(rhs.span());
            lhs = RawTerm::Bin(Box::new(lhs), op, Box::new(rhs), sp);
        }
    }

    fn product(&mut self) -> PResult<RawTerm> {
        let mut lhs = self.primary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let rhs = self.primary()?;
            let sp = lhs.span().to(rhs.span());
            lhs = RawTerm::Bin(Box::new(lhs), ArithOp::Mul, Box::new(rhs), sp);
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> PResult<RawTerm> {
        match self.peek().clone() {
            Tok::Nat(n) => Ok(RawTerm::Nat(n, self.bump().span)),
            Tok::Var(v) => Ok(RawTerm::Var(v, self.bump().span)),
            Tok::Abstract(a) => Ok(RawTerm::Abstract(a, self.bump().span)),
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(s) if s != "neg" => {
                let sp = self.bump().span;
                let mut args = Vec::new();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    args.push(self.term()?);
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(self.term()?);
                    }
                    let end = self.expect(Tok::RParen)?;
                    return Ok(RawTerm::App(s, args, sp.to(end)));
                }
                Ok(RawTerm::App(s, args, sp))
            }
            _ => Err(self.unexpected(&["term"])),
        }
    }
}
