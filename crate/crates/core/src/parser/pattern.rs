use super::lexer::{tokenize, Tok, Token};
use super::ParseError;
use crate::analysis::ChangePattern;
use crate::model::{name, ActionTerm, Signature, Sort, Value};

struct P<'a> {
    toks: Vec<Token>,
    at: usize,
    sig: &'a Signature,
}

impl P<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.toks[self.at].span, msg)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.next();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            other => Err(self.err(format!("expected a name, found {}", other.describe()))),
        }
    }

    fn value(&mut self) -> Result<Value, ParseError> {
        match self.peek().clone() {
            Tok::Nat(n) => {
                self.next();
                Ok(Value::Nat(n))
            }
            Tok::Ident(s) if s == "true" || s == "false" => {
                self.next();
                Ok(Value::Bool(s == "true"))
            }
            Tok::Ident(s) => {
                self.next();
                if self.sig.object_sort(&s).is_some() {
                    return Ok(Value::Obj(name(&s)));
                }
                match self.sig.function(&s) {
                    Some(f) if f.params.is_empty() && f.kind == crate::model::FunKind::Action => {
                        Ok(Value::Act(ActionTerm { name: name(&s), args: Vec::new() }.into()))
                    }
                    _ if self.peek() == &Tok::LParen => {
                        self.next();
                        let mut args = Vec::new();
                        loop {
                            args.push(self.value()?);
                            if !self.eat(&Tok::Comma) {
                                break;
                            }
                        }
                        if !self.eat(&Tok::RParen) {
                            return Err(self.err("expected `)`"));
                        }
                        Ok(Value::Act(ActionTerm { name: name(&s), args }.into()))
                    }
                    _ => Err(self.err(format!("unknown object `{s}`"))),
                }
            }
            other => Err(self.err(format!("expected a value, found {}", other.describe()))),
        }
    }
}

/// Parse a change pattern: a bare fluent name, or a ground atom such as
/// `arrived(dest)`, `neg broken(3)` or `switch(4) = right`. The step and
/// the value may be omitted.
pub fn parse_change_pattern(text: &str, sig: &Signature) -> Result<ChangePattern, ParseError> {
    let mut p = P { toks: tokenize(text)?, at: 0, sig };
    let neg = matches!(p.peek(), Tok::Ident(s) if s == "neg");
    if neg {
        p.next();
    }
    let fun = p.ident()?;
    let decl = sig
        .function(&fun)
        .filter(|f| f.kind.is_fluent() || f.kind == crate::model::FunKind::Action)
        .ok_or_else(|| ParseError::new(p.toks[0].span, format!("`{fun}` is not a fluent or action")))?;
    let mut pat = ChangePattern { fun: name(&fun), args: None, step: None, value: None, text: text.trim().to_string() };
    let bare = !neg && matches!(p.peek(), Tok::Eof);
    if p.eat(&Tok::LParen) {
        let mut args = Vec::new();
        if !p.eat(&Tok::RParen) {
            loop {
                args.push(p.value()?);
                if !p.eat(&Tok::Comma) {
                    break;
                }
            }
            if !p.eat(&Tok::RParen) {
                return Err(p.err("expected `)`"));
            }
        }
        let n = decl.params.len();
        if args.len() == n + 1 && decl.kind.has_step() {
            match args.pop() {
                Some(Value::Nat(s)) => pat.step = Some(s),
                _ => return Err(p.err("the last argument must be a time-step")),
            }
        } else if args.len() != n {
            return Err(p.err(format!("`{fun}` takes {n} arguments")));
        }
        pat.args = Some(args);
    } else if decl.params.is_empty() && !bare {
        pat.args = Some(Vec::new());
    }
    if neg {
        pat.value = Some(Value::Bool(false));
    } else if p.eat(&Tok::Eq) {
        pat.value = Some(p.value()?);
    } else if !bare && decl.value == Sort::Bool {
        pat.value = Some(Value::Bool(true));
    }
    if !matches!(p.peek(), Tok::Eof) {
        return Err(p.err(format!("unexpected {}", p.peek().describe())));
    }
    Ok(pat)
}
