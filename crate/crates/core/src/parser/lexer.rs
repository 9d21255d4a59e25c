use crate::model::{Pos, Span};

use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    /// Lower-case identifier (symbols, objects, keywords).
    Ident(String),
    /// Upper-case identifier, optionally primed (`I'`).
    Var(String),
    /// `#name`
    Abstract(String),
    Nat(u32),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Colon,
    Arrow,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Var(s) => format!("variable `{s}`"),
            Tok::Abstract(s) => format!("`#{s}`"),
            Tok::Nat(n) => format!("`{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Arrow => "`<-`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Ne => "`!=`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Le => "`<=`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Ge => "`>=`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

struct Cursor<'a> {
    src: &'a str,
    offset: usize,
    line: u32,
    col: u32,
}

impl<'a> Cursor<'a> {
    fn pos(&self) -> Pos {
        Pos { line: self.line, col: self.col, offset: self.offset }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.offset..].chars().next()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.src[self.offset..].chars();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.offset += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor { src, offset: 0, line: 1, col: 1 };
    let mut out = Vec::new();
    loop {
        while let Some(c) = cur.peek() {
            if c.is_whitespace() {
                cur.bump();
            } else if c == '%' {
                while let Some(c) = cur.peek() {
                    if c == '\n' {
                        break;
                    }
                    cur.bump();
                }
            } else {
                break;
            }
        }
        let start = cur.pos();
        let Some(c) = cur.bump() else {
            out.push(Token { tok: Tok::Eof, span: Span::new(start, start) });
            return Ok(out);
        };
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            ':' => Tok::Colon,
            '+' => Tok::Plus,
            '*' => Tok::Star,
            '-' => Tok::Minus,
            '=' => Tok::Eq,
            '!' if cur.peek() == Some('=') => {
                cur.bump();
                Tok::Ne
            }
            '<' => match cur.peek() {
                Some('-') => {
                    cur.bump();
                    Tok::Arrow
                }
                Some('=') => {
                    cur.bump();
                    Tok::Le
                }
                _ => Tok::Lt,
            },
            '>' => {
                if cur.peek() == Some('=') {
                    cur.bump();
                    Tok::Ge
                } else {
                    Tok::Gt
                }
            }
            '#' => {
                let mut s = String::new();
                loop {
                    match cur.peek() {
                        Some(c) if is_ident_char(c) => {
                            s.push(c);
                            cur.bump();
                        }
                        // a dot continues the name only when another
                        // name character follows it
                        Some('.') if !s.is_empty() && cur.peek2().map(is_ident_char).unwrap_or(false) => {
                            s.push('.');
                            cur.bump();
                        }
                        _ => break,
                    }
                }
                if s.is_empty() || !s.starts_with(|c: char| c.is_ascii_alphabetic()) {
                    return Err(ParseError::new(Span::new(start, cur.pos()), "expected a name after `#`"));
                }
                Tok::Abstract(s)
            }
            c if c.is_ascii_digit() => {
                let mut s = String::from(c);
                while let Some(c) = cur.peek().filter(|c| c.is_ascii_digit()) {
                    s.push(c);
                    cur.bump();
                }
                match s.parse() {
                    Ok(n) => Tok::Nat(n),
                    Err(_) => return Err(ParseError::new(Span::new(start, cur.pos()), format!("number `{s}` is too large"))),
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::from(c);
                while let Some(c) = cur.peek().filter(|c| is_ident_char(*c)) {
                    s.push(c);
                    cur.bump();
                }
                if c.is_ascii_uppercase() {
                    while cur.peek() == Some('\'') {
                        s.push('\'');
                        cur.bump();
                    }
                    Tok::Var(s)
                } else {
                    Tok::Ident(s)
                }
            }
            other => {
                return Err(ParseError::new(Span::new(start, cur.pos()), format!("unexpected character `{other}`")));
            }
        };
        out.push(Token { tok, span: Span::new(start, cur.pos()) });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn abstract_names_with_dots() {
        assert_eq!(
            toks("#time2dest.left = 3."),
            vec![Tok::Abstract("time2dest.left".into()), Tok::Eq, Tok::Nat(3), Tok::Dot, Tok::Eof]
        );
        assert_eq!(toks("do(a, #t1)."), vec![
            Tok::Ident("do".into()),
            Tok::LParen,
            Tok::Ident("a".into()),
            Tok::Comma,
            Tok::Abstract("t1".into()),
            Tok::RParen,
            Tok::Dot,
            Tok::Eof
        ]);
        assert_eq!(toks("#t1."), vec![Tok::Abstract("t1".into()), Tok::Dot, Tok::Eof]);
    }

    #[test]
    fn primes_comments_and_arrows() {
        assert_eq!(
            toks("x(I') <- y. % note\n z != 2"),
            vec![
                Tok::Ident("x".into()),
                Tok::LParen,
                Tok::Var("I'".into()),
                Tok::RParen,
                Tok::Arrow,
                Tok::Ident("y".into()),
                Tok::Dot,
                Tok::Ident("z".into()),
                Tok::Ne,
                Tok::Nat(2),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn positions() {
        let t = tokenize("a\n  bc").unwrap();
        assert_eq!((t[1].span.start.line, t[1].span.start.col), (2, 3));
        assert_eq!(t[1].span.end.col, 5);
    }

    #[test]
    fn bad_character() {
        let e = tokenize("a ? b").unwrap_err();
        assert_eq!(e.span.start.col, 3);
    }
}
