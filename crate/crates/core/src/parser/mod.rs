//! Text syntax for causal theories.
//!
//! ```text
//! sorts agent = {suzy, billy}.
//! statics duration(action) : nat.
//! fluents inertial broken : bool.
//! mechanism m0(A) : broken(I) <- occurs(A, I - duration(A)).
//! scenario
//! actions throw(agent).
//! do(throw(suzy), 0).
//! ```
//!
//! The grammar is given in `docs/grammar.ebnf`.

mod elaborate;
mod lexer;
mod pattern;
mod printer;
mod syntax;

use thiserror::Error;

use crate::model::{validate, CausalTheory, ExtendedAtom, Scenario, Signature, Span};

pub use pattern::parse_change_pattern;
pub use printer::{print_scenario, print_theory};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub span: Span,
    pub message: String,
    /// Token classes that would have been accepted, for syntax errors.
    pub expected: Vec<String>,
}

impl ParseError {
    pub fn new(span: Span, message: impl Into<String>) -> ParseError {
        ParseError { span, message: message.into(), expected: Vec::new() }
    }
}

fn statements(text: &str, scenario_only: bool) -> Result<Vec<syntax::Stmt>, Vec<ParseError>> {
    let mut toks = lexer::tokenize(text).map_err(|e| vec![e])?;
    if scenario_only && matches!(&toks[0].tok, lexer::Tok::Ident(s) if s == "scenario") {
        toks.remove(0);
    }
    let mut p = syntax::Parser::new(toks);
    if scenario_only {
        p = p.scenario_only();
    }
    let stmts = p.parse_file();
    if p.errors.is_empty() {
        Ok(stmts)
    } else {
        Err(p.errors)
    }
}

/// Parse and resolve a theory without running structural validation.
pub fn parse_theory_unchecked(text: &str) -> Result<CausalTheory, Vec<ParseError>> {
    elaborate::elaborate_theory(&statements(text, false)?)
}

/// Parse a theory file: background followed by an optional scenario. The
/// result is validated; validation diagnostics are reported as errors.
pub fn parse_theory(text: &str) -> Result<CausalTheory, Vec<ParseError>> {
    let theory = parse_theory_unchecked(text)?;
    let diags = validate(&theory);
    if diags.is_empty() {
        Ok(theory)
    } else {
        Err(diags.into_iter().map(|d| ParseError::new(d.span, d.message)).collect())
    }
}

/// Parse scenario statements (with or without the leading `scenario`
/// keyword) against the signature of a background theory.
pub fn parse_scenario(text: &str, sig: &Signature) -> Result<Scenario, Vec<ParseError>> {
    elaborate::elaborate_scenario(&statements(text, true)?, sig)
}

/// Parse a single observation `obs(f, v, i)`; the final dot is optional.
pub fn parse_observation(text: &str, sig: &Signature) -> Result<ExtendedAtom, Vec<ParseError>> {
    let mut src = text.trim().to_string();
    if !src.ends_with('.') {
        src.push('.');
    }
    let stmts = statements(&src, true)?;
    if stmts.len() != 1 || !matches!(stmts[0], syntax::Stmt::Obs { .. }) {
        return Err(vec![ParseError::new(Span::default(), format!("expected `obs(fluent, value, step)`, found `{}`", text.trim()))]);
    }
    let mut el = elaborate::Elaborator::new(sig);
    match el.observation(&stmts) {
        Some(o) if el.errors.is_empty() => Ok(o),
        _ => Err(el.errors),
    }
}

/// Split a theory file into its background and scenario parts; the second
/// part starts at the `scenario` keyword.
pub fn split_background(text: &str) -> (&str, &str) {
    if let Ok(toks) = lexer::tokenize(text) {
        for t in &toks {
            if matches!(&t.tok, lexer::Tok::Ident(s) if s == "scenario") {
                return text.split_at(t.span.start.offset);
            }
        }
    }
    (text, "")
}

#[cfg(test)]
mod tests;
