//! Name resolution and sort checking: turns the concrete syntax tree into
//! model values.

use crate::model::{
    expand_shorthands, name, ArithAtom, Atom, BodyElem, CausalTheory, CmpOp, ExtendedAtom, FunAtom, FunDecl, FunKind,
    Mechanism, OccursAtom, Scenario, Signature, Sort, SortDecl, Span, StaticFact, Term,
};

use super::syntax::{RawFunDecl, RawLit, RawTerm, Stmt};
use super::ParseError;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Ctx {
    Mechanism,
    Scenario,
}

enum Elem {
    Atom(Atom),
    Arith(ArithAtom),
}

pub(crate) struct Elaborator<'s> {
    sig: &'s Signature,
    pub errors: Vec<ParseError>,
}

fn resolve_sort(s: &str, sorts: &[SortDecl]) -> Option<Sort> {
    Some(match s {
        "bool" => Sort::Bool,
        "nat" => Sort::Nat,
        "time" => Sort::Time,
        "action" => Sort::Action,
        other => {
            sorts.iter().find(|d| &*d.name == other)?;
            Sort::Named(name(other))
        }
    })
}

fn fun_decls(kind: FunKind, raw: &[RawFunDecl], sorts: &[SortDecl], errors: &mut Vec<ParseError>) -> Vec<FunDecl> {
    let mut out = Vec::new();
    for d in raw {
        let mut params = Vec::new();
        for (p, sp) in &d.params {
            match resolve_sort(p, sorts) {
                Some(s) => params.push(s),
                None => errors.push(ParseError::new(*sp, format!("unknown sort `{p}`"))),
            }
        }
        let value = match &d.value {
            None => Sort::Bool,
            Some((v, sp)) => match resolve_sort(v, sorts) {
                Some(s) => s,
                None => {
                    errors.push(ParseError::new(*sp, format!("unknown sort `{v}`")));
                    Sort::Bool
                }
            },
        };
        out.push(FunDecl { name: name(&d.name), params, value, kind, span: d.span });
    }
    out
}

fn sort_decls(stmts: &[Stmt]) -> Vec<SortDecl> {
    let mut sorts = Vec::new();
    for s in stmts {
        if let Stmt::Sorts(list) = s {
            for (n, objs, sp) in list {
                sorts.push(SortDecl { name: name(n), objects: objs.iter().map(|o| name(o)).collect(), span: *sp });
            }
        }
    }
    sorts
}

/// Elaborate a whole file: background followed by an optional scenario.
pub(crate) fn elaborate_theory(stmts: &[Stmt]) -> Result<CausalTheory, Vec<ParseError>> {
    let mut errors = Vec::new();
    let sorts = sort_decls(stmts);
    let mut sig = Signature { sorts, functions: Vec::new() };
    let mut scenario_actions = Vec::new();
    let mut in_scenario = false;
    for s in stmts {
        match s {
            Stmt::ScenarioStart => in_scenario = true,
            Stmt::Funs(kind, raw) => {
                let decls = fun_decls(*kind, raw, &sig.sorts, &mut errors);
                if in_scenario {
                    scenario_actions.extend(decls);
                } else {
                    sig.functions.extend(decls);
                }
            }
            _ => {}
        }
    }
    let mut full = sig.clone();
    full.functions.extend(scenario_actions.iter().cloned());

    let mut el = Elaborator { sig: &full, errors };
    let mut mechanisms = Vec::new();
    for s in stmts {
        if let Stmt::Mechanism { label, params, head, body, span } = s {
            if let Some(m) = el.mechanism(label, params, head, body, *span) {
                mechanisms.push(m);
            }
        }
    }
    let stmts_after: Vec<&Stmt> = stmts
        .iter()
        .skip_while(|s| !matches!(s, Stmt::ScenarioStart))
        .collect();
    let mut scenario = el.scenario(stmts_after.into_iter());
    scenario.actions = scenario_actions;
    if el.errors.is_empty() {
        Ok(CausalTheory { signature: sig, mechanisms, scenario })
    } else {
        Err(el.errors)
    }
}

/// Elaborate scenario statements against an existing signature.
pub(crate) fn elaborate_scenario(stmts: &[Stmt], sig: &Signature) -> Result<Scenario, Vec<ParseError>> {
    let mut errors = Vec::new();
    let mut actions = Vec::new();
    for s in stmts {
        match s {
            Stmt::Funs(FunKind::Action, raw) => actions.extend(fun_decls(FunKind::Action, raw, &sig.sorts, &mut errors)),
            Stmt::Funs(..) | Stmt::Sorts(_) | Stmt::Mechanism { .. } => {}
            _ => {}
        }
    }
    let mut full = sig.clone();
    full.functions.extend(actions.iter().cloned());
    let mut el = Elaborator { sig: &full, errors };
    let mut sc = el.scenario(stmts.iter());
    sc.actions = actions;
    if el.errors.is_empty() {
        Ok(sc)
    } else {
        Err(el.errors)
    }
}

impl<'s> Elaborator<'s> {
    pub(crate) fn new(sig: &'s Signature) -> Self {
        Elaborator { sig, errors: Vec::new() }
    }

    fn err(&mut self, span: Span, msg: impl Into<String>) {
        self.errors.push(ParseError::new(span, msg));
    }

    fn mechanism(&mut self, label: &str, params: &[String], head: &RawLit, body: &[RawLit], span: Span) -> Option<Mechanism> {
        let before = self.errors.len();
        let head = match self.literal(head, Ctx::Mechanism) {
            Some(Elem::Atom(a)) => Some(a),
            Some(Elem::Arith(a)) => {
                self.err(a.span, "mechanism head must be an atom");
                None
            }
            None => None,
        };
        let mut elems = Vec::new();
        for l in body {
            match self.literal(l, Ctx::Mechanism) {
                Some(Elem::Atom(a)) => elems.push(BodyElem::Atom(a)),
                Some(Elem::Arith(a)) => elems.push(BodyElem::Arith(a)),
                None => {}
            }
        }
        if self.errors.len() > before {
            return None;
        }
        Some(Mechanism {
            label: name(label),
            params: params.iter().map(|p| name(p)).collect(),
            head: head?,
            body: elems,
            span,
        })
    }

    fn scenario<'a>(&mut self, stmts: impl Iterator<Item = &'a Stmt>) -> Scenario {
        let mut sc = Scenario::default();
        for s in stmts {
            match s {
                Stmt::Init(items, span) => {
                    for it in items {
                        if let Some((fun, args, value)) = self.valued(it, "init") {
                            sc.events.push(ExtendedAtom::Init { fun, args, value, span: *span });
                        }
                    }
                }
                Stmt::Do { neg, action, step, span } => {
                    let a = self.action_value(action, "do requires an action");
                    let st = self.step(step);
                    if let (Some(action), Some(step)) = (a, st) {
                        sc.events.push(ExtendedAtom::Do { action, value: !neg, step, span: *span });
                    }
                }
                Stmt::Obs { fluent, value, step, span } => {
                    let f = match fluent {
                        RawTerm::App(f, args, sp) => match self.sig.function(f) {
                            Some(d) if d.kind.is_fluent() => {
                                let d = d.clone();
                                self.args(&d, args, *sp, Ctx::Scenario, false).map(|a| (d, a))
                            }
                            _ => {
                                self.err(*sp, format!("obs requires a fluent, found `{f}`"));
                                None
                            }
                        },
                        other => {
                            self.err(other.span(), "obs requires a fluent");
                            None
                        }
                    };
                    let st = self.step(step);
                    if let (Some((d, args)), Some(step)) = (f, st) {
                        if let Some(v) = self.value(value, &d.value, Ctx::Scenario) {
                            sc.events.push(ExtendedAtom::Obs { fun: d.name.clone(), args, value: v, step, span: *span });
                        }
                    }
                }
                Stmt::Fact(lit) => match self.literal(lit, Ctx::Scenario) {
                    Some(Elem::Arith(a)) => sc.constraints.push(a),
                    Some(Elem::Atom(Atom::Fun(a))) => {
                        let kind = self.sig.function(&a.fun).map(|f| f.kind);
                        if kind != Some(FunKind::Static) {
                            self.err(a.span, format!("`{}` is a fluent; fluent values enter a scenario through init or obs", a.fun));
                        } else if a.neq {
                            self.err(a.span, "static facts must be equalities");
                        } else {
                            sc.statics.push(StaticFact { fun: a.fun, args: a.args, value: a.value, span: a.span });
                        }
                    }
                    Some(Elem::Atom(Atom::Occurs(a))) => {
                        self.err(a.span, "actions enter a scenario through do(...)");
                    }
                    None => {}
                },
                _ => {}
            }
        }
        expand_shorthands(&sc)
    }

    /// `f(args) = v`, `f(args)` or `neg f(args)` without a time-step.
    fn valued(&mut self, lit: &RawLit, what: &str) -> Option<(crate::model::Name, Vec<Term>, Term)> {
        let RawTerm::App(f, args, sp) = &lit.lhs else {
            self.err(lit.span, format!("{what} expects a fluent assignment"));
            return None;
        };
        let Some(d) = self.sig.function(f).cloned() else {
            self.err(*sp, format!("unknown symbol `{f}`"));
            return None;
        };
        let args = self.args(&d, args, *sp, Ctx::Scenario, false)?;
        let value = match &lit.rel {
            None => Term::Bool(!lit.neg),
            Some((CmpOp::Eq, v)) => self.value(v, &d.value, Ctx::Scenario)?,
            Some(_) => {
                self.err(lit.span, format!("{what} expects `=`"));
                return None;
            }
        };
        if lit.rel.is_none() && d.value != Sort::Bool {
            self.err(lit.span, format!("`{f}` is not Boolean; give its value with `=`"));
            return None;
        }
        Some((d.name.clone(), args, value))
    }

    fn step(&mut self, t: &RawTerm) -> Option<Term> {
        match t {
            RawTerm::Nat(n, _) => Some(Term::Nat(*n)),
            RawTerm::Abstract(a, _) => Some(Term::Abstract(name(a))),
            other => {
                self.err(other.span(), "time-step must be a number or an abstract constant");
                None
            }
        }
    }

    fn action_value(&mut self, t: &RawTerm, msg: &str) -> Option<Term> {
        match t {
            RawTerm::App(a, args, sp) => match self.sig.function(a) {
                Some(d) if d.kind == FunKind::Action => {
                    let d = d.clone();
                    let args = self.args(&d, args, *sp, Ctx::Scenario, false)?;
                    Some(Term::Action(d.name.clone(), args))
                }
                Some(_) => {
                    self.err(*sp, format!("{msg}, `{a}` is not an action"));
                    None
                }
                None => {
                    self.err(*sp, format!("unknown symbol `{a}`"));
                    None
                }
            },
            other => {
                self.err(other.span(), msg);
                None
            }
        }
    }

    fn is_simple(&self, t: &RawTerm) -> bool {
        match t {
            RawTerm::Nat(..) | RawTerm::Var(..) | RawTerm::Abstract(..) => true,
            RawTerm::App(s, args, _) => {
                (args.is_empty() && (s == "true" || s == "false" || self.sig.object_sort(s).is_some()))
                    || self.sig.function(s).map(|f| f.kind == FunKind::Action).unwrap_or(false)
            }
            RawTerm::Bin(..) => false,
        }
    }

    fn args(&mut self, d: &FunDecl, args: &[RawTerm], sp: Span, ctx: Ctx, with_step: bool) -> Option<Vec<Term>> {
        let expected = d.params.len() + usize::from(with_step);
        if args.len() != expected {
            self.err(sp, format!("`{}` expects {expected} argument(s), found {}", d.name, args.len()));
            return None;
        }
        let mut out = Vec::new();
        let mut ok = true;
        for (a, s) in args.iter().zip(&d.params) {
            match self.value(a, s, ctx) {
                Some(t) => out.push(t),
                None => ok = false,
            }
        }
        ok.then_some(out)
    }

    /// Elaborate a term and check it against the expected sort.
    fn value(&mut self, t: &RawTerm, sort: &Sort, ctx: Ctx) -> Option<Term> {
        let term = self.term(t, ctx)?;
        let ok = match (&term, sort) {
            (Term::Var(_), _) => true,
            (Term::Object(o), Sort::Named(s)) => self.sig.object_sort(o).map(|d| d.name == *s).unwrap_or(false),
            (Term::Bool(_), Sort::Bool) => true,
            (Term::Nat(_) | Term::Abstract(_) | Term::Arith(..), s) => s.is_numeric(),
            (Term::Static(f, _), s) => {
                s.is_numeric() && self.sig.function(f).map(|d| d.value.is_numeric()).unwrap_or(false)
            }
            (Term::Action(..), Sort::Action) => true,
            _ => false,
        };
        if !ok {
            self.err(t.span(), format!("expected a value of sort `{sort}`, found `{term}`"));
            return None;
        }
        Some(term)
    }

    fn term(&mut self, t: &RawTerm, ctx: Ctx) -> Option<Term> {
        match t {
            RawTerm::Nat(n, _) => Some(Term::Nat(*n)),
            RawTerm::Var(v, sp) => {
                if ctx == Ctx::Scenario {
                    self.err(*sp, format!("variables are not allowed in a scenario (`{v}`)"));
                    return None;
                }
                Some(Term::Var(name(v)))
            }
            RawTerm::Abstract(a, sp) => {
                if ctx == Ctx::Mechanism {
                    self.err(*sp, format!("abstract constant `#{a}` can only occur in a scenario"));
                    return None;
                }
                Some(Term::Abstract(name(a)))
            }
            RawTerm::Bin(l, op, r, _) => {
                let l = self.term(l, ctx);
                let r = self.term(r, ctx);
                Some(Term::Arith(Box::new(l?), *op, Box::new(r?)))
            }
            RawTerm::App(s, args, sp) => {
                if args.is_empty() {
                    if s == "true" || s == "false" {
                        return Some(Term::Bool(s == "true"));
                    }
                    if self.sig.object_sort(s).is_some() {
                        return Some(Term::Object(name(s)));
                    }
                }
                let Some(d) = self.sig.function(s).cloned() else {
                    self.err(*sp, format!("unknown symbol `{s}`"));
                    return None;
                };
                match d.kind {
                    FunKind::Action => {
                        let args = self.args(&d, args, *sp, ctx, false)?;
                        Some(Term::Action(d.name.clone(), args))
                    }
                    FunKind::Static => {
                        let args = self.args(&d, args, *sp, ctx, false)?;
                        Some(Term::Static(d.name.clone(), args))
                    }
                    _ => {
                        self.err(*sp, format!("fluent `{s}` cannot be used as a term"));
                        None
                    }
                }
            }
        }
    }

    fn literal(&mut self, lit: &RawLit, ctx: Ctx) -> Option<Elem> {
        if let RawTerm::App(s, args, sp) = &lit.lhs {
            if s == "occurs" {
                if lit.rel.is_some() || args.len() != 2 {
                    self.err(lit.span, "expected `occurs(action, step)`");
                    return None;
                }
                let action = match &args[0] {
                    RawTerm::Var(v, vsp) => {
                        if ctx == Ctx::Scenario {
                            self.err(*vsp, "variables are not allowed in a scenario");
                            return None;
                        }
                        Term::Var(name(v))
                    }
                    other => self.action_value(other, "occurs requires an action")?,
                };
                let step = self.value(&args[1], &Sort::Time, ctx)?;
                return Some(Elem::Atom(Atom::Occurs(OccursAtom { action, step, value: !lit.neg, span: lit.span })));
            }
            if let Some(d) = self.sig.function(s).cloned() {
                if d.kind == FunKind::Action {
                    if lit.rel.is_some() {
                        self.err(lit.span, format!("action atom `{s}` cannot carry a relation"));
                        return None;
                    }
                    let n = d.params.len();
                    if args.len() != n + 1 {
                        self.err(*sp, format!("`{s}` expects {} argument(s) including the time-step, found {}", n + 1, args.len()));
                        return None;
                    }
                    let params = self.args(&d, &args[..n], *sp, ctx, false)?;
                    let step = self.value(&args[n], &Sort::Time, ctx)?;
                    return Some(Elem::Atom(Atom::Occurs(OccursAtom {
                        action: Term::Action(d.name.clone(), params),
                        step,
                        value: !lit.neg,
                        span: lit.span,
                    })));
                }
                let simple = lit.rel.as_ref().map(|(op, r)| matches!(op, CmpOp::Eq | CmpOp::Ne) && self.is_simple(r));
                let numeric_static_ne = d.kind == FunKind::Static
                    && ctx == Ctx::Scenario
                    && d.value.is_numeric()
                    && matches!(lit.rel, Some((CmpOp::Ne, _)));
                if simple != Some(false) && !numeric_static_ne {
                    let n = d.params.len();
                    let with_step = d.kind.has_step();
                    let expected = n + usize::from(with_step);
                    if args.len() != expected {
                        let note = if with_step { " including the time-step" } else { "" };
                        self.err(*sp, format!("`{s}` expects {expected} argument(s){note}, found {}", args.len()));
                        return None;
                    }
                    let params = self.args(&d, &args[..n], *sp, ctx, false)?;
                    let step = if with_step { Some(self.value(&args[n], &Sort::Time, ctx)?) } else { None };
                    let (neq, value) = match &lit.rel {
                        None => {
                            if d.value != Sort::Bool {
                                self.err(lit.span, format!("`{s}` is not Boolean; give its value with `=`"));
                                return None;
                            }
                            (false, Term::Bool(!lit.neg))
                        }
                        Some((op, r)) => (*op == CmpOp::Ne, self.value(r, &d.value, ctx)?),
                    };
                    return Some(Elem::Atom(Atom::Fun(FunAtom { fun: d.name.clone(), args: params, step, neq, value, span: lit.span })));
                }
                if d.kind != FunKind::Static {
                    self.err(lit.span, format!("fluent `{s}` cannot be compared arithmetically"));
                    return None;
                }
            } else if !(args.is_empty() && (self.sig.object_sort(s).is_some() || s == "true" || s == "false")) {
                self.err(*sp, format!("unknown symbol `{s}`"));
                return None;
            }
        }
        let Some((op, rhs)) = &lit.rel else {
            self.err(lit.span, "expected an atom or a comparison");
            return None;
        };
        if lit.neg {
            self.err(lit.span, "`neg` applies to atoms only");
            return None;
        }
        let l = self.value(&lit.lhs, &Sort::Nat, ctx);
        let r = self.value(rhs, &Sort::Nat, ctx);
        Some(Elem::Arith(ArithAtom { lhs: l?, op: *op, rhs: r?, span: lit.span }))
    }

    pub(crate) fn observation(&mut self, stmts: &[Stmt]) -> Option<ExtendedAtom> {
        let sc = self.scenario(stmts.iter());
        match sc.events.into_iter().next() {
            Some(e @ ExtendedAtom::Obs { .. }) => Some(e),
            _ => None,
        }
    }
}
