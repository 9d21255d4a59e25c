use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{
    ArithOp, Atom, BodyElem, CausalTheory, ExtendedAtom, FunKind, Mechanism, Name, Signature, Sort, Span, Term,
    STEP_VAR,
};

/// Names the language reserves for generated machinery.
pub const RESERVED: &[&str] = &["ab", "def", "occurs", "do", "init", "obs", "neg", "true", "false"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub span: Span,
    pub message: String,
}

impl Diagnostic {
    pub fn new(span: Span, message: impl Into<String>) -> Diagnostic {
        Diagnostic { span, message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)
    }
}

/// Structural well-formedness of a theory. Returns one diagnostic per
/// violation; an empty list means the theory is valid.
pub fn validate(theory: &CausalTheory) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let sig = theory.full_signature();
    check_signature(&sig, &mut out);

    let mut labels: BTreeMap<&str, Span> = BTreeMap::new();
    for m in &theory.mechanisms {
        if let Some(prev) = labels.insert(&m.label, m.span) {
            out.push(Diagnostic::new(m.span, format!("duplicate mechanism label `{}` (first defined at {prev})", m.label)));
        }
        check_mechanism(m, &sig, &mut out);
    }

    for fact in &theory.scenario.statics {
        match sig.function(&fact.fun) {
            Some(f) if f.kind == FunKind::Static => {}
            Some(_) => out.push(Diagnostic::new(fact.span, format!("`{}` is not a static", fact.fun))),
            None => out.push(Diagnostic::new(fact.span, format!("undeclared symbol `{}`", fact.fun))),
        }
    }
    for ev in &theory.scenario.events {
        match ev {
            ExtendedAtom::Init { fun, span, .. } => match sig.function(fun) {
                Some(f) if f.kind == FunKind::Inertial => {}
                Some(f) => out.push(Diagnostic::new(
                    *span,
                    format!("init applies only to inertial fluents, `{fun}` is {}", f.kind.keyword()),
                )),
                None => out.push(Diagnostic::new(*span, format!("undeclared symbol `{fun}`"))),
            },
            ExtendedAtom::Do { action, span, .. } => {
                let ok = matches!(action, Term::Action(n, _) if sig.function(n).map(|f| f.kind == FunKind::Action).unwrap_or(false));
                if !ok {
                    out.push(Diagnostic::new(*span, format!("do requires an action, found `{action}`")));
                }
            }
            ExtendedAtom::Obs { fun, span, .. } => match sig.function(fun) {
                Some(f) if f.kind.is_fluent() => {}
                _ => out.push(Diagnostic::new(*span, format!("obs requires a fluent, found `{fun}`"))),
            },
        }
    }
    out
}

fn check_signature(sig: &Signature, out: &mut Vec<Diagnostic>) {
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for s in &sig.sorts {
        if !seen.insert(&s.name) || matches!(&*s.name, "bool" | "nat" | "time" | "action") {
            out.push(Diagnostic::new(s.span, format!("duplicate declaration of `{}`", s.name)));
        }
        for o in &s.objects {
            if !seen.insert(o) {
                out.push(Diagnostic::new(s.span, format!("duplicate declaration of `{o}`")));
            }
        }
    }
    for f in &sig.functions {
        if !seen.insert(&f.name) {
            out.push(Diagnostic::new(f.span, format!("duplicate declaration of `{}`", f.name)));
        }
        if RESERVED.contains(&&*f.name) {
            out.push(Diagnostic::new(f.span, format!("`{}` is reserved", f.name)));
        }
        if f.kind == FunKind::Action && f.value != Sort::Bool {
            out.push(Diagnostic::new(f.span, format!("action `{}` must have Boolean value sort", f.name)));
        }
        for p in f.params.iter().chain(std::iter::once(&f.value)) {
            if let Sort::Named(n) = p {
                if sig.sort(n).is_none() {
                    out.push(Diagnostic::new(f.span, format!("undeclared sort `{n}`")));
                }
            }
        }
    }
}

fn check_mechanism(m: &Mechanism, sig: &Signature, out: &mut Vec<Diagnostic>) {
    match &m.head {
        Atom::Fun(a) => match sig.function(&a.fun) {
            Some(f) if f.kind == FunKind::Static => {
                out.push(Diagnostic::new(a.span, format!("mechanism `{}`: head must be non-static", m.label)))
            }
            None => out.push(Diagnostic::new(a.span, format!("undeclared symbol `{}`", a.fun))),
            Some(_) => {
                if a.neq {
                    out.push(Diagnostic::new(a.span, format!("mechanism `{}`: head must be an equality", m.label)));
                }
            }
        },
        Atom::Occurs(_) => {}
    }
    if let Err(e) = check_mechanism_template(m, sig) {
        out.push(Diagnostic::new(e.span, format!("mechanism `{}`: {}", m.label, e.message)));
    }
    match variable_sorts(m, sig) {
        Ok(_) => {}
        Err(mut ds) => out.append(&mut ds),
    }
    let mut used = Vec::new();
    m.head.vars(&mut used);
    for b in &m.body {
        b.vars(&mut used);
    }
    for p in &m.params {
        if !used.contains(p) {
            out.push(Diagnostic::new(m.span, format!("label parameter `{p}` does not occur in mechanism `{}`", m.label)));
        }
    }
}

/// Time-step expressions occurring in an atom, each flagged with whether it
/// is the step of an action atom.
pub(crate) fn atom_time_terms<'a>(atom: &'a Atom, sig: &Signature) -> Vec<(&'a Term, bool)> {
    let mut out = Vec::new();
    match atom {
        Atom::Fun(a) => {
            if let Some(f) = sig.function(&a.fun) {
                for (t, s) in a.args.iter().zip(&f.params) {
                    if *s == Sort::Time {
                        out.push((t, false));
                    }
                }
                if f.value == Sort::Time {
                    out.push((&a.value, false));
                }
            }
            if let Some(s) = &a.step {
                out.push((s, false));
            }
        }
        Atom::Occurs(a) => {
            if let Term::Action(n, args) = &a.action {
                if let Some(f) = sig.function(n) {
                    for (t, s) in args.iter().zip(&f.params) {
                        if *s == Sort::Time {
                            out.push((t, false));
                        }
                    }
                }
            }
            out.push((&a.step, true));
        }
    }
    out
}

/// Offset form `V + c` of a term, when it has one.
fn offset_form(t: &Term) -> Option<(Option<&Name>, i64)> {
    match t {
        Term::Var(v) => Some((Some(v), 0)),
        Term::Nat(n) => Some((None, *n as i64)),
        Term::Arith(l, ArithOp::Add, r) => match (offset_form(l)?, &**r) {
            ((v, c), Term::Nat(n)) => Some((v, c + *n as i64)),
            _ => match (&**l, offset_form(r)?) {
                (Term::Nat(n), (v, c)) => Some((v, c + *n as i64)),
                _ => None,
            },
        },
        Term::Arith(l, ArithOp::Sub, r) => match (offset_form(l)?, &**r) {
            ((v, c), Term::Nat(n)) => Some((v, c - *n as i64)),
            _ => None,
        },
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateError {
    pub span: Span,
    pub message: String,
}

/// Statically decidable part of the principle of causality on a mechanism
/// with variables. Body steps of the form `I + c` are compared with head
/// steps `I + c'`; everything else is left to the ground check performed
/// during reduction.
pub fn check_mechanism_template(m: &Mechanism, sig: &Signature) -> Result<(), TemplateError> {
    let head_has_step = match &m.head {
        Atom::Fun(a) => sig.function(&a.fun).map(|f| f.kind.has_step()).unwrap_or(false),
        Atom::Occurs(_) => true,
    };
    if head_has_step {
        match m.head.step() {
            Some(Term::Var(v)) if &**v == STEP_VAR => {}
            Some(other) => {
                return Err(TemplateError {
                    span: m.head.span(),
                    message: format!("head time-step must be the variable {STEP_VAR}, found `{other}`"),
                })
            }
            None => {
                return Err(TemplateError { span: m.head.span(), message: "head is missing its time-step".into() })
            }
        }
    }
    let heads: Vec<(Option<&Name>, i64)> =
        atom_time_terms(&m.head, sig).into_iter().filter_map(|(t, _)| offset_form(t)).collect();
    for b in &m.body {
        let BodyElem::Atom(atom) = b else { continue };
        for (t, is_action) in atom_time_terms(atom, sig) {
            let Some((bv, bc)) = offset_form(t) else { continue };
            for (hv, hc) in &heads {
                if *hv != bv {
                    continue;
                }
                if bc > *hc || (is_action && bc == *hc) {
                    let rel = if is_action { "strictly precede" } else { "not follow" };
                    return Err(TemplateError {
                        span: atom.span(),
                        message: format!("body time-step `{t}` must {rel} the head time-step (principle of causality)"),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Sort of every variable of a mechanism, read off the positions it
/// occupies. Time and nat positions are compatible; a variable used in both
/// ranges over time-steps.
pub fn variable_sorts(m: &Mechanism, sig: &Signature) -> Result<BTreeMap<Name, Sort>, Vec<Diagnostic>> {
    let mut sorts: BTreeMap<Name, Sort> = BTreeMap::new();
    let mut errs = Vec::new();
    sorts.insert(super::name(STEP_VAR), Sort::Time);
    let mut note = |t: &Term, s: &Sort, span: Span, errs: &mut Vec<Diagnostic>| {
        if let Term::Var(v) = t {
            match sorts.get(v) {
                None => {
                    sorts.insert(v.clone(), s.clone());
                }
                Some(prev) if prev == s => {}
                Some(prev) if prev.is_numeric() && s.is_numeric() => {
                    sorts.insert(v.clone(), Sort::Time);
                }
                Some(prev) => errs.push(Diagnostic::new(
                    span,
                    format!("variable `{v}` used with sorts `{prev}` and `{s}`"),
                )),
            }
        }
    };
    let atoms = std::iter::once(&m.head).chain(m.body.iter().filter_map(|b| match b {
        BodyElem::Atom(a) => Some(a),
        BodyElem::Arith(_) => None,
    }));
    for atom in atoms {
        match atom {
            Atom::Fun(a) => {
                if let Some(f) = sig.function(&a.fun) {
                    for (t, s) in a.args.iter().zip(&f.params) {
                        note(t, s, a.span, &mut errs);
                    }
                    note(&a.value, &f.value, a.span, &mut errs);
                }
                if let Some(s) = &a.step {
                    note(s, &Sort::Time, a.span, &mut errs);
                }
            }
            Atom::Occurs(a) => {
                match &a.action {
                    Term::Action(n, args) => {
                        if let Some(f) = sig.function(n) {
                            for (t, s) in args.iter().zip(&f.params) {
                                note(t, s, a.span, &mut errs);
                            }
                        }
                    }
                    t => note(t, &Sort::Action, a.span, &mut errs),
                }
                note(&a.step, &Sort::Time, a.span, &mut errs);
            }
        }
    }
    for v in m.vars() {
        if !sorts.contains_key(&v) {
            errs.push(Diagnostic::new(
                m.span,
                format!("variable `{v}` of mechanism `{}` occurs in no sorted position", m.label),
            ));
        }
    }
    if errs.is_empty() {
        Ok(sorts)
    } else {
        Err(errs)
    }
}
