use std::fmt::Write;

use crate::model::{
    Atom, BodyElem, CausalTheory, ExtendedAtom, FunAtom, FunDecl, FunKind, Mechanism, OccursAtom, Scenario, Sort, Term,
};

fn args(ts: &[Term]) -> String {
    if ts.is_empty() {
        return String::new();
    }
    let inner: Vec<String> = ts.iter().map(|t| t.to_string()).collect();
    format!("({})", inner.join(", "))
}

fn fun_atom(a: &FunAtom) -> String {
    let mut all = a.args.clone();
    all.extend(a.step.clone());
    let head = format!("{}{}", a.fun, args(&all));
    match (&a.value, a.neq) {
        (Term::Bool(true), false) => head,
        (Term::Bool(false), false) => format!("neg {head}"),
        (v, neq) => format!("{head} {} {v}", if neq { "!=" } else { "=" }),
    }
}

fn occurs_atom(a: &OccursAtom) -> String {
    let neg = if a.value { "" } else { "neg " };
    match &a.action {
        Term::Action(n, xs) => {
            let mut all = xs.clone();
            all.push(a.step.clone());
            format!("{neg}{n}{}", args(&all))
        }
        other => format!("{neg}occurs({other}, {})", a.step),
    }
}

pub(crate) fn atom(a: &Atom) -> String {
    match a {
        Atom::Fun(f) => fun_atom(f),
        Atom::Occurs(o) => occurs_atom(o),
    }
}

fn body_elem(b: &BodyElem) -> String {
    match b {
        BodyElem::Atom(a) => atom(a),
        BodyElem::Arith(a) => a.to_string(),
    }
}

fn decl(d: &FunDecl) -> String {
    let mut s = d.name.to_string();
    if !d.params.is_empty() {
        let ps: Vec<String> = d.params.iter().map(Sort::to_string).collect();
        write!(s, "({})", ps.join(", ")).unwrap();
    }
    if d.kind != FunKind::Action {
        write!(s, " : {}", d.value).unwrap();
    }
    s
}

fn mechanism(m: &Mechanism) -> String {
    let mut s = format!("mechanism {}", m.label);
    if !m.params.is_empty() {
        let ps: Vec<&str> = m.params.iter().map(|p| &**p).collect();
        write!(s, "({})", ps.join(", ")).unwrap();
    }
    write!(s, " : {}", atom(&m.head)).unwrap();
    if !m.body.is_empty() {
        let b: Vec<String> = m.body.iter().map(body_elem).collect();
        write!(s, " <- {}", b.join(", ")).unwrap();
    }
    s.push('.');
    s
}

/// Canonical text of a theory. Parsing the output yields an equal theory.
pub fn print_theory(t: &CausalTheory) -> String {
    let mut out = String::new();
    for s in &t.signature.sorts {
        let objs: Vec<&str> = s.objects.iter().map(|o| &**o).collect();
        writeln!(out, "sorts {} = {{{}}}.", s.name, objs.join(", ")).unwrap();
    }
    for f in &t.signature.functions {
        let kw = match f.kind {
            FunKind::Static => "statics".to_string(),
            FunKind::Action => "actions".to_string(),
            k => format!("fluents {}", k.keyword()),
        };
        writeln!(out, "{kw} {}.", decl(f)).unwrap();
    }
    for m in &t.mechanisms {
        writeln!(out, "{}", mechanism(m)).unwrap();
    }
    out.push_str(&print_scenario(&t.scenario));
    out
}

/// Canonical text of a scenario, starting with the `scenario` keyword.
pub fn print_scenario(sc: &Scenario) -> String {
    let mut out = String::from("scenario\n");
    for a in &sc.actions {
        writeln!(out, "actions {}.", decl(a)).unwrap();
    }
    for f in &sc.statics {
        writeln!(out, "{}{} = {}.", f.fun, args(&f.args), f.value).unwrap();
    }
    for c in &sc.constraints {
        writeln!(out, "{c}.").unwrap();
    }
    for e in &sc.events {
        match e {
            ExtendedAtom::Init { fun, args: xs, value, .. } => {
                let head = format!("{fun}{}", args(xs));
                match value {
                    Term::Bool(true) => writeln!(out, "init({head}).").unwrap(),
                    Term::Bool(false) => writeln!(out, "init(neg {head}).").unwrap(),
                    v => writeln!(out, "init({head} = {v}).").unwrap(),
                }
            }
            ExtendedAtom::Do { action, value, step, .. } => {
                let neg = if *value { "" } else { "neg " };
                writeln!(out, "do({neg}{action}, {step}).").unwrap();
            }
            ExtendedAtom::Obs { fun, args: xs, value, step, .. } => {
                writeln!(out, "obs({fun}{}, {value}, {step}).", args(xs)).unwrap();
            }
        }
    }
    out
}
