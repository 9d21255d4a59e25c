use std::collections::BTreeSet;

use super::{name, Name, Scenario, StaticFact, Term};

/// Name of the abstract constant introduced for a static term: the symbol
/// followed by its arguments, dot separated (`time2dest.left`).
pub fn fresh_constant_name(fun: &str, args: &[Term]) -> String {
    let mut s = fun.to_string();
    for a in args {
        s.push('.');
        match a {
            Term::Action(n, inner) if !inner.is_empty() => {
                s.push_str(n);
                for i in inner {
                    s.push('.');
                    s.push_str(&i.to_string());
                }
            }
            other => s.push_str(&other.to_string()),
        }
    }
    s
}

/// Replace every static term occurring in an arithmetic constraint by the
/// constant that denotes its value. When the scenario has no fact for the
/// static yet, a fresh abstract constant `d` is introduced together with the
/// fact `f(args) = #d`.
pub fn expand_shorthands(scenario: &Scenario) -> Scenario {
    let mut out = scenario.clone();
    let mut taken: BTreeSet<Name> = BTreeSet::new();
    for s in &out.statics {
        s.value.abstracts(&mut taken);
    }
    for c in &out.constraints {
        c.lhs.abstracts(&mut taken);
        c.rhs.abstracts(&mut taken);
    }
    let mut constraints = std::mem::take(&mut out.constraints);
    for c in &mut constraints {
        let span = c.span;
        c.lhs = replace(&c.lhs, &mut out.statics, &mut taken, span);
        c.rhs = replace(&c.rhs, &mut out.statics, &mut taken, span);
    }
    out.constraints = constraints;
    out
}

fn replace(term: &Term, statics: &mut Vec<StaticFact>, taken: &mut BTreeSet<Name>, span: super::Span) -> Term {
    match term {
        Term::Static(fun, args) => {
            if let Some(fact) = statics.iter().find(|s| &s.fun == fun && &s.args == args) {
                return fact.value.clone();
            }
            let base = fresh_constant_name(fun, args);
            let mut candidate = base.clone();
            let mut k = 2;
            while taken.contains(candidate.as_str()) {
                candidate = format!("{base}_{k}");
                k += 1;
            }
            let fresh = name(&candidate);
            taken.insert(fresh.clone());
            statics.push(StaticFact {
                fun: fun.clone(),
                args: args.clone(),
                value: Term::Abstract(fresh.clone()),
                span,
            });
            Term::Abstract(fresh)
        }
        Term::Arith(l, op, r) => Term::Arith(
            Box::new(replace(l, statics, taken, span)),
            *op,
            Box::new(replace(r, statics, taken, span)),
        ),
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ArithAtom, CmpOp, Span};

    fn stat(f: &str, args: &[&str]) -> Term {
        Term::Static(name(f), args.iter().map(|a| Term::Object(name(a))).collect())
    }

    fn constraint(lhs: Term, op: CmpOp, rhs: Term) -> ArithAtom {
        ArithAtom { lhs, op, rhs, span: Span::default() }
    }

    #[test]
    fn duration_lower_bound() {
        let mut sc = Scenario::default();
        sc.constraints.push(constraint(stat("duration", &["a1"]), CmpOp::Ge, Term::Nat(1)));
        let out = expand_shorthands(&sc);
        assert_eq!(out.statics.len(), 1);
        assert_eq!(out.statics[0].value, Term::Abstract(name("duration.a1")));
        assert_eq!(out.constraints[0].lhs, Term::Abstract(name("duration.a1")));
        assert_eq!(out.constraints[0].op, CmpOp::Ge);
    }

    #[test]
    fn both_sides_of_an_equation() {
        let mut sc = Scenario::default();
        sc.constraints.push(constraint(stat("time2dest", &["left"]), CmpOp::Eq, stat("time2dest", &["right"])));
        let out = expand_shorthands(&sc);
        assert_eq!(out.statics.len(), 2);
        assert_eq!(out.constraints[0].lhs, Term::Abstract(name("time2dest.left")));
        assert_eq!(out.constraints[0].rhs, Term::Abstract(name("time2dest.right")));
        // fixpoint
        assert_eq!(expand_shorthands(&out), out);
    }

    #[test]
    fn reuses_existing_fact() {
        let mut sc = Scenario::default();
        sc.statics.push(StaticFact {
            fun: name("duration"),
            args: vec![Term::Object(name("a1"))],
            value: Term::Abstract(name("d1")),
            span: Span::default(),
        });
        sc.constraints.push(constraint(stat("duration", &["a1"]), CmpOp::Ge, Term::Nat(1)));
        sc.constraints.push(constraint(
            Term::Arith(Box::new(Term::Abstract(name("t1"))), crate::model::ArithOp::Add, Box::new(stat("duration", &["a1"]))),
            CmpOp::Lt,
            Term::Nat(5),
        ));
        let out = expand_shorthands(&sc);
        assert_eq!(out.statics.len(), 1);
        assert!(out.constraints.iter().all(|c| !c.lhs.mentions_static() && !c.rhs.mentions_static()));
        assert_eq!(out.constraints[0].lhs, Term::Abstract(name("d1")));
    }

    #[test]
    fn avoids_name_collisions() {
        let mut sc = Scenario::default();
        sc.constraints.push(constraint(Term::Abstract(name("time2fork")), CmpOp::Ge, Term::Nat(0)));
        sc.constraints.push(constraint(stat("time2fork", &[]), CmpOp::Ge, Term::Nat(1)));
        let out = expand_shorthands(&sc);
        assert_eq!(out.constraints[1].lhs, Term::Abstract(name("time2fork_2")));
    }
}
