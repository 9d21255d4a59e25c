use super::*;
use crate::model::{Atom, FunKind, Term};

const SUZY: &str = "
sorts agent = {suzy, billy}.
statics duration(action) : nat.
fluents inertial broken : bool.
mechanism m0(A) : broken(I) <- occurs(A, I - duration(A)).
scenario
actions a1, a2.
duration(a1) = #d1.
duration(a2) = 2.
do(a1, #t1).
do(a2, 0).
";

#[test]
fn parses_suzy() {
    let t = parse_theory(SUZY).unwrap();
    assert_eq!(t.mechanisms.len(), 1);
    assert_eq!(t.scenario.actions.len(), 2);
    assert_eq!(t.scenario.statics.len(), 2);
    assert_eq!(t.scenario.events.len(), 2);
    assert_eq!(t.signature.function("broken").unwrap().kind, FunKind::Inertial);
    match &t.mechanisms[0].head {
        Atom::Fun(a) => assert_eq!(a.step, Some(Term::Var(crate::model::name("I")))),
        _ => panic!(),
    }
}

#[test]
fn round_trip() {
    let t = parse_theory(SUZY).unwrap();
    let printed = print_theory(&t);
    assert_eq!(parse_theory(&printed).unwrap(), t);
    assert_eq!(print_theory(&parse_theory(&printed).unwrap()), printed);
}

#[test]
fn unknown_symbol() {
    let e = parse_theory("fluents inertial p : bool.\nmechanism m : p(I) <- q(I).").unwrap_err();
    assert_eq!(e.len(), 1);
    assert!(e[0].message.contains("unknown symbol `q`"), "{}", e[0].message);
    assert_eq!(e[0].span.start.line, 2);
}

#[test]
fn do_on_fluent_is_rejected() {
    let e = parse_theory("fluents inertial p : bool.\nscenario\ndo(p, 0).").unwrap_err();
    assert!(e[0].message.contains("do requires an action"));
}

#[test]
fn static_head_fails_validation() {
    let src = "statics s : bool.\nfluents inertial p : bool.\nmechanism m : s <- p(I).";
    let t = parse_theory_unchecked(src).unwrap();
    assert_eq!(crate::model::validate(&t).len(), 1);
    assert!(parse_theory(src).is_err());
}

#[test]
fn shorthand_constraint() {
    let t = parse_theory(
        "statics duration(action) : nat.\nscenario\nactions a1.\nduration(a1) >= 1.\ndo(a1, 0).",
    )
    .unwrap();
    assert_eq!(t.scenario.statics[0].value, Term::Abstract(crate::model::name("duration.a1")));
    assert_eq!(t.scenario.constraints[0].lhs, Term::Abstract(crate::model::name("duration.a1")));
    assert_eq!(parse_theory(&print_theory(&t)).unwrap(), t);
}

#[test]
fn split() {
    let (b, s) = split_background(SUZY);
    assert!(b.ends_with("duration(A)).\n"));
    assert!(s.starts_with("scenario"));
}

#[test]
fn observation() {
    let t = parse_theory(SUZY).unwrap();
    let o = parse_observation("obs(broken, true, 3)", &t.full_signature()).unwrap();
    assert!(matches!(o, crate::model::ExtendedAtom::Obs { .. }));
    assert!(parse_observation("do(a1, 3)", &t.full_signature()).is_err());
}
