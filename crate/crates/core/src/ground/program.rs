use std::collections::{BTreeSet, HashSet};

use super::reduce::domain;
use super::{
    AtomId, ConcreteTheory, FunRef, FunTerm, GroundAtom, GroundEvent, GroundProgram, GroundRule, Provenance,
};
use crate::model::{FunKind, Value};

struct Builder<'a> {
    c: &'a ConcreteTheory,
    p: GroundProgram,
}

impl Builder<'_> {
    fn rule(&mut self, head: Option<GroundAtom>, pos: Vec<GroundAtom>, neg: Vec<GroundAtom>, provenance: Provenance) {
        let head = head.map(|h| self.p.intern(h));
        let pos = pos.into_iter().map(|a| self.p.intern(a)).collect();
        let neg = neg.into_iter().map(|a| self.p.intern(a)).collect();
        self.p.rules.push(GroundRule { head, pos, neg, provenance, cr: false });
    }

    fn fact(&mut self, a: GroundAtom) {
        self.rule(Some(a), Vec::new(), Vec::new(), Provenance::Scenario);
    }

    /// Function symbols subject to the def/inequality axioms: statics and
    /// fluents.
    fn value_sort(&self, t: &FunTerm) -> Option<crate::model::Sort> {
        let FunRef::Sym(n) = &t.fun else { return None };
        let f = self.c.signature.function(n)?;
        (f.kind != FunKind::Action).then(|| f.value.clone())
    }
}

fn atom_args(c: &ConcreteTheory, params: &[crate::model::Sort]) -> Vec<Vec<Value>> {
    let mut combos: Vec<Vec<Value>> = vec![Vec::new()];
    for p in params {
        let dom = c.domain(p);
        combos = combos
            .into_iter()
            .flat_map(|x| {
                dom.iter().map(move |v| {
                    let mut x = x.clone();
                    x.push(v.clone());
                    x
                })
            })
            .collect();
    }
    combos
}

/// Atoms derivable when default negation is ignored and every cr-rule is
/// applied: an over-approximation of every answer set.
fn possible_atoms(p: &GroundProgram) -> Vec<bool> {
    let n = p.atoms.len();
    let mut possible = vec![false; n];
    let mut missing: Vec<usize> = p.rules.iter().map(|r| r.pos.len()).collect();
    let mut watch: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut queue = Vec::new();
    for (i, r) in p.rules.iter().enumerate() {
        for &a in &r.pos {
            watch[a as usize].push(i);
        }
        if r.pos.is_empty() {
            if let Some(h) = r.head {
                queue.push(h);
            }
        }
    }
    while let Some(a) = queue.pop() {
        if std::mem::replace(&mut possible[a as usize], true) {
            continue;
        }
        for &ri in &watch[a as usize] {
            missing[ri] -= 1;
            if missing[ri] == 0 {
                if let Some(h) = p.rules[ri].head {
                    queue.push(h);
                }
            }
        }
    }
    possible
}

/// The ground logic program of a concrete theory: scenario facts, mechanism
/// instances and the general axioms. Rules whose positive body can never be
/// satisfied are left out.
pub fn build_program(c: &ConcreteTheory) -> GroundProgram {
    let h = c.horizon;
    let mut b = Builder { c, p: GroundProgram { horizon: h, ..Default::default() } };
    let t = Value::Bool(true);
    let f = Value::Bool(false);

    for (term, value) in &c.statics {
        b.fact(GroundAtom::val(term.clone(), value.clone()));
    }
    for e in &c.events {
        b.fact(e.atom());
    }

    let mut labels = BTreeSet::new();
    for m in &c.instances {
        let mut body = m.body.clone();
        body.push(GroundAtom::val(FunTerm::ab(&m.label, m.step), f.clone()));
        b.rule(Some(m.head.clone()), body, Vec::new(), Provenance::Mechanism { label: m.label.clone(), step: m.step });
        labels.insert((m.label.clone(), m.step));
    }
    for (label, step) in &labels {
        let ab = FunTerm::ab(label, *step);
        b.rule(Some(GroundAtom::val(ab.clone(), f.clone())), Vec::new(), vec![GroundAtom::val(ab, t.clone())], Provenance::Axiom(6));
    }

    for e in &c.events {
        if let GroundEvent::Init { term, value } = e {
            b.rule(Some(GroundAtom::val(term.at(0), value.clone())), vec![e.atom()], Vec::new(), Provenance::Axiom(7));
        }
    }

    for fun in c.signature.functions.iter().filter(|f| f.kind == FunKind::Inertial) {
        let values = c.domain(&fun.value);
        for args in atom_args(c, &fun.params) {
            let term = FunTerm::sym(&fun.name, args, None);
            for y in &values {
                for i in 1..=h {
                    let (now, before) = (term.at(i), term.at(i - 1));
                    b.rule(
                        Some(GroundAtom::val(now.clone(), y.clone())),
                        vec![GroundAtom::val(before.clone(), y.clone())],
                        vec![GroundAtom::neq(now.clone(), y.clone())],
                        Provenance::Axiom(8),
                    );
                    b.rule(
                        Some(GroundAtom::neq(now.clone(), y.clone())),
                        vec![GroundAtom::neq(before, y.clone())],
                        vec![GroundAtom::val(now, y.clone())],
                        Provenance::Axiom(9),
                    );
                }
            }
        }
    }

    for e in &c.events {
        if let GroundEvent::Do { action, value, step, .. } = e {
            let at = FunTerm::sym(&action.name, action.args.clone(), Some(*step));
            b.rule(Some(GroundAtom::val(at, Value::Bool(*value))), vec![e.atom()], Vec::new(), Provenance::Axiom(10));
        }
    }

    for a in domain(&c.signature, &crate::model::Sort::Action, h, c.nat_max) {
        let Value::Act(a) = a else { continue };
        for i in 0..=h {
            let at = FunTerm::sym(&a.name, a.args.clone(), Some(i));
            b.rule(Some(GroundAtom::val(at.clone(), f.clone())), Vec::new(), vec![GroundAtom::val(at.clone(), t.clone())], Provenance::Axiom(11));
            let head = b.p.intern(GroundAtom::val(at, t.clone()));
            b.p.rules.push(GroundRule { head: Some(head), pos: Vec::new(), neg: Vec::new(), provenance: Provenance::Axiom(12), cr: true });
        }
    }

    for m in c.instances.iter().filter(|m| m.trigger) {
        let GroundAtom::Val { term, value: Value::Bool(w), .. } = &m.head else { continue };
        for e in &c.events {
            let GroundEvent::Do { action, value, step, .. } = e else { continue };
            if *value != *w && Some(*step) == term.step && term.action().as_ref() == Some(&**action) {
                b.rule(
                    Some(GroundAtom::val(FunTerm::ab(&m.label, m.step), t.clone())),
                    vec![e.atom()],
                    Vec::new(),
                    Provenance::Axiom(13),
                );
            }
        }
    }

    for e in &c.events {
        if let GroundEvent::Obs { term, value, step } = e {
            let timed = term
                .symbol()
                .and_then(|n| c.signature.function(n))
                .map(|f| f.kind.has_step())
                .unwrap_or(false);
            let target = if timed { term.at(*step) } else { term.clone() };
            b.rule(None, vec![e.atom()], vec![GroundAtom::val(target, value.clone())], Provenance::Axiom(15));
        }
    }

    // def and inequality axioms, for the atoms that can actually be derived
    let mut expanded: HashSet<AtomId> = HashSet::new();
    loop {
        let possible = possible_atoms(&b.p);
        let fresh: Vec<AtomId> = (0..b.p.atoms.len() as AtomId)
            .filter(|&i| possible[i as usize] && !expanded.contains(&i))
            .filter(|&i| matches!(b.p.atom(i), GroundAtom::Val { neq: false, term, .. } if b.value_sort(term).is_some()))
            .collect();
        if fresh.is_empty() {
            break;
        }
        for id in fresh {
            expanded.insert(id);
            let GroundAtom::Val { term, value, .. } = b.p.atom(id).clone() else { continue };
            let sort = b.value_sort(&term).expect("filtered");
            let atom = GroundAtom::val(term.clone(), value.clone());
            b.rule(Some(GroundAtom::Def(term.clone())), vec![atom.clone()], Vec::new(), Provenance::Axiom(3));
            for y in c.domain(&sort) {
                if y != value {
                    b.rule(Some(GroundAtom::neq(term.clone(), y)), vec![atom.clone()], Vec::new(), Provenance::Axiom(5));
                }
            }
        }
    }
    let possible = possible_atoms(&b.p);
    let neqs: Vec<GroundAtom> = (0..b.p.atoms.len())
        .filter(|&i| possible[i])
        .map(|i| b.p.atoms[i].clone())
        .filter(|a| matches!(a, GroundAtom::Val { neq: true, term, .. } if b.value_sort(term).is_some()))
        .collect();
    for a in neqs {
        let GroundAtom::Val { term, .. } = &a else { continue };
        let def = GroundAtom::Def(term.clone());
        b.rule(None, vec![a], vec![def], Provenance::Axiom(4));
    }

    let possible = possible_atoms(&b.p);
    b.p.rules.retain(|r| r.pos.iter().all(|&a| possible[a as usize]));
    b.p
}
