use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::Model;
use crate::ground::{AtomId, FunRef, GroundAtom, GroundProgram, Provenance};
use crate::model::FunKind;
use crate::{Error, Result};

pub const DEFAULT_PROOF_CAP: usize = 200_000;

/// Element of a proof sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// A do-atom or a static fact of the scenario.
    Axiom(AtomId),
    /// Index of a ground rule.
    Rule(usize),
    /// Head of an earlier rule.
    Atom(AtomId),
}

/// Proof of a set of atoms, in canonical order: atoms appear after the
/// atoms they depend on, ties broken by step and text.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Proof {
    pub elements: Vec<Element>,
}

impl Proof {
    /// Rules from labeled mechanisms.
    pub fn mechanisms(&self, p: &GroundProgram) -> BTreeSet<usize> {
        self.elements
            .iter()
            .filter_map(|e| match e {
                Element::Rule(r) if matches!(p.rules[*r].provenance, Provenance::Mechanism { .. }) => Some(*r),
                _ => None,
            })
            .collect()
    }

    pub fn do_atoms(&self, p: &GroundProgram) -> BTreeSet<AtomId> {
        self.elements
            .iter()
            .filter_map(|e| match e {
                Element::Axiom(a) if p.atom(*a).is_do() => Some(*a),
                _ => None,
            })
            .collect()
    }

    pub fn skeleton(&self, p: &GroundProgram) -> Skeleton {
        Skeleton { do_atoms: self.do_atoms(p), mechanisms: self.mechanisms(p) }
    }

    pub fn render(&self, p: &GroundProgram) -> Vec<String> {
        self.elements.iter().map(|e| render_element(p, *e)).collect()
    }
}

pub(crate) fn render_element(p: &GroundProgram, e: Element) -> String {
    match e {
        Element::Axiom(a) | Element::Atom(a) => p.atom(a).to_string(),
        Element::Rule(r) => {
            let rule = &p.rules[r];
            match &rule.provenance {
                Provenance::Mechanism { label, step } => format!("{label} at I = {step}"),
                prov => format!("{}  % {prov}", p.render_rule(rule)),
            }
        }
    }
}

/// The do-atoms and mechanism instances of a proof; proofs with the same
/// skeleton differ only in how inertia and value axioms are chained.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Skeleton {
    pub do_atoms: BTreeSet<AtomId>,
    pub mechanisms: BTreeSet<usize>,
}

/// Proofs sharing one skeleton, with the first of them in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondensedProof {
    pub skeleton: Skeleton,
    pub representative: Proof,
    pub count: usize,
}

impl CondensedProof {
    /// Do-atoms, mechanisms and the heads of mechanisms, in proof order.
    pub fn render(&self, p: &GroundProgram) -> Vec<String> {
        let els = &self.representative.elements;
        let mut out = Vec::new();
        for (i, e) in els.iter().enumerate() {
            let keep = match e {
                Element::Axiom(a) => p.atom(*a).is_do(),
                Element::Rule(r) => self.skeleton.mechanisms.contains(r),
                Element::Atom(_) => {
                    matches!(els.get(i.wrapping_sub(1)), Some(Element::Rule(r)) if self.skeleton.mechanisms.contains(r))
                        || i + 1 == els.len()
                }
            };
            if keep {
                out.push(render_element(p, *e));
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Support {
    Axiom,
    Rule(usize),
}

fn is_axiom(m: &Model, a: &GroundAtom) -> bool {
    match a {
        GroundAtom::Do { .. } => true,
        GroundAtom::Val { term, neq: false, .. } => match &term.fun {
            FunRef::Sym(n) => {
                m.solved.concrete.signature.function(n).map(|f| f.kind == FunKind::Static).unwrap_or(false)
                    && m.solved.concrete.statics.iter().any(|(t, _)| t == term)
            }
            FunRef::Ab(_) => false,
        },
        _ => false,
    }
}

struct Search<'a> {
    m: &'a Model,
    options: HashMap<AtomId, Vec<Support>>,
    sup: BTreeMap<AtomId, Support>,
    cap: usize,
    count: usize,
    leaf: &'a mut dyn FnMut(&BTreeMap<AtomId, Support>),
}

impl Search<'_> {
    fn options(&mut self, a: AtomId) -> Vec<Support> {
        if let Some(o) = self.options.get(&a) {
            return o.clone();
        }
        let m = self.m;
        let p = m.program();
        let o = if is_axiom(m, p.atom(a)) {
            vec![Support::Axiom]
        } else {
            p.rules
                .iter()
                .enumerate()
                .filter(|(_, r)| {
                    !r.cr
                        && r.head == Some(a)
                        && r.pos.iter().all(|&b| m.holds(b))
                        && r.neg.iter().all(|&b| !m.holds(b))
                })
                .map(|(i, _)| Support::Rule(i))
                .collect()
        };
        self.options.insert(a, o.clone());
        o
    }

    fn body(&self, s: Support) -> &[AtomId] {
        match s {
            Support::Axiom => &[],
            Support::Rule(r) => &self.m.program().rules[r].pos,
        }
    }

    /// `to` is reachable from `from` through the chosen supports.
    fn reaches(&self, from: AtomId, to: AtomId) -> bool {
        let mut stack = vec![from];
        let mut seen = BTreeSet::new();
        while let Some(x) = stack.pop() {
            if x == to {
                return true;
            }
            if !seen.insert(x) {
                continue;
            }
            if let Some(&s) = self.sup.get(&x) {
                stack.extend_from_slice(self.body(s));
            }
        }
        false
    }

    fn dfs(&mut self, mut pending: Vec<AtomId>) -> Result<()> {
        while pending.last().is_some_and(|a| self.sup.contains_key(a)) {
            pending.pop();
        }
        let Some(a) = pending.pop() else {
            self.count += 1;
            if self.count > self.cap {
                return Err(Error::ProofLimit(self.cap));
            }
            (self.leaf)(&self.sup);
            return Ok(());
        };
        for s in self.options(a) {
            let body = self.body(s).to_vec();
            if body.iter().any(|&b| b == a || (self.sup.contains_key(&b) && self.reaches(b, a))) {
                continue;
            }
            self.sup.insert(a, s);
            let mut next = pending.clone();
            next.extend(body);
            self.dfs(next)?;
            self.sup.remove(&a);
        }
        Ok(())
    }
}

fn search(m: &Model, targets: &[AtomId], cap: usize, leaf: &mut dyn FnMut(&BTreeMap<AtomId, Support>)) -> Result<()> {
    for &t in targets {
        if !m.holds(t) {
            return Err(Error::TargetNotInModel(m.program().atom(t).to_string()));
        }
    }
    let mut s = Search { m, options: HashMap::new(), sup: BTreeMap::new(), cap, count: 0, leaf };
    let mut pending = targets.to_vec();
    pending.reverse();
    s.dfs(pending)
}

fn sequence(p: &GroundProgram, sup: &BTreeMap<AtomId, Support>) -> Proof {
    let key = |a: AtomId| (p.atom(a).step().unwrap_or(0), p.atom(a).to_string(), a);
    let deps = |a: AtomId| -> &[AtomId] {
        match sup[&a] {
            Support::Axiom => &[],
            Support::Rule(r) => &p.rules[r].pos,
        }
    };
    let mut waiting: BTreeMap<AtomId, usize> = BTreeMap::new();
    let mut users: BTreeMap<AtomId, Vec<AtomId>> = BTreeMap::new();
    let mut ready = BTreeSet::new();
    for &a in sup.keys() {
        let d: BTreeSet<AtomId> = deps(a).iter().copied().collect();
        for &b in &d {
            users.entry(b).or_default().push(a);
        }
        if d.is_empty() {
            ready.insert(key(a));
        }
        waiting.insert(a, d.len());
    }
    let mut elements = Vec::new();
    while let Some(k) = ready.pop_first() {
        let a = k.2;
        match sup[&a] {
            Support::Axiom => elements.push(Element::Axiom(a)),
            Support::Rule(r) => {
                elements.push(Element::Rule(r));
                elements.push(Element::Atom(a));
            }
        }
        for &u in users.get(&a).map(Vec::as_slice).unwrap_or(&[]) {
            let w = waiting.get_mut(&u).expect("user is in the proof");
            *w -= 1;
            if *w == 0 {
                ready.insert(key(u));
            }
        }
    }
    Proof { elements }
}

/// All proofs of `targets` in the model, in canonical order. Proofs that
/// differ only in the order of their elements are one proof.
pub fn proofs(m: &Model, targets: &[AtomId], cap: usize) -> Result<Vec<Proof>> {
    let p = m.program();
    let mut out = Vec::new();
    search(m, targets, cap, &mut |sup| out.push(sequence(p, sup)))?;
    out.sort();
    Ok(out)
}

/// Proofs of `targets` grouped by skeleton, ordered by skeleton.
pub fn condensed_proofs(m: &Model, targets: &[AtomId], cap: usize) -> Result<Vec<CondensedProof>> {
    let p = m.program();
    let mut groups: BTreeMap<Skeleton, (BTreeMap<AtomId, Support>, usize)> = BTreeMap::new();
    search(m, targets, cap, &mut |sup| {
        let mut sk = Skeleton::default();
        for (&a, s) in sup {
            match s {
                Support::Axiom if p.atom(a).is_do() => {
                    sk.do_atoms.insert(a);
                }
                Support::Rule(r) if matches!(p.rules[*r].provenance, Provenance::Mechanism { .. }) => {
                    sk.mechanisms.insert(*r);
                }
                _ => {}
            }
        }
        let e = groups.entry(sk).or_insert_with(|| (sup.clone(), 0));
        e.1 += 1;
    })?;
    Ok(groups
        .into_iter()
        .map(|(skeleton, (sup, count))| CondensedProof { skeleton, representative: sequence(p, &sup), count })
        .collect())
}

/// Proofs whose mechanism set does not strictly contain that of another.
pub fn tight_proofs(all: &[CondensedProof]) -> Vec<CondensedProof> {
    all.iter()
        .filter(|a| {
            !all.iter().any(|b| {
                b.skeleton.mechanisms.len() < a.skeleton.mechanisms.len()
                    && b.skeleton.mechanisms.is_subset(&a.skeleton.mechanisms)
            })
        })
        .cloned()
        .collect()
}

/// The sequence satisfies the conditions of a proof of `targets` in the
/// model, ignoring minimality.
pub fn check_proof(m: &Model, targets: &[AtomId], elements: &[Element]) -> bool {
    let p = m.program();
    let mut atoms: BTreeSet<AtomId> = BTreeSet::new();
    let mut heads: BTreeSet<AtomId> = BTreeSet::new();
    for e in elements {
        match *e {
            Element::Axiom(a) => {
                if !is_axiom(m, p.atom(a)) {
                    return false;
                }
                atoms.insert(a);
            }
            Element::Rule(r) => {
                let rule = &p.rules[r];
                let ok = !rule.cr
                    && rule.head.is_some()
                    && rule.pos.iter().all(|b| atoms.contains(b))
                    && rule.neg.iter().all(|&b| !m.holds(b));
                if !ok {
                    return false;
                }
                heads.extend(rule.head);
            }
            Element::Atom(a) => {
                if !heads.contains(&a) {
                    return false;
                }
                atoms.insert(a);
            }
        }
    }
    targets.iter().all(|t| atoms.contains(t))
}
