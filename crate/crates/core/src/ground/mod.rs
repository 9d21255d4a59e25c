//! Grounding: interpretations of abstract constants, reduction of a theory
//! under an interpretation, and the ground logic program with its axioms.

mod interp;
mod program;
mod reduce;

use std::fmt;
use std::sync::Arc;

use indexmap::IndexSet;

use crate::model::{write_args, ActionTerm, Name, Value};

pub use interp::{enumerate_interpretations, Bounds, Interpretation};
pub use program::build_program;
pub use reduce::{reduce, ConcreteTheory, DropSummary, GroundError, GroundEvent, MechanismInstance};

/// Ground mechanism label, e.g. `m0(a1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundLabel {
    pub label: Name,
    pub args: Vec<Value>,
}

impl fmt::Display for GroundLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)?;
        write_args(f, &self.args)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunRef {
    Sym(Name),
    /// `ab(m, I)` for a ground mechanism label.
    Ab(Arc<GroundLabel>),
}

/// Ground function term with its time-step, e.g. `switch(3)` or
/// `time2dest(left)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunTerm {
    pub fun: FunRef,
    pub args: Vec<Value>,
    pub step: Option<u32>,
}

impl FunTerm {
    pub fn sym(fun: &Name, args: Vec<Value>, step: Option<u32>) -> FunTerm {
        FunTerm { fun: FunRef::Sym(fun.clone()), args, step }
    }

    pub fn ab(label: &Arc<GroundLabel>, step: u32) -> FunTerm {
        FunTerm { fun: FunRef::Ab(label.clone()), args: Vec::new(), step: Some(step) }
    }

    pub fn symbol(&self) -> Option<&Name> {
        match &self.fun {
            FunRef::Sym(n) => Some(n),
            FunRef::Ab(_) => None,
        }
    }

    /// The same term without its time-step.
    pub fn unstepped(&self) -> FunTerm {
        FunTerm { step: None, ..self.clone() }
    }

    pub fn at(&self, step: u32) -> FunTerm {
        FunTerm { step: Some(step), ..self.clone() }
    }

    /// The action term this term denotes when its symbol is an action.
    pub fn action(&self) -> Option<ActionTerm> {
        self.symbol().map(|n| ActionTerm { name: n.clone(), args: self.args.clone() })
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, with_step: bool) -> fmt::Result {
        match &self.fun {
            FunRef::Sym(n) => {
                f.write_str(n)?;
                let mut parts: Vec<String> = self.args.iter().map(Value::to_string).collect();
                if with_step {
                    parts.extend(self.step.map(|s| s.to_string()));
                }
                write_args(f, &parts)
            }
            FunRef::Ab(l) => match self.step {
                Some(s) => write!(f, "ab({l},{s})"),
                None => write!(f, "ab({l})"),
            },
        }
    }
}

impl fmt::Display for FunTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroundAtom {
    /// `f = v` or `f != v`. Boolean `f = false` is the strong negation
    /// of `f`; actions and `ab` are Boolean terms of this form.
    Val { term: FunTerm, neq: bool, value: Value },
    Def(FunTerm),
    Do { action: Arc<ActionTerm>, value: bool, step: u32 },
    Init { term: FunTerm, value: Value },
    Obs { term: FunTerm, value: Value, step: u32 },
}

impl GroundAtom {
    pub fn val(term: FunTerm, value: Value) -> GroundAtom {
        GroundAtom::Val { term, neq: false, value }
    }

    pub fn neq(term: FunTerm, value: Value) -> GroundAtom {
        GroundAtom::Val { term, neq: true, value }
    }

    pub fn is_do(&self) -> bool {
        matches!(self, GroundAtom::Do { .. })
    }

    /// Time-step the atom refers to, if any.
    pub fn step(&self) -> Option<u32> {
        match self {
            GroundAtom::Val { term, .. } | GroundAtom::Def(term) => term.step,
            GroundAtom::Do { step, .. } | GroundAtom::Obs { step, .. } => Some(*step),
            GroundAtom::Init { .. } => Some(0),
        }
    }
}

fn write_valued(f: &mut fmt::Formatter<'_>, term: &FunTerm, neq: bool, value: &Value, with_step: bool) -> fmt::Result {
    match (value, neq) {
        (Value::Bool(true), false) => term.write(f, with_step),
        (Value::Bool(false), false) => {
            f.write_str("neg ")?;
            term.write(f, with_step)
        }
        (v, neq) => {
            term.write(f, with_step)?;
            write!(f, "{}{v}", if neq { "!=" } else { "=" })
        }
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundAtom::Val { term, neq, value } => write_valued(f, term, *neq, value, true),
            GroundAtom::Def(t) => write!(f, "def({t})"),
            GroundAtom::Do { action, value, step } => {
                let neg = if *value { "" } else { "neg " };
                write!(f, "do({neg}{action},{step})")
            }
            GroundAtom::Init { term, value } => {
                f.write_str("init(")?;
                write_valued(f, term, false, value, false)?;
                f.write_str(")")
            }
            GroundAtom::Obs { term, value, step } => {
                f.write_str("obs(")?;
                term.write(f, false)?;
                write!(f, ",{value},{step})")
            }
        }
    }
}

pub type AtomId = u32;

/// Origin of a ground rule.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    /// Instance of a labeled mechanism at a time-step.
    Mechanism { label: Arc<GroundLabel>, step: u32 },
    /// Instance of a general axiom schema, by its number.
    Axiom(u8),
    /// Fact taken from the scenario.
    Scenario,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Mechanism { label, step } => write!(f, "{label}@{step}"),
            Provenance::Axiom(n) => write!(f, "axiom {n}"),
            Provenance::Scenario => f.write_str("scenario"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundRule {
    /// `None` for constraints.
    pub head: Option<AtomId>,
    pub pos: Vec<AtomId>,
    /// Default-negated body atoms.
    pub neg: Vec<AtomId>,
    pub provenance: Provenance,
    /// Consistency-restoring rule `head :+.`
    pub cr: bool,
}

#[derive(Clone, Debug, Default)]
pub struct GroundProgram {
    pub atoms: IndexSet<GroundAtom>,
    pub rules: Vec<GroundRule>,
    pub horizon: u32,
}

impl GroundProgram {
    pub fn atom(&self, id: AtomId) -> &GroundAtom {
        &self.atoms[id as usize]
    }

    pub fn id(&self, atom: &GroundAtom) -> Option<AtomId> {
        self.atoms.get_index_of(atom).map(|i| i as AtomId)
    }

    pub fn intern(&mut self, atom: GroundAtom) -> AtomId {
        self.atoms.insert_full(atom).0 as AtomId
    }

    pub fn regular_rules(&self) -> impl Iterator<Item = (usize, &GroundRule)> {
        self.rules.iter().enumerate().filter(|(_, r)| !r.cr)
    }

    pub fn cr_rules(&self) -> impl Iterator<Item = (usize, &GroundRule)> {
        self.rules.iter().enumerate().filter(|(_, r)| r.cr)
    }

    pub fn render_rule(&self, r: &GroundRule) -> String {
        let mut s = String::new();
        if let Some(h) = r.head {
            s.push_str(&self.atom(h).to_string());
        }
        let body: Vec<String> = r
            .pos
            .iter()
            .map(|&a| self.atom(a).to_string())
            .chain(r.neg.iter().map(|&a| format!("not {}", self.atom(a))))
            .collect();
        if r.cr {
            s.push_str(" :+");
        } else if !body.is_empty() || r.head.is_none() {
            s.push_str(" :- ");
            s.push_str(&body.join(", "));
        }
        s.push('.');
        s
    }

    /// One rule per line with its provenance, sorted by provenance then text.
    pub fn dump(&self) -> String {
        let mut lines: Vec<(&Provenance, String)> =
            self.rules.iter().map(|r| (&r.provenance, self.render_rule(r))).collect();
        lines.sort();
        let mut out = String::new();
        for (p, text) in lines {
            out.push_str(&format!("{text}  % {p}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests;
