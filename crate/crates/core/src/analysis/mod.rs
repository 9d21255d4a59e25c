//! Actual causation over the unique answer set of a concrete theory:
//! changes, proofs, tight proofs, causal chains, inflection points, causes
//! and explanations of unexpected observations.

mod cause;
mod chain;
mod explain;
mod proof;

use std::collections::BTreeMap;
use std::fmt;

use crate::ground::{AtomId, Bounds, FunRef, GroundAtom, GroundProgram, Interpretation};
use crate::model::{FunKind, Name, Value};
use crate::solver::{AnswerSet, Solved, SolverConfig};
use crate::{Error, Result};

pub use cause::{causes, causes_under, Cause, CauseReport, ChangeCauses, GammaCauses, Verdict, VerdictCause};
pub use chain::{causal_chains, chains_from_tight, more_informative, Chain};
pub use explain::{explain_observation, Explanation, ExplanationReport};
pub use proof::{
    check_proof, condensed_proofs, proofs, tight_proofs, CondensedProof, Element, Proof, Skeleton, DEFAULT_PROOF_CAP,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisConfig {
    pub bounds: Bounds,
    /// Abstract constants with a fixed value.
    pub pinned: BTreeMap<Name, u32>,
    pub solver: SolverConfig,
    /// Largest number of proofs enumerated for a single target.
    pub proof_cap: usize,
}

impl Default for AnalysisConfig {
    fn default() -> AnalysisConfig {
        AnalysisConfig {
            bounds: Bounds::default(),
            pinned: BTreeMap::new(),
            solver: SolverConfig::default(),
            proof_cap: DEFAULT_PROOF_CAP,
        }
    }
}

/// A concrete theory with its unique answer set.
#[derive(Clone, Debug)]
pub struct Model {
    pub solved: Solved,
    truth: Vec<bool>,
}

impl Model {
    /// The solved theory's only answer set. Errors when it has none or
    /// more than one.
    pub fn unique(solved: Solved) -> Result<Model> {
        match solved.answer_sets.len() {
            0 => Err(Error::Inconsistent(solved.gamma)),
            1 => {
                let mut truth = vec![false; solved.program.atoms.len()];
                for &a in &solved.answer_sets[0].atoms {
                    truth[a as usize] = true;
                }
                Ok(Model { solved, truth })
            }
            count => Err(Error::NotDeterministic { gamma: solved.gamma, count }),
        }
    }

    pub fn program(&self) -> &GroundProgram {
        &self.solved.program
    }

    pub fn answer_set(&self) -> &AnswerSet {
        &self.solved.answer_sets[0]
    }

    pub fn gamma(&self) -> &Interpretation {
        &self.solved.gamma
    }

    pub fn holds(&self, a: AtomId) -> bool {
        self.truth[a as usize]
    }

    pub fn truth(&self) -> &[bool] {
        &self.truth
    }

    /// Id of a ground atom that holds in the model.
    pub fn find(&self, atom: &GroundAtom) -> Option<AtomId> {
        self.program().id(atom).filter(|&a| self.holds(a))
    }

    fn kind(&self, atom: &GroundAtom) -> Option<FunKind> {
        match atom {
            GroundAtom::Val { term, .. } => match &term.fun {
                FunRef::Sym(n) => self.solved.concrete.signature.function(n).map(|f| f.kind),
                FunRef::Ab(_) => None,
            },
            _ => None,
        }
    }
}

/// An atom `e(t,k) = y` that newly holds in the answer set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Change {
    pub atom: GroundAtom,
    pub id: AtomId,
    pub kind: FunKind,
}

impl Change {
    pub fn step(&self) -> Option<u32> {
        self.atom.step()
    }

    pub fn value(&self) -> &Value {
        match &self.atom {
            GroundAtom::Val { value, .. } => value,
            _ => unreachable!("changes are value atoms"),
        }
    }
}

impl fmt::Display for Change {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.atom.fmt(f)
    }
}

/// Changes in the model, by time-step and then text. An inertial fluent
/// changes at step `k > 0` when its value differs from, or was undefined
/// at, step `k - 1`. Actions change when they occur; other fluents whenever
/// they have a value.
pub fn changes(m: &Model) -> Vec<Change> {
    let p = m.program();
    let mut out: Vec<Change> = Vec::new();
    for &id in &m.answer_set().atoms {
        let atom = p.atom(id);
        let GroundAtom::Val { term, neq: false, value } = atom else { continue };
        let Some(kind) = m.kind(atom) else { continue };
        let is_change = match kind {
            FunKind::Static => false,
            FunKind::Action => *value == Value::Bool(true),
            FunKind::Transient | FunKind::Timeless => true,
            FunKind::Inertial => match term.step {
                Some(k) if k > 0 => {
                    let prev = GroundAtom::val(term.at(k - 1), value.clone());
                    m.find(&prev).is_none()
                }
                _ => false,
            },
        };
        if is_change {
            out.push(Change { atom: atom.clone(), id, kind });
        }
    }
    out.sort_by_cached_key(|c| (c.step(), c.atom.to_string()));
    out
}

/// Selects changes: a bare fluent name, or a ground atom whose step and
/// value may be left out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChangePattern {
    pub fun: Name,
    pub args: Option<Vec<Value>>,
    pub step: Option<u32>,
    pub value: Option<Value>,
    pub text: String,
}

impl ChangePattern {
    pub fn matches(&self, c: &Change) -> bool {
        let GroundAtom::Val { term, value, .. } = &c.atom else { return false };
        term.symbol() == Some(&self.fun)
            && self.args.as_ref().is_none_or(|a| *a == term.args)
            && self.step.is_none_or(|s| term.step == Some(s))
            && self.value.as_ref().is_none_or(|v| v == value)
    }
}

impl fmt::Display for ChangePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[cfg(test)]
mod tests;
