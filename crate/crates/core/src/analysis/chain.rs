use std::collections::BTreeSet;

use super::proof::{condensed_proofs, tight_proofs, CondensedProof};
use super::Model;
use crate::ground::{AtomId, GroundProgram, Provenance};
use crate::Result;

/// Causal chain from step `start` to `target`: the do-atoms of a tight
/// proof from `start` on, and its mechanism instances from `start` on.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain {
    pub start: u32,
    pub do_atoms: BTreeSet<AtomId>,
    pub mechanisms: BTreeSet<usize>,
    pub target: AtomId,
}

impl Chain {
    /// do-atoms, then mechanisms by step, then the target.
    pub fn render(&self, p: &GroundProgram) -> Vec<String> {
        let mut dos: Vec<(u32, String)> =
            self.do_atoms.iter().map(|&a| (p.atom(a).step().unwrap_or(0), p.atom(a).to_string())).collect();
        dos.sort();
        let mut mechs: Vec<(u32, String)> = self
            .mechanisms
            .iter()
            .map(|&r| match &p.rules[r].provenance {
                Provenance::Mechanism { label, step } => (*step, label.to_string()),
                other => (0, other.to_string()),
            })
            .collect();
        mechs.sort();
        dos.into_iter()
            .chain(mechs)
            .map(|(_, s)| s)
            .chain(std::iter::once(p.atom(self.target).to_string()))
            .collect()
    }
}

fn mechanism_step(p: &GroundProgram, r: usize) -> u32 {
    match &p.rules[r].provenance {
        Provenance::Mechanism { step, .. } => *step,
        _ => 0,
    }
}

/// Chains from `start` generated by the given tight proofs.
pub fn chains_from_tight(p: &GroundProgram, tight: &[CondensedProof], start: u32, target: AtomId) -> Vec<Chain> {
    let mut out = BTreeSet::new();
    for t in tight {
        let sk = &t.skeleton;
        if !sk.do_atoms.iter().any(|&a| p.atom(a).step() == Some(start)) {
            continue;
        }
        out.insert(Chain {
            start,
            do_atoms: sk.do_atoms.iter().copied().filter(|&a| p.atom(a).step().unwrap_or(0) >= start).collect(),
            mechanisms: sk.mechanisms.iter().copied().filter(|&r| mechanism_step(p, r) >= start).collect(),
            target,
        });
    }
    out.into_iter().collect()
}

/// Causal chains from step `i` to `target` in the model.
pub fn causal_chains(m: &Model, i: u32, target: AtomId, cap: usize) -> Result<Vec<Chain>> {
    let tight = tight_proofs(&condensed_proofs(m, &[target], cap)?);
    Ok(chains_from_tight(m.program(), &tight, i, target))
}

/// `a` starts earlier than `b` and contains all of its elements.
pub fn more_informative(a: &Chain, b: &Chain) -> bool {
    a.target == b.target
        && a.start < b.start
        && b.do_atoms.is_subset(&a.do_atoms)
        && b.mechanisms.is_subset(&a.mechanisms)
}
