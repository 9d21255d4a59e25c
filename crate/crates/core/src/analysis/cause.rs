use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::chain::{chains_from_tight, more_informative, Chain};
use super::proof::{condensed_proofs, tight_proofs};
use super::{changes, AnalysisConfig, Change, ChangePattern, Model};
use crate::ground::{AtomId, Bounds, GroundAtom, GroundEvent, Interpretation};
use crate::model::{CausalTheory, ExtendedAtom};
use crate::solver::{solve_all, solve_concrete};
use crate::{Error, Result};

/// A set of do-atoms that causes a change, with the inflection point and
/// chain that witness it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cause {
    pub do_atoms: Vec<GroundAtom>,
    /// Scenario event each do-atom comes from, when there is one.
    pub origins: Vec<Option<usize>>,
    pub inflection: u32,
    pub chain: Vec<String>,
}

impl Cause {
    pub fn render(&self) -> String {
        let parts: Vec<String> = self.do_atoms.iter().map(GroundAtom::to_string).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// Causes of one change under one interpretation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChangeCauses {
    pub change: Change,
    pub candidates: Vec<u32>,
    pub inflection_points: Vec<u32>,
    pub causes: Vec<Cause>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaCauses {
    pub gamma: Interpretation,
    pub changes: Vec<ChangeCauses>,
}

/// A cause stated over the scenario's own events.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct VerdictCause {
    pub events: BTreeSet<usize>,
    pub text: String,
}

/// Causes of a change that hold under every interpretation in which the
/// change happens.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    /// The change without its step.
    pub change: String,
    pub occurrence: usize,
    /// Interpretations in which the change happens.
    pub present: usize,
    pub absent: usize,
    pub causes: Vec<VerdictCause>,
    /// The cause set is the same under every interpretation where the
    /// change happens.
    pub uniform: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CauseReport {
    pub pattern: String,
    pub bounds: Bounds,
    pub interpretations: usize,
    pub per_gamma: Vec<GammaCauses>,
    pub verdicts: Vec<Verdict>,
}

struct Analysis<'a> {
    m: &'a Model,
    cfg: &'a AnalysisConfig,
    truncated: BTreeMap<u32, Option<Model>>,
}

impl Analysis<'_> {
    fn truncated(&mut self, i: u32) -> Result<Option<&Model>> {
        if !self.truncated.contains_key(&i) {
            let t = self.m.solved.concrete.truncate(i);
            let solved = solve_concrete(self.m.gamma(), t, &self.cfg.solver, Some(2))?;
            let model = match solved.answer_sets.len() {
                0 => None,
                1 => Some(Model::unique(solved)?),
                _ => return Err(Error::TruncatedNotDeterministic { gamma: self.m.gamma().clone(), step: i }),
            };
            self.truncated.insert(i, model);
        }
        Ok(self.truncated[&i].as_ref())
    }

    /// A chain from `i` to the atom exists in the theory truncated after `i`.
    fn survives_truncation(&mut self, i: u32, atom: &GroundAtom) -> Result<bool> {
        let cap = self.cfg.proof_cap;
        let Some(t) = self.truncated(i)? else { return Ok(false) };
        let Some(target) = t.find(atom) else { return Ok(false) };
        let tight = tight_proofs(&condensed_proofs(t, &[target], cap)?);
        Ok(!chains_from_tight(t.program(), &tight, i, target).is_empty())
    }

    fn change(&mut self, change: &Change) -> Result<ChangeCauses> {
        let p = self.m.program();
        let tight = tight_proofs(&condensed_proofs(self.m, &[change.id], self.cfg.proof_cap)?);
        let starts: BTreeSet<u32> =
            tight.iter().flat_map(|t| t.skeleton.do_atoms.iter().map(|&a| p.atom(a).step().unwrap_or(0))).collect();
        let mut chains: BTreeMap<u32, Vec<Chain>> = BTreeMap::new();
        for &i in &starts {
            if self.survives_truncation(i, &change.atom)? {
                chains.insert(i, chains_from_tight(p, &tight, i, change.id));
            }
        }
        let candidates: Vec<u32> = chains.keys().copied().collect();
        let mut inflection_points = Vec::new();
        let mut causes: Vec<Cause> = Vec::new();
        for (&i, from_i) in &chains {
            let undominated: Vec<&Chain> = from_i
                .iter()
                .filter(|c| !chains.iter().any(|(&j, cs)| j != i && cs.iter().any(|d| more_informative(d, c))))
                .collect();
            if undominated.is_empty() {
                continue;
            }
            inflection_points.push(i);
            for c in from_i {
                let cause = self.cause(c, i);
                if !causes.iter().any(|k| k.do_atoms == cause.do_atoms) {
                    causes.push(cause);
                }
            }
        }
        Ok(ChangeCauses { change: change.clone(), candidates, inflection_points, causes })
    }

    fn cause(&self, c: &Chain, i: u32) -> Cause {
        let p = self.m.program();
        let mut dos: Vec<(u32, String, AtomId)> =
            c.do_atoms.iter().map(|&a| (p.atom(a).step().unwrap_or(0), p.atom(a).to_string(), a)).collect();
        dos.sort();
        let do_atoms: Vec<GroundAtom> = dos.iter().map(|d| p.atom(d.2).clone()).collect();
        let origins = do_atoms.iter().map(|a| origin(self.m, a)).collect();
        Cause { do_atoms, origins, inflection: i, chain: c.render(p) }
    }
}

fn origin(m: &Model, a: &GroundAtom) -> Option<usize> {
    m.solved.concrete.events.iter().find_map(|e| match e {
        GroundEvent::Do { origin, .. } if e.atom() == *a => Some(*origin),
        _ => None,
    })
}

/// Causes of a change in the model of one interpretation.
pub fn causes_under(m: &Model, change: &Change, cfg: &AnalysisConfig) -> Result<ChangeCauses> {
    Analysis { m, cfg, truncated: BTreeMap::new() }.change(change)
}

fn causes_of_matching(m: &Model, pattern: &ChangePattern, cfg: &AnalysisConfig) -> Result<GammaCauses> {
    let mut a = Analysis { m, cfg, truncated: BTreeMap::new() };
    let mut out = Vec::new();
    for c in changes(m).iter().filter(|c| pattern.matches(c)) {
        out.push(a.change(c)?);
    }
    Ok(GammaCauses { gamma: m.gamma().clone(), changes: out })
}

/// A scenario `do` event with abstract constants shown by name.
pub(crate) fn event_text(theory: &CausalTheory, i: usize) -> Option<String> {
    match theory.scenario.events.get(i)? {
        ExtendedAtom::Do { action, value, step, .. } => {
            let neg = if *value { "" } else { "neg " };
            let s = format!("do({neg}{action},{step})");
            Some(s.replace('#', "").replace(", ", ","))
        }
        _ => None,
    }
}

fn change_key(c: &Change) -> String {
    match &c.atom {
        GroundAtom::Val { term, value, .. } => GroundAtom::val(term.unstepped(), value.clone()).to_string(),
        other => other.to_string(),
    }
}

fn verdict_cause(theory: &CausalTheory, cause: &Cause) -> VerdictCause {
    let events: BTreeSet<usize> = cause.origins.iter().flatten().copied().collect();
    let parts: Vec<String> = cause
        .do_atoms
        .iter()
        .zip(&cause.origins)
        .map(|(a, o)| o.and_then(|o| event_text(theory, o)).unwrap_or_else(|| a.to_string()))
        .collect();
    let mut parts = parts;
    parts.sort();
    parts.dedup();
    VerdictCause { events, text: format!("{{{}}}", parts.join(", ")) }
}

/// Causes of the changes selected by `pattern`, under every interpretation
/// within bounds, and the causes common to all of them.
pub fn causes(theory: &CausalTheory, pattern: &ChangePattern, cfg: &AnalysisConfig) -> Result<CauseReport> {
    let all = solve_all(theory, cfg.bounds, &cfg.pinned, &cfg.solver)?;
    let models: Vec<Model> = all.into_iter().map(Model::unique).collect::<Result<_>>()?;
    let per_gamma: Vec<GammaCauses> =
        models.par_iter().map(|m| causes_of_matching(m, pattern, cfg)).collect::<Result<_>>()?;
    if per_gamma.iter().all(|g| g.changes.is_empty()) {
        return Err(Error::NoMatchingChange(pattern.to_string()));
    }
    let mut keyed: BTreeMap<(String, usize), Vec<BTreeSet<VerdictCause>>> = BTreeMap::new();
    let mut order: Vec<(String, usize)> = Vec::new();
    for g in &per_gamma {
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        for cc in &g.changes {
            let k = change_key(&cc.change);
            let n = seen.entry(k.clone()).or_insert(0);
            let key = (k, *n);
            *n += 1;
            if !keyed.contains_key(&key) {
                order.push(key.clone());
            }
            keyed.entry(key).or_default().push(cc.causes.iter().map(|c| verdict_cause(theory, c)).collect());
        }
    }
    let verdicts = order
        .into_iter()
        .map(|key| {
            let sets = &keyed[&key];
            let mut common = sets[0].clone();
            for s in &sets[1..] {
                common = common.intersection(s).cloned().collect();
            }
            Verdict {
                change: key.0.clone(),
                occurrence: key.1,
                present: sets.len(),
                absent: per_gamma.len() - sets.len(),
                uniform: sets.iter().all(|s| *s == sets[0]),
                causes: common.into_iter().collect(),
            }
        })
        .collect();
    Ok(CauseReport {
        pattern: pattern.to_string(),
        bounds: cfg.bounds,
        interpretations: per_gamma.len(),
        per_gamma,
        verdicts,
    })
}
