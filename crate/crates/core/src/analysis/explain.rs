use std::collections::BTreeMap;

use super::cause::{causes_under, Cause};
use super::{changes, AnalysisConfig, Change, Model};
use crate::ground::{enumerate_interpretations, reduce, GroundAtom, GroundEvent, Interpretation};
use crate::model::CausalTheory;
use crate::solver::{abductive_supports, solve_concrete};
use crate::{Error, Result};

/// One abductive support with the cause it gives the observation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Explanation {
    /// Heads of the cr-rules in the support, e.g. `a1(0)`.
    pub support: Vec<GroundAtom>,
    /// The do-atoms added to the scenario for them.
    pub added: Vec<GroundAtom>,
    /// Last change to the observed value at or before the observed step.
    pub change: Option<Change>,
    pub causes: Vec<Cause>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplanationReport {
    pub gamma: Interpretation,
    pub observation: GroundAtom,
    pub explanations: Vec<Explanation>,
    /// Single-atom causes of one action at consecutive steps, e.g.
    /// `do(a1,t) where 0 <= t < 2`.
    pub compact: Vec<String>,
}

/// Explanations of the scenario's last observation, which must be
/// unexpected: the scenario without it is consistent and with it is not.
pub fn explain_observation(theory: &CausalTheory, cfg: &AnalysisConfig) -> Result<Vec<ExplanationReport>> {
    let mut reports = Vec::new();
    let mut consistent_somewhere = false;
    let mut expected: Option<String> = None;
    for gamma in enumerate_interpretations(theory, cfg.bounds, &cfg.pinned) {
        let full = reduce(theory, &gamma, cfg.bounds)?;
        let Some(pos) = full.events.iter().rposition(|e| matches!(e, GroundEvent::Obs { .. })) else {
            return Err(Error::NotUnexpected("the scenario has no observation".into()));
        };
        let obs = full.events[pos].atom();
        let mut base = full.clone();
        base.events.remove(pos);
        if solve_concrete(&gamma, base, &cfg.solver, Some(1))?.answer_sets.is_empty() {
            continue;
        }
        consistent_somewhere = true;
        let with_obs = solve_concrete(&gamma, full.clone(), &cfg.solver, Some(1))?;
        if !with_obs.answer_sets.is_empty() {
            expected.get_or_insert_with(|| format!("{obs} is consistent with the scenario under {gamma}"));
            continue;
        }
        let p = &with_obs.program;
        let mut explanations = Vec::new();
        for sup in abductive_supports(p, &cfg.solver)? {
            let support: Vec<GroundAtom> =
                sup.rules.iter().filter_map(|&r| p.rules[r].head).map(|h| p.atom(h).clone()).collect();
            let mut s_u = full.clone();
            let mut added = Vec::new();
            for (k, a) in support.iter().enumerate() {
                if let GroundAtom::Val { term, .. } = a {
                    let (Some(action), Some(step)) = (term.action(), term.step) else { continue };
                    let e = GroundEvent::Do {
                        action: action.into(),
                        value: true,
                        step,
                        origin: theory.scenario.events.len() + k,
                    };
                    added.push(e.atom());
                    s_u.events.push(e);
                }
            }
            let m = Model::unique(solve_concrete(&gamma, s_u, &cfg.solver, Some(2))?)?;
            let change = last_change(&m, &obs);
            let causes = match &change {
                Some(c) => causes_under(&m, c, cfg)?.causes,
                None => Vec::new(),
            };
            explanations.push(Explanation { support, added, change, causes });
        }
        let compact = compact(&explanations);
        reports.push(ExplanationReport { gamma, observation: obs, explanations, compact });
    }
    if !consistent_somewhere {
        return Err(Error::NoInterpretation(cfg.bounds));
    }
    if reports.is_empty() {
        return Err(Error::NotUnexpected(expected.unwrap_or_default()));
    }
    Ok(reports)
}

fn last_change(m: &Model, obs: &GroundAtom) -> Option<Change> {
    let GroundAtom::Obs { term, value, step } = obs else { return None };
    changes(m)
        .into_iter()
        .filter(|c| match &c.atom {
            GroundAtom::Val { term: t, value: v, .. } => {
                t.unstepped() == term.unstepped() && v == value && t.step.is_none_or(|s| s <= *step)
            }
            _ => false,
        })
        .max_by_key(|c| c.step())
}

fn compact(explanations: &[Explanation]) -> Vec<String> {
    let mut by_action: BTreeMap<(String, bool), Vec<u32>> = BTreeMap::new();
    for e in explanations {
        let [cause] = e.causes.as_slice() else { continue };
        let [GroundAtom::Do { action, value, step }] = cause.do_atoms.as_slice() else { continue };
        by_action.entry((action.to_string(), *value)).or_default().push(*step);
    }
    let mut out = Vec::new();
    for ((action, value), mut steps) in by_action {
        steps.sort();
        steps.dedup();
        let contiguous = steps.windows(2).all(|w| w[1] == w[0] + 1);
        if steps.len() > 1 && contiguous {
            let neg = if value { "" } else { "neg " };
            out.push(format!("do({neg}{action},t) where {} <= t < {}", steps[0], steps[steps.len() - 1] + 1));
        }
    }
    out
}
