use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{answer_sets, AnswerSet, SolverConfig};
use crate::ground::{build_program, enumerate_interpretations, reduce, Bounds, ConcreteTheory, GroundProgram, Interpretation};
use crate::model::{CausalTheory, Name};
use crate::{Error, Result};

/// A theory reduced under one interpretation, its ground program and (up
/// to a limit) its answer sets.
#[derive(Clone, Debug)]
pub struct Solved {
    pub gamma: Interpretation,
    pub concrete: ConcreteTheory,
    pub program: GroundProgram,
    pub answer_sets: Vec<AnswerSet>,
}

/// Ground and solve `theory` under `gamma`, stopping after `limit` answer
/// sets.
pub fn solve_under(
    theory: &CausalTheory,
    gamma: &Interpretation,
    bounds: Bounds,
    cfg: &SolverConfig,
    limit: Option<usize>,
) -> Result<Solved> {
    let concrete = reduce(theory, gamma, bounds)?;
    solve_concrete(gamma, concrete, cfg, limit)
}

pub fn solve_concrete(
    gamma: &Interpretation,
    concrete: ConcreteTheory,
    cfg: &SolverConfig,
    limit: Option<usize>,
) -> Result<Solved> {
    let program = build_program(&concrete);
    let answer_sets = answer_sets(&program, cfg, limit)?;
    Ok(Solved { gamma: gamma.clone(), concrete, program, answer_sets })
}

/// Every candidate interpretation within bounds that makes the theory
/// consistent, solved with at most two answer sets each, in order.
pub fn solve_all(
    theory: &CausalTheory,
    bounds: Bounds,
    pinned: &BTreeMap<Name, u32>,
    cfg: &SolverConfig,
) -> Result<Vec<Solved>> {
    let gammas = enumerate_interpretations(theory, bounds, pinned);
    let solved: Vec<Result<Solved>> =
        gammas.par_iter().map(|g| solve_under(theory, g, bounds, cfg, Some(2))).collect();
    let mut out = Vec::new();
    for s in solved {
        let s = s?;
        if !s.answer_sets.is_empty() {
            out.push(s);
        }
    }
    if out.is_empty() {
        return Err(Error::NoInterpretation(bounds));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Determinism {
    Deterministic { interpretations: usize },
    NotDeterministic { gamma: Interpretation, count: usize },
}

/// Whether the theory has exactly one answer set under every interpretation
/// within bounds; otherwise the first interpretation that has more.
pub fn is_deterministic(
    theory: &CausalTheory,
    bounds: Bounds,
    pinned: &BTreeMap<Name, u32>,
    cfg: &SolverConfig,
) -> Result<Determinism> {
    let all = solve_all(theory, bounds, pinned, cfg)?;
    for s in &all {
        if s.answer_sets.len() > 1 {
            return Ok(Determinism::NotDeterministic { gamma: s.gamma.clone(), count: s.answer_sets.len() });
        }
    }
    Ok(Determinism::Deterministic { interpretations: all.len() })
}
