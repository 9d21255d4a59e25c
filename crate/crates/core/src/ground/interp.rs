use std::collections::BTreeMap;
use std::fmt;

use crate::model::{AbstractKind, ArithAtom, ArithOp, CausalTheory, CmpOp, Name, Term};

/// Finite bounds the analysis works within.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Largest time-step of the ground program.
    pub horizon: u32,
    /// Largest value of an abstract constant that is not a time-step.
    pub duration_cap: u32,
}

impl Default for Bounds {
    fn default() -> Bounds {
        Bounds { horizon: 10, duration_cap: 4 }
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "horizon {}, duration cap {}", self.horizon, self.duration_cap)
    }
}

/// Values of abstract constants.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interpretation(pub BTreeMap<Name, u32>);

impl Interpretation {
    pub fn get(&self, c: &str) -> Option<u32> {
        self.0.get(c).copied()
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        f.write_str("}")
    }
}

/// Value of a constraint term under a partial map, `None` while some
/// constant is unassigned.
pub(crate) fn eval_partial(t: &Term, gamma: &BTreeMap<Name, u32>) -> Option<i64> {
    match t {
        Term::Nat(n) => Some(*n as i64),
        Term::Abstract(a) => gamma.get(a).map(|&v| v as i64),
        Term::Arith(l, op, r) => {
            let (l, r) = (eval_partial(l, gamma)?, eval_partial(r, gamma)?);
            Some(match op {
                ArithOp::Add => l + r,
                ArithOp::Sub => l - r,
                ArithOp::Mul => l * r,
            })
        }
        _ => None,
    }
}

fn permits_zero(c: &str, constraints: &[ArithAtom]) -> bool {
    let is_c = |t: &Term| matches!(t, Term::Abstract(a) if &**a == c);
    let zero = |t: &Term| matches!(t, Term::Nat(0));
    constraints.iter().any(|k| {
        (is_c(&k.lhs) && zero(&k.rhs) && matches!(k.op, CmpOp::Ge | CmpOp::Eq))
            || (zero(&k.lhs) && is_c(&k.rhs) && matches!(k.op, CmpOp::Le | CmpOp::Eq))
    })
}

/// Interpretations within bounds, in ascending order. Time-steps range over
/// `[0, horizon]`; other constants over `[1, duration_cap]`, or from 0 when a
/// constraint explicitly allows 0. Constants in `pinned` take the given value.
pub fn enumerate_interpretations(
    theory: &CausalTheory,
    bounds: Bounds,
    pinned: &BTreeMap<Name, u32>,
) -> Vec<Interpretation> {
    let sig = theory.full_signature();
    let constants = theory.scenario.abstract_constants(&sig);
    let constraints = &theory.scenario.constraints;
    let domains: Vec<(Name, Vec<u32>)> = constants
        .iter()
        .map(|(c, kind)| {
            let dom = match pinned.get(c) {
                Some(&v) => vec![v],
                None => match kind {
                    AbstractKind::TimeStep => (0..=bounds.horizon).collect(),
                    AbstractKind::Quantity => {
                        let lo = if permits_zero(c, constraints) { 0 } else { 1 };
                        (lo..=bounds.duration_cap).collect()
                    }
                },
            };
            (c.clone(), dom)
        })
        .collect();
    let mut out = Vec::new();
    let mut gamma = BTreeMap::new();
    search(&domains, constraints, &mut gamma, &mut out);
    out
}

fn search(
    domains: &[(Name, Vec<u32>)],
    constraints: &[ArithAtom],
    gamma: &mut BTreeMap<Name, u32>,
    out: &mut Vec<Interpretation>,
) {
    for c in constraints {
        if let (Some(l), Some(r)) = (eval_partial(&c.lhs, gamma), eval_partial(&c.rhs, gamma)) {
            if !c.op.holds(l, r) {
                return;
            }
        }
    }
    let Some(((name, dom), rest)) = domains.split_first() else {
        out.push(Interpretation(gamma.clone()));
        return;
    };
    for &v in dom {
        gamma.insert(name.clone(), v);
        search(rest, constraints, gamma, out);
    }
    gamma.remove(name);
}
