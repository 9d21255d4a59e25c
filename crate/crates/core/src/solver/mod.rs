//! Stable-model computation for ground programs, abductive supports for
//! consistency-restoring rules, and determinism checks.

mod determinism;
pub mod oracle;
mod search;

use thiserror::Error;

use crate::ground::{AtomId, GroundAtom, GroundProgram};

pub use determinism::{is_deterministic, solve_all, solve_concrete, solve_under, Determinism, Solved};
pub use search::{solve, solve_ordered};

/// Default limit on the number of ground atoms a program may have.
pub const DEFAULT_ATOM_CAP: usize = 50_000;

/// Environment variable overriding the atom limit.
pub const RESOURCE_CAP_VAR: &str = "W_RESOURCE_CAP";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub atom_cap: usize,
    /// Largest abductive support looked for.
    pub max_support_size: usize,
}

impl Default for SolverConfig {
    fn default() -> SolverConfig {
        SolverConfig { atom_cap: DEFAULT_ATOM_CAP, max_support_size: 2 }
    }
}

impl SolverConfig {
    /// Defaults, with the atom limit taken from `W_RESOURCE_CAP` when set.
    pub fn from_env() -> SolverConfig {
        let mut c = SolverConfig::default();
        if let Some(n) = std::env::var(RESOURCE_CAP_VAR).ok().and_then(|v| v.trim().parse().ok()) {
            c.atom_cap = n;
        }
        c
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("ground program has {atoms} atoms, above the limit of {cap} (set {RESOURCE_CAP_VAR} to raise it)")]
    ResourceLimit { atoms: usize, cap: usize },
    #[error("abductive support {{{support}}} yields {count} answer sets; exactly one is assumed")]
    AssumptionViolated { support: String, count: usize },
}

/// Normal rule over atom indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalRule {
    pub head: Option<AtomId>,
    pub pos: Vec<AtomId>,
    pub neg: Vec<AtomId>,
}

/// Program without cr-rules or strong negation: all that the stable-model
/// search sees.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormalProgram {
    pub num_atoms: usize,
    pub rules: Vec<NormalRule>,
}

impl NormalProgram {
    /// Regular rules of `p`, the cr-rules in `applied` as ordinary facts, and
    /// a constraint for every pair of complementary or conflicting atoms.
    pub fn compile(p: &GroundProgram, applied: &[usize]) -> NormalProgram {
        let mut rules: Vec<NormalRule> = p
            .rules
            .iter()
            .enumerate()
            .filter(|(i, r)| !r.cr || applied.contains(i))
            .map(|(_, r)| NormalRule { head: r.head, pos: r.pos.clone(), neg: r.neg.clone() })
            .collect();
        let mut by_term: std::collections::HashMap<_, Vec<(bool, _, AtomId)>> = std::collections::HashMap::new();
        for (i, a) in p.atoms.iter().enumerate() {
            if let GroundAtom::Val { term, neq, value } = a {
                by_term.entry(term).or_default().push((*neq, value, i as AtomId));
            }
        }
        let mut terms: Vec<_> = by_term.into_iter().collect();
        terms.sort_by_key(|(_, v)| v[0].2);
        for (_, atoms) in terms {
            for (x, &(neq_x, vx, ix)) in atoms.iter().enumerate() {
                for &(neq_y, vy, iy) in &atoms[x + 1..] {
                    let clash = match (neq_x, neq_y) {
                        (false, false) => vx != vy,
                        (true, true) => false,
                        _ => vx == vy,
                    };
                    if clash {
                        rules.push(NormalRule { head: None, pos: vec![ix.min(iy), ix.max(iy)], neg: Vec::new() });
                    }
                }
            }
        }
        NormalProgram { num_atoms: p.atoms.len(), rules }
    }

    /// Least model of the rules without default negation, ignoring
    /// constraints; rules with negative bodies are evaluated against
    /// `reduct_of` when given.
    pub fn least_model(&self, reduct_of: Option<&[bool]>) -> Vec<bool> {
        let mut m = vec![false; self.num_atoms];
        let mut missing: Vec<usize> = self.rules.iter().map(|r| r.pos.len()).collect();
        let mut watch: Vec<Vec<usize>> = vec![Vec::new(); self.num_atoms];
        let mut queue = Vec::new();
        for (i, r) in self.rules.iter().enumerate() {
            let Some(h) = r.head else { continue };
            if let Some(s) = reduct_of {
                if r.neg.iter().any(|&a| s[a as usize]) {
                    continue;
                }
            } else if !r.neg.is_empty() {
                continue;
            }
            for &a in &r.pos {
                watch[a as usize].push(i);
            }
            if r.pos.is_empty() {
                queue.push(h);
            }
        }
        while let Some(a) = queue.pop() {
            if std::mem::replace(&mut m[a as usize], true) {
                continue;
            }
            for &ri in &watch[a as usize] {
                missing[ri] -= 1;
                if missing[ri] == 0 {
                    queue.push(self.rules[ri].head.expect("only rules with heads are watched"));
                }
            }
        }
        m
    }

    /// `m` is a stable model: it equals the least model of its reduct and
    /// violates no constraint.
    pub fn is_stable(&self, m: &[bool]) -> bool {
        if self.least_model(Some(m)) != m {
            return false;
        }
        !self.rules.iter().any(|r| {
            r.head.is_none() && r.pos.iter().all(|&a| m[a as usize]) && r.neg.iter().all(|&a| !m[a as usize])
        })
    }
}

/// Stable model, as the sorted list of its true atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnswerSet {
    pub atoms: Vec<AtomId>,
}

impl AnswerSet {
    pub fn from_model(m: &[bool]) -> AnswerSet {
        AnswerSet { atoms: (0..m.len()).filter(|&i| m[i]).map(|i| i as AtomId).collect() }
    }

    pub fn contains(&self, a: AtomId) -> bool {
        self.atoms.binary_search(&a).is_ok()
    }

    pub fn holds(&self, p: &GroundProgram, atom: &GroundAtom) -> bool {
        p.id(atom).map(|id| self.contains(id)).unwrap_or(false)
    }

    /// Sorted rendering, one literal per line.
    pub fn dump(&self, p: &GroundProgram) -> String {
        let mut lines: Vec<String> = self.atoms.iter().map(|&a| p.atom(a).to_string()).collect();
        lines.sort();
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }
}

fn check_cap(p: &GroundProgram, cfg: &SolverConfig) -> Result<(), SolveError> {
    if p.atoms.len() > cfg.atom_cap {
        return Err(SolveError::ResourceLimit { atoms: p.atoms.len(), cap: cfg.atom_cap });
    }
    Ok(())
}

/// Answer sets of the regular part of `p`, at most `limit` of them, sorted.
pub fn answer_sets(p: &GroundProgram, cfg: &SolverConfig, limit: Option<usize>) -> Result<Vec<AnswerSet>, SolveError> {
    answer_sets_with(p, &[], cfg, limit)
}

/// Answer sets when the cr-rules with the given rule indices are applied.
pub fn answer_sets_with(
    p: &GroundProgram,
    applied: &[usize],
    cfg: &SolverConfig,
    limit: Option<usize>,
) -> Result<Vec<AnswerSet>, SolveError> {
    check_cap(p, cfg)?;
    let np = NormalProgram::compile(p, applied);
    let mut order: Vec<AtomId> = (0..p.atoms.len() as AtomId).collect();
    order.sort_by_key(|&a| (p.atom(a).step().unwrap_or(0), a));
    let mut out: Vec<AnswerSet> = solve_ordered(&np, &order, limit).into_iter().map(|m| AnswerSet::from_model(&m)).collect();
    out.sort();
    Ok(out)
}

/// Minimal set of cr-rules that restores consistency, with the unique
/// answer set it yields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbductiveSupport {
    /// Indices into the program's rules.
    pub rules: Vec<usize>,
    pub answer_set: AnswerSet,
}

/// All subset-minimal abductive supports up to the configured size, by
/// increasing cardinality and then rule index. A consistent regular part
/// has the single empty support.
pub fn abductive_supports(p: &GroundProgram, cfg: &SolverConfig) -> Result<Vec<AbductiveSupport>, SolveError> {
    check_cap(p, cfg)?;
    let cr: Vec<usize> = p.cr_rules().map(|(i, _)| i).collect();
    let mut found: Vec<AbductiveSupport> = Vec::new();
    for k in 0..=cfg.max_support_size.min(cr.len()) {
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            let rules: Vec<usize> = combo.iter().map(|&i| cr[i]).collect();
            let minimal = !found.iter().any(|s| s.rules.iter().all(|r| rules.contains(r)));
            if minimal {
                let sets = answer_sets_with(p, &rules, cfg, Some(2))?;
                match sets.len() {
                    0 => {}
                    1 => found.push(AbductiveSupport { rules, answer_set: sets.into_iter().next().unwrap() }),
                    n => {
                        let names: Vec<String> = rules.iter().map(|&r| p.render_rule(&p.rules[r])).collect();
                        return Err(SolveError::AssumptionViolated { support: names.join(" "), count: n });
                    }
                }
            }
            if !next_combination(&mut combo, cr.len()) {
                break;
            }
        }
        if k == 0 && !found.is_empty() {
            break;
        }
    }
    Ok(found)
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests;
