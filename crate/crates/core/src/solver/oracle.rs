//! Reference stable-model enumeration straight from the definition, used to
//! cross-check the search. Exponential; only for small programs.

use super::NormalProgram;

/// Model `m` is stable: `m` is the least model of the reduct of the program
/// with respect to `m` and satisfies every constraint. Written without
/// sharing code with the search.
pub fn is_answer_set(np: &NormalProgram, m: &[bool]) -> bool {
    // reduct: drop rules with a negated atom in m, drop remaining negation
    let reduct: Vec<(&Option<u32>, &Vec<u32>)> = np
        .rules
        .iter()
        .filter(|r| r.neg.iter().all(|&a| !m[a as usize]))
        .map(|r| (&r.head, &r.pos))
        .collect();
    for (head, pos) in &reduct {
        if head.is_none() && pos.iter().all(|&a| m[a as usize]) {
            return false;
        }
    }
    // naive least model by repeated passes
    let mut lm = vec![false; np.num_atoms];
    loop {
        let mut changed = false;
        for (head, pos) in &reduct {
            if let Some(h) = head {
                if !lm[*h as usize] && pos.iter().all(|&a| lm[a as usize]) {
                    lm[*h as usize] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    lm == m
}

/// Every subset of the atoms, checked against the definition.
pub fn brute_force(np: &NormalProgram) -> Vec<Vec<bool>> {
    assert!(np.num_atoms <= 24, "brute force over {} atoms", np.num_atoms);
    let n = np.num_atoms;
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << n) {
        let m: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
        if is_answer_set(np, &m) {
            out.push(m);
        }
    }
    out
}

fn gamma(np: &NormalProgram, s: &[bool]) -> Vec<bool> {
    let mut lm = vec![false; np.num_atoms];
    loop {
        let mut changed = false;
        for r in &np.rules {
            let Some(h) = r.head else { continue };
            if lm[h as usize] || r.neg.iter().any(|&a| s[a as usize]) {
                continue;
            }
            if r.pos.iter().all(|&a| lm[a as usize]) {
                lm[h as usize] = true;
                changed = true;
            }
        }
        if !changed {
            return lm;
        }
    }
}

/// Well-founded model by the alternating fixpoint: atoms true in it and
/// atoms not false in it.
pub fn well_founded(np: &NormalProgram) -> (Vec<bool>, Vec<bool>) {
    let mut t = vec![false; np.num_atoms];
    loop {
        let u = gamma(np, &t);
        let next = gamma(np, &u);
        if next == t {
            return (t, u);
        }
        t = next;
    }
}

/// Answer sets via the well-founded model followed by exhaustive search over
/// its undefined atoms. Every answer set contains the true atoms and none
/// of the false ones, so this is complete. `None` when too many atoms are
/// undefined.
pub fn answer_sets_via_wfm(np: &NormalProgram, max_undefined: usize) -> Option<Vec<Vec<bool>>> {
    let (t, u) = well_founded(np);
    let undefined: Vec<usize> = (0..np.num_atoms).filter(|&i| u[i] && !t[i]).collect();
    if undefined.len() > max_undefined {
        return None;
    }
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << undefined.len()) {
        let mut m = t.clone();
        for (k, &i) in undefined.iter().enumerate() {
            m[i] = bits >> k & 1 == 1;
        }
        if is_answer_set(np, &m) {
            out.push(m);
        }
    }
    out.sort();
    Some(out)
}
