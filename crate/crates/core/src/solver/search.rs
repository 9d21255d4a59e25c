use super::NormalProgram;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum V {
    Unk,
    T,
    F,
}

struct Searcher<'a> {
    np: &'a NormalProgram,
    order: &'a [u32],
    watch: Vec<Vec<usize>>,
    limit: Option<usize>,
    out: Vec<Vec<bool>>,
}

impl Searcher<'_> {
    /// Least model of the rules accepted by `keep`.
    fn lm(&self, keep: impl Fn(usize) -> bool) -> Vec<bool> {
        let n = self.np.num_atoms;
        let mut m = vec![false; n];
        let mut missing: Vec<usize> = self.np.rules.iter().map(|r| r.pos.len()).collect();
        let mut queue = Vec::new();
        for (i, r) in self.np.rules.iter().enumerate() {
            if let (Some(h), true) = (r.head, r.pos.is_empty()) {
                if keep(i) {
                    queue.push(h);
                }
            }
        }
        while let Some(a) = queue.pop() {
            if std::mem::replace(&mut m[a as usize], true) {
                continue;
            }
            for &ri in &self.watch[a as usize] {
                missing[ri] -= 1;
                if missing[ri] == 0 && keep(ri) {
                    if let Some(h) = self.np.rules[ri].head {
                        queue.push(h);
                    }
                }
            }
        }
        m
    }

    /// Propagate to a fixpoint; false on conflict.
    fn propagate(&self, a: &mut [V]) -> bool {
        loop {
            let mut changed = false;
            let rules = &self.np.rules;
            let lower = self.lm(|i| rules[i].neg.iter().all(|&x| a[x as usize] == V::F));
            let upper = self.lm(|i| rules[i].neg.iter().all(|&x| a[x as usize] != V::T));
            for i in 0..a.len() {
                if lower[i] {
                    match a[i] {
                        V::F => return false,
                        V::Unk => {
                            a[i] = V::T;
                            changed = true;
                        }
                        V::T => {}
                    }
                }
                if !upper[i] {
                    match a[i] {
                        V::T => return false,
                        V::Unk => {
                            a[i] = V::F;
                            changed = true;
                        }
                        V::F => {}
                    }
                }
            }
            for r in rules.iter().filter(|r| r.head.is_none()) {
                let mut open = None;
                let mut satisfied = true;
                for (&x, want) in r.pos.iter().map(|x| (x, V::T)).chain(r.neg.iter().map(|x| (x, V::F))) {
                    match a[x as usize] {
                        v if v == want => {}
                        V::Unk if open.is_none() => open = Some((x, want)),
                        _ => {
                            satisfied = false;
                            break;
                        }
                    }
                }
                if !satisfied {
                    continue;
                }
                match open {
                    None => return false,
                    Some((x, want)) => {
                        a[x as usize] = if want == V::T { V::F } else { V::T };
                        changed = true;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn done(&self) -> bool {
        self.limit.map(|l| self.out.len() >= l).unwrap_or(false)
    }

    fn search(&mut self, mut a: Vec<V>) {
        if self.done() || !self.propagate(&mut a) {
            return;
        }
        match self.order.iter().map(|&x| x as usize).find(|&x| a[x] == V::Unk) {
            None => {
                let m: Vec<bool> = a.iter().map(|&v| v == V::T).collect();
                if self.np.is_stable(&m) {
                    self.out.push(m);
                }
            }
            Some(i) => {
                let mut t = a.clone();
                t[i] = V::T;
                self.search(t);
                a[i] = V::F;
                self.search(a);
            }
        }
    }
}

/// Stable models of a normal program, at most `limit` of them. Each branch
/// is propagated with the lower and upper bounds of the well-founded
/// operator, and every total assignment is verified against its reduct.
pub fn solve(np: &NormalProgram, limit: Option<usize>) -> Vec<Vec<bool>> {
    let order: Vec<u32> = (0..np.num_atoms as u32).collect();
    solve_ordered(np, &order, limit)
}

/// As [`solve`], branching on atoms in the given order, which must list
/// every atom.
pub fn solve_ordered(np: &NormalProgram, order: &[u32], limit: Option<usize>) -> Vec<Vec<bool>> {
    assert_eq!(order.len(), np.num_atoms, "branching order must cover every atom");
    let mut watch = vec![Vec::new(); np.num_atoms];
    for (i, r) in np.rules.iter().enumerate() {
        for &a in &r.pos {
            watch[a as usize].push(i);
        }
    }
    let mut s = Searcher { np, order, watch, limit, out: Vec::new() };
    s.search(vec![V::Unk; np.num_atoms]);
    s.out
}
