use proptest::prelude::*;

use super::*;

fn rule(head: Option<u32>, pos: &[u32], neg: &[u32]) -> NormalRule {
    NormalRule { head, pos: pos.to_vec(), neg: neg.to_vec() }
}

fn sorted(mut v: Vec<Vec<bool>>) -> Vec<Vec<bool>> {
    v.sort();
    v
}

#[test]
fn even_loop_has_two_models() {
    let np = NormalProgram { num_atoms: 2, rules: vec![rule(Some(0), &[], &[1]), rule(Some(1), &[], &[0])] };
    let got = sorted(solve(&np, None));
    assert_eq!(got, vec![vec![false, true], vec![true, false]]);
    assert_eq!(got, sorted(oracle::brute_force(&np)));
}

#[test]
fn odd_loop_has_none() {
    let np = NormalProgram { num_atoms: 1, rules: vec![rule(Some(0), &[], &[0])] };
    assert!(solve(&np, None).is_empty());
}

#[test]
fn constraint_kills_model() {
    let np = NormalProgram {
        num_atoms: 2,
        rules: vec![rule(Some(0), &[], &[1]), rule(Some(1), &[], &[0]), rule(None, &[0], &[])],
    };
    assert_eq!(solve(&np, None), vec![vec![false, true]]);
}

#[test]
fn positive_loop_is_unfounded() {
    let np = NormalProgram { num_atoms: 2, rules: vec![rule(Some(0), &[1], &[]), rule(Some(1), &[0], &[])] };
    assert_eq!(solve(&np, None), vec![vec![false, false]]);
}

#[test]
fn limit_stops_early() {
    let mut rules = Vec::new();
    for i in 0..4 {
        rules.push(rule(Some(2 * i), &[], &[2 * i + 1]));
        rules.push(rule(Some(2 * i + 1), &[], &[2 * i]));
    }
    let np = NormalProgram { num_atoms: 8, rules };
    assert_eq!(solve(&np, None).len(), 16);
    assert_eq!(solve(&np, Some(3)).len(), 3);
}

#[test]
fn combinations_in_order() {
    let mut c = vec![0, 1];
    let mut all = vec![c.clone()];
    while next_combination(&mut c, 4) {
        all.push(c.clone());
    }
    assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
}

fn arb_program() -> impl Strategy<Value = NormalProgram> {
    (1usize..=10).prop_flat_map(|n| {
        let atom = 0..n as u32;
        let r = (
            prop::option::weighted(0.85, atom.clone()),
            prop::collection::vec(atom.clone(), 0..3),
            prop::collection::vec(atom, 0..3),
        )
            .prop_map(|(head, pos, neg)| NormalRule { head, pos, neg });
        prop::collection::vec(r, 0..14).prop_map(move |rules| NormalProgram { num_atoms: n, rules })
    })
}

proptest! {
    #[test]
    fn search_matches_brute_force(np in arb_program()) {
        let got = sorted(solve(&np, None));
        prop_assert_eq!(&got, &sorted(oracle::brute_force(&np)));
        prop_assert_eq!(&got, &oracle::answer_sets_via_wfm(&np, 24).unwrap());
        for m in &got {
            prop_assert!(np.is_stable(m));
        }
    }
}

proptest! {
    #[test]
    fn branching_order_is_irrelevant(np in arb_program(), seed in any::<u64>()) {
        let mut order: Vec<u32> = (0..np.num_atoms as u32).collect();
        let n = order.len();
        for i in 0..n {
            order.swap(i, (seed as usize).wrapping_mul(i + 7) % n);
        }
        prop_assert_eq!(sorted(solve_ordered(&np, &order, None)), sorted(solve(&np, None)));
    }
}
