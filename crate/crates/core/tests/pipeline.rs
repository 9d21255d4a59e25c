use std::collections::BTreeMap;

use wcausal::ground::{build_program, reduce, Bounds, Interpretation};
use wcausal::model::name;
use wcausal::parser::parse_theory;
use wcausal::solver::{answer_sets, oracle, NormalProgram, SolverConfig};

fn gamma(pairs: &[(&str, u32)]) -> Interpretation {
    Interpretation(pairs.iter().map(|(k, v)| (name(k), *v)).collect::<BTreeMap<_, _>>())
}

#[test]
fn suzy_unique_answer_set() {
    let t = parse_theory(include_str!("../../../corpus/suzy_first.w")).unwrap();
    let g = gamma(&[("d1", 1), ("d2", 2), ("t1", 0), ("t2", 0)]);
    let p = build_program(&reduce(&t, &g, Bounds { horizon: 3, duration_cap: 2 }).unwrap());
    let sets = answer_sets(&p, &SolverConfig::default(), None).unwrap();
    assert_eq!(sets.len(), 1);
    let dump = sets[0].dump(&p);
    for lit in ["neg broken(0)", "broken(1)", "broken(2)", "broken(3)"] {
        assert!(dump.lines().any(|l| l == lit), "{lit} missing from\n{dump}");
    }
    let np = NormalProgram::compile(&p, &[]);
    let expected = oracle::answer_sets_via_wfm(&np, 20).unwrap();
    assert_eq!(expected.len(), 1);
    assert_eq!(wcausal::solver::AnswerSet::from_model(&expected[0]), sets[0]);
    eprintln!("{} atoms, {} rules", p.atoms.len(), p.rules.len());
}
