use super::*;
use crate::ground::{Bounds, Interpretation};
use crate::model::name;
use crate::parser::{parse_change_pattern, parse_theory};
use crate::solver::solve_under;

const DIAMOND: &str = "
fluents inertial lit : bool.
actions a, b.
mechanism ma : lit(I) <- a(I - 1).
mechanism mb : lit(I) <- b(I - 1).
scenario
init(neg lit).
do(a, 0).
do(b, 0).
";

fn small() -> AnalysisConfig {
    AnalysisConfig { bounds: Bounds { horizon: 3, duration_cap: 2 }, ..AnalysisConfig::default() }
}

fn model_of(text: &str) -> Model {
    let t = parse_theory(text).unwrap();
    let c = small();
    Model::unique(solve_under(&t, &Interpretation::default(), c.bounds, &c.solver, Some(2)).unwrap()).unwrap()
}

fn atom(m: &Model, text: &str) -> AtomId {
    let id = m.program().atoms.iter().position(|a| a.to_string() == text).unwrap_or_else(|| panic!("no {text}"));
    id as AtomId
}

#[test]
fn diamond_changes() {
    let m = model_of(DIAMOND);
    let got: Vec<String> = changes(&m).iter().map(|c| c.to_string()).collect();
    assert_eq!(got, ["a(0)", "b(0)", "lit(1)"]);
}

#[test]
fn diamond_proofs_are_incomparable_and_tight() {
    let m = model_of(DIAMOND);
    let lit = atom(&m, "lit(1)");
    let all = condensed_proofs(&m, &[lit], 1000).unwrap();
    assert_eq!(all.len(), 2);
    assert_eq!(tight_proofs(&all).len(), 2);
    let raw = proofs(&m, &[lit], 1000).unwrap();
    assert_eq!(raw.len(), 2);
    for p in &raw {
        assert!(check_proof(&m, &[lit], &p.elements));
    }
}

#[test]
fn singleton_is_its_own_tight_set() {
    let m = model_of(DIAMOND);
    let all = condensed_proofs(&m, &[atom(&m, "lit(1)")], 1000).unwrap();
    assert_eq!(tight_proofs(&all[..1]), all[..1].to_vec());
}

#[test]
fn do_atom_has_one_element_proof() {
    let m = model_of(DIAMOND);
    let d = atom(&m, "do(a,0)");
    let ps = proofs(&m, &[d], 10).unwrap();
    assert_eq!(ps, vec![Proof { elements: vec![Element::Axiom(d)] }]);
}

#[test]
fn target_must_hold() {
    let m = model_of(DIAMOND);
    let e = proofs(&m, &[atom(&m, "neg lit(1)")], 10).unwrap_err();
    assert_eq!(e, Error::TargetNotInModel("neg lit(1)".into()));
}

#[test]
fn diamond_causes_both_actions() {
    let m = model_of(DIAMOND);
    let c = changes(&m).into_iter().find(|c| c.to_string() == "lit(1)").unwrap();
    let r = causes_under(&m, &c, &small()).unwrap();
    assert_eq!(r.candidates, [0]);
    assert_eq!(r.inflection_points, [0]);
    let got: Vec<String> = r.causes.iter().map(Cause::render).collect();
    assert_eq!(got, ["{do(a,0)}", "{do(b,0)}"]);
}

#[test]
fn informativeness() {
    let m = model_of(DIAMOND);
    let lit = atom(&m, "lit(1)");
    let chains = causal_chains(&m, 0, lit, 1000).unwrap();
    assert_eq!(chains.len(), 2);
    assert!(!more_informative(&chains[0], &chains[0]));
    assert!(!more_informative(&chains[0], &chains[1]));
    let mut later = chains[0].clone();
    later.start = 1;
    assert!(more_informative(&chains[0], &later));
    assert!(!more_informative(&later, &chains[0]));
}

#[test]
fn static_scenario_has_no_changes() {
    let m = model_of("sorts s = {x}.\nstatics f(s) : nat.\nscenario\nf(x) = 1.\n");
    assert!(changes(&m).is_empty());
}

#[test]
fn patterns() {
    let t = parse_theory(DIAMOND).unwrap();
    let sig = t.full_signature();
    let m = model_of(DIAMOND);
    let cs = changes(&m);
    let count = |p: &str| cs.iter().filter(|c| parse_change_pattern(p, &sig).unwrap().matches(c)).count();
    assert_eq!(count("lit"), 1);
    assert_eq!(count("lit(1)"), 1);
    assert_eq!(count("lit(2)"), 0);
    assert_eq!(count("neg lit(1)"), 0);
    assert_eq!(count("a"), 1);
    assert!(parse_change_pattern("nosuch", &sig).is_err());
    assert!(parse_change_pattern("lit(1, 2)", &sig).is_err());
}

#[test]
fn abstract_verdict_over_interpretations() {
    let text = DIAMOND.replace("do(b, 0).", "do(b, #t).\n#t <= 1.");
    let t = parse_theory(&text).unwrap();
    let pat = parse_change_pattern("lit", &t.full_signature()).unwrap();
    let r = causes(&t, &pat, &small()).unwrap();
    assert_eq!(r.interpretations, 2);
    // with t = 1 only a causes lit(1); b then changes nothing
    let v = &r.verdicts[0];
    assert_eq!(v.change, "lit");
    let got: Vec<&str> = v.causes.iter().map(|c| c.text.as_str()).collect();
    assert_eq!(got, ["{do(a,0)}"]);
    assert!(!v.uniform);
    assert_eq!(r.per_gamma[0].gamma, Interpretation([(name("t"), 0)].into_iter().collect()));
}

fn scenario(acts: &[(bool, u32)]) -> String {
    let mut s = String::from(DIAMOND.split("do(a").next().unwrap());
    for &(which, t) in acts {
        s.push_str(&format!("do({}, {t}).\n", if which { "a" } else { "b" }));
    }
    s
}

proptest::proptest! {
    #[test]
    fn proofs_are_valid_and_tight_subset(acts in proptest::collection::vec((proptest::bool::ANY, 0u32..3), 0..4)) {
        let m = model_of(&scenario(&acts));
        for c in changes(&m) {
            let all = condensed_proofs(&m, &[c.id], 1000).unwrap();
            proptest::prop_assert!(!all.is_empty());
            for p in &all {
                proptest::prop_assert!(check_proof(&m, &[c.id], &p.representative.elements));
                // dropping any element breaks the proof
                for k in 0..p.representative.elements.len() {
                    let mut e = p.representative.elements.clone();
                    e.remove(k);
                    proptest::prop_assert!(!check_proof(&m, &[c.id], &e));
                }
            }
            let tight = tight_proofs(&all);
            proptest::prop_assert!(!tight.is_empty());
            for t in &tight {
                proptest::prop_assert!(all.contains(t));
                for o in &all {
                    let (a, b) = (&o.skeleton.mechanisms, &t.skeleton.mechanisms);
                    proptest::prop_assert!(!(a.len() < b.len() && a.iter().all(|x| b.contains(x))));
                }
            }
        }
    }
}
