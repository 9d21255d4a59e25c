use std::collections::BTreeMap;

use wcausal::analysis::{causes, explain_observation, AnalysisConfig, CauseReport};
use wcausal::model::name;
use wcausal::parser::{parse_change_pattern, parse_theory};
use wcausal::Error;

fn corpus(file: &str) -> String {
    std::fs::read_to_string(format!("{}/../../corpus/{file}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn run(file: &str, pattern: &str, pins: &[(&str, u32)]) -> wcausal::Result<CauseReport> {
    let t = parse_theory(&corpus(file)).unwrap();
    let pat = parse_change_pattern(pattern, &t.full_signature()).unwrap();
    let pinned: BTreeMap<_, _> = pins.iter().map(|&(k, v)| (name(k), v)).collect();
    causes(&t, &pat, &AnalysisConfig { pinned, ..AnalysisConfig::default() })
}

fn texts(r: &CauseReport) -> Vec<String> {
    r.verdicts[0].causes.iter().map(|c| c.text.clone()).collect()
}

#[test]
fn suzy_first_under_one_interpretation() {
    let r = run("suzy_first.w", "broken", &[("t1", 1), ("d1", 2), ("t2", 2), ("d2", 3)]).unwrap();
    assert_eq!(r.interpretations, 1);
    let c = &r.per_gamma[0].changes[0];
    assert_eq!(c.change.to_string(), "broken(3)");
    assert_eq!(c.candidates, [1]);
    assert_eq!(c.inflection_points, [1]);
    assert_eq!(c.causes.len(), 1);
    assert_eq!(c.causes[0].render(), "{do(a1,1)}");
    assert_eq!(texts(&r), ["{do(a1,t1)}"]);
}

#[test]
fn billy_first_blames_billy() {
    let r = run("suzy_billy_first.w", "broken", &[("t1", 0), ("d1", 4), ("t2", 0), ("d2", 1)]).unwrap();
    assert_eq!(texts(&r), ["{do(a2,t2)}"]);
}

#[test]
fn simultaneous_hits_give_two_causes() {
    let r = run("suzy_same.w", "broken", &[("t1", 0), ("d1", 2), ("t2", 1), ("d2", 1)]).unwrap();
    assert_eq!(texts(&r), ["{do(a1,t1)}", "{do(a2,t2)}"]);
}

#[test]
fn order_is_the_cause() {
    let r = run("suzy_order.w", "broken", &[("t1", 1), ("d1", 1), ("t2", 1), ("d2", 2)]).unwrap();
    assert_eq!(r.per_gamma[0].changes[0].inflection_points, [0]);
    assert_eq!(texts(&r), ["{do(b1,0)}"]);
}

#[test]
fn countermanded_orders_leave_no_change() {
    let e = run("suzy_order2.w", "broken", &[("t1", 1), ("d1", 1), ("t2", 1), ("d2", 2)]).unwrap_err();
    assert!(matches!(e, Error::NoMatchingChange(_)), "{e}");
}

#[test]
fn engineer_flip_is_not_a_cause() {
    let r = run("engineer.w", "arrived(dest)", &[("t3", 0), ("t4", 1)]).unwrap();
    assert_eq!(texts(&r), ["{do(approach,t3)}"]);
    assert!(r.verdicts[0].uniform);
}

#[test]
fn unexpected_observation_is_explained() {
    let t = parse_theory(&corpus("suzy_obs.w")).unwrap();
    let reports = explain_observation(&t, &AnalysisConfig::default()).unwrap();
    assert_eq!(reports.len(), 1);
    let r = &reports[0];
    assert_eq!(r.observation.to_string(), "obs(broken,true,2)");
    let added: Vec<Vec<String>> =
        r.explanations.iter().map(|e| e.added.iter().map(|a| a.to_string()).collect()).collect();
    assert_eq!(added, [["do(a1,0)"]]);
    let e = &r.explanations[0];
    assert_eq!(e.change.as_ref().unwrap().to_string(), "broken(2)");
    assert_eq!(e.causes[0].render(), "{do(a1,0)}");
}

#[test]
fn expected_observation_is_rejected() {
    let text = corpus("suzy_obs.w").replace("obs(broken, true, 2).", "do(a1, 0).\nobs(broken, true, 2).");
    let e = explain_observation(&parse_theory(&text).unwrap(), &AnalysisConfig::default()).unwrap_err();
    assert!(matches!(e, Error::NotUnexpected(_)), "{e}");
}
