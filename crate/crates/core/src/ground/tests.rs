use std::collections::BTreeMap;

use super::*;
use crate::model::name;
use crate::parser::parse_theory;

fn suzy() -> crate::model::CausalTheory {
    parse_theory(include_str!("../../../../corpus/suzy_first.w")).unwrap()
}

fn gamma(pairs: &[(&str, u32)]) -> Interpretation {
    Interpretation(pairs.iter().map(|(k, v)| (name(k), *v)).collect())
}

#[test]
fn enumerates_within_bounds() {
    let t = suzy();
    let all = enumerate_interpretations(&t, Bounds { horizon: 3, duration_cap: 2 }, &BTreeMap::new());
    assert!(all.contains(&gamma(&[("d1", 1), ("d2", 2), ("t1", 0), ("t2", 0)])));
    assert!(all.iter().all(|g| g.get("t1").unwrap() + g.get("d1").unwrap() < g.get("t2").unwrap() + g.get("d2").unwrap()));
    let mut sorted = all.clone();
    sorted.sort();
    assert_eq!(sorted, all);
}

#[test]
fn pinned_values() {
    let t = suzy();
    let pin: BTreeMap<_, _> = [(name("t1"), 0), (name("t2"), 0), (name("d1"), 1), (name("d2"), 2)].into_iter().collect();
    let all = enumerate_interpretations(&t, Bounds::default(), &pin);
    assert_eq!(all.len(), 1);
}

#[test]
fn suzy_instance_and_program() {
    let t = suzy();
    let g = gamma(&[("d1", 1), ("d2", 2), ("t1", 0), ("t2", 0)]);
    let c = reduce(&t, &g, Bounds { horizon: 3, duration_cap: 2 }).unwrap();
    let a1 = c.instances.iter().find(|m| m.label.to_string() == "m0(a1)" && m.step == 1).unwrap();
    assert_eq!(a1.head.to_string(), "broken(1)");
    assert!(a1.body.iter().any(|b| b.to_string() == "a1(0)"));
    assert!(a1.body.iter().any(|b| b.to_string() == "neg broken(0)"));
    // no instance reads a negative step
    assert!(c.instances.iter().all(|m| m.step >= 1));
    let p = build_program(&c);
    let dump = p.dump();
    assert!(dump.contains("broken(2) :- broken(1), not broken(2)!=true.  % axiom 8"), "{dump}");
    assert!(dump.contains("neg a1(0) :- not a1(0).  % axiom 11"));
    assert!(dump.contains("a1(0) :+.  % axiom 12"));
    assert!(p.rules.iter().all(|r| !r.cr || r.provenance == Provenance::Axiom(12)));
    assert_eq!(build_program(&c).dump(), dump);
}
