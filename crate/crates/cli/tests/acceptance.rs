//! End-to-end acceptance checks over the shipped corpus. Prints one line
//! per criterion and fails if any criterion fails.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wcausal::analysis::{
    causes, changes, check_proof, condensed_proofs, explain_observation, proofs, tight_proofs, AnalysisConfig,
    CauseReport, Element, Model,
};
use wcausal::ground::{build_program, enumerate_interpretations, reduce, GroundAtom, Interpretation};
use wcausal::model::{name, ActionTerm, CausalTheory, ExtendedAtom};
use wcausal::parser::{parse_change_pattern, parse_theory, split_background};
use wcausal::solver::{
    is_deterministic, oracle, solve, solve_under, Determinism, NormalProgram, NormalRule,
};

type Check = Result<(), String>;

fn corpus(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(file)
}

fn text(file: &str) -> String {
    std::fs::read_to_string(corpus(file)).unwrap()
}

fn theory(file: &str) -> CausalTheory {
    parse_theory(&text(file)).unwrap_or_else(|e| panic!("{file}: {e:?}"))
}

fn cfg() -> AnalysisConfig {
    AnalysisConfig::default()
}

fn report(file: &str, pattern: &str) -> Result<CauseReport, String> {
    let t = theory(file);
    let pat = parse_change_pattern(pattern, &t.full_signature()).map_err(|e| e.to_string())?;
    causes(&t, &pat, &cfg()).map_err(|e| e.to_string())
}

fn g(gamma: &Interpretation, c: &str) -> u32 {
    gamma.get(c).unwrap_or_else(|| panic!("no value for {c} in {gamma}"))
}

fn do_atom(action: &str, step: u32) -> GroundAtom {
    GroundAtom::Do { action: Arc::new(ActionTerm { name: name(action), args: Vec::new() }), value: true, step }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn verdict_is(r: &CauseReport, expected: &[&str]) -> Check {
    ensure(r.verdicts.len() == 1, || format!("expected one kind of change, got {}", r.verdicts.len()))?;
    let v = &r.verdicts[0];
    let got: Vec<&str> = v.causes.iter().map(|c| c.text.as_str()).collect();
    ensure(got == expected, || format!("verdict {got:?}, expected {expected:?}"))?;
    ensure(v.uniform, || "cause set differs between interpretations".into())
}

/// Under every interpretation with a change, the change is at `step(gm)` and
/// its causes are exactly the singletons `expected(gm)`.
fn per_gamma(
    r: &CauseReport,
    step: impl Fn(&Interpretation) -> u32,
    expected: impl Fn(&Interpretation) -> Vec<GroundAtom>,
) -> Check {
    let mut seen = 0;
    for gc in &r.per_gamma {
        if gc.changes.is_empty() {
            continue;
        }
        seen += 1;
        ensure(gc.changes.len() == 1, || format!("{} changes under {}", gc.changes.len(), gc.gamma))?;
        let cc = &gc.changes[0];
        ensure(cc.change.step() == Some(step(&gc.gamma)), || format!("change {} under {}", cc.change, gc.gamma))?;
        let mut got: Vec<Vec<GroundAtom>> = cc.causes.iter().map(|c| c.do_atoms.clone()).collect();
        let mut want: Vec<Vec<GroundAtom>> = expected(&gc.gamma).into_iter().map(|a| vec![a]).collect();
        got.sort();
        want.sort();
        ensure(got == want, || format!("causes {got:?} under {}, expected {want:?}", gc.gamma))?;
    }
    ensure(seen > 0, || "no interpretation has the change".into())
}

fn c1() -> Check {
    let r = report("suzy_first.w", "broken")?;
    verdict_is(&r, &["{do(a1,t1)}"])?;
    per_gamma(&r, |gm| g(gm, "t1") + g(gm, "d1"), |gm| vec![do_atom("a1", g(gm, "t1"))])
}

fn c2() -> Check {
    let (first, billy) = (text("suzy_first.w"), text("suzy_billy_first.w"));
    ensure(split_background(&first).0 == split_background(&billy).0, || "background theories differ".into())?;
    let r = report("suzy_billy_first.w", "broken")?;
    verdict_is(&r, &["{do(a2,t2)}"])?;
    per_gamma(&r, |gm| g(gm, "t2") + g(gm, "d2"), |gm| vec![do_atom("a2", g(gm, "t2"))])
}

fn c3() -> Check {
    let r = report("suzy_same.w", "broken")?;
    verdict_is(&r, &["{do(a1,t1)}", "{do(a2,t2)}"])?;
    per_gamma(&r, |gm| g(gm, "t1") + g(gm, "d1"), |gm| vec![do_atom("a1", g(gm, "t1")), do_atom("a2", g(gm, "t2"))])
}

fn c4() -> Check {
    let r = report("suzy_order.w", "broken")?;
    verdict_is(&r, &["{do(b1,0)}"])?;
    per_gamma(&r, |gm| g(gm, "t1") + g(gm, "d1"), |_| vec![do_atom("b1", 0)])?;
    let t = theory("suzy_order2.w");
    let c = cfg();
    let mut n = 0;
    for gm in enumerate_interpretations(&t, c.bounds, &c.pinned) {
        let s = solve_under(&t, &gm, c.bounds, &c.solver, Some(2)).map_err(|e| e.to_string())?;
        if s.answer_sets.is_empty() {
            continue;
        }
        n += 1;
        let m = Model::unique(s).map_err(|e| e.to_string())?;
        let broken = changes(&m).into_iter().filter(|c| c.atom.to_string().starts_with("broken")).count();
        ensure(broken == 0, || format!("order2: broken changes under {gm}"))?;
    }
    ensure(n > 0, || "order2: no interpretation".into())?;
    let r = report("suzy_order3.w", "broken")?;
    verdict_is(&r, &["{do(b2,0)}"])?;
    per_gamma(&r, |gm| g(gm, "t2") + g(gm, "d2"), |_| vec![do_atom("b2", 0)])
}

fn c5() -> Check {
    let r = report("suzy_aim.w", "broken")?;
    verdict_is(&r, &["{do(a1,t1)}"])?;
    per_gamma(&r, |gm| g(gm, "t1") + g(gm, "duration.a1"), |gm| vec![do_atom("a1", g(gm, "t1"))])?;
    for gc in &r.per_gamma {
        for cc in &gc.changes {
            let t5 = g(&gc.gamma, "t5");
            ensure(!cc.candidates.contains(&t5), || format!("t5 is a candidate under {}", gc.gamma))?;
            for cause in &cc.causes {
                ensure(!cause.do_atoms.iter().any(|a| a.to_string().starts_with("do(c,")), || {
                    format!("do(c,t5) reported as a cause under {}", gc.gamma)
                })?;
            }
        }
    }
    Ok(())
}

fn gamma(pairs: &[(&str, u32)]) -> Interpretation {
    Interpretation(pairs.iter().map(|(k, v)| (name(k), *v)).collect())
}

fn model(t: &CausalTheory, gm: &Interpretation) -> Result<Model, String> {
    let c = cfg();
    Model::unique(solve_under(t, gm, c.bounds, &c.solver, Some(2)).map_err(|e| e.to_string())?).map_err(|e| e.to_string())
}

fn c6() -> Check {
    let r = report("engineer.w", "arrived(dest)")?;
    verdict_is(&r, &["{do(approach,t3)}"])?;
    let (mut before, mut after) = (0, 0);
    for gc in r.per_gamma.iter().filter(|gc| !gc.changes.is_empty()) {
        let gm = &gc.gamma;
        if g(gm, "t4") < g(gm, "t3") + g(gm, "time2fork") {
            before += 1;
        } else {
            after += 1;
        }
        let got: Vec<_> = gc.changes[0].causes.iter().map(|c| c.do_atoms.clone()).collect();
        ensure(got == vec![vec![do_atom("approach", g(gm, "t3"))]], || format!("causes {got:?} under {gm}"))?;
    }
    ensure(before > 0 && after > 0, || format!("orderings covered: {before} flip-first, {after} fork-first"))?;
    let t = theory("engineer.w");
    let gm = gamma(&[("t3", 0), ("t4", 1), ("time2fork", 3), ("time2dest.left", 5), ("time2dest.right", 5)]);
    let m = model(&t, &gm)?;
    let target = m.find(&parse_atom(&m, "arrived(dest)")).ok_or("arrived(dest) not in the model")?;
    let all = condensed_proofs(&m, &[target], cfg().proof_cap).map_err(|e| e.to_string())?;
    let tight = tight_proofs(&all);
    ensure(all.len() == 2, || format!("{} proofs", all.len()))?;
    ensure(tight.len() == 1, || format!("{} tight proofs", tight.len()))?;
    let labels = |p: &wcausal::analysis::CondensedProof| -> Vec<String> {
        let prog = m.program();
        let mut v: Vec<String> = p
            .skeleton
            .mechanisms
            .iter()
            .map(|&r| match &prog.rules[r].provenance {
                wcausal::ground::Provenance::Mechanism { label, .. } => label.to_string(),
                other => other.to_string(),
            })
            .collect();
        v.sort();
        v
    };
    ensure(labels(&tight[0]) == ["m1", "m2", "m4"], || format!("tight proof uses {:?}", labels(&tight[0])))
}

fn parse_atom(m: &Model, text: &str) -> GroundAtom {
    m.program().atoms.iter().find(|a| a.to_string() == text).cloned().unwrap_or_else(|| panic!("no atom {text}"))
}

fn c7() -> Check {
    let c = cfg();
    let at2 = explain_observation(&theory("suzy_obs.w"), &c).map_err(|e| e.to_string())?;
    let rendered = |r: &[wcausal::analysis::ExplanationReport]| -> Vec<Vec<String>> {
        r[0].explanations.iter().map(|e| e.causes.iter().map(|c| c.render()).collect()).collect()
    };
    ensure(at2.len() == 1 && rendered(&at2) == vec![vec!["{do(a1,0)}".to_string()]], || {
        format!("explanations {:?}", rendered(&at2))
    })?;
    let mut t = theory("suzy_obs.w");
    for e in &mut t.scenario.events {
        if let ExtendedAtom::Obs { step, .. } = e {
            *step = wcausal::model::Term::Nat(3);
        }
    }
    let at3 = explain_observation(&t, &c).map_err(|e| e.to_string())?;
    let want = vec![vec!["{do(a1,0)}".to_string()], vec!["{do(a1,1)}".to_string()]];
    ensure(rendered(&at3) == want, || format!("explanations {:?}", rendered(&at3)))?;
    ensure(at3[0].compact == ["do(a1,t) where 0 <= t < 2"], || format!("compact form {:?}", at3[0].compact))
}

const CORPUS: [&str; 10] = [
    "suzy_first.w",
    "suzy_billy_first.w",
    "suzy_same.w",
    "suzy_order.w",
    "suzy_order2.w",
    "suzy_order3.w",
    "suzy_aim.w",
    "suzy_obs.w",
    "engineer.w",
    "engineer_fast_right.w",
];

fn random_program(rng: &mut ChaCha8Rng) -> NormalProgram {
    let n = rng.gen_range(1..=18usize);
    let rules = (0..rng.gen_range(0..=2 * n))
        .map(|_| {
            let mut atoms = |k: usize| -> Vec<u32> { (0..rng.gen_range(0..=k)).map(|_| rng.gen_range(0..n as u32)).collect() };
            let (pos, neg) = (atoms(2), atoms(2));
            let head = if rng.gen_bool(0.85) { Some(rng.gen_range(0..n as u32)) } else { None };
            NormalRule { head, pos, neg }
        })
        .collect();
    NormalProgram { num_atoms: n, rules }
}

fn sorted(mut v: Vec<Vec<bool>>) -> Vec<Vec<bool>> {
    v.sort();
    v
}

fn c8() -> Check {
    let c = cfg();
    let mut programs = 0;
    for file in CORPUS {
        let t = theory(file);
        let gammas = enumerate_interpretations(&t, c.bounds, &c.pinned);
        let results: Vec<Check> = std::thread::scope(|s| {
            let chunks: Vec<_> = gammas.chunks(gammas.len().div_ceil(8).max(1)).collect();
            let handles: Vec<_> = chunks
                .into_iter()
                .map(|chunk| {
                    let t = &t;
                    s.spawn(move || -> Check {
                        for gm in chunk {
                            let p = build_program(&reduce(t, gm, c.bounds).map_err(|e| e.to_string())?);
                            let np = NormalProgram::compile(&p, &[]);
                            let got = sorted(solve(&np, None));
                            let want = oracle::answer_sets_via_wfm(&np, 20)
                                .ok_or_else(|| format!("{file} under {gm}: too many undefined atoms for the oracle"))?;
                            ensure(got == want, || format!("{file} under {gm}: solver and oracle disagree"))?;
                        }
                        Ok(())
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for r in results {
            r?;
        }
        programs += gammas.len();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for i in 0..200 {
        let np = random_program(&mut rng);
        ensure(sorted(solve(&np, None)) == sorted(oracle::brute_force(&np)), || format!("random program {i}: {np:?}"))?;
    }
    ensure(programs > 0, || "no corpus programs".into())
}

fn pattern_for(file: &str) -> &'static str {
    if file.starts_with("engineer") {
        "arrived(dest)"
    } else {
        "broken"
    }
}

fn proof_properties(m: &Model, target: u32) -> Check {
    let cap = cfg().proof_cap;
    let raw = proofs(m, &[target], cap).map_err(|e| e.to_string())?;
    ensure(!raw.is_empty(), || "no proofs".into())?;
    for p in &raw {
        ensure(check_proof(m, &[target], &p.elements), || format!("not a proof: {:?}", p.render(m.program())))?;
        for i in 0..p.elements.len() {
            let mut shorter: Vec<Element> = p.elements.clone();
            shorter.remove(i);
            ensure(!check_proof(m, &[target], &shorter), || {
                format!("proof stays a proof without element {i}: {:?}", p.render(m.program()))
            })?;
        }
    }
    let all = condensed_proofs(m, &[target], cap).map_err(|e| e.to_string())?;
    for t in tight_proofs(&all) {
        for p in &all {
            let strict = p.skeleton.mechanisms.is_subset(&t.skeleton.mechanisms)
                && p.skeleton.mechanisms != t.skeleton.mechanisms;
            ensure(!strict, || "a tight proof has a proof with strictly fewer mechanisms".into())?;
        }
    }
    Ok(())
}

fn run_cli(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_wcausal"))
        .args(args)
        .current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/../.."))
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned()))
}

fn c9() -> Check {
    let c = cfg();
    for file in CORPUS {
        let mut t = theory(file);
        if file == "suzy_obs.w" {
            t.scenario.events.retain(|e| !matches!(e, ExtendedAtom::Obs { .. }));
        }
        match is_deterministic(&t, c.bounds, &c.pinned, &c.solver).map_err(|e| format!("{file}: {e}"))? {
            Determinism::Deterministic { .. } => {}
            Determinism::NotDeterministic { gamma, .. } => return Err(format!("{file} not deterministic under {gamma}")),
        }
        if file == "suzy_obs.w" || file == "suzy_order2.w" {
            continue;
        }
        let pat = parse_change_pattern(pattern_for(file), &t.full_signature()).map_err(|e| e.to_string())?;
        let mut checked = 0;
        for gm in enumerate_interpretations(&t, c.bounds, &c.pinned).iter().step_by(37) {
            let Ok(m) = model(&t, gm) else { continue };
            for ch in changes(&m).iter().filter(|ch| pat.matches(ch)) {
                proof_properties(&m, ch.id).map_err(|e| format!("{file} under {gm}: {e}"))?;
                checked += 1;
            }
        }
        ensure(checked > 0, || format!("{file}: no proofs checked"))?;
    }
    let runs: [&[&str]; 3] = [
        &["causes", "corpus/suzy_same.w", "broken", "--format", "structured"],
        &["explain", "corpus/suzy_obs.w", "obs(broken,true,3)", "--format", "structured"],
        &["causes", "corpus/engineer.w", "arrived(dest)", "--format", "structured", "--gamma", "t3=0,t4=1"],
    ];
    for args in runs {
        let first = run_cli(args)?;
        ensure(first.0 == 0, || format!("{args:?} exited with {}", first.0))?;
        for _ in 0..2 {
            ensure(run_cli(args)? == first, || format!("{args:?}: output differs between runs"))?;
        }
    }
    Ok(())
}

fn c10() -> Check {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/even_loop.w");
    let t = parse_theory(&std::fs::read_to_string(path).unwrap()).map_err(|e| format!("{e:?}"))?;
    let c = cfg();
    let verdict = is_deterministic(&t, c.bounds, &BTreeMap::new(), &c.solver).map_err(|e| e.to_string())?;
    let want = gamma(&[("t", 0)]);
    ensure(verdict == Determinism::NotDeterministic { gamma: want.clone(), count: 2 }, || format!("{verdict:?}"))?;
    let small = wcausal::ground::Bounds { horizon: 1, ..c.bounds };
    let p = build_program(&reduce(&t, &want, small).map_err(|e| e.to_string())?);
    let np = NormalProgram::compile(&p, &[]);
    let oracle_sets = oracle::answer_sets_via_wfm(&np, 20).ok_or("oracle out of range")?;
    ensure(oracle_sets.len() == 2, || format!("oracle finds {} answer sets", oracle_sets.len()))?;
    let (code, out) = run_cli(&["deterministic", path])?;
    ensure(code == 3 && out.contains("{t=0}"), || format!("cli exit {code}: {out}"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("Suzy first: unique cause {do(a1,t1)}", c1),
        ("Billy first: unique cause {do(a2,t2)}, same background", c2),
        ("Same time: causes {do(a1,t1)} and {do(a2,t2)}", c3),
        ("Orders: {do(b1,0)}; none when both refuse; {do(b2,0)} when Suzy refuses", c4),
        ("Aiming: unique cause {do(a1,t1)}, t5 never a candidate", c5),
        ("Engineer: unique cause {do(approach,t3)}; two proofs, one tight", c6),
        ("Explanations of unexpected observations", c7),
        ("Solver agrees with the reduct oracle", c8),
        ("Proof minimality, tightness, determinism, stable output", c9),
        ("Even loop reported non-deterministic", c10),
    ];
    let mut failed = 0;
    for (i, (what, check)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("criterion {:>2} PASS ({secs:.1}s): {what}", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL ({secs:.1}s): {what}: {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
