//! Text and structured renderings of results. The structured form is
//! described in `docs/output-format.md`.

use wcausal::analysis::{AnalysisConfig, CauseReport, ExplanationReport};
use wcausal::model::CausalTheory;
use wcausal::solver::{Determinism, Solved};

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

pub struct Out {
    format: Format,
    buf: String,
}

impl Out {
    pub fn new(format: Format, command: &str, input: &str) -> Out {
        let mut o = Out { format, buf: String::new() };
        if format == Format::Structured {
            o.line("w-causal-report 1");
            o.line(&format!("command {command}"));
            o.line(&format!("input {input}"));
        }
        o
    }

    pub fn line(&mut self, s: &str) {
        self.buf.push_str(s);
        self.buf.push('\n');
    }

    fn kv(&mut self, depth: usize, key: &str, value: impl std::fmt::Display) {
        let v = value.to_string();
        let pad = "  ".repeat(depth);
        if v.is_empty() {
            self.line(&format!("{pad}{key}"));
        } else {
            self.line(&format!("{pad}{key} {v}"));
        }
    }

    pub fn finish(mut self) -> String {
        if self.format == Format::Structured {
            self.line("end");
        }
        self.buf
    }

    fn structured(&self) -> bool {
        self.format == Format::Structured
    }

    fn bounds(&mut self, cfg: &AnalysisConfig) {
        if self.structured() {
            let b = cfg.bounds;
            self.kv(0, "bounds", format!("horizon={} duration-cap={}", b.horizon, b.duration_cap));
            if !cfg.pinned.is_empty() {
                let pins: Vec<String> = cfg.pinned.iter().map(|(k, v)| format!("{k}={v}")).collect();
                self.kv(0, "pinned", pins.join(" "));
            }
        }
    }

    pub fn models(&mut self, _theory: &CausalTheory, cfg: &AnalysisConfig, all: &[Solved], ground: bool) {
        self.bounds(cfg);
        if self.structured() {
            self.kv(0, "interpretations", all.len());
        }
        for s in all {
            if self.structured() {
                self.kv(0, "gamma", &s.gamma);
                self.kv(1, "answer-sets", s.answer_sets.len());
                for (i, a) in s.answer_sets.iter().enumerate() {
                    self.kv(1, "answer-set", i + 1);
                    for l in a.dump(&s.program).lines() {
                        self.kv(2, "atom", l);
                    }
                }
            } else {
                let n = s.answer_sets.len();
                self.line(&format!("interpretation {}: {n} answer set{}", s.gamma, if n == 1 { "" } else { "s" }));
                for (i, a) in s.answer_sets.iter().enumerate() {
                    self.line(&format!("answer set {}:", i + 1));
                    for l in a.dump(&s.program).lines() {
                        self.line(&format!("  {l}"));
                    }
                }
            }
            if ground {
                self.ground(s);
            }
        }
    }

    fn ground(&mut self, s: &Solved) {
        if self.structured() {
            self.kv(1, "ground-program", s.program.rules.len());
            for l in s.program.dump().lines() {
                self.kv(2, "rule", l);
            }
        } else {
            self.line(&format!("ground program under {}:", s.gamma));
            for l in s.program.dump().lines() {
                self.line(&format!("  {l}"));
            }
        }
    }

    pub fn dumps(&mut self, all: &[Solved], ground: bool, models: bool) {
        for s in all {
            if self.structured() {
                self.kv(0, "dump", &s.gamma);
            }
            if models {
                for (i, a) in s.answer_sets.iter().enumerate() {
                    if self.structured() {
                        self.kv(1, "answer-set", i + 1);
                        for l in a.dump(&s.program).lines() {
                            self.kv(2, "atom", l);
                        }
                    } else {
                        self.line(&format!("answer set {} under {}:", i + 1, s.gamma));
                        for l in a.dump(&s.program).lines() {
                            self.line(&format!("  {l}"));
                        }
                    }
                }
            }
            if ground {
                self.ground(s);
            }
        }
    }

    pub fn determinism(&mut self, cfg: &AnalysisConfig, d: &Determinism) {
        self.bounds(cfg);
        match d {
            Determinism::Deterministic { interpretations } => {
                if self.structured() {
                    self.kv(0, "deterministic", "true");
                    self.kv(0, "interpretations", interpretations);
                } else {
                    self.line(&format!(
                        "deterministic: one answer set under each of {interpretations} interpretations ({})",
                        cfg.bounds
                    ));
                }
            }
            Determinism::NotDeterministic { gamma, count } => {
                if self.structured() {
                    self.kv(0, "deterministic", "false");
                    self.kv(0, "gamma", gamma);
                    self.kv(1, "answer-sets", count);
                } else {
                    self.line(&format!("not deterministic: {count} answer sets under {gamma}"));
                }
            }
        }
    }

    pub fn causes(&mut self, cfg: &AnalysisConfig, r: &CauseReport) {
        self.bounds(cfg);
        let detail = r.interpretations == 1 || !cfg.pinned.is_empty();
        if self.structured() {
            self.kv(0, "pattern", &r.pattern);
            self.kv(0, "interpretations", r.interpretations);
            for v in &r.verdicts {
                self.kv(0, "verdict", &v.change);
                self.kv(1, "occurrence", v.occurrence + 1);
                self.kv(1, "present", v.present);
                self.kv(1, "absent", v.absent);
                self.kv(1, "uniform", v.uniform);
                for c in &v.causes {
                    self.kv(1, "cause", &c.text);
                }
            }
        } else {
            for v in &r.verdicts {
                let nth = if v.occurrence > 0 { format!(" (occurrence {})", v.occurrence + 1) } else { String::new() };
                self.line(&format!(
                    "causes of {}{nth}: {} of {} interpretations have the change ({})",
                    v.change, v.present, r.interpretations, cfg.bounds
                ));
                if v.causes.is_empty() {
                    self.line("  no cause holds under every interpretation");
                }
                for c in &v.causes {
                    self.line(&format!("  {}", c.text));
                }
                if !v.uniform {
                    self.line("  the cause set differs between interpretations");
                }
            }
        }
        if !detail {
            return;
        }
        for g in &r.per_gamma {
            if self.structured() {
                self.kv(0, "gamma", &g.gamma);
            } else {
                self.line(&format!("under {}:", g.gamma));
            }
            for cc in &g.changes {
                let list = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
                if self.structured() {
                    self.kv(1, "change", &cc.change);
                    self.kv(2, "candidates", list(&cc.candidates));
                    self.kv(2, "inflection-points", list(&cc.inflection_points));
                    for c in &cc.causes {
                        self.kv(2, "cause", c.render());
                        self.kv(3, "inflection", c.inflection);
                        self.kv(3, "chain", c.chain.join("; "));
                    }
                } else {
                    self.line(&format!("  change {}", cc.change));
                    for c in &cc.causes {
                        self.line(&format!(
                            "    cause {} from inflection point {}: {}",
                            c.render(),
                            c.inflection,
                            c.chain.join(", ")
                        ));
                    }
                    if cc.causes.is_empty() {
                        self.line("    no cause");
                    }
                }
            }
        }
    }

    pub fn explanations(&mut self, cfg: &AnalysisConfig, reports: &[ExplanationReport]) {
        self.bounds(cfg);
        for r in reports {
            if self.structured() {
                self.kv(0, "gamma", &r.gamma);
                self.kv(1, "observation", &r.observation);
                self.kv(1, "explanations", r.explanations.len());
            } else {
                let n = r.explanations.len();
                self.line(&format!(
                    "{} is unexpected under {}; {n} explanation{}",
                    r.observation,
                    r.gamma,
                    if n == 1 { "" } else { "s" }
                ));
            }
            for e in &r.explanations {
                let support: Vec<String> = e.support.iter().map(|a| format!("{a} :+")).collect();
                let causes: Vec<String> = e.causes.iter().map(|c| c.render()).collect();
                if self.structured() {
                    self.kv(1, "explanation", support.join(" "));
                    for a in &e.added {
                        self.kv(2, "added", a);
                    }
                    if let Some(c) = &e.change {
                        self.kv(2, "change", c);
                    }
                    for c in &causes {
                        self.kv(2, "cause", c);
                    }
                } else {
                    let change = e.change.as_ref().map(|c| c.to_string()).unwrap_or_else(|| "no change".into());
                    let causes = if causes.is_empty() { "no cause".to_string() } else { causes.join(" and ") };
                    self.line(&format!("  support {}: {causes} causes {change}", support.join(" ")));
                }
            }
            for c in &r.compact {
                if self.structured() {
                    self.kv(1, "compact", c);
                } else {
                    self.line(&format!("  compactly: {c}"));
                }
            }
        }
    }

    pub fn not_unexpected(&mut self, why: &str) {
        if self.structured() {
            self.kv(0, "unexpected", "false");
            self.kv(0, "reason", why);
        } else {
            self.line(&format!("the observation is not unexpected: {why}"));
        }
    }
}
