use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use super::{FunTerm, GroundAtom, GroundLabel, Bounds, Interpretation};
use crate::model::{
    atom_time_terms, variable_sorts, ActionTerm, ArithOp, Atom, BodyElem, CausalTheory, ExtendedAtom, FunKind,
    Mechanism, Name, Signature, Sort, Term, Value,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GroundError {
    #[error("abstract constant `{0}` has no value")]
    Unassigned(Name),
    #[error("{0}")]
    Invalid(String),
}

/// Ground instance of a labeled mechanism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MechanismInstance {
    pub label: Arc<GroundLabel>,
    pub step: u32,
    pub head: GroundAtom,
    pub body: Vec<GroundAtom>,
    /// The head is an action atom.
    pub trigger: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroundEvent {
    Init { term: FunTerm, value: Value },
    /// `origin` is the index of the scenario event this came from.
    Do { action: Arc<ActionTerm>, value: bool, step: u32, origin: usize },
    Obs { term: FunTerm, value: Value, step: u32 },
}

impl GroundEvent {
    pub fn atom(&self) -> GroundAtom {
        match self {
            GroundEvent::Init { term, value } => GroundAtom::Init { term: term.clone(), value: value.clone() },
            GroundEvent::Do { action, value, step, .. } => {
                GroundAtom::Do { action: action.clone(), value: *value, step: *step }
            }
            GroundEvent::Obs { term, value, step } => {
                GroundAtom::Obs { term: term.clone(), value: value.clone(), step: *step }
            }
        }
    }
}

/// Ground instances removed during reduction, by reason.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DropSummary {
    pub false_arithmetic: usize,
    pub false_static: usize,
    pub negative_step: usize,
    pub beyond_horizon: usize,
    pub causality: usize,
}

impl DropSummary {
    pub fn total(&self) -> usize {
        self.false_arithmetic + self.false_static + self.negative_step + self.beyond_horizon + self.causality
    }
}

/// A theory without variables, abstract constants or arithmetic.
#[derive(Clone, Debug)]
pub struct ConcreteTheory {
    pub signature: Signature,
    pub statics: Vec<(FunTerm, Value)>,
    pub instances: Vec<MechanismInstance>,
    pub events: Vec<GroundEvent>,
    pub horizon: u32,
    /// Largest natural number in the value domain of numeric sorts.
    pub nat_max: u32,
    pub dropped: DropSummary,
}

impl ConcreteTheory {
    /// The theory whose scenario keeps only the `do` events with step at
    /// most `i`.
    pub fn truncate(&self, i: u32) -> ConcreteTheory {
        let mut t = self.clone();
        t.events.retain(|e| !matches!(e, GroundEvent::Do { step, .. } if *step > i));
        t
    }

    pub fn with_event(&self, e: GroundEvent) -> ConcreteTheory {
        let mut t = self.clone();
        t.events.push(e);
        t
    }

    pub fn without_observations(&self) -> ConcreteTheory {
        let mut t = self.clone();
        t.events.retain(|e| !matches!(e, GroundEvent::Obs { .. }));
        t
    }

    /// Ground values of a sort.
    pub fn domain(&self, sort: &Sort) -> Vec<Value> {
        domain(&self.signature, sort, self.horizon, self.nat_max)
    }
}

pub(crate) fn domain(sig: &Signature, sort: &Sort, horizon: u32, nat_max: u32) -> Vec<Value> {
    match sort {
        Sort::Bool => vec![Value::Bool(true), Value::Bool(false)],
        Sort::Nat => (0..=nat_max).map(Value::Nat).collect(),
        Sort::Time => (0..=horizon).map(Value::Nat).collect(),
        Sort::Named(n) => sig.sort(n).map(|s| s.objects.iter().map(|o| Value::Obj(o.clone())).collect()).unwrap_or_default(),
        Sort::Action => {
            let mut out = Vec::new();
            for a in sig.actions() {
                let mut combos: Vec<Vec<Value>> = vec![Vec::new()];
                for p in &a.params {
                    let dom = domain(sig, p, horizon, nat_max);
                    combos = combos
                        .into_iter()
                        .flat_map(|c| {
                            dom.iter().map(move |v| {
                                let mut c = c.clone();
                                c.push(v.clone());
                                c
                            })
                        })
                        .collect();
                }
                for args in combos {
                    out.push(Value::Act(Arc::new(ActionTerm { name: a.name.clone(), args })));
                }
            }
            out
        }
    }
}

#[derive(Debug)]
enum Fail {
    Unbound,
    NoFact,
    Negative,
    Unassigned(Name),
    Sort,
}

struct Ctx<'a> {
    sig: &'a Signature,
    gamma: &'a Interpretation,
    statics: HashMap<(Name, Vec<Value>), Value>,
}

type Env = HashMap<Name, Value>;

impl Ctx<'_> {
    fn num(&self, t: &Term, env: &Env) -> Result<i64, Fail> {
        match t {
            Term::Nat(n) => Ok(*n as i64),
            Term::Abstract(a) => self.gamma.get(a).map(|v| v as i64).ok_or_else(|| Fail::Unassigned(a.clone())),
            Term::Var(_) | Term::Static(..) => match self.value(t, env)? {
                Value::Nat(n) => Ok(n as i64),
                _ => Err(Fail::Sort),
            },
            Term::Arith(l, op, r) => {
                let (l, r) = (self.num(l, env)?, self.num(r, env)?);
                Ok(match op {
                    ArithOp::Add => l + r,
                    ArithOp::Sub => l - r,
                    ArithOp::Mul => l * r,
                })
            }
            _ => Err(Fail::Sort),
        }
    }

    fn value(&self, t: &Term, env: &Env) -> Result<Value, Fail> {
        match t {
            Term::Var(v) => env.get(v).cloned().ok_or(Fail::Unbound),
            Term::Object(o) => Ok(Value::Obj(o.clone())),
            Term::Bool(b) => Ok(Value::Bool(*b)),
            Term::Nat(n) => Ok(Value::Nat(*n)),
            Term::Abstract(_) | Term::Arith(..) => {
                let n = self.num(t, env)?;
                u32::try_from(n).map(Value::Nat).map_err(|_| Fail::Negative)
            }
            Term::Action(n, args) => {
                let args = args.iter().map(|a| self.value(a, env)).collect::<Result<_, _>>()?;
                Ok(Value::Act(Arc::new(ActionTerm { name: n.clone(), args })))
            }
            Term::Static(f, args) => {
                let args: Vec<Value> = args.iter().map(|a| self.value(a, env)).collect::<Result<_, _>>()?;
                self.statics.get(&(f.clone(), args)).cloned().ok_or(Fail::NoFact)
            }
        }
    }

    fn step(&self, t: &Term, env: &Env) -> Result<u32, Fail> {
        match self.value(t, env)? {
            Value::Nat(n) => Ok(n),
            _ => Err(Fail::Sort),
        }
    }

    fn is_static(&self, f: &str) -> bool {
        self.sig.function(f).map(|d| d.kind == FunKind::Static).unwrap_or(false)
    }

    fn ground_atom(&self, a: &Atom, env: &Env) -> Result<GroundAtom, Fail> {
        match a {
            Atom::Fun(a) => {
                let args = a.args.iter().map(|t| self.value(t, env)).collect::<Result<_, _>>()?;
                let step = a.step.as_ref().map(|s| self.step(s, env)).transpose()?;
                let value = self.value(&a.value, env)?;
                Ok(GroundAtom::Val { term: FunTerm::sym(&a.fun, args, step), neq: a.neq, value })
            }
            Atom::Occurs(o) => {
                let Value::Act(act) = self.value(&o.action, env)? else { return Err(Fail::Sort) };
                let step = self.step(&o.step, env)?;
                Ok(GroundAtom::val(FunTerm::sym(&act.name, act.args.clone(), Some(step)), Value::Bool(o.value)))
            }
        }
    }
}

/// Steps (a) to (c): the concrete theory of `theory` under `gamma`.
pub fn reduce(theory: &CausalTheory, gamma: &Interpretation, bounds: Bounds) -> Result<ConcreteTheory, GroundError> {
    let sig = theory.full_signature();
    let mut ctx = Ctx { sig: &sig, gamma, statics: HashMap::new() };
    let empty = Env::new();
    let fail = |e: Fail| match e {
        Fail::Unassigned(a) => GroundError::Unassigned(a),
        other => GroundError::Invalid(format!("cannot evaluate scenario term ({other:?})")),
    };

    let mut statics = Vec::new();
    for s in &theory.scenario.statics {
        let args: Vec<Value> = s.args.iter().map(|a| ctx.value(a, &empty)).collect::<Result<_, _>>().map_err(fail)?;
        let value = ctx.value(&s.value, &empty).map_err(fail)?;
        let key = (s.fun.clone(), args.clone());
        if let Some(prev) = ctx.statics.get(&key) {
            if *prev != value {
                return Err(GroundError::Invalid(format!("static `{}` is given two values", s.fun)));
            }
            continue;
        }
        ctx.statics.insert(key, value.clone());
        statics.push((FunTerm::sym(&s.fun, args, None), value));
    }

    let mut nat_max = bounds.horizon.max(bounds.duration_cap);
    nat_max = gamma.0.values().copied().fold(nat_max, u32::max);
    for (_, v) in &statics {
        if let Value::Nat(n) = v {
            nat_max = nat_max.max(*n);
        }
    }

    let mut dropped = DropSummary::default();
    let mut events = Vec::new();
    for (origin, e) in theory.scenario.events.iter().enumerate() {
        let ev = match e {
            ExtendedAtom::Init { fun, args, value, .. } => {
                let args = args.iter().map(|a| ctx.value(a, &empty)).collect::<Result<_, _>>().map_err(fail)?;
                GroundEvent::Init { term: FunTerm::sym(fun, args, None), value: ctx.value(value, &empty).map_err(fail)? }
            }
            ExtendedAtom::Do { action, value, step, .. } => {
                let Value::Act(action) = ctx.value(action, &empty).map_err(fail)? else {
                    return Err(GroundError::Invalid("do requires an action".into()));
                };
                GroundEvent::Do { action, value: *value, step: ctx.step(step, &empty).map_err(fail)?, origin }
            }
            ExtendedAtom::Obs { fun, args, value, step, .. } => {
                let args = args.iter().map(|a| ctx.value(a, &empty)).collect::<Result<_, _>>().map_err(fail)?;
                GroundEvent::Obs {
                    term: FunTerm::sym(fun, args, None),
                    value: ctx.value(value, &empty).map_err(fail)?,
                    step: ctx.step(step, &empty).map_err(fail)?,
                }
            }
        };
        let step = match &ev {
            GroundEvent::Do { step, .. } | GroundEvent::Obs { step, .. } => *step,
            GroundEvent::Init { .. } => 0,
        };
        if step > bounds.horizon {
            dropped.beyond_horizon += 1;
            continue;
        }
        events.push(ev);
    }

    let mut instances = Vec::new();
    for m in &theory.mechanisms {
        let sorts = variable_sorts(m, &sig)
            .map_err(|ds| GroundError::Invalid(ds.into_iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; ")))?;
        let vars = m.vars();
        let domains: Vec<(Name, Vec<Value>)> =
            vars.iter().map(|v| (v.clone(), domain(&sig, &sorts[v], bounds.horizon, nat_max))).collect();
        let mut g = MechGrounder { ctx: &ctx, m, horizon: bounds.horizon, out: &mut instances, dropped: &mut dropped };
        g.search(&domains, &mut Env::new());
    }
    ctx.statics.clear();

    Ok(ConcreteTheory { signature: sig, statics, instances, events, horizon: bounds.horizon, nat_max, dropped })
}

struct MechGrounder<'a, 'c> {
    ctx: &'a Ctx<'c>,
    m: &'a Mechanism,
    horizon: u32,
    out: &'a mut Vec<MechanismInstance>,
    dropped: &'a mut DropSummary,
}

enum Check {
    Ok,
    Prune,
}

impl MechGrounder<'_, '_> {
    /// Bind variables whose value follows from a static fact or an
    /// equation, then test every fully evaluable static or arithmetic atom.
    fn propagate(&mut self, env: &mut Env, bound: &mut Vec<Name>) -> Check {
        loop {
            let mut changed = false;
            for b in &self.m.body {
                match b {
                    BodyElem::Atom(Atom::Fun(a)) if !a.neq && self.ctx.is_static(&a.fun) => {
                        let Term::Var(v) = &a.value else { continue };
                        if env.contains_key(v) {
                            continue;
                        }
                        let args: Result<Vec<Value>, Fail> = a.args.iter().map(|t| self.ctx.value(t, env)).collect();
                        match args {
                            Ok(args) => match self.ctx.statics.get(&(a.fun.clone(), args)) {
                                Some(val) => {
                                    env.insert(v.clone(), val.clone());
                                    bound.push(v.clone());
                                    changed = true;
                                }
                                None => {
                                    self.dropped.false_static += 1;
                                    return Check::Prune;
                                }
                            },
                            Err(Fail::Unbound) => {}
                            Err(_) => {
                                self.dropped.false_static += 1;
                                return Check::Prune;
                            }
                        }
                    }
                    BodyElem::Arith(a) if a.op == crate::model::CmpOp::Eq => {
                        for (x, e) in [(&a.lhs, &a.rhs), (&a.rhs, &a.lhs)] {
                            let Term::Var(v) = x else { continue };
                            if env.contains_key(v) {
                                continue;
                            }
                            match self.ctx.num(e, env) {
                                Ok(n) if n >= 0 => {
                                    env.insert(v.clone(), Value::Nat(n as u32));
                                    bound.push(v.clone());
                                    changed = true;
                                }
                                Ok(_) => {
                                    self.dropped.false_arithmetic += 1;
                                    return Check::Prune;
                                }
                                Err(_) => {}
                            }
                        }
                    }
                    _ => {}
                }
            }
            if !changed {
                break;
            }
        }
        for b in &self.m.body {
            match b {
                BodyElem::Atom(Atom::Fun(a)) if self.ctx.is_static(&a.fun) => {
                    let ga = match self.ctx.ground_atom(&Atom::Fun(a.clone()), env) {
                        Ok(g) => g,
                        Err(Fail::Unbound) => continue,
                        Err(_) => {
                            self.dropped.false_static += 1;
                            return Check::Prune;
                        }
                    };
                    let GroundAtom::Val { term, neq, value } = ga else { continue };
                    let fact = self.ctx.statics.get(&(a.fun.clone(), term.args.clone()));
                    let holds = match fact {
                        Some(f) => (f == &value) != neq,
                        None => false,
                    };
                    if !holds {
                        self.dropped.false_static += 1;
                        return Check::Prune;
                    }
                }
                BodyElem::Arith(a) => match (self.ctx.num(&a.lhs, env), self.ctx.num(&a.rhs, env)) {
                    (Ok(l), Ok(r)) => {
                        if !a.op.holds(l, r) {
                            self.dropped.false_arithmetic += 1;
                            return Check::Prune;
                        }
                    }
                    (Err(Fail::Unbound), _) | (_, Err(Fail::Unbound)) => {}
                    _ => {
                        self.dropped.false_static += 1;
                        return Check::Prune;
                    }
                },
                _ => {}
            }
        }
        Check::Ok
    }

    fn search(&mut self, domains: &[(Name, Vec<Value>)], env: &mut Env) {
        let mut bound = Vec::new();
        if let Check::Ok = self.propagate(env, &mut bound) {
            match domains.iter().position(|(v, _)| !env.contains_key(v)) {
                None => self.emit(env),
                Some(i) => {
                    let (v, dom) = &domains[i];
                    for val in dom {
                        env.insert(v.clone(), val.clone());
                        self.search(&domains[i + 1..], env);
                        env.remove(v);
                    }
                }
            }
        }
        for v in bound {
            env.remove(&v);
        }
    }

    fn time_values(&self, a: &Atom, env: &Env) -> Result<Vec<(u32, bool)>, Fail> {
        atom_time_terms(a, self.ctx.sig)
            .into_iter()
            .map(|(t, is_action)| self.ctx.step(t, env).map(|s| (s, is_action)))
            .collect()
    }

    fn emit(&mut self, env: &Env) {
        let m = self.m;
        let built = (|| -> Result<Option<MechanismInstance>, Fail> {
            let step = self.ctx.step(&Term::Var(crate::model::name(crate::model::STEP_VAR)), env)?;
            let head = self.ctx.ground_atom(&m.head, env)?;
            let mut body = Vec::new();
            for b in &m.body {
                if let BodyElem::Atom(a) = b {
                    body.push(self.ctx.ground_atom(a, env)?);
                }
            }
            let within = |g: &GroundAtom| g.step().map(|s| s <= self.horizon).unwrap_or(true);
            if !within(&head) || !body.iter().all(within) {
                self.dropped.beyond_horizon += 1;
                return Ok(None);
            }
            let heads = self.time_values(&m.head, env)?;
            for b in &m.body {
                let BodyElem::Atom(a) = b else { continue };
                for (j, is_action) in self.time_values(a, env)? {
                    if heads.iter().any(|&(i, _)| if is_action { j >= i } else { j > i }) {
                        self.dropped.causality += 1;
                        return Ok(None);
                    }
                }
            }
            let args = m.params.iter().map(|p| self.ctx.value(&Term::Var(p.clone()), env)).collect::<Result<_, _>>()?;
            Ok(Some(MechanismInstance {
                label: Arc::new(GroundLabel { label: m.label.clone(), args }),
                step,
                head,
                body,
                trigger: matches!(m.head, Atom::Occurs(_)),
            }))
        })();
        match built {
            Ok(Some(inst)) => self.out.push(inst),
            Ok(None) => {}
            Err(Fail::Negative) => self.dropped.negative_step += 1,
            Err(_) => self.dropped.false_static += 1,
        }
    }
}
