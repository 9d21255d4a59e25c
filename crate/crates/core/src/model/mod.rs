//! Core data model: sorted signatures, terms, atoms, causal mechanisms and
//! scenarios.
//!
//! Everything here is plain immutable data. Names are reference counted so
//! ground values can be cloned freely while grounding many interpretations.

mod shorthand;
mod validate;

pub use shorthand::{expand_shorthands, fresh_constant_name};
pub use validate::{check_mechanism_template, validate, variable_sorts, Diagnostic, TemplateError, RESERVED};
pub(crate) use validate::atom_time_terms;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

/// Line/column position, both 1-based, plus byte offset.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Ord, PartialOrd)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
    pub offset: usize,
}

/// Source region of a syntax element.
///
/// Spans never take part in structural equality of model values: two
/// theories that differ only in layout compare equal.
#[derive(Clone, Copy, Debug, Default)]
pub struct Span {
    pub start: Pos,
    pub end: Pos,
}

impl Span {
    pub fn new(start: Pos, end: Pos) -> Span {
        Span { start, end }
    }

    pub fn to(self, other: Span) -> Span {
        Span { start: self.start, end: other.end }
    }
}

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Span {}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}-{}:{}", self.start.line, self.start.col, self.end.line, self.end.col)
    }
}

/// A sort reference as it appears in a declaration.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Bool,
    /// Natural numbers (durations, distances).
    Nat,
    /// Time-steps.
    Time,
    /// All ground action terms of the signature.
    Action,
    Named(Name),
}

impl Sort {
    pub fn is_numeric(&self) -> bool {
        matches!(self, Sort::Nat | Sort::Time)
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Bool => f.write_str("bool"),
            Sort::Nat => f.write_str("nat"),
            Sort::Time => f.write_str("time"),
            Sort::Action => f.write_str("action"),
            Sort::Named(n) => f.write_str(n),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunKind {
    Static,
    Action,
    Inertial,
    Transient,
    Timeless,
}

impl FunKind {
    /// Symbols of this kind carry a trailing time-step argument.
    pub fn has_step(self) -> bool {
        matches!(self, FunKind::Action | FunKind::Inertial | FunKind::Transient)
    }

    pub fn is_fluent(self) -> bool {
        matches!(self, FunKind::Inertial | FunKind::Transient | FunKind::Timeless)
    }

    pub fn keyword(self) -> &'static str {
        match self {
            FunKind::Static => "static",
            FunKind::Action => "action",
            FunKind::Inertial => "inertial",
            FunKind::Transient => "transient",
            FunKind::Timeless => "timeless",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortDecl {
    pub name: Name,
    pub objects: Vec<Name>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunDecl {
    pub name: Name,
    pub params: Vec<Sort>,
    pub value: Sort,
    pub kind: FunKind,
    pub span: Span,
}

/// Sorted signature of a background theory (plus actions a scenario adds).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub sorts: Vec<SortDecl>,
    pub functions: Vec<FunDecl>,
}

impl Signature {
    pub fn sort(&self, name: &str) -> Option<&SortDecl> {
        self.sorts.iter().find(|s| &*s.name == name)
    }

    pub fn function(&self, name: &str) -> Option<&FunDecl> {
        self.functions.iter().find(|f| &*f.name == name)
    }

    /// Sort of an object constant.
    pub fn object_sort(&self, object: &str) -> Option<&SortDecl> {
        self.sorts.iter().find(|s| s.objects.iter().any(|o| &**o == object))
    }

    pub fn actions(&self) -> impl Iterator<Item = &FunDecl> {
        self.functions.iter().filter(|f| f.kind == FunKind::Action)
    }

    pub fn is_declared(&self, name: &str) -> bool {
        self.sort(name).is_some() || self.function(name).is_some() || self.object_sort(name).is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            CmpOp::Eq => lhs == rhs,
            CmpOp::Ne => lhs != rhs,
            CmpOp::Lt => lhs < rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Gt => lhs > rhs,
            CmpOp::Ge => lhs >= rhs,
        }
    }
}

/// Non-ground term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Name),
    Object(Name),
    Bool(bool),
    Nat(u32),
    /// Abstract constant, written `#name` in source.
    Abstract(Name),
    /// Action term used as a value, e.g. `flipTo(right)`.
    Action(Name, Vec<Term>),
    /// Static function term inside arithmetic, e.g. `time2fork`; it stands
    /// for the value the scenario assigns to that static.
    Static(Name, Vec<Term>),
    Arith(Box<Term>, ArithOp, Box<Term>),
}

impl Term {
    pub fn vars(&self, out: &mut Vec<Name>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Action(_, args) | Term::Static(_, args) => args.iter().for_each(|a| a.vars(out)),
            Term::Arith(l, _, r) => {
                l.vars(out);
                r.vars(out);
            }
            _ => {}
        }
    }

    pub fn is_ground(&self) -> bool {
        let mut v = Vec::new();
        self.vars(&mut v);
        v.is_empty()
    }

    pub fn abstracts(&self, out: &mut BTreeSet<Name>) {
        match self {
            Term::Abstract(n) => {
                out.insert(n.clone());
            }
            Term::Action(_, args) | Term::Static(_, args) => args.iter().for_each(|a| a.abstracts(out)),
            Term::Arith(l, _, r) => {
                l.abstracts(out);
                r.abstracts(out);
            }
            _ => {}
        }
    }

    pub fn mentions_static(&self) -> bool {
        match self {
            Term::Static(..) => true,
            Term::Action(_, args) => args.iter().any(Term::mentions_static),
            Term::Arith(l, _, r) => l.mentions_static() || r.mentions_static(),
            _ => false,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Object(o) => f.write_str(o),
            Term::Bool(b) => write!(f, "{b}"),
            Term::Nat(n) => write!(f, "{n}"),
            Term::Abstract(a) => write!(f, "#{a}"),
            Term::Action(n, args) | Term::Static(n, args) => {
                f.write_str(n)?;
                write_args(f, args)
            }
            Term::Arith(l, op, r) => {
                write_operand(f, l, *op, false)?;
                write!(f, " {} ", op.symbol())?;
                write_operand(f, r, *op, true)
            }
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, t: &Term, parent: ArithOp, right: bool) -> fmt::Result {
    let needs_parens = match t {
        Term::Arith(_, op, _) => {
            let prec = |o: ArithOp| if o == ArithOp::Mul { 2 } else { 1 };
            prec(*op) < prec(parent) || (right && prec(*op) == prec(parent))
        }
        _ => false,
    };
    if needs_parens {
        write!(f, "({t})")
    } else {
        write!(f, "{t}")
    }
}

pub(crate) fn write_args<T: fmt::Display>(f: &mut fmt::Formatter<'_>, args: &[T]) -> fmt::Result {
    if args.is_empty() {
        return Ok(());
    }
    f.write_str("(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str(")")
}

/// Atom over a static or fluent symbol: `f(args[,step]) = value` or `!=`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunAtom {
    pub fun: Name,
    pub args: Vec<Term>,
    pub step: Option<Term>,
    pub neq: bool,
    pub value: Term,
    pub span: Span,
}

/// Action atom `a(args, step)` (value true) or `neg a(args, step)`.
/// The action may be a variable, as in `occurs(A, I)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OccursAtom {
    pub action: Term,
    pub step: Term,
    pub value: bool,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Fun(FunAtom),
    Occurs(OccursAtom),
}

impl Atom {
    pub fn span(&self) -> Span {
        match self {
            Atom::Fun(a) => a.span,
            Atom::Occurs(a) => a.span,
        }
    }

    pub fn step(&self) -> Option<&Term> {
        match self {
            Atom::Fun(a) => a.step.as_ref(),
            Atom::Occurs(a) => Some(&a.step),
        }
    }

    pub fn vars(&self, out: &mut Vec<Name>) {
        match self {
            Atom::Fun(a) => {
                a.args.iter().for_each(|t| t.vars(out));
                if let Some(s) = &a.step {
                    s.vars(out);
                }
                a.value.vars(out);
            }
            Atom::Occurs(a) => {
                a.action.vars(out);
                a.step.vars(out);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArithAtom {
    pub lhs: Term,
    pub op: CmpOp,
    pub rhs: Term,
    pub span: Span,
}

impl fmt::Display for ArithAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.op.symbol(), self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BodyElem {
    Atom(Atom),
    Arith(ArithAtom),
}

impl BodyElem {
    pub fn span(&self) -> Span {
        match self {
            BodyElem::Atom(a) => a.span(),
            BodyElem::Arith(a) => a.span,
        }
    }

    pub fn vars(&self, out: &mut Vec<Name>) {
        match self {
            BodyElem::Atom(a) => a.vars(out),
            BodyElem::Arith(a) => {
                a.lhs.vars(out);
                a.rhs.vars(out);
            }
        }
    }
}

/// The variable every mechanism uses for its own time-step.
pub const STEP_VAR: &str = "I";

/// Labeled causal mechanism `m(params) : head <- body`, implicitly guarded
/// by `neg ab(m(params), I)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mechanism {
    pub label: Name,
    pub params: Vec<Name>,
    pub head: Atom,
    pub body: Vec<BodyElem>,
    pub span: Span,
}

impl Mechanism {
    /// Variables in order of first occurrence, body first.
    pub fn vars(&self) -> Vec<Name> {
        let mut out = Vec::new();
        for b in &self.body {
            b.vars(&mut out);
        }
        self.head.vars(&mut out);
        for p in &self.params {
            if !out.contains(p) {
                out.push(p.clone());
            }
        }
        if !out.iter().any(|v| &**v == STEP_VAR) {
            out.push(name(STEP_VAR));
        }
        out
    }
}

/// Ground static fact of a scenario, `f(args) = value`. The value may be
/// an abstract constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaticFact {
    pub fun: Name,
    pub args: Vec<Term>,
    pub value: Term,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtendedAtom {
    Init { fun: Name, args: Vec<Term>, value: Term, span: Span },
    Do { action: Term, value: bool, step: Term, span: Span },
    Obs { fun: Name, args: Vec<Term>, value: Term, step: Term, span: Span },
}

impl ExtendedAtom {
    pub fn span(&self) -> Span {
        match self {
            ExtendedAtom::Init { span, .. } | ExtendedAtom::Do { span, .. } | ExtendedAtom::Obs { span, .. } => *span,
        }
    }
}

/// Role an abstract constant plays, which fixes its enumeration range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AbstractKind {
    TimeStep,
    Quantity,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Scenario {
    /// Actions introduced by the scenario itself.
    pub actions: Vec<FunDecl>,
    pub statics: Vec<StaticFact>,
    pub constraints: Vec<ArithAtom>,
    pub events: Vec<ExtendedAtom>,
}

impl Scenario {
    /// Every abstract constant of the scenario with its role. A constant is
    /// a time-step when it occurs as the step of a `do`/`obs` or as the value
    /// of a time-valued static.
    pub fn abstract_constants(&self, sig: &Signature) -> BTreeMap<Name, AbstractKind> {
        let mut all = BTreeSet::new();
        let mut time = BTreeSet::new();
        for s in &self.statics {
            s.value.abstracts(&mut all);
            if sig.function(&s.fun).map(|f| f.value == Sort::Time).unwrap_or(false) {
                s.value.abstracts(&mut time);
            }
        }
        for c in &self.constraints {
            c.lhs.abstracts(&mut all);
            c.rhs.abstracts(&mut all);
        }
        for e in &self.events {
            match e {
                ExtendedAtom::Do { step, .. } | ExtendedAtom::Obs { step, .. } => {
                    step.abstracts(&mut all);
                    step.abstracts(&mut time);
                }
                ExtendedAtom::Init { .. } => {}
            }
        }
        all.into_iter()
            .map(|n| {
                let kind = if time.contains(&n) { AbstractKind::TimeStep } else { AbstractKind::Quantity };
                (n, kind)
            })
            .collect()
    }

    pub fn static_value(&self, fun: &str, args: &[Term]) -> Option<&Term> {
        self.statics.iter().find(|s| &*s.fun == fun && s.args == args).map(|s| &s.value)
    }
}

/// Background theory paired with a scenario.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CausalTheory {
    pub signature: Signature,
    pub mechanisms: Vec<Mechanism>,
    pub scenario: Scenario,
}

impl CausalTheory {
    pub fn mechanism(&self, label: &str) -> Option<&Mechanism> {
        self.mechanisms.iter().find(|m| &*m.label == label)
    }

    /// Signature including scenario-declared actions.
    pub fn full_signature(&self) -> Signature {
        let mut sig = self.signature.clone();
        sig.functions.extend(self.scenario.actions.iter().cloned());
        sig
    }

    pub fn with_scenario(&self, scenario: Scenario) -> CausalTheory {
        CausalTheory { signature: self.signature.clone(), mechanisms: self.mechanisms.clone(), scenario }
    }
}

/// Ground action term, e.g. `a1` or `flipTo(right)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionTerm {
    pub name: Name,
    pub args: Vec<Value>,
}

impl fmt::Display for ActionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        write_args(f, &self.args)
    }
}

/// Ground value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Bool(bool),
    Nat(u32),
    Obj(Name),
    Act(Arc<ActionTerm>),
}

impl Value {
    pub fn as_nat(&self) -> Option<u32> {
        match self {
            Value::Nat(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Nat(n) => write!(f, "{n}"),
            Value::Obj(o) => f.write_str(o),
            Value::Act(a) => write!(f, "{a}"),
        }
    }
}
