//! Horn-clause view of the declarations, used as an inhabitation oracle.
//!
//! Each declared type becomes a predicate and each constructor a clause
//! whose premises are the constructor's arguments:
//!
//! ```text
//! plus(zero, X, X).
//! plus(succ(X), Y, succ(Z)) :- plus(X, Y, Z).
//! ```
//!
//! A type is inhabited exactly when its atom is provable, and a proof tree
//! decodes to a value. The resolver here is plain depth-bounded SLD
//! resolution with iterative deepening; it shares nothing with the pattern
//! search beyond the declarations themselves, and it never uses the
//! compatibility relation, so it answers inhabitation in the closed world
//! of the declarations.
//!
//! Tuple and arrow goals are solved by two built-in rules: a tuple holds
//! when each component does, and an arrow is always inhabited. A goal that
//! is still an unbound variable when nothing else is left is closed with
//! `unit`.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::matrix::{Pat, Value};
use crate::tycore::{CtorId, DeclKind, Env, Session, TyCon, Type, UnifyMode};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(u32),
    Fn(Functor, Vec<Term>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Functor {
    Type(TyCon),
    Arrow,
    Tuple,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    /// Inhabitation fact of a builtin base type.
    Base(TyCon),
    Ctor(CtorId),
}

/// `head :- body`. Variables are numbered locally from 0 and named by
/// `vars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub head: Term,
    pub body: Vec<Term>,
    pub vars: Vec<String>,
    pub origin: Origin,
}

/// The clauses of one environment, indexed by predicate.
#[derive(Clone, Debug)]
pub struct ClauseSet {
    clauses: Vec<Clause>,
    by_pred: Vec<Vec<usize>>,
    by_ctor: HashMap<CtorId, usize>,
    names: Vec<String>,
}

impl ClauseSet {
    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn for_predicate(&self, c: TyCon) -> impl Iterator<Item = &Clause> {
        self.by_pred[c.0 as usize].iter().map(|&i| &self.clauses[i])
    }

    pub fn clause_of(&self, c: CtorId) -> &Clause {
        &self.clauses[self.by_ctor[&c]]
    }

    pub fn show_clause(&self, c: &Clause) -> String {
        let names = prolog_names(&c.vars);
        let term = |t: &Term| {
            Printer {
                set: self,
                names: &names,
            }
            .term(t, false)
        };
        let head = term(&c.head);
        if c.body.is_empty() {
            return format!("{head}.");
        }
        let body: Vec<String> = c
            .body
            .iter()
            .map(|g| match g {
                Term::Var(_) => format!("call({})", term(g)),
                _ => term(g),
            })
            .collect();
        format!("{head} :- {}.", body.join(", "))
    }
}

impl fmt::Display for ClauseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            writeln!(f, "{}", self.show_clause(c))?;
        }
        Ok(())
    }
}

fn prolog_names(vars: &[String]) -> Vec<String> {
    let mut used = HashSet::new();
    vars.iter()
        .enumerate()
        .map(|(i, v)| {
            if v.starts_with('_') {
                return "_".to_string();
            }
            let mut chars = v.chars();
            let first = chars.next().map(|c| c.to_ascii_uppercase()).unwrap_or('V');
            let mut name: String = std::iter::once(first).chain(chars).collect();
            if !used.insert(name.clone()) {
                name = format!("{name}{i}");
                used.insert(name.clone());
            }
            name
        })
        .collect()
}

struct Printer<'a> {
    set: &'a ClauseSet,
    names: &'a [String],
}

impl Printer<'_> {
    /// `nested` parenthesizes arrows appearing on the left of an arrow.
    fn term(&self, t: &Term, nested: bool) -> String {
        match t {
            Term::Var(v) => self.names[*v as usize].clone(),
            Term::Fn(Functor::Type(c), args) => {
                let name = &self.set.names[c.0 as usize];
                if args.is_empty() {
                    name.clone()
                } else {
                    let args: Vec<String> = args.iter().map(|a| self.term(a, false)).collect();
                    format!("{name}({})", args.join(", "))
                }
            }
            Term::Fn(Functor::Arrow, ab) => {
                let s = format!(
                    "{} -> {}",
                    self.term(&ab[0], true),
                    self.term(&ab[1], false)
                );
                if nested {
                    format!("({s})")
                } else {
                    s
                }
            }
            Term::Fn(Functor::Tuple, ts) => {
                let ts: Vec<String> = ts.iter().map(|a| self.term(a, false)).collect();
                format!("({})", ts.join(", "))
            }
        }
    }
}

/// Converts a type into a term, mapping type variables through `var`.
fn term_of(t: &Type, var: &mut dyn FnMut(u32) -> u32) -> Term {
    match t {
        Type::Var(v) => Term::Var(var(v.0)),
        Type::App(c, ts) => Term::Fn(
            Functor::Type(*c),
            ts.iter().map(|t| term_of(t, var)).collect(),
        ),
        Type::Arrow(a, b) => Term::Fn(Functor::Arrow, vec![term_of(a, var), term_of(b, var)]),
        Type::Tuple(ts) => Term::Fn(Functor::Tuple, ts.iter().map(|t| term_of(t, var)).collect()),
    }
}

/// The premises contributed by a constructor argument: one per component
/// of a tuple argument, otherwise one.
fn premises(arg: &Option<Type>) -> Vec<&Type> {
    match arg {
        None => Vec::new(),
        Some(Type::Tuple(ts)) => ts.iter().collect(),
        Some(t) => vec![t],
    }
}

pub fn encode(env: &Env) -> ClauseSet {
    let mut set = ClauseSet {
        clauses: Vec::new(),
        by_pred: Vec::new(),
        by_ctor: HashMap::new(),
        names: Vec::new(),
    };
    for (c, decl) in env.decls() {
        set.names.push(decl.name.clone());
        let mut mine = Vec::new();
        match &decl.kind {
            DeclKind::Builtin => {
                mine.push(set.clauses.len());
                set.clauses.push(Clause {
                    head: Term::Fn(Functor::Type(c), Vec::new()),
                    body: Vec::new(),
                    vars: Vec::new(),
                    origin: Origin::Base(c),
                });
            }
            DeclKind::Abstract => {}
            DeclKind::Variant(_) => {
                for k in env.ctor_ids(c) {
                    let sig = env.ctor(k);
                    let mut id = |v| v;
                    let head = Term::Fn(
                        Functor::Type(c),
                        sig.result.iter().map(|t| term_of(t, &mut id)).collect(),
                    );
                    let body = premises(&sig.argument)
                        .into_iter()
                        .map(|t| term_of(t, &mut id))
                        .collect();
                    mine.push(set.clauses.len());
                    set.by_ctor.insert(k, set.clauses.len());
                    set.clauses.push(Clause {
                        head,
                        body,
                        vars: sig.vars.clone(),
                        origin: Origin::Ctor(k),
                    });
                }
            }
        }
        set.by_pred.push(mine);
    }
    set
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResolutionResult {
    /// A proof exists; the value it decodes to.
    Witness(Value),
    /// The whole resolution tree failed without reaching the bound, which
    /// was `d`.
    NoProofWithinDepth(u32),
    /// No proof within the bound, but some branch was cut by it.
    DepthExhausted,
}

#[derive(Clone, Copy, Debug)]
enum NodeKind {
    Clause(Origin),
    Tuple,
    Arrow,
    Unit,
}

#[derive(Clone, Debug)]
struct Node {
    kind: NodeKind,
    children: Vec<usize>,
}

#[derive(Clone, Debug)]
struct Goal {
    term: Term,
    pat: Pat,
    slot: usize,
}

struct Solver<'a> {
    env: &'a Env,
    set: &'a ClauseSet,
    bindings: Vec<Option<Term>>,
    trail: Vec<u32>,
    nodes: Vec<Option<Node>>,
    cut: bool,
}

impl<'a> Solver<'a> {
    fn new(env: &'a Env, set: &'a ClauseSet) -> Self {
        Solver {
            env,
            set,
            bindings: Vec::new(),
            trail: Vec::new(),
            nodes: Vec::new(),
            cut: false,
        }
    }

    fn fresh(&mut self) -> u32 {
        self.bindings.push(None);
        self.bindings.len() as u32 - 1
    }

    fn resolve(&self, t: &Term) -> Term {
        let mut t = t;
        while let Term::Var(v) = t {
            match &self.bindings[*v as usize] {
                Some(b) => t = b,
                None => break,
            }
        }
        t.clone()
    }

    fn occurs(&self, v: u32, t: &Term) -> bool {
        match self.resolve(t) {
            Term::Var(w) => v == w,
            Term::Fn(_, ts) => ts.iter().any(|t| self.occurs(v, t)),
        }
    }

    fn unify(&mut self, a: &Term, b: &Term) -> bool {
        let (a, b) = (self.resolve(a), self.resolve(b));
        match (&a, &b) {
            (Term::Var(x), Term::Var(y)) if x == y => true,
            (Term::Var(x), t) | (t, Term::Var(x)) => {
                if self.occurs(*x, t) {
                    return false;
                }
                self.bindings[*x as usize] = Some(t.clone());
                self.trail.push(*x);
                true
            }
            (Term::Fn(f, xs), Term::Fn(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.unify(x, y))
            }
        }
    }

    fn mark(&self) -> (usize, usize, usize) {
        (self.trail.len(), self.bindings.len(), self.nodes.len())
    }

    fn undo(&mut self, (trail, vars, nodes): (usize, usize, usize), slot: usize) {
        for v in self.trail.drain(trail..) {
            if let Some(b) = self.bindings.get_mut(v as usize) {
                *b = None;
            }
        }
        self.bindings.truncate(vars);
        self.nodes.truncate(nodes);
        self.nodes[slot] = None;
    }

    fn alloc(&mut self) -> usize {
        self.nodes.push(None);
        self.nodes.len() - 1
    }

    fn rename(&mut self, c: &Clause) -> (Term, Vec<Term>) {
        let base = self.bindings.len() as u32;
        self.bindings.extend((0..c.vars.len()).map(|_| None));
        let shift = |t: &Term| shift_vars(t, base);
        (shift(&c.head), c.body.iter().map(shift).collect())
    }

    /// Leftmost goal that is not a bare unconstrained variable.
    fn select(&self, goals: &[Goal]) -> Option<usize> {
        goals
            .iter()
            .position(|g| !g.pat.is_wild() || !matches!(self.resolve(&g.term), Term::Var(_)))
    }

    fn solve(&mut self, mut goals: Vec<Goal>, budget: u32) -> bool {
        if goals.is_empty() {
            return true;
        }
        let Some(i) = self.select(&goals) else {
            // Only unconstrained variables remain: each is closed with `unit`.
            if (budget as usize) < goals.len() {
                self.cut = true;
                return false;
            }
            for g in &goals {
                self.nodes[g.slot] = Some(Node {
                    kind: NodeKind::Unit,
                    children: Vec::new(),
                });
            }
            return true;
        };
        let goal = goals.remove(i);
        let term = self.resolve(&goal.term);
        match (&term, &goal.pat) {
            (_, Pat::Or(..)) => {
                let mut alts = Vec::new();
                collect_alternatives(&goal.pat, &mut alts);
                for alt in alts {
                    let mut next = goals.clone();
                    next.insert(
                        i,
                        Goal {
                            pat: alt,
                            ..goal.clone()
                        },
                    );
                    if self.solve(next, budget) {
                        return true;
                    }
                }
                false
            }
            (Term::Var(_), Pat::Tuple(ps)) => {
                let vars: Vec<Term> = ps.iter().map(|_| Term::Var(self.fresh())).collect();
                let tuple = Term::Fn(Functor::Tuple, vars);
                self.builtin(goal, tuple, goals, budget)
            }
            (Term::Fn(Functor::Tuple | Functor::Arrow, _), _) => {
                self.builtin(goal, term, goals, budget)
            }
            (Term::Var(_), Pat::Ctor(k, _)) => {
                let idx = self.set.by_ctor[k];
                self.try_clauses(&goal, &term, &[idx], goals, budget)
            }
            (Term::Fn(Functor::Type(c), _), Pat::Ctor(k, _)) => {
                if k.ty != *c {
                    return false;
                }
                let idx = self.set.by_ctor[k];
                self.try_clauses(&goal, &term, &[idx], goals, budget)
            }
            (Term::Fn(Functor::Type(c), _), Pat::Wild | Pat::Var(_)) => {
                let cands = self.set.by_pred[c.0 as usize].clone();
                self.try_clauses(&goal, &term, &cands, goals, budget)
            }
            _ => false,
        }
    }

    fn try_clauses(
        &mut self,
        goal: &Goal,
        term: &Term,
        cands: &[usize],
        rest: Vec<Goal>,
        budget: u32,
    ) -> bool {
        let set = self.set;
        for &idx in cands {
            let clause = &set.clauses[idx];
            let mark = self.mark();
            let (head, body) = self.rename(clause);
            if !self.unify(&head, term) {
                self.undo(mark, goal.slot);
                continue;
            }
            if budget == 0 {
                self.cut = true;
                self.undo(mark, goal.slot);
                continue;
            }
            let arg_pats = match &goal.pat {
                Pat::Ctor(_, Some(p)) => distribute(p, body.len()),
                _ => vec![Pat::Wild; body.len()],
            };
            let mut next = Vec::with_capacity(body.len() + rest.len());
            let mut children = Vec::new();
            for (t, pat) in body.into_iter().zip(arg_pats) {
                let slot = self.alloc();
                children.push(slot);
                next.push(Goal { term: t, pat, slot });
            }
            self.nodes[goal.slot] = Some(Node {
                kind: NodeKind::Clause(clause.origin),
                children,
            });
            next.extend(rest.iter().cloned());
            if self.solve(next, budget - 1) {
                return true;
            }
            self.undo(mark, goal.slot);
        }
        false
    }

    fn builtin(&mut self, goal: Goal, term: Term, rest: Vec<Goal>, budget: u32) -> bool {
        let mark = self.mark();
        let Term::Fn(f, args) = &term else {
            unreachable!("builtin goals are tuples or arrows")
        };
        // Tuple patterns reach here with a fresh tuple term to bind.
        if !self.unify(&goal.term, &term) {
            self.undo(mark, goal.slot);
            return false;
        }
        let (kind, body, pats) = match (f, &goal.pat) {
            (Functor::Arrow, p) if p.is_wild() => (NodeKind::Arrow, Vec::new(), Vec::new()),
            (Functor::Tuple, Pat::Tuple(ps)) if ps.len() == args.len() => {
                (NodeKind::Tuple, args.clone(), ps.clone())
            }
            (Functor::Tuple, p) if p.is_wild() => {
                (NodeKind::Tuple, args.clone(), vec![Pat::Wild; args.len()])
            }
            _ => {
                self.undo(mark, goal.slot);
                return false;
            }
        };
        if budget == 0 {
            self.cut = true;
            self.undo(mark, goal.slot);
            return false;
        }
        let mut next = Vec::new();
        let mut children = Vec::new();
        for (t, pat) in body.into_iter().zip(pats) {
            let slot = self.alloc();
            children.push(slot);
            next.push(Goal { term: t, pat, slot });
        }
        self.nodes[goal.slot] = Some(Node { kind, children });
        next.extend(rest);
        if self.solve(next, budget - 1) {
            return true;
        }
        self.undo(mark, goal.slot);
        false
    }

    fn decode(&self, slot: usize) -> Value {
        let node = self.nodes[slot].as_ref().expect("proof node");
        match node.kind {
            NodeKind::Clause(Origin::Ctor(k)) => {
                let arg = match &self.env.ctor(k).argument {
                    None => None,
                    Some(Type::Tuple(_)) => Some(Value::Tuple(
                        node.children.iter().map(|&c| self.decode(c)).collect(),
                    )),
                    Some(_) => Some(self.decode(node.children[0])),
                };
                Value::Ctor(k, arg.map(Box::new))
            }
            NodeKind::Tuple => {
                Value::Tuple(node.children.iter().map(|&c| self.decode(c)).collect())
            }
            NodeKind::Clause(Origin::Base(_)) | NodeKind::Arrow | NodeKind::Unit => Value::Opaque,
        }
    }
}

fn shift_vars(t: &Term, base: u32) -> Term {
    match t {
        Term::Var(v) => Term::Var(v + base),
        Term::Fn(f, ts) => Term::Fn(*f, ts.iter().map(|t| shift_vars(t, base)).collect()),
    }
}

fn collect_alternatives(p: &Pat, out: &mut Vec<Pat>) {
    match p {
        Pat::Or(a, b) => {
            collect_alternatives(a, out);
            collect_alternatives(b, out);
        }
        p => out.push(p.clone()),
    }
}

/// Splits a constructor's argument pattern over its `n` premises.
fn distribute(p: &Pat, n: usize) -> Vec<Pat> {
    match p {
        _ if n == 1 => vec![p.clone()],
        Pat::Tuple(ps) if ps.len() == n => ps.clone(),
        _ => vec![Pat::Wild; n],
    }
}

/// Whether some value of type `t` exists, by resolution with proofs of at
/// most `depth` clause applications.
pub fn sld_inhabited(env: &Env, set: &ClauseSet, t: &Type, depth: u32) -> ResolutionResult {
    sld_inhabited_matching(env, set, t, &Pat::Wild, depth)
}

/// Like [`sld_inhabited`], restricted to values matched by `pat`.
pub fn sld_inhabited_matching(
    env: &Env,
    set: &ClauseSet,
    t: &Type,
    pat: &Pat,
    depth: u32,
) -> ResolutionResult {
    assert!(depth >= 1, "depth must be at least 1");
    let mut solver = Solver::new(env, set);
    let mut vars = HashMap::new();
    let mut fresh = |v: u32| {
        let n = vars.len() as u32;
        *vars.entry(v).or_insert(n)
    };
    let term = term_of(t, &mut fresh);
    let nvars = vars.len();
    for bound in 1..=depth {
        solver.cut = false;
        solver.bindings = vec![None; nvars];
        solver.trail.clear();
        solver.nodes = vec![None];
        let goal = Goal {
            term: term.clone(),
            pat: pat.clone(),
            slot: 0,
        };
        if solver.solve(vec![goal], bound) {
            return ResolutionResult::Witness(solver.decode(0));
        }
        if !solver.cut {
            return ResolutionResult::NoProofWithinDepth(depth);
        }
    }
    ResolutionResult::DepthExhausted
}

/// All values of type `t` (under `session`) whose size is at most
/// `max_size`, by exhaustive generation over the constructor signatures.
/// Size counts constructors, tuples and opaque leaves, the same measure as
/// resolution depth. The result is sorted and free of duplicates.
pub fn enumerate_values(env: &Env, session: &Session, t: &Type, max_size: u32) -> Vec<Value> {
    let mut e = Enumerator {
        env,
        s: session.clone(),
        out: HashSet::new(),
        nodes: vec![None],
    };
    e.go(vec![(t.clone(), 0)], max_size);
    let mut out: Vec<Value> = e.out.into_iter().collect();
    out.sort_by_key(|v| format!("{v:?}"));
    out
}

#[derive(Clone)]
enum Built {
    Ctor(CtorId, Vec<usize>, bool),
    Tuple(Vec<usize>),
    Opaque,
}

struct Enumerator<'a> {
    env: &'a Env,
    s: Session,
    out: HashSet<Value>,
    nodes: Vec<Option<Built>>,
}

impl Enumerator<'_> {
    fn go(&mut self, mut todo: Vec<(Type, usize)>, budget: u32) {
        let pos = todo
            .iter()
            .position(|(t, _)| !matches!(self.s.resolve(t), Type::Var(_)));
        let Some(i) = pos else {
            if todo.len() as u32 <= budget {
                let saved = self.nodes.clone();
                for (_, slot) in &todo {
                    self.nodes[*slot] = Some(Built::Opaque);
                }
                let v = self.build(0);
                self.out.insert(v);
                self.nodes = saved;
            }
            return;
        };
        if budget == 0 {
            return;
        }
        let (t, slot) = todo.remove(i);
        let resolved = self.s.resolve(&t);
        let nodes_len = self.nodes.len();
        match &resolved {
            Type::Var(_) => unreachable!(),
            Type::Arrow(..) => {
                self.nodes[slot] = Some(Built::Opaque);
                self.go(todo, budget - 1);
            }
            Type::Tuple(ts) => {
                let slots: Vec<usize> = ts.iter().map(|_| self.alloc()).collect();
                self.nodes[slot] = Some(Built::Tuple(slots.clone()));
                let mut next: Vec<(Type, usize)> = ts.iter().cloned().zip(slots).collect();
                next.extend(todo);
                self.go(next, budget - 1);
            }
            Type::App(c, _) => match &self.env.decl(*c).kind {
                DeclKind::Builtin => {
                    self.nodes[slot] = Some(Built::Opaque);
                    self.go(todo, budget - 1);
                }
                DeclKind::Abstract => {}
                DeclKind::Variant(_) => {
                    for k in self.env.ctor_ids(*c) {
                        let snap = self.s.save();
                        let env = self.env;
                        if let Ok(arg) =
                            self.s
                                .instantiate_constructor(env, k, &resolved, UnifyMode::Strict)
                        {
                            let comps: Vec<Type> = match (&env.ctor(k).argument, arg) {
                                (Some(Type::Tuple(_)), Some(Type::Tuple(ts))) => ts,
                                (_, Some(a)) => vec![a],
                                (_, None) => Vec::new(),
                            };
                            let tuple_arg = matches!(env.ctor(k).argument, Some(Type::Tuple(_)));
                            let slots: Vec<usize> = comps.iter().map(|_| self.alloc()).collect();
                            self.nodes[slot] = Some(Built::Ctor(k, slots.clone(), tuple_arg));
                            let mut next: Vec<(Type, usize)> =
                                comps.into_iter().zip(slots).collect();
                            next.extend(todo.iter().cloned());
                            self.go(next, budget - 1);
                            self.nodes.truncate(nodes_len);
                        }
                        self.s.restore(snap);
                    }
                }
            },
        }
        self.nodes.truncate(nodes_len);
        self.nodes[slot] = None;
    }

    fn alloc(&mut self) -> usize {
        self.nodes.push(None);
        self.nodes.len() - 1
    }

    fn build(&self, slot: usize) -> Value {
        match self.nodes[slot].as_ref().expect("built") {
            Built::Opaque => Value::Opaque,
            Built::Tuple(cs) => Value::Tuple(cs.iter().map(|&c| self.build(c)).collect()),
            Built::Ctor(k, cs, tuple_arg) => {
                let arg = if *tuple_arg {
                    Some(Value::Tuple(cs.iter().map(|&c| self.build(c)).collect()))
                } else {
                    cs.first().map(|&c| self.build(c))
                };
                Value::Ctor(*k, arg.map(Box::new))
            }
        }
    }
}

/// Whether `v` is a well-typed value of `t` under ordinary unification.
/// Opaque leaves stand for values of base, arrow or still-unknown types.
pub fn check_value(env: &Env, session: &Session, v: &Value, t: &Type) -> bool {
    let mut s = session.clone();
    let mut deferred = Vec::new();
    if !check_inner(env, &mut s, v, t, &mut deferred) {
        return false;
    }
    deferred.iter().all(|t| match s.resolve(t) {
        Type::Var(_) | Type::Arrow(..) => true,
        Type::App(c, _) => env.is_builtin(c),
        Type::Tuple(_) => false,
    })
}

fn check_inner(env: &Env, s: &mut Session, v: &Value, t: &Type, deferred: &mut Vec<Type>) -> bool {
    match v {
        Value::Opaque => {
            deferred.push(t.clone());
            true
        }
        Value::Tuple(vs) => {
            let ts: Vec<Type> = match s.resolve(t) {
                Type::Tuple(ts) if ts.len() == vs.len() => ts,
                Type::Var(_) => {
                    let ts: Vec<Type> = vs.iter().map(|_| s.fresh()).collect();
                    if s.unify(env, t, &Type::Tuple(ts.clone()), UnifyMode::Strict)
                        .is_err()
                    {
                        return false;
                    }
                    ts
                }
                _ => return false,
            };
            vs.iter()
                .zip(&ts)
                .all(|(v, t)| check_inner(env, s, v, t, deferred))
        }
        Value::Ctor(k, arg) => match s.instantiate_constructor(env, *k, t, UnifyMode::Strict) {
            Ok(Some(at)) => match arg {
                Some(a) => check_inner(env, s, a, &at, deferred),
                None => false,
            },
            Ok(None) => arg.is_none(),
            Err(_) => false,
        },
    }
}
