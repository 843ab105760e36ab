//! Emptiness proof search for patterns.
//!
//! Typing a pattern in check mode is non-deterministic: an or-pattern
//! succeeds if either branch types, and a wildcard may be split into the
//! or-pattern of its type's constructors. The search explores these
//! alternatives depth first with an explicit stack of choice points; each
//! choice point holds a trail snapshot, so failing branches undo their
//! unifications before the next alternative is tried. Tuple components are
//! typed left to right under one shared substitution, which lets the type
//! of a later component depend on how an earlier wildcard was split.
//!
//! The answer is [`SearchOutcome::Empty`] only if every alternative fails
//! to type. Emptiness is undecidable in general, so splitting is bounded by
//! a [`SplitPolicy`]; whenever the search stops early it answers
//! `Inhabited`, which is the conservative direction.

use thiserror::Error;

use crate::matrix::Pat;
use crate::tycore::{DeclKind, Env, Session, Type, UnifyMode};

/// Default fuel for [`SplitPolicy::Full`].
pub const DEFAULT_FUEL: u32 = 4096;

/// Splits of non-branching types (tuples, single-constructor variants) in
/// one candidate witness, beyond which they stop. Keeps recursive
/// single-constructor types from unfolding forever.
const UNFOLD_LIMIT: u32 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SplitPolicy {
    /// Never split wildcards.
    Never,
    /// Split wildcards of tuple types and single-constructor types, and of
    /// types whose constructors are all GADT-indexed; in the last case the
    /// generated subpatterns are not split again.
    Once,
    /// Everything `Once` splits, plus further tuple and variant wildcards.
    /// The extra splits are explored by iterative deepening on how many of
    /// them are nested along a path; `fuel` bounds their total number over
    /// all rounds.
    Full { fuel: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SearchMode {
    /// Plain pattern typing: no splitting, both sides of an or-pattern must
    /// type.
    TypeOnly,
    Check(SplitPolicy),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// No alternative types: no value can match.
    Empty,
    /// A typeable, or-free refinement of the query pattern.
    Inhabited(Pat),
}

impl SearchOutcome {
    pub fn is_empty(&self) -> bool {
        matches!(self, SearchOutcome::Empty)
    }

    pub fn witness(&self) -> Option<&Pat> {
        match self {
            SearchOutcome::Empty => None,
            SearchOutcome::Inhabited(w) => Some(w),
        }
    }
}

/// Counters accumulated over the queries of one [`Searcher`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub queries: u64,
    /// Terminal nodes of the check-mode search trees: failed alternatives
    /// plus successful completions.
    pub leaves: u64,
    /// Wildcards replaced by their constructor alternatives.
    pub splits: u64,
    /// Queries on which `Full` ran out of fuel.
    pub fuel_exhausted: u64,
}

impl std::ops::AddAssign for SearchStats {
    fn add_assign(&mut self, o: SearchStats) {
        self.queries += o.queries;
        self.leaves += o.leaves;
        self.splits += o.splits;
        self.fuel_exhausted += o.fuel_exhausted;
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ExplodeError {
    #[error("the type has no constructors")]
    EmptyVariant,
    #[error("values of this type cannot be split")]
    NotSplittable,
}

/// The pattern a wildcard at `t` is split into: `C1 _ | ... | Cn _` over the
/// declared constructors of a variant, or a tuple of wildcards.
pub fn explode_pat(t: &Type, env: &Env) -> Result<Pat, ExplodeError> {
    match t {
        Type::Tuple(ts) => Ok(Pat::Tuple(vec![Pat::Wild; ts.len()])),
        Type::App(c, _) if env.decl(*c).is_variant() => {
            Pat::or_of(env.ctor_ids(*c).map(|k| Pat::ctor_wild(env, k)))
                .ok_or(ExplodeError::EmptyVariant)
        }
        _ => Err(ExplodeError::NotSplittable),
    }
}

enum Shape {
    Tuple,
    Variant { ctors: usize, all_gadt: bool },
    Opaque,
}

fn shape(t: &Type, env: &Env) -> Shape {
    match t {
        Type::Tuple(_) => Shape::Tuple,
        Type::App(c, _) => match &env.decl(*c).kind {
            DeclKind::Variant(cs) => Shape::Variant {
                ctors: cs.len(),
                all_gadt: cs.iter().all(|c| c.gadt),
            },
            _ => Shape::Opaque,
        },
        _ => Shape::Opaque,
    }
}

/// Whether a wildcard at `t` (already resolved) would be split under
/// `policy`, ignoring per-path state.
pub fn split_eligible(t: &Type, env: &Env, policy: SplitPolicy) -> bool {
    match policy {
        SplitPolicy::Never => false,
        SplitPolicy::Once => once_eligible(&shape(t, env)),
        SplitPolicy::Full { fuel } => {
            once_eligible(&shape(t, env)) || (fuel > 0 && !matches!(shape(t, env), Shape::Opaque))
        }
    }
}

fn once_eligible(s: &Shape) -> bool {
    match s {
        Shape::Tuple => true,
        Shape::Variant { ctors, all_gadt } => *ctors == 1 || *all_gadt,
        Shape::Opaque => false,
    }
}

fn branching(s: &Shape) -> bool {
    !matches!(s, Shape::Tuple | Shape::Variant { ctors: 1, .. })
}

#[derive(Clone, Copy, Debug, Default)]
struct Flags {
    /// Generated by a multi-way GADT split: `Once` leaves it alone.
    no_split: bool,
    /// Extra (`Full`-only) splits above this point.
    extra: u32,
}

#[derive(Clone)]
enum Task {
    Check { pat: Pat, ty: Type, flags: Flags },
    BuildCtor(crate::tycore::CtorId, bool),
    BuildTuple(usize),
}

struct Choice {
    snap: crate::tycore::Snapshot,
    tasks: Vec<Task>,
    values: Vec<Pat>,
    denied: u32,
    unfolds: u32,
}

/// Runs emptiness queries against one environment and accumulates
/// [`SearchStats`].
pub struct Searcher<'e> {
    env: &'e Env,
    stats: SearchStats,
    fuel: u32,
    /// Current deepening round of `Full`: the nesting allowed for extra splits.
    bound: u32,
    /// Some wildcard in this round was left unsplit only because of `bound`.
    hit_bound: bool,
    /// Wildcards on the current path that `Full` wanted to split but could not.
    denied: u32,
    /// Non-branching splits in the current candidate.
    unfolds: u32,
}

impl<'e> Searcher<'e> {
    pub fn new(env: &'e Env) -> Searcher<'e> {
        Searcher {
            env,
            stats: SearchStats::default(),
            fuel: 0,
            bound: 0,
            hit_bound: false,
            denied: 0,
            unfolds: 0,
        }
    }

    pub fn stats(&self) -> SearchStats {
        self.stats
    }

    /// Checks whether some value of type `expected` can match `p`. The
    /// session is left exactly as it was on entry.
    pub fn check(
        &mut self,
        session: &mut Session,
        p: &Pat,
        expected: &Type,
        mode: SearchMode,
    ) -> SearchOutcome {
        self.stats.queries += 1;
        let entry = session.save();
        let out = match mode {
            SearchMode::TypeOnly => {
                if self.type_only(session, p, expected) {
                    SearchOutcome::Inhabited(p.clone())
                } else {
                    SearchOutcome::Empty
                }
            }
            SearchMode::Check(SplitPolicy::Full { fuel }) => {
                self.deepen(session, p, expected, fuel)
            }
            SearchMode::Check(policy) => self.run(session, p, expected, policy),
        };
        session.restore(entry);
        out
    }

    fn deepen(
        &mut self,
        session: &mut Session,
        p: &Pat,
        expected: &Type,
        fuel: u32,
    ) -> SearchOutcome {
        let entry = session.save();
        self.fuel = fuel;
        self.bound = 0;
        loop {
            self.hit_bound = false;
            let out = self.run(session, p, expected, SplitPolicy::Full { fuel });
            session.restore(entry);
            // A witness reached without denied splits is final; so is any
            // answer once deeper rounds cannot differ.
            if out.is_empty() || self.denied == 0 || !self.hit_bound || self.fuel == 0 {
                if self.fuel == 0 {
                    self.stats.fuel_exhausted += 1;
                }
                return out;
            }
            self.bound += 1;
        }
    }

    fn type_only(&mut self, s: &mut Session, p: &Pat, ty: &Type) -> bool {
        match p {
            Pat::Wild | Pat::Var(_) => true,
            Pat::Or(a, b) => {
                let snap = s.save();
                let left = self.type_only(s, a, ty);
                s.restore(snap);
                left && self.type_only(s, b, ty)
            }
            Pat::Tuple(ps) => match self.tuple_components(s, ty, ps.len()) {
                Some(ts) => ps.iter().zip(&ts).all(|(p, t)| self.type_only(s, p, t)),
                None => false,
            },
            Pat::Ctor(c, arg) => {
                match s.instantiate_constructor(self.env, *c, ty, UnifyMode::PatternCompat) {
                    Ok(arg_ty) => match (arg, arg_ty) {
                        (Some(p), Some(t)) => self.type_only(s, p, &t),
                        (None, None) => true,
                        _ => false,
                    },
                    Err(_) => false,
                }
            }
        }
    }

    fn tuple_components(&mut self, s: &mut Session, ty: &Type, n: usize) -> Option<Vec<Type>> {
        match s.resolve(ty) {
            Type::Tuple(ts) if ts.len() == n => Some(ts),
            Type::Var(_) => {
                let ts: Vec<Type> = (0..n).map(|_| s.fresh()).collect();
                let tuple = Type::Tuple(ts.clone());
                s.unify(self.env, ty, &tuple, UnifyMode::Strict).ok()?;
                Some(ts)
            }
            _ => None,
        }
    }

    /// Decides whether a wildcard at `ty` is split on this path, and with
    /// which flags its generated subpatterns continue.
    fn split_decision(&mut self, ty: &Type, flags: Flags, policy: SplitPolicy) -> Option<Flags> {
        let sh = shape(ty, self.env);
        if matches!(sh, Shape::Opaque) {
            return None;
        }
        let non_branching = !branching(&sh);
        let once_ok = !flags.no_split
            && once_eligible(&sh)
            && (!non_branching || self.unfolds < UNFOLD_LIMIT);
        let once_children = Flags {
            no_split: !non_branching,
            extra: flags.extra,
        };
        let decision = match policy {
            SplitPolicy::Never => None,
            SplitPolicy::Once => once_ok.then_some(once_children),
            SplitPolicy::Full { .. } if once_ok => Some(once_children),
            SplitPolicy::Full { .. } => {
                if non_branching && self.unfolds >= UNFOLD_LIMIT {
                    None
                } else if self.fuel > 0 && flags.extra < self.bound {
                    self.fuel -= 1;
                    Some(Flags {
                        no_split: false,
                        extra: flags.extra + 1,
                    })
                } else {
                    self.hit_bound |= flags.extra >= self.bound;
                    self.denied += 1;
                    None
                }
            }
        };
        if decision.is_some() && non_branching {
            self.unfolds += 1;
        }
        decision
    }

    fn run(&mut self, s: &mut Session, p: &Pat, ty: &Type, policy: SplitPolicy) -> SearchOutcome {
        let mut tasks = vec![Task::Check {
            pat: p.clone(),
            ty: ty.clone(),
            flags: Flags::default(),
        }];
        let mut values: Vec<Pat> = Vec::new();
        let mut choices: Vec<Choice> = Vec::new();
        self.denied = 0;
        self.unfolds = 0;
        loop {
            let Some(task) = tasks.pop() else {
                self.stats.leaves += 1;
                return SearchOutcome::Inhabited(values.pop().expect("witness"));
            };
            if self.step(s, task, &mut tasks, &mut values, &mut choices, policy) {
                continue;
            }
            self.stats.leaves += 1;
            match choices.pop() {
                Some(c) => {
                    s.restore(c.snap);
                    tasks = c.tasks;
                    values = c.values;
                    self.denied = c.denied;
                    self.unfolds = c.unfolds;
                }
                None => return SearchOutcome::Empty,
            }
        }
    }

    /// Executes one task; `false` means the current alternative failed.
    fn step(
        &mut self,
        s: &mut Session,
        task: Task,
        tasks: &mut Vec<Task>,
        values: &mut Vec<Pat>,
        choices: &mut Vec<Choice>,
        policy: SplitPolicy,
    ) -> bool {
        match task {
            Task::BuildCtor(c, has_arg) => {
                let arg = if has_arg {
                    values.pop().map(Box::new)
                } else {
                    None
                };
                values.push(Pat::Ctor(c, arg));
                true
            }
            Task::BuildTuple(n) => {
                let items = values.split_off(values.len() - n);
                values.push(Pat::Tuple(items));
                true
            }
            Task::Check { pat, ty, flags } => match pat {
                Pat::Var(_) => {
                    values.push(pat);
                    true
                }
                Pat::Wild => {
                    let resolved = s.resolve(&ty);
                    match self.split_decision(&resolved, flags, policy) {
                        None => {
                            values.push(Pat::Wild);
                            true
                        }
                        Some(child) => {
                            self.stats.splits += 1;
                            match explode_pat(&resolved, self.env) {
                                Ok(pat) => {
                                    tasks.push(Task::Check {
                                        pat,
                                        ty,
                                        flags: child,
                                    });
                                    true
                                }
                                Err(_) => false,
                            }
                        }
                    }
                }
                Pat::Or(a, b) => {
                    let mut alt = tasks.clone();
                    alt.push(Task::Check {
                        pat: *b,
                        ty: ty.clone(),
                        flags,
                    });
                    choices.push(Choice {
                        snap: s.save(),
                        tasks: alt,
                        values: values.clone(),
                        denied: self.denied,
                        unfolds: self.unfolds,
                    });
                    tasks.push(Task::Check { pat: *a, ty, flags });
                    true
                }
                Pat::Tuple(ps) => {
                    let Some(ts) = self.tuple_components(s, &ty, ps.len()) else {
                        return false;
                    };
                    tasks.push(Task::BuildTuple(ps.len()));
                    for (pat, ty) in ps.into_iter().zip(ts).rev() {
                        tasks.push(Task::Check { pat, ty, flags });
                    }
                    true
                }
                Pat::Ctor(c, arg) => {
                    let Ok(arg_ty) =
                        s.instantiate_constructor(self.env, c, &ty, UnifyMode::PatternCompat)
                    else {
                        return false;
                    };
                    match (arg, arg_ty) {
                        (Some(pat), Some(ty)) => {
                            tasks.push(Task::BuildCtor(c, true));
                            tasks.push(Task::Check {
                                pat: *pat,
                                ty,
                                flags,
                            });
                            true
                        }
                        (None, None) => {
                            values.push(Pat::Ctor(c, None));
                            true
                        }
                        _ => false,
                    }
                }
            },
        }
    }
}

/// One-shot form of [`Searcher::check`].
pub fn type_pat_check(
    p: &Pat,
    expected: &Type,
    env: &Env,
    session: &mut Session,
    mode: SearchMode,
) -> SearchOutcome {
    Searcher::new(env).check(session, p, expected, mode)
}
