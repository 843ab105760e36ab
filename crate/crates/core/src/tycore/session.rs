use thiserror::Error;

use super::{CtorId, Env, TyVar, Type};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnifyMode {
    /// Ordinary syntactic unification.
    Strict,
    /// Pattern typing: clashes between compatible types are accepted without
    /// binding anything, and only injective arguments of a common head are
    /// unified.
    PatternCompat,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum UnifyError {
    #[error("cannot unify {0:?} with {1:?}")]
    Clash(Type, Type),
    #[error("occurs check: {0:?} occurs in {1:?}")]
    Occurs(TyVar, Type),
}

/// Marker returned by [`Session::save`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Snapshot {
    vars: usize,
    trail: usize,
}

/// A variable store with an undo trail. Confined to one thread; the
/// [`Env`] it works against is shared.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Session {
    bindings: Vec<Option<Type>>,
    trail: Vec<TyVar>,
}

impl Session {
    pub fn new() -> Session {
        Session::default()
    }

    pub fn fresh_var(&mut self) -> TyVar {
        self.bindings.push(None);
        TyVar(self.bindings.len() as u32 - 1)
    }

    pub fn fresh(&mut self) -> Type {
        Type::Var(self.fresh_var())
    }

    pub fn var_count(&self) -> usize {
        self.bindings.len()
    }

    pub fn binding(&self, v: TyVar) -> Option<&Type> {
        self.bindings[v.0 as usize].as_ref()
    }

    pub fn save(&self) -> Snapshot {
        Snapshot {
            vars: self.bindings.len(),
            trail: self.trail.len(),
        }
    }

    /// Undoes every binding and variable created since `snap`.
    pub fn restore(&mut self, snap: Snapshot) {
        for v in self.trail.drain(snap.trail..) {
            if let Some(slot) = self.bindings.get_mut(v.0 as usize) {
                *slot = None;
            }
        }
        self.bindings.truncate(snap.vars);
    }

    fn bind(&mut self, v: TyVar, t: Type) {
        debug_assert!(self.bindings[v.0 as usize].is_none());
        self.bindings[v.0 as usize] = Some(t);
        self.trail.push(v);
    }

    /// Follows variable bindings at the head only.
    pub fn resolve(&self, t: &Type) -> Type {
        let mut t = t;
        while let Type::Var(v) = t {
            match &self.bindings[v.0 as usize] {
                Some(next) => t = next,
                None => break,
            }
        }
        t.clone()
    }

    /// Applies the current substitution everywhere.
    pub fn zonk(&self, t: &Type) -> Type {
        match self.resolve(t) {
            Type::Var(v) => Type::Var(v),
            Type::App(c, ts) => Type::App(c, ts.iter().map(|t| self.zonk(t)).collect()),
            Type::Arrow(a, b) => Type::Arrow(Box::new(self.zonk(&a)), Box::new(self.zonk(&b))),
            Type::Tuple(ts) => Type::Tuple(ts.iter().map(|t| self.zonk(t)).collect()),
        }
    }

    fn occurs(&self, v: TyVar, t: &Type) -> bool {
        match self.resolve(t) {
            Type::Var(w) => v == w,
            Type::App(_, ts) | Type::Tuple(ts) => ts.iter().any(|t| self.occurs(v, t)),
            Type::Arrow(a, b) => self.occurs(v, &a) || self.occurs(v, &b),
        }
    }

    /// Unifies two types, recording bindings on the trail. On failure some
    /// bindings may remain; callers restore a snapshot.
    pub fn unify(
        &mut self,
        env: &Env,
        a: &Type,
        b: &Type,
        mode: UnifyMode,
    ) -> Result<(), UnifyError> {
        let a = self.resolve(a);
        let b = self.resolve(b);
        match (&a, &b) {
            (Type::Var(x), Type::Var(y)) if x == y => Ok(()),
            (Type::Var(x), t) | (t, Type::Var(x)) => {
                if self.occurs(*x, t) {
                    return Err(UnifyError::Occurs(*x, self.zonk(t)));
                }
                self.bind(*x, t.clone());
                Ok(())
            }
            (Type::App(c1, xs), Type::App(c2, ys)) if c1 == c2 => {
                let inj = &env.decl(*c1).injective;
                for (i, (x, y)) in xs.iter().zip(ys).enumerate() {
                    if mode == UnifyMode::Strict || inj[i] {
                        self.unify(env, x, y, mode)?;
                    }
                }
                Ok(())
            }
            (Type::Arrow(a1, b1), Type::Arrow(a2, b2)) => {
                self.unify(env, a1, a2, mode)?;
                self.unify(env, b1, b2, mode)
            }
            (Type::Tuple(xs), Type::Tuple(ys)) if xs.len() == ys.len() => {
                for (x, y) in xs.iter().zip(ys) {
                    self.unify(env, x, y, mode)?;
                }
                Ok(())
            }
            _ => {
                let (za, zb) = (self.zonk(&a), self.zonk(&b));
                if mode == UnifyMode::PatternCompat && env.compatible(&za, &zb) {
                    Ok(())
                } else {
                    Err(UnifyError::Clash(za, zb))
                }
            }
        }
    }

    /// Compatibility of two types under the current substitution.
    pub fn compatible(&self, env: &Env, a: &Type, b: &Type) -> bool {
        env.compatible(&self.zonk(a), &self.zonk(b))
    }

    /// Types constructor `ctor` against `expected`: freshens the signature's
    /// variables and unifies its result indices with the arguments of
    /// `expected` in `mode`. Returns the instantiated argument type. On
    /// failure the session is rolled back to its entry state.
    pub fn instantiate_constructor(
        &mut self,
        env: &Env,
        ctor: CtorId,
        expected: &Type,
        mode: UnifyMode,
    ) -> Result<Option<Type>, UnifyError> {
        let snap = self.save();
        let r = self.instantiate_inner(env, ctor, expected, mode);
        if r.is_err() {
            self.restore(snap);
        }
        r
    }

    fn instantiate_inner(
        &mut self,
        env: &Env,
        ctor: CtorId,
        expected: &Type,
        mode: UnifyMode,
    ) -> Result<Option<Type>, UnifyError> {
        let owner = ctor.ty;
        let args = match self.resolve(expected) {
            Type::Var(v) => {
                let args: Vec<Type> = (0..env.decl(owner).arity).map(|_| self.fresh()).collect();
                self.bind(v, Type::App(owner, args.clone()));
                args
            }
            Type::App(c, args) if c == owner => args,
            other => {
                let arity = env.decl(owner).arity;
                let shape = Type::App(owner, (0..arity).map(|_| self.fresh()).collect());
                return Err(UnifyError::Clash(self.zonk(&other), shape));
            }
        };
        let sig = env.ctor(ctor);
        let inst: Vec<Type> = sig.vars.iter().map(|_| self.fresh()).collect();
        for (index, actual) in sig.result.iter().zip(&args) {
            self.unify(env, &index.subst(&inst), actual, mode)?;
        }
        Ok(sig.argument.as_ref().map(|a| a.subst(&inst)))
    }
}
