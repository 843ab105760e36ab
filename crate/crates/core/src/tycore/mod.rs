//! Types, the declaration environment, unification with an undo trail, and
//! the compatibility relation used when typing patterns.

mod compat;
mod session;

pub use session::{Session, Snapshot, UnifyError, UnifyMode};

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::syntax::{DeclBody, PatternSyntax, Span, TypeDeclSyntax, TypeSyntax};

/// Index of a declared type constructor in an [`Env`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TyCon(pub u32);

/// A constructor: the owning type and its position in the declaration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CtorId {
    pub ty: TyCon,
    pub index: u32,
}

/// Unification variable. Inside a [`ConstructorSig`] the id is an index into
/// the signature's own variable list instead.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TyVar(pub u32);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Type {
    Var(TyVar),
    App(TyCon, Vec<Type>),
    Arrow(Box<Type>, Box<Type>),
    Tuple(Vec<Type>),
}

impl Type {
    pub fn con(c: TyCon) -> Type {
        Type::App(c, Vec::new())
    }

    /// Replaces signature-local variable `k` by `args[k]`.
    pub fn subst(&self, args: &[Type]) -> Type {
        match self {
            Type::Var(v) => args[v.0 as usize].clone(),
            Type::App(c, ts) => Type::App(*c, ts.iter().map(|t| t.subst(args)).collect()),
            Type::Arrow(a, b) => Type::Arrow(Box::new(a.subst(args)), Box::new(b.subst(args))),
            Type::Tuple(ts) => Type::Tuple(ts.iter().map(|t| t.subst(args)).collect()),
        }
    }

    pub fn free_vars(&self, out: &mut Vec<TyVar>) {
        match self {
            Type::Var(v) => {
                if !out.contains(v) {
                    out.push(*v)
                }
            }
            Type::App(_, ts) | Type::Tuple(ts) => ts.iter().for_each(|t| t.free_vars(out)),
            Type::Arrow(a, b) => {
                a.free_vars(out);
                b.free_vars(out);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeclKind {
    Variant(Vec<ConstructorSig>),
    /// No visible definition; may secretly equal any other type.
    Abstract,
    /// Predeclared base type (`int`, `bool`, ...): nominal, inhabited, never split.
    Builtin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeDecl {
    pub name: String,
    pub arity: usize,
    pub kind: DeclKind,
    /// Per-parameter injectivity: equal applications imply equal arguments.
    pub injective: Vec<bool>,
}

impl TypeDecl {
    pub fn constructors(&self) -> &[ConstructorSig] {
        match &self.kind {
            DeclKind::Variant(cs) => cs,
            _ => &[],
        }
    }

    pub fn is_variant(&self) -> bool {
        matches!(self.kind, DeclKind::Variant(_))
    }

    pub fn is_abstract(&self) -> bool {
        matches!(self.kind, DeclKind::Abstract)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructorSig {
    pub name: String,
    /// Variables bound by this signature; `Type::Var(k)` refers to `vars[k]`.
    pub vars: Vec<String>,
    pub argument: Option<Type>,
    /// Result indices, one per parameter of the owning declaration.
    pub result: Vec<Type>,
    /// True unless the result indices are exactly distinct variables.
    pub gadt: bool,
}

pub const BUILTIN_TYPES: [&str; 5] = ["int", "bool", "char", "float", "unit"];

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EnvError {
    #[error("{span}: unknown type `{name}`")]
    UnknownType { span: Span, name: String },
    #[error("{span}: type `{name}` expects {expected} argument(s) but was given {found}")]
    Arity {
        span: Span,
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("{span}: unbound type variable `'{var}`")]
    UnboundVar { span: Span, var: String },
    #[error("{span}: type `{name}` is already declared")]
    DuplicateType { span: Span, name: String },
    #[error("{span}: constructor `{name}` is already declared")]
    DuplicateConstructor { span: Span, name: String },
}

/// The declaration environment. Immutable once built and safe to share
/// between threads.
#[derive(Clone, Debug)]
pub struct Env {
    decls: Vec<TypeDecl>,
    by_name: HashMap<String, TyCon>,
    ctors: HashMap<String, CtorId>,
}

impl Default for Env {
    fn default() -> Self {
        Self::new()
    }
}

impl Env {
    /// An environment holding only the builtin base types.
    pub fn new() -> Env {
        let mut env = Env {
            decls: Vec::new(),
            by_name: HashMap::new(),
            ctors: HashMap::new(),
        };
        for name in BUILTIN_TYPES {
            env.by_name
                .insert(name.to_string(), TyCon(env.decls.len() as u32));
            env.decls.push(TypeDecl {
                name: name.to_string(),
                arity: 0,
                kind: DeclKind::Builtin,
                injective: Vec::new(),
            });
        }
        env
    }

    /// Adds a group of (possibly mutually recursive) declarations.
    pub fn declare(&mut self, decls: &[TypeDeclSyntax]) -> Result<(), EnvError> {
        let first = self.decls.len();
        for d in decls {
            if self.by_name.contains_key(&d.name) {
                return Err(EnvError::DuplicateType {
                    span: d.span,
                    name: d.name.clone(),
                });
            }
            let (kind, inj) = match d.body {
                DeclBody::Abstract => (DeclKind::Abstract, false),
                DeclBody::Variant(_) => (DeclKind::Variant(Vec::new()), true),
            };
            self.by_name
                .insert(d.name.clone(), TyCon(self.decls.len() as u32));
            self.decls.push(TypeDecl {
                name: d.name.clone(),
                arity: d.arity(),
                kind,
                injective: vec![inj; d.arity()],
            });
        }
        for (offset, d) in decls.iter().enumerate() {
            let owner = TyCon((first + offset) as u32);
            let DeclBody::Variant(cs) = &d.body else {
                continue;
            };
            let mut sigs = Vec::with_capacity(cs.len());
            for (index, c) in cs.iter().enumerate() {
                if self.ctors.contains_key(&c.name) {
                    return Err(EnvError::DuplicateConstructor {
                        span: c.span,
                        name: c.name.clone(),
                    });
                }
                self.ctors.insert(
                    c.name.clone(),
                    CtorId {
                        ty: owner,
                        index: index as u32,
                    },
                );
                sigs.push(self.lower_constructor(d, c)?);
            }
            self.decls[owner.0 as usize].kind = DeclKind::Variant(sigs);
        }
        Ok(())
    }

    fn lower_constructor(
        &self,
        decl: &TypeDeclSyntax,
        c: &crate::syntax::ConstructorSyntax,
    ) -> Result<ConstructorSig, EnvError> {
        let mut vars: Vec<String> = Vec::new();
        match &c.result {
            Some(result) => {
                vars = c.existentials();
                let named = vars.len();
                let mut scope = |name: Option<&str>| -> Result<Type, String> {
                    match name {
                        Some(n) => Ok(Type::Var(TyVar(
                            vars[..named].iter().position(|v| v == n).unwrap() as u32,
                        ))),
                        None => {
                            vars.push("_".to_string());
                            Ok(Type::Var(TyVar(vars.len() as u32 - 1)))
                        }
                    }
                };
                let argument = match &c.argument {
                    Some(a) => Some(self.lower_type(a, c.span, &mut scope)?),
                    None => None,
                };
                let Type::App(_, result) = self.lower_type(result, c.span, &mut scope)? else {
                    unreachable!("the parser checks the result head");
                };
                let gadt = !distinct_vars(&result);
                Ok(ConstructorSig {
                    name: c.name.clone(),
                    vars,
                    argument,
                    result,
                    gadt,
                })
            }
            None => {
                for (i, p) in decl.params.iter().enumerate() {
                    vars.push(p.clone().unwrap_or_else(|| format!("_{i}")));
                }
                let params = &decl.params;
                let mut scope = |name: Option<&str>| -> Result<Type, String> {
                    match name.and_then(|n| params.iter().position(|p| p.as_deref() == Some(n))) {
                        Some(k) => Ok(Type::Var(TyVar(k as u32))),
                        None => Err(name.unwrap_or("_").to_string()),
                    }
                };
                let argument = match &c.argument {
                    Some(a) => Some(self.lower_type(a, c.span, &mut scope)?),
                    None => None,
                };
                let result = (0..decl.arity())
                    .map(|k| Type::Var(TyVar(k as u32)))
                    .collect();
                Ok(ConstructorSig {
                    name: c.name.clone(),
                    vars,
                    argument,
                    result,
                    gadt: false,
                })
            }
        }
    }

    /// Lowers a surface type. `scope` maps a variable name (or `None` for
    /// `_`) to a type, or fails with the offending name.
    pub fn lower_type(
        &self,
        t: &TypeSyntax,
        span: Span,
        scope: &mut dyn FnMut(Option<&str>) -> Result<Type, String>,
    ) -> Result<Type, EnvError> {
        Ok(match t {
            TypeSyntax::Var(v) => {
                scope(Some(v)).map_err(|var| EnvError::UnboundVar { span, var })?
            }
            TypeSyntax::Anon => scope(None).map_err(|var| EnvError::UnboundVar { span, var })?,
            TypeSyntax::App(name, args) => {
                let con = self
                    .lookup_type(name)
                    .ok_or_else(|| EnvError::UnknownType {
                        span,
                        name: name.clone(),
                    })?;
                let decl = self.decl(con);
                if decl.arity != args.len() {
                    return Err(EnvError::Arity {
                        span,
                        name: name.clone(),
                        expected: decl.arity,
                        found: args.len(),
                    });
                }
                let args = args
                    .iter()
                    .map(|a| self.lower_type(a, span, scope))
                    .collect::<Result<_, _>>()?;
                Type::App(con, args)
            }
            TypeSyntax::Arrow(a, b) => Type::Arrow(
                Box::new(self.lower_type(a, span, scope)?),
                Box::new(self.lower_type(b, span, scope)?),
            ),
            TypeSyntax::Tuple(items) => Type::Tuple(
                items
                    .iter()
                    .map(|a| self.lower_type(a, span, scope))
                    .collect::<Result<_, _>>()?,
            ),
        })
    }

    /// Lowers a type whose variables become fresh unification variables of
    /// `session` (the same name maps to the same variable).
    pub fn lower_open_type(
        &self,
        t: &TypeSyntax,
        span: Span,
        session: &mut Session,
    ) -> Result<Type, EnvError> {
        let mut named: Vec<(String, Type)> = Vec::new();
        let mut scope = |name: Option<&str>| -> Result<Type, String> {
            if let Some(n) = name {
                if let Some((_, t)) = named.iter().find(|(m, _)| m == n) {
                    return Ok(t.clone());
                }
            }
            let v = session.fresh();
            if let Some(n) = name {
                named.push((n.to_string(), v.clone()));
            }
            Ok(v)
        };
        self.lower_type(t, span, &mut scope)
    }

    pub fn decl(&self, c: TyCon) -> &TypeDecl {
        &self.decls[c.0 as usize]
    }

    pub fn decls(&self) -> impl Iterator<Item = (TyCon, &TypeDecl)> {
        self.decls
            .iter()
            .enumerate()
            .map(|(i, d)| (TyCon(i as u32), d))
    }

    pub fn lookup_type(&self, name: &str) -> Option<TyCon> {
        self.by_name.get(name).copied()
    }

    pub fn lookup_ctor(&self, name: &str) -> Option<CtorId> {
        self.ctors.get(name).copied()
    }

    pub fn ctor(&self, c: CtorId) -> &ConstructorSig {
        &self.decl(c.ty).constructors()[c.index as usize]
    }

    pub fn ctor_ids(
        &self,
        ty: TyCon,
    ) -> impl DoubleEndedIterator<Item = CtorId> + ExactSizeIterator {
        (0..self.decl(ty).constructors().len() as u32).map(move |index| CtorId { ty, index })
    }

    pub fn type_syntax(&self, t: &Type) -> TypeSyntax {
        match t {
            Type::Var(v) => TypeSyntax::Var(format!("_{}", v.0)),
            Type::App(c, args) => TypeSyntax::App(
                self.decl(*c).name.clone(),
                args.iter().map(|a| self.type_syntax(a)).collect(),
            ),
            Type::Arrow(a, b) => {
                TypeSyntax::Arrow(Box::new(self.type_syntax(a)), Box::new(self.type_syntax(b)))
            }
            Type::Tuple(ts) => TypeSyntax::Tuple(ts.iter().map(|t| self.type_syntax(t)).collect()),
        }
    }

    pub fn show_type(&self, t: &Type) -> String {
        crate::syntax::print_type(&self.type_syntax(t))
    }

    pub fn pattern_syntax(&self, p: &crate::matrix::Pat) -> PatternSyntax {
        use crate::matrix::Pat;
        match p {
            Pat::Wild => PatternSyntax::Wildcard,
            Pat::Var(v) => PatternSyntax::Var(v.clone()),
            Pat::Ctor(c, arg) => PatternSyntax::Constr(
                self.ctor(*c).name.clone(),
                arg.as_ref().map(|a| Box::new(self.pattern_syntax(a))),
            ),
            Pat::Tuple(ps) => {
                PatternSyntax::Tuple(ps.iter().map(|p| self.pattern_syntax(p)).collect())
            }
            Pat::Or(a, b) => PatternSyntax::Or(
                Box::new(self.pattern_syntax(a)),
                Box::new(self.pattern_syntax(b)),
            ),
        }
    }

    pub fn show_pat(&self, p: &crate::matrix::Pat) -> String {
        crate::syntax::print_pattern(&self.pattern_syntax(p))
    }

    /// Whether `c` is a builtin base type (inhabited, nothing to split).
    pub fn is_builtin(&self, c: TyCon) -> bool {
        matches!(self.decl(c).kind, DeclKind::Builtin)
    }
}

fn distinct_vars(ts: &[Type]) -> bool {
    let mut seen = Vec::new();
    ts.iter().all(|t| match t {
        Type::Var(v) if !seen.contains(v) => {
            seen.push(*v);
            true
        }
        _ => false,
    })
}

/// Displays a type with its owning environment.
pub struct ShowType<'a>(pub &'a Env, pub &'a Type);

impl fmt::Display for ShowType<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.show_type(self.1))
    }
}
