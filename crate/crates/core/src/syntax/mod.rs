//! Surface language: type declarations and match checks.
//!
//! A `.gml` file is a sequence of `type` declarations and `check` blocks.
//! Newlines are not significant; `#` starts a comment that runs to the end
//! of the line.
//!
//! ```text
//! type _ t = Int : int t | Bool : bool t
//! type ('a, 'b) sum = Inl of 'a | Inr of 'b
//! type a
//! check 'a t with | Int -> ok | Bool -> .
//! ```

mod lexer;
mod parser;
mod print;

pub use parser::{parse_program, parse_type, SyntaxError};
pub use print::{print_pattern, print_type};

use std::collections::BTreeSet;
use std::fmt;

/// One-based source position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SurfaceProgram {
    pub decls: Vec<TypeDeclSyntax>,
    pub checks: Vec<MatchCheckSyntax>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeDeclSyntax {
    pub name: String,
    /// Declared parameters; `None` stands for an anonymous `_` parameter.
    pub params: Vec<Option<String>>,
    pub body: DeclBody,
    pub span: Span,
}

impl TypeDeclSyntax {
    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeclBody {
    /// Zero constructors is allowed and denotes an empty type.
    Variant(Vec<ConstructorSyntax>),
    Abstract,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructorSyntax {
    pub name: String,
    pub argument: Option<TypeSyntax>,
    /// Explicit result type for the GADT form `C : arg -> (idx...) t`.
    /// `None` for the ordinary form `C of arg`.
    pub result: Option<TypeSyntax>,
    pub span: Span,
}

impl ConstructorSyntax {
    /// Type variables bound by the constructor's own signature, in order of
    /// first occurrence. Only the GADT form binds variables locally.
    pub fn existentials(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.result.is_some() {
            if let Some(arg) = &self.argument {
                arg.collect_vars(&mut out);
            }
            if let Some(res) = &self.result {
                res.collect_vars(&mut out);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeSyntax {
    Var(String),
    /// `_` inside a type: a fresh anonymous variable.
    Anon,
    App(String, Vec<TypeSyntax>),
    Arrow(Box<TypeSyntax>, Box<TypeSyntax>),
    Tuple(Vec<TypeSyntax>),
}

impl TypeSyntax {
    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            TypeSyntax::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            TypeSyntax::Anon => {}
            TypeSyntax::App(_, args) | TypeSyntax::Tuple(args) => {
                args.iter().for_each(|a| a.collect_vars(out))
            }
            TypeSyntax::Arrow(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatternSyntax {
    Wildcard,
    Var(String),
    Constr(String, Option<Box<PatternSyntax>>),
    Tuple(Vec<PatternSyntax>),
    Or(Box<PatternSyntax>, Box<PatternSyntax>),
}

impl PatternSyntax {
    /// Checks that no variable is bound twice outside of or-alternatives.
    /// Returns the first duplicated name.
    pub fn check_linear(&self) -> Result<BTreeSet<String>, String> {
        match self {
            PatternSyntax::Wildcard => Ok(BTreeSet::new()),
            PatternSyntax::Var(v) => Ok(BTreeSet::from([v.clone()])),
            PatternSyntax::Constr(_, None) => Ok(BTreeSet::new()),
            PatternSyntax::Constr(_, Some(p)) => p.check_linear(),
            PatternSyntax::Tuple(ps) => {
                let mut bound = BTreeSet::new();
                for p in ps {
                    for v in p.check_linear()? {
                        if !bound.insert(v.clone()) {
                            return Err(v);
                        }
                    }
                }
                Ok(bound)
            }
            PatternSyntax::Or(a, b) => {
                let mut bound = a.check_linear()?;
                bound.extend(b.check_linear()?);
                Ok(bound)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArmKind {
    Concrete,
    /// `pat -> .`
    Refutation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArmSyntax {
    pub pattern: PatternSyntax,
    pub kind: ArmKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchCheckSyntax {
    pub scrutinee: TypeSyntax,
    pub arms: Vec<ArmSyntax>,
    pub span: Span,
}

impl SurfaceProgram {
    /// Resets every source position, so that two programs can be compared
    /// structurally.
    pub fn clear_spans(&mut self) {
        for d in &mut self.decls {
            d.span = Span::default();
            if let DeclBody::Variant(cs) = &mut d.body {
                cs.iter_mut().for_each(|c| c.span = Span::default());
            }
        }
        for c in &mut self.checks {
            c.span = Span::default();
            c.arms.iter_mut().for_each(|a| a.span = Span::default());
        }
    }
}

impl fmt::Display for SurfaceProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.decls {
            writeln!(f, "{d}")?;
        }
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Display for TypeDeclSyntax {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("type ")?;
        let param = |p: &Option<String>| match p {
            Some(v) => format!("'{v}"),
            None => "_".to_string(),
        };
        match self.params.len() {
            0 => {}
            1 => write!(f, "{} ", param(&self.params[0]))?,
            _ => {
                let ps: Vec<_> = self.params.iter().map(param).collect();
                write!(f, "({}) ", ps.join(", "))?
            }
        }
        f.write_str(&self.name)?;
        match &self.body {
            DeclBody::Abstract => Ok(()),
            DeclBody::Variant(cs) if cs.is_empty() => f.write_str(" = |"),
            DeclBody::Variant(cs) => {
                f.write_str(" =")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" |")?;
                    }
                    write!(f, " {}", c.name)?;
                    match (&c.argument, &c.result) {
                        (None, None) => {}
                        (Some(a), None) => write!(f, " of {}", print_type(a))?,
                        (None, Some(r)) => write!(f, " : {}", print_type(r))?,
                        (Some(a), Some(r)) => {
                            let sig = TypeSyntax::Arrow(Box::new(a.clone()), Box::new(r.clone()));
                            write!(f, " : {}", print_type(&sig))?
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for MatchCheckSyntax {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "check {} with", print_type(&self.scrutinee))?;
        for arm in &self.arms {
            let body = match arm.kind {
                ArmKind::Concrete => "ok",
                ArmKind::Refutation => ".",
            };
            write!(f, " | {} -> {}", print_pattern(&arm.pattern), body)?;
        }
        Ok(())
    }
}
