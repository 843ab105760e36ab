use std::collections::HashMap;

use thiserror::Error;

use super::lexer::{tokenize, Tok};
use super::*;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("{span}: unexpected character `{ch}`")]
    BadChar { span: Span, ch: char },
    #[error("{span}: expected {expected}, found {found}")]
    Unexpected {
        span: Span,
        expected: String,
        found: String,
    },
    #[error("{span}: variable `{name}` is bound more than once in this pattern")]
    NonLinear { span: Span, name: String },
    #[error("{span}: type `{name}` is declared more than once")]
    DuplicateType { span: Span, name: String },
    #[error("{span}: constructor `{name}` is declared more than once")]
    DuplicateConstructor { span: Span, name: String },
    #[error("{span}: constructor `{ctor}` must return `{ty}` applied to {arity} argument(s)")]
    BadResult {
        span: Span,
        ctor: String,
        ty: String,
        arity: usize,
    },
    #[error("{span}: a match check needs at least one case")]
    EmptyMatch { span: Span },
}

impl SyntaxError {
    pub fn span(&self) -> Span {
        match self {
            SyntaxError::BadChar { span, .. }
            | SyntaxError::Unexpected { span, .. }
            | SyntaxError::NonLinear { span, .. }
            | SyntaxError::DuplicateType { span, .. }
            | SyntaxError::DuplicateConstructor { span, .. }
            | SyntaxError::BadResult { span, .. }
            | SyntaxError::EmptyMatch { span } => *span,
        }
    }
}

type PResult<T> = Result<T, SyntaxError>;

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

/// Parses a whole `.gml` program.
pub fn parse_program(text: &str) -> PResult<SurfaceProgram> {
    let mut p = Parser::new(text)?;
    let prog = p.program()?;
    validate_names(&prog)?;
    Ok(prog)
}

/// Parses a single type expression, e.g. `(zero succ, zero, zero) plus`.
pub fn parse_type(text: &str) -> PResult<TypeSyntax> {
    let mut p = Parser::new(text)?;
    let ty = p.ty()?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(ty)
}

fn validate_names(prog: &SurfaceProgram) -> PResult<()> {
    let mut types = HashMap::new();
    let mut ctors = HashMap::new();
    for d in &prog.decls {
        if types.insert(d.name.as_str(), d.span).is_some() {
            return Err(SyntaxError::DuplicateType {
                span: d.span,
                name: d.name.clone(),
            });
        }
        if let DeclBody::Variant(cs) = &d.body {
            for c in cs {
                if ctors.insert(c.name.as_str(), c.span).is_some() {
                    return Err(SyntaxError::DuplicateConstructor {
                        span: c.span,
                        name: c.name.clone(),
                    });
                }
            }
        }
    }
    Ok(())
}

impl Parser {
    fn new(text: &str) -> PResult<Self> {
        let toks = tokenize(text).map_err(|e| SyntaxError::BadChar {
            span: e.span,
            ch: e.ch,
        })?;
        Ok(Parser { toks, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected<T>(&self, expected: &str) -> PResult<T> {
        Err(SyntaxError::Unexpected {
            span: self.span(),
            expected: expected.to_string(),
            found: self.peek().describe(),
        })
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> PResult<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.unexpected(expected)
        }
    }

    fn ident(&mut self, expected: &str) -> PResult<String> {
        match self.peek() {
            Tok::Ident(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => self.unexpected(expected),
        }
    }

    fn program(&mut self) -> PResult<SurfaceProgram> {
        let mut prog = SurfaceProgram::default();
        loop {
            match self.peek() {
                Tok::KwType => {
                    self.bump();
                    prog.decls.push(self.decl()?);
                    while self.eat(&Tok::KwAnd) {
                        prog.decls.push(self.decl()?);
                    }
                }
                Tok::KwCheck => prog.checks.push(self.check()?),
                Tok::Eof => return Ok(prog),
                _ => return self.unexpected("`type` or `check`"),
            }
        }
    }

    fn decl(&mut self) -> PResult<TypeDeclSyntax> {
        let span = self.span();
        let params = self.decl_params()?;
        let name = self.ident("a type name")?;
        let body = if self.eat(&Tok::Equals) {
            self.eat(&Tok::Pipe);
            let mut ctors = Vec::new();
            if matches!(self.peek(), Tok::UIdent(_)) {
                ctors.push(self.constructor(&name, params.len())?);
                while self.eat(&Tok::Pipe) {
                    ctors.push(self.constructor(&name, params.len())?);
                }
            }
            DeclBody::Variant(ctors)
        } else {
            DeclBody::Abstract
        };
        Ok(TypeDeclSyntax {
            name,
            params,
            body,
            span,
        })
    }

    fn decl_param(&mut self) -> PResult<Option<String>> {
        match self.bump() {
            Tok::Underscore => Ok(None),
            Tok::TyVar(v) => Ok(Some(v)),
            _ => {
                self.pos -= 1;
                self.unexpected("a type parameter")
            }
        }
    }

    fn decl_params(&mut self) -> PResult<Vec<Option<String>>> {
        match self.peek() {
            Tok::Underscore | Tok::TyVar(_) => Ok(vec![self.decl_param()?]),
            Tok::LParen => {
                self.bump();
                let mut ps = vec![self.decl_param()?];
                while self.eat(&Tok::Comma) {
                    ps.push(self.decl_param()?);
                }
                self.expect(Tok::RParen, "`)`")?;
                Ok(ps)
            }
            _ => Ok(Vec::new()),
        }
    }

    fn constructor(&mut self, owner: &str, arity: usize) -> PResult<ConstructorSyntax> {
        let span = self.span();
        let name = match self.bump() {
            Tok::UIdent(s) => s,
            _ => {
                self.pos -= 1;
                return self.unexpected("a constructor name");
            }
        };
        let (argument, result) = if self.eat(&Tok::KwOf) {
            (Some(self.ty()?), None)
        } else if self.eat(&Tok::Colon) {
            let res_span = self.span();
            let (arg, res) = match self.ty()? {
                TypeSyntax::Arrow(a, r) => (Some(*a), *r),
                other => (None, other),
            };
            let ok = matches!(&res, TypeSyntax::App(h, args) if h == owner && args.len() == arity);
            if !ok {
                return Err(SyntaxError::BadResult {
                    span: res_span,
                    ctor: name,
                    ty: owner.to_string(),
                    arity,
                });
            }
            (arg, Some(res))
        } else {
            (None, None)
        };
        Ok(ConstructorSyntax {
            name,
            argument,
            result,
            span,
        })
    }

    fn check(&mut self) -> PResult<MatchCheckSyntax> {
        let span = self.span();
        self.expect(Tok::KwCheck, "`check`")?;
        let scrutinee = self.ty()?;
        self.expect(Tok::KwWith, "`with`")?;
        let mut arms = Vec::new();
        let leading = self.eat(&Tok::Pipe);
        if !leading && !starts_pattern(self.peek()) {
            return Err(SyntaxError::EmptyMatch { span });
        }
        arms.push(self.arm()?);
        while self.eat(&Tok::Pipe) {
            arms.push(self.arm()?);
        }
        Ok(MatchCheckSyntax {
            scrutinee,
            arms,
            span,
        })
    }

    fn arm(&mut self) -> PResult<ArmSyntax> {
        let span = self.span();
        let pattern = self.pattern()?;
        if let Err(name) = pattern.check_linear() {
            return Err(SyntaxError::NonLinear { span, name });
        }
        self.expect(Tok::Arrow, "`->`")?;
        let kind = match self.peek() {
            Tok::Dot => ArmKind::Refutation,
            Tok::Ident(_) | Tok::UIdent(_) => ArmKind::Concrete,
            _ => return self.unexpected("a case body or `.`"),
        };
        self.bump();
        Ok(ArmSyntax {
            pattern,
            kind,
            span,
        })
    }

    // pattern := tuple ('|' tuple)*
    fn pattern(&mut self) -> PResult<PatternSyntax> {
        let first = self.tuple_pattern()?;
        if self.peek() == &Tok::Pipe && starts_pattern(&self.toks[self.pos + 1].0) {
            self.bump();
            let rest = self.pattern()?;
            Ok(PatternSyntax::Or(Box::new(first), Box::new(rest)))
        } else {
            Ok(first)
        }
    }

    fn tuple_pattern(&mut self) -> PResult<PatternSyntax> {
        let first = self.app_pattern()?;
        if self.peek() != &Tok::Comma {
            return Ok(first);
        }
        let mut items = vec![first];
        while self.eat(&Tok::Comma) {
            items.push(self.app_pattern()?);
        }
        Ok(PatternSyntax::Tuple(items))
    }

    fn app_pattern(&mut self) -> PResult<PatternSyntax> {
        if let Tok::UIdent(name) = self.peek() {
            let name = name.clone();
            self.bump();
            let arg = if starts_pattern(self.peek()) {
                Some(Box::new(self.app_pattern()?))
            } else {
                None
            };
            return Ok(PatternSyntax::Constr(name, arg));
        }
        self.atom_pattern()
    }

    fn atom_pattern(&mut self) -> PResult<PatternSyntax> {
        match self.peek().clone() {
            Tok::Underscore => {
                self.bump();
                Ok(PatternSyntax::Wildcard)
            }
            Tok::Ident(v) => {
                self.bump();
                Ok(PatternSyntax::Var(v))
            }
            Tok::UIdent(name) => {
                self.bump();
                Ok(PatternSyntax::Constr(name, None))
            }
            Tok::LParen => {
                self.bump();
                let p = self.pattern()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(p)
            }
            _ => self.unexpected("a pattern"),
        }
    }

    // ty := prod ('->' ty)?
    fn ty(&mut self) -> PResult<TypeSyntax> {
        let lhs = self.product_type()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.ty()?;
            Ok(TypeSyntax::Arrow(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn product_type(&mut self) -> PResult<TypeSyntax> {
        let first = self.app_type()?;
        if self.peek() != &Tok::Star {
            return Ok(first);
        }
        let mut items = vec![first];
        while self.eat(&Tok::Star) {
            items.push(self.app_type()?);
        }
        Ok(TypeSyntax::Tuple(items))
    }

    fn app_type(&mut self) -> PResult<TypeSyntax> {
        let mut args = self.atom_type()?;
        while let Tok::Ident(name) = self.peek().clone() {
            self.bump();
            args = vec![TypeSyntax::App(name, args)];
        }
        match args.len() {
            1 => Ok(args.pop().unwrap()),
            _ => self.unexpected("a type constructor after a parenthesized argument list"),
        }
    }

    /// Returns an argument list: a single type, or several for `(t1, t2) name`.
    fn atom_type(&mut self) -> PResult<Vec<TypeSyntax>> {
        match self.peek().clone() {
            Tok::TyVar(v) => {
                self.bump();
                Ok(vec![TypeSyntax::Var(v)])
            }
            Tok::Underscore => {
                self.bump();
                Ok(vec![TypeSyntax::Anon])
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(vec![TypeSyntax::App(name, Vec::new())])
            }
            Tok::LParen => {
                self.bump();
                let mut items = vec![self.ty()?];
                while self.eat(&Tok::Comma) {
                    items.push(self.ty()?);
                }
                self.expect(Tok::RParen, "`)`")?;
                Ok(items)
            }
            _ => self.unexpected("a type"),
        }
    }
}

fn starts_pattern(t: &Tok) -> bool {
    matches!(
        t,
        Tok::Underscore | Tok::Ident(_) | Tok::UIdent(_) | Tok::LParen
    )
}
