//! Type-free pattern matrix algorithms: residuals and complete sets of
//! missing patterns, built on the usual specialize/default decomposition.
//!
//! Constructor signatures come from the [`Env`] through each constructor's
//! owning declaration, so no type annotations are needed on the patterns.
//! Or-patterns are expanded eagerly; outputs never contain or-patterns.

use thiserror::Error;

use crate::syntax::PatternSyntax;
use crate::tycore::{CtorId, Env, TyCon};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pat {
    Wild,
    Var(String),
    Ctor(CtorId, Option<Box<Pat>>),
    Tuple(Vec<Pat>),
    Or(Box<Pat>, Box<Pat>),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("unknown constructor `{0}`")]
    UnknownConstructor(String),
    #[error("constructor `{0}` expects an argument")]
    MissingArgument(String),
    #[error("constructor `{0}` does not take an argument")]
    UnexpectedArgument(String),
}

impl Pat {
    pub fn from_syntax(env: &Env, p: &PatternSyntax) -> Result<Pat, PatternError> {
        Ok(match p {
            PatternSyntax::Wildcard => Pat::Wild,
            PatternSyntax::Var(v) => Pat::Var(v.clone()),
            PatternSyntax::Constr(name, arg) => {
                let c = env
                    .lookup_ctor(name)
                    .ok_or_else(|| PatternError::UnknownConstructor(name.clone()))?;
                let expects = env.ctor(c).argument.is_some();
                match (arg, expects) {
                    (Some(a), true) => Pat::Ctor(c, Some(Box::new(Pat::from_syntax(env, a)?))),
                    (None, false) => Pat::Ctor(c, None),
                    (None, true) => return Err(PatternError::MissingArgument(name.clone())),
                    (Some(_), false) => return Err(PatternError::UnexpectedArgument(name.clone())),
                }
            }
            PatternSyntax::Tuple(ps) => Pat::Tuple(
                ps.iter()
                    .map(|p| Pat::from_syntax(env, p))
                    .collect::<Result<_, _>>()?,
            ),
            PatternSyntax::Or(a, b) => Pat::Or(
                Box::new(Pat::from_syntax(env, a)?),
                Box::new(Pat::from_syntax(env, b)?),
            ),
        })
    }

    /// `C _` for a constructor with an argument, `C` otherwise.
    pub fn ctor_wild(env: &Env, c: CtorId) -> Pat {
        let arg = env.ctor(c).argument.as_ref().map(|_| Box::new(Pat::Wild));
        Pat::Ctor(c, arg)
    }

    /// Right-nested or-pattern of `alts`; `None` when empty.
    pub fn or_of(
        alts: impl IntoIterator<Item = Pat, IntoIter: DoubleEndedIterator>,
    ) -> Option<Pat> {
        alts.into_iter()
            .rev()
            .reduce(|acc, p| Pat::Or(Box::new(p), Box::new(acc)))
    }

    /// Top-level or-alternatives, left to right.
    pub fn alternatives(&self) -> Vec<&Pat> {
        match self {
            Pat::Or(a, b) => {
                let mut out = a.alternatives();
                out.extend(b.alternatives());
                out
            }
            p => vec![p],
        }
    }

    pub fn has_or(&self) -> bool {
        match self {
            Pat::Or(..) => true,
            Pat::Wild | Pat::Var(_) | Pat::Ctor(_, None) => false,
            Pat::Ctor(_, Some(a)) => a.has_or(),
            Pat::Tuple(ps) => ps.iter().any(Pat::has_or),
        }
    }

    pub fn is_wild(&self) -> bool {
        matches!(self, Pat::Wild | Pat::Var(_))
    }

    pub fn matches(&self, v: &Value) -> bool {
        match (self, v) {
            (Pat::Wild | Pat::Var(_), _) => true,
            (Pat::Or(a, b), v) => a.matches(v) || b.matches(v),
            (Pat::Ctor(c, arg), Value::Ctor(d, varg)) => {
                c == d
                    && match (arg, varg) {
                        (None, None) => true,
                        (Some(p), Some(v)) => p.matches(v),
                        _ => false,
                    }
            }
            (Pat::Tuple(ps), Value::Tuple(vs)) => {
                ps.len() == vs.len() && ps.iter().zip(vs).all(|(p, v)| p.matches(v))
            }
            _ => false,
        }
    }
}

/// A closed value. Values of base, function and otherwise opaque types are
/// represented by [`Value::Opaque`], matched only by wildcards.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Ctor(CtorId, Option<Box<Value>>),
    Tuple(Vec<Value>),
    Opaque,
}

impl Value {
    /// The value as a pattern, with opaque leaves shown as `_`.
    pub fn to_pat(&self) -> Pat {
        match self {
            Value::Ctor(c, arg) => Pat::Ctor(*c, arg.as_ref().map(|a| Box::new(a.to_pat()))),
            Value::Tuple(vs) => Pat::Tuple(vs.iter().map(Value::to_pat).collect()),
            Value::Opaque => Pat::Wild,
        }
    }
}

pub fn row_matches(row: &[Pat], values: &[Value]) -> bool {
    row.len() == values.len() && row.iter().zip(values).all(|(p, v)| p.matches(v))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PatternMatrix {
    width: usize,
    rows: Vec<Vec<Pat>>,
}

enum Column {
    Wild,
    Tuple(usize),
    Ctors(TyCon),
}

impl PatternMatrix {
    pub fn new(width: usize) -> PatternMatrix {
        PatternMatrix {
            width,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(width: usize, rows: Vec<Vec<Pat>>) -> PatternMatrix {
        assert!(
            rows.iter().all(|r| r.len() == width),
            "ragged pattern matrix"
        );
        PatternMatrix { width, rows }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rows(&self) -> &[Vec<Pat>] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn push(&mut self, row: Vec<Pat>) {
        assert_eq!(row.len(), self.width, "row width mismatch");
        self.rows.push(row);
    }

    /// Replaces rows whose head is an or-pattern by one row per alternative.
    fn expand_heads(&self) -> PatternMatrix {
        fn push_expanded(out: &mut Vec<Vec<Pat>>, head: &Pat, rest: &[Pat]) {
            match head {
                Pat::Or(a, b) => {
                    push_expanded(out, a, rest);
                    push_expanded(out, b, rest);
                }
                p => {
                    let mut row = Vec::with_capacity(rest.len() + 1);
                    row.push(p.clone());
                    row.extend_from_slice(rest);
                    out.push(row);
                }
            }
        }
        let mut rows = Vec::with_capacity(self.rows.len());
        for r in &self.rows {
            push_expanded(&mut rows, &r[0], &r[1..]);
        }
        PatternMatrix {
            width: self.width,
            rows,
        }
    }

    fn head_column(&self) -> Column {
        for r in &self.rows {
            match &r[0] {
                Pat::Ctor(c, _) => return Column::Ctors(c.ty),
                Pat::Tuple(ps) => return Column::Tuple(ps.len()),
                _ => {}
            }
        }
        Column::Wild
    }

    fn head_has_ctor(&self, c: CtorId) -> bool {
        self.rows
            .iter()
            .any(|r| matches!(&r[0], Pat::Ctor(d, _) if *d == c))
    }

    /// Rows whose head is `c` or a wildcard, with the head replaced by the
    /// constructor's argument (if it has one).
    pub fn specialize(&self, env: &Env, c: CtorId) -> PatternMatrix {
        let has_arg = env.ctor(c).argument.is_some();
        let width = self.width - 1 + usize::from(has_arg);
        let mut rows = Vec::new();
        for r in &self.expand_heads().rows {
            let mut row = Vec::with_capacity(width);
            match &r[0] {
                Pat::Ctor(d, arg) if *d == c => {
                    if has_arg {
                        row.push(arg.as_deref().cloned().unwrap_or(Pat::Wild));
                    }
                }
                p if p.is_wild() => {
                    if has_arg {
                        row.push(Pat::Wild);
                    }
                }
                _ => continue,
            }
            row.extend_from_slice(&r[1..]);
            rows.push(row);
        }
        PatternMatrix { width, rows }
    }

    /// Specialization by an `n`-tuple head.
    pub fn specialize_tuple(&self, n: usize) -> PatternMatrix {
        let width = self.width - 1 + n;
        let mut rows = Vec::new();
        for r in &self.expand_heads().rows {
            let mut row = Vec::with_capacity(width);
            match &r[0] {
                Pat::Tuple(ps) => row.extend(ps.iter().cloned()),
                p if p.is_wild() => row.extend(std::iter::repeat_n(Pat::Wild, n)),
                _ => continue,
            }
            row.extend_from_slice(&r[1..]);
            rows.push(row);
        }
        PatternMatrix { width, rows }
    }

    /// Rows with a wildcard head, without that column.
    pub fn default_matrix(&self) -> PatternMatrix {
        let rows = self
            .expand_heads()
            .rows
            .into_iter()
            .filter(|r| r[0].is_wild())
            .map(|r| r[1..].to_vec())
            .collect();
        PatternMatrix {
            width: self.width - 1,
            rows,
        }
    }
}

/// Pattern vectors covering exactly the values matched by `q` and by no row
/// of `previous`. The result vectors are pairwise disjoint and contain no
/// or-patterns. Constructors are enumerated in declaration order.
pub fn residual(env: &Env, q: &[Pat], previous: &PatternMatrix) -> Vec<Vec<Pat>> {
    assert_eq!(q.len(), previous.width(), "vector width mismatch");
    let mut out = Vec::new();
    residual_into(env, q, previous, &mut out);
    out
}

fn residual_into(env: &Env, q: &[Pat], m: &PatternMatrix, out: &mut Vec<Vec<Pat>>) {
    if m.is_empty() {
        out.extend(expand_or_free(q));
        return;
    }
    let Some((head, rest)) = q.split_first() else {
        return;
    };
    match head {
        Pat::Or(a, b) => {
            for alt in [a, b] {
                let mut v = vec![(**alt).clone()];
                v.extend_from_slice(rest);
                residual_into(env, &v, m, out);
            }
        }
        Pat::Ctor(c, arg) => {
            let mut sub = Vec::with_capacity(q.len());
            if let Some(a) = arg {
                sub.push((**a).clone());
            }
            sub.extend_from_slice(rest);
            let k = usize::from(arg.is_some());
            for mut v in residual(env, &sub, &m.specialize(env, *c)) {
                let tail = v.split_off(k);
                let rebuilt = Pat::Ctor(*c, v.pop().map(Box::new));
                out.push(std::iter::once(rebuilt).chain(tail).collect());
            }
        }
        Pat::Tuple(ps) => {
            let n = ps.len();
            let sub: Vec<Pat> = ps.iter().chain(rest).cloned().collect();
            for mut v in residual(env, &sub, &m.specialize_tuple(n)) {
                let tail = v.split_off(n);
                out.push(std::iter::once(Pat::Tuple(v)).chain(tail).collect());
            }
        }
        Pat::Wild | Pat::Var(_) => {
            let m = &m.expand_heads();
            residual_wild(env, head, rest, m, out)
        }
    }
}

fn residual_wild(env: &Env, head: &Pat, rest: &[Pat], m: &PatternMatrix, out: &mut Vec<Vec<Pat>>) {
    match m.head_column() {
        Column::Wild => {
            for v in residual(env, rest, &m.default_matrix()) {
                out.push(std::iter::once(head.clone()).chain(v).collect());
            }
        }
        Column::Tuple(n) => {
            let mut v = vec![Pat::Tuple(vec![Pat::Wild; n])];
            v.extend_from_slice(rest);
            residual_into(env, &v, m, out);
        }
        Column::Ctors(ty) => {
            let mut absent: Option<Vec<Vec<Pat>>> = None;
            for c in env.ctor_ids(ty) {
                if m.head_has_ctor(c) {
                    let mut v = vec![Pat::ctor_wild(env, c)];
                    v.extend_from_slice(rest);
                    residual_into(env, &v, m, out);
                } else {
                    let tails =
                        absent.get_or_insert_with(|| residual(env, rest, &m.default_matrix()));
                    for t in tails.iter() {
                        out.push(
                            std::iter::once(Pat::ctor_wild(env, c))
                                .chain(t.iter().cloned())
                                .collect(),
                        );
                    }
                }
            }
        }
    }
}

/// Expands or-patterns anywhere inside `q` into separate vectors.
fn expand_or_free(q: &[Pat]) -> Vec<Vec<Pat>> {
    let mut acc: Vec<Vec<Pat>> = vec![Vec::with_capacity(q.len())];
    for p in q {
        let alts = or_free_alternatives(p);
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                alts.iter().map(move |a| {
                    let mut v = prefix.clone();
                    v.push(a.clone());
                    v
                })
            })
            .collect();
    }
    acc
}

fn or_free_alternatives(p: &Pat) -> Vec<Pat> {
    match p {
        Pat::Wild | Pat::Var(_) | Pat::Ctor(_, None) => vec![p.clone()],
        Pat::Or(a, b) => {
            let mut out = or_free_alternatives(a);
            out.extend(or_free_alternatives(b));
            out
        }
        Pat::Ctor(c, Some(arg)) => or_free_alternatives(arg)
            .into_iter()
            .map(|a| Pat::Ctor(*c, Some(Box::new(a))))
            .collect(),
        Pat::Tuple(ps) => expand_or_free(ps).into_iter().map(Pat::Tuple).collect(),
    }
}

/// Complete set of missing pattern vectors for `m`: every value vector not
/// matched by a row of `m` is matched by exactly one of the results.
pub fn missing_patterns(env: &Env, m: &PatternMatrix) -> Vec<Vec<Pat>> {
    residual(env, &vec![Pat::Wild; m.width()], m)
}
