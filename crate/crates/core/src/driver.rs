//! Per-match checking: unused cases, refutation cases and exhaustiveness.
//!
//! For each arm, the values it matches but no earlier arm does (its
//! residual) are computed on the pattern matrix and then tested for
//! emptiness with the typed search, splitting wildcards once. A concrete
//! arm with an empty residual is unused; a refutation arm with a nonempty
//! one is an error. Finally the residual of a virtual trailing `_` gives
//! the missing cases, each of which survives only if it types.

use std::fmt;

use thiserror::Error;

use crate::matrix::{residual, Pat, PatternError, PatternMatrix};
use crate::search::{SearchMode, SearchOutcome, SearchStats, Searcher, SplitPolicy};
use crate::syntax::{parse_program, ArmKind, MatchCheckSyntax, Span, SyntaxError};
use crate::tycore::{Env, EnvError, Session, Type};

/// Declarations available to every program unless replaced.
pub const DEFAULT_PRELUDE: &str = include_str!("../prelude.gml");

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Config {
    /// Policy for the final exhaustiveness query. `None` splits once for
    /// single-arm matches and never otherwise.
    pub exhaustiveness_policy: Option<SplitPolicy>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagnosticKind {
    /// `witness` is the or-pattern of the missing cases that type.
    NonExhaustive {
        witness: String,
    },
    /// `suggest_refutation` is set when only typing proves the arm unused.
    UnreachableCase {
        arm: usize,
        suggest_refutation: bool,
    },
    RefutationFailed {
        arm: usize,
        witness: String,
    },
    TypeError {
        message: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub span: Span,
}

impl Diagnostic {
    pub fn severity(&self) -> Severity {
        match self.kind {
            DiagnosticKind::NonExhaustive { .. } | DiagnosticKind::UnreachableCase { .. } => {
                Severity::Warning
            }
            DiagnosticKind::RefutationFailed { .. } | DiagnosticKind::TypeError { .. } => {
                Severity::Error
            }
        }
    }

    /// Stable short name of the diagnostic kind.
    pub fn code(&self) -> &'static str {
        match self.kind {
            DiagnosticKind::NonExhaustive { .. } => "non-exhaustive",
            DiagnosticKind::UnreachableCase { .. } => "unreachable",
            DiagnosticKind::RefutationFailed { .. } => "refutation-failed",
            DiagnosticKind::TypeError { .. } => "type-error",
        }
    }

    /// Message text in the style of the OCaml compiler.
    pub fn ocaml_message(&self) -> String {
        match &self.kind {
            DiagnosticKind::NonExhaustive { witness } => format!(
                "Warning 8: this pattern-matching is not exhaustive.\n\
                 Here is an example of a value that is not matched:\n{witness}"
            ),
            DiagnosticKind::UnreachableCase {
                suggest_refutation: true,
                ..
            } => "Warning 56: this match case is unreachable.\n\
                  Consider replacing it with a refutation case '<pat> -> .'"
                .to_string(),
            DiagnosticKind::UnreachableCase { .. } => {
                "Warning 11: this match case is unused.".to_string()
            }
            DiagnosticKind::RefutationFailed { witness, .. } => format!(
                "Error: This match case could not be refuted.\n\
                 Here is an example of a value that would reach it: {witness}"
            ),
            DiagnosticKind::TypeError { message } => format!("Error: {message}"),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity() {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{}: {sev}: ", self.span)?;
        match &self.kind {
            DiagnosticKind::NonExhaustive { witness } => {
                write!(f, "match is not exhaustive; unmatched: {witness}")
            }
            DiagnosticKind::UnreachableCase {
                arm,
                suggest_refutation,
            } => {
                write!(f, "case {} is unreachable", arm + 1)?;
                if *suggest_refutation {
                    write!(f, "; it can be written as a refutation case `-> .`")?;
                }
                Ok(())
            }
            DiagnosticKind::RefutationFailed { arm, witness } => {
                write!(f, "refutation case {} is reachable by {witness}", arm + 1)
            }
            DiagnosticKind::TypeError { message } => write!(f, "{message}"),
        }
    }
}

/// Which step of the algorithm issued a query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QueryRole {
    Arm(usize),
    Missing,
}

/// One emptiness query and its answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryRecord {
    pub role: QueryRole,
    pub pattern: Pat,
    pub ty: Type,
    pub policy: SplitPolicy,
    pub outcome: SearchOutcome,
}

#[derive(Clone, Debug, Default)]
pub struct MatchReport {
    pub diagnostics: Vec<Diagnostic>,
    pub queries: Vec<QueryRecord>,
    pub stats: SearchStats,
    /// Scrutinee type, absent if it failed to lower.
    pub scrutinee: Option<Type>,
    /// Variable store the recorded types live in.
    pub session: Session,
    /// Lowered arm patterns.
    pub arms: Vec<Pat>,
}

/// Checks one match against `env`.
pub fn check_match(req: &MatchCheckSyntax, env: &Env, config: &Config) -> MatchReport {
    let mut report = MatchReport::default();
    let type_error = |span, message: String| Diagnostic {
        kind: DiagnosticKind::TypeError { message },
        span,
    };
    let scrut = match env.lower_open_type(&req.scrutinee, req.span, &mut report.session) {
        Ok(t) => t,
        Err(e) => {
            report
                .diagnostics
                .push(type_error(req.span, env_message(&e)));
            return report;
        }
    };
    report.scrutinee = Some(scrut.clone());
    let mut searcher = Searcher::new(env);

    for arm in &req.arms {
        let p = match Pat::from_syntax(env, &arm.pattern) {
            Ok(p) => p,
            Err(e) => {
                report
                    .diagnostics
                    .push(type_error(arm.span, pattern_message(&e)));
                continue;
            }
        };
        let typed = searcher.check(&mut report.session, &p, &scrut, SearchMode::TypeOnly);
        if typed.is_empty() {
            let msg = format!(
                "pattern {} does not match values of type {}",
                env.show_pat(&p),
                env.show_type(&report.session.zonk(&scrut))
            );
            report.diagnostics.push(type_error(arm.span, msg));
        }
        report.arms.push(p);
    }
    if !report.diagnostics.is_empty() {
        report.stats = searcher.stats();
        return report;
    }

    let mut previous = PatternMatrix::new(1);
    for (i, (arm, p)) in req.arms.iter().zip(&report.arms).enumerate() {
        let rows = residual(env, std::slice::from_ref(p), &previous);
        let outcome = match Pat::or_of(rows.into_iter().map(|mut r| r.remove(0))) {
            None => None,
            Some(pattern) => {
                let policy = SplitPolicy::Once;
                let outcome = searcher.check(
                    &mut report.session,
                    &pattern,
                    &scrut,
                    SearchMode::Check(policy),
                );
                report.queries.push(QueryRecord {
                    role: QueryRole::Arm(i),
                    pattern,
                    ty: scrut.clone(),
                    policy,
                    outcome: outcome.clone(),
                });
                Some(outcome)
            }
        };
        match (arm.kind, outcome) {
            (ArmKind::Refutation, Some(SearchOutcome::Inhabited(w))) => {
                report.diagnostics.push(Diagnostic {
                    kind: DiagnosticKind::RefutationFailed {
                        arm: i,
                        witness: env.show_pat(&w),
                    },
                    span: arm.span,
                })
            }
            (ArmKind::Concrete, None | Some(SearchOutcome::Empty)) => {
                report.diagnostics.push(Diagnostic {
                    kind: DiagnosticKind::UnreachableCase {
                        arm: i,
                        suggest_refutation: outcome_was_typed(&report.queries, i),
                    },
                    span: arm.span,
                })
            }
            _ => {}
        }
        previous.push(vec![p.clone()]);
    }

    let policy = config
        .exhaustiveness_policy
        .unwrap_or(if req.arms.len() == 1 {
            SplitPolicy::Once
        } else {
            SplitPolicy::Never
        });
    let mut survivors = Vec::new();
    for mut row in residual(env, &[Pat::Wild], &previous) {
        let pattern = row.remove(0);
        let outcome = searcher.check(
            &mut report.session,
            &pattern,
            &scrut,
            SearchMode::Check(policy),
        );
        if let SearchOutcome::Inhabited(w) = &outcome {
            survivors.push(w.clone());
        }
        report.queries.push(QueryRecord {
            role: QueryRole::Missing,
            pattern,
            ty: scrut.clone(),
            policy,
            outcome,
        });
    }
    if let Some(w) = Pat::or_of(survivors) {
        report.diagnostics.push(Diagnostic {
            kind: DiagnosticKind::NonExhaustive {
                witness: env.show_pat(&w),
            },
            span: req.span,
        });
    }
    report.stats = searcher.stats();
    report
}

/// An arm's emptiness needed typing iff a search query was issued for it.
fn outcome_was_typed(queries: &[QueryRecord], arm: usize) -> bool {
    queries.iter().any(|q| q.role == QueryRole::Arm(arm))
}

fn env_message(e: &EnvError) -> String {
    let s = e.to_string();
    match s.split_once(": ") {
        Some((_, rest)) => rest.to_string(),
        None => s,
    }
}

fn pattern_message(e: &PatternError) -> String {
    e.to_string()
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ProgramError {
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
    #[error("{0}")]
    Env(#[from] EnvError),
    #[error("prelude: {0}")]
    Prelude(SyntaxError),
}

#[derive(Clone, Debug)]
pub struct ProgramReport {
    pub env: Env,
    pub matches: Vec<MatchReport>,
}

impl ProgramReport {
    pub fn diagnostics(&self) -> impl Iterator<Item = &Diagnostic> {
        self.matches.iter().flat_map(|m| &m.diagnostics)
    }

    pub fn max_severity(&self) -> Option<Severity> {
        self.diagnostics().map(Diagnostic::severity).max()
    }
}

/// Builds the environment from `prelude` followed by the program's own
/// declarations.
pub fn build_env(prelude: &str, src: &str) -> Result<(Env, Vec<MatchCheckSyntax>), ProgramError> {
    let pre = parse_program(prelude).map_err(ProgramError::Prelude)?;
    let prog = parse_program(src)?;
    let mut env = Env::new();
    let decls: Vec<_> = pre.decls.into_iter().chain(prog.decls).collect();
    env.declare(&decls)?;
    Ok((env, prog.checks))
}

/// Parses `src` and checks each of its matches in order.
pub fn check_program(
    src: &str,
    prelude: &str,
    config: &Config,
) -> Result<ProgramReport, ProgramError> {
    let (env, checks) = build_env(prelude, src)?;
    let matches = checks
        .iter()
        .map(|c| check_match(c, &env, config))
        .collect();
    Ok(ProgramReport { env, matches })
}
