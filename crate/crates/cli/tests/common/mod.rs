//! Helpers shared by the integration tests: corpus access, a generator of
//! random well-formed programs, and a brute-force value enumerator.

#![allow(dead_code)]

use std::path::PathBuf;

use gadtcheck::matrix::Value;
use gadtcheck::tycore::{DeclKind, Env, Session, Type, UnifyMode};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus_file(name: &str) -> PathBuf {
    corpus_dir().join(format!("{name}.gml"))
}

pub fn corpus_source(name: &str) -> String {
    std::fs::read_to_string(corpus_file(name)).unwrap()
}

/// Every corpus program, by file stem, in name order.
pub fn corpus() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "gml"))
        .map(|p| {
            let stem = p.file_stem().unwrap().to_string_lossy().into_owned();
            (stem, std::fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    out
}

#[derive(Clone, Debug)]
enum GenTy {
    Atom(&'static str),
    Var(&'static str),
    Succ(Box<GenTy>),
    App(usize, Vec<GenTy>),
}

impl GenTy {
    fn show(&self, names: &[String]) -> String {
        match self {
            GenTy::Atom(a) => a.to_string(),
            GenTy::Var(v) => format!("'{v}"),
            GenTy::Succ(t) => format!("{} s", t.show(names)),
            GenTy::App(j, args) => match args.len() {
                0 => names[*j].clone(),
                1 => format!("{} {}", args[0].show(names), names[*j]),
                _ => {
                    let a: Vec<String> = args.iter().map(|t| t.show(names)).collect();
                    format!("({}) {}", a.join(", "), names[*j])
                }
            },
        }
    }
}

struct GenCtor {
    name: String,
    args: Vec<GenTy>,
}

struct GenDecl {
    arity: usize,
    ctors: Vec<GenCtor>,
}

/// Fixed declarations every generated program starts with: type-level
/// naturals and an abstract type.
const MARKERS: &str = "type z = Z\ntype _ s = S\ntype k\n";

fn index_type<R: Rng>(rng: &mut R, vars: &[&'static str], depth: u32) -> GenTy {
    match rng.gen_range(0..8) {
        0 => GenTy::Atom("int"),
        1 => GenTy::Atom("bool"),
        2 => GenTy::Atom("z"),
        3 => GenTy::Atom("k"),
        4 if depth > 0 => GenTy::Succ(Box::new(index_type(rng, vars, depth - 1))),
        _ if !vars.is_empty() => GenTy::Var(vars.choose(rng).unwrap()),
        _ => GenTy::Atom("char"),
    }
}

/// A random program: at most four declarations of at most three
/// constructors and two index positions each, followed by a few checks.
pub fn random_program<R: Rng>(rng: &mut R) -> String {
    let n = rng.gen_range(1..=4);
    let names: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
    let arities: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
    let mut decls = Vec::new();
    let mut src = String::from(MARKERS);
    for i in 0..n {
        let gadt_style = arities[i] > 0 && rng.gen_bool(0.7);
        let params: Vec<&'static str> = ["p", "q"][..arities[i]].to_vec();
        let nctors = rng.gen_range(0..=3);
        let mut ctors = Vec::new();
        let mut lines = Vec::new();
        for k in 0..nctors {
            let scope: Vec<&'static str> = if gadt_style {
                vec!["a", "b"]
            } else {
                params.clone()
            };
            let nargs = rng.gen_range(0..=2);
            let args: Vec<GenTy> = (0..nargs)
                .map(|_| {
                    if rng.gen_bool(0.6) {
                        let j = rng.gen_range(0..n);
                        GenTy::App(
                            j,
                            (0..arities[j])
                                .map(|_| index_type(rng, &scope, 1))
                                .collect(),
                        )
                    } else {
                        index_type(rng, &scope, 1)
                    }
                })
                .collect();
            let name = format!("C{i}x{k}");
            let arg_text: Vec<String> = args.iter().map(|t| paren(t, &names)).collect();
            let line = if gadt_style {
                let result: Vec<GenTy> = (0..arities[i])
                    .map(|_| index_type(rng, &scope, 1))
                    .collect();
                let res = GenTy::App(i, result).show(&names);
                if args.is_empty() {
                    format!("{name} : {res}")
                } else {
                    format!("{name} : {} -> {res}", arg_text.join(" * "))
                }
            } else if args.is_empty() {
                name.clone()
            } else {
                format!("{name} of {}", arg_text.join(" * "))
            };
            lines.push(line);
            ctors.push(GenCtor { name, args });
        }
        let head = match (arities[i], gadt_style) {
            (0, _) => names[i].clone(),
            (1, true) => format!("_ {}", names[i]),
            (_, true) => format!("(_, _) {}", names[i]),
            (1, false) => format!("'p {}", names[i]),
            (_, false) => format!("('p, 'q) {}", names[i]),
        };
        let kw = if i == 0 { "type" } else { "and" };
        if lines.is_empty() {
            src += &format!("{kw} {head} = |\n");
        } else {
            src += &format!("{kw} {head} = {}\n", lines.join(" | "));
        }
        decls.push(GenDecl {
            arity: arities[i],
            ctors,
        });
    }
    for _ in 0..rng.gen_range(1..=3) {
        let i = rng.gen_range(0..n);
        let scrut = GenTy::App(
            i,
            (0..arities[i])
                .map(|_| index_type(rng, &["x", "y"], 1))
                .collect(),
        );
        src += &format!("check {} with\n", scrut.show(&names));
        let mut arms = Vec::new();
        for c in &decls[i].ctors {
            if rng.gen_bool(0.6) {
                arms.push(ctor_pattern(rng, c, &decls, 1));
            }
        }
        if arms.is_empty() || rng.gen_bool(0.2) {
            arms.push("_".into());
        }
        for (a, p) in arms.iter().enumerate() {
            let rhs = if a + 1 == arms.len() && rng.gen_bool(0.3) {
                "."
            } else {
                "ok"
            };
            src += &format!("  | {p} -> {rhs}\n");
        }
    }
    src
}

fn paren(t: &GenTy, names: &[String]) -> String {
    t.show(names)
}

fn ctor_pattern<R: Rng>(rng: &mut R, c: &GenCtor, decls: &[GenDecl], depth: u32) -> String {
    let sub = |rng: &mut R, t: &GenTy| -> String {
        match t {
            GenTy::App(j, _) if depth > 0 && !decls[*j].ctors.is_empty() && rng.gen_bool(0.3) => {
                let d = decls[*j].ctors.choose(rng).unwrap();
                let p = ctor_pattern(rng, d, decls, depth - 1);
                if d.args.is_empty() {
                    p
                } else {
                    format!("({p})")
                }
            }
            _ => "_".into(),
        }
    };
    match c.args.len() {
        0 => c.name.clone(),
        1 => format!("{} {}", c.name, sub(rng, &c.args[0])),
        _ => {
            let parts: Vec<String> = c.args.iter().map(|t| sub(rng, t)).collect();
            format!("{} ({})", c.name, parts.join(", "))
        }
    }
}

/// Values of `t` up to nesting depth `depth`, ignoring GADT index
/// constraints that cannot be satisfied: a constructor whose result does
/// not unify is still generated, with an unconstrained argument type.
/// Returns `None` when more than `cap` values would be produced.
pub fn loose_values(
    env: &Env,
    s: &Session,
    t: &Type,
    depth: u32,
    cap: usize,
) -> Option<Vec<Value>> {
    let mut s = s.clone();
    loose(env, &mut s, t, depth, cap)
}

fn loose(env: &Env, s: &mut Session, t: &Type, depth: u32, cap: usize) -> Option<Vec<Value>> {
    let t = s.zonk(t);
    match &t {
        Type::Var(_) | Type::Arrow(..) => Some(vec![Value::Opaque]),
        Type::Tuple(ts) => {
            let mut acc = vec![Vec::new()];
            for c in ts {
                let vs = loose(env, s, c, depth, cap)?;
                if acc.len() * vs.len() > cap {
                    return None;
                }
                acc = acc
                    .into_iter()
                    .flat_map(|prefix| {
                        vs.iter().map(move |v| {
                            let mut p: Vec<Value> = prefix.clone();
                            p.push(v.clone());
                            p
                        })
                    })
                    .collect();
            }
            Some(acc.into_iter().map(Value::Tuple).collect())
        }
        Type::App(c, _) => match &env.decl(*c).kind {
            DeclKind::Builtin | DeclKind::Abstract => Some(vec![Value::Opaque]),
            DeclKind::Variant(_) => {
                if depth == 0 {
                    return Some(Vec::new());
                }
                let mut out = Vec::new();
                for k in env.ctor_ids(*c) {
                    let snap = s.save();
                    let arg = match s.instantiate_constructor(env, k, &t, UnifyMode::Strict) {
                        Ok(a) => a.map(|a| s.zonk(&a)),
                        Err(_) => {
                            let sig = env.ctor(k);
                            let fresh: Vec<Type> = sig.vars.iter().map(|_| s.fresh()).collect();
                            sig.argument.as_ref().map(|a| a.subst(&fresh))
                        }
                    };
                    match arg {
                        None => out.push(Value::Ctor(k, None)),
                        Some(a) => {
                            for v in loose(env, s, &a, depth - 1, cap)? {
                                out.push(Value::Ctor(k, Some(Box::new(v))));
                            }
                        }
                    }
                    s.restore(snap);
                    if out.len() > cap {
                        return None;
                    }
                }
                Some(out)
            }
        },
    }
}
