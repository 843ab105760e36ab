//! End-to-end acceptance checks. Prints one `PASS`/`FAIL` line per
//! criterion and exits non-zero if any fails.

mod common;

use std::time::{Duration, Instant};

use gadtcheck::driver::{check_program, Config, DiagnosticKind, MatchReport, DEFAULT_PRELUDE};
use gadtcheck::horn::{
    check_value, encode, sld_inhabited, sld_inhabited_matching, ResolutionResult,
};
use gadtcheck::matrix::{residual, Pat, PatternMatrix};
use gadtcheck::search::{SearchMode, SearchOutcome, Searcher, SplitPolicy};
use gadtcheck::syntax::{parse_program, parse_type, Span};
use gadtcheck::tycore::{Env, Session, Type, UnifyMode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("golden corpus verdicts", golden),
        ("oracle soundness sweep", oracle_sweep),
        ("matrix partition by brute force", partition),
        ("compatibility properties", compatibility),
        ("exponential stress", exponential),
        ("termination on the Turing machine", turing),
        ("policy monotonicity", monotonicity),
        ("trail purity", trail_purity),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("PASS {} {name} ({detail}; {secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn nonexhaustive(w: &str) -> DiagnosticKind {
    DiagnosticKind::NonExhaustive { witness: w.into() }
}

fn golden() -> Outcome {
    let unreachable = DiagnosticKind::UnreachableCase {
        arm: 1,
        suggest_refutation: true,
    };
    let expected: Vec<(&str, Vec<DiagnosticKind>)> = vec![
        ("f", vec![]),
        ("g1", vec![nonexhaustive("Bool")]),
        ("g2", vec![]),
        ("h", vec![]),
        ("h2", vec![]),
        ("h2_swapped", vec![]),
        ("cmp_f", vec![nonexhaustive("Eq")]),
        ("deep", vec![]),
        ("trivial", vec![]),
        ("easy", vec![]),
        ("inv_zero", vec![]),
        ("harder", vec![nonexhaustive("Some (PlusS _)")]),
        ("harder_prime", vec![]),
        ("deeper", vec![nonexhaustive("Some _")]),
        ("deeper_prime", vec![]),
        ("magic", vec![]),
        ("deep_prime", vec![unreachable]),
    ];
    for (name, want) in &expected {
        let r = check_program(
            &common::corpus_source(name),
            DEFAULT_PRELUDE,
            &Config::default(),
        )
        .map_err(|e| format!("{name}: {e}"))?;
        let got: Vec<DiagnosticKind> = r.diagnostics().map(|d| d.kind.clone()).collect();
        ensure(&got == want, || {
            format!("{name}: expected {want:?}, got {got:?}")
        })?;
    }
    let quoted = [
        (
            "g1",
            "Warning 8: this pattern-matching is not exhaustive.\n\
             Here is an example of a value that is not matched:\nBool\n",
        ),
        (
            "cmp_f",
            "Warning 8: this pattern-matching is not exhaustive.\n\
             Here is an example of a value that is not matched:\nEq\n",
        ),
        (
            "deep_prime",
            "Warning 56: this match case is unreachable.\n\
             Consider replacing it with a refutation case '<pat> -> .'\n",
        ),
    ];
    for (name, text) in quoted {
        let path = common::corpus_file(name);
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = gadtcheck_cli::run(
            [
                "gadtcheck",
                "check",
                "--ocaml-compat-messages",
                path.to_str().unwrap(),
            ],
            &mut out,
            &mut err,
        );
        let out = String::from_utf8(out).unwrap();
        ensure(code == 1, || format!("{name}: exit code {code}"))?;
        let body = out.split_once(":\n").map(|(_, b)| b).unwrap_or("");
        ensure(body == text, || format!("{name}: message {body:?}"))?;
    }
    Ok(format!("{} files, 3 quoted messages", expected.len()))
}

/// Emptiness claims to confirm with the oracle: the pattern, the type and
/// the session it lives in.
struct Claim {
    origin: String,
    pattern: Pat,
    ty: Type,
    session: Session,
}

fn empty_claims(origin: &str, env: &Env, reports: &[MatchReport]) -> Vec<Claim> {
    let mut out = Vec::new();
    for m in reports {
        for q in &m.queries {
            if q.outcome == SearchOutcome::Empty {
                out.push(Claim {
                    origin: origin.to_string(),
                    pattern: q.pattern.clone(),
                    ty: q.ty.clone(),
                    session: m.session.clone(),
                });
            }
        }
        // Direct queries: each constructor of the scrutinee's head, split
        // as far as the policies allow.
        let Some(scrut) = &m.scrutinee else { continue };
        let Type::App(c, _) = m.session.resolve(scrut) else {
            continue;
        };
        let mut pats: Vec<Pat> = env.ctor_ids(c).map(|k| Pat::ctor_wild(env, k)).collect();
        pats.push(Pat::Wild);
        for p in pats {
            for policy in [SplitPolicy::Once, SplitPolicy::Full { fuel: 64 }] {
                let mut s = m.session.clone();
                let o = Searcher::new(env).check(&mut s, &p, scrut, SearchMode::Check(policy));
                if o.is_empty() {
                    out.push(Claim {
                        origin: format!("{origin} ({policy:?})"),
                        pattern: p.clone(),
                        ty: scrut.clone(),
                        session: m.session.clone(),
                    });
                }
            }
        }
    }
    out
}

fn confirm(env: &Env, claims: &[Claim]) -> Result<(), String> {
    let clauses = encode(env);
    for c in claims {
        let ty = c.session.zonk(&c.ty);
        for depth in 1..=6 {
            if let ResolutionResult::Witness(v) =
                sld_inhabited_matching(env, &clauses, &ty, &c.pattern, depth)
            {
                return Err(format!(
                    "{}: {} at {} judged empty, but {} inhabits it",
                    c.origin,
                    env.show_pat(&c.pattern),
                    env.show_type(&ty),
                    env.show_pat(&v.to_pat())
                ));
            }
        }
    }
    Ok(())
}

fn oracle_sweep() -> Outcome {
    let mut claims = 0;
    for (name, src) in common::corpus() {
        let Ok(r) = check_program(&src, DEFAULT_PRELUDE, &Config::default()) else {
            continue;
        };
        let cs = empty_claims(&name, &r.env, &r.matches);
        confirm(&r.env, &cs)?;
        claims += cs.len();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut programs = 0;
    while programs < 200 {
        let src = common::random_program(&mut rng);
        let r = check_program(&src, DEFAULT_PRELUDE, &Config::default())
            .map_err(|e| format!("generated program rejected: {e}\n{src}"))?;
        programs += 1;
        let cs = empty_claims(&format!("random program {programs}"), &r.env, &r.matches);
        confirm(&r.env, &cs).map_err(|e| format!("{e}\n{src}"))?;
        claims += cs.len();
    }
    Ok(format!(
        "{claims} empty verdicts confirmed over the corpus and {programs} random programs"
    ))
}

fn partition() -> Outcome {
    let (mut types, mut values) = (0, 0);
    for (name, src) in common::corpus() {
        let Ok(r) = check_program(&src, DEFAULT_PRELUDE, &Config::default()) else {
            continue;
        };
        for m in &r.matches {
            let Some(scrut) = &m.scrutinee else { continue };
            if m.arms.is_empty() {
                continue;
            }
            let Some(vs) = common::loose_values(&r.env, &m.session, scrut, 3, 200_000) else {
                continue;
            };
            types += 1;
            let arms =
                PatternMatrix::from_rows(1, m.arms.iter().map(|p| vec![p.clone()]).collect());
            let missing = residual(&r.env, &[Pat::Wild], &arms);
            for v in &vs {
                values += 1;
                let by_arm = m.arms.iter().any(|p| p.matches(v));
                let by_missing = missing.iter().any(|row| row[0].matches(v));
                ensure(by_arm != by_missing, || {
                    format!(
                        "{name}: {} matched by arms: {by_arm}, by missing patterns: {by_missing}",
                        r.env.show_pat(&v.to_pat())
                    )
                })?;
            }
        }
    }
    Ok(format!("{values} values over {types} scrutinee types"))
}

const COMPAT_DECLS: &str = "type a\ntype b\ntype _ h\n\
                            type (_, _) cmp = Eq : ('a, 'a) cmp | Any : ('a, 'b) cmp\n\
                            type e1 = |\ntype e2 = |\n\
                            type 'a l = N | C of 'a * 'a l";

fn random_type<R: Rng>(rng: &mut R, env: &Env, s: &mut Session, vars: &[Type], depth: u32) -> Type {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return match rng.gen_range(0..9) {
            0 | 1 => vars[rng.gen_range(0..vars.len())].clone(),
            2 => Type::con(env.lookup_type("int").unwrap()),
            3 => Type::con(env.lookup_type("bool").unwrap()),
            4 => Type::con(env.lookup_type("a").unwrap()),
            5 => Type::con(env.lookup_type("b").unwrap()),
            6 => Type::con(env.lookup_type("e1").unwrap()),
            7 => Type::con(env.lookup_type("e2").unwrap()),
            _ => s.fresh(),
        };
    }
    let sub = |rng: &mut R, s: &mut Session| random_type(rng, env, s, vars, depth - 1);
    match rng.gen_range(0..5) {
        0 => Type::App(env.lookup_type("h").unwrap(), vec![sub(rng, s)]),
        1 => Type::App(
            env.lookup_type("cmp").unwrap(),
            vec![sub(rng, s), sub(rng, s)],
        ),
        2 => Type::App(env.lookup_type("l").unwrap(), vec![sub(rng, s)]),
        3 => Type::Arrow(Box::new(sub(rng, s)), Box::new(sub(rng, s))),
        _ => Type::Tuple(vec![sub(rng, s), sub(rng, s)]),
    }
}

fn compat_env() -> Env {
    let mut env = Env::new();
    env.declare(&parse_program(COMPAT_DECLS).unwrap().decls)
        .unwrap();
    env
}

fn compatibility() -> Outcome {
    let env = compat_env();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let mut s = Session::new();
    let vars: Vec<Type> = (0..3).map(|_| s.fresh()).collect();
    let mut compatible_pairs = 0;
    for _ in 0..1000 {
        let x = random_type(&mut rng, &env, &mut s, &vars, 3);
        // Half of the pairs are perturbed copies, so that both answers occur.
        let y = if rng.gen_bool(0.5) {
            x.clone()
        } else {
            random_type(&mut rng, &env, &mut s, &vars, 3)
        };
        ensure(env.compatible(&x, &x), || {
            format!("not reflexive on {}", env.show_type(&x))
        })?;
        let (xy, yx) = (env.compatible(&x, &y), env.compatible(&y, &x));
        ensure(xy == yx, || {
            format!(
                "not symmetric on {} and {}",
                env.show_type(&x),
                env.show_type(&y)
            )
        })?;
        compatible_pairs += xy as usize;
    }
    let ty = |n: &str| Type::con(env.lookup_type(n).unwrap());
    let (int, a, bool) = (ty("int"), ty("a"), ty("bool"));
    ensure(
        env.compatible(&int, &a) && env.compatible(&a, &bool) && !env.compatible(&int, &bool),
        || "the triple (int, a, bool) does not witness non-transitivity".into(),
    )?;
    Ok(format!(
        "1000 pairs, {compatible_pairs} compatible; int ~ a ~ bool but not int ~ bool"
    ))
}

fn exponential() -> Outcome {
    let start = Instant::now();
    let r = check_program(
        &common::corpus_source("exponential"),
        DEFAULT_PRELUDE,
        &Config::default(),
    )
    .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let m = &r.matches[0];
    ensure(m.diagnostics.is_empty(), || {
        format!("diagnostics: {:?}", m.diagnostics)
    })?;
    ensure(m.stats.leaves == 65536, || {
        format!("{} leaves", m.stats.leaves)
    })?;
    ensure(elapsed < Duration::from_secs(120), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "exhaustive, 65536 leaves, {:.3}s",
        elapsed.as_secs_f64()
    ))
}

/// Minimal proof for the machine of the Turing corpus file, found by the
/// resolver itself and checked independently below.
const TURING_WITNESS: &str =
    "Tm_ext_left (Tm_mv_left (Tr1, Tm_ext_left (Tm_mv_left (Tr3, Tm_fin))))";

fn turing() -> Outcome {
    let path = common::corpus_file("turing");
    let start = Instant::now();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = gadtcheck_cli::run(
        ["gadtcheck", "check", path.to_str().unwrap()],
        &mut out,
        &mut err,
    );
    let elapsed = start.elapsed();
    ensure(code <= 1, || format!("check exited with {code}"))?;
    ensure(elapsed < Duration::from_secs(5), || {
        format!("check took {elapsed:?}")
    })?;

    let (mut out, mut err) = (Vec::new(), Vec::new());
    let ty = "(s0, blank, endt, endt) eval";
    let code = gadtcheck_cli::run(
        [
            "gadtcheck",
            "oracle",
            path.to_str().unwrap(),
            "--type",
            ty,
            "--depth",
            "20",
        ],
        &mut out,
        &mut err,
    );
    let line = String::from_utf8(out).unwrap();
    ensure(code == 0, || format!("oracle exited with {code}"))?;
    ensure(line.trim() == format!("witness {TURING_WITNESS}"), || {
        format!("oracle said {line:?}")
    })?;

    // The witness is a genuine value, and nothing smaller exists.
    let src = common::corpus_source("turing");
    let (env, _) =
        gadtcheck::driver::build_env(DEFAULT_PRELUDE, &src).map_err(|e| e.to_string())?;
    let mut s = Session::new();
    let t = env
        .lower_open_type(&parse_type(ty).unwrap(), Span::default(), &mut s)
        .unwrap();
    let clauses = encode(&env);
    let ResolutionResult::Witness(v) = sld_inhabited(&env, &clauses, &t, 20) else {
        return Err("no witness".into());
    };
    ensure(check_value(&env, &s, &v, &t), || {
        "witness does not type".into()
    })?;
    let smaller = gadtcheck::horn::enumerate_values(&env, &s, &t, 6);
    ensure(smaller.is_empty(), || "a smaller value exists".into())?;
    ensure(
        gadtcheck::horn::enumerate_values(&env, &s, &t, 7) == vec![v],
        || "enumeration at size 7 disagrees".into(),
    )?;
    Ok(format!(
        "check {:.3}s, oracle depth 20: witness of size 7",
        elapsed.as_secs_f64()
    ))
}

fn monotonicity() -> Outcome {
    let mut checked = 0;
    let mut sources: Vec<(String, String)> = common::corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    for i in 0..100 {
        sources.push((
            format!("random program {i}"),
            common::random_program(&mut rng),
        ));
    }
    for (name, src) in sources {
        let Ok(r) = check_program(&src, DEFAULT_PRELUDE, &Config::default()) else {
            continue;
        };
        for m in &r.matches {
            for q in &m.queries {
                let mut verdicts = Vec::new();
                for policy in [
                    SplitPolicy::Never,
                    SplitPolicy::Once,
                    SplitPolicy::Full { fuel: 4096 },
                ] {
                    let mut s = m.session.clone();
                    let o = Searcher::new(&r.env).check(
                        &mut s,
                        &q.pattern,
                        &q.ty,
                        SearchMode::Check(policy),
                    );
                    verdicts.push(o.is_empty());
                }
                checked += 1;
                ensure(
                    (!verdicts[0] || verdicts[1]) && (!verdicts[1] || verdicts[2]),
                    || {
                        format!(
                            "{name}: {} empty under Never/Once/Full = {verdicts:?}",
                            r.env.show_pat(&q.pattern)
                        )
                    },
                )?;
            }
        }
    }
    Ok(format!("{checked} queries"))
}

fn trail_purity() -> Outcome {
    let env = compat_env();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let mut s = Session::new();
    let vars: Vec<Type> = (0..6).map(|_| s.fresh()).collect();
    let initial = s.clone();
    let base = s.save();
    let mut snaps = vec![base];
    for _ in 0..10_000 {
        match rng.gen_range(0..4) {
            0 => snaps.push(s.save()),
            1 if snaps.len() > 1 => {
                let snap = snaps.pop().unwrap();
                s.restore(snap);
            }
            _ => {
                let x = random_type(&mut rng, &env, &mut s, &vars, 2);
                let y = random_type(&mut rng, &env, &mut s, &vars, 2);
                let mode = if rng.gen_bool(0.5) {
                    UnifyMode::Strict
                } else {
                    UnifyMode::PatternCompat
                };
                let _ = s.unify(&env, &x, &y, mode);
            }
        }
    }
    s.restore(base);
    ensure(s == initial, || "store differs from its snapshot".into())?;
    Ok("10000 operations".into())
}
