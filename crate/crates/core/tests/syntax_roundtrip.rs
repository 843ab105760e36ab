use gadtcheck::syntax::{
    parse_program, parse_type, print_pattern, print_type, PatternSyntax, TypeSyntax,
};
use proptest::prelude::*;

fn lower_ident() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["t", "u", "nat", "plus", "zero", "list", "int"])
        .prop_map(str::to_string)
}

fn var_ident() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["a", "b", "c", "x"]).prop_map(str::to_string)
}

fn ctor_ident() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["A", "Bc", "Zero", "PlusS", "Some", "Cons"]).prop_map(str::to_string)
}

fn type_syntax() -> impl Strategy<Value = TypeSyntax> {
    let leaf = prop_oneof![
        var_ident().prop_map(TypeSyntax::Var),
        lower_ident().prop_map(|n| TypeSyntax::App(n, vec![])),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (lower_ident(), prop::collection::vec(inner.clone(), 1..3))
                .prop_map(|(n, args)| TypeSyntax::App(n, args)),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| TypeSyntax::Arrow(Box::new(a), Box::new(b))),
            prop::collection::vec(inner, 2..4).prop_map(TypeSyntax::Tuple),
        ]
    })
}

fn pattern_syntax() -> impl Strategy<Value = PatternSyntax> {
    let leaf = prop_oneof![
        Just(PatternSyntax::Wildcard),
        var_ident().prop_map(PatternSyntax::Var),
        ctor_ident().prop_map(|c| PatternSyntax::Constr(c, None)),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (ctor_ident(), inner.clone())
                .prop_map(|(c, p)| PatternSyntax::Constr(c, Some(Box::new(p)))),
            prop::collection::vec(inner.clone(), 2..4).prop_map(PatternSyntax::Tuple),
            (inner.clone(), inner).prop_map(|(a, b)| PatternSyntax::Or(Box::new(a), Box::new(b))),
        ]
    })
}

proptest! {
    #[test]
    fn types_print_and_reparse(t in type_syntax()) {
        let printed = print_type(&t);
        prop_assert_eq!(parse_type(&printed).unwrap(), t, "{}", printed);
    }

    #[test]
    fn patterns_print_and_reparse(p in pattern_syntax().prop_filter("linear", |p| p.check_linear().is_ok())) {
        let printed = print_pattern(&p);
        let prog = parse_program(&format!("check int with | {printed} -> ok")).unwrap();
        prop_assert_eq!(&prog.checks[0].arms[0].pattern, &p, "{}", printed);
    }
}

#[test]
fn corpus_programs_print_and_reparse() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let mut prog = parse_program(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let mut again = parse_program(&prog.to_string()).unwrap();
        prog.clear_spans();
        again.clear_spans();
        assert_eq!(prog, again, "{}", path.display());
    }
}
