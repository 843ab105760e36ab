use super::{ConstructorSig, DeclKind, Env, Type};

/// Pairs deeper than this are assumed compatible.
const MAX_DEPTH: usize = 64;

impl Env {
    /// The compatibility relation on types used for GADT indices in
    /// patterns:
    ///
    /// - a variable is compatible with anything;
    /// - an abstract-headed type is compatible with any type of another head;
    /// - applications of the same head compare their injective arguments;
    /// - arrows and tuples compare componentwise;
    /// - two distinct variant types are compatible when their constructor
    ///   lists agree on names and order and the argument types and indices
    ///   are compatible.
    ///
    /// Reflexive and symmetric, but not transitive. Variables are never
    /// bound.
    pub fn compatible(&self, a: &Type, b: &Type) -> bool {
        Compat {
            env: self,
            assumed: Vec::new(),
        }
        .check(a, b, 0)
    }
}

struct Compat<'e> {
    env: &'e Env,
    /// Variant pairs currently under test (coinductive hypotheses).
    assumed: Vec<(Type, Type)>,
}

impl Compat<'_> {
    fn check(&mut self, a: &Type, b: &Type, depth: usize) -> bool {
        if depth > MAX_DEPTH {
            return true;
        }
        match (a, b) {
            (Type::Var(_), _) | (_, Type::Var(_)) => true,
            (Type::App(c1, xs), Type::App(c2, ys)) if c1 == c2 => {
                let inj = &self.env.decl(*c1).injective;
                xs.iter()
                    .zip(ys)
                    .enumerate()
                    .all(|(i, (x, y))| !inj[i] || self.check(x, y, depth + 1))
            }
            (Type::App(c, _), _) | (_, Type::App(c, _)) if self.env.decl(*c).is_abstract() => true,
            (Type::App(c1, xs), Type::App(c2, ys)) => {
                let (d1, d2) = (self.env.decl(*c1), self.env.decl(*c2));
                let (DeclKind::Variant(cs1), DeclKind::Variant(cs2)) = (&d1.kind, &d2.kind) else {
                    return false;
                };
                if d1.arity != d2.arity || cs1.len() != cs2.len() {
                    return false;
                }
                if !cs1.iter().zip(cs2).all(|(x, y)| x.name == y.name) {
                    return false;
                }
                let key = (a.clone(), b.clone());
                if self.assumed.contains(&key) {
                    return true;
                }
                self.assumed.push(key);
                let ok = cs1
                    .iter()
                    .zip(cs2)
                    .all(|(x, y)| self.same_shape(x, y, depth))
                    && xs.iter().zip(ys).all(|(x, y)| self.check(x, y, depth + 1));
                self.assumed.pop();
                ok
            }
            (Type::Arrow(a1, b1), Type::Arrow(a2, b2)) => {
                self.check(a1, a2, depth + 1) && self.check(b1, b2, depth + 1)
            }
            (Type::Tuple(xs), Type::Tuple(ys)) => {
                xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.check(x, y, depth + 1))
            }
            _ => false,
        }
    }

    fn same_shape(&mut self, x: &ConstructorSig, y: &ConstructorSig, depth: usize) -> bool {
        let args = match (&x.argument, &y.argument) {
            (None, None) => true,
            (Some(p), Some(q)) => self.check(p, q, depth + 1),
            _ => false,
        };
        args && x
            .result
            .iter()
            .zip(&y.result)
            .all(|(p, q)| self.check(p, q, depth + 1))
    }
}

#[cfg(test)]
mod tests {
    use crate::syntax::{parse_type, Span};
    use crate::tycore::tests::env_of;
    use crate::tycore::{Env, Session, Type};

    fn ty(env: &Env, s: &mut Session, src: &str) -> Type {
        env.lower_open_type(&parse_type(src).unwrap(), Span::default(), s)
            .unwrap()
    }

    const DECLS: &str = "type a\ntype b\n\
                         type (_, _) cmp = Eq : ('a, 'a) cmp | Any : ('a, 'b) cmp\n\
                         type e1 = |\ntype e2 = |\n\
                         type 'a l1 = N1 | C1 of 'a l1\n\
                         type _ h";

    #[test]
    fn reflexivity_and_abstract_rules() {
        let env = env_of(DECLS);
        let mut s = Session::new();
        let int = ty(&env, &mut s, "int");
        assert!(env.compatible(&int, &int));
        let a = ty(&env, &mut s, "a");
        let cmp = ty(&env, &mut s, "(a, b) cmp");
        assert!(env.compatible(&a, &cmp));
        assert!(env.compatible(&cmp, &a));
    }

    #[test]
    fn distinct_nominal_types_are_incompatible() {
        let env = env_of(DECLS);
        let mut s = Session::new();
        let int = ty(&env, &mut s, "int");
        let bool = ty(&env, &mut s, "bool");
        assert!(!env.compatible(&int, &bool));
        let l = ty(&env, &mut s, "int l1");
        assert!(!env.compatible(&int, &l));
        let arrow = ty(&env, &mut s, "int -> int");
        assert!(!env.compatible(&arrow, &l));
    }

    #[test]
    fn not_transitive() {
        let env = env_of(DECLS);
        let mut s = Session::new();
        let (int, a, bool) = (
            ty(&env, &mut s, "int"),
            ty(&env, &mut s, "a"),
            ty(&env, &mut s, "bool"),
        );
        assert!(env.compatible(&int, &a));
        assert!(env.compatible(&a, &bool));
        assert!(!env.compatible(&int, &bool));
    }

    #[test]
    fn same_head_compares_injective_positions_only() {
        let env = env_of(DECLS);
        let mut s = Session::new();
        let x = ty(&env, &mut s, "int h");
        let y = ty(&env, &mut s, "bool h");
        assert!(env.compatible(&x, &y));
        let x = ty(&env, &mut s, "int l1");
        let y = ty(&env, &mut s, "bool l1");
        assert!(!env.compatible(&x, &y));
    }

    #[test]
    fn same_shaped_variants() {
        let env = env_of(DECLS);
        let mut s = Session::new();
        let (e1, e2) = (ty(&env, &mut s, "e1"), ty(&env, &mut s, "e2"));
        assert!(env.compatible(&e1, &e2));
        let l = ty(&env, &mut s, "int l1");
        assert!(!env.compatible(&e1, &l));
    }

    #[test]
    fn variables_match_anything() {
        let env = env_of(DECLS);
        let mut s = Session::new();
        let v = s.fresh();
        let t = ty(&env, &mut s, "(int, bool) cmp -> e1");
        assert!(env.compatible(&v, &t));
        let t2 = ty(&env, &mut s, "'x * 'y");
        let t3 = ty(&env, &mut s, "int * bool");
        assert!(env.compatible(&t2, &t3));
    }
}
