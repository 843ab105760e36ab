use super::{PatternSyntax, TypeSyntax};

/// Renders a pattern in re-parseable concrete syntax. Tuples are always
/// parenthesized; constructor arguments are parenthesized unless atomic.
pub fn print_pattern(p: &PatternSyntax) -> String {
    let mut out = String::new();
    write_pattern(&mut out, p, 0);
    out
}

// 0: or-pattern, 1: constructor application, 2: atom
fn write_pattern(out: &mut String, p: &PatternSyntax, prec: u8) {
    match p {
        PatternSyntax::Wildcard => out.push('_'),
        PatternSyntax::Var(v) => out.push_str(v),
        PatternSyntax::Constr(c, None) => out.push_str(c),
        PatternSyntax::Constr(c, Some(arg)) => {
            if prec > 1 {
                out.push('(');
            }
            out.push_str(c);
            out.push(' ');
            write_pattern(out, arg, 2);
            if prec > 1 {
                out.push(')');
            }
        }
        PatternSyntax::Tuple(items) => {
            out.push('(');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_pattern(out, item, 1);
            }
            out.push(')');
        }
        PatternSyntax::Or(a, b) => {
            if prec > 0 {
                out.push('(');
            }
            write_pattern(out, a, 1);
            out.push_str(" | ");
            write_pattern(out, b, 0);
            if prec > 0 {
                out.push(')');
            }
        }
    }
}

pub fn print_type(t: &TypeSyntax) -> String {
    let mut out = String::new();
    write_type(&mut out, t, 0);
    out
}

// 0: arrow, 1: product, 2: application
fn write_type(out: &mut String, t: &TypeSyntax, prec: u8) {
    match t {
        TypeSyntax::Var(v) => {
            out.push('\'');
            out.push_str(v);
        }
        TypeSyntax::Anon => out.push('_'),
        TypeSyntax::App(name, args) => {
            match args.len() {
                0 => {}
                1 => {
                    write_type(out, &args[0], 2);
                    out.push(' ');
                }
                _ => {
                    out.push('(');
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        write_type(out, a, 0);
                    }
                    out.push_str(") ");
                }
            }
            out.push_str(name);
        }
        TypeSyntax::Arrow(a, b) => {
            if prec > 0 {
                out.push('(');
            }
            write_type(out, a, 1);
            out.push_str(" -> ");
            write_type(out, b, 0);
            if prec > 0 {
                out.push(')');
            }
        }
        TypeSyntax::Tuple(items) => {
            if prec > 1 {
                out.push('(');
            }
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(" * ");
                }
                write_type(out, item, 2);
            }
            if prec > 1 {
                out.push(')');
            }
        }
    }
}
