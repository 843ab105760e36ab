use super::Span;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    /// Lowercase identifier (type names, variables, arm bodies).
    Ident(String),
    /// Capitalized identifier (constructors).
    UIdent(String),
    /// `'a`
    TyVar(String),
    Underscore,
    LParen,
    RParen,
    Comma,
    Pipe,
    Arrow,
    Star,
    Colon,
    Equals,
    Dot,
    KwType,
    KwAnd,
    KwOf,
    KwCheck,
    KwWith,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::UIdent(s) => format!("`{s}`"),
            Tok::TyVar(s) => format!("`'{s}`"),
            Tok::Underscore => "`_`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Star => "`*`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Dot => "`.`".into(),
            Tok::KwType => "`type`".into(),
            Tok::KwAnd => "`and`".into(),
            Tok::KwOf => "`of`".into(),
            Tok::KwCheck => "`check`".into(),
            Tok::KwWith => "`with`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug)]
pub(crate) struct LexError {
    pub span: Span,
    pub ch: char,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<(Tok, Span)>, LexError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1u32, 1u32);

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let span = Span { line, col };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                bump!();
            }
            continue;
        }
        let tok = match c {
            '(' => {
                bump!();
                Tok::LParen
            }
            ')' => {
                bump!();
                Tok::RParen
            }
            ',' => {
                bump!();
                Tok::Comma
            }
            '|' => {
                bump!();
                Tok::Pipe
            }
            '*' => {
                bump!();
                Tok::Star
            }
            ':' => {
                bump!();
                Tok::Colon
            }
            '=' => {
                bump!();
                Tok::Equals
            }
            '.' => {
                bump!();
                Tok::Dot
            }
            '-' => {
                bump!();
                if chars.peek() == Some(&'>') {
                    bump!();
                    Tok::Arrow
                } else {
                    return Err(LexError { span, ch: '-' });
                }
            }
            '\'' => {
                bump!();
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                if name.is_empty() || name.starts_with(|c: char| c.is_ascii_digit()) {
                    return Err(LexError { span, ch: '\'' });
                }
                Tok::TyVar(name)
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if is_ident_char(c) {
                        word.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                match word.as_str() {
                    "_" => Tok::Underscore,
                    "type" => Tok::KwType,
                    "and" => Tok::KwAnd,
                    "of" => Tok::KwOf,
                    "check" => Tok::KwCheck,
                    "with" => Tok::KwWith,
                    _ if word.starts_with(|c: char| c.is_ascii_uppercase()) => Tok::UIdent(word),
                    _ => Tok::Ident(word),
                }
            }
            other => return Err(LexError { span, ch: other }),
        };
        out.push((tok, span));
    }
    out.push((Tok::Eof, Span { line, col }));
    Ok(out)
}
