use std::fmt;

use crate::span::SourceSpan;

use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Str(String),
    LBrace,
    RBrace,
    Comma,
    Eq,
    Lt,
    Dot,
    Star,
    Arrow,
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) => write!(f, "`{s}`"),
            TokenKind::Str(_) => f.write_str("string"),
            TokenKind::LBrace => f.write_str("`{`"),
            TokenKind::RBrace => f.write_str("`}`"),
            TokenKind::Comma => f.write_str("`,`"),
            TokenKind::Eq => f.write_str("`=`"),
            TokenKind::Lt => f.write_str("`<`"),
            TokenKind::Dot => f.write_str("`.`"),
            TokenKind::Star => f.write_str("`*`"),
            TokenKind::Arrow => f.write_str("`->`"),
            TokenKind::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
}

pub fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

/// `[A-Za-z_][A-Za-z0-9_-]*`
pub fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if is_ident_start(c)) && chars.all(is_ident_continue)
}

/// Splits `source` into tokens. Lexical errors do not stop the scan; every
/// bad character or unterminated string is reported.
pub fn tokenize(file: &str, source: &str) -> (Vec<Token>, Vec<ParseError>) {
    let source = source.strip_prefix('\u{feff}').unwrap_or(source);
    let mut tokens = Vec::new();
    let mut errors = Vec::new();
    let mut chars = source.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if let Some(c) = c {
                if c == '\n' {
                    line += 1;
                    column = 1;
                } else {
                    column += 1;
                }
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let span = SourceSpan::new(file, line, column);
        let simple = match c {
            '{' => Some(TokenKind::LBrace),
            '}' => Some(TokenKind::RBrace),
            ',' => Some(TokenKind::Comma),
            '=' => Some(TokenKind::Eq),
            '<' => Some(TokenKind::Lt),
            '.' => Some(TokenKind::Dot),
            '*' => Some(TokenKind::Star),
            _ => None,
        };
        if let Some(kind) = simple {
            bump!();
            tokens.push(Token { kind, span });
            continue;
        }
        match c {
            c if c.is_whitespace() => {
                bump!();
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
            }
            '-' => {
                bump!();
                if chars.peek() == Some(&'>') {
                    bump!();
                    tokens.push(Token {
                        kind: TokenKind::Arrow,
                        span,
                    });
                } else {
                    errors.push(ParseError::lexical(
                        span,
                        "unexpected `-` (did you mean `->`?)",
                    ));
                }
            }
            '"' => {
                bump!();
                let mut text = String::new();
                let mut closed = false;
                while let Some(c) = bump!() {
                    match c {
                        '"' => {
                            closed = true;
                            break;
                        }
                        '\\' => {
                            let escape_span = SourceSpan::new(file, line, column - 1);
                            match bump!() {
                                Some('"') => text.push('"'),
                                Some('\\') => text.push('\\'),
                                Some('n') => text.push('\n'),
                                Some('t') => text.push('\t'),
                                Some(other) => errors.push(ParseError::lexical(
                                    escape_span,
                                    format!("unknown escape `\\{other}`"),
                                )),
                                None => break,
                            }
                        }
                        c => text.push(c),
                    }
                }
                if closed {
                    tokens.push(Token {
                        kind: TokenKind::Str(text),
                        span,
                    });
                } else {
                    errors.push(ParseError::lexical(span, "unterminated string"));
                }
            }
            c if is_ident_start(c) => {
                let mut text = String::new();
                while let Some(&c) = chars.peek() {
                    if !is_ident_continue(c) {
                        break;
                    }
                    // `a->b`: the `-` belongs to the arrow.
                    if c == '-' {
                        let mut ahead = chars.clone();
                        ahead.next();
                        if ahead.peek() == Some(&'>') {
                            break;
                        }
                    }
                    text.push(c);
                    bump!();
                }
                tokens.push(Token {
                    kind: TokenKind::Ident(text),
                    span,
                });
            }
            other => {
                bump!();
                errors.push(ParseError::lexical(
                    span,
                    format!("unexpected character `{other}`"),
                ));
            }
        }
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        span: SourceSpan::new(file, line, column),
    });
    (tokens, errors)
}
