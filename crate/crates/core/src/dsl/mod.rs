//! The `.theory` text format: parsing with source positions, and canonical
//! serialization back to text.
//!
//! ```text
//! theory "T3" {
//!   construct Team "An abstract team structure." {
//!     variable sharing "responsibility/ownership sharing" {
//!       "full sharing", "medium sharing", "minimal or null sharing"
//!     } absent = "minimal or null sharing"
//!   }
//!   proposition P1 categoric strategic relates Team.sharing -> Collaboration.*
//!     text "A team culture based on responsibility/ownership sharing enables collaboration."
//!     quote "interviews" "..."
//! }
//! ```

mod lexer;
mod parser;
mod writer;

use std::collections::HashMap;
use std::fmt;

use crate::metamodel::Theory;
use crate::span::SourceSpan;

pub use lexer::is_ident;
pub use writer::serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical,
    Syntax,
    Duplicate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
    pub message: String,
    /// For syntax errors: what the parser would have accepted.
    pub expected: Vec<String>,
}

impl ParseError {
    fn lexical(span: SourceSpan, message: impl Into<String>) -> Self {
        Self {
            kind: ParseErrorKind::Lexical,
            span,
            message: message.into(),
            expected: Vec::new(),
        }
    }

    fn syntax(span: SourceSpan, expected: &[&str], found: String) -> Self {
        let expected: Vec<String> = expected.iter().map(|s| s.to_string()).collect();
        let message = match expected.as_slice() {
            [one] => format!("expected {one}, found {found}"),
            many => format!("expected one of {}, found {found}", many.join(", ")),
        };
        Self {
            kind: ParseErrorKind::Syntax,
            span,
            message,
            expected,
        }
    }

    fn syntax_message(span: SourceSpan, message: impl Into<String>) -> Self {
        Self {
            kind: ParseErrorKind::Syntax,
            span,
            message: message.into(),
            expected: Vec::new(),
        }
    }

    fn duplicate(span: SourceSpan, message: String) -> Self {
        Self {
            kind: ParseErrorKind::Duplicate,
            span,
            message,
            expected: Vec::new(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: error: {}", self.span, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Parses `.theory` text. See [`parse_named`].
pub fn parse(source: &str) -> Result<Theory, Vec<ParseError>> {
    parse_named("<input>", source)
}

/// Parses `.theory` text, attaching `file` to every span.
///
/// Returns the theory, or every lexical, syntax and duplicate-name error
/// found (never an empty list). Structural validation beyond name
/// uniqueness is left to [`crate::metamodel::validate`].
pub fn parse_named(file: &str, source: &str) -> Result<Theory, Vec<ParseError>> {
    let (tokens, mut errors) = lexer::tokenize(file, source);
    let mut parser = parser::Parser::new(tokens);
    let theory = parser.theory();
    errors.append(&mut parser.errors);
    if let Some(theory) = &theory {
        errors.extend(duplicates(theory));
    }
    match theory {
        Some(theory) if errors.is_empty() => Ok(theory),
        _ => {
            errors.sort_by_key(|e| (e.span.line, e.span.column));
            Err(errors)
        }
    }
}

fn duplicates(theory: &Theory) -> Vec<ParseError> {
    let mut out = Vec::new();
    let mut check =
        |what: &str, name: &str, span: Option<&SourceSpan>, seen: &mut HashMap<String, ()>| {
            if seen.insert(name.to_string(), ()).is_some() {
                if let Some(span) = span {
                    out.push(ParseError::duplicate(
                        span.clone(),
                        format!("duplicate {what} `{name}`"),
                    ));
                }
            }
        };
    let mut constructs = HashMap::new();
    for c in &theory.constructs {
        check("construct", &c.name, c.span.get(), &mut constructs);
        let mut variables = HashMap::new();
        for v in &c.variables {
            check("variable", &v.name, v.span.get(), &mut variables);
        }
    }
    let mut propositions = HashMap::new();
    for p in &theory.propositions {
        check("proposition", &p.id, p.span.get(), &mut propositions);
    }
    let mut archetypes = HashMap::new();
    for a in &theory.archetypes {
        check("archetype", &a.name, a.span.get(), &mut archetypes);
    }
    out
}
