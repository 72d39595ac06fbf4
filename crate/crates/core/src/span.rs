use std::fmt;

use serde::Serialize;

/// A position in a source file. Lines and columns are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SourceSpan {
    pub file: String,
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    pub fn new(file: impl Into<String>, line: usize, column: usize) -> Self {
        Self {
            file: file.into(),
            line,
            column,
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

/// Optional source location attached to a metamodel element.
///
/// Spans never take part in structural equality: two theories parsed from
/// differently laid out text compare equal when their content does.
#[derive(Debug, Clone, Default)]
pub struct Span(pub Option<SourceSpan>);

impl Span {
    pub fn none() -> Self {
        Span(None)
    }

    pub fn at(span: SourceSpan) -> Self {
        Span(Some(span))
    }

    pub fn get(&self) -> Option<&SourceSpan> {
        self.0.as_ref()
    }
}

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Span {}
