//! Statement templates with `{placeholder}` substitution.

use crate::error::{Error, Result};

pub const PLACEHOLDERS: [&str; 6] = [
    "left_var",
    "left_ind",
    "right_var",
    "right_lo",
    "right_hi",
    "right_ind",
];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Piece<'a> {
    Text(&'a str),
    Slot(&'a str),
}

fn pieces(template: &str) -> std::result::Result<Vec<Piece<'_>>, String> {
    let mut out = Vec::new();
    let mut rest = template;
    while let Some(open) = rest.find(['{', '}']) {
        if rest.as_bytes()[open] == b'}' {
            return Err(format!(
                "unbalanced `}}` at byte {}",
                template.len() - rest.len() + open
            ));
        }
        if open > 0 {
            out.push(Piece::Text(&rest[..open]));
        }
        let after = &rest[open + 1..];
        let close = after
            .find('}')
            .ok_or_else(|| "unterminated `{` in template".to_string())?;
        let name = &after[..close];
        if name.contains('{') {
            return Err("nested `{` in template".to_string());
        }
        out.push(Piece::Slot(name));
        rest = &after[close + 1..];
    }
    if !rest.is_empty() {
        out.push(Piece::Text(rest));
    }
    Ok(out)
}

/// Checks a template's syntax and that every placeholder is one of
/// [`PLACEHOLDERS`]. Returns a human-readable problem description.
pub fn check(template: &str) -> std::result::Result<(), String> {
    for piece in pieces(template)? {
        if let Piece::Slot(name) = piece {
            if !PLACEHOLDERS.contains(&name) {
                return Err(format!("unknown placeholder `{{{name}}}`"));
            }
        }
    }
    Ok(())
}

/// Fills `template` from `lookup`. A placeholder for which `lookup` yields
/// `None` is a template error naming `context`.
pub fn render<'a>(
    template: &str,
    context: &str,
    lookup: impl Fn(&str) -> Option<&'a str>,
) -> Result<String> {
    let parts = pieces(template).map_err(|message| Error::Template {
        placeholder: message,
        context: context.to_string(),
    })?;
    let mut out = String::with_capacity(template.len() + 32);
    for piece in parts {
        match piece {
            Piece::Text(text) => out.push_str(text),
            Piece::Slot(name) => match lookup(name) {
                Some(value) => out.push_str(value),
                None => {
                    return Err(Error::Template {
                        placeholder: name.to_string(),
                        context: context.to_string(),
                    })
                }
            },
        }
    }
    Ok(out)
}
