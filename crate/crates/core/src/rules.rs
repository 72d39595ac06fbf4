//! Review-rule files: the recorded outcome of abductive plausibility review.
//!
//! One rule per line, `#` starts a comment:
//!
//! ```text
//! prune  cell h1.10              reason "full sharing with low quality implausible"
//! prune  where P1 quality=low    reason "contradicts enablement"
//! refute H2.3                    reason "interview E4 contradicts"
//! retain H1.1                    reason "core claim"
//! ```
//!
//! Predicate atoms are `variable=token` or `Construct.variable=token`;
//! tokens containing spaces are double-quoted.

use std::fmt;

use serde::Serialize;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Prune,
    Refute,
    Retain,
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Action::Prune => "prune",
            Action::Refute => "refute",
            Action::Retain => "retain",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredicateAtom {
    pub construct: Option<String>,
    pub variable: String,
    pub token: String,
}

impl fmt::Display for PredicateAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = &self.construct {
            write!(f, "{c}.")?;
        }
        write!(f, "{}={}", self.variable, quote_if_needed(&self.token))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Target {
    Cell {
        id: String,
    },
    Hypothesis {
        id: String,
    },
    Predicate {
        proposition: String,
        atoms: Vec<PredicateAtom>,
    },
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Cell { id } => write!(f, "cell {id}"),
            Target::Hypothesis { id } => f.write_str(id),
            Target::Predicate { proposition, atoms } => {
                write!(f, "where {proposition}")?;
                for a in atoms {
                    write!(f, " {a}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReviewRule {
    pub action: Action,
    pub target: Target,
    pub reason: String,
    /// 1-based line in the rule file; 0 for rules built in code.
    pub line: usize,
}

impl fmt::Display for ReviewRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} reason {}",
            self.action,
            self.target,
            quote(&self.reason)
        )
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn quote_if_needed(s: &str) -> String {
    if s.is_empty()
        || s.chars()
            .any(|c| c.is_whitespace() || c == '"' || c == '=' || c == '#')
    {
        quote(s)
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Item {
    Word(String),
    Str(String),
    Eq,
}

fn scan(line: &str) -> Result<Vec<Item>, String> {
    let mut items = Vec::new();
    let mut chars = line.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '#' => break,
            c if c.is_whitespace() => {
                chars.next();
            }
            '=' => {
                chars.next();
                items.push(Item::Eq);
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                let mut closed = false;
                while let Some(c) = chars.next() {
                    match c {
                        '"' => {
                            closed = true;
                            break;
                        }
                        '\\' => match chars.next() {
                            Some(e @ ('"' | '\\')) => s.push(e),
                            Some('n') => s.push('\n'),
                            Some(other) => return Err(format!("unknown escape `\\{other}`")),
                            None => break,
                        },
                        c => s.push(c),
                    }
                }
                if !closed {
                    return Err("unterminated string".into());
                }
                items.push(Item::Str(s));
            }
            _ => {
                let mut w = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '=' || c == '"' || c == '#' {
                        break;
                    }
                    w.push(c);
                    chars.next();
                }
                items.push(Item::Word(w));
            }
        }
    }
    Ok(items)
}

fn parse_line(items: &[Item]) -> Result<(Action, Target, String), String> {
    let mut it = items.iter().peekable();
    let action = match it.next() {
        Some(Item::Word(w)) if w == "prune" => Action::Prune,
        Some(Item::Word(w)) if w == "refute" => Action::Refute,
        Some(Item::Word(w)) if w == "retain" => Action::Retain,
        _ => return Err("expected `prune`, `refute` or `retain`".into()),
    };
    let target = match it.next() {
        Some(Item::Word(w)) if w == "cell" => match it.next() {
            Some(Item::Word(id)) => Target::Cell { id: id.clone() },
            _ => return Err("expected a cell id after `cell`".into()),
        },
        Some(Item::Word(w)) if w == "where" => {
            let proposition = match it.next() {
                Some(Item::Word(p)) if p != "reason" => p.clone(),
                _ => return Err("expected a proposition id after `where`".into()),
            };
            let mut atoms = Vec::new();
            while let Some(Item::Word(w)) = it.peek() {
                if w == "reason" {
                    break;
                }
                let name = w.clone();
                it.next();
                if it.next() != Some(&Item::Eq) {
                    return Err(format!("expected `=` after `{name}`"));
                }
                let token = match it.next() {
                    Some(Item::Word(t)) | Some(Item::Str(t)) => t.trim().to_string(),
                    _ => return Err(format!("expected a token after `{name}=`")),
                };
                let (construct, variable) = match name.split_once('.') {
                    Some((c, v)) => (Some(c.to_string()), v.to_string()),
                    None => (None, name),
                };
                atoms.push(PredicateAtom {
                    construct,
                    variable,
                    token,
                });
            }
            if atoms.is_empty() {
                return Err("`where` needs at least one variable=token atom".into());
            }
            Target::Predicate { proposition, atoms }
        }
        Some(Item::Word(w)) if w != "reason" => Target::Hypothesis { id: w.clone() },
        _ => {
            return Err(
                "expected a target: `cell <id>`, `where <P> atoms...` or a hypothesis id".into(),
            )
        }
    };
    match it.next() {
        Some(Item::Word(w)) if w == "reason" => {}
        _ => return Err("expected `reason \"...\"`".into()),
    }
    let reason = match it.next() {
        Some(Item::Str(s)) if !s.trim().is_empty() => s.clone(),
        Some(Item::Str(_)) => return Err("reason must not be empty".into()),
        _ => return Err("expected a quoted reason".into()),
    };
    if it.next().is_some() {
        return Err("unexpected text after the reason".into());
    }
    Ok((action, target, reason))
}

/// Parses a rule file. Every malformed line is reported.
pub fn parse_rules(text: &str) -> Result<Vec<ReviewRule>, Vec<Error>> {
    let mut rules = Vec::new();
    let mut errors = Vec::new();
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let parsed = scan(line).and_then(|items| {
            if items.is_empty() {
                Ok(None)
            } else {
                parse_line(&items).map(Some)
            }
        });
        match parsed {
            Ok(Some((action, target, reason))) => rules.push(ReviewRule {
                action,
                target,
                reason,
                line: line_no,
            }),
            Ok(None) => {}
            Err(message) => errors.push(Error::Review {
                line: line_no,
                message,
            }),
        }
    }
    if errors.is_empty() {
        Ok(rules)
    } else {
        Err(errors)
    }
}
