//! Empirical testing protocol: one entry per retained hypothesis with the
//! variables to measure, closed question stubs over their full indicator
//! scales, and a back-link to the theory elements behind it.
//!
//! Question wording is this tool's convention: `Which best describes
//! <variable>? (<token> / <token> / ...)`, single-select, options in
//! declaration order.

use std::fmt::Write;

use serde::Serialize;

use crate::instantiator::{natural_cmp, select_for_archetype};
use crate::metamodel::{Archetype, Theory};
use crate::refiner::{RefinedHypothesis, Refinement};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Question {
    pub variable: String,
    pub options: Vec<String>,
    pub prompt: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProtocolEntry {
    pub proposition: String,
    pub proposition_text: String,
    pub hypothesis: String,
    pub statement: String,
    pub questions: Vec<Question>,
    pub discussion_prompt: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refuted: Option<String>,
    pub trace: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProtocolDocument {
    pub theory: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub archetype: Option<String>,
    pub entries: Vec<ProtocolEntry>,
}

pub fn question_for(label: &str, options: &[String]) -> Question {
    Question {
        variable: label.to_string(),
        options: options.to_vec(),
        prompt: format!("Which best describes {label}? ({})", options.join(" / ")),
    }
}

fn trace_line(theory: &Theory, refinement: &Refinement, h: &RefinedHypothesis) -> String {
    let mut variables: Vec<String> = Vec::new();
    let mut constructs: Vec<String> = Vec::new();
    for cell in h
        .constituent_cells
        .iter()
        .filter_map(|id| refinement.cell(id))
    {
        for b in cell.bindings() {
            let key = b.key();
            if !variables.contains(&key) {
                variables.push(key);
            }
            if !constructs.contains(&b.construct) {
                constructs.push(b.construct.clone());
            }
        }
    }
    let quotes = theory
        .proposition(&h.proposition)
        .map(|p| p.quotes.len())
        .unwrap_or(0);
    format!(
        "{} <- {} <- {} <- {} <- {} <- {} quotation(s)",
        h.id,
        h.constituent_cells.join(", "),
        h.proposition,
        variables.join(", "),
        constructs.join(", "),
        quotes
    )
}

fn entry(theory: &Theory, refinement: &Refinement, h: &RefinedHypothesis) -> ProtocolEntry {
    let proposition_text = theory
        .proposition(&h.proposition)
        .map(|p| p.text.clone())
        .unwrap_or_default();
    let mut measured: Vec<(String, String)> = Vec::new();
    for cell in h
        .constituent_cells
        .iter()
        .filter_map(|id| refinement.cell(id))
    {
        for b in cell.bindings() {
            let key = (b.construct.clone(), b.variable.clone());
            if !measured.contains(&key) {
                measured.push(key);
            }
        }
    }
    let questions = measured
        .iter()
        .filter_map(|(c, v)| theory.variable(c, v))
        .map(|v| question_for(v.display_name(), &v.domain.values))
        .collect();
    ProtocolEntry {
        proposition: h.proposition.clone(),
        discussion_prompt: format!(
            "Discuss: \"{proposition_text}\" How does this play out in your team?"
        ),
        proposition_text,
        hypothesis: h.id.clone(),
        statement: h.statement.clone(),
        questions,
        refuted: h.refuted.clone(),
        trace: trace_line(theory, refinement, h),
    }
}

/// Builds the protocol for every retained hypothesis, or for those selected
/// by `archetype` when one is given. Entries follow proposition order, then
/// hypothesis id order.
pub fn emit_protocol(
    theory: &Theory,
    refinement: &Refinement,
    archetype: Option<&Archetype>,
) -> ProtocolDocument {
    let mut chosen: Vec<&RefinedHypothesis> = match archetype {
        Some(a) => select_for_archetype(&refinement.hypotheses, &refinement.grids, a)
            .into_iter()
            .map(|s| s.hypothesis)
            .filter(|h| h.origin != crate::refiner::Origin::Cell)
            .collect(),
        None => refinement.retained().collect(),
    };
    let position = |id: &str| theory.propositions.iter().position(|p| p.id == id);
    chosen.sort_by(|a, b| {
        position(&a.proposition)
            .cmp(&position(&b.proposition))
            .then_with(|| natural_cmp(&a.id, &b.id))
    });
    ProtocolDocument {
        theory: theory.name.clone(),
        archetype: archetype.map(|a| a.name.clone()),
        entries: chosen
            .into_iter()
            .map(|h| entry(theory, refinement, h))
            .collect(),
    }
}

impl ProtocolDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("protocol serialization cannot fail")
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# Testing protocol: {}", self.theory);
        out.push('\n');
        if let Some(a) = &self.archetype {
            let _ = writeln!(out, "Scenario: archetype `{a}`.");
            out.push('\n');
        }
        if self.entries.is_empty() {
            out.push_str("No retained hypotheses; there is nothing to test.\n");
            return out;
        }
        let propositions = {
            let mut ids: Vec<&str> = Vec::new();
            for e in &self.entries {
                if !ids.contains(&e.proposition.as_str()) {
                    ids.push(&e.proposition);
                }
            }
            ids.len()
        };
        let _ = writeln!(
            out,
            "{} hypotheses across {} propositions. Every question is single-select.",
            self.entries.len(),
            propositions
        );

        let mut current: Option<&str> = None;
        for e in &self.entries {
            if current != Some(e.proposition.as_str()) {
                out.push('\n');
                let _ = writeln!(out, "## {}: {}", e.proposition, e.proposition_text);
                out.push('\n');
                let _ = writeln!(out, "Discussion prompt: {}", e.discussion_prompt);
                current = Some(&e.proposition);
            }
            out.push('\n');
            let _ = writeln!(out, "### {}", e.hypothesis);
            out.push('\n');
            let _ = writeln!(out, "{}", e.statement);
            if let Some(reason) = &e.refuted {
                out.push('\n');
                let _ = writeln!(out, "**Refuted by evidence:** {reason}");
            }
            out.push('\n');
            out.push_str("Measured variables:\n\n");
            for q in &e.questions {
                let _ = writeln!(out, "- {}: {}", q.variable, q.options.join(" / "));
            }
            out.push('\n');
            out.push_str("Questions:\n\n");
            for (i, q) in e.questions.iter().enumerate() {
                let _ = writeln!(out, "{}. {}", i + 1, q.prompt);
            }
            out.push('\n');
            let _ = writeln!(out, "Trace: `{}`", e.trace);
        }
        out
    }
}
