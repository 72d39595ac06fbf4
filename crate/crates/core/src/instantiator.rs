//! Archetype checks and archetype-consistent hypothesis selection.

use std::cmp::Ordering;

use serde::Serialize;

use crate::diagnostic::{Diagnostic, Location};
use crate::enumerator::{HypothesisCell, HypothesisGrid};
use crate::error::{Error, Result};
use crate::metamodel::{assignment_diagnostics, Archetype, Theory};
use crate::refiner::RefinedHypothesis;

/// Domain errors for the archetype's assignments, plus warnings for
/// unassigned variables of every construct the archetype touches.
pub fn check_archetype(theory: &Theory, name: &str) -> Result<Vec<Diagnostic>> {
    let archetype = theory
        .archetype(name)
        .ok_or_else(|| Error::UnknownArchetype(name.to_string()))?;
    let mut out = assignment_diagnostics(theory, archetype);
    let here = Location::new(
        format!("archetype {}", archetype.name),
        archetype.span.get(),
    );
    if archetype.assignments.is_empty() {
        out.push(Diagnostic::warning(here, "no assignments"));
        return Ok(out);
    }
    let mut touched: Vec<&str> = Vec::new();
    for a in &archetype.assignments {
        if !touched.contains(&a.construct.as_str()) {
            touched.push(&a.construct);
        }
    }
    for construct in touched.into_iter().filter_map(|c| theory.construct(c)) {
        let unassigned: Vec<&str> = construct
            .variables
            .iter()
            .filter(|v| archetype.assigned(&construct.name, &v.name).is_none())
            .map(|v| v.name.as_str())
            .collect();
        if !unassigned.is_empty() {
            out.push(Diagnostic::warning(
                here.clone(),
                format!(
                    "unassigned variables of {} (unconstrained): {}",
                    construct.name,
                    unassigned.join(", ")
                ),
            ));
        }
    }
    Ok(out)
}

/// A cell is consistent with an archetype when each of its bindings either
/// matches the archetype's token or binds a variable the archetype leaves
/// unassigned.
pub fn is_consistent(cell: &HypothesisCell, archetype: &Archetype) -> bool {
    cell.bindings().iter().all(|b| {
        archetype
            .assigned(&b.construct, &b.variable)
            .is_none_or(|token| token == b.token)
    })
}

pub fn consistent_cells<'g>(
    grid: &'g HypothesisGrid,
    archetype: &Archetype,
) -> Vec<&'g HypothesisCell> {
    grid.cells
        .iter()
        .filter(|c| is_consistent(c, archetype))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Selection<'h> {
    pub hypothesis: &'h RefinedHypothesis,
    pub matched_cells: Vec<String>,
}

/// Compares ids such as `H1.10` and `H1.9` by their numeric parts.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn parts(s: &str) -> Vec<(String, u64)> {
        s.split('.')
            .map(|p| {
                let digits_at = p.find(|c: char| c.is_ascii_digit()).unwrap_or(p.len());
                let (prefix, digits) = p.split_at(digits_at);
                (prefix.to_string(), digits.parse().unwrap_or(0))
            })
            .collect()
    }
    parts(a).cmp(&parts(b)).then_with(|| a.cmp(b))
}

/// Retained hypotheses with at least one constituent cell consistent with
/// the archetype, sorted by id.
pub fn select_for_archetype<'h>(
    hypotheses: &'h [RefinedHypothesis],
    grids: &[HypothesisGrid],
    archetype: &Archetype,
) -> Vec<Selection<'h>> {
    let find_cell = |id: &str| grids.iter().find_map(|g| g.cell(id));
    let mut out: Vec<Selection<'h>> = hypotheses
        .iter()
        .filter(|h| h.is_retained())
        .filter_map(|h| {
            let matched: Vec<String> = h
                .constituent_cells
                .iter()
                .filter_map(|id| find_cell(id))
                .filter(|c| is_consistent(c, archetype))
                .map(|c| c.id.clone())
                .collect();
            (!matched.is_empty()).then_some(Selection {
                hypothesis: h,
                matched_cells: matched,
            })
        })
        .collect();
    out.sort_by(|a, b| natural_cmp(&a.hypothesis.id, &b.hypothesis.id));
    out
}
