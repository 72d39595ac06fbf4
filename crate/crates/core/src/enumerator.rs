//! Hypothesis grids: one cell per combination of a left indicator with a
//! (right variable, right indicator) pair.
//!
//! Columns are the left variable's indicators in declaration order. Rows are
//! the right variables in resolution order, each contributing one row per
//! indicator. Cells are numbered row-major, `h<n>.1` being the first row and
//! first column.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metamodel::{resolve, PropositionKind, Theory};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Binding {
    pub construct: String,
    pub variable: String,
    pub token: String,
}

impl Binding {
    pub fn key(&self) -> String {
        format!("{}.{}", self.construct, self.variable)
    }

    pub fn is_of(&self, construct: &str, variable: &str) -> bool {
        self.construct == construct && self.variable == variable
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisCell {
    pub id: String,
    pub proposition: String,
    pub left: Binding,
    pub right: Binding,
    pub row: usize,
    pub column: usize,
}

impl HypothesisCell {
    pub fn bindings(&self) -> [&Binding; 2] {
        [&self.left, &self.right]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VariableKey {
    pub construct: String,
    pub variable: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisGrid {
    pub proposition: String,
    pub kind: PropositionKind,
    #[serde(skip)]
    pub ordinal: u32,
    pub left: VariableKey,
    pub columns: Vec<String>,
    pub rows: Vec<Binding>,
    pub cells: Vec<HypothesisCell>,
}

impl HypothesisGrid {
    pub fn cell(&self, id: &str) -> Option<&HypothesisCell> {
        self.cells.iter().find(|c| c.id == id)
    }

    pub fn at(&self, row: usize, column: usize) -> Option<&HypothesisCell> {
        self.cells.get(row * self.columns.len() + column)
    }

    /// Right variables in resolution order, each with its row range.
    pub fn row_blocks(&self) -> Vec<(VariableKey, std::ops::Range<usize>)> {
        let mut blocks: Vec<(VariableKey, std::ops::Range<usize>)> = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            match blocks.last_mut() {
                Some((key, range)) if row.is_of(&key.construct, &key.variable) => range.end = i + 1,
                _ => blocks.push((
                    VariableKey {
                        construct: row.construct.clone(),
                        variable: row.variable.clone(),
                    },
                    i..i + 1,
                )),
            }
        }
        blocks
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("grid serialization cannot fail")
    }
}

pub fn cell_id(ordinal: u32, k: usize) -> String {
    format!("h{ordinal}.{k}")
}

/// Builds the hypothesis grid of one strategic proposition.
pub fn enumerate(theory: &Theory, proposition_id: &str) -> Result<HypothesisGrid> {
    let proposition = theory
        .proposition(proposition_id)
        .ok_or_else(|| Error::UnknownProposition(proposition_id.to_string()))?;
    if !proposition.strategic {
        return Err(Error::Taxonomic(proposition.id.clone()));
    }
    if proposition.left.is_wildcard() {
        return Err(Error::WildcardLeft(proposition.id.clone()));
    }
    let ordinal = theory
        .proposition_ordinal(proposition_id)
        .expect("proposition exists");
    let (left_construct, left_variable) = resolve(theory, &proposition.left)?[0];
    let right = resolve(theory, &proposition.right)?;

    let columns = left_variable.domain.values.clone();
    let rows: Vec<Binding> = right
        .iter()
        .flat_map(|(c, v)| {
            v.domain.values.iter().map(move |token| Binding {
                construct: c.name.clone(),
                variable: v.name.clone(),
                token: token.clone(),
            })
        })
        .collect();

    let mut cells = Vec::with_capacity(columns.len() * rows.len());
    for (row, right_binding) in rows.iter().enumerate() {
        for (column, left_token) in columns.iter().enumerate() {
            cells.push(HypothesisCell {
                id: cell_id(ordinal, row * columns.len() + column + 1),
                proposition: proposition.id.clone(),
                left: Binding {
                    construct: left_construct.name.clone(),
                    variable: left_variable.name.clone(),
                    token: left_token.clone(),
                },
                right: right_binding.clone(),
                row,
                column,
            });
        }
    }

    Ok(HypothesisGrid {
        proposition: proposition.id.clone(),
        kind: proposition.kind,
        ordinal,
        left: VariableKey {
            construct: left_construct.name.clone(),
            variable: left_variable.name.clone(),
        },
        columns,
        rows,
        cells,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Skipped {
    pub proposition: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct Enumeration {
    pub grids: Vec<HypothesisGrid>,
    /// Taxonomic propositions, which produce no grid.
    pub skipped: Vec<Skipped>,
    pub errors: Vec<(String, Error)>,
}

impl Enumeration {
    pub fn cell_count(&self) -> usize {
        self.grids.iter().map(|g| g.cells.len()).sum()
    }
}

/// Enumerates every strategic proposition in declaration order.
pub fn enumerate_all(theory: &Theory) -> Enumeration {
    let mut out = Enumeration::default();
    for p in &theory.propositions {
        if !p.strategic {
            out.skipped.push(Skipped {
                proposition: p.id.clone(),
                reason: "taxonomic".to_string(),
            });
            continue;
        }
        match enumerate(theory, &p.id) {
            Ok(grid) => out.grids.push(grid),
            Err(e) => out.errors.push((p.id.clone(), e)),
        }
    }
    out
}

/// Renders a grid in the layout of a printed hypothesis table: the
/// proposition and left variable head the columns, right variables label
/// row blocks.
pub fn render_table(grid: &HypothesisGrid, theory: &Theory) -> String {
    let label = |construct: &str, variable: &str| {
        theory
            .variable(construct, variable)
            .map(|v| v.display_name().to_string())
            .unwrap_or_else(|| variable.to_string())
    };
    let title = format!("{} - {}", grid.proposition, grid.kind);
    let left_label = label(&grid.left.construct, &grid.left.variable);

    let mut body: Vec<[String; 3]> = Vec::new();
    let blocks = grid.row_blocks();
    let mut previous_construct: Option<&str> = None;
    for (key, range) in &blocks {
        for (i, row) in grid.rows[range.clone()].iter().enumerate() {
            let construct = if i == 0 && previous_construct != Some(key.construct.as_str()) {
                key.construct.clone()
            } else {
                String::new()
            };
            let variable = if i == 0 {
                label(&key.construct, &key.variable)
            } else {
                String::new()
            };
            body.push([construct, variable, row.token.clone()]);
        }
        previous_construct = Some(key.construct.as_str());
    }

    let mut label_widths = [0usize; 3];
    for row in &body {
        for (w, text) in label_widths.iter_mut().zip(row) {
            *w = (*w).max(text.chars().count());
        }
    }
    let mut value_widths: Vec<usize> = grid
        .columns
        .iter()
        .enumerate()
        .map(|(c, token)| {
            let widest_id = (0..grid.rows.len())
                .filter_map(|r| grid.at(r, c))
                .map(|cell| cell.id.len())
                .max()
                .unwrap_or(0);
            token.chars().count().max(widest_id)
        })
        .collect();
    if value_widths.is_empty() {
        value_widths.push(0);
    }

    // Spanning header cells must fit their merged width.
    let label_span = label_widths.iter().sum::<usize>() + 6;
    let needed = title.chars().count();
    if needed > label_span {
        label_widths[2] += needed - label_span;
    }
    let value_span = value_widths.iter().sum::<usize>() + 3 * (value_widths.len() - 1);
    let needed = left_label
        .chars()
        .count()
        .max(grid.left.construct.chars().count());
    if needed > value_span {
        *value_widths.last_mut().unwrap() += needed - value_span;
    }
    let label_span = label_widths.iter().sum::<usize>() + 6;
    let value_span = value_widths.iter().sum::<usize>() + 3 * (value_widths.len() - 1);

    let pad = |text: &str, width: usize| {
        let len = text.chars().count();
        format!("{text}{}", " ".repeat(width.saturating_sub(len)))
    };
    let rule = |full_labels: bool| {
        let mut s = String::from("+");
        if full_labels {
            for w in label_widths {
                s.push_str(&"-".repeat(w + 2));
                s.push('+');
            }
        } else {
            s.push_str(&"-".repeat(label_span + 2));
            s.push('+');
        }
        for w in &value_widths {
            s.push_str(&"-".repeat(w + 2));
            s.push('+');
        }
        s.push('\n');
        s
    };

    let mut out = String::new();
    out.push_str(&format!(
        "+{}+{}+\n",
        "-".repeat(label_span + 2),
        "-".repeat(value_span + 2)
    ));
    out.push_str(&format!(
        "| {} | {} |\n",
        pad(&title, label_span),
        pad(&grid.left.construct, value_span)
    ));
    out.push_str(&format!(
        "| {} | {} |\n",
        pad("", label_span),
        pad(&left_label, value_span)
    ));
    out.push_str(&format!("| {} |", pad("", label_span)));
    for (c, w) in value_widths.iter().enumerate() {
        let token = grid.columns.get(c).map(String::as_str).unwrap_or("");
        out.push_str(&format!(" {} |", pad(token, *w)));
    }
    out.push('\n');
    out.push_str(&rule(true));
    for (r, labels) in body.iter().enumerate() {
        out.push('|');
        for (text, w) in labels.iter().zip(label_widths) {
            out.push_str(&format!(" {} |", pad(text, w)));
        }
        for (c, w) in value_widths.iter().enumerate() {
            let id = grid.at(r, c).map(|cell| cell.id.as_str()).unwrap_or("");
            out.push_str(&format!(" {} |", pad(id, *w)));
        }
        out.push('\n');
    }
    if !body.is_empty() {
        out.push_str(&rule(true));
    }
    out
}
