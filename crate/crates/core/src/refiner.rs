//! Grid reduction: strategic filtering, absence pruning, gradient merging,
//! compound decomposition and rule-driven abductive review.
//!
//! Every step records what it did. Cells removed by absence pruning or
//! folded into a transition hypothesis keep a cell-level record (id = cell
//! id) carrying their status and rationale, so each enumerated cell ends in
//! exactly one terminal bucket.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::enumerator::{enumerate_all, HypothesisCell, HypothesisGrid};
use crate::error::{Error, Result};
use crate::expr::{Expr, Implication};
use crate::metamodel::{Proposition, PropositionKind, Theory};
use crate::rules::{Action, PredicateAtom, ReviewRule, Target};
use crate::template;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Retained,
    PrunedAbsence,
    PrunedAbductive,
    MergedAway,
    DecomposedAway,
}

impl Status {
    pub const ALL: [Status; 5] = [
        Status::Retained,
        Status::PrunedAbsence,
        Status::PrunedAbductive,
        Status::MergedAway,
        Status::DecomposedAway,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Retained => "retained",
            Status::PrunedAbsence => "pruned_absence",
            Status::PrunedAbductive => "pruned_abductive",
            Status::MergedAway => "merged_away",
            Status::DecomposedAway => "decomposed_away",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How a record came to exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    /// Working record for one grid cell.
    Cell,
    /// Two cells at consecutive positions of an ordered right variable.
    Transition,
    /// A single cell promoted to a hypothesis.
    Single,
    /// One disjunct of a decomposed compound hypothesis.
    Disjunct,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefinedHypothesis {
    pub id: String,
    pub proposition: String,
    pub kind: PropositionKind,
    pub statement: String,
    pub constituent_cells: Vec<String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rationale: Option<String>,
    pub expression: Implication,
    pub origin: Origin,
    /// Set by a `refute` review rule; the hypothesis stays retained.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refuted: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl RefinedHypothesis {
    pub fn is_retained(&self) -> bool {
        self.status == Status::Retained
    }

    fn set_status(&mut self, status: Status, rationale: impl Into<String>) {
        self.status = status;
        self.rationale = Some(rationale.into());
    }
}

/// Values a statement template can draw from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StatementBinding<'a> {
    Cell {
        left_var: &'a str,
        left_ind: &'a str,
        right_var: &'a str,
        right_ind: &'a str,
    },
    Transition {
        left_var: &'a str,
        left_ind: &'a str,
        right_var: &'a str,
        right_lo: &'a str,
        right_hi: &'a str,
    },
}

impl<'a> StatementBinding<'a> {
    fn lookup(&self, name: &str) -> Option<&'a str> {
        match (self, name) {
            (StatementBinding::Cell { left_var, .. }, "left_var")
            | (StatementBinding::Transition { left_var, .. }, "left_var") => Some(left_var),
            (StatementBinding::Cell { left_ind, .. }, "left_ind")
            | (StatementBinding::Transition { left_ind, .. }, "left_ind") => Some(left_ind),
            (StatementBinding::Cell { right_var, .. }, "right_var")
            | (StatementBinding::Transition { right_var, .. }, "right_var") => Some(right_var),
            (StatementBinding::Cell { right_ind, .. }, "right_ind") => Some(right_ind),
            (StatementBinding::Transition { right_lo, .. }, "right_lo") => Some(right_lo),
            (StatementBinding::Transition { right_hi, .. }, "right_hi") => Some(right_hi),
            _ => None,
        }
    }

    fn shape(&self) -> &'static str {
        match self {
            StatementBinding::Cell { .. } => "cell",
            StatementBinding::Transition { .. } => "transition",
        }
    }
}

pub const CATEGORIC_CELL: &str =
    "The presence of {left_var}={left_ind} is associated with {right_var}={right_ind}.";
pub const CATEGORIC_TRANSITION: &str = "The presence of {left_var}={left_ind} is associated with a shift of {right_var} from {right_lo} to {right_hi}.";
pub const SEQUENTIAL_CELL: &str =
    "As {left_var} reaches {left_ind}, {right_var} tends to be {right_ind}.";
pub const SEQUENTIAL_TRANSITION: &str =
    "As {left_var} reaches {left_ind}, {right_var} tends to shift from {right_lo} to {right_hi}.";
pub const DETERMINANT: &str = "The {right_var} is proportional to the level of {left_var}.";

pub fn default_template(kind: PropositionKind, binding: &StatementBinding<'_>) -> &'static str {
    match (kind, binding) {
        (PropositionKind::Categoric, StatementBinding::Cell { .. }) => CATEGORIC_CELL,
        (PropositionKind::Categoric, StatementBinding::Transition { .. }) => CATEGORIC_TRANSITION,
        (PropositionKind::Sequential, StatementBinding::Cell { .. }) => SEQUENTIAL_CELL,
        (PropositionKind::Sequential, StatementBinding::Transition { .. }) => SEQUENTIAL_TRANSITION,
        (PropositionKind::Determinant, _) => DETERMINANT,
    }
}

/// Fills the kind's default template, or `template_override` when given.
pub fn statement_for(
    binding: &StatementBinding<'_>,
    kind: PropositionKind,
    template_override: Option<&str>,
) -> Result<String> {
    let template = template_override.unwrap_or_else(|| default_template(kind, binding));
    let context = format!("a {kind} {}", binding.shape());
    template::render(template, &context, |name| binding.lookup(name))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Excluded {
    pub proposition: String,
    pub reason: String,
}

/// Partitions propositions by their strategic flag.
pub fn select_strategic(theory: &Theory) -> (Vec<&Proposition>, Vec<(&Proposition, String)>) {
    let mut strategic = Vec::new();
    let mut excluded = Vec::new();
    for p in &theory.propositions {
        if p.strategic {
            strategic.push(p);
        } else {
            excluded.push((p, "taxonomic".to_string()));
        }
    }
    (strategic, excluded)
}

fn label<'t>(theory: &'t Theory, construct: &str, variable: &'t str) -> &'t str {
    theory
        .variable(construct, variable)
        .map(|v| v.display_name())
        .unwrap_or(variable)
}

fn cell_record(cell: &HypothesisCell, kind: PropositionKind, theory: &Theory) -> RefinedHypothesis {
    let binding = StatementBinding::Cell {
        left_var: label(theory, &cell.left.construct, &cell.left.variable),
        left_ind: &cell.left.token,
        right_var: label(theory, &cell.right.construct, &cell.right.variable),
        right_ind: &cell.right.token,
    };
    let statement =
        statement_for(&binding, kind, None).expect("default cell templates are complete");
    RefinedHypothesis {
        id: cell.id.clone(),
        proposition: cell.proposition.clone(),
        kind,
        statement,
        constituent_cells: vec![cell.id.clone()],
        status: Status::Retained,
        rationale: None,
        expression: Implication {
            antecedent: Expr::atom(cell.left.key(), &cell.left.token),
            consequent: Expr::atom(cell.right.key(), &cell.right.token),
        },
        origin: Origin::Cell,
        refuted: None,
        note: None,
    }
}

/// One record per grid cell. When the left variable declares an absence
/// value and the proposition is categoric or sequential, cells binding that
/// value are pruned; every other cell stays a candidate.
pub fn prune_absence(grid: &HypothesisGrid, theory: &Theory) -> Vec<RefinedHypothesis> {
    let mut records: Vec<RefinedHypothesis> = grid
        .cells
        .iter()
        .map(|cell| cell_record(cell, grid.kind, theory))
        .collect();
    if grid.kind == PropositionKind::Determinant {
        return records;
    }
    let Some(left) = theory.variable(&grid.left.construct, &grid.left.variable) else {
        return records;
    };
    let Some(absence) = left.domain.absence.as_deref() else {
        return records;
    };
    for (record, cell) in records.iter_mut().zip(&grid.cells) {
        if cell.left.token == absence {
            record.set_status(
                Status::PrunedAbsence,
                format!(
                    "`{absence}` is the declared absence value of {}; a {} relation presumes it is present",
                    cell.left.key(),
                    grid.kind
                ),
            );
        }
    }
    records
}

/// Forms hypotheses from candidate cell records.
///
/// For each right variable (resolution order) and each left column (column
/// order): when the variable is ordered and the proposition is not
/// determinant, every pair of candidate cells at consecutive ordering
/// positions becomes one transition hypothesis and both cells are marked
/// `merged_away`; remaining candidates become single-cell hypotheses.
/// Hypotheses are numbered `H<n>.<k>` in that generation order.
pub fn merge_gradient(
    candidates: Vec<RefinedHypothesis>,
    grid: &HypothesisGrid,
    theory: &Theory,
) -> Result<Vec<RefinedHypothesis>> {
    let proposition = theory
        .proposition(&grid.proposition)
        .ok_or_else(|| Error::UnknownProposition(grid.proposition.clone()))?;
    let template_override = proposition.template_override.as_deref();
    let mut records: BTreeMap<&str, RefinedHypothesis> = BTreeMap::new();
    for r in candidates {
        if let Some(cell) = grid.cell(&r.id) {
            records.insert(cell.id.as_str(), r);
        }
    }
    let is_candidate = |records: &BTreeMap<&str, RefinedHypothesis>, id: &str| {
        records
            .get(id)
            .is_some_and(|r| r.origin == Origin::Cell && r.is_retained())
    };

    let left_var = label(theory, &grid.left.construct, &grid.left.variable);
    let mut formed: Vec<RefinedHypothesis> = Vec::new();
    let mut merged_into: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut promoted: Vec<String> = Vec::new();
    let next_id =
        |formed: &Vec<RefinedHypothesis>| format!("H{}.{}", grid.ordinal, formed.len() + 1);

    for (key, rows) in grid.row_blocks() {
        let variable = theory
            .variable(&key.construct, &key.variable)
            .ok_or_else(|| Error::Unresolved {
                name: format!("{}.{}", key.construct, key.variable),
            })?;
        let right_var = variable.display_name();
        let ordering = match (&variable.domain.ordering, grid.kind) {
            (_, PropositionKind::Determinant) => None,
            (Some(order), _) if order.len() >= 2 => Some(order),
            (None, PropositionKind::Sequential) if variable.domain.len() >= 2 => {
                return Err(Error::UnorderedVariable {
                    proposition: grid.proposition.clone(),
                    variable: format!("{}.{}", key.construct, key.variable),
                })
            }
            _ => None,
        };

        for column in 0..grid.columns.len() {
            let block: Vec<&HypothesisCell> = rows
                .clone()
                .filter_map(|r| grid.at(r, column))
                .filter(|c| is_candidate(&records, &c.id))
                .collect();
            if block.is_empty() {
                continue;
            }
            let left_token = &block[0].left.token;
            let mut merged_here: Vec<&str> = Vec::new();

            if let Some(order) = ordering {
                let by_token = |t: &str| block.iter().find(|c| c.right.token == t).copied();
                for pair in order.windows(2) {
                    let (Some(lo), Some(hi)) = (by_token(&pair[0]), by_token(&pair[1])) else {
                        continue;
                    };
                    let binding = StatementBinding::Transition {
                        left_var,
                        left_ind: left_token,
                        right_var,
                        right_lo: &lo.right.token,
                        right_hi: &hi.right.token,
                    };
                    let id = next_id(&formed);
                    let mut cells = [lo, hi];
                    cells.sort_by_key(|c| (c.row, c.column));
                    formed.push(RefinedHypothesis {
                        id: id.clone(),
                        proposition: grid.proposition.clone(),
                        kind: grid.kind,
                        statement: statement_for(&binding, grid.kind, template_override)?,
                        constituent_cells: cells.iter().map(|c| c.id.clone()).collect(),
                        status: Status::Retained,
                        rationale: None,
                        expression: Implication {
                            antecedent: Expr::atom(lo.left.key(), left_token),
                            consequent: Expr::And(vec![
                                Expr::atom(lo.right.key(), &lo.right.token),
                                Expr::atom(hi.right.key(), &hi.right.token),
                            ]),
                        },
                        origin: Origin::Transition,
                        refuted: None,
                        note: None,
                    });
                    for c in [lo, hi] {
                        merged_into
                            .entry(c.id.clone())
                            .or_default()
                            .push(id.clone());
                        merged_here.push(&c.id);
                    }
                }
            }

            for cell in block
                .iter()
                .filter(|c| !merged_here.contains(&c.id.as_str()))
            {
                let binding = StatementBinding::Cell {
                    left_var,
                    left_ind: left_token,
                    right_var,
                    right_ind: &cell.right.token,
                };
                let note = (grid.kind == PropositionKind::Determinant).then(|| {
                    "determinant relation: no grid-reduction rule applies; cell retained"
                        .to_string()
                });
                formed.push(RefinedHypothesis {
                    id: next_id(&formed),
                    proposition: grid.proposition.clone(),
                    kind: grid.kind,
                    statement: statement_for(&binding, grid.kind, template_override)?,
                    constituent_cells: vec![cell.id.clone()],
                    status: Status::Retained,
                    rationale: None,
                    expression: records[cell.id.as_str()].expression.clone(),
                    origin: Origin::Single,
                    refuted: None,
                    note,
                });
                promoted.push(cell.id.clone());
            }
        }
    }

    for (cell, into) in &merged_into {
        if let Some(r) = records.get_mut(cell.as_str()) {
            r.set_status(
                Status::MergedAway,
                format!("merged into {} (gradient transition)", into.join(", ")),
            );
        }
    }
    for cell in &promoted {
        records.remove(cell.as_str());
    }

    let mut leftover: Vec<RefinedHypothesis> = records.into_values().collect();
    leftover.sort_by_key(|r| grid.cells.iter().position(|c| c.id == r.id));
    formed.extend(leftover);
    Ok(formed)
}

/// Splits a hypothesis whose antecedent is a disjunction into one
/// hypothesis per disjunct (nested ORs flattened). The original is kept,
/// marked `decomposed_away`. Conjunctions are never split.
pub fn decompose_compound(hypothesis: RefinedHypothesis) -> Vec<RefinedHypothesis> {
    let Some(disjuncts) = hypothesis.expression.antecedent.disjuncts() else {
        return vec![hypothesis];
    };
    let children: Vec<RefinedHypothesis> = disjuncts
        .into_iter()
        .enumerate()
        .map(|(i, antecedent)| {
            let expression = Implication {
                antecedent,
                consequent: hypothesis.expression.consequent.clone(),
            };
            RefinedHypothesis {
                id: format!("{}.{}", hypothesis.id, i + 1),
                proposition: hypothesis.proposition.clone(),
                kind: hypothesis.kind,
                statement: format!("{expression}."),
                constituent_cells: hypothesis.constituent_cells.clone(),
                status: Status::Retained,
                rationale: None,
                expression,
                origin: Origin::Disjunct,
                refuted: None,
                note: None,
            }
        })
        .collect();
    let mut parent = hypothesis;
    let ids: Vec<&str> = children.iter().map(|c| c.id.as_str()).collect();
    parent.set_status(
        Status::DecomposedAway,
        format!("disjunctive antecedent split into {}", ids.join(", ")),
    );
    let mut out = vec![parent];
    out.extend(children);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditEntry {
    pub line: usize,
    pub rule: String,
    pub action: Action,
    /// Hypotheses for which this rule was the first match.
    pub matched: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Review {
    pub hypotheses: Vec<RefinedHypothesis>,
    pub audit: Vec<AuditEntry>,
}

struct ResolvedAtom {
    construct: String,
    variable: String,
    token: String,
}

enum Matcher<'a> {
    Cell(&'a str),
    Hypothesis(&'a str),
    Predicate(&'a str, Vec<ResolvedAtom>),
}

fn review_error(rule: &ReviewRule, message: String) -> Error {
    Error::Review {
        line: rule.line,
        message,
    }
}

fn resolve_atoms(
    rule: &ReviewRule,
    grid: &HypothesisGrid,
    theory: &Theory,
    atoms: &[PredicateAtom],
) -> Result<Vec<ResolvedAtom>> {
    let mut bound: Vec<(&str, &str)> = vec![(&grid.left.construct, &grid.left.variable)];
    for (key, _) in grid.row_blocks() {
        if let Some(v) = theory.variable(&key.construct, &key.variable) {
            let c = theory
                .construct(&key.construct)
                .expect("variable implies construct");
            bound.push((&c.name, &v.name));
        }
    }
    atoms
        .iter()
        .map(|atom| {
            let candidates: Vec<&(&str, &str)> = bound
                .iter()
                .filter(|(c, v)| {
                    *v == atom.variable && atom.construct.as_deref().is_none_or(|ac| ac == *c)
                })
                .collect();
            let (construct, variable) = match candidates.as_slice() {
                [one] => **one,
                [] => {
                    return Err(review_error(
                        rule,
                        format!("`{atom}` does not name a variable of {}", grid.proposition),
                    ))
                }
                _ => {
                    return Err(review_error(
                        rule,
                        format!(
                            "`{atom}` is ambiguous in {}; qualify it as Construct.variable",
                            grid.proposition
                        ),
                    ))
                }
            };
            let domain = &theory.variable(construct, variable).expect("bound").domain;
            if !domain.contains(&atom.token) {
                return Err(review_error(
                    rule,
                    format!(
                        "`{}` is not an indicator of {construct}.{variable}",
                        atom.token
                    ),
                ));
            }
            Ok(ResolvedAtom {
                construct: construct.to_string(),
                variable: variable.to_string(),
                token: atom.token.clone(),
            })
        })
        .collect()
}

/// Applies review rules to the retained hypotheses. For each hypothesis the
/// first matching rule in file order decides: `prune` marks it
/// `pruned_abductive`, `refute` annotates it, `retain` keeps it and shields
/// it from later rules.
pub fn abductive_review(
    hypotheses: Vec<RefinedHypothesis>,
    rules: &[ReviewRule],
    theory: &Theory,
    grids: &[HypothesisGrid],
) -> Result<Review> {
    let find_cell = |id: &str| grids.iter().find_map(|g| g.cell(id));
    let mut matchers = Vec::with_capacity(rules.len());
    for rule in rules {
        let matcher = match &rule.target {
            Target::Cell { id } => {
                if find_cell(id).is_none() {
                    return Err(review_error(rule, format!("unknown cell `{id}`")));
                }
                Matcher::Cell(id)
            }
            Target::Hypothesis { id } => {
                if !hypotheses.iter().any(|h| &h.id == id) {
                    return Err(review_error(rule, format!("unknown hypothesis `{id}`")));
                }
                Matcher::Hypothesis(id)
            }
            Target::Predicate { proposition, atoms } => {
                let grid = grids
                    .iter()
                    .find(|g| &g.proposition == proposition)
                    .ok_or_else(|| {
                        review_error(
                            rule,
                            format!("no hypothesis grid for proposition `{proposition}`"),
                        )
                    })?;
                Matcher::Predicate(proposition, resolve_atoms(rule, grid, theory, atoms)?)
            }
        };
        matchers.push(matcher);
    }

    let matches = |m: &Matcher<'_>, h: &RefinedHypothesis| match m {
        Matcher::Cell(id) => h.constituent_cells.iter().any(|c| c == id),
        Matcher::Hypothesis(id) => h.id == *id,
        Matcher::Predicate(proposition, atoms) => {
            h.proposition == *proposition
                && h.constituent_cells
                    .iter()
                    .filter_map(|id| find_cell(id))
                    .any(|cell| {
                        atoms.iter().all(|a| {
                            cell.bindings()
                                .iter()
                                .any(|b| b.is_of(&a.construct, &a.variable) && b.token == a.token)
                        })
                    })
        }
    };

    let mut audit: Vec<AuditEntry> = rules
        .iter()
        .map(|r| AuditEntry {
            line: r.line,
            rule: r.to_string(),
            action: r.action,
            matched: Vec::new(),
        })
        .collect();
    let mut hypotheses = hypotheses;
    for h in hypotheses.iter_mut().filter(|h| h.is_retained()) {
        let Some(index) = matchers.iter().position(|m| matches(m, h)) else {
            continue;
        };
        let rule = &rules[index];
        audit[index].matched.push(h.id.clone());
        match rule.action {
            Action::Prune => h.set_status(Status::PrunedAbductive, rule.reason.clone()),
            Action::Refute => h.refuted = Some(rule.reason.clone()),
            Action::Retain => {}
        }
    }
    Ok(Review { hypotheses, audit })
}

/// Terminal bucket of one enumerated cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CellFate {
    Retained,
    PrunedAbsence,
    PrunedAbductive,
    MergedAway,
}

/// Output of the full pipeline over a theory.
#[derive(Debug, Clone, Serialize)]
pub struct Refinement {
    pub theory: String,
    pub excluded: Vec<Excluded>,
    pub grids: Vec<HypothesisGrid>,
    pub hypotheses: Vec<RefinedHypothesis>,
    pub audit: Vec<AuditEntry>,
    /// Retained hypotheses before the review rules were applied.
    pub candidates_before_review: usize,
}

impl Refinement {
    pub fn hypothesis(&self, id: &str) -> Option<&RefinedHypothesis> {
        self.hypotheses.iter().find(|h| h.id == id)
    }

    pub fn grid(&self, proposition: &str) -> Option<&HypothesisGrid> {
        self.grids.iter().find(|g| g.proposition == proposition)
    }

    pub fn cell(&self, id: &str) -> Option<&HypothesisCell> {
        self.grids.iter().find_map(|g| g.cell(id))
    }

    pub fn cell_count(&self) -> usize {
        self.grids.iter().map(|g| g.cells.len()).sum()
    }

    /// Hypothesis-level records (transition, single and disjunct).
    pub fn formed(&self) -> impl Iterator<Item = &RefinedHypothesis> {
        self.hypotheses.iter().filter(|h| h.origin != Origin::Cell)
    }

    pub fn retained(&self) -> impl Iterator<Item = &RefinedHypothesis> {
        self.formed().filter(|h| h.is_retained())
    }

    pub fn status_counts(&self) -> BTreeMap<Status, usize> {
        let mut counts: BTreeMap<Status, usize> = Status::ALL.iter().map(|s| (*s, 0)).collect();
        for h in self.formed() {
            *counts.entry(h.status).or_default() += 1;
        }
        counts
    }

    /// The terminal bucket of every enumerated cell, in grid order. `None`
    /// marks a cell no record accounts for, which would be a pipeline bug.
    pub fn cell_fates(&self) -> Vec<(String, Option<CellFate>)> {
        let mut out = Vec::with_capacity(self.cell_count());
        for cell in self.grids.iter().flat_map(|g| &g.cells) {
            let record = self
                .hypotheses
                .iter()
                .find(|h| h.origin == Origin::Cell && h.id == cell.id);
            let fate = match record.map(|r| r.status) {
                Some(Status::PrunedAbsence) => Some(CellFate::PrunedAbsence),
                Some(Status::MergedAway) => Some(CellFate::MergedAway),
                Some(Status::PrunedAbductive) => Some(CellFate::PrunedAbductive),
                Some(Status::Retained) => Some(CellFate::Retained),
                Some(Status::DecomposedAway) => None,
                None => {
                    let holders: Vec<&RefinedHypothesis> = self
                        .formed()
                        .filter(|h| h.status != Status::DecomposedAway)
                        .filter(|h| h.constituent_cells.contains(&cell.id))
                        .collect();
                    if holders.iter().any(|h| h.is_retained()) {
                        Some(CellFate::Retained)
                    } else if holders.iter().any(|h| h.status == Status::PrunedAbductive) {
                        Some(CellFate::PrunedAbductive)
                    } else {
                        None
                    }
                }
            };
            out.push((cell.id.clone(), fate));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("refinement serialization cannot fail")
    }
}

/// Runs the whole reduction over every strategic proposition.
pub fn refine(theory: &Theory, rules: &[ReviewRule]) -> Result<Refinement> {
    let (_, excluded) = select_strategic(theory);
    let enumeration = enumerate_all(theory);
    if let Some((_, error)) = enumeration.errors.into_iter().next() {
        return Err(error);
    }
    let mut hypotheses = Vec::new();
    for grid in &enumeration.grids {
        let candidates = prune_absence(grid, theory);
        for h in merge_gradient(candidates, grid, theory)? {
            if h.is_retained() && h.origin != Origin::Cell {
                hypotheses.extend(decompose_compound(h));
            } else {
                hypotheses.push(h);
            }
        }
    }
    let candidates_before_review = hypotheses
        .iter()
        .filter(|h| h.is_retained() && h.origin != Origin::Cell)
        .count();
    let review = abductive_review(hypotheses, rules, theory, &enumeration.grids)?;
    Ok(Refinement {
        theory: theory.name.clone(),
        excluded: excluded
            .into_iter()
            .map(|(p, reason)| Excluded {
                proposition: p.id.clone(),
                reason,
            })
            .collect(),
        grids: enumeration.grids,
        hypotheses: review.hypotheses,
        audit: review.audit,
        candidates_before_review,
    })
}
